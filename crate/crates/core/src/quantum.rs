//! Two-qubit states and the measurement strategies acting on them.
//!
//! A measurement strategy is realised as a labelled Kraus set. Weak
//! measurements use two Kraus operators, probabilistic-projective (PPM)
//! measurements use three, with the identity branch pooled into the "+1"
//! outcome. The pooling matters: the downstream statistics depend on it.

use std::fmt;

use crate::linalg::{hermitian_eigenvalues, CMatrix, C64, HERMITICITY_TOL};
use crate::{Error, Result};

/// Measurement basis. Z is the computational basis, X its Fourier conjugate;
/// every cross overlap between their eigenvectors has |<mu|nu>|^2 = 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// Projectors onto the +1 / -1 eigenvectors.
    pub fn projectors(self) -> (CMatrix, CMatrix) {
        match self {
            Basis::Z => (
                CMatrix::from_real_2x2(1.0, 0.0, 0.0, 0.0),
                CMatrix::from_real_2x2(0.0, 0.0, 0.0, 1.0),
            ),
            Basis::X => (
                CMatrix::from_real_2x2(0.5, 0.5, 0.5, 0.5),
                CMatrix::from_real_2x2(0.5, -0.5, -0.5, 0.5),
            ),
        }
    }

    pub fn sigma(self) -> CMatrix {
        match self {
            Basis::Z => CMatrix::from_real_2x2(1.0, 0.0, 0.0, -1.0),
            Basis::X => CMatrix::from_real_2x2(0.0, 1.0, 1.0, 0.0),
        }
    }
}

/// Dichotomic measurement outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Plus => write!(f, "+1"),
            Outcome::Minus => write!(f, "-1"),
        }
    }
}

/// Which qubit an observer acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    Projective,
    Weak,
    Ppm,
}

/// A parameterised single-qubit measurement.
///
/// `gain` is the information-gain parameter: the sharpness eta for weak
/// measurements, the projection probability alpha for PPM, and fixed at 1
/// for projective measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementStrategy {
    pub kind: StrategyKind,
    pub basis: Basis,
    pub gain: f64,
}

impl MeasurementStrategy {
    pub fn new(kind: StrategyKind, basis: Basis, gain: f64) -> Result<Self> {
        let gain = match kind {
            StrategyKind::Projective => 1.0,
            _ => gain,
        };
        if !(gain > 0.0 && gain <= 1.0) || !gain.is_finite() {
            return Err(Error::OutOfRange {
                name: "gain",
                value: gain,
                domain: "(0, 1]",
            });
        }
        Ok(Self { kind, basis, gain })
    }

    pub fn projective(basis: Basis) -> Self {
        Self {
            kind: StrategyKind::Projective,
            basis,
            gain: 1.0,
        }
    }

    pub fn weak(basis: Basis, eta: f64) -> Result<Self> {
        Self::new(StrategyKind::Weak, basis, eta)
    }

    pub fn ppm(basis: Basis, alpha: f64) -> Result<Self> {
        Self::new(StrategyKind::Ppm, basis, alpha)
    }

    /// How much of the state survives undisturbed: sqrt(1 - eta^2) for weak,
    /// 1 - alpha for PPM, 0 for projective.
    pub fn disturbance_factor(&self) -> f64 {
        match self.kind {
            StrategyKind::Projective => 0.0,
            StrategyKind::Weak => (1.0 - self.gain * self.gain).max(0.0).sqrt(),
            StrategyKind::Ppm => 1.0 - self.gain,
        }
    }
}

/// Labelled Kraus operators realising a strategy.
#[derive(Clone, Debug)]
pub struct KrausSet {
    ops: Vec<(CMatrix, Outcome)>,
}

impl KrausSet {
    pub fn operators(&self) -> &[(CMatrix, Outcome)] {
        &self.ops
    }

    /// Max entrywise |sum K†K - I|.
    pub fn completeness_defect(&self) -> f64 {
        let mut sum = CMatrix::zeros(2, 2);
        for (k, _) in &self.ops {
            sum = sum.add(&k.dagger().matmul(k).unwrap()).unwrap();
        }
        sum.max_abs_diff(&CMatrix::identity(2))
    }
}

/// Two-outcome POVM effects of a Kraus set.
#[derive(Clone, Debug)]
pub struct EffectPair {
    pub plus: CMatrix,
    pub minus: CMatrix,
}

impl EffectPair {
    pub fn effect(&self, outcome: Outcome) -> &CMatrix {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }
}

/// Validated two-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::DimMismatch(m.rows(), m.cols(), 4, 4));
        }
        let defect = m.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let m = m.hermitize();
        let tr = m.trace()?;
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "trace = {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eigs = hermitian_eigenvalues(&m)?;
        if eigs[0] < -1e-10 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                eigs[0]
            )));
        }
        Ok(Self { m })
    }

    pub fn mat(&self) -> &CMatrix {
        &self.m
    }
}

/// rho = |psi><psi| with |psi> = cos(theta)|00> + sin(theta)|11>.
pub fn state_from_theta(theta: f64) -> Result<DensityMatrix> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            domain: "[0, pi/2]",
        });
    }
    let c = theta.cos();
    let s = theta.sin();
    let mut m = CMatrix::zeros(4, 4);
    m.set(0, 0, C64::new(c * c, 0.0));
    m.set(0, 3, C64::new(c * s, 0.0));
    m.set(3, 0, C64::new(c * s, 0.0));
    m.set(3, 3, C64::new(s * s, 0.0));
    DensityMatrix::new(m)
}

/// Kraus realisation of a strategy.
///
/// Weak: K+ = sqrt((1+eta)/2) P+ + sqrt((1-eta)/2) P-, K- with the weights
/// swapped. PPM: K1 = sqrt(alpha) P+, K2 = sqrt(alpha) P-, K3 = sqrt(1-alpha) I,
/// with K1 and K3 labelled "+1" and K2 labelled "-1".
pub fn kraus_for(strategy: &MeasurementStrategy) -> KrausSet {
    let (p_plus, p_minus) = strategy.basis.projectors();
    let g = strategy.gain;
    let ops = match strategy.kind {
        StrategyKind::Projective => vec![(p_plus, Outcome::Plus), (p_minus, Outcome::Minus)],
        StrategyKind::Weak => {
            let hi = ((1.0 + g) / 2.0).sqrt();
            let lo = ((1.0 - g) / 2.0).sqrt();
            let k_plus = p_plus.scale(hi).add(&p_minus.scale(lo)).unwrap();
            let k_minus = p_plus.scale(lo).add(&p_minus.scale(hi)).unwrap();
            vec![(k_plus, Outcome::Plus), (k_minus, Outcome::Minus)]
        }
        StrategyKind::Ppm => {
            let root = g.sqrt();
            let keep = (1.0 - g).max(0.0).sqrt();
            vec![
                (p_plus.scale(root), Outcome::Plus),
                (p_minus.scale(root), Outcome::Minus),
                (CMatrix::identity(2).scale(keep), Outcome::Plus),
            ]
        }
    };
    KrausSet { ops }
}

/// POVM effects: E(o) = sum over Kraus operators labelled o of K†K.
pub fn effects_of(kraus: &KrausSet) -> EffectPair {
    let mut plus = CMatrix::zeros(2, 2);
    let mut minus = CMatrix::zeros(2, 2);
    for (k, label) in &kraus.ops {
        let e = k.dagger().matmul(k).unwrap();
        match label {
            Outcome::Plus => plus = plus.add(&e).unwrap(),
            Outcome::Minus => minus = minus.add(&e).unwrap(),
        }
    }
    EffectPair { plus, minus }
}

/// Lifts a single-qubit operator to the two-qubit space.
pub fn lift(op: &CMatrix, side: Side) -> CMatrix {
    let id = CMatrix::identity(2);
    match side {
        Side::A => op.kron(&id),
        Side::B => id.kron(op),
    }
}

/// Selective update for one outcome: sum over the Kraus branches carrying that
/// label of (K x I) rho (K x I)†. Returns the unnormalized matrix and its
/// trace, which is the outcome probability.
pub fn apply_outcome(
    rho: &DensityMatrix,
    kraus: &KrausSet,
    label: Outcome,
    side: Side,
) -> (CMatrix, f64) {
    apply_outcome_mat(rho.mat(), kraus, label, side)
}

/// Same as [`apply_outcome`] on a raw (possibly unnormalized) matrix.
pub fn apply_outcome_mat(
    rho: &CMatrix,
    kraus: &KrausSet,
    label: Outcome,
    side: Side,
) -> (CMatrix, f64) {
    let mut out = CMatrix::zeros(4, 4);
    for (k, l) in &kraus.ops {
        if *l != label {
            continue;
        }
        let big = lift(k, side);
        let term = big.matmul(rho).unwrap().matmul(&big.dagger()).unwrap();
        out = out.add(&term).unwrap();
    }
    let p = out.trace().unwrap().re;
    (out, p)
}

/// Outcome-averaged (non-selective) channel: sum over all Kraus branches.
/// Trace preserving and Hermiticity preserving.
pub fn unread_channel(rho: &DensityMatrix, kraus: &KrausSet, side: Side) -> Result<DensityMatrix> {
    DensityMatrix::new(unread_channel_mat(rho.mat(), kraus, side))
}

pub fn unread_channel_mat(rho: &CMatrix, kraus: &KrausSet, side: Side) -> CMatrix {
    let mut out = CMatrix::zeros(4, 4);
    for (k, _) in &kraus.ops {
        let big = lift(k, side);
        let term = big.matmul(rho).unwrap().matmul(&big.dagger()).unwrap();
        out = out.add(&term).unwrap();
    }
    out
}

/// Tr[rho^2].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.mat().matmul(rho.mat()).unwrap().trace().unwrap().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use std::f64::consts::FRAC_PI_4;

    fn bell() -> DensityMatrix {
        state_from_theta(FRAC_PI_4).unwrap()
    }

    fn random_state(rng: &mut SplitMix64) -> DensityMatrix {
        // G G† / tr, Ginibre-style
        let data: Vec<C64> = (0..16)
            .map(|_| C64::new(rng.next_f64() * 2.0 - 1.0, rng.next_f64() * 2.0 - 1.0))
            .collect();
        let g = CMatrix::new(4, 4, data).unwrap();
        let p = g.matmul(&g.dagger()).unwrap();
        let tr = p.trace().unwrap().re;
        DensityMatrix::new(p.scale(1.0 / tr)).unwrap()
    }

    #[test]
    fn state_from_theta_cases() {
        let zero = state_from_theta(0.0).unwrap();
        assert!((zero.mat().get(0, 0).re - 1.0).abs() < 1e-15);
        for (i, j) in [(0, 3), (3, 0), (3, 3)] {
            assert!(zero.mat().get(i, j).norm() < 1e-15);
        }

        let b = bell();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((b.mat().get(i, j).re - 0.5).abs() < 1e-15);
        }

        let t = state_from_theta(std::f64::consts::FRAC_PI_6).unwrap();
        assert!((t.mat().get(0, 0).re - 0.75).abs() < 1e-15);
        assert!((t.mat().get(3, 3).re - 0.25).abs() < 1e-15);
        assert!((t.mat().get(0, 3).re - 3f64.sqrt() / 4.0).abs() < 1e-15);

        assert!(state_from_theta(-0.1).is_err());
        assert!(state_from_theta(2.0).is_err());
    }

    #[test]
    fn strong_weak_limit_is_projective() {
        let s = MeasurementStrategy::weak(Basis::Z, 1.0).unwrap();
        let k = kraus_for(&s);
        let (p_plus, p_minus) = Basis::Z.projectors();
        assert!(k.operators()[0].0.max_abs_diff(&p_plus) < 1e-15);
        assert!(k.operators()[1].0.max_abs_diff(&p_minus) < 1e-15);
    }

    #[test]
    fn weak_and_ppm_effects() {
        let eta = 0.6;
        let e = effects_of(&kraus_for(
            &MeasurementStrategy::weak(Basis::Z, eta).unwrap(),
        ));
        let expect = CMatrix::from_real_diag(&[(1.0 + eta) / 2.0, (1.0 - eta) / 2.0]);
        assert!(e.plus.max_abs_diff(&expect) < 1e-15);

        let alpha = 0.4;
        let f = effects_of(&kraus_for(
            &MeasurementStrategy::ppm(Basis::Z, alpha).unwrap(),
        ));
        assert!(
            f.plus
                .max_abs_diff(&CMatrix::from_real_diag(&[1.0, 1.0 - alpha]))
                < 1e-15
        );
        assert!(
            f.minus
                .max_abs_diff(&CMatrix::from_real_diag(&[0.0, alpha]))
                < 1e-15
        );

        // PPM(X, 0.4): minus = alpha |nu-><nu-|
        let fx = effects_of(&kraus_for(
            &MeasurementStrategy::ppm(Basis::X, alpha).unwrap(),
        ));
        let (_, nu_minus) = Basis::X.projectors();
        assert!(fx.minus.max_abs_diff(&nu_minus.scale(alpha)) < 1e-15);

        // Weak(X, 0.5): plus has eigenvalues 0.75 / 0.25
        let ex = effects_of(&kraus_for(
            &MeasurementStrategy::weak(Basis::X, 0.5).unwrap(),
        ));
        let eigs = hermitian_eigenvalues(&ex.plus).unwrap();
        assert!((eigs[0] - 0.25).abs() < 1e-14 && (eigs[1] - 0.75).abs() < 1e-14);

        // Projective(X): plus = |nu+><nu+|
        let pp = effects_of(&kraus_for(&MeasurementStrategy::projective(Basis::X)));
        let (nu_plus, _) = Basis::X.projectors();
        assert!(pp.plus.max_abs_diff(&nu_plus) < 1e-15);
    }

    #[test]
    fn completeness_on_gain_grid() {
        for i in 0..=100 {
            let g = (i as f64 + 1.0) / 101.0;
            for basis in [Basis::Z, Basis::X] {
                for kind in [StrategyKind::Weak, StrategyKind::Ppm] {
                    let s = MeasurementStrategy::new(kind, basis, g).unwrap();
                    let k = kraus_for(&s);
                    assert!(k.completeness_defect() < 1e-12);
                    let e = effects_of(&k);
                    for eff in [&e.plus, &e.minus] {
                        let eigs = hermitian_eigenvalues(eff).unwrap();
                        assert!(eigs[0] >= -1e-12, "effect not PSD at g={g}");
                    }
                    assert!(
                        e.plus
                            .add(&e.minus)
                            .unwrap()
                            .max_abs_diff(&CMatrix::identity(2))
                            < 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn gain_domain_enforced() {
        assert!(MeasurementStrategy::weak(Basis::Z, 0.0).is_err());
        assert!(MeasurementStrategy::weak(Basis::Z, 1.0 + 1e-9).is_err());
        assert!(MeasurementStrategy::ppm(Basis::X, -0.5).is_err());
    }

    #[test]
    fn projective_born_rule_on_bell() {
        let k = kraus_for(&MeasurementStrategy::projective(Basis::Z));
        let (post, p) = apply_outcome(&bell(), &k, Outcome::Plus, Side::A);
        assert!((p - 0.5).abs() < 1e-14);
        let normalized = post.scale(1.0 / p);
        let mut expect = CMatrix::zeros(4, 4);
        expect.set(0, 0, C64::new(1.0, 0.0));
        assert!(normalized.max_abs_diff(&expect) < 1e-14);

        // definite state: probability 1, state unchanged
        let zero = state_from_theta(0.0).unwrap();
        let (post, p) = apply_outcome(&zero, &k, Outcome::Plus, Side::A);
        assert!((p - 1.0).abs() < 1e-14);
        assert!(post.max_abs_diff(zero.mat()) < 1e-14);
    }

    #[test]
    fn weak_outcome_probability_on_bell() {
        let k = kraus_for(&MeasurementStrategy::weak(Basis::Z, 0.8).unwrap());
        let (_, p_plus) = apply_outcome(&bell(), &k, Outcome::Plus, Side::A);
        let (_, p_minus) = apply_outcome(&bell(), &k, Outcome::Minus, Side::A);
        assert!((p_plus - 0.5).abs() < 1e-14);
        assert!((p_plus + p_minus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unread_channel_disturbance_law() {
        let b = bell();
        for i in 0..20 {
            let g = (i as f64 + 1.0) / 20.0;
            for (kind, expect_f) in [
                (StrategyKind::Weak, (1.0 - g * g).max(0.0).sqrt()),
                (StrategyKind::Ppm, 1.0 - g),
            ] {
                let s = MeasurementStrategy::new(kind, Basis::Z, g).unwrap();
                let out = unread_channel(&b, &kraus_for(&s), Side::A).unwrap();
                // coherence |00><11| scaled by F, diagonals untouched
                let scale = out.mat().get(0, 3).re / b.mat().get(0, 3).re;
                assert!((scale - expect_f).abs() < 1e-12, "kind {kind:?} g {g}");
                assert!((out.mat().get(0, 0).re - 0.5).abs() < 1e-13);
                assert!((s.disturbance_factor() - expect_f).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn unread_channel_preserves_trace_and_positivity() {
        let mut rng = SplitMix64::new(33);
        for _ in 0..40 {
            let rho = random_state(&mut rng);
            let s = MeasurementStrategy::weak(Basis::X, rng.open_closed(0.0, 1.0)).unwrap();
            let out = unread_channel(&rho, &kraus_for(&s), Side::B).unwrap();
            let tr = out.mat().trace().unwrap();
            assert!((tr.re - 1.0).abs() < 1e-13 && tr.im.abs() < 1e-13);
            let eigs = hermitian_eigenvalues(out.mat()).unwrap();
            assert!(eigs[0] >= -1e-10);
        }
    }

    #[test]
    fn unread_commutes_with_same_basis_projective_statistics() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..30 {
            let rho = random_state(&mut rng);
            let eta = rng.open_closed(0.0, 1.0);
            for basis in [Basis::Z, Basis::X] {
                let weak = kraus_for(&MeasurementStrategy::weak(basis, eta).unwrap());
                let proj = effects_of(&kraus_for(&MeasurementStrategy::projective(basis)));
                let after = unread_channel(&rho, &weak, Side::A).unwrap();
                for o in Outcome::BOTH {
                    let e = lift(proj.effect(o), Side::A);
                    let p0 = e.matmul(rho.mat()).unwrap().trace().unwrap().re;
                    let p1 = e.matmul(after.mat()).unwrap().trace().unwrap().re;
                    assert!((p0 - p1).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn purity_cases() {
        assert!((purity(&bell()) - 1.0).abs() < 1e-13);
        let uniform = DensityMatrix::new(CMatrix::identity(4).scale(0.25)).unwrap();
        assert!((purity(&uniform) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn density_matrix_validation() {
        // trace != 1
        assert!(DensityMatrix::new(CMatrix::identity(4)).is_err());
        // negative eigenvalue
        let m = CMatrix::from_real_diag(&[1.5, -0.5, 0.0, 0.0]);
        assert!(DensityMatrix::new(m).is_err());
    }
}
