//! Sequential measurement pipelines and their outcome statistics.
//!
//! A scenario is a pair of observer chains acting on the two qubits. Setting
//! m = 1 measures in the Z basis, m = 2 in the X basis. Intermediate
//! observers pick a setting with unbiased probability 1/2 and their outcomes
//! are not conditioned on downstream, so for later pairs they act as the
//! half/half mixture of their two unread channels.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::CMatrix;
use crate::quantum::{
    apply_outcome_mat, effects_of, kraus_for, lift, state_from_theta, unread_channel_mat, Basis,
    DensityMatrix, MeasurementStrategy, Outcome, Side, StrategyKind,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Intermediate,
    Final,
}

/// One observer in a chain, with one strategy per setting.
/// `settings[0]` is the Z-basis choice (m = 1), `settings[1]` the X-basis
/// choice (m = 2).
#[derive(Clone, Debug)]
pub struct ObserverSpec {
    pub side: Side,
    pub index: usize,
    pub role: Role,
    pub settings: [MeasurementStrategy; 2],
}

impl ObserverSpec {
    pub fn id(&self) -> ObserverId {
        ObserverId {
            side: self.side,
            index: self.index,
        }
    }

    pub fn strategy(&self, m: usize) -> Result<&MeasurementStrategy> {
        match m {
            1 => Ok(&self.settings[0]),
            2 => Ok(&self.settings[1]),
            _ => Err(Error::OutOfRange {
                name: "setting",
                value: m as f64,
                domain: "{1, 2}",
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.settings[0].basis != Basis::Z || self.settings[1].basis != Basis::X {
            return Err(Error::InvalidScenario(format!(
                "observer {} must measure Z for setting 1 and X for setting 2",
                self.id()
            )));
        }
        match self.role {
            Role::Final => {
                if self
                    .settings
                    .iter()
                    .any(|s| s.kind != StrategyKind::Projective)
                {
                    return Err(Error::InvalidScenario(format!(
                        "final observer {} must use projective strategies",
                        self.id()
                    )));
                }
            }
            Role::Intermediate => {
                let kind = self.settings[0].kind;
                if kind == StrategyKind::Projective || self.settings[1].kind != kind {
                    return Err(Error::InvalidScenario(format!(
                        "intermediate observer {} must use weak or PPM with one kind for both settings",
                        self.id()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ObserverId {
    pub side: Side,
    pub index: usize,
}

impl fmt::Display for ObserverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::A => 'A',
            Side::B => 'B',
        };
        write!(f, "{}{}", s, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioTag {
    Unilateral,
    Bilateral,
}

impl fmt::Display for ScenarioTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioTag::Unilateral => write!(f, "unilateral"),
            ScenarioTag::Bilateral => write!(f, "bilateral"),
        }
    }
}

/// Immutable description of a full sequential-measurement experiment.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    theta: f64,
    chain_a: Vec<ObserverSpec>,
    chain_b: Vec<ObserverSpec>,
    tag: ScenarioTag,
}

impl ScenarioConfig {
    /// Generic constructor; validates chain shape and the tag invariants.
    pub fn new(
        theta: f64,
        chain_a: Vec<ObserverSpec>,
        chain_b: Vec<ObserverSpec>,
        tag: ScenarioTag,
    ) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                domain: "[0, pi/2]",
            });
        }
        for (side, chain) in [(Side::A, &chain_a), (Side::B, &chain_b)] {
            if chain.is_empty() {
                return Err(Error::InvalidScenario("empty observer chain".into()));
            }
            for (i, obs) in chain.iter().enumerate() {
                if obs.side != side || obs.index != i + 1 {
                    return Err(Error::InvalidScenario(format!(
                        "observer {} out of place in chain {:?}",
                        obs.id(),
                        side
                    )));
                }
                let expect_role = if i + 1 == chain.len() {
                    Role::Final
                } else {
                    Role::Intermediate
                };
                if obs.role != expect_role {
                    return Err(Error::InvalidScenario(format!(
                        "observer {} must be {:?}",
                        obs.id(),
                        expect_role
                    )));
                }
                obs.validate()?;
            }
        }
        match tag {
            ScenarioTag::Unilateral => {
                if chain_a.len() != 2 || chain_b.len() != 1 {
                    return Err(Error::InvalidScenario(
                        "unilateral scenario needs chains of length 2 (A) and 1 (B)".into(),
                    ));
                }
            }
            ScenarioTag::Bilateral => {
                if chain_a.len() != 2 || chain_b.len() != 2 {
                    return Err(Error::InvalidScenario(
                        "bilateral scenario needs chains of length 2 on both sides".into(),
                    ));
                }
            }
        }
        Ok(Self {
            theta,
            chain_a,
            chain_b,
            tag,
        })
    }

    /// Two observers on side A (intermediate with gains `g1` for Z and `g2`
    /// for X, then final projective), one final observer on side B.
    pub fn unilateral(theta: f64, kind: StrategyKind, g1: f64, g2: f64) -> Result<Self> {
        let a1 = ObserverSpec {
            side: Side::A,
            index: 1,
            role: Role::Intermediate,
            settings: [
                MeasurementStrategy::new(kind, Basis::Z, g1)?,
                MeasurementStrategy::new(kind, Basis::X, g2)?,
            ],
        };
        Self::new(
            theta,
            vec![a1, final_observer(Side::A, 2)],
            vec![final_observer(Side::B, 1)],
            ScenarioTag::Unilateral,
        )
    }

    /// Intermediate observers on both sides. Gains map as
    /// `[g1, g2, g3, g4]` = (A1 setting Z, A1 setting X, B1 setting Z, B1 setting X).
    pub fn bilateral(theta: f64, kind: StrategyKind, gains: [f64; 4]) -> Result<Self> {
        let a1 = ObserverSpec {
            side: Side::A,
            index: 1,
            role: Role::Intermediate,
            settings: [
                MeasurementStrategy::new(kind, Basis::Z, gains[0])?,
                MeasurementStrategy::new(kind, Basis::X, gains[1])?,
            ],
        };
        let b1 = ObserverSpec {
            side: Side::B,
            index: 1,
            role: Role::Intermediate,
            settings: [
                MeasurementStrategy::new(kind, Basis::Z, gains[2])?,
                MeasurementStrategy::new(kind, Basis::X, gains[3])?,
            ],
        };
        Self::new(
            theta,
            vec![a1, final_observer(Side::A, 2)],
            vec![b1, final_observer(Side::B, 2)],
            ScenarioTag::Bilateral,
        )
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn tag(&self) -> ScenarioTag {
        self.tag
    }

    pub fn chain(&self, side: Side) -> &[ObserverSpec] {
        match side {
            Side::A => &self.chain_a,
            Side::B => &self.chain_b,
        }
    }

    pub fn n_pairs(&self) -> usize {
        self.chain_a.len().max(self.chain_b.len())
    }

    /// Observers in measurement order: pair-major, A side before B side,
    /// each observer listed exactly once.
    pub fn measurement_order(&self) -> Vec<&ObserverSpec> {
        let mut order = Vec::new();
        for k in 1..=self.n_pairs() {
            if k <= self.chain_a.len() {
                order.push(&self.chain_a[k - 1]);
            }
            if k <= self.chain_b.len() {
                order.push(&self.chain_b[k - 1]);
            }
        }
        order
    }

    /// The observer playing the side-`side` role of pair `k`. When a chain is
    /// shorter than k the last (final) observer fills the role.
    pub fn pair_observer(&self, side: Side, k: usize) -> Result<&ObserverSpec> {
        if k == 0 || k > self.n_pairs() {
            return Err(Error::OutOfRange {
                name: "pair",
                value: k as f64,
                domain: "1..=n_pairs",
            });
        }
        let chain = self.chain(side);
        Ok(&chain[k.min(chain.len()) - 1])
    }

    pub fn validate_settings(&self, settings: &BTreeMap<ObserverId, usize>) -> Result<()> {
        let order = self.measurement_order();
        if settings.len() != order.len() {
            return Err(Error::BadSettingMap(format!(
                "expected {} settings, got {}",
                order.len(),
                settings.len()
            )));
        }
        for obs in order {
            match settings.get(&obs.id()) {
                Some(1) | Some(2) => {}
                Some(m) => {
                    return Err(Error::BadSettingMap(format!(
                        "setting {m} for observer {} not in {{1, 2}}",
                        obs.id()
                    )))
                }
                None => {
                    return Err(Error::BadSettingMap(format!(
                        "no setting for observer {}",
                        obs.id()
                    )))
                }
            }
        }
        Ok(())
    }
}

fn final_observer(side: Side, index: usize) -> ObserverSpec {
    ObserverSpec {
        side,
        index,
        role: Role::Final,
        settings: [
            MeasurementStrategy::projective(Basis::Z),
            MeasurementStrategy::projective(Basis::X),
        ],
    }
}

/// Normalized probability table over paired outcomes for one pair and
/// setting combination. `probs[a][b]` indexes outcomes (Plus, Minus).
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    pub probs: [[f64; 2]; 2],
    pub pair: usize,
    pub settings: (usize, usize),
}

impl OutcomeDistribution {
    pub fn p(&self, a: Outcome, b: Outcome) -> f64 {
        self.probs[a.index()][b.index()]
    }

    pub fn marginal_a(&self, a: Outcome) -> f64 {
        self.probs[a.index()][0] + self.probs[a.index()][1]
    }

    pub fn marginal_b(&self, b: Outcome) -> f64 {
        self.probs[0][b.index()] + self.probs[1][b.index()]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().flatten().sum()
    }
}

/// Joint probabilities over every observer's outcome: each branch composes
/// the labelled outcome channels in measurement order and takes the trace
/// of the resulting unnormalized state.
pub fn joint_distribution(
    config: &ScenarioConfig,
    settings: &BTreeMap<ObserverId, usize>,
) -> Result<BTreeMap<Vec<Outcome>, f64>> {
    config.validate_settings(settings)?;
    let order = config.measurement_order();
    let rho0 = state_from_theta(config.theta())?;
    let mut branches: Vec<(Vec<Outcome>, CMatrix)> = vec![(Vec::new(), rho0.mat().clone())];
    for obs in &order {
        let m = settings[&obs.id()];
        let kraus = kraus_for(obs.strategy(m)?);
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (labels, mat) in &branches {
            for outcome in Outcome::BOTH {
                let (out, _) = apply_outcome_mat(mat, &kraus, outcome, obs.side);
                let mut labels = labels.clone();
                labels.push(outcome);
                next.push((labels, out));
            }
        }
        branches = next;
    }
    let mut dist = BTreeMap::new();
    let mut total = 0.0;
    for (labels, mat) in branches {
        let p = mat.trace()?.re.max(0.0);
        total += p;
        dist.insert(labels, p);
    }
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "joint distribution sums to {total}"
        )));
    }
    Ok(dist)
}

/// State delivered to pair `k`: the initial state after every upstream
/// intermediate observer's setting-averaged unread channel.
pub fn pair_state(config: &ScenarioConfig, k: usize) -> Result<DensityMatrix> {
    if k == 0 || k > config.n_pairs() {
        return Err(Error::OutOfRange {
            name: "pair",
            value: k as f64,
            domain: "1..=n_pairs",
        });
    }
    let mut rho = state_from_theta(config.theta())?;
    for side in [Side::A, Side::B] {
        let chain = config.chain(side);
        let own_index = k.min(chain.len());
        for obs in chain.iter().take(own_index - 1) {
            let k1 = kraus_for(obs.strategy(1)?);
            let k2 = kraus_for(obs.strategy(2)?);
            let m1 = unread_channel_mat(rho.mat(), &k1, side);
            let m2 = unread_channel_mat(rho.mat(), &k2, side);
            rho = DensityMatrix::new(m1.add(&m2)?.scale(0.5))?;
        }
    }
    Ok(rho)
}

/// Outcome table for pair `k` with both observers measuring setting `m`.
/// Upstream intermediates are averaged out; downstream observers cannot
/// affect the marginal and are ignored.
pub fn marginal_pair(config: &ScenarioConfig, k: usize, m: usize) -> Result<OutcomeDistribution> {
    let rho = pair_state(config, k)?;
    let obs_a = config.pair_observer(Side::A, k)?;
    let obs_b = config.pair_observer(Side::B, k)?;
    let eff_a = effects_of(&kraus_for(obs_a.strategy(m)?));
    let eff_b = effects_of(&kraus_for(obs_b.strategy(m)?));
    let mut probs = [[0.0f64; 2]; 2];
    for a in Outcome::BOTH {
        let ea = lift(eff_a.effect(a), Side::A);
        for b in Outcome::BOTH {
            let eb = lift(eff_b.effect(b), Side::B);
            let p = ea.matmul(&eb)?.matmul(rho.mat())?.trace()?.re;
            if p < -1e-12 {
                return Err(Error::InvalidState(format!("negative probability {p:.3e}")));
            }
            probs[a.index()][b.index()] = p.max(0.0);
        }
    }
    let total: f64 = probs.iter().flatten().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!(
            "marginal distribution sums to {total}"
        )));
    }
    Ok(OutcomeDistribution {
        probs,
        pair: k,
        settings: (m, m),
    })
}

/// Bare two-qubit Pauli moments in the given basis:
/// (corr, meanA, meanB) = (Tr[(s x s) rho], Tr[(s x I) rho], Tr[(I x s) rho]).
pub fn pauli_moments(rho: &DensityMatrix, basis: Basis) -> (f64, f64, f64) {
    let s = basis.sigma();
    let id = CMatrix::identity(2);
    let corr = s.kron(&s).matmul(rho.mat()).unwrap().trace().unwrap().re;
    let mean_a = s.kron(&id).matmul(rho.mat()).unwrap().trace().unwrap().re;
    let mean_b = id.kron(&s).matmul(rho.mat()).unwrap().trace().unwrap().re;
    (corr, mean_a, mean_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use std::f64::consts::FRAC_PI_4;

    fn all_settings(config: &ScenarioConfig, m: usize) -> BTreeMap<ObserverId, usize> {
        config
            .measurement_order()
            .iter()
            .map(|o| (o.id(), m))
            .collect()
    }

    #[test]
    fn joint_strong_bell_perfect_z_correlations() {
        let cfg = ScenarioConfig::unilateral(FRAC_PI_4, StrategyKind::Weak, 1.0, 1.0).unwrap();
        let dist = joint_distribution(&cfg, &all_settings(&cfg, 1)).unwrap();
        // order: A1, B1, A2
        use Outcome::{Minus as M, Plus as P};
        assert!((dist[&vec![P, P, P]] - 0.5).abs() < 1e-12);
        assert!((dist[&vec![M, M, M]] - 0.5).abs() < 1e-12);
        for (labels, p) in &dist {
            if labels != &vec![P, P, P] && labels != &vec![M, M, M] {
                assert!(*p < 1e-12);
            }
        }
    }

    #[test]
    fn joint_weak_outcome_likelihoods_on_definite_state() {
        let g1 = 0.73;
        let cfg = ScenarioConfig::unilateral(0.0, StrategyKind::Weak, g1, 0.4).unwrap();
        let dist = joint_distribution(&cfg, &all_settings(&cfg, 1)).unwrap();
        use Outcome::{Minus as M, Plus as P};
        assert!((dist[&vec![P, P, P]] - (1.0 + g1) / 2.0).abs() < 1e-12);
        assert!((dist[&vec![M, P, P]] - (1.0 - g1) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn joint_bilateral_strong_x_on_bell() {
        let cfg =
            ScenarioConfig::bilateral(FRAC_PI_4, StrategyKind::Weak, [0.5, 1.0, 0.5, 1.0]).unwrap();
        let dist = joint_distribution(&cfg, &all_settings(&cfg, 2)).unwrap();
        // P(a1 = b1) over the pair-1 outcomes
        let mut matched = 0.0;
        for (labels, p) in &dist {
            if labels[0] == labels[1] {
                matched += p;
            }
        }
        assert!((matched - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_rejects_incomplete_settings() {
        let cfg = ScenarioConfig::unilateral(FRAC_PI_4, StrategyKind::Weak, 0.5, 0.5).unwrap();
        let mut settings = all_settings(&cfg, 1);
        settings.remove(&ObserverId {
            side: Side::B,
            index: 1,
        });
        assert!(joint_distribution(&cfg, &settings).is_err());
    }

    #[test]
    fn marginal_pair_examples() {
        let g1 = 0.8;
        let cfg = ScenarioConfig::unilateral(FRAC_PI_4, StrategyKind::Weak, g1, 0.6).unwrap();

        // pair 1, setting Z on Bell: P(a=b) = (1+G1)/2
        let d = marginal_pair(&cfg, 1, 1).unwrap();
        let matched = d.p(Outcome::Plus, Outcome::Plus) + d.p(Outcome::Minus, Outcome::Minus);
        assert!((matched - (1.0 + g1) / 2.0).abs() < 1e-12);

        // pair 2, setting X: correlation (1+F1)/2 with F1 = sqrt(1-G1^2)
        let f1 = (1.0f64 - g1 * g1).sqrt();
        let d = marginal_pair(&cfg, 2, 2).unwrap();
        let corr = d.p(Outcome::Plus, Outcome::Plus) + d.p(Outcome::Minus, Outcome::Minus)
            - d.p(Outcome::Plus, Outcome::Minus)
            - d.p(Outcome::Minus, Outcome::Plus);
        assert!((corr - (1.0 + f1) / 2.0).abs() < 1e-12);

        for k in [1, 2] {
            for m in [1, 2] {
                let d = marginal_pair(&cfg, k, m).unwrap();
                assert!((d.total() - 1.0).abs() < 1e-10);
            }
        }
        assert!(marginal_pair(&cfg, 3, 1).is_err());
        assert!(marginal_pair(&cfg, 1, 3).is_err());
    }

    #[test]
    fn pair_state_examples() {
        let g1 = 0.8;
        let g2 = 0.6;
        let cfg = ScenarioConfig::unilateral(FRAC_PI_4, StrategyKind::Weak, g1, g2).unwrap();

        let s1 = pair_state(&cfg, 1).unwrap();
        assert!(
            s1.mat()
                .max_abs_diff(state_from_theta(FRAC_PI_4).unwrap().mat())
                < 1e-15
        );

        let f1 = (1.0f64 - g1 * g1).sqrt();
        let f2 = (1.0f64 - g2 * g2).sqrt();
        let s2 = pair_state(&cfg, 2).unwrap();
        let (zz, _, _) = pauli_moments(&s2, Basis::Z);
        let (xx, _, _) = pauli_moments(&s2, Basis::X);
        assert!((zz - (1.0 + f2) / 2.0).abs() < 1e-12);
        assert!((xx - (1.0 + f1) / 2.0).abs() < 1e-12);

        let cfg_b =
            ScenarioConfig::bilateral(FRAC_PI_4, StrategyKind::Weak, [0.5, 0.5, 0.5, 0.5]).unwrap();
        let sb = pair_state(&cfg_b, 2).unwrap();
        assert!(crate::quantum::purity(&sb) < 1.0);
    }

    #[test]
    fn pauli_moment_examples() {
        let bell = state_from_theta(FRAC_PI_4).unwrap();
        let (c, a, b) = pauli_moments(&bell, Basis::Z);
        assert!((c - 1.0).abs() < 1e-14 && a.abs() < 1e-14 && b.abs() < 1e-14);

        let theta = 0.3;
        let rho = state_from_theta(theta).unwrap();
        let (c, a, b) = pauli_moments(&rho, Basis::Z);
        assert!((c - 1.0).abs() < 1e-14);
        assert!((a - (2.0 * theta).cos()).abs() < 1e-14);
        assert!((b - (2.0 * theta).cos()).abs() < 1e-14);
        let (c, a, b) = pauli_moments(&rho, Basis::X);
        assert!((c - (2.0 * theta).sin()).abs() < 1e-14);
        assert!(a.abs() < 1e-14 && b.abs() < 1e-14);
    }

    #[test]
    fn no_signalling_within_pair() {
        let cfg =
            ScenarioConfig::bilateral(0.6, StrategyKind::Weak, [0.9, 0.4, 0.7, 0.55]).unwrap();
        // one side's pair-1 marginal must not depend on the other side's setting
        for (local, remote, slot) in [
            (
                ObserverId {
                    side: Side::A,
                    index: 1,
                },
                ObserverId {
                    side: Side::B,
                    index: 1,
                },
                0,
            ),
            (
                ObserverId {
                    side: Side::B,
                    index: 1,
                },
                ObserverId {
                    side: Side::A,
                    index: 1,
                },
                1,
            ),
        ] {
            let _ = local;
            let mut settings = all_settings(&cfg, 1);
            let mut marginals = Vec::new();
            for m_remote in [1usize, 2] {
                settings.insert(remote, m_remote);
                let dist = joint_distribution(&cfg, &settings).unwrap();
                let mut p = 0.0;
                for (labels, q) in &dist {
                    if labels[slot] == Outcome::Plus {
                        p += q;
                    }
                }
                marginals.push(p);
            }
            assert!((marginals[0] - marginals[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn downstream_independence() {
        let cfg = ScenarioConfig::unilateral(0.5, StrategyKind::Ppm, 0.35, 0.8).unwrap();
        for m in [1usize, 2] {
            let direct = marginal_pair(&cfg, 1, m).unwrap();
            // same marginal from the full joint, summing out the downstream observer
            let settings = all_settings(&cfg, m);
            let dist = joint_distribution(&cfg, &settings).unwrap();
            for a in Outcome::BOTH {
                for b in Outcome::BOTH {
                    let mut p = 0.0;
                    for (labels, q) in &dist {
                        if labels[0] == a && labels[1] == b {
                            p += q;
                        }
                    }
                    assert!((p - direct.p(a, b)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn within_pair_operator_order_is_irrelevant() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let eta_a = rng.open_closed(0.0, 1.0);
            let eta_b = rng.open_closed(0.0, 1.0);
            let ka = kraus_for(&MeasurementStrategy::weak(Basis::Z, eta_a).unwrap());
            let kb = kraus_for(&MeasurementStrategy::weak(Basis::X, eta_b).unwrap());
            let rho = state_from_theta(rng.open_closed(0.0, FRAC_PI_4)).unwrap();
            for oa in Outcome::BOTH {
                for ob in Outcome::BOTH {
                    let (ab, _) = apply_outcome_mat(
                        &apply_outcome_mat(rho.mat(), &ka, oa, Side::A).0,
                        &kb,
                        ob,
                        Side::B,
                    );
                    let (ba, _) = apply_outcome_mat(
                        &apply_outcome_mat(rho.mat(), &kb, ob, Side::B).0,
                        &ka,
                        oa,
                        Side::A,
                    );
                    assert!(ab.max_abs_diff(&ba) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn marginal_pair_agrees_with_joint_summation() {
        let mut rng = SplitMix64::new(19);
        for _ in 0..10 {
            let theta = rng.open_closed(0.05, FRAC_PI_4);
            let gains = [
                rng.open_closed(0.05, 1.0),
                rng.open_closed(0.05, 1.0),
                rng.open_closed(0.05, 1.0),
                rng.open_closed(0.05, 1.0),
            ];
            let cfg = ScenarioConfig::bilateral(theta, StrategyKind::Weak, gains).unwrap();
            for m in [1usize, 2] {
                let direct = marginal_pair(&cfg, 2, m).unwrap();
                // brute force: average the upstream settings with weight 1/4,
                // sum out the upstream outcomes
                let mut table = [[0.0f64; 2]; 2];
                for ma in [1usize, 2] {
                    for mb in [1usize, 2] {
                        let mut settings = BTreeMap::new();
                        settings.insert(
                            ObserverId {
                                side: Side::A,
                                index: 1,
                            },
                            ma,
                        );
                        settings.insert(
                            ObserverId {
                                side: Side::B,
                                index: 1,
                            },
                            mb,
                        );
                        settings.insert(
                            ObserverId {
                                side: Side::A,
                                index: 2,
                            },
                            m,
                        );
                        settings.insert(
                            ObserverId {
                                side: Side::B,
                                index: 2,
                            },
                            m,
                        );
                        let dist = joint_distribution(&cfg, &settings).unwrap();
                        for (labels, p) in &dist {
                            table[labels[2].index()][labels[3].index()] += 0.25 * p;
                        }
                    }
                }
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        assert!(
                            (table[a.index()][b.index()] - direct.p(a, b)).abs() < 1e-12,
                            "mismatch at ({a}, {b})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scenario_shape_validation() {
        assert!(ScenarioConfig::unilateral(3.0, StrategyKind::Weak, 0.5, 0.5).is_err());
        assert!(ScenarioConfig::unilateral(0.5, StrategyKind::Weak, 0.0, 0.5).is_err());
    }
}
