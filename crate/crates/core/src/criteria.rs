//! The three correlation criteria and their closed-form reference
//! expressions.
//!
//! Each criterion sums a classical correlation measure over the two
//! complementary settings. Exceeding the threshold certifies entanglement:
//! mutual information above 1 bit, matched conditional sum above 3 (or below
//! 1), summed absolute Pearson coefficients above 1.
//!
//! Conventions locked in here:
//! - The conditional-probability sum is read as the matched-outcome sum
//!   P(a=+1|b=+1) + P(a=-1|b=-1) per setting. The unrestricted double sum is
//!   identically 2 and carries no information.
//! - Pearson coefficients are operator-moment quantities. They are invariant
//!   under the affine reparameterisations eta*sigma and alpha*sigma+(1-alpha)*I,
//!   so bare Pauli moments on the pair's pre-measurement state suffice.
//! - Entropies are computed in natural log and converted to bits at the end.

use crate::quantum::{Basis, Outcome};
use crate::scenario::{
    marginal_pair, pair_state, pauli_moments, OutcomeDistribution, ScenarioConfig, ScenarioTag,
};
use crate::{Error, Result};

use std::f64::consts::LN_2;

/// Measurement family a closed form belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Weak,
    Ppm,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Weak => write!(f, "weak"),
            Strategy::Ppm => write!(f, "ppm"),
        }
    }
}

/// Undisturbed fraction F for a given information gain G.
pub fn disturbance(strategy: Strategy, g: f64) -> f64 {
    match strategy {
        Strategy::Weak => (1.0 - g * g).max(0.0).sqrt(),
        Strategy::Ppm => 1.0 - g,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriterionKind {
    MutualInfo,
    CondProbSum,
    Pearson,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 3] = [
        CriterionKind::MutualInfo,
        CriterionKind::CondProbSum,
        CriterionKind::Pearson,
    ];

    /// Does a single pair's value certify entanglement?
    #[allow(clippy::manual_range_contains)]
    pub fn violated(self, total: f64) -> bool {
        match self {
            CriterionKind::MutualInfo => total > 1.0,
            CriterionKind::CondProbSum => total > 3.0 || total < 1.0,
            CriterionKind::Pearson => total > 1.0,
        }
    }

    pub fn double_violation(self, v1: f64, v2: f64) -> bool {
        match self {
            CriterionKind::CondProbSum => (v1 > 3.0 && v2 > 3.0) || (v1 < 1.0 && v2 < 1.0),
            _ => self.violated(v1) && self.violated(v2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CriterionKind::MutualInfo => "I",
            CriterionKind::CondProbSum => "S",
            CriterionKind::Pearson => "C",
        }
    }
}

/// One criterion evaluated for one observer pair. `z_term` and `x_term` are
/// the per-setting contributions; `total` is their sum, with absolute values
/// for the Pearson criterion.
#[derive(Clone, Copy, Debug)]
pub struct CriterionValue {
    pub kind: CriterionKind,
    pub pair: usize,
    pub z_term: f64,
    pub x_term: f64,
    pub total: f64,
}

#[inline]
fn xlnx(v: f64) -> f64 {
    if v > 0.0 {
        v * v.ln()
    } else {
        0.0
    }
}

/// X(a) = a ln a + (2-a) ln(2-a), with 0 ln 0 = 0.
pub fn entropy_x(a: f64) -> f64 {
    xlnx(a) + xlnx(2.0 - a)
}

/// X(a, b) = a ln a + (b-a) ln(b-a).
pub fn entropy_x2(a: f64, b: f64) -> f64 {
    xlnx(a) + xlnx(b - a)
}

/// t(F) = 1 + F.
pub fn t_factor(f: f64) -> f64 {
    1.0 + f
}

/// f(F) = 4 - t(F)^2 cos^2(2 theta).
pub fn variance_factor(f: f64, cos2t: f64) -> f64 {
    4.0 - t_factor(f) * t_factor(f) * cos2t * cos2t
}

/// Shannon entropy in bits of a probability list; entries below 1e-15 are
/// treated as exact zeros before taking logs.
fn entropy_bits(ps: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in ps {
        if p > 1e-15 {
            h -= p * p.ln();
        }
    }
    h / LN_2
}

/// Mutual information H(A) - H(A|B) in bits for a paired outcome table.
pub fn mutual_information(dist: &OutcomeDistribution) -> f64 {
    let pa = [
        dist.marginal_a(Outcome::Plus),
        dist.marginal_a(Outcome::Minus),
    ];
    let pb = [
        dist.marginal_b(Outcome::Plus),
        dist.marginal_b(Outcome::Minus),
    ];
    let joint = [
        dist.probs[0][0],
        dist.probs[0][1],
        dist.probs[1][0],
        dist.probs[1][1],
    ];
    let mi = entropy_bits(&pa) + entropy_bits(&pb) - entropy_bits(&joint);
    mi.max(0.0)
}

/// Matched conditional sum P(a=+1|b=+1) + P(a=-1|b=-1).
pub fn matched_conditional_sum(dist: &OutcomeDistribution) -> Result<f64> {
    let pb_plus = dist.marginal_b(Outcome::Plus);
    let pb_minus = dist.marginal_b(Outcome::Minus);
    if pb_plus <= 1e-15 {
        return Err(Error::UndefinedConditional("+1"));
    }
    if pb_minus <= 1e-15 {
        return Err(Error::UndefinedConditional("-1"));
    }
    Ok(dist.p(Outcome::Plus, Outcome::Plus) / pb_plus
        + dist.p(Outcome::Minus, Outcome::Minus) / pb_minus)
}

/// Pearson correlation coefficient from operator moments.
pub fn pearson(corr: f64, mean_a: f64, mean_b: f64) -> Result<f64> {
    let var_a = 1.0 - mean_a * mean_a;
    let var_b = 1.0 - mean_b * mean_b;
    if var_a < 1e-12 {
        return Err(Error::SingularVariance("A"));
    }
    if var_b < 1e-12 {
        return Err(Error::SingularVariance("B"));
    }
    Ok((corr - mean_a * mean_b) / (var_a * var_b).sqrt())
}

/// Evaluates one criterion for pair `k` through the simulator.
pub fn criterion(config: &ScenarioConfig, kind: CriterionKind, k: usize) -> Result<CriterionValue> {
    let (z_term, x_term, total) = match kind {
        CriterionKind::MutualInfo => {
            let z = mutual_information(&marginal_pair(config, k, 1)?);
            let x = mutual_information(&marginal_pair(config, k, 2)?);
            (z, x, z + x)
        }
        CriterionKind::CondProbSum => {
            let z = matched_conditional_sum(&marginal_pair(config, k, 1)?)?;
            let x = matched_conditional_sum(&marginal_pair(config, k, 2)?)?;
            (z, x, z + x)
        }
        CriterionKind::Pearson => {
            let rho = pair_state(config, k)?;
            let (cz, az, bz) = pauli_moments(&rho, Basis::Z);
            let (cx, ax, bx) = pauli_moments(&rho, Basis::X);
            let z = pearson(cz, az, bz)?;
            let x = pearson(cx, ax, bx)?;
            (z, x, z.abs() + x.abs())
        }
    };
    Ok(CriterionValue {
        kind,
        pair: k,
        z_term,
        x_term,
        total,
    })
}

fn check_params(theta: f64, gains: &[f64], expected: usize) -> Result<()> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            domain: "[0, pi/2]",
        });
    }
    if gains.len() != expected {
        return Err(Error::InvalidSpec(format!(
            "expected {expected} gains, got {}",
            gains.len()
        )));
    }
    for &g in gains {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::OutOfRange {
                name: "gain",
                value: g,
                domain: "[0, 1]",
            });
        }
    }
    Ok(())
}

/// Closed-form reference expression for a criterion family.
///
/// `gains` is `[g1, g2]` for the unilateral scenario and `[g1, g2, g3, g4]`
/// for the bilateral one; the disturbance law of `strategy` converts gains
/// into undisturbed fractions internally. The bilateral PPM mutual
/// information for pair 1 is reconstructed rather than transcribed and the
/// simulator remains the reference for that family (see [`crate::verify`]).
pub fn closed_form(
    tag: ScenarioTag,
    strategy: Strategy,
    kind: CriterionKind,
    k: usize,
    theta: f64,
    gains: &[f64],
) -> Result<f64> {
    let expected = match tag {
        ScenarioTag::Unilateral => 2,
        ScenarioTag::Bilateral => 4,
    };
    check_params(theta, gains, expected)?;
    if k != 1 && k != 2 {
        return Err(Error::OutOfRange {
            name: "pair",
            value: k as f64,
            domain: "{1, 2}",
        });
    }
    let s2 = (2.0 * theta).sin();
    let c2 = (2.0 * theta).cos();
    let x1 = entropy_x;
    let x2 = entropy_x2;
    let t = t_factor;

    match tag {
        ScenarioTag::Unilateral => {
            let (g1, g2) = (gains[0], gains[1]);
            let f1 = disturbance(strategy, g1);
            let f2 = disturbance(strategy, g2);
            match (kind, k) {
                (CriterionKind::MutualInfo, 1) => match strategy {
                    Strategy::Weak => {
                        Ok((x1(1.0 - g1) + x1(1.0 - g2 * s2) - x1(1.0 - g1 * c2)) / (2.0 * LN_2))
                    }
                    Strategy::Ppm => {
                        let sin_sq = theta.sin().powi(2);
                        Ok(1.0 - sin_sq
                            + (x1(g2 * (1.0 - s2)) + x1(g2 * (1.0 + s2))) / (4.0 * LN_2)
                            - (x1(g1 * (1.0 - c2)) + x1(g2) - x1(2.0 * g1) * sin_sq) / (2.0 * LN_2))
                    }
                },
                (CriterionKind::MutualInfo, _) => Ok((x1((1.0 - f2) / 2.0)
                    + x1(1.0 - t(f1) * s2 / 2.0)
                    - x1(1.0 - t(f2) * c2 / 2.0))
                    / (2.0 * LN_2)),
                (CriterionKind::CondProbSum, 1) => Ok(2.0 + g1 + g2 * s2),
                (CriterionKind::CondProbSum, _) => Ok(2.0 + 0.5 * (t(f2) + t(f1) * s2)),
                (CriterionKind::Pearson, 1) => {
                    if s2 <= 0.0 {
                        return Err(Error::SingularVariance("closed form"));
                    }
                    Ok(1.0 + s2)
                }
                (CriterionKind::Pearson, _) => {
                    let denom = variance_factor(f2, c2);
                    if denom <= 0.0 {
                        return Err(Error::SingularVariance("closed form"));
                    }
                    Ok(t(f1) * s2 / 2.0 + t(f2) * s2 / denom.sqrt())
                }
            }
        }
        ScenarioTag::Bilateral => {
            let (g1, g2, g3, g4) = (gains[0], gains[1], gains[2], gains[3]);
            let f1 = disturbance(strategy, g1);
            let f2 = disturbance(strategy, g2);
            let f3 = disturbance(strategy, g3);
            let f4 = disturbance(strategy, g4);
            match (kind, k) {
                (CriterionKind::MutualInfo, 1) => match strategy {
                    Strategy::Weak => Ok((2.0 * x1(1.0 - g2 * g4 * s2)
                        + x2(1.0 - g1 * g3 + (g3 - g1) * c2, 2.0 * (1.0 - g1 * g3))
                        - 2.0 * x1(1.0 + g3 * c2)
                        + x2(1.0 + g1 * g3 + (g1 + g3) * c2, 2.0 * (1.0 + g1 * g3))
                        - 2.0 * x1(1.0 - g1 * c2))
                        / (4.0 * LN_2)),
                    Strategy::Ppm => {
                        let sin_sq = theta.sin().powi(2);
                        let d = 1.0 - g3 * sin_sq;
                        Ok(1.0
                            + (g4 * x1(g2 * (1.0 + s2))
                                + x2(g2 * (2.0 - g4 - g4 * s2), 4.0 - 2.0 * g4)
                                - 2.0 * xlnx(2.0 - g4)
                                - 2.0 * x1(g2)
                                - 2.0 * x1(g1 * (1.0 - c2)))
                                / (4.0 * LN_2)
                            + (g3 * sin_sq * x2(g1, 1.0) + x2(g1 * (1.0 - g3) * sin_sq, d)
                                - xlnx(d))
                                / LN_2)
                    }
                },
                (CriterionKind::MutualInfo, _) => Ok(-2.0
                    + (x1(1.0 + t(f1) * t(f3) * s2 / 4.0)
                        - x1(1.0 - t(f2) * c2 / 2.0)
                        - x1(1.0 + t(f4) * c2 / 2.0)
                        + (x2(
                            4.0 - t(f2) * t(f4) - 2.0 * (f2 - f4) * c2,
                            8.0 - 4.0 * t(f2) * c2,
                        ) + x2(
                            4.0 - t(f2) * t(f4) + 2.0 * (f2 - f4) * c2,
                            8.0 + 4.0 * t(f2) * c2,
                        )) / 8.0)
                        / (2.0 * LN_2)),
                (CriterionKind::CondProbSum, 1) => match strategy {
                    Strategy::Weak => {
                        let denom = 1.0 - g3 * g3 * c2 * c2;
                        if denom <= 0.0 {
                            return Err(Error::SingularVariance("closed form"));
                        }
                        Ok(2.0 + g2 * g4 * s2 + g1 * g3 * s2 * s2 / denom)
                    }
                    Strategy::Ppm => {
                        let cos_sq = theta.cos().powi(2);
                        let sin_sq = theta.sin().powi(2);
                        let denom = 1.0 - g3 * sin_sq;
                        if denom <= 0.0 || (2.0 - g4) <= 0.0 {
                            return Err(Error::SingularVariance("closed form"));
                        }
                        Ok(2.0 + g2 * s2 / (2.0 - g4) + g1 * cos_sq / denom)
                    }
                },
                (CriterionKind::CondProbSum, _) => {
                    let denom = variance_factor(f4, c2);
                    if denom <= 0.0 {
                        return Err(Error::SingularVariance("closed form"));
                    }
                    Ok(2.0 + t(f1) * t(f3) * s2 / 4.0 + t(f2) * t(f4) * s2 * s2 / denom)
                }
                (CriterionKind::Pearson, 1) => {
                    if s2 <= 0.0 {
                        return Err(Error::SingularVariance("closed form"));
                    }
                    Ok(1.0 + s2)
                }
                (CriterionKind::Pearson, _) => {
                    let d2 = variance_factor(f2, c2);
                    let d4 = variance_factor(f4, c2);
                    if d2 <= 0.0 || d4 <= 0.0 {
                        return Err(Error::SingularVariance("closed form"));
                    }
                    Ok(t(f1) * t(f3) * s2 / 4.0 + t(f2) * t(f4) * s2 * s2 / (d2 * d4).sqrt())
                }
            }
        }
    }
}
