//! Seeded equivalence suites: closed forms against the simulator, appendix
//! eigenvalue families against numeric PPT spectra, mixedness expressions
//! against Tr[rho^2].
//!
//! Every suite draws its tuples from a SplitMix64 substream so the exact
//! same numbers are reproducible from the seed alone. Substream indices are
//! the family positions listed by [`closed_form_families`], then the
//! eigenvalue families (offset 100) and the mixedness families (offset 200).
//! Draw order per tuple is theta first, then the gains in index order.
//! Gains are uniform on (0, 1]; theta is uniform on (0.01, pi/4]. The floor
//! keeps the tuples away from the theta = 0 singular point of the Pearson
//! and conditional-probability criteria, where the simulator route loses
//! relative precision as O(1/sin^2 theta) and an absolute 1e-9 comparison
//! stops being meaningful in f64.
//!
//! The bilateral PPM mutual-information family for pair 1 is skipped: its
//! reference expression is reconstructed rather than transcribed, so the
//! simulator is kept as the sole authority for that family.

use crate::criteria::{closed_form, criterion, CriterionKind, Strategy};
use crate::quantum::{purity, StrategyKind};
use crate::rng::SplitMix64;
use crate::scenario::{pair_state, ScenarioConfig, ScenarioTag};
use crate::witness::{mixedness_unilateral_ppm, mixedness_unilateral_weak, ppt_report, EigFamily};

use std::f64::consts::FRAC_PI_4;

/// Tolerance for closed-form vs simulator agreement.
pub const EQUIV_TOL: f64 = 1e-9;
/// Tolerance for eigenvalue-family agreement.
pub const EIG_TOL: f64 = 1e-9;
/// Tolerance for mixedness agreement.
pub const MIXEDNESS_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteStatus {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for SuiteStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SuiteStatus::Pass => write!(f, "PASS"),
            SuiteStatus::Fail => write!(f, "FAIL"),
            SuiteStatus::Skipped => write!(f, "SKIPPED(open-question)"),
        }
    }
}

/// Outcome of one verification family.
#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub name: String,
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub status: SuiteStatus,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.status != SuiteStatus::Fail
    }
}

/// One criterion family: scenario, strategy, criterion, pair index, and
/// whether the equivalence check is skipped.
pub type ClosedFormFamily = (ScenarioTag, Strategy, CriterionKind, usize, bool);

/// The 24 closed-form families in substream order.
pub fn closed_form_families() -> Vec<ClosedFormFamily> {
    let mut families = Vec::new();
    for tag in [ScenarioTag::Unilateral, ScenarioTag::Bilateral] {
        for strategy in [Strategy::Weak, Strategy::Ppm] {
            for kind in CriterionKind::ALL {
                for k in [1usize, 2] {
                    let skip = tag == ScenarioTag::Bilateral
                        && strategy == Strategy::Ppm
                        && kind == CriterionKind::MutualInfo
                        && k == 1;
                    families.push((tag, strategy, kind, k, skip));
                }
            }
        }
    }
    families
}

pub fn family_name(tag: ScenarioTag, strategy: Strategy, kind: CriterionKind, k: usize) -> String {
    format!("{tag}-{strategy}-{}{k}", kind.label())
}

fn strategy_kind(strategy: Strategy) -> StrategyKind {
    match strategy {
        Strategy::Weak => StrategyKind::Weak,
        Strategy::Ppm => StrategyKind::Ppm,
    }
}

/// Lower edge of the sampled theta range; see the module docs.
pub const THETA_FLOOR: f64 = 0.01;

fn draw_tuple(rng: &mut SplitMix64, n_gains: usize) -> (f64, Vec<f64>) {
    let theta = rng.open_closed(THETA_FLOOR, FRAC_PI_4);
    let gains = (0..n_gains).map(|_| rng.open_closed(0.0, 1.0)).collect();
    (theta, gains)
}

/// Closed-form vs simulator deviation over `count` seeded tuples per family.
pub fn closed_form_report(seed: u64, count: usize) -> Vec<FamilyReport> {
    let mut reports = Vec::new();
    for (idx, (tag, strategy, kind, k, skip)) in closed_form_families().into_iter().enumerate() {
        let name = family_name(tag, strategy, kind, k);
        if skip {
            reports.push(FamilyReport {
                name,
                samples: 0,
                max_deviation: 0.0,
                tolerance: EQUIV_TOL,
                status: SuiteStatus::Skipped,
            });
            continue;
        }
        let mut rng = SplitMix64::substream(seed, idx as u64);
        let n_gains = match tag {
            ScenarioTag::Unilateral => 2,
            ScenarioTag::Bilateral => 4,
        };
        let mut max_dev = 0.0f64;
        for _ in 0..count {
            let (theta, gains) = draw_tuple(&mut rng, n_gains);
            let dev = (|| -> crate::Result<f64> {
                let cfg = match tag {
                    ScenarioTag::Unilateral => ScenarioConfig::unilateral(
                        theta,
                        strategy_kind(strategy),
                        gains[0],
                        gains[1],
                    )?,
                    ScenarioTag::Bilateral => ScenarioConfig::bilateral(
                        theta,
                        strategy_kind(strategy),
                        [gains[0], gains[1], gains[2], gains[3]],
                    )?,
                };
                let engine = criterion(&cfg, kind, k)?.total;
                let reference = closed_form(tag, strategy, kind, k, theta, &gains)?;
                Ok((engine - reference).abs())
            })()
            .unwrap_or(f64::INFINITY);
            max_dev = max_dev.max(dev);
        }
        reports.push(FamilyReport {
            name,
            samples: count,
            max_deviation: max_dev,
            tolerance: EQUIV_TOL,
            status: if max_dev <= EQUIV_TOL {
                SuiteStatus::Pass
            } else {
                SuiteStatus::Fail
            },
        });
    }
    reports
}

fn eig_family(idx: usize, rng: &mut SplitMix64) -> EigFamily {
    let theta = rng.open_closed(THETA_FLOOR, FRAC_PI_4);
    let a = rng.open_closed(0.0, 1.0);
    let b = rng.open_closed(0.0, 1.0);
    match idx {
        0 => EigFamily::UnilateralWeak {
            theta,
            g1: a,
            g2: b,
        },
        1 => EigFamily::UnilateralPpm {
            theta,
            g1: a,
            g2: b,
        },
        2 => EigFamily::BilateralWeakSymmetric { theta, g: a },
        3 => EigFamily::BilateralWeakAsymmetric { g2: a, g4: b },
        4 => EigFamily::BilateralPpmSymmetric { theta, g: a },
        _ => EigFamily::BilateralPpmAsymmetric { g2: a, g4: b },
    }
}

const EIG_FAMILY_NAMES: [&str; 6] = [
    "unilateral-weak",
    "unilateral-ppm",
    "bilateral-weak-symmetric",
    "bilateral-weak-asymmetric",
    "bilateral-ppm-symmetric",
    "bilateral-ppm-asymmetric",
];

/// Eigenvalue families vs numeric PPT spectra over seeded tuples.
pub fn appendix_eig_report(seed: u64, count: usize) -> Vec<FamilyReport> {
    let mut reports = Vec::new();
    for (idx, family_name) in EIG_FAMILY_NAMES.iter().enumerate() {
        let mut rng = SplitMix64::substream(seed, 100 + idx as u64);
        let mut max_dev = 0.0f64;
        for _ in 0..count {
            let fam = eig_family(idx, &mut rng);
            let dev = (|| -> crate::Result<f64> {
                let mut closed = fam.eigenvalues()?;
                closed.sort_by(f64::total_cmp);
                let rho = pair_state(&fam.engine_config()?, 2)?;
                let numeric = ppt_report(&rho).eigenvalues;
                Ok(closed
                    .iter()
                    .zip(numeric.iter())
                    .map(|(c, n)| (c - n).abs())
                    .fold(0.0, f64::max))
            })()
            .unwrap_or(f64::INFINITY);
            max_dev = max_dev.max(dev);
        }
        reports.push(FamilyReport {
            name: format!("ppt-eigs-{family_name}"),
            samples: count,
            max_deviation: max_dev,
            tolerance: EIG_TOL,
            status: if max_dev <= EIG_TOL {
                SuiteStatus::Pass
            } else {
                SuiteStatus::Fail
            },
        });
    }
    reports
}

/// Mixedness closed forms vs Tr[rho^2] over seeded tuples. The weak family
/// is defined for the maximally entangled initial state, so theta stays at
/// pi/4 there; the PPM family samples theta as well.
pub fn mixedness_report(seed: u64, count: usize) -> Vec<FamilyReport> {
    let mut reports = Vec::new();
    for (idx, name) in ["mixedness-unilateral-weak", "mixedness-unilateral-ppm"]
        .iter()
        .enumerate()
    {
        let mut rng = SplitMix64::substream(seed, 200 + idx as u64);
        let mut max_dev = 0.0f64;
        for _ in 0..count {
            let dev = (|| -> crate::Result<f64> {
                let (theta, g1, g2, reference) = if idx == 0 {
                    let g1 = rng.open_closed(0.0, 1.0);
                    let g2 = rng.open_closed(0.0, 1.0);
                    (FRAC_PI_4, g1, g2, mixedness_unilateral_weak(g1, g2)?)
                } else {
                    let theta = rng.open_closed(THETA_FLOOR, FRAC_PI_4);
                    let g1 = rng.open_closed(0.0, 1.0);
                    let g2 = rng.open_closed(0.0, 1.0);
                    (theta, g1, g2, mixedness_unilateral_ppm(theta, g1, g2)?)
                };
                let kind = if idx == 0 {
                    StrategyKind::Weak
                } else {
                    StrategyKind::Ppm
                };
                let cfg = ScenarioConfig::unilateral(theta, kind, g1, g2)?;
                let engine = purity(&pair_state(&cfg, 2)?);
                Ok((engine - reference).abs())
            })()
            .unwrap_or(f64::INFINITY);
            max_dev = max_dev.max(dev);
        }
        reports.push(FamilyReport {
            name: name.to_string(),
            samples: count,
            max_deviation: max_dev,
            tolerance: MIXEDNESS_TOL,
            status: if max_dev <= MIXEDNESS_TOL {
                SuiteStatus::Pass
            } else {
                SuiteStatus::Fail
            },
        });
    }
    reports
}

/// All three suites concatenated.
pub fn full_report(seed: u64, count: usize) -> Vec<FamilyReport> {
    let mut reports = closed_form_report(seed, count);
    reports.extend(appendix_eig_report(seed, count.min(500)));
    reports.extend(mixedness_report(seed, count.min(200)));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_enumeration_is_complete() {
        let families = closed_form_families();
        assert_eq!(families.len(), 24);
        assert_eq!(families.iter().filter(|f| f.4).count(), 1);
        let (tag, strategy, kind, k, _) = families[families.iter().position(|f| f.4).unwrap()];
        assert_eq!(family_name(tag, strategy, kind, k), "bilateral-ppm-I1");
    }

    #[test]
    fn quick_equivalence_pass() {
        for r in closed_form_report(7, 25) {
            assert!(r.passed(), "{}: max dev {:.3e}", r.name, r.max_deviation);
        }
        for r in appendix_eig_report(7, 25) {
            assert!(r.passed(), "{}: max dev {:.3e}", r.name, r.max_deviation);
        }
        for r in mixedness_report(7, 25) {
            assert!(r.passed(), "{}: max dev {:.3e}", r.name, r.max_deviation);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = closed_form_report(13, 10);
        let b = closed_form_report(13, 10);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.max_deviation.to_bits(), y.max_deviation.to_bits());
        }
    }
}
