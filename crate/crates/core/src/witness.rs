//! PPT entanglement ground truth and the closed-form eigenvalue families.
//!
//! A two-qubit state is entangled iff its partial transpose has a negative
//! eigenvalue. [`ppt_report`] computes the spectrum numerically; the
//! [`EigFamily`] expressions give the same four eigenvalues in closed form
//! for the pair-2 states of the standard configurations, so each route
//! cross-checks the other.

use crate::criteria::{disturbance, t_factor, Strategy};
use crate::linalg::{hermitian_eigenvalues, partial_transpose, Subsystem};
use crate::quantum::{purity, DensityMatrix, StrategyKind};
use crate::scenario::ScenarioConfig;
use crate::{Error, Result};

use std::f64::consts::FRAC_PI_4;

/// Eigenvalues below this are treated as genuinely negative rather than
/// eigensolver noise.
pub const NEGATIVITY_TOL: f64 = -1e-10;

/// PPT verdict for one state.
#[derive(Clone, Copy, Debug)]
pub struct PptReport {
    /// Eigenvalues of the partial transpose, ascending.
    pub eigenvalues: [f64; 4],
    pub min_eig: f64,
    pub entangled: bool,
    /// Tr[rho^2] of the state itself.
    pub mixedness: f64,
}

/// Spectrum of the partial transpose (second qubit) plus the entanglement
/// verdict. For two-qubit states the verdict is independent of which qubit
/// is transposed.
pub fn ppt_report(rho: &DensityMatrix) -> PptReport {
    let pt = partial_transpose(rho.mat(), Subsystem::Second).expect("4x4 state");
    let eigs = hermitian_eigenvalues(&pt).expect("partial transpose stays Hermitian");
    let eigenvalues = [eigs[0], eigs[1], eigs[2], eigs[3]];
    PptReport {
        eigenvalues,
        min_eig: eigenvalues[0],
        entangled: eigenvalues[0] < NEGATIVITY_TOL,
        mixedness: purity(rho),
    }
}

/// Closed-form eigenvalue family for the partial transpose of a pair-2
/// state. Parameters are information gains; the disturbance law of the
/// family converts them internally.
///
/// The asymmetric bilateral families are defined at theta = pi/4 with the
/// first-setting gains pinned to 1.
#[derive(Clone, Copy, Debug)]
pub enum EigFamily {
    UnilateralWeak { theta: f64, g1: f64, g2: f64 },
    UnilateralPpm { theta: f64, g1: f64, g2: f64 },
    BilateralWeakSymmetric { theta: f64, g: f64 },
    BilateralWeakAsymmetric { g2: f64, g4: f64 },
    BilateralPpmSymmetric { theta: f64, g: f64 },
    BilateralPpmAsymmetric { g2: f64, g4: f64 },
}

fn check_gain(name: &'static str, g: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::OutOfRange {
            name,
            value: g,
            domain: "[0, 1]",
        });
    }
    Ok(())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(Error::OutOfRange {
            name: "theta",
            value: theta,
            domain: "[0, pi/2]",
        });
    }
    Ok(())
}

fn guarded_sqrt(x: f64) -> Result<f64> {
    if x < -1e-12 {
        return Err(Error::OutOfRange {
            name: "radicand",
            value: x,
            domain: "[0, inf)",
        });
    }
    Ok(x.max(0.0).sqrt())
}

impl EigFamily {
    pub fn name(&self) -> &'static str {
        match self {
            EigFamily::UnilateralWeak { .. } => "unilateral-weak",
            EigFamily::UnilateralPpm { .. } => "unilateral-ppm",
            EigFamily::BilateralWeakSymmetric { .. } => "bilateral-weak-symmetric",
            EigFamily::BilateralWeakAsymmetric { .. } => "bilateral-weak-asymmetric",
            EigFamily::BilateralPpmSymmetric { .. } => "bilateral-ppm-symmetric",
            EigFamily::BilateralPpmAsymmetric { .. } => "bilateral-ppm-asymmetric",
        }
    }

    /// The four closed-form eigenvalues, in formula order (not sorted).
    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        match *self {
            EigFamily::UnilateralWeak { theta, g1, g2 } => {
                check_theta(theta)?;
                check_gain("g1", g1)?;
                check_gain("g2", g2)?;
                let f1 = disturbance(Strategy::Weak, g1);
                let f2 = disturbance(Strategy::Weak, g2);
                let s2 = (2.0 * theta).sin().powi(2);
                let hi = 3.0 + f2;
                let lo = 1.0 - f2;
                let r_hi = guarded_sqrt(hi * hi - 8.0 * t_factor(f2) * s2)?;
                let r_lo =
                    guarded_sqrt(lo * lo + 4.0 * (-g1 * g1 + t_factor(f1) * t_factor(f2)) * s2)?;
                Ok([
                    (hi - r_hi) / 8.0,
                    (hi + r_hi) / 8.0,
                    (lo - r_lo) / 8.0,
                    (lo + r_lo) / 8.0,
                ])
            }
            EigFamily::UnilateralPpm { theta, g1, g2 } => {
                check_theta(theta)?;
                check_gain("g1", g1)?;
                check_gain("g2", g2)?;
                let s2 = (2.0 * theta).sin().powi(2);
                let hi = 4.0 - g2;
                let r_hi = guarded_sqrt(hi * hi - 8.0 * (2.0 - g2) * s2)?;
                let r_lo = guarded_sqrt(g2 * g2 + 4.0 * (2.0 - g1) * (2.0 - g1 - g2) * s2)?;
                Ok([
                    (hi - r_hi) / 8.0,
                    (hi + r_hi) / 8.0,
                    (g2 - r_lo) / 8.0,
                    (g2 + r_lo) / 8.0,
                ])
            }
            EigFamily::BilateralWeakSymmetric { theta, g } => {
                check_theta(theta)?;
                check_gain("g", g)?;
                let f = disturbance(Strategy::Weak, g);
                let c4 = (4.0 * theta).cos();
                let s2 = (2.0 * theta).sin();
                let g2 = g * g;
                let r_hi = guarded_sqrt(
                    20.0 + 12.0 * f
                        + 2.0 * g2 * (-8.0 + 3.0 * f)
                        + (12.0 + 20.0 * f - 6.0 * g2 * f) * c4
                        + 9.0 * g2 * g2 * s2 * s2,
                )?;
                // the sin^2(2 theta) of the small pair sits inside the radical,
                // as in the PPM list below, so the multiplier is sin(2 theta)
                let r_lo = guarded_sqrt(
                    (25.0 * g2 * g2 + 8.0 * (5.0 + 3.0 * f) - 4.0 * g2 * (16.0 + 5.0 * f))
                        * s2
                        * s2,
                )?;
                Ok([
                    (6.0 - g2 + 2.0 * f - r_hi) / 16.0,
                    (6.0 - g2 + 2.0 * f + r_hi) / 16.0,
                    (2.0 + g2 - 2.0 * f - r_lo) / 16.0,
                    (2.0 + g2 - 2.0 * f + r_lo) / 16.0,
                ])
            }
            EigFamily::BilateralWeakAsymmetric { g2, g4 } => {
                check_gain("g2", g2)?;
                check_gain("g4", g4)?;
                let f2 = disturbance(Strategy::Weak, g2);
                let f4 = disturbance(Strategy::Weak, g4);
                Ok(asymmetric_bilateral_eigs(f2, f4))
            }
            EigFamily::BilateralPpmSymmetric { theta, g } => {
                check_theta(theta)?;
                check_gain("g", g)?;
                let c4 = (4.0 * theta).cos();
                let s2 = (2.0 * theta).sin();
                let r_hi = guarded_sqrt(
                    64.0 + g * (-64.0 + g * (32.0 + 3.0 * g * (-8.0 + 3.0 * g)))
                        + (64.0 - 64.0 * g + 24.0 * g.powi(3) - 9.0 * g.powi(4)) * c4,
                )?;
                // 8 - 12g + 5g^2 > 0 for all g, so the |.| in the closed form
                // resolves to the plain quadratic for theta in [0, pi/2]
                let q = (8.0 - 12.0 * g + 5.0 * g * g) * s2;
                Ok([
                    (16.0 + 2.0 * (g - 4.0) * g - std::f64::consts::SQRT_2 * r_hi) / 32.0,
                    (16.0 + 2.0 * (g - 4.0) * g + std::f64::consts::SQRT_2 * r_hi) / 32.0,
                    ((4.0 - g) * g - q) / 16.0,
                    ((4.0 - g) * g + q) / 16.0,
                ])
            }
            EigFamily::BilateralPpmAsymmetric { g2, g4 } => {
                check_gain("g2", g2)?;
                check_gain("g4", g4)?;
                let f2 = disturbance(Strategy::Ppm, g2);
                let f4 = disturbance(Strategy::Ppm, g4);
                Ok(asymmetric_bilateral_eigs(f2, f4))
            }
        }
    }

    /// The scenario whose pair-2 partial-transpose spectrum this family
    /// describes.
    pub fn engine_config(&self) -> Result<ScenarioConfig> {
        match *self {
            EigFamily::UnilateralWeak { theta, g1, g2 } => {
                ScenarioConfig::unilateral(theta, StrategyKind::Weak, g1, g2)
            }
            EigFamily::UnilateralPpm { theta, g1, g2 } => {
                ScenarioConfig::unilateral(theta, StrategyKind::Ppm, g1, g2)
            }
            EigFamily::BilateralWeakSymmetric { theta, g } => {
                ScenarioConfig::bilateral(theta, StrategyKind::Weak, [g; 4])
            }
            EigFamily::BilateralWeakAsymmetric { g2, g4 } => {
                ScenarioConfig::bilateral(FRAC_PI_4, StrategyKind::Weak, [1.0, g2, 1.0, g4])
            }
            EigFamily::BilateralPpmSymmetric { theta, g } => {
                ScenarioConfig::bilateral(theta, StrategyKind::Ppm, [g; 4])
            }
            EigFamily::BilateralPpmAsymmetric { g2, g4 } => {
                ScenarioConfig::bilateral(FRAC_PI_4, StrategyKind::Ppm, [1.0, g2, 1.0, g4])
            }
        }
    }
}

/// Shared closed form for both asymmetric bilateral families (theta = pi/4,
/// first-setting gains at 1): the spectra coincide as functions of the
/// undisturbed fractions.
fn asymmetric_bilateral_eigs(f2: f64, f4: f64) -> [f64; 4] {
    [
        (4.0 + f4 + f2 * (1.0 + 2.0 * f4)) / 16.0,
        (6.0 + f2 + f4) / 16.0,
        (2.0 - f4 - f2 * (1.0 + 2.0 * f4)) / 16.0,
        (4.0 - f2 - f4) / 16.0,
    ]
}

/// Mixedness Tr[rho'^2] of the unilateral weak pair-2 state for the
/// maximally entangled initial state (theta = pi/4).
pub fn mixedness_unilateral_weak(g1: f64, g2: f64) -> Result<f64> {
    check_gain("g1", g1)?;
    check_gain("g2", g2)?;
    let f1 = disturbance(Strategy::Weak, g1);
    let f2 = disturbance(Strategy::Weak, g2);
    Ok((2.0 + f1 * f1 + f2 * f2 + t_factor(f1) * t_factor(f2)) / 8.0)
}

/// Mixedness of the unilateral PPM pair-2 state at arbitrary theta.
pub fn mixedness_unilateral_ppm(theta: f64, g1: f64, g2: f64) -> Result<f64> {
    check_theta(theta)?;
    check_gain("g1", g1)?;
    check_gain("g2", g2)?;
    let f1 = disturbance(Strategy::Ppm, g1);
    let f2 = disturbance(Strategy::Ppm, g2);
    let c4 = (4.0 * theta).cos();
    Ok((8.0
        + f1 * t_factor(f1)
        + (t_factor(f1) + 2.0 * t_factor(f2)) * f2
        + (1.0 - f1) * (t_factor(f1) + t_factor(f2)) * c4)
        / 16.0)
}
