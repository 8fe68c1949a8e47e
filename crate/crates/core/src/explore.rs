//! Parameter-space machinery: deterministic grid scans, maximin search over
//! min(pair-1, pair-2) criteria, and implicit-boundary tracing.
//!
//! Scans evaluate the simulator cell by cell; cells are independent work
//! units and the row order is the lexicographic order of the axes, so the
//! output is identical whatever the worker count. The optimizer runs a
//! coarse grid pass, refines the best cells with a bounded Nelder-Mead
//! simplex, and re-verifies the winner on a dense local grid. Objectives
//! with kinks (min, abs, square roots) are exactly why the refinement is
//! derivative-free.

use rayon::prelude::*;

use crate::criteria::{closed_form, criterion, CriterionKind, Strategy};
use crate::quantum::StrategyKind;
use crate::scenario::{pair_state, ScenarioConfig, ScenarioTag};
use crate::witness::ppt_report;
use crate::{Error, Result};

/// Parameters a scan axis can range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamName {
    Theta,
    G1,
    G2,
    G3,
    G4,
}

impl ParamName {
    pub fn family(tag: ScenarioTag) -> &'static [ParamName] {
        match tag {
            ScenarioTag::Unilateral => &[ParamName::Theta, ParamName::G1, ParamName::G2],
            ScenarioTag::Bilateral => &[
                ParamName::Theta,
                ParamName::G1,
                ParamName::G2,
                ParamName::G3,
                ParamName::G4,
            ],
        }
    }
}

impl std::fmt::Display for ParamName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamName::Theta => write!(f, "theta"),
            ParamName::G1 => write!(f, "G1"),
            ParamName::G2 => write!(f, "G2"),
            ParamName::G3 => write!(f, "G3"),
            ParamName::G4 => write!(f, "G4"),
        }
    }
}

impl std::str::FromStr for ParamName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(ParamName::Theta),
            "G1" | "g1" => Ok(ParamName::G1),
            "G2" | "g2" => Ok(ParamName::G2),
            "G3" | "g3" => Ok(ParamName::G3),
            "G4" | "g4" => Ok(ParamName::G4),
            _ => Err(Error::InvalidSpec(format!("unknown parameter '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Axis {
    pub param: ParamName,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    /// i-th grid point; a single-step axis sits at `lo`.
    pub fn value(&self, i: usize) -> f64 {
        if self.steps < 2 {
            return self.lo;
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
    }
}

/// Full description of a grid scan.
#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub scenario: ScenarioTag,
    pub strategy: Strategy,
    pub axes: Vec<Axis>,
    pub fixed: Vec<(ParamName, f64)>,
    /// `(target, source)` pairs: the target parameter copies the source.
    pub ties: Vec<(ParamName, ParamName)>,
}

/// Assignment of every family parameter to a value.
#[derive(Clone, Debug)]
pub struct ParamVector {
    pub theta: f64,
    pub gains: Vec<f64>,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidSpec("at least one axis required".into()));
        }
        for axis in &self.axes {
            if axis.lo >= axis.hi || axis.steps < 2 {
                return Err(Error::InvalidSpec(format!(
                    "axis {} needs lo < hi and steps >= 2",
                    axis.param
                )));
            }
        }
        let family = ParamName::family(self.scenario);
        for p in family {
            let n_axis = self.axes.iter().filter(|a| a.param == *p).count();
            let n_fixed = self.fixed.iter().filter(|(q, _)| q == p).count();
            let n_tied = self.ties.iter().filter(|(q, _)| q == p).count();
            if n_axis + n_fixed + n_tied != 1 {
                return Err(Error::InvalidSpec(format!(
                    "parameter {p} must be covered exactly once (axis, fixed, or tie)"
                )));
            }
        }
        for (p, _) in self.axes.iter().map(|a| (a.param, ())) {
            if !family.contains(&p) {
                return Err(Error::InvalidSpec(format!("parameter {p} not in family")));
            }
        }
        for (target, source) in &self.ties {
            if !family.contains(target) || !family.contains(source) {
                return Err(Error::InvalidSpec("tie parameter not in family".into()));
            }
            let source_is_axis = self.axes.iter().any(|a| a.param == *source);
            let source_is_fixed = self.fixed.iter().any(|(q, _)| q == source);
            if !source_is_axis && !source_is_fixed {
                return Err(Error::InvalidSpec(format!(
                    "tie source {source} must be an axis or fixed parameter"
                )));
            }
        }
        Ok(())
    }

    /// Builds the full parameter vector from one value per axis.
    pub fn assemble(&self, axis_values: &[f64]) -> Result<ParamVector> {
        let family = ParamName::family(self.scenario);
        let lookup = |p: ParamName| -> Option<f64> {
            if let Some(i) = self.axes.iter().position(|a| a.param == p) {
                return Some(axis_values[i]);
            }
            if let Some((_, v)) = self.fixed.iter().find(|(q, _)| *q == p) {
                return Some(*v);
            }
            None
        };
        let resolve = |p: ParamName| -> Result<f64> {
            if let Some(v) = lookup(p) {
                return Ok(v);
            }
            if let Some((_, source)) = self.ties.iter().find(|(q, _)| *q == p) {
                if let Some(v) = lookup(*source) {
                    return Ok(v);
                }
            }
            Err(Error::InvalidSpec(format!("parameter {p} unresolved")))
        };
        let theta = resolve(ParamName::Theta)?;
        let gains = family[1..]
            .iter()
            .map(|p| resolve(*p))
            .collect::<Result<Vec<f64>>>()?;
        Ok(ParamVector { theta, gains })
    }

    fn total_cells(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    fn cell_values(&self, mut idx: usize) -> Vec<f64> {
        // lexicographic: first axis is the slowest
        let mut values = vec![0.0; self.axes.len()];
        for (i, axis) in self.axes.iter().enumerate().rev() {
            values[i] = axis.value(idx % axis.steps);
            idx /= axis.steps;
        }
        values
    }
}

/// One scanned cell. Criterion slots are `None` when the evaluation failed
/// (singular Pearson variance, undefined conditional); the status string
/// says why and the row is kept.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub axis_values: Vec<f64>,
    pub i1: Option<f64>,
    pub i2: Option<f64>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub min_i: Option<f64>,
    pub min_s: Option<f64>,
    pub min_c: Option<f64>,
    pub dv_i: Option<bool>,
    pub dv_s: Option<bool>,
    pub dv_c: Option<bool>,
    pub ppt_min_eig: Option<f64>,
    pub purity: Option<f64>,
    pub status: String,
}

fn build_config(
    tag: ScenarioTag,
    strategy: Strategy,
    params: &ParamVector,
) -> Result<ScenarioConfig> {
    let kind = match strategy {
        Strategy::Weak => StrategyKind::Weak,
        Strategy::Ppm => StrategyKind::Ppm,
    };
    match tag {
        ScenarioTag::Unilateral => {
            ScenarioConfig::unilateral(params.theta, kind, params.gains[0], params.gains[1])
        }
        ScenarioTag::Bilateral => ScenarioConfig::bilateral(
            params.theta,
            kind,
            [
                params.gains[0],
                params.gains[1],
                params.gains[2],
                params.gains[3],
            ],
        ),
    }
}

fn scan_cell(spec: &ScanSpec, axis_values: Vec<f64>) -> Result<ScanRow> {
    let params = spec.assemble(&axis_values)?;
    let cfg = match build_config(spec.scenario, spec.strategy, &params) {
        Ok(cfg) => cfg,
        // e.g. a grid endpoint with gain 0: record the cell, not an abort
        Err(_) => {
            return Ok(ScanRow {
                axis_values,
                i1: None,
                i2: None,
                s1: None,
                s2: None,
                c1: None,
                c2: None,
                min_i: None,
                min_s: None,
                min_c: None,
                dv_i: None,
                dv_s: None,
                dv_c: None,
                ppt_min_eig: None,
                purity: None,
                status: "invalid-params".to_string(),
            })
        }
    };
    let mut status: Vec<&str> = Vec::new();
    let mut eval = |kind: CriterionKind, tag: &'static str| -> (Option<f64>, Option<f64>) {
        let v1 = criterion(&cfg, kind, 1).map(|v| v.total).ok();
        let v2 = criterion(&cfg, kind, 2).map(|v| v.total).ok();
        if v1.is_none() || v2.is_none() {
            status.push(tag);
        }
        (v1, v2)
    };
    let (i1, i2) = eval(CriterionKind::MutualInfo, "mutual-info-failed");
    let (s1, s2) = eval(CriterionKind::CondProbSum, "undefined-conditional");
    let (c1, c2) = eval(CriterionKind::Pearson, "singular-pearson");
    let pair2 = pair_state(&cfg, 2)?;
    let report = ppt_report(&pair2);
    let pairwise = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => (Some(a.min(b)), Some(a), Some(b)),
        _ => (None, a, b),
    };
    let (min_i, i1, i2) = pairwise(i1, i2);
    let (min_s, s1, s2) = pairwise(s1, s2);
    let (min_c, c1, c2) = pairwise(c1, c2);
    let dv = |kind: CriterionKind, a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => Some(kind.double_violation(a, b)),
        _ => None,
    };
    Ok(ScanRow {
        dv_i: dv(CriterionKind::MutualInfo, i1, i2),
        dv_s: dv(CriterionKind::CondProbSum, s1, s2),
        dv_c: dv(CriterionKind::Pearson, c1, c2),
        axis_values,
        i1,
        i2,
        s1,
        s2,
        c1,
        c2,
        min_i,
        min_s,
        min_c,
        ppt_min_eig: Some(report.min_eig),
        purity: Some(report.mixedness),
        status: if status.is_empty() {
            "ok".to_string()
        } else {
            status.join(";")
        },
    })
}

/// Evaluates the simulator over the full grid. Rows come back in
/// lexicographic axis order regardless of how many workers run the cells.
pub fn grid_scan(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    let total = spec.total_cells();
    (0..total)
        .into_par_iter()
        .map(|idx| scan_cell(spec, spec.cell_values(idx)))
        .collect()
}

/// Result of a maximin search.
#[derive(Clone, Debug)]
pub struct OptimumReport {
    pub value: f64,
    pub argmax: Vec<(ParamName, f64)>,
    pub evaluations: usize,
    pub converged: bool,
}

const COARSE_STEPS: usize = 41;
const REFINE_SEEDS: usize = 5;
const SIMPLEX_DIAMETER_TOL: f64 = 1e-6;
const POLISH_STEPS: usize = 201;

struct Maximizer<'a> {
    obj: &'a (dyn Fn(&[f64]) -> Option<f64> + Sync),
    domain: &'a [(f64, f64)],
    evals: usize,
}

impl<'a> Maximizer<'a> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        self.evals += 1;
        (self.obj)(x)
    }

    /// Bounded Nelder-Mead on -f. Deterministic: no randomness, stable
    /// ordering with index tie-breaks.
    fn nelder_mead(&mut self, x0: &[f64], scale: &[f64]) -> (Vec<f64>, f64, bool) {
        let n = x0.len();
        let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
        for i in 0..n {
            let mut v = x0.to_vec();
            let (lo, hi) = self.domain[i];
            let step = scale[i].max(1e-9);
            v[i] = if v[i] + step <= hi {
                v[i] + step
            } else {
                v[i] - step
            };
            v[i] = v[i].clamp(lo, hi);
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex
            .iter()
            .map(|x| self.eval(x).unwrap_or(f64::NEG_INFINITY))
            .collect();
        let mut converged = false;
        for _ in 0..500 {
            // sort descending by value, stable in the original order
            let mut order: Vec<usize> = (0..simplex.len()).collect();
            order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
            let simplex2: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
            let values2: Vec<f64> = order.iter().map(|&i| values[i]).collect();
            simplex = simplex2;
            values = values2;

            let mut diameter = 0.0f64;
            for i in 0..simplex.len() {
                for j in (i + 1)..simplex.len() {
                    let d: f64 = simplex[i]
                        .iter()
                        .zip(&simplex[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    diameter = diameter.max(d);
                }
            }
            if diameter < SIMPLEX_DIAMETER_TOL {
                converged = true;
                break;
            }

            let worst = simplex.len() - 1;
            let centroid: Vec<f64> = (0..n)
                .map(|d| simplex[..worst].iter().map(|x| x[d]).sum::<f64>() / worst as f64)
                .collect();
            let worst_vertex = simplex[worst].clone();
            let domain = self.domain;
            let blend = move |alpha: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst_vertex)
                    .zip(domain)
                    .map(|((c, w), (lo, hi))| (c + alpha * (c - w)).clamp(*lo, *hi))
                    .collect()
            };

            let reflected = blend(1.0);
            let f_reflected = self.eval(&reflected).unwrap_or(f64::NEG_INFINITY);
            if f_reflected > values[0] {
                let expanded = blend(2.0);
                let f_expanded = self.eval(&expanded).unwrap_or(f64::NEG_INFINITY);
                if f_expanded > f_reflected {
                    simplex[worst] = expanded;
                    values[worst] = f_expanded;
                } else {
                    simplex[worst] = reflected;
                    values[worst] = f_reflected;
                }
                continue;
            }
            if f_reflected > values[worst - 1] {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
                continue;
            }
            let contracted = blend(-0.5);
            let f_contracted = self.eval(&contracted).unwrap_or(f64::NEG_INFINITY);
            if f_contracted > values[worst] {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
                continue;
            }
            // shrink toward the best vertex
            for i in 1..simplex.len() {
                let best = simplex[0].clone();
                for d in 0..n {
                    simplex[i][d] = best[d] + 0.5 * (simplex[i][d] - best[d]);
                }
                values[i] = self.eval(&simplex[i]).unwrap_or(f64::NEG_INFINITY);
            }
        }
        let mut best = 0;
        for i in 1..simplex.len() {
            if values[i] > values[best] {
                best = i;
            }
        }
        (simplex[best].clone(), values[best], converged)
    }
}

/// Maximizes an objective over a box: 41-per-axis coarse grid, Nelder-Mead
/// refinement from the best five cells, then a dense local grid around the
/// winner (201 per axis up to two dimensions, 21 beyond) with one final
/// refinement. Objective cells returning `None` are excluded, never given
/// sentinel values.
pub fn maximize(
    obj: &(dyn Fn(&[f64]) -> Option<f64> + Sync),
    names: &[ParamName],
    domain: &[(f64, f64)],
) -> Result<OptimumReport> {
    assert_eq!(names.len(), domain.len());
    let n = domain.len();
    let mut m = Maximizer {
        obj,
        domain,
        evals: 0,
    };

    // coarse pass
    let total: usize = COARSE_STEPS.pow(n as u32);
    let mut cells: Vec<(f64, Vec<f64>)> = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut x = vec![0.0; n];
        for d in (0..n).rev() {
            let i = rest % COARSE_STEPS;
            rest /= COARSE_STEPS;
            let (lo, hi) = domain[d];
            x[d] = lo + (hi - lo) * i as f64 / (COARSE_STEPS - 1) as f64;
        }
        if let Some(v) = m.eval(&x) {
            cells.push((v, x));
        }
    }
    if cells.is_empty() {
        return Err(Error::EmptyObjective);
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let coarse_best = cells[0].0;

    let scale: Vec<f64> = domain
        .iter()
        .map(|(lo, hi)| (hi - lo) / (COARSE_STEPS - 1) as f64)
        .collect();

    let mut best_x = cells[0].1.clone();
    let mut best_v = coarse_best;
    let mut converged = true;
    for (_, x) in cells.iter().take(REFINE_SEEDS) {
        let (xr, vr, conv) = m.nelder_mead(x, &scale);
        if vr > best_v {
            best_v = vr;
            best_x = xr;
            converged = conv;
        }
    }

    // dense local verification grid around the incumbent
    let polish_steps = if n <= 2 { POLISH_STEPS } else { 21 };
    let mut polish_best: Option<(f64, Vec<f64>)> = None;
    let p_total: usize = polish_steps.pow(n as u32);
    for idx in 0..p_total {
        let mut rest = idx;
        let mut x = vec![0.0; n];
        for d in (0..n).rev() {
            let i = rest % polish_steps;
            rest /= polish_steps;
            let (lo, hi) = domain[d];
            let half = scale[d];
            let a = (best_x[d] - half).max(lo);
            let b = (best_x[d] + half).min(hi);
            x[d] = a + (b - a) * i as f64 / (polish_steps - 1) as f64;
        }
        if let Some(v) = m.eval(&x) {
            if polish_best.as_ref().is_none_or(|(pv, _)| v > *pv) {
                polish_best = Some((v, x));
            }
        }
    }
    if let Some((pv, px)) = polish_best {
        if pv > best_v {
            let tight: Vec<f64> = scale.iter().map(|s| s / 100.0).collect();
            let (xr, vr, conv) = m.nelder_mead(&px, &tight);
            if vr > pv {
                best_v = vr;
                best_x = xr;
            } else {
                best_v = pv;
                best_x = px;
            }
            converged = conv;
        }
    }

    debug_assert!(best_v >= coarse_best);
    Ok(OptimumReport {
        value: best_v,
        argmax: names.iter().copied().zip(best_x).collect(),
        evaluations: m.evals,
        converged,
    })
}

/// min over the two pairs of one criterion, as a function of the free
/// parameters. Closed forms back every family except the bilateral PPM
/// mutual information, which runs through the simulator.
pub fn min_criterion_objective(
    scenario: ScenarioTag,
    strategy: Strategy,
    kind: CriterionKind,
    free: Vec<ParamName>,
    fixed: Vec<(ParamName, f64)>,
    ties: Vec<(ParamName, ParamName)>,
) -> impl Fn(&[f64]) -> Option<f64> + Sync {
    let use_engine = scenario == ScenarioTag::Bilateral
        && strategy == Strategy::Ppm
        && kind == CriterionKind::MutualInfo;
    move |x: &[f64]| -> Option<f64> {
        let lookup = |p: ParamName| -> Option<f64> {
            if let Some(i) = free.iter().position(|q| *q == p) {
                return Some(x[i]);
            }
            if let Some((_, v)) = fixed.iter().find(|(q, _)| *q == p) {
                return Some(*v);
            }
            None
        };
        let resolve = |p: ParamName| -> Option<f64> {
            lookup(p).or_else(|| {
                ties.iter()
                    .find(|(q, _)| *q == p)
                    .and_then(|(_, source)| lookup(*source))
            })
        };
        let family = ParamName::family(scenario);
        let theta = resolve(ParamName::Theta)?;
        let gains: Vec<f64> = family[1..]
            .iter()
            .map(|p| resolve(*p))
            .collect::<Option<Vec<f64>>>()?;
        let value_for = |k: usize| -> Option<f64> {
            if use_engine {
                let params = ParamVector {
                    theta,
                    gains: gains.clone(),
                };
                let cfg = build_config(scenario, strategy, &params).ok()?;
                criterion(&cfg, kind, k).ok().map(|v| v.total)
            } else {
                closed_form(scenario, strategy, kind, k, theta, &gains).ok()
            }
        };
        let v1 = value_for(1)?;
        let v2 = value_for(2)?;
        Some(v1.min(v2))
    }
}

/// Convenience wrapper: maximin of `min(criterion_1, criterion_2)` over the
/// free parameters.
pub fn maximin(
    scenario: ScenarioTag,
    strategy: Strategy,
    kind: CriterionKind,
    free: &[(ParamName, f64, f64)],
    fixed: &[(ParamName, f64)],
    ties: &[(ParamName, ParamName)],
) -> Result<OptimumReport> {
    let names: Vec<ParamName> = free.iter().map(|(p, _, _)| *p).collect();
    let domain: Vec<(f64, f64)> = free.iter().map(|(_, lo, hi)| (*lo, *hi)).collect();
    let obj = min_criterion_objective(
        scenario,
        strategy,
        kind,
        names.clone(),
        fixed.to_vec(),
        ties.to_vec(),
    );
    maximize(&obj, &names, &domain)
}

/// A traced boundary point: the root of `f(sweep, y) = threshold` in y, or
/// `None` when no sign change exists along the solve interval.
#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub sweep: f64,
    pub root: Option<f64>,
}

const BRACKET_STEPS: usize = 256;

/// For each sweep value, brackets and bisects the first root of
/// `f(sweep, y) - threshold` over `[solve_lo, solve_hi]`. Cells where `f`
/// is undefined are skipped during bracketing; absence of a root is data.
pub fn boundary_trace(
    f: &dyn Fn(f64, f64) -> Option<f64>,
    threshold: f64,
    sweep_values: &[f64],
    solve_lo: f64,
    solve_hi: f64,
) -> Vec<BoundaryPoint> {
    let g = |x: f64, y: f64| f(x, y).map(|v| v - threshold);
    sweep_values
        .iter()
        .map(|&x| {
            let mut prev: Option<(f64, f64)> = None;
            let mut root = None;
            for i in 0..=BRACKET_STEPS {
                let y = solve_lo + (solve_hi - solve_lo) * i as f64 / BRACKET_STEPS as f64;
                let Some(gy) = g(x, y) else {
                    prev = None;
                    continue;
                };
                if gy == 0.0 {
                    root = Some(y);
                    break;
                }
                if let Some((py, pg)) = prev {
                    if pg.signum() != gy.signum() {
                        root = Some(bisect(&g, x, py, y, pg));
                        break;
                    }
                }
                prev = Some((y, gy));
            }
            BoundaryPoint { sweep: x, root }
        })
        .collect()
}

fn bisect(g: &dyn Fn(f64, f64) -> Option<f64>, x: f64, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let mut sign_lo = g_lo.signum();
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-13 {
            return mid;
        }
        match g(x, mid) {
            Some(0.0) => return mid,
            Some(v) => {
                if v.signum() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if lo == mid {
                    sign_lo = v.signum();
                }
            }
            // undefined mid-cell: shrink toward the known-good side
            None => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn unilateral_weak_grid(steps: usize) -> ScanSpec {
        ScanSpec {
            scenario: ScenarioTag::Unilateral,
            strategy: Strategy::Weak,
            axes: vec![
                Axis {
                    param: ParamName::G1,
                    lo: 0.05,
                    hi: 1.0,
                    steps,
                },
                Axis {
                    param: ParamName::G2,
                    lo: 0.05,
                    hi: 1.0,
                    steps,
                },
            ],
            fixed: vec![(ParamName::Theta, FRAC_PI_4)],
            ties: vec![],
        }
    }

    #[test]
    fn grid_scan_headline_cells() {
        let spec = ScanSpec {
            scenario: ScenarioTag::Unilateral,
            strategy: Strategy::Weak,
            axes: vec![
                Axis {
                    param: ParamName::G1,
                    lo: 0.0,
                    hi: 1.0,
                    steps: 11,
                },
                Axis {
                    param: ParamName::G2,
                    lo: 0.0,
                    hi: 1.0,
                    steps: 11,
                },
            ],
            fixed: vec![(ParamName::Theta, FRAC_PI_4)],
            ties: vec![],
        };
        let rows = grid_scan(&spec).unwrap();
        assert_eq!(rows.len(), 121);

        // cell (1.0, 1.0): S1 = 4, S2 = 3, so min_S = 3
        let last = rows.last().unwrap();
        assert!((last.s1.unwrap() - 4.0).abs() < 1e-12);
        assert!((last.s2.unwrap() - 3.0).abs() < 1e-12);
        assert!((last.min_s.unwrap() - 3.0).abs() < 1e-12);

        // cell (0.8, 0.8): min_S = 18/5
        let row = rows
            .iter()
            .find(|r| {
                (r.axis_values[0] - 0.8).abs() < 1e-12 && (r.axis_values[1] - 0.8).abs() < 1e-12
            })
            .unwrap();
        assert!((row.min_s.unwrap() - 3.6).abs() < 1e-12);

        // flags are definitional
        for r in &rows {
            if let (Some(s1), Some(s2), Some(dv)) = (r.s1, r.s2, r.dv_s) {
                assert_eq!(dv, (s1 > 3.0 && s2 > 3.0) || (s1 < 1.0 && s2 < 1.0));
            }
            let zero_gain = r.axis_values.contains(&0.0);
            if zero_gain {
                assert_eq!(r.status, "invalid-params");
            } else {
                assert_eq!(r.status, "ok");
            }
        }
    }

    #[test]
    fn grid_scan_records_singular_cells() {
        let spec = ScanSpec {
            scenario: ScenarioTag::Unilateral,
            strategy: Strategy::Weak,
            axes: vec![Axis {
                param: ParamName::Theta,
                lo: 0.0,
                hi: FRAC_PI_4,
                steps: 5,
            }],
            fixed: vec![(ParamName::G1, 0.8), (ParamName::G2, 0.8)],
            ties: vec![],
        };
        let rows = grid_scan(&spec).unwrap();
        assert_eq!(rows.len(), 5);
        let first = &rows[0]; // theta = 0: Pearson singular, conditionals undefined
        assert!(first.c1.is_none());
        assert!(first.status.contains("singular-pearson"));
        assert!(first.status.contains("undefined-conditional"));
        assert!(rows[4].status == "ok");
    }

    #[test]
    fn grid_scan_is_deterministic_across_worker_counts() {
        let spec = unilateral_weak_grid(7);
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let rows1 = pool1.install(|| grid_scan(&spec)).unwrap();
        let rows4 = pool4.install(|| grid_scan(&spec)).unwrap();
        assert_eq!(rows1.len(), rows4.len());
        for (a, b) in rows1.iter().zip(rows4.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn tied_scan_matches_diagonal_of_full_scan() {
        let axis = Axis {
            param: ParamName::G1,
            lo: 0.1,
            hi: 1.0,
            steps: 10,
        };
        let tied = ScanSpec {
            scenario: ScenarioTag::Unilateral,
            strategy: Strategy::Weak,
            axes: vec![axis],
            fixed: vec![(ParamName::Theta, FRAC_PI_4)],
            ties: vec![(ParamName::G2, ParamName::G1)],
        };
        let rows_tied = grid_scan(&tied).unwrap();
        let full = ScanSpec {
            scenario: ScenarioTag::Unilateral,
            strategy: Strategy::Weak,
            axes: vec![
                axis,
                Axis {
                    param: ParamName::G2,
                    ..axis
                },
            ],
            fixed: vec![(ParamName::Theta, FRAC_PI_4)],
            ties: vec![],
        };
        let rows_full = grid_scan(&full).unwrap();
        // diagonal cells of the full scan carry bit-identical axis values
        for (j, tied_row) in rows_tied.iter().enumerate() {
            let full_row = &rows_full[j * 10 + j];
            assert_eq!(full_row.axis_values[0], tied_row.axis_values[0]);
            assert_eq!(full_row.axis_values[1], tied_row.axis_values[0]);
            assert!((tied_row.min_s.unwrap() - full_row.min_s.unwrap()).abs() < 1e-12);
            assert!((tied_row.min_i.unwrap() - full_row.min_i.unwrap()).abs() < 1e-12);
            assert!((tied_row.min_c.unwrap() - full_row.min_c.unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_spec_validation() {
        let mut spec = unilateral_weak_grid(5);
        spec.fixed.clear(); // theta uncovered
        assert!(spec.validate().is_err());

        let mut spec = unilateral_weak_grid(5);
        spec.axes[0].steps = 1;
        assert!(spec.validate().is_err());

        let mut spec = unilateral_weak_grid(5);
        spec.fixed.push((ParamName::G1, 0.5)); // covered twice
        assert!(spec.validate().is_err());
    }

    #[test]
    fn maximize_recovers_known_optimum() {
        // smooth concave test objective with the max at (0.3, 0.7)
        let obj = |x: &[f64]| -> Option<f64> {
            Some(1.0 - (x[0] - 0.3).powi(2) - 2.0 * (x[1] - 0.7).powi(2))
        };
        let report = maximize(
            &obj,
            &[ParamName::G1, ParamName::G2],
            &[(0.0, 1.0), (0.0, 1.0)],
        )
        .unwrap();
        assert!((report.value - 1.0).abs() < 1e-9);
        assert!((report.argmax[0].1 - 0.3).abs() < 1e-4);
        assert!((report.argmax[1].1 - 0.7).abs() < 1e-4);
        assert!(report.converged);

        // re-evaluating the objective at the argmax reproduces the value
        let x: Vec<f64> = report.argmax.iter().map(|(_, v)| *v).collect();
        assert!((obj(&x).unwrap() - report.value).abs() < 1e-12);
    }

    #[test]
    fn maximin_cond_sum_reaches_18_over_5() {
        let report = maximin(
            ScenarioTag::Unilateral,
            Strategy::Weak,
            CriterionKind::CondProbSum,
            &[(ParamName::G1, 0.0, 1.0), (ParamName::G2, 0.0, 1.0)],
            &[(ParamName::Theta, FRAC_PI_4)],
            &[],
        )
        .unwrap();
        assert!((report.value - 3.6).abs() < 1e-6, "got {}", report.value);
        for (_, v) in &report.argmax {
            assert!((v - 0.8).abs() < 1e-3);
        }
    }

    #[test]
    fn boundary_trace_recovers_line() {
        // unilateral weak S1 = 3 at theta = pi/4 is the line G1 = 1 - G2
        let f = |g2: f64, g1: f64| {
            closed_form(
                ScenarioTag::Unilateral,
                Strategy::Weak,
                CriterionKind::CondProbSum,
                1,
                FRAC_PI_4,
                &[g1, g2],
            )
            .ok()
        };
        let sweep: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
        let points = boundary_trace(&f, 3.0, &sweep, 0.0, 1.0);
        for p in points {
            let root = p.root.expect("root exists on the line");
            assert!((root - (1.0 - p.sweep)).abs() < 1e-8);
            // the implicit equation is satisfied at the root
            let v = f(p.sweep, root).unwrap();
            assert!((v - 3.0).abs() < 1e-7);
        }
    }

    #[test]
    fn boundary_trace_reports_absent_roots() {
        let f = |_x: f64, y: f64| Some(y * y + 1.0); // never zero
        let points = boundary_trace(&f, 0.0, &[0.5], -1.0, 1.0);
        assert!(points[0].root.is_none());
    }
}
