//! Command-line surface for the entanglement-sharing toolkit.
//!
//! Subcommands: `eval` (criteria at one parameter point), `scan` (grid
//! scans), `optimize` (maximin search), `boundary` (implicit-curve tracing),
//! `verify` (seeded closed-form equivalence suites), `reproduce` (golden
//! number table).
//!
//! Exit codes: 0 success, 1 tolerance failure (verify/reproduce), 2 usage or
//! config error.

mod config;
mod emit;
mod parse;

use clap::{Args, Parser, Subcommand};

use entshare::criteria::{closed_form, criterion, CriterionKind, CriterionValue, Strategy};
use entshare::explore::{boundary_trace, grid_scan, maximin, Axis, ParamName, ScanSpec};
use entshare::quantum::StrategyKind;
use entshare::reproduce;
use entshare::scenario::{ScenarioConfig, ScenarioTag};
use entshare::verify;
use entshare::Error as CoreError;

use emit::Format;

#[derive(Parser)]
#[command(
    name = "entshare",
    version,
    about = "Simulate and verify entanglement sharing under sequential two-qubit measurements"
)]
struct Cli {
    /// Worker threads for scans (default: ES_WORKERS or all cores).
    /// Changes wall time only, never output bytes.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every criterion at one parameter point
    Eval(EvalArgs),
    /// Scan the simulator over a parameter grid
    Scan(ScanArgs),
    /// Maximize min(pair-1, pair-2) of a criterion over free parameters
    Optimize(OptimizeArgs),
    /// Trace the curve where a criterion crosses a threshold
    Boundary(BoundaryArgs),
    /// Run the seeded equivalence suites
    Verify(VerifyArgs),
    /// Recompute the golden table of headline numbers
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct ScenarioFlags {
    /// unilateral | bilateral
    #[arg(long)]
    scenario: Option<String>,
    /// weak | ppm
    #[arg(long)]
    strategy: Option<String>,
    /// Angle in radians, or pi/4, pi/6, pi/12
    #[arg(long)]
    theta: Option<String>,
    /// Gain of the first-chain intermediate, setting 1 (Z basis)
    #[arg(long)]
    g1: Option<f64>,
    /// Gain of the first-chain intermediate, setting 2 (X basis)
    #[arg(long)]
    g2: Option<f64>,
    /// Bilateral only: second-side intermediate, setting 1
    #[arg(long)]
    g3: Option<f64>,
    /// Bilateral only: second-side intermediate, setting 2
    #[arg(long)]
    g4: Option<f64>,
    /// Shorthand: one gain for every intermediate setting
    #[arg(long)]
    g: Option<f64>,
    /// Scenario config file (overrides the inline flags)
    #[arg(long)]
    config: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    point: ScenarioFlags,
}

#[derive(Args)]
struct ScanArgs {
    /// unilateral | bilateral
    #[arg(long)]
    scenario: String,
    /// weak | ppm
    #[arg(long)]
    strategy: String,
    /// Axis NAME=lo:hi:steps (repeatable)
    #[arg(long = "axis")]
    axes: Vec<String>,
    /// Pin a parameter: NAME=value (repeatable)
    #[arg(long = "fix")]
    fixed: Vec<String>,
    /// Tie a parameter to another: TARGET=SOURCE (repeatable)
    #[arg(long = "tie")]
    ties: Vec<String>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long)]
    strategy: String,
    /// I | S | C
    #[arg(long)]
    objective: String,
    /// Free parameter NAME=lo:hi (repeatable)
    #[arg(long = "free")]
    free: Vec<String>,
    #[arg(long = "fix")]
    fixed: Vec<String>,
    #[arg(long = "tie")]
    ties: Vec<String>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct BoundaryArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long)]
    strategy: String,
    /// I1 | I2 | S1 | S2 | C1 | C2
    #[arg(long)]
    criterion: String,
    #[arg(long)]
    threshold: f64,
    /// Sweep axis NAME=lo:hi:steps
    #[arg(long)]
    sweep: String,
    /// Solve range NAME=lo:hi
    #[arg(long)]
    solve: String,
    #[arg(long = "fix")]
    fixed: Vec<String>,
    #[arg(long = "tie")]
    ties: Vec<String>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for the tuple generator
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Tuples per criterion family (eigenvalue and mixedness suites are
    /// capped at 500 and 200)
    #[arg(long, default_value_t = 1000)]
    count: usize,
}

#[derive(Args)]
struct ReproduceArgs {
    /// csv | json; applies to --out (stdout always shows the text table)
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

/// Usage/config failure (exit 2).
struct UsageError(String);

impl From<String> for UsageError {
    fn from(s: String) -> Self {
        UsageError(s)
    }
}

impl From<CoreError> for UsageError {
    fn from(e: CoreError) -> Self {
        UsageError(e.to_string())
    }
}

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.workers.or_else(|| {
        std::env::var("ES_WORKERS")
            .ok()
            .and_then(|s| s.parse().ok())
    }) {
        // scheduling changes wall time only; output is order-independent
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32, UsageError> {
    match command {
        Command::Eval(args) => cmd_eval(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Boundary(args) => cmd_boundary(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

fn scenario_from_flags(flags: &ScenarioFlags) -> Result<ScenarioConfig, UsageError> {
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)?;
        return Ok(config::load_scenario(&text)?);
    }
    let tag = parse::parse_scenario(
        flags
            .scenario
            .as_deref()
            .ok_or_else(|| "missing --scenario (or --config)".to_string())?,
    )?;
    let strategy = parse::parse_strategy(
        flags
            .strategy
            .as_deref()
            .ok_or_else(|| "missing --strategy".to_string())?,
    )?;
    let kind = match strategy {
        Strategy::Weak => StrategyKind::Weak,
        Strategy::Ppm => StrategyKind::Ppm,
    };
    let theta = parse::parse_angle(
        flags
            .theta
            .as_deref()
            .ok_or_else(|| "missing --theta".to_string())?,
    )?;
    let gain = |explicit: Option<f64>, name: &str| -> Result<f64, UsageError> {
        explicit
            .or(flags.g)
            .ok_or_else(|| UsageError(format!("missing --{name} (or --g)")))
    };
    let cfg = match tag {
        ScenarioTag::Unilateral => {
            if flags.g3.is_some() || flags.g4.is_some() {
                return Err("unilateral scenarios take --g1/--g2 only"
                    .to_string()
                    .into());
            }
            ScenarioConfig::unilateral(theta, kind, gain(flags.g1, "g1")?, gain(flags.g2, "g2")?)?
        }
        ScenarioTag::Bilateral => ScenarioConfig::bilateral(
            theta,
            kind,
            [
                gain(flags.g1, "g1")?,
                gain(flags.g2, "g2")?,
                gain(flags.g3, "g3")?,
                gain(flags.g4, "g4")?,
            ],
        )?,
    };
    Ok(cfg)
}

/// Total as text, with singular/undefined evaluations shown as a labelled
/// status instead of failing the command.
fn criterion_cell(v: &entshare::Result<CriterionValue>) -> Result<String, UsageError> {
    match v {
        Ok(v) => Ok(emit::fmt_f64(v.total)),
        Err(CoreError::SingularVariance(_)) => Ok("SINGULAR".to_string()),
        Err(CoreError::UndefinedConditional(_)) => Ok("UNDEFINED".to_string()),
        Err(e) => Err(UsageError(e.to_string())),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<i32, UsageError> {
    let cfg = scenario_from_flags(&args.point)?;
    let report = reproduce::eval_point(&cfg)?;
    println!(
        "scenario = {}, theta = {}",
        cfg.tag(),
        emit::fmt_f64(cfg.theta())
    );
    println!(
        "{:<10} {:>22} {:>22} {:>22} {:<12} verdict",
        "criterion", "pair1", "pair2", "min", "threshold"
    );
    for (kind, v1, v2) in &report.values {
        let (label, threshold) = match kind {
            CriterionKind::MutualInfo => ("I (bits)", "> 1"),
            CriterionKind::CondProbSum => ("S", "> 3 or < 1"),
            CriterionKind::Pearson => ("C", "> 1"),
        };
        let c1 = criterion_cell(v1)?;
        let c2 = criterion_cell(v2)?;
        let (min_text, verdict) = match (v1, v2) {
            (Ok(a), Ok(b)) => (
                emit::fmt_f64(a.total.min(b.total)),
                if kind.double_violation(a.total, b.total) {
                    "DOUBLE-VIOLATION".to_string()
                } else {
                    "no".to_string()
                },
            ),
            _ => (String::new(), c1.clone()),
        };
        println!("{label:<10} {c1:>22} {c2:>22} {min_text:>22} {threshold:<12} {verdict}");
    }
    println!(
        "{:<10} {:>22} {:>22} {:>22} {:<12} {}",
        "ppt",
        emit::fmt_f64(report.ppt_min_eig),
        "",
        "",
        "< 0",
        if report.ppt_min_eig < entshare::witness::NEGATIVITY_TOL {
            "ENTANGLED"
        } else {
            "separable"
        }
    );
    println!("{:<10} {:>22}", "purity", emit::fmt_f64(report.purity));
    Ok(0)
}

fn build_scan_spec(
    scenario: &str,
    strategy: &str,
    axes: &[String],
    fixed: &[String],
    ties: &[String],
) -> Result<ScanSpec, UsageError> {
    let spec = ScanSpec {
        scenario: parse::parse_scenario(scenario)?,
        strategy: parse::parse_strategy(strategy)?,
        axes: axes
            .iter()
            .map(|s| parse::parse_axis(s))
            .collect::<Result<Vec<Axis>, String>>()?,
        fixed: fixed
            .iter()
            .map(|s| parse::parse_fix(s))
            .collect::<Result<Vec<_>, String>>()?,
        ties: ties
            .iter()
            .map(|s| parse::parse_tie(s))
            .collect::<Result<Vec<_>, String>>()?,
    };
    spec.validate()?;
    Ok(spec)
}

fn write_or_print(out: &Option<std::path::PathBuf>, text: &str) -> Result<(), UsageError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<i32, UsageError> {
    let spec = build_scan_spec(
        &args.scenario,
        &args.strategy,
        &args.axes,
        &args.fixed,
        &args.ties,
    )?;
    let format: Format = args.format.parse()?;
    let rows = grid_scan(&spec)?;
    let text = match format {
        Format::Csv => emit::scan_csv(&spec, &rows),
        Format::Json => emit::scan_json(&spec, &rows),
    };
    write_or_print(&args.out, &text)?;
    Ok(0)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<i32, UsageError> {
    let scenario = parse::parse_scenario(&args.scenario)?;
    let strategy = parse::parse_strategy(&args.strategy)?;
    let kind = parse::parse_objective(&args.objective)?;
    let free = args
        .free
        .iter()
        .map(|s| parse::parse_range(s))
        .collect::<Result<Vec<_>, String>>()?;
    if free.is_empty() {
        return Err("at least one --free parameter required".to_string().into());
    }
    let fixed = args
        .fixed
        .iter()
        .map(|s| parse::parse_fix(s))
        .collect::<Result<Vec<_>, String>>()?;
    let ties = args
        .ties
        .iter()
        .map(|s| parse::parse_tie(s))
        .collect::<Result<Vec<_>, String>>()?;
    let report = maximin(scenario, strategy, kind, &free, &fixed, &ties)?;
    eprintln!(
        "maximin {} = {} after {} evaluations (converged: {})",
        kind.label(),
        emit::fmt_f64(report.value),
        report.evaluations,
        report.converged
    );
    for (p, v) in &report.argmax {
        eprintln!("  {p} = {}", emit::fmt_f64(*v));
    }
    let format: Format = args.format.parse()?;
    let text = match format {
        Format::Csv => emit::optimum_csv(&report),
        Format::Json => emit::optimum_json(&report),
    };
    write_or_print(&args.out, &text)?;
    Ok(0)
}

fn cmd_boundary(args: BoundaryArgs) -> Result<i32, UsageError> {
    let scenario = parse::parse_scenario(&args.scenario)?;
    let strategy = parse::parse_strategy(&args.strategy)?;
    let (kind, k) = parse::parse_criterion_selector(&args.criterion)?;
    let sweep_axis = parse::parse_axis(&args.sweep)?;
    let (solve_param, solve_lo, solve_hi) = parse::parse_range(&args.solve)?;
    let fixed = args
        .fixed
        .iter()
        .map(|s| parse::parse_fix(s))
        .collect::<Result<Vec<_>, String>>()?;
    let ties = args
        .ties
        .iter()
        .map(|s| parse::parse_tie(s))
        .collect::<Result<Vec<_>, String>>()?;

    // the bilateral PPM mutual information runs through the simulator, like
    // everywhere else in the toolkit; all other families use closed forms
    let use_engine = scenario == ScenarioTag::Bilateral
        && strategy == Strategy::Ppm
        && kind == CriterionKind::MutualInfo;
    let family = ParamName::family(scenario);
    let sweep_param = sweep_axis.param;
    let f = move |x: f64, y: f64| -> Option<f64> {
        let lookup = |p: ParamName| -> Option<f64> {
            if p == sweep_param {
                return Some(x);
            }
            if p == solve_param {
                return Some(y);
            }
            fixed.iter().find(|(q, _)| *q == p).map(|(_, v)| *v)
        };
        let resolve = |p: ParamName| -> Option<f64> {
            lookup(p).or_else(|| {
                ties.iter()
                    .find(|(q, _)| *q == p)
                    .and_then(|(_, source)| lookup(*source))
            })
        };
        let theta = resolve(ParamName::Theta)?;
        let gains: Vec<f64> = family[1..]
            .iter()
            .map(|p| resolve(*p))
            .collect::<Option<Vec<f64>>>()?;
        if use_engine {
            let cfg = ScenarioConfig::bilateral(
                theta,
                StrategyKind::Ppm,
                [gains[0], gains[1], gains[2], gains[3]],
            )
            .ok()?;
            criterion(&cfg, kind, k).ok().map(|v| v.total)
        } else {
            closed_form(scenario, strategy, kind, k, theta, &gains).ok()
        }
    };

    let sweep_values: Vec<f64> = (0..sweep_axis.steps).map(|i| sweep_axis.value(i)).collect();
    let points = boundary_trace(&f, args.threshold, &sweep_values, solve_lo, solve_hi);
    let format: Format = args.format.parse()?;
    let sweep_name = sweep_param.to_string();
    let solve_name = solve_param.to_string();
    let text = match format {
        Format::Csv => emit::boundary_csv(&sweep_name, &solve_name, &points),
        Format::Json => emit::boundary_json(&sweep_name, &solve_name, &points),
    };
    write_or_print(&args.out, &text)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, UsageError> {
    if args.count == 0 {
        return Err("--count must be at least 1".to_string().into());
    }
    let reports = verify::full_report(args.seed, args.count);
    print!("{}", emit::verify_table(&reports));
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        eprintln!("{failed} verification families exceeded their tolerance");
        Ok(1)
    } else {
        Ok(0)
    }
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<i32, UsageError> {
    let entries = reproduce::golden_table()?;
    print!("{}", emit::golden_text(&entries));
    if let Some(out) = &args.out {
        let format: Format = args.format.parse()?;
        let text = match format {
            Format::Csv => emit::golden_csv(&entries),
            Format::Json => emit::golden_json(&entries),
        };
        std::fs::write(out, text)?;
    }
    let failed = entries.iter().filter(|e| !e.passed()).count();
    if failed > 0 {
        eprintln!("{failed} golden entries exceeded their tolerance");
        Ok(1)
    } else {
        Ok(0)
    }
}
