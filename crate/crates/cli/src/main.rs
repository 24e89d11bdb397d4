//! fracmap: command-line frontend for fractional generalized-logistic-map
//! simulation and analysis. Writes plot-ready CSV/JSON datasets; every run
//! is deterministic, so identical configurations produce byte-identical
//! files regardless of the worker count.

mod table;

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracmap_core::analysis::{
    bifurcation_1d, feedback_boundary, multistability_probe, multistability_sweep,
    phase_diagram_2d, PeriodClass, SweepAxis, SweepConfig,
};
use fracmap_core::dynamics::{
    simulate_controlled_with, simulate_coupled_with, simulate_with, sync_gain_interval,
    ControlConfig, Controller, HistoryRule, Outcome, SimOptions, Trajectory, SyncConfig,
};
use fracmap_core::frackernel::KernelWeights;
use fracmap_core::glmap::{stability_region_raster, MapParams};
use fracmap_core::grid::Grid;

use table::{Cell, Table};

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fracmap",
    version,
    about = "Simulate and analyze a fractional-order generalized logistic map",
    after_help = "Grids are written lo:hi:count with inclusive endpoints and uniform spacing.\n\
                  Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file path
    #[arg(short, long)]
    output: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads used by sweep commands
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Assert that the run involves no randomness (it never does; the flag
    /// exists so scripts can state the expectation explicitly)
    #[arg(long)]
    seedless: bool,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Number of iteration steps
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Divergence bound: |x| beyond this ends the run as diverged
    #[arg(long, default_value_t = 1e8, allow_negative_numbers = true)]
    divergence: f64,
    /// Short-memory truncation window (lags beyond it are dropped);
    /// full memory when omitted
    #[arg(long)]
    memory_window: Option<usize>,
}

impl EngineArgs {
    fn options(&self) -> SimOptions {
        SimOptions {
            divergence_bound: self.divergence,
            memory_window: self.memory_window,
        }
    }
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    engine: EngineArgs,
    /// Steps discarded before the classification window
    #[arg(long, default_value_t = 500)]
    transient: usize,
    /// Classification window length (last `tail` states)
    #[arg(long, default_value_t = 256)]
    tail: usize,
    /// Largest period the classifier searches for
    #[arg(long = "pmax", default_value_t = 64)]
    p_max: usize,
    /// Period tolerance, relative to the tail amplitude
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Trailing states retained per grid point in the output
    #[arg(long = "keep-tail", default_value_t = 64)]
    keep_tail: usize,
}

impl ClassifyArgs {
    fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            steps: self.engine.steps,
            transient: self.transient,
            tail: self.tail,
            p_max: self.p_max,
            tol: self.tol,
            keep_tail: self.keep_tail,
            options: self.engine.options(),
        }
    }

    fn echo(&self, table: &mut Table) {
        table.config_entry("steps", self.engine.steps);
        table.config_entry("transient", self.transient);
        table.config_entry("tail", self.tail);
        table.config_entry("pmax", self.p_max);
        table.config_entry("tol", self.tol);
        table.config_entry("keep_tail", self.keep_tail);
        table.config_entry("divergence", self.engine.divergence);
        if let Some(w) = self.engine.memory_window {
            table.config_entry("memory_window", w);
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum ControllerArg {
    H1,
    H2,
    H3,
    H4,
}

impl From<ControllerArg> for Controller {
    fn from(c: ControllerArg) -> Controller {
        match c {
            ControllerArg::H1 => Controller::H1,
            ControllerArg::H2 => Controller::H2,
            ControllerArg::H3 => Controller::H3,
            ControllerArg::H4 => Controller::H4,
        }
    }
}

/// A flag value that is either a plain number or a lo:hi:count grid.
#[derive(Debug, Clone, Copy, PartialEq)]
enum GridOrScalar {
    Scalar(f64),
    Range { lo: f64, hi: f64, count: usize },
}

impl FromStr for GridOrScalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(v) = s.parse::<f64>() {
            return Ok(GridOrScalar::Scalar(v));
        }
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected a number or lo:hi:count, got '{s}'"));
        }
        let lo = parts[0]
            .parse::<f64>()
            .map_err(|_| format!("bad grid start '{}'", parts[0]))?;
        let hi = parts[1]
            .parse::<f64>()
            .map_err(|_| format!("bad grid end '{}'", parts[1]))?;
        let count = parts[2]
            .parse::<usize>()
            .map_err(|_| format!("bad grid count '{}'", parts[2]))?;
        Ok(GridOrScalar::Range { lo, hi, count })
    }
}

impl fmt::Display for GridOrScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridOrScalar::Scalar(v) => write!(f, "{v}"),
            GridOrScalar::Range { lo, hi, count } => write!(f, "{lo}:{hi}:{count}"),
        }
    }
}

impl GridOrScalar {
    fn scalar(&self) -> Option<f64> {
        match self {
            GridOrScalar::Scalar(v) => Some(*v),
            GridOrScalar::Range { .. } => None,
        }
    }

    fn grid(&self) -> Result<Grid, fracmap_core::Error> {
        match *self {
            GridOrScalar::Scalar(v) => Grid::singleton(v),
            GridOrScalar::Range { lo, hi, count } => Grid::new(lo, hi, count),
        }
    }

    fn is_range(&self) -> bool {
        matches!(self, GridOrScalar::Range { .. })
    }
}

/// Pre-history rule for the delayed feedback term: `x0` or a number.
#[derive(Debug, Clone, Copy, PartialEq)]
struct HistoryArg(HistoryRule);

impl FromStr for HistoryArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("x0") {
            return Ok(HistoryArg(HistoryRule::HoldX0));
        }
        s.parse::<f64>()
            .map(|v| HistoryArg(HistoryRule::Constant(v)))
            .map_err(|_| format!("expected 'x0' or a number, got '{s}'"))
    }
}

impl fmt::Display for HistoryArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            HistoryRule::HoldX0 => write!(f, "x0"),
            HistoryRule::Constant(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one free trajectory and write t,x rows
    Trajectory {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep one parameter (the one given as lo:hi:count) and write
    /// param,tail_index,x,class,period rows
    Bifurcation1d {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu: GridOrScalar,
        #[arg(long, allow_hyphen_values = true)]
        r: GridOrScalar,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[command(flatten)]
        classify: ClassifyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify every cell of a (mu, r) grid and write mu,r,class,period rows
    Phase2d {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu: GridOrScalar,
        #[arg(long, allow_hyphen_values = true)]
        r: GridOrScalar,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[command(flatten)]
        classify: ClassifyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rasterize the analytic stability condition of one equilibrium and
    /// write mu,r,verdict rows
    StabilityRegion {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu: GridOrScalar,
        #[arg(long, allow_hyphen_values = true)]
        r: GridOrScalar,
        /// Equilibrium index: 1 (origin), 2 or 3 (nonzero pair)
        #[arg(long)]
        which: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Export the delayed-feedback stable region boundary as
    /// piece,t_or_b,a,b rows
    FeedbackRegion {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Parametric-curve sample count
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Simulate the delayed-feedback controlled system and write t,x rows
    Control {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        /// Feedback gain
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// Feedback delay in steps
        #[arg(long, default_value_t = 1)]
        tau: usize,
        /// Pre-history for t-tau < 0: 'x0' or a number
        #[arg(long, default_value = "x0", allow_hyphen_values = true)]
        history: HistoryArg,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Simulate the master-slave coupled pair and write t,x,y,e rows
    Sync {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        /// Synchronization controller
        #[arg(long, value_enum)]
        controller: ControllerArg,
        /// Controller parameter; defaults to mu
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        /// Coupling gain
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long, allow_negative_numbers = true)]
        y0: f64,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify several initial conditions at fixed parameters (or along a
    /// mu grid) and write their classes and tails
    Multistability {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Single value or lo:hi:count sweep
        #[arg(long, allow_hyphen_values = true)]
        mu: GridOrScalar,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        /// Comma-separated initial conditions (at least two)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Vec<f64>,
        #[command(flatten)]
        classify: ClassifyArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

impl Command {
    fn out(&self) -> &OutputArgs {
        match self {
            Command::Trajectory { out, .. }
            | Command::Bifurcation1d { out, .. }
            | Command::Phase2d { out, .. }
            | Command::StabilityRegion { out, .. }
            | Command::FeedbackRegion { out, .. }
            | Command::Control { out, .. }
            | Command::Sync { out, .. }
            | Command::Multistability { out, .. } => out,
        }
    }
}

enum AppError {
    Config(Vec<String>),
    Io(String),
    Internal(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Config(_) => EXIT_CONFIG,
            AppError::Io(_) => EXIT_IO,
            AppError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn print(&self) {
        match self {
            AppError::Config(msgs) => {
                for m in msgs {
                    eprintln!("error: {m}");
                }
            }
            AppError::Io(m) => eprintln!("i/o error: {m}"),
            AppError::Internal(m) => eprintln!("internal error: {m}"),
        }
    }
}

// After validation has passed, a library error is an engine invariant break.
fn internal(e: fracmap_core::Error) -> AppError {
    AppError::Internal(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.print();
            ExitCode::from(e.code())
        }
    }
}

fn execute(cmd: Command) -> Result<(), AppError> {
    let (errors, warnings) = validate(&cmd);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    if !errors.is_empty() {
        return Err(AppError::Config(errors));
    }

    let out = cmd.out();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(out.workers)
        .build()
        .map_err(|e| AppError::Internal(e.to_string()))?;

    let started = Instant::now();
    let (table, summary) = pool.install(|| run_command(&cmd))?;
    let elapsed = started.elapsed();

    let path = &out.output;
    let file = File::create(path)
        .map_err(|e| AppError::Io(format!("cannot write {}: {e}", path.display())))?;
    let mut writer = BufWriter::new(file);
    let io_err = |e: std::io::Error| AppError::Io(format!("writing {}: {e}", path.display()));
    match out.format {
        Format::Csv => table.write_csv(&mut writer).map_err(io_err)?,
        Format::Json => table.write_json(&mut writer).map_err(io_err)?,
    }
    writer.flush().map_err(io_err)?;

    println!("{summary} in {elapsed:.2?} -> {}", path.display());
    Ok(())
}

fn check_alpha(alpha: f64, errors: &mut Vec<String>) {
    if !alpha.is_finite() || alpha <= 0.0 || alpha > 1.0 {
        errors.push(format!("alpha must lie in (0,1], got {alpha}"));
    }
}

fn check_finite(name: &str, v: f64, errors: &mut Vec<String>) {
    if !v.is_finite() {
        errors.push(format!("{name} must be finite, got {v}"));
    }
}

fn check_engine(engine: &EngineArgs, errors: &mut Vec<String>) {
    if engine.steps == 0 {
        errors.push("steps must be at least 1".into());
    }
    if !engine.divergence.is_finite() || engine.divergence <= 0.0 {
        errors.push(format!(
            "divergence bound must be positive and finite, got {}",
            engine.divergence
        ));
    }
}

fn check_classify(args: &ClassifyArgs, errors: &mut Vec<String>) {
    check_engine(&args.engine, errors);
    if args.tail < 2 * args.p_max {
        errors.push(format!(
            "tail ({}) must be at least twice pmax ({})",
            args.tail, args.p_max
        ));
    }
    if args.engine.steps + 1 < args.transient + args.tail {
        errors.push(format!(
            "steps+1 ({}) must cover transient+tail ({})",
            args.engine.steps + 1,
            args.transient + args.tail
        ));
    }
    if !args.tol.is_finite() || args.tol <= 0.0 {
        errors.push(format!("tol must be positive and finite, got {}", args.tol));
    }
    if args.keep_tail == 0 {
        errors.push("keep-tail must be at least 1".into());
    }
}

fn check_grid(name: &str, g: &GridOrScalar, errors: &mut Vec<String>) {
    if let Err(e) = g.grid() {
        errors.push(format!("{name}: {e}"));
    }
}

/// Collect every violated constraint. Validation itself never fails; the
/// k-interval check demotes to a warning because the synchronization bound
/// is sufficient, not necessary.
fn validate(cmd: &Command) -> (Vec<String>, Vec<String>) {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();

    let out = cmd.out();
    if out.workers == 0 {
        errors.push("workers must be at least 1".into());
    }

    match cmd {
        Command::Trajectory {
            alpha,
            mu,
            r,
            x0,
            engine,
            ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_finite("mu", *mu, &mut errors);
            check_finite("r", *r, &mut errors);
            check_finite("x0", *x0, &mut errors);
            check_engine(engine, &mut errors);
        }
        Command::Bifurcation1d {
            alpha,
            mu,
            r,
            x0,
            classify,
            ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_finite("x0", *x0, &mut errors);
            check_classify(classify, &mut errors);
            check_grid("mu", mu, &mut errors);
            check_grid("r", r, &mut errors);
            if mu.is_range() == r.is_range() {
                errors.push(
                    "exactly one of --mu and --r must be a lo:hi:count grid (the sweep axis)"
                        .into(),
                );
            }
        }
        Command::Phase2d {
            alpha,
            mu,
            r,
            x0,
            classify,
            ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_finite("x0", *x0, &mut errors);
            check_classify(classify, &mut errors);
            check_grid("mu", mu, &mut errors);
            check_grid("r", r, &mut errors);
        }
        Command::StabilityRegion {
            alpha, mu, r, which, ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_grid("mu", mu, &mut errors);
            check_grid("r", r, &mut errors);
            if !(1..=3).contains(which) {
                errors.push(format!("equilibrium index must be 1, 2 or 3, got {which}"));
            }
        }
        Command::FeedbackRegion { alpha, samples, .. } => {
            if !alpha.is_finite() || *alpha <= 0.0 || *alpha >= 1.0 {
                errors.push(format!(
                    "feedback-region requires 0 < alpha < 1, got {alpha}"
                ));
            }
            if *samples < 64 {
                errors.push(format!("need at least 64 boundary samples, got {samples}"));
            }
        }
        Command::Control {
            alpha,
            mu,
            r,
            x0,
            b,
            tau,
            engine,
            ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_finite("mu", *mu, &mut errors);
            check_finite("r", *r, &mut errors);
            check_finite("x0", *x0, &mut errors);
            check_finite("b", *b, &mut errors);
            if *tau == 0 {
                errors.push("delay tau must be at least 1".into());
            }
            check_engine(engine, &mut errors);
        }
        Command::Sync {
            alpha,
            mu,
            r,
            controller,
            p,
            k,
            x0,
            y0,
            engine,
            ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_finite("mu", *mu, &mut errors);
            check_finite("r", *r, &mut errors);
            check_finite("k", *k, &mut errors);
            check_finite("x0", *x0, &mut errors);
            check_finite("y0", *y0, &mut errors);
            if let Some(p) = p {
                check_finite("p", *p, &mut errors);
            }
            check_engine(engine, &mut errors);
            let controller = Controller::from(*controller);
            if controller.requires_zero_r() && *r != 0.0 {
                errors.push(format!(
                    "controller {} is only valid for r = 0, got r = {r}",
                    controller.name()
                ));
            } else if errors.is_empty() {
                let params = MapParams::new(*alpha, *mu, *r).expect("validated above");
                if let Ok((lo, hi)) = sync_gain_interval(&params, controller) {
                    if *k <= lo || *k >= hi {
                        warnings.push(format!(
                            "k = {k} lies outside the guaranteed synchronization interval \
                             ({lo:.6}, {hi:.6}); the bound is sufficient but not necessary, \
                             proceeding"
                        ));
                    }
                }
                let p = p.unwrap_or(*mu);
                if p != *mu {
                    warnings.push(format!(
                        "p = {p} differs from mu = {mu}; the synchronization guarantee \
                         assumes p = mu, proceeding"
                    ));
                }
            }
        }
        Command::Multistability {
            alpha,
            mu,
            r,
            x0,
            classify,
            ..
        } => {
            check_alpha(*alpha, &mut errors);
            check_finite("r", *r, &mut errors);
            check_grid("mu", mu, &mut errors);
            check_classify(classify, &mut errors);
            if x0.len() < 2 {
                errors.push(format!(
                    "multistability needs at least 2 initial conditions, got {}",
                    x0.len()
                ));
            }
            for v in x0 {
                check_finite("x0", *v, &mut errors);
            }
        }
    }
    (errors, warnings)
}

fn outcome_word(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Completed => "completed".into(),
        Outcome::PoleHit(step) => format!("polehit at step {step}"),
        Outcome::Diverged(step) => format!("diverged at step {step}"),
    }
}

fn class_counts(classes: impl Iterator<Item = PeriodClass>) -> String {
    use fracmap_core::analysis::PeriodKind;
    let (mut periodic, mut chaotic, mut divergent, mut pole) = (0usize, 0usize, 0usize, 0usize);
    for c in classes {
        match c.kind {
            PeriodKind::Period(_) => periodic += 1,
            PeriodKind::Chaotic => chaotic += 1,
            PeriodKind::Divergent => divergent += 1,
            PeriodKind::PoleHit => pole += 1,
        }
    }
    format!("periodic {periodic}, chaotic {chaotic}, divergent {divergent}, polehit {pole}")
}

fn trajectory_rows(table: &mut Table, traj: &Trajectory) {
    for (t, &x) in traj.states.iter().enumerate() {
        table.push_row(vec![Cell::Int(t as u64), Cell::Float(x)]);
    }
}

fn run_command(cmd: &Command) -> Result<(Table, String), AppError> {
    match cmd {
        Command::Trajectory {
            alpha,
            mu,
            r,
            x0,
            engine,
            ..
        } => {
            let params = MapParams::new(*alpha, *mu, *r).map_err(internal)?;
            let weights =
                KernelWeights::build(*alpha, engine.steps.saturating_sub(1)).map_err(internal)?;
            let traj = simulate_with(&params, *x0, engine.steps, &weights, &engine.options())
                .map_err(internal)?;

            let mut table = Table::new("trajectory", vec!["t", "x"]);
            table.config_entry("alpha", alpha);
            table.config_entry("mu", mu);
            table.config_entry("r", r);
            table.config_entry("x0", x0);
            table.config_entry("steps", engine.steps);
            table.config_entry("divergence", engine.divergence);
            if let Some(w) = engine.memory_window {
                table.config_entry("memory_window", w);
            }
            trajectory_rows(&mut table, &traj);
            let summary = format!(
                "trajectory: {} states ({})",
                traj.states.len(),
                outcome_word(&traj.outcome)
            );
            Ok((table, summary))
        }

        Command::Control {
            alpha,
            mu,
            r,
            x0,
            b,
            tau,
            history,
            engine,
            ..
        } => {
            let params = MapParams::new(*alpha, *mu, *r).map_err(internal)?;
            let control = ControlConfig::new(*b, *tau).map_err(internal)?;
            let weights =
                KernelWeights::build(*alpha, engine.steps.saturating_sub(1)).map_err(internal)?;
            let traj = simulate_controlled_with(
                &params,
                &control,
                *x0,
                history.0,
                engine.steps,
                &weights,
                &engine.options(),
            )
            .map_err(internal)?;

            let mut table = Table::new("control", vec!["t", "x"]);
            table.config_entry("alpha", alpha);
            table.config_entry("mu", mu);
            table.config_entry("r", r);
            table.config_entry("x0", x0);
            table.config_entry("b", b);
            table.config_entry("tau", tau);
            table.config_entry("history", history);
            table.config_entry("steps", engine.steps);
            table.config_entry("divergence", engine.divergence);
            if let Some(w) = engine.memory_window {
                table.config_entry("memory_window", w);
            }
            trajectory_rows(&mut table, &traj);
            let summary = format!(
                "control: {} states ({})",
                traj.states.len(),
                outcome_word(&traj.outcome)
            );
            Ok((table, summary))
        }

        Command::Sync {
            alpha,
            mu,
            r,
            controller,
            p,
            k,
            x0,
            y0,
            engine,
            ..
        } => {
            let params = MapParams::new(*alpha, *mu, *r).map_err(internal)?;
            let p = p.unwrap_or(*mu);
            let sync = SyncConfig::new(Controller::from(*controller), p, *k).map_err(internal)?;
            let weights =
                KernelWeights::build(*alpha, engine.steps.saturating_sub(1)).map_err(internal)?;
            let run = simulate_coupled_with(
                &params,
                &sync,
                *x0,
                *y0,
                engine.steps,
                &weights,
                &engine.options(),
            )
            .map_err(internal)?;

            let mut table = Table::new("sync", vec!["t", "x", "y", "e"]);
            table.config_entry("alpha", alpha);
            table.config_entry("mu", mu);
            table.config_entry("r", r);
            table.config_entry("controller", sync.controller.name());
            table.config_entry("p", p);
            table.config_entry("k", k);
            table.config_entry("x0", x0);
            table.config_entry("y0", y0);
            table.config_entry("steps", engine.steps);
            table.config_entry("divergence", engine.divergence);
            for t in 0..run.master.states.len() {
                table.push_row(vec![
                    Cell::Int(t as u64),
                    Cell::Float(run.master.states[t]),
                    Cell::Float(run.slave.states[t]),
                    Cell::Float(run.error[t]),
                ]);
            }
            let summary = format!(
                "sync: {} states (master {}, slave {})",
                run.master.states.len(),
                outcome_word(&run.master.outcome),
                outcome_word(&run.slave.outcome)
            );
            Ok((table, summary))
        }

        Command::Bifurcation1d {
            alpha,
            mu,
            r,
            x0,
            classify,
            ..
        } => {
            let (axis, fixed, sweep_spec) = if mu.is_range() {
                (SweepAxis::Mu, r.scalar().expect("validated"), mu)
            } else {
                (SweepAxis::R, mu.scalar().expect("validated"), r)
            };
            let grid = sweep_spec.grid().map_err(internal)?;
            let cfg = classify.sweep_config();
            let sweep =
                bifurcation_1d(*alpha, axis, fixed, &grid, *x0, &cfg).map_err(internal)?;

            let mut table = Table::new(
                "bifurcation1d",
                vec!["param", "tail_index", "x", "class", "period"],
            );
            table.config_entry("alpha", alpha);
            table.config_entry("axis", axis.name());
            table.config_entry(
                match axis {
                    SweepAxis::Mu => "r",
                    SweepAxis::R => "mu",
                },
                fixed,
            );
            table.config_entry("grid", sweep_spec);
            table.config_entry("x0", x0);
            classify.echo(&mut table);
            for pt in &sweep.points {
                for (i, &x) in pt.tail.iter().enumerate() {
                    table.push_row(vec![
                        Cell::Float(pt.value),
                        Cell::Int(i as u64),
                        Cell::Float(x),
                        Cell::Str(pt.class.kind.label().into()),
                        Cell::Int(u64::from(pt.class.kind.period())),
                    ]);
                }
            }
            let summary = format!(
                "bifurcation1d: {} grid points ({})",
                sweep.points.len(),
                class_counts(sweep.points.iter().map(|p| p.class))
            );
            Ok((table, summary))
        }

        Command::Phase2d {
            alpha,
            mu,
            r,
            x0,
            classify,
            ..
        } => {
            let mu_grid = mu.grid().map_err(internal)?;
            let r_grid = r.grid().map_err(internal)?;
            let cfg = classify.sweep_config();
            let diagram =
                phase_diagram_2d(*alpha, &mu_grid, &r_grid, *x0, &cfg).map_err(internal)?;

            let mut table = Table::new("phase2d", vec!["mu", "r", "class", "period"]);
            table.config_entry("alpha", alpha);
            table.config_entry("mu_grid", mu);
            table.config_entry("r_grid", r);
            table.config_entry("x0", x0);
            classify.echo(&mut table);
            for cell in &diagram.cells {
                table.push_row(vec![
                    Cell::Float(cell.mu),
                    Cell::Float(cell.r),
                    Cell::Str(cell.class.kind.label().into()),
                    Cell::Int(u64::from(cell.class.kind.period())),
                ]);
            }
            let summary = format!(
                "phase2d: {} cells ({})",
                diagram.cells.len(),
                class_counts(diagram.cells.iter().map(|c| c.class))
            );
            Ok((table, summary))
        }

        Command::StabilityRegion {
            alpha, mu, r, which, ..
        } => {
            let mu_grid = mu.grid().map_err(internal)?;
            let r_grid = r.grid().map_err(internal)?;
            let raster =
                stability_region_raster(*alpha, &mu_grid, &r_grid, *which).map_err(internal)?;

            let mut table = Table::new("stability-region", vec!["mu", "r", "verdict"]);
            table.config_entry("alpha", alpha);
            table.config_entry("which", which);
            table.config_entry("mu_grid", mu);
            table.config_entry("r_grid", r);
            let n_r = r_grid.len();
            for (idx, verdict) in raster.cells.iter().enumerate() {
                table.push_row(vec![
                    Cell::Float(mu_grid.value(idx / n_r)),
                    Cell::Float(r_grid.value(idx % n_r)),
                    Cell::Str(verdict.as_str().into()),
                ]);
            }
            let stable = raster
                .cells
                .iter()
                .filter(|v| **v == fracmap_core::glmap::RegionVerdict::Stable)
                .count();
            let summary = format!(
                "stability-region: {} cells ({} stable)",
                raster.cells.len(),
                stable
            );
            Ok((table, summary))
        }

        Command::FeedbackRegion { alpha, samples, .. } => {
            let region = feedback_boundary(*alpha, *samples).map_err(internal)?;

            let mut table = Table::new("feedback-region", vec!["piece", "t_or_b", "a", "b"]);
            table.config_entry("alpha", alpha);
            table.config_entry("samples", samples);
            let corner = *region.polygon.last().expect("polygon is never empty");
            for pt in region.curve.iter().filter(|p| p.t < std::f64::consts::PI) {
                table.push_row(vec![
                    Cell::Str("curve".into()),
                    Cell::Float(pt.t),
                    Cell::Float(pt.a),
                    Cell::Float(pt.b),
                ]);
            }
            table.push_row(vec![
                Cell::Str("curve".into()),
                Cell::Float(std::f64::consts::PI),
                Cell::Float(corner.1),
                Cell::Float(corner.0),
            ]);
            for (b, a) in [corner, (-1.0, 1.0)] {
                table.push_row(vec![
                    Cell::Str("lower_line".into()),
                    Cell::Float(b),
                    Cell::Float(a),
                    Cell::Float(b),
                ]);
            }
            for (b, a) in [(-1.0, 1.0), (1.0, 1.0)] {
                table.push_row(vec![
                    Cell::Str("upper_line".into()),
                    Cell::Float(b),
                    Cell::Float(a),
                    Cell::Float(b),
                ]);
            }
            let summary = format!(
                "feedback-region: {} boundary rows ({} polygon vertices)",
                table.rows.len(),
                region.polygon.len()
            );
            Ok((table, summary))
        }

        Command::Multistability {
            alpha,
            mu,
            r,
            x0,
            classify,
            ..
        } => {
            let cfg = classify.sweep_config();
            let mut table = Table::new(
                "multistability",
                if mu.is_range() {
                    vec!["mu", "x0", "class", "period", "tail_index", "x"]
                } else {
                    vec!["x0", "class", "period", "tail_index", "x"]
                },
            );
            table.config_entry("alpha", alpha);
            table.config_entry("mu", mu);
            table.config_entry("r", r);
            table.config_entry(
                "x0_list",
                x0.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            classify.echo(&mut table);

            let summary;
            if let Some(mu_value) = mu.scalar() {
                let params = MapParams::new(*alpha, mu_value, *r).map_err(internal)?;
                let report = multistability_probe(&params, x0, &cfg).map_err(internal)?;
                for run in &report.runs {
                    for (i, &x) in run.tail.iter().enumerate() {
                        table.push_row(vec![
                            Cell::Float(run.x0),
                            Cell::Str(run.class.kind.label().into()),
                            Cell::Int(u64::from(run.class.kind.period())),
                            Cell::Int(i as u64),
                            Cell::Float(x),
                        ]);
                    }
                }
                let distinct = report.pairs.iter().filter(|p| !p.same_class).count();
                summary = format!(
                    "multistability: {} initial conditions, {} of {} pairs distinct",
                    report.runs.len(),
                    distinct,
                    report.pairs.len()
                );
            } else {
                let grid = mu.grid().map_err(internal)?;
                let sweep =
                    multistability_sweep(*alpha, *r, &grid, x0, &cfg).map_err(internal)?;
                for (mu_value, report) in grid.iter().zip(&sweep.reports) {
                    for run in &report.runs {
                        for (i, &x) in run.tail.iter().enumerate() {
                            table.push_row(vec![
                                Cell::Float(mu_value),
                                Cell::Float(run.x0),
                                Cell::Str(run.class.kind.label().into()),
                                Cell::Int(u64::from(run.class.kind.period())),
                                Cell::Int(i as u64),
                                Cell::Float(x),
                            ]);
                        }
                    }
                }
                let distinct = sweep.distinct_mu_values().len();
                summary = format!(
                    "multistability: {} grid points, {} with distinct classes",
                    grid.len(),
                    distinct
                );
            }
            Ok((table, summary))
        }
    }
}
