use clap::{Args, Parser, Subcommand, ValueEnum};
use diffwave::exponent::{build_kernel_table, ExponentProfile};
use diffwave::harness::{
    benchmark_findings, emit, parse_config, run_benchmark, run_convergence_study, Axis, ConvergenceTable, Format,
    HarnessError, RunRecord, StudyConfig,
};
use diffwave::schemes::{run_solver, SchemeError, SchemeTag};
use diffwave::spatial::norm_l2;
use diffwave::weights::{build_cq_table, build_pi_table};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "diffwave", version, about = "Variable-exponent diffusion-wave solvers and convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run; the first scheme, alpha0, N and M of the config unless overridden.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scheme: Option<SchemeTag>,
        #[arg(long)]
        alpha0: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        cells: Option<usize>,
        /// Write the final field as x,y,value rows.
        #[arg(long, value_name = "PATH")]
        field: Option<PathBuf>,
    },
    /// Two-mesh errors and rates under tau-halving.
    ConvergeTime(Common),
    /// Two-mesh errors and rates under h-halving.
    ConvergeSpace(Common),
    /// Stepping wall time for each scheme and M.
    Bench(Common),
    /// Dump a weight table as index,value rows.
    Weights(WeightArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    /// Worker threads for independent runs; 0 runs serially.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_name = "K")]
    jacobi_nodes: Option<usize>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Chi,
    Rho,
    ChiHat,
    RhoHat,
    Lambda,
    G,
    W,
    Wtilde,
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 1.5)]
    alpha0: f64,
    #[arg(long, default_value_t = 16)]
    steps: usize,
    #[arg(long, default_value = "example1")]
    profile: String,
    #[arg(long, default_value_t = 1.0)]
    t_final: f64,
    #[arg(long, value_name = "K", default_value_t = 64)]
    jacobi_nodes: usize,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    Config(String),
    Solver(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Scheme(s) => s.into(),
            e if e.is_config() => Failure::Config(e.to_string()),
            HarnessError::Io(_) | HarnessError::Csv(_) | HarnessError::Json(_) => Failure::Config(e.to_string()),
            e => Failure::Solver(e.to_string()),
        }
    }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::NotConverged { .. } | SchemeError::CacheIncoherent { .. } | SchemeError::Numerics(_) => {
                Failure::Solver(e.to_string())
            }
            e => Failure::Config(e.to_string()),
        }
    }
}

fn load(common: &Common) -> Result<StudyConfig, Failure> {
    let mut cfg = parse_config(&common.config)?;
    if let Some(k) = common.jacobi_nodes {
        cfg.solver.jacobi_nodes = k;
        cfg.validate()?;
    }
    Ok(cfg)
}

/// Writes to `--out`, else to the config's output block, else stdout.
fn write_table(table: &ConvergenceTable, out: &OutArgs, cfg: &StudyConfig) -> Result<(), Failure> {
    let target = out
        .out
        .clone()
        .map(|p| (p, out.format.map(Format::from)))
        .or_else(|| cfg.output.as_ref().map(|o| (PathBuf::from(&o.path), Some(o.format))));
    match target {
        Some((path, format)) => {
            emit(table, &path, format.unwrap_or(Format::Csv))?;
            eprintln!("wrote {}", path.display());
        }
        None => match out.format {
            Some(f) => print!("{}", table.render(f.into())?),
            None => print!("{}", table.to_text()),
        },
    }
    Ok(())
}

fn solve(
    common: &Common,
    scheme: Option<SchemeTag>,
    alpha0: Option<f64>,
    steps: Option<usize>,
    cells: Option<usize>,
    field: Option<PathBuf>,
) -> Result<(), Failure> {
    let cfg = load(common)?;
    let tag = scheme.unwrap_or(cfg.schemes[0]);
    let a = alpha0.unwrap_or(cfg.alpha0[0]);
    let n = steps.or(cfg.n.first().copied()).ok_or(Failure::Config("`N` is empty".into()))?;
    let m = cells.or(cfg.m.first().copied()).ok_or(Failure::Config("`M` is empty".into()))?;
    let spec = cfg.problem_spec(a, m)?;
    let run = run_solver(&spec, tag, n, &cfg.solver)?;
    let peak = run.levels.iter().map(norm_l2).fold(0.0, f64::max);
    eprintln!(
        "{tag} alpha0={a} N={n} M={m}: |U^N|={:.6e} max_n |U^n|={peak:.6e} jacobi_nodes={} stepping={:.4}s total={:.4}s",
        norm_l2(run.final_level()),
        run.jacobi_nodes,
        run.timing.stepping,
        run.timing.total
    );
    if let Some(path) = field {
        std::fs::write(&path, run.final_level().to_csv())
            .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    let table = ConvergenceTable {
        axis: Axis::Time,
        rows: vec![RunRecord {
            scheme: tag,
            alpha0: a,
            n,
            m,
            error: None,
            rate: None,
            seconds: run.timing.total,
            config_hash: cfg.hash(),
        }],
    };
    if common.out.out.is_some() || common.out.format.is_some() {
        write_table(&table, &common.out, &cfg)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Entry {
    index: usize,
    value: f64,
}

fn weights(args: &WeightArgs) -> Result<(), Failure> {
    let cfg_err = |e: &dyn std::fmt::Display| Failure::Config(e.to_string());
    if args.steps == 0 {
        return Err(Failure::Config("--steps must be positive".into()));
    }
    let profile = ExponentProfile::from_key(&args.profile, args.alpha0).map_err(|e| cfg_err(&e))?;
    let abar = profile.abar();
    let tau = args.t_final / args.steps as f64;
    let values: Vec<f64> = match args.kind {
        Kind::Chi | Kind::Rho | Kind::ChiHat | Kind::RhoHat => {
            let t = build_cq_table(abar, args.steps).map_err(|e| cfg_err(&e))?;
            match args.kind {
                Kind::Chi => t.chi,
                Kind::Rho => t.rho,
                Kind::ChiHat => t.chi_hat,
                _ => t.rho_hat,
            }
        }
        Kind::Lambda => build_pi_table(abar, args.steps, tau).map_err(|e| cfg_err(&e))?.by_lag().to_vec(),
        Kind::G | Kind::W | Kind::Wtilde => {
            let k = build_kernel_table(&profile, args.steps, args.t_final, args.jacobi_nodes, 4)
                .map_err(|e| Failure::Solver(e.to_string()))?;
            match args.kind {
                Kind::G => k.g_vals().to_vec(),
                Kind::W => k.w().to_vec(),
                _ => k.wtilde().to_vec(),
            }
        }
    };
    let format = args.out.format.map(Format::from).unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => {
            let mut s = String::from("index,value\n");
            for (i, v) in values.iter().enumerate() {
                s.push_str(&format!("{i},{v:?}\n"));
            }
            s
        }
        Format::Json => {
            let entries: Vec<Entry> = values.iter().enumerate().map(|(index, &value)| Entry { index, value }).collect();
            serde_json::to_string_pretty(&entries).expect("plain data serialises") + "\n"
        }
    };
    match &args.out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn study(common: &Common, axis: Axis) -> Result<(), Failure> {
    let cfg = load(common)?;
    let table = match axis {
        Axis::Bench => run_benchmark(&cfg)?,
        _ => run_convergence_study(&cfg, axis, common.threads)?,
    };
    if axis == Axis::Bench {
        for f in benchmark_findings(&table) {
            eprintln!("warning: {f}");
        }
    }
    write_table(&table, &common.out, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { common, scheme, alpha0, steps, cells, field } => {
            solve(&common, scheme, alpha0, steps, cells, field)
        }
        Command::ConvergeTime(c) => study(&c, Axis::Time),
        Command::ConvergeSpace(c) => study(&c, Axis::Space),
        Command::Bench(c) => study(&c, Axis::Bench),
        Command::Weights(w) => weights(&w),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}
