//! `bdm`: mesh generation, single solves and convergence studies for the
//! multi-patch benchmarks.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bezier_mortar::bench::cases::{assemble_case, case_constraints};
use bezier_mortar::bench::geometry::worked_example;
use bezier_mortar::bench::largedef::{solve_weak, LargeDefConfig};
use bezier_mortar::bench::{case_error, run_convergence, solve_model, Case, Method, StudyConfig};
use bezier_mortar::fem::{apply_dirichlet, AssembledSystem};
use bezier_mortar::geometry::MultiPatch;
use bezier_mortar::io::{format_float, report_csv, FileError, MeshFile, RunConfig};
use bezier_mortar::mortar::{solve_saddle, Discretization, MortarOptions};
use bezier_mortar::weak::build_weak_mesh;
use bezier_mortar::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable holding the number of worker threads.
const THREADS_VAR: &str = "BDM_THREADS";

/// Largest broken system solved densely by `--method saddle`.
const SADDLE_MAX_DOFS: usize = 4000;

const SUMMARY_HEADER: &str = "case,method,p,ratio,matched,n,level,h,dofs,residual,l2_error";

#[derive(Parser, Debug)]
#[command(name = "bdm", version, about = "Bezier dual mortar benchmarks for multi-patch isogeometric analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the mesh of a benchmark case as JSON.
    Mesh(MeshArgs),
    /// Solve one refinement level and write the coefficients and a summary row.
    Solve(SolveArgs),
    /// Run a convergence study and write the report as CSV.
    Converge(ConvergeArgs),
}

/// Case selection shared by all subcommands. Values given on the command
/// line override those of `--config`.
#[derive(Args, Debug, Clone)]
struct CaseArgs {
    /// Run configuration file (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Benchmark case: square-dirichlet, square-mixed (alias square), annulus,
    /// plate-hole-2patch (plate2), plate-hole-3patch (plate3),
    /// largedef-case1..3, or worked-example for `mesh`.
    #[arg(long)]
    case: Option<String>,
    /// Polynomial degree.
    #[arg(long)]
    p: Option<usize>,
    /// Master to slave element ratio, e.g. 2:3.
    #[arg(long, value_parser = parse_ratio)]
    ratio: Option<[usize; 2]>,
    /// Perturb the interface parameterizations (square cases).
    #[arg(long)]
    mismatched: bool,
    /// Seed of the perturbation.
    #[arg(long)]
    seed: Option<u64>,
    /// Dual refinement level.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct MeshArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Uniform refinement level.
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Embed the weakly continuous extraction operators.
    #[arg(long)]
    weak: bool,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    /// Condensed mortar system.
    Mortar,
    /// Assembly on the weakly continuous mesh.
    Weak,
    /// Dense Lagrange multiplier system (coarse meshes only).
    Saddle,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[arg(long, value_enum)]
    method: Option<SolveMethod>,
    /// Uniform refinement level.
    #[arg(long, default_value_t = 0)]
    level: usize,
    /// Solve on the patches of this mesh file instead of the generated mesh.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Coefficient output (CSV).
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Summary output (CSV); a header is written if the file is new.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Number of refinement levels.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<SolveMethod>,
    /// Report file; the `output` entry of the configuration or standard
    /// output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure of a subcommand, mapped to the process exit code.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(#[from] FileError),
    #[error("{0}")]
    Numerical(Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other),
        }
    }
}

fn parse_ratio(s: &str) -> Result<[usize; 2], String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected M:S, got '{s}'"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    let r = [parse(a)?, parse(b)?];
    if r.contains(&0) {
        return Err("element counts must be positive".into());
    }
    Ok(r)
}

/// Canonical case name for a command-line spelling.
fn case_name(s: &str) -> &str {
    match s {
        "square" => "square-mixed",
        "plate" | "plate2" => "plate-hole-2patch",
        "plate3" => "plate-hole-3patch",
        other => other,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

impl CaseArgs {
    /// Run configuration from the file and the command-line overrides.
    fn run_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json(&read(path)?)?,
            None => {
                let case =
                    self.case.as_deref().ok_or_else(|| CliError::Usage("--case or --config is required".into()))?;
                RunConfig::from_json(&format!("{{\"case\": \"{}\"}}", case_name(case)))
                    .map_err(|_| CliError::Usage(format!("unknown case '{case}'")))?
            }
        };
        if let (Some(case), Some(_)) = (&self.case, &self.config) {
            cfg.case = Case::parse(case_name(case))?;
        }
        if let Some(p) = self.p {
            cfg.p = p;
        }
        if let Some(r) = self.ratio {
            cfg.ratio = r;
        }
        if self.mismatched {
            cfg.matched = false;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if cfg.case.load_case().is_some() {
            cfg.method = Method::Weak;
        }
        Ok(cfg)
    }
}

fn run_mesh(args: &MeshArgs) -> Result<(), CliError> {
    let worked = args.case.case.as_deref() == Some("worked-example");
    let (model, n) = if worked {
        if args.case.config.is_some() {
            return Err(CliError::Usage("the worked example takes no configuration file".into()));
        }
        (worked_example()?.refine_uniform(args.level)?, args.case.n.unwrap_or(1))
    } else {
        let cfg = args.case.run_config()?;
        (cfg.study()?.model(args.level)?, cfg.n)
    };
    let mut file = MeshFile::from_model(&model);
    if args.weak {
        let disc = Discretization::new(&model, MortarOptions::with_refinement(n))?;
        file = file.with_weak(&build_weak_mesh(&disc)?, n);
    }
    emit(args.out.as_deref(), &file.to_json())
}

fn load_model(path: &Path) -> Result<MultiPatch, CliError> {
    Ok(MeshFile::from_json(&read(path)?)?.to_model()?)
}

/// `‖A x − b‖ / ‖b‖` of a Dirichlet-eliminated system.
fn relative_residual(system: &AssembledSystem, x: &[f64]) -> f64 {
    let ax = system.matrix.mul_vec(x);
    let num: f64 = ax.iter().zip(&system.rhs).map(|(a, b)| (a - b).powi(2)).sum();
    let den: f64 = system.rhs.iter().map(|b| b * b).sum();
    if den > 0.0 {
        (num / den).sqrt()
    } else {
        num.sqrt()
    }
}

/// Reduced coefficients of a broken vector: the values of the independent DOFs.
fn restrict(disc: &Discretization, broken: &[f64], ncomp: usize) -> Vec<f64> {
    let mut out = vec![0.0; disc.num_reduced() * ncomp];
    for (b, r) in disc.reduced_index.iter().enumerate() {
        if let Some(r) = r {
            for c in 0..ncomp {
                out[ncomp * r + c] = broken[ncomp * b + c];
            }
        }
    }
    out
}

struct SolveOutcome {
    coeffs: Vec<f64>,
    dofs: usize,
    residual: Option<f64>,
    error: Option<f64>,
    h: f64,
}

fn solve_linear(study: &StudyConfig, model: &MultiPatch, method: SolveMethod) -> Result<SolveOutcome, CliError> {
    let ncomp = study.case.ncomp();
    let mut cfg = study.clone();
    cfg.method = if method == SolveMethod::Weak { Method::Weak } else { Method::Mortar };
    if method != SolveMethod::Saddle {
        let sol = solve_model(&cfg, model)?;
        let eliminated = apply_dirichlet(&sol.system, &sol.constraints)?;
        let reduced = match method {
            SolveMethod::Weak => sol.coeffs.clone(),
            _ => restrict(&sol.discretization, &sol.coeffs, ncomp),
        };
        return Ok(SolveOutcome {
            residual: Some(relative_residual(&eliminated, &reduced)),
            error: Some(sol.error),
            dofs: sol.dofs,
            coeffs: sol.coeffs,
            h: 0.0,
        });
    }
    let disc = Discretization::new(model, MortarOptions::with_refinement(cfg.dual_refinement))?;
    if disc.num_broken * ncomp > SADDLE_MAX_DOFS {
        return Err(CliError::Usage(format!(
            "the saddle point solve is dense and limited to {SADDLE_MAX_DOFS} unknowns, this mesh has {}",
            disc.num_broken * ncomp
        )));
    }
    let broken = assemble_case(cfg.case, &disc.mesh)?;
    let constraints = case_constraints(cfg.case, &disc)?;
    let coeffs = solve_saddle(&disc, &broken, &constraints, ncomp)?;
    // Residual of the condensed equations, comparable to the other methods.
    let condensed = solve_model(&cfg, model)?;
    let eliminated = apply_dirichlet(&condensed.system, &condensed.constraints)?;
    let residual = relative_residual(&eliminated, &restrict(&disc, &coeffs, ncomp));
    let error = case_error(cfg.case, &disc.mesh, &coeffs)?;
    Ok(SolveOutcome { dofs: condensed.dofs, residual: Some(residual), error: Some(error), coeffs, h: 0.0 })
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    let mut cfg = args.case.run_config()?;
    let method = args.method.unwrap_or(match cfg.method {
        Method::Mortar => SolveMethod::Mortar,
        Method::Weak => SolveMethod::Weak,
    });
    if cfg.case.load_case().is_some() {
        if method != SolveMethod::Weak {
            return Err(CliError::Usage(format!("case {} is solved on the weak mesh only", cfg.case.name())));
        }
        if args.mesh.is_some() {
            return Err(CliError::Usage("the large-deformation cases generate their own meshes".into()));
        }
        cfg.method = Method::Weak;
    } else {
        cfg.method = if method == SolveMethod::Weak { Method::Weak } else { Method::Mortar };
    }
    let study = cfg.study()?;
    let outcome = if let Some(load_case) = cfg.case.load_case() {
        let mut ld = LargeDefConfig::new(load_case);
        ld.p = study.p;
        ld.base = study.ratio[0] * study.base;
        ld.dual_refinement = study.dual_refinement;
        let sol = solve_weak(&ld, args.level)?;
        SolveOutcome {
            dofs: sol.displacement.len(),
            residual: None,
            error: None,
            coeffs: sol.displacement,
            h: ld.mesh_size(args.level),
        }
    } else {
        let model = match &args.mesh {
            Some(path) => load_model(path)?,
            None => study.model(args.level)?,
        };
        let h = if args.mesh.is_some() { f64::NAN } else { study.mesh_size(args.level) };
        SolveOutcome { h, ..solve_linear(&study, &model, method)? }
    };

    if let Some(path) = &args.coeffs {
        let mut text = String::from("dof,value\n");
        for (i, v) in outcome.coeffs.iter().enumerate() {
            let _ = writeln!(text, "{i},{}", format_float(*v));
        }
        write(path, &text)?;
    }
    let method_name = match method {
        SolveMethod::Mortar => "mortar",
        SolveMethod::Weak => "weak",
        SolveMethod::Saddle => "saddle",
    };
    let row = format!(
        "{},{},{},{}:{},{},{},{},{},{},{},{}\n",
        study.case.name(),
        method_name,
        study.p,
        study.ratio[0],
        study.ratio[1],
        study.matched,
        study.dual_refinement,
        args.level,
        format_float(outcome.h),
        outcome.dofs,
        outcome.residual.map(format_float).unwrap_or_default(),
        outcome.error.map(format_float).unwrap_or_default(),
    );
    match &args.summary {
        Some(path) => {
            let existing = if path.exists() { read(path)? } else { String::new() };
            let mut text = existing;
            if text.is_empty() {
                text.push_str(SUMMARY_HEADER);
                text.push('\n');
            }
            text.push_str(&row);
            write(path, &text)
        }
        None => {
            print!("{SUMMARY_HEADER}\n{row}");
            Ok(())
        }
    }
}

fn run_converge(args: &ConvergeArgs) -> Result<bool, CliError> {
    let mut cfg = args.case.run_config()?;
    if let Some(levels) = args.levels {
        cfg.levels = levels;
    }
    match args.method {
        Some(SolveMethod::Saddle) => {
            return Err(CliError::Usage("convergence studies use the mortar or weak method".into()))
        }
        Some(SolveMethod::Weak) => cfg.method = Method::Weak,
        Some(SolveMethod::Mortar) => cfg.method = Method::Mortar,
        None => {}
    }
    let study = cfg.study()?;
    if study.levels == 0 {
        return Err(CliError::Usage("at least one level is required".into()));
    }
    let report = run_convergence(&study);
    let out = args.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    emit(out.as_deref(), &report_csv(&report))?;
    Ok(!report.has_failures())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::Mesh(a) => run_mesh(a).map(|_| true),
        Command::Solve(a) => run_solve(a).map(|_| true),
        Command::Converge(a) => run_converge(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("bdm: some levels failed, see the status column");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("bdm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
