//! Command-line front end behind the `ddu-planner` binary.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dro::{
    assemble, compare_modes, prepare_scenarios, reformulation_report, solve_plan, Bilinear, Mode,
    PlanConfig, Reduction,
};
use crate::error::PlanError;
use crate::instances;
use crate::network::{load_config, load_config_file, ConfigError, CoupledNetwork};
use crate::oracle::{self, Check, VerifyPlan};
use crate::report::{self, CompareRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ddu-planner",
    version,
    about = "Plan hydrogen infrastructure on coupled power, traffic and hydrogen networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble the planning model and export it as MPS and LP files.
    Build(RunArgs),
    /// Solve one planning mode and write the result tables.
    Solve(RunArgs),
    /// Solve every mode on the same instance.
    Compare(RunArgs),
    /// Run the oracle checks; `desk` selects every desk-scale instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Shipped instance name or path to a TOML configuration.
    pub instance: String,
    #[arg(long, default_value = "ddu-dro")]
    pub mode: Mode,
    /// Wasserstein radius; defaults to the instance's value.
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    /// Hydrogen fulfillment rate; defaults to the instance's value.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Pipeline (K) and traffic (H) piecewise segment counts.
    #[arg(long, num_args = 2, value_names = ["K", "H"])]
    pub segments: Option<Vec<usize>>,
    #[arg(long, default_value = "all")]
    pub reduce: Reduction,
    #[arg(long, default_value = "enumerate")]
    pub bilinear: Bilinear,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `desk`, a shipped instance name or a TOML path.
    pub instance: String,
    /// Restrict to these checks (repeatable).
    #[arg(long = "check")]
    pub checks: Vec<Check>,
    /// Radii in the duality sweep.
    #[arg(long = "r-sweep", default_value_t = 5)]
    pub r_sweep: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub radius: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["K", "H"])]
    pub segments: Option<Vec<usize>>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Everything that determines a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub instance: String,
    pub config_sha256: String,
    pub mode: String,
    pub radius: f64,
    pub beta: f64,
    pub pipeline_segments: usize,
    pub traffic_segments: usize,
    pub reduction: String,
    pub bilinear: String,
    pub absolute_gap: f64,
    pub relative_gap: f64,
    pub integrality_tol: f64,
    pub out: String,
}

impl RunManifest {
    pub fn new(command: &str, instance: &Loaded, cfg: &PlanConfig, out: &Path) -> Self {
        Self {
            command: command.to_string(),
            instance: instance.spec.clone(),
            config_sha256: instance.sha256.clone(),
            mode: cfg.mode.label().to_string(),
            radius: cfg.radius,
            beta: cfg.beta,
            pipeline_segments: cfg.pipeline_segments,
            traffic_segments: cfg.traffic_segments,
            reduction: cfg.reduction.label().to_string(),
            bilinear: cfg.bilinear.label().to_string(),
            absolute_gap: cfg.milp.absolute_gap,
            relative_gap: cfg.milp.relative_gap,
            integrality_tol: cfg.milp.integrality_tol,
            out: out.display().to_string(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest fields are plain values")
    }
}

/// A configuration document with its parsed network.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub spec: String,
    pub sha256: String,
    pub net: CoupledNetwork,
}

pub fn load_instance(spec: &str) -> Result<Loaded, PlanError> {
    let text = match instances::document(spec) {
        Some(doc) => doc.to_string(),
        None => fs::read_to_string(spec).map_err(|source| ConfigError::Io {
            path: spec.to_string(),
            source,
        })?,
    };
    let net = match instances::document(spec) {
        Some(_) => load_config(&text)?,
        None => load_config_file(Path::new(spec))?,
    };
    let sha256 = Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(Loaded {
        spec: spec.to_string(),
        sha256,
        net,
    })
}

fn overrides(
    net: &CoupledNetwork,
    mode: Mode,
    radius: Option<f64>,
    beta: Option<f64>,
    segments: Option<&[usize]>,
) -> PlanConfig {
    let mut cfg = PlanConfig::from_network(net, mode);
    if let Some(r) = radius {
        cfg.radius = r;
    }
    if let Some(b) = beta {
        cfg.beta = b;
    }
    if let Some([k, h]) = segments {
        cfg.pipeline_segments = *k;
        cfg.traffic_segments = *h;
    }
    cfg
}

fn config(net: &CoupledNetwork, args: &RunArgs) -> Result<PlanConfig, PlanError> {
    let mut cfg = overrides(
        net,
        args.mode,
        args.radius,
        args.beta,
        args.segments.as_deref(),
    );
    cfg.reduction = args.reduce;
    cfg.bilinear = args.bilinear;
    cfg.validate()?;
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, PlanError> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), PlanError> {
    fs::write(dir.join("manifest.toml"), manifest.to_toml())?;
    Ok(())
}

fn siting_bits(w: &[bool]) -> String {
    w.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Writes `model.mps`/`model.lp`, or one pair per HRS siting when the
/// decision-dependent mode enumerates sitings, plus `counts.csv` and
/// `census.csv`.
pub fn cmd_build(args: &RunArgs) -> Result<i32, PlanError> {
    let loaded = load_instance(&args.instance)?;
    let net = &loaded.net;
    let cfg = config(net, args)?;
    fs::create_dir_all(&args.out)?;
    let scen = prepare_scenarios(net, cfg.mode, cfg.reduction.bundling)?;
    let sitings: Vec<Option<Vec<bool>>> =
        if cfg.mode == Mode::DduDro && cfg.bilinear == Bilinear::Enumerate {
            let nb = net.num_nodes();
            (0..1usize << nb)
                .map(|mask| Some((0..nb).map(|i| mask >> (nb - 1 - i) & 1 == 1).collect()))
                .collect()
        } else {
            vec![None]
        };
    let mut reports = Vec::new();
    for siting in &sitings {
        let asm = assemble(net, &scen, &cfg, siting.as_deref())?;
        let stem = match siting {
            Some(w) => format!("model_w{}", siting_bits(w)),
            None => "model".to_string(),
        };
        ddu_milp::export_mps(&asm.model, create(&args.out, &format!("{stem}.mps"))?)?;
        ddu_milp::export_lp(&asm.model, create(&args.out, &format!("{stem}.lp"))?)?;
        let mut report = reformulation_report(&asm, &scen, cfg.reduction);
        report.model = format!("{}/{stem}", report.model);
        println!(
            "{stem}: {} rows, {} columns, {} binaries",
            report.total_rows, report.total_vars, report.binaries
        );
        reports.push(report);
    }
    report::write_counts(&reports, create(&args.out, "counts.csv")?)?;
    fs::write(
        args.out.join("census.csv"),
        scen.support.census_csv(&scen.feasible, &scen.units),
    )?;
    write_manifest(
        &args.out,
        &RunManifest::new("build", &loaded, &cfg, &args.out),
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_solve(args: &RunArgs) -> Result<i32, PlanError> {
    let loaded = load_instance(&args.instance)?;
    let net = &loaded.net;
    let cfg = config(net, args)?;
    fs::create_dir_all(&args.out)?;
    write_manifest(
        &args.out,
        &RunManifest::new("solve", &loaded, &cfg, &args.out),
    )?;
    let sol = solve_plan(net, &cfg)?;
    let dir = &args.out;
    report::write_costs(&sol, create(dir, "costs.csv")?)?;
    report::write_production(&sol, create(dir, "production.csv")?)?;
    report::write_capture(&sol, create(dir, "capture.csv")?)?;
    report::write_siting(&sol, create(dir, "siting.csv")?)?;
    report::write_distribution(&sol, create(dir, "distribution.csv")?)?;
    report::write_counts(
        std::slice::from_ref(&sol.report),
        create(dir, "counts.csv")?,
    )?;
    fs::write(
        dir.join("census.csv"),
        sol.scenarios
            .support
            .census_csv(&sol.scenarios.feasible, &sol.scenarios.units),
    )?;
    report::write_timings(
        &[(cfg.mode.label().to_string(), sol.wall.as_secs_f64())],
        create(dir, "timings.csv")?,
    )?;
    println!(
        "{} {}: objective {} total {} pattern {} ({} models)",
        net.name,
        cfg.mode,
        report::num(sol.objective),
        report::num(sol.total_cost),
        sol.pattern.bits(),
        sol.models_solved
    );
    if sol.envelope_gap > 0.0 {
        println!("envelope gap {}", report::num(sol.envelope_gap));
    }
    Ok(EXIT_OK)
}

/// Writes `compare.csv` even when some modes fail; the exit code is then 2.
pub fn cmd_compare(args: &RunArgs) -> Result<i32, PlanError> {
    let loaded = load_instance(&args.instance)?;
    let net = &loaded.net;
    let cfg = config(net, args)?;
    fs::create_dir_all(&args.out)?;
    write_manifest(
        &args.out,
        &RunManifest::new("compare", &loaded, &cfg, &args.out),
    )?;
    let results = compare_modes(net, &cfg);
    let rows: Vec<CompareRow<'_>> = results
        .iter()
        .map(|(mode, r)| CompareRow {
            mode: *mode,
            result: r.as_ref(),
        })
        .collect();
    report::write_compare(&rows, create(&args.out, "compare.csv")?)?;
    let timings: Vec<(String, f64)> = results
        .iter()
        .filter_map(|(m, r)| {
            r.as_ref()
                .ok()
                .map(|s| (m.label().to_string(), s.wall.as_secs_f64()))
        })
        .collect();
    report::write_timings(&timings, create(&args.out, "timings.csv")?)?;
    let mut code = EXIT_OK;
    for (mode, r) in &results {
        match r {
            Ok(s) => println!("{mode:<8} total {}", report::num(s.total_cost)),
            Err(e) => {
                eprintln!("error: {mode}: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    Ok(code)
}

/// Writes `oracle.csv` and `oracle_timings.csv`; exit code 3 when any
/// comparison fails.
pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, PlanError> {
    let specs: Vec<String> = if args.instance == "desk" {
        instances::DESK.iter().map(|s| s.to_string()).collect()
    } else {
        vec![args.instance.clone()]
    };
    fs::create_dir_all(&args.out)?;
    let mut reports = Vec::new();
    for spec in &specs {
        let loaded = load_instance(spec)?;
        let net = &loaded.net;
        let base = overrides(
            net,
            Mode::DduDro,
            args.radius,
            args.beta,
            args.segments.as_deref(),
        );
        base.validate()?;
        let mut plan = VerifyPlan::for_network(net);
        plan.radii = args.r_sweep;
        if !args.checks.is_empty() {
            plan.checks = args.checks.clone();
        }
        for r in oracle::verify_instance(net, &base, &plan)? {
            println!(
                "{} {} {} {}: oracle {} pipeline {} rel {:.2e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.instance,
                r.check,
                r.case,
                r.oracle,
                r.pipeline,
                r.rel_dev
            );
            reports.push(r);
        }
    }
    oracle::write_reports(&reports, create(&args.out, "oracle.csv")?)?;
    oracle::write_timings(&reports, create(&args.out, "oracle_timings.csv")?)?;
    Ok(verify_exit_code(&reports))
}

/// 0 when every oracle row passes, 3 otherwise.
pub fn verify_exit_code(reports: &[oracle::OracleReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_ORACLE
    }
}

/// Runs a parsed command line and returns the process exit code. Errors
/// are reported on standard error.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs them. Usage errors exit
/// with code 1.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = e.print();
            code
        }
    }
}
