//! The `objpert` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors (including an unreadable `--config`),
//! 2 on runtime errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::{
    dataset_csv_spec, ingest_csv, parse_config, run_experiment, synth_halfspace, write_dataset, write_dataset_csv,
    ExperimentConfig, IngestSpec,
};
use crate::audit::{
    audit_dp, check_concentration, estimate_stability, mapping_experiment, random_box_instance, tie_rate, Cells,
};
use crate::domain::{Dataset, DiscreteSpace, LabeledExample, PrivacyBudget, WeightedDataset};
use crate::error::Result;
use crate::mechanisms::{
    bound_objdisc, bound_objsamp, bound_rspm, separator_candidate, sigma_objdisc, verify_separator, SeparatorCheck,
};
use crate::noise::{gaussian_vector, RngStream, StreamId};
use crate::oracles::{mps::export_mps, BoxLinearOracle, ExhaustiveOracle, MipInstance, NormalizedOracle};

const AUDIT_STREAM: u64 = 0xa0d1;
const EXPORT_STREAM: u64 = 0xe8a0;

#[derive(Parser)]
#[command(name = "objpert", version, about = "Objective perturbation mechanisms, exact 0/1-loss oracles and privacy audits")]
struct Cli {
    /// Root seed; every random draw derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// `key = value` file supplying flags of the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Accuracy-versus-ε sweep.
    Run(ExperimentConfig),
    /// Empirical checks of the privacy analysis.
    Audit(AuditArgs),
    /// Closed-form utility bounds.
    Bounds(BoundsArgs),
    /// Synthetic halfspace data as CSV.
    Synth(SynthArgs),
    /// One-hot encode and balance a CSV file.
    Ingest(IngestArgs),
    /// Write a MIP instance in MPS format.
    ExportMps(ExportArgs),
    /// Check the separator candidate against a grid.
    VerifySeparator(SeparatorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AuditKind {
    Mapping,
    Dp,
    Stability,
    Concentration,
    Ties,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, value_enum)]
    kind: AuditKind,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Largest dimension for mapping trials.
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Defaults to 1/n².
    #[arg(long)]
    delta: Option<f64>,
    /// Record replaced (label flipped) to form the neighbor in `dp`.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Gaussian scale for `ties`, exponential rate for `stability` and `concentration`.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Random instances for `stability`.
    #[arg(long, default_value_t = 20)]
    instances: u64,
    #[arg(long, default_value_t = 0.1)]
    gamma: f64,
    #[arg(long, default_value_t = 200)]
    repeats: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundMechanism {
    Objdisc,
    Objsamp,
    Rspm,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    mechanism: BoundMechanism,
    #[arg(long = "G", default_value_t = 1.0)]
    g: f64,
    /// ℓ2 radius of the grid.
    #[arg(long = "D", default_value_t = 1.0)]
    radius: f64,
    #[arg(long = "d", default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long)]
    n: usize,
    #[arg(long = "D2", default_value_t = 1.0)]
    d2: f64,
    #[arg(long = "Dinf", default_value_t = 1.0)]
    dinf: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Use `2√(BE)` in the ObjSamp bound.
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false", action = clap::ArgAction::Set)]
    double_root: bool,
    /// Separator size for RSPM.
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 0.0)]
    margin: f64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    label: String,
    #[arg(long)]
    positive: String,
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    numeric: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", default_value = "false", action = clap::ArgAction::Set)]
    balance: bool,
    /// Encoded CSV destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportMode {
    Normalized,
    Linear,
    Weighted,
}

#[derive(Args)]
struct ExportArgs {
    /// Dataset in `x0,…,y` form; synthetic data when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_enum, default_value = "normalized")]
    mode: ExportMode,
    /// Gaussian scale of η (and of the probe weights in weighted mode).
    #[arg(long, default_value_t = 0.0)]
    eta_scale: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long)]
    coord_bound: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SeparatorArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    coord_bound: f64,
    /// Defaults to √d.
    #[arg(long)]
    radius: Option<f64>,
}

/// Six significant digits, printed in shortest form.
fn short(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:?}");
    }
    let rounded: f64 = format!("{v:.5e}").parse().unwrap_or(v);
    format!("{rounded:?}")
}

fn subcommand_position(argv: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let t = &argv[i];
        if t == "--seed" || t == "--config" {
            i += 2;
        } else if t.starts_with('-') {
            i += 1;
        } else {
            return Some(i);
        }
    }
    None
}

/// Removes `--config FILE` and splices the file's pairs in as flags after the subcommand.
/// Keys also given on the command line are skipped.
fn expand_config(mut argv: Vec<String>) -> std::result::Result<Vec<String>, String> {
    let mut path = None;
    let mut i = 1;
    while i < argv.len() {
        if argv[i] == "--config" {
            if i + 1 >= argv.len() {
                return Err("--config needs a file".into());
            }
            path = Some(argv.remove(i + 1));
            argv.remove(i);
        } else if let Some(p) = argv[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            argv.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config `{path}`: {e}"))?;
    let pairs = parse_config(&text).map_err(|e| e.to_string())?;
    let given = |key: &str| {
        let flag = format!("--{key}");
        argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
    };
    let extra: Vec<String> = pairs
        .iter()
        .filter(|(k, _)| !given(k))
        .map(|(k, v)| format!("--{k}={v}"))
        .collect();
    let at = subcommand_position(&argv).map_or(argv.len(), |p| p + 1);
    argv.splice(at..at, extra);
    Ok(argv)
}

/// Runs the command line with the process streams.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Runs the command line with the given output streams and returns the exit code.
pub fn run_with<I: IntoIterator<Item = String>>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv: Vec<String> = argv.into_iter().collect();
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 1;
        }
    };
    let matches = match Cli::command().try_get_matches_from(&argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return 1;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn emit(value: &serde_json::Value, dest: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match dest {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::Run(mut cfg) => {
            cfg.seed = seed;
            let res = run_experiment(&cfg)?;
            for row in &res.summary {
                writeln!(out, "{} eps={} mean_acc={} sd_acc={}", row.mechanism, short(row.epsilon), short(row.mean_acc), short(row.sd_acc))?;
            }
            writeln!(out, "optimum_acc={}", short(res.meta.optimum_accuracy))?;
            let inexact = res.runs.iter().filter(|r| !r.record.exact).count();
            if inexact > 0 {
                writeln!(out, "WARNING: {inexact} runs used uncertified oracle answers; their privacy guarantee is void")?;
            }
        }
        Command::Bounds(a) => {
            let v = match a.mechanism {
                BoundMechanism::Objdisc => bound_objdisc(a.g, a.radius, a.dim, a.tau, a.eps, a.delta, a.beta, a.n)?,
                BoundMechanism::Objsamp => {
                    bound_objsamp(a.dim, a.n, a.d2, a.dinf, a.g, a.eps, a.delta, a.beta, a.alpha, a.double_root)?
                }
                BoundMechanism::Rspm => bound_rspm(a.m, a.eps, a.delta, a.beta, a.n)?,
            };
            writeln!(out, "{}", short(v))?;
        }
        Command::Synth(a) => {
            let s = synth_halfspace(a.n, a.d, a.margin, a.noise, seed)?;
            match &a.out {
                Some(p) => {
                    write_dataset_csv(&s.data, p)?;
                    let info = json!({ "planted": s.planted, "planted_loss": s.planted_loss, "flipped": s.flipped });
                    writeln!(out, "{info}")?;
                }
                None => write_dataset(&s.data, &mut *out)?,
            }
        }
        Command::Ingest(a) => {
            let spec = IngestSpec {
                path: a.input,
                label_column: a.label,
                positive_label: a.positive,
                categorical: a.categorical,
                numeric: a.numeric,
                balance: a.balance,
                features: a.features,
            };
            let ing = ingest_csv(&spec, seed)?;
            if let Some(p) = &a.out {
                write_dataset_csv(&ing.data, p)?;
            }
            let (pos, neg) = super::class_counts(&ing.data);
            let info = json!({
                "rows_read": ing.rows_read,
                "n": ing.data.len(),
                "d": ing.data.dim(),
                "positives": pos,
                "negatives": neg,
                "features": ing.features,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&info)?)?;
        }
        Command::ExportMps(a) => export(a, seed, out)?,
        Command::VerifySeparator(a) => {
            let space = DiscreteSpace::new(a.d, a.tau, a.coord_bound, a.radius.unwrap_or((a.d as f64).sqrt()))?;
            let sep = separator_candidate(a.d, a.tau)?;
            let v = match verify_separator(&sep, &space)? {
                SeparatorCheck::Pass => json!({ "result": "pass", "size": sep.len() }),
                SeparatorCheck::Counterexample(w, w2) => {
                    json!({ "result": "counterexample", "size": sep.len(), "w": w, "w_prime": w2 })
                }
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Command::Audit(a) => audit(a, seed, out)?,
    }
    Ok(())
}

fn export(a: ExportArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let data = match &a.input {
        Some(p) => ingest_csv(&dataset_csv_spec(p), seed)?.data,
        None => synth_halfspace(a.n, a.d, 0.0, 0.05, seed)?.data,
    };
    let d = data.dim();
    let root_d = (d as f64).sqrt();
    let mut rng = StreamId::new(seed, 0).child(EXPORT_STREAM).open();
    let inst = match a.mode {
        ExportMode::Normalized | ExportMode::Linear => {
            let space = DiscreteSpace::new(d, a.tau, a.coord_bound.unwrap_or(root_d.floor()), a.radius.unwrap_or(root_d))?;
            if matches!(a.mode, ExportMode::Normalized) {
                let eta = gaussian_vector(d + 1, a.eta_scale, &mut rng)?;
                MipInstance::normalized(&data, &eta, &space)?
            } else {
                let eta = gaussian_vector(d, a.eta_scale, &mut rng)?;
                MipInstance::linear(&data, &eta, &space)?
            }
        }
        ExportMode::Weighted => {
            let b = a.coord_bound.unwrap_or(1.0);
            let space = DiscreteSpace::new(d, a.tau, b, a.radius.unwrap_or(b * root_d))?;
            let sep = separator_candidate(d, a.tau)?;
            let mut wd = WeightedDataset::unit(&data);
            for (probe, p) in sep.probes().iter().zip(gaussian_vector(sep.len(), a.eta_scale, &mut rng)?) {
                wd.push(probe.clone(), p)?;
            }
            MipInstance::weighted(&wd, &space)?
        }
    };
    export_mps(&inst, &a.out)?;
    writeln!(out, "{}", json!({ "rows": inst.len(), "columns": inst.len() + d, "mode": inst.mode.as_str() }))?;
    Ok(())
}

fn flip(e: &LabeledExample) -> LabeledExample {
    let y = match e.y {
        crate::domain::Label::Positive => crate::domain::Label::Negative,
        crate::domain::Label::Negative => crate::domain::Label::Positive,
    };
    LabeledExample { x: e.x.clone(), y }
}

fn audit(a: AuditArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let rng = StreamId::new(seed, 0).child(AUDIT_STREAM).open();
    let value = match a.kind {
        AuditKind::Mapping => serde_json::to_value(mapping_experiment(a.trials, a.max_dim, &[2.0, 4.0], &rng)?)?,
        AuditKind::Dp => {
            let data = synth_halfspace(a.n, a.d, 0.0, 0.0, seed)?.data;
            let idx = a.index.min(a.n - 1);
            let neighbor = data.neighbor(idx, flip(&data.items()[idx]))?;
            let budget = PrivacyBudget::new(a.eps, a.delta.unwrap_or(1.0 / (a.n * a.n) as f64))?;
            let oracle = ExhaustiveOracle::new(DiscreteSpace::halfspace_grid(a.d)?)?;
            let space = oracle.space();
            let sigma = sigma_objdisc(1.0 / space.step(), space.radius(), space.step(), budget.epsilon(), budget.delta())?;
            let mech = |d: &Dataset<LabeledExample>, r: &mut RngStream| {
                let eta = gaussian_vector(a.d + 1, sigma, r)?;
                Ok(oracle.minimize_normalized(d, &eta)?.w)
            };
            let cells = Cells::Points(oracle.points().to_vec());
            serde_json::to_value(audit_dp(&mech, &cells, &data, &neighbor, budget, a.trials, &rng)?)?
        }
        AuditKind::Stability => {
            let mut rows = Vec::new();
            for k in 0..a.instances {
                let mut r = rng.child(k);
                let dim = 1 + (k as usize % a.d.max(1));
                let (data, neighbor, space, g) = random_box_instance(dim, 20, &mut r)?;
                let oracle = BoxLinearOracle::new(space.clone());
                let est = estimate_stability(&data, &neighbor, &oracle, a.sigma, a.trials, &r.child(1))?;
                let dinf = space.diameter_linf();
                let bound = 250.0 * a.sigma * g * (dim * dim) as f64 * dinf * dinf;
                rows.push(json!({ "d": dim, "estimate": est, "bound": bound, "pass": est.upper() <= bound }));
            }
            serde_json::Value::Array(rows)
        }
        AuditKind::Concentration => {
            let (data, _, space, _) = random_box_instance(a.d, 20, &mut rng.child(0))?;
            let oracle = BoxLinearOracle::new(space.clone());
            let delta = a.delta.unwrap_or(0.1);
            serde_json::to_value(check_concentration(
                &data,
                &oracle,
                a.sigma,
                a.gamma,
                delta,
                space.diameter_linf(),
                a.repeats,
                50_000_000,
                &rng.child(1),
            )?)?
        }
        AuditKind::Ties => {
            let data = synth_halfspace(a.n, a.d, 0.0, 0.0, seed)?.data;
            let oracle = ExhaustiveOracle::new(DiscreteSpace::halfspace_grid(a.d)?)?;
            let rate = tie_rate(&data, &oracle, a.sigma, a.trials, &mut rng.child(0))?;
            json!({ "trials": a.trials, "sigma": a.sigma, "tie_rate": rate })
        }
    };
    emit(&value, a.out.as_ref(), out)?;
    Ok(())
}
