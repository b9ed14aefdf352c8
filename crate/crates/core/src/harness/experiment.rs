use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ingest_csv, synth_halfspace, ExperimentConfig, IngestSpec, MechanismKind, OracleKind};
use crate::domain::{ContinuousSpace, Dataset, DiscreteSpace, LabeledExample, PrivacyBudget, WeightedDataset};
use crate::error::{Error, Result};
use crate::mechanisms::{
    bound_objdisc, bound_rspm, obj_disc, obj_samp, rspm, separator_candidate, verify_separator, ExactPolicy,
    RunRecord, SeparatorSet,
};
use crate::noise::StreamId;
use crate::oracles::{
    BranchAndBoundOracle, ExhaustiveOracle, LinearOracle, NormalizedOracle, OracleOutcome, WeightedOracle,
};

/// Either exact oracle, chosen at run time.
pub enum AnyOracle {
    Exhaustive(ExhaustiveOracle),
    Bnb(BranchAndBoundOracle),
}

impl AnyOracle {
    pub fn new(kind: OracleKind, space: DiscreteSpace, node_budget: u64) -> Result<Self> {
        Ok(match kind {
            OracleKind::Exhaustive => AnyOracle::Exhaustive(ExhaustiveOracle::new(space)?),
            OracleKind::Bnb => AnyOracle::Bnb(BranchAndBoundOracle::with_budget(space, node_budget)),
        })
    }
}

impl NormalizedOracle<LabeledExample> for AnyOracle {
    fn space(&self) -> &DiscreteSpace {
        match self {
            AnyOracle::Exhaustive(o) => o.space(),
            AnyOracle::Bnb(o) => NormalizedOracle::<LabeledExample>::space(o),
        }
    }

    fn minimize_normalized(&self, data: &Dataset<LabeledExample>, eta: &[f64]) -> Result<OracleOutcome> {
        match self {
            AnyOracle::Exhaustive(o) => o.minimize_normalized(data, eta),
            AnyOracle::Bnb(o) => o.minimize_normalized(data, eta),
        }
    }
}

impl LinearOracle<LabeledExample> for AnyOracle {
    fn minimize_linear(&self, data: &Dataset<LabeledExample>, eta: &[f64]) -> Result<OracleOutcome> {
        match self {
            AnyOracle::Exhaustive(o) => o.minimize_linear(data, eta),
            AnyOracle::Bnb(o) => o.minimize_linear(data, eta),
        }
    }
}

impl WeightedOracle<LabeledExample> for AnyOracle {
    fn minimize_weighted(&self, data: &WeightedDataset<LabeledExample>) -> Result<OracleOutcome> {
        match self {
            AnyOracle::Exhaustive(o) => o.minimize_weighted(data),
            AnyOracle::Bnb(o) => o.minimize_weighted(data),
        }
    }
}

/// One line of `runs.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunLine {
    pub run: usize,
    pub rep: usize,
    pub seed: u64,
    /// Training 0/1 accuracy, `1 − L(D, w)/n`.
    pub accuracy: f64,
    #[serde(flatten)]
    pub record: RunRecord,
}

/// One row of `summary.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub mechanism: String,
    pub epsilon: f64,
    pub delta: f64,
    pub mean_acc: f64,
    pub sd_acc: f64,
    pub mean_wall_ms: Option<f64>,
    pub n_runs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub epsilon: f64,
    pub objdisc: f64,
    /// Leading constant set to 1.
    pub rspm_up_to_constants: f64,
}

/// Contents of `meta.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub n: usize,
    pub d: usize,
    pub delta: f64,
    pub features: Vec<String>,
    pub planted: Option<Vec<f64>>,
    pub planted_accuracy: Option<f64>,
    /// Best training accuracy over the ObjDisc grid.
    pub optimum_accuracy: f64,
    pub optimum_w: Vec<f64>,
    pub objdisc_space: DiscreteSpace,
    pub rspm_space: DiscreteSpace,
    pub separator_size: usize,
    pub separator_verified: bool,
    pub bounds: Vec<BoundRow>,
    pub config: ExperimentConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResults {
    pub runs: Vec<RunLine>,
    pub summary: Vec<SummaryRow>,
    pub meta: Meta,
}

struct Setup {
    data: Dataset<LabeledExample>,
    meta: Meta,
    objdisc: AnyOracle,
    rspm: AnyOracle,
    separator: SeparatorSet,
    samp_grid: AnyOracle,
    samp_box: ContinuousSpace,
}

type Loaded = (Dataset<LabeledExample>, Vec<String>, Option<(Vec<f64>, f64)>);

fn load(cfg: &ExperimentConfig) -> Result<Loaded> {
    match &cfg.data {
        Some(path) => {
            let spec = IngestSpec {
                path: path.clone(),
                label_column: cfg.label.clone(),
                positive_label: cfg.positive.clone(),
                categorical: cfg.categorical.clone(),
                numeric: cfg.numeric.clone(),
                balance: cfg.balance,
                features: Vec::new(),
            };
            let ing = ingest_csv(&spec, cfg.seed)?;
            Ok((ing.data, ing.features, None))
        }
        None => {
            let s = synth_halfspace(cfg.n, cfg.d, cfg.margin, cfg.noise, cfg.seed)?;
            let features = (0..cfg.d).map(|j| format!("x{j}")).collect();
            let acc = 1.0 - s.planted_loss / cfg.n as f64;
            Ok((s.data, features, Some((s.planted, acc))))
        }
    }
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    cfg.validate()?;
    let (data, features, planted) = load(cfg)?;
    let (n, d) = (data.len(), data.dim());
    let delta = cfg.delta.resolve(n);
    let root_d = (d as f64).sqrt();
    let b = cfg.coord_bound.unwrap_or(root_d.floor());
    let objdisc_space = DiscreteSpace::new(d, cfg.tau, b, cfg.radius.unwrap_or(root_d))?;
    let rspm_space = DiscreteSpace::new(d, cfg.tau, 1.0, root_d)?;
    let samp_grid_space = DiscreteSpace::new(d, cfg.tau, b, b.max(cfg.tau) * root_d)?;

    let wants = |m| cfg.mechanisms.contains(&m);
    let separator = separator_candidate(d, cfg.tau)?;
    let separator_verified = if wants(MechanismKind::Rspm) {
        let ok = verify_separator(&separator, &rspm_space)?.passed();
        if !ok && !cfg.force {
            return Err(Error::invalid("separator", "candidate does not separate the RSPM grid; pass --force to run anyway"));
        }
        ok
    } else {
        false
    };

    let objdisc = AnyOracle::new(cfg.oracle, objdisc_space.clone(), cfg.node_budget)?;
    let best = objdisc.minimize_linear(&data, &vec![0.0; d])?;
    if !best.exact && !cfg.force {
        return Err(Error::InexactOracle);
    }
    let bounds = cfg
        .epsilons
        .iter()
        .map(|&eps| {
            Ok(BoundRow {
                epsilon: eps,
                objdisc: bound_objdisc(1.0 / cfg.tau, objdisc_space.radius(), d, cfg.tau, eps, delta, 0.05, n)?,
                rspm_up_to_constants: bound_rspm(separator.len(), eps, delta, 0.05, n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lazy = |kind: MechanismKind, space: DiscreteSpace| -> Result<AnyOracle> {
        // skip enumerating spaces nobody uses
        if wants(kind) {
            AnyOracle::new(cfg.oracle, space, cfg.node_budget)
        } else {
            Ok(AnyOracle::Bnb(BranchAndBoundOracle::new(space)))
        }
    };
    let meta = Meta {
        n,
        d,
        delta,
        features,
        planted_accuracy: planted.as_ref().map(|p| p.1),
        planted: planted.map(|p| p.0),
        optimum_accuracy: 1.0 - best.value / n as f64,
        optimum_w: best.w,
        rspm_space: rspm_space.clone(),
        objdisc_space,
        separator_size: separator.len(),
        separator_verified,
        bounds,
        config: cfg.clone(),
    };
    Ok(Setup {
        rspm: lazy(MechanismKind::Rspm, rspm_space)?,
        samp_grid: lazy(MechanismKind::Objsamp, samp_grid_space)?,
        samp_box: ContinuousSpace::cube(d, -b, b)?,
        separator,
        objdisc,
        data,
        meta,
    })
}

fn run_one(s: &Setup, cfg: &ExperimentConfig, mech: MechanismKind, budget: PrivacyBudget, stream: StreamId) -> Result<RunRecord> {
    let mut rng = stream.open();
    let g = 1.0 / cfg.tau;
    let start = cfg.timing.then(Instant::now);
    let mut rec = match mech {
        MechanismKind::Objdisc => {
            let policy = if cfg.force { ExactPolicy::Warn } else { ExactPolicy::Require };
            obj_disc(&s.data, &s.objdisc, budget, g, policy, &mut rng)?
        }
        MechanismKind::Rspm => {
            let mut rec = rspm(&s.data, &s.separator, &s.rspm, budget, &mut rng)?;
            if !s.meta.separator_verified {
                rec.warnings.push("separator not verified for this grid".into());
            }
            rec
        }
        MechanismKind::Objsamp => {
            obj_samp(&s.data, &s.samp_box, &s.samp_grid, budget, g, cfg.beta, cfg.alpha, &mut rng)?.record
        }
    };
    if !rec.exact && !cfg.force {
        return Err(Error::InexactOracle);
    }
    rec.wall_ms = start.map(|t| t.elapsed().as_secs_f64() * 1e3);
    Ok(rec)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Runs every (mechanism, ε, repetition) cell and writes `runs.jsonl`, `summary.csv`,
/// `plot.csv` and `meta.json` into `cfg.out`.
///
/// Run `(mechanism, i, rep)` draws from `StreamId::new(seed, 0).child(mechanism).child(i)
/// .child(rep)`, so results do not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    let results = compute(cfg)?;
    results.write(&cfg.out)?;
    Ok(results)
}

/// [`run_experiment`] without writing files.
pub fn compute(cfg: &ExperimentConfig) -> Result<ExperimentResults> {
    let s = setup(cfg)?;
    let root = StreamId::new(cfg.seed, 0);
    let mut cells = Vec::new();
    for &mech in &cfg.mechanisms {
        for (i, &eps) in cfg.epsilons.iter().enumerate() {
            for rep in 0..cfg.reps {
                cells.push((mech, i, eps, rep));
            }
        }
    }
    let records = cells
        .par_iter()
        .enumerate()
        .map(|(run, &(mech, i, eps, rep))| {
            let budget = PrivacyBudget::new(eps, s.meta.delta)?;
            let stream = root.child(mech.stream_key()).child(i as u64).child(rep as u64);
            run_one(&s, cfg, mech, budget, stream).map_err(|e| Error::Run { run, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    let runs: Vec<RunLine> = records
        .into_iter()
        .zip(&cells)
        .enumerate()
        .map(|(run, (record, &(_, _, _, rep)))| RunLine { run, rep, seed: cfg.seed, accuracy: 1.0 - record.loss, record })
        .collect();

    let mut summary = Vec::new();
    for chunk in runs.chunks(cfg.reps) {
        let acc: Vec<f64> = chunk.iter().map(|r| r.accuracy).collect();
        let (mean_acc, sd_acc) = mean_sd(&acc);
        let walls: Option<Vec<f64>> = chunk.iter().map(|r| r.record.wall_ms).collect();
        summary.push(SummaryRow {
            mechanism: chunk[0].record.mechanism.clone(),
            epsilon: chunk[0].record.epsilon,
            delta: chunk[0].record.delta,
            mean_acc,
            sd_acc,
            mean_wall_ms: walls.map(|w| mean_sd(&w).0),
            n_runs: chunk.len(),
        });
    }
    Ok(ExperimentResults { runs, summary, meta: s.meta })
}

impl ExperimentResults {
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut runs = std::io::BufWriter::new(std::fs::File::create(dir.join("runs.jsonl"))?);
        for line in &self.runs {
            serde_json::to_writer(&mut runs, line)?;
            runs.write_all(b"\n")?;
        }
        runs.flush()?;

        let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
        for row in &self.summary {
            w.serialize(row)?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join("plot.csv"))?;
        w.write_record(["series", "epsilon", "mean_acc", "lower", "upper"])?;
        for row in &self.summary {
            w.write_record([
                row.mechanism.clone(),
                row.epsilon.to_string(),
                row.mean_acc.to_string(),
                (row.mean_acc - row.sd_acc).to_string(),
                (row.mean_acc + row.sd_acc).to_string(),
            ])?;
        }
        w.flush()?;

        let meta = std::fs::File::create(dir.join("meta.json"))?;
        serde_json::to_writer_pretty(meta, &self.meta)?;
        Ok(())
    }
}
