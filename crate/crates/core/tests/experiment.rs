use std::collections::BTreeMap;

use objpert::harness::{run_experiment, ExperimentConfig, MechanismKind, RunLine};

fn small(out: &std::path::Path) -> ExperimentConfig {
    ExperimentConfig {
        mechanisms: vec![MechanismKind::Objdisc, MechanismKind::Rspm],
        n: 30,
        d: 2,
        reps: 4,
        epsilons: vec![0.5, 2.0, 8.0],
        seed: 3,
        out: out.to_path_buf(),
        ..Default::default()
    }
}

#[test]
fn summary_means_match_the_run_records() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&small(dir.path())).unwrap();
    let runs: Vec<RunLine> = std::fs::read_to_string(dir.path().join("runs.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(runs.len(), 2 * 3 * 4);
    let mut groups: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    for r in &runs {
        assert_eq!(r.record.delta, 1.0 / 900.0);
        groups.entry((r.record.mechanism.clone(), r.record.epsilon.to_string())).or_default().push(r.accuracy);
    }
    let mut reader = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["mechanism", "epsilon", "delta", "mean_acc", "sd_acc", "mean_wall_ms", "n_runs"]
    );
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let eps: f64 = rec[1].parse().unwrap();
        let accs = &groups[&(rec[0].to_string(), eps.to_string())];
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        assert!((rec[3].parse::<f64>().unwrap() - mean).abs() < 1e-12);
        assert_eq!(rec[6].parse::<usize>().unwrap(), accs.len());
        rows += 1;
    }
    assert_eq!(rows, 6);
}

#[test]
fn rerun_reproduces_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path());
    run_experiment(&cfg).unwrap();
    let names = ["runs.jsonl", "summary.csv", "plot.csv", "meta.json"];
    let first: Vec<_> = names.iter().map(|f| std::fs::read(dir.path().join(f)).unwrap()).collect();
    run_experiment(&cfg).unwrap();
    for (f, bytes) in names.iter().zip(first) {
        assert_eq!(std::fs::read(dir.path().join(f)).unwrap(), bytes, "{f}");
    }
}
