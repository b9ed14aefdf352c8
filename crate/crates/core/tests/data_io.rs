use objpert::domain::{dataset_loss, DiscreteSpace};
use objpert::harness::{dataset_csv_spec, ingest_csv, synth_halfspace, write_dataset_csv, IngestSpec};
use objpert::oracles::mps::{export_mps, import_mps};
use objpert::oracles::MipInstance;

#[test]
fn synth_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let s = synth_halfspace(50, 3, 0.05, 0.1, 11).unwrap();
    write_dataset_csv(&s.data, &path).unwrap();
    let back = ingest_csv(&dataset_csv_spec(&path), 0).unwrap();
    assert_eq!(back.data, s.data);
    assert_eq!(back.features, ["x0", "x1", "x2"]);
}

#[test]
fn realizable_synth_has_zero_planted_loss() {
    let s = synth_halfspace(200, 3, 0.0, 0.0, 4).unwrap();
    assert_eq!(dataset_loss(&s.data, &s.planted).unwrap(), 0.0);
    assert_eq!(s.planted_loss, 0.0);
}

#[test]
fn adult_style_ingest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adult.csv");
    let mut text = String::from("age,workclass,hours,income\n");
    let jobs = ["Private", "State-gov", "Self-emp"];
    for i in 0..10 {
        let label = if i < 3 { ">50K" } else { "<=50K" };
        text.push_str(&format!("{},\"{}\",{},{}\n", 20 + i, jobs[i % 3], 30 + i, label));
    }
    std::fs::write(&path, text).unwrap();
    let mut spec = IngestSpec::new(&path, "income", ">50K");
    spec.categorical = vec!["workclass".into()];
    spec.numeric = vec!["age".into()];
    let plain = ingest_csv(&spec, 1).unwrap();
    assert_eq!(plain.data.dim(), 4);
    assert_eq!(plain.data.len(), 10);
    spec.balance = true;
    let balanced = ingest_csv(&spec, 1).unwrap();
    assert_eq!(balanced.data.len(), 6);
    assert_eq!(balanced.data, ingest_csv(&spec, 1).unwrap().data);
}

#[test]
fn mps_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.mps");
    let data = synth_halfspace(15, 2, 0.0, 0.1, 2).unwrap().data;
    let space = DiscreteSpace::halfspace_grid(2).unwrap();
    let inst = MipInstance::normalized(&data, &[0.3, -0.2, 0.5], &space).unwrap();
    export_mps(&inst, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("QCMATRIX"));
    assert!(text.trim_end().ends_with("ENDATA"));
    assert!(import_mps(&path).unwrap().approx_eq(&inst, 1e-12));
}
