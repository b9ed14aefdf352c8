//! One-hot encoding and class balancing of an Adult-style CSV.

use objpert::harness::{class_counts, ingest_csv, IngestSpec};

const CSV: &str = "\
age,workclass,education,hours-per-week,income
39,State-gov,Bachelors,40,<=50K
50,Self-emp,Bachelors,13,<=50K
38,Private,HS-grad,40,<=50K
53,Private,11th,40,<=50K
28,Private,Bachelors,40,<=50K
37,Private,Masters,40,<=50K
52,Self-emp,HS-grad,45,>50K
31,Private,Masters,50,>50K
42,Private,Bachelors,40,>50K
";

fn main() -> objpert::Result<()> {
    let path = std::env::temp_dir().join("objpert-adult-sample.csv");
    std::fs::write(&path, CSV)?;
    let mut spec = IngestSpec::new(&path, "income", ">50K");
    spec.categorical = vec!["workclass".into(), "education".into()];
    spec.numeric = vec!["age".into(), "hours-per-week".into()];
    spec.balance = true;
    let ing = ingest_csv(&spec, 0)?;
    println!("{} rows read, {} kept, d = {}", ing.rows_read, ing.data.len(), ing.data.dim());
    println!("features: {}", ing.features.join(" "));
    println!("(positive, negative) = {:?}", class_counts(&ing.data));
    Ok(())
}
