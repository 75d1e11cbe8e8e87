// Audit one predicted dataset: gap table, support counts, accuracy and the
// class filter, through the same entry point as `fairgauge audit`.
//
// Run with `cargo run --example audit [OUT_DIR]`.

use std::error::Error;
use std::fs;
use std::path::Path;

use fairgauge::cli::{self, AuditArgs, InputArgs};
use fairgauge::stats::FilterRule;
use fairgauge::MetricKind;

const CSV: &str = "\
id,gender,title,prediction
1,M,nurse,nurse
2,M,nurse,nurse
3,M,nurse,surgeon
4,M,surgeon,surgeon
5,F,nurse,nurse
6,F,nurse,surgeon
7,F,surgeon,surgeon
8,F,surgeon,surgeon
";

pub fn run_example(out: &Path) -> Result<(), Box<dyn Error>> {
    fs::create_dir_all(out)?;
    let dataset = out.join("eight.csv");
    fs::write(&dataset, CSV)?;

    let summary = cli::audit(&AuditArgs {
        dataset,
        input: InputArgs {
            schema: Some("group=gender,true_class=title,predicted_class=prediction".into()),
            format: None,
        },
        groups: Some("M,F".parse()?),
        filter: FilterRule::AnyPrediction,
        out: out.join("audit"),
    })?;

    println!("{:<4} {:<8} {:>8} {:>8} {:>8}", "", "class", "M", "F", "gap");
    for row in &summary.gaps.rows {
        let show = |v: Option<f64>| v.map_or("undef".to_owned(), |v| format!("{v:.3}"));
        println!(
            "{:<4} {:<8} {:>8} {:>8} {:>8}",
            row.metric.code(),
            row.class,
            show(row.first.value()),
            show(row.second.value()),
            show(row.gap())
        );
    }
    for (class, (m, f)) in summary.gaps.classes.iter().map(|c| (c, summary.gaps.class_supports(c).unwrap())) {
        println!("support {class}: M n_gp={} n_tpr={}  F n_gp={} n_tpr={}", m.n_gp, m.n_tpr, f.n_gp, f.n_tpr);
    }
    println!("accuracy {:.3}", summary.accuracy.unwrap_or(f64::NAN));
    assert_eq!(summary.gaps.gap(MetricKind::GroupParity, "nurse"), Some(0.25));
    println!("tables written to {}", out.join("audit").display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/examples-out/audit".into());
    run_example(Path::new(&out))
}
