// A replicate plan whose predictions come from an external command, run
// through the same entry point as `fairgauge plan --predictor-cmd`.
//
// The command is called with four extra arguments: the train file, the
// test file, the path to write predictions to and the replicate seed. Here
// it is a `sed` script that predicts each test record's true class.
//
// Run with `cargo run --example external_predictor [OUT_DIR]` (needs `sh`
// and `sed`).

use std::error::Error;
use std::fs;
use std::path::Path;

use fairgauge::cli::{self, InputArgs, PlanArgs, RenderArgs, SimulateArgs};
use fairgauge::stats::FilterRule;

const PREDICTOR: &str = r#"#!/bin/sh
# usage: predict.sh TRAIN TEST OUT SEED
sed -E 's/^\{"id":("[^"]*").*"true_class":("[^"]*").*$/{"id":\1,"predicted_class":\2}/' "$2" > "$3"
"#;

pub fn run_example(out: &Path) -> Result<(), Box<dyn Error>> {
    fs::create_dir_all(out)?;
    let source = out.join("population.jsonl");
    cli::simulate(&SimulateArgs {
        spec: "reference".into(),
        n: 2_000,
        seed: Some(3),
        out: source.clone(),
    })?;
    let script = out.join("predict.sh");
    fs::write(&script, PREDICTOR)?;
    let plan = out.join("plan.json");
    fs::write(&plan, r#"{"sizes": [200, 1000], "replicates_per_size": 3, "master_seed": 5}"#)?;

    let outcome = cli::plan(&PlanArgs {
        datasets: vec![source],
        input: InputArgs { schema: None, format: None },
        groups: Some("M,F".parse()?),
        alpha: 0.05,
        filter: FilterRule::AnyPrediction,
        t_test: Default::default(),
        plan,
        predictor_cmd: Some(format!("sh '{}'", fs::canonicalize(&script)?.display())),
        builtin: None,
        seed: None,
        threads: None,
        out: out.join("run"),
    })?;
    println!("{} replicate files", outcome.replicate_files.len());
    for p in &outcome.report.performance {
        if let Some(s) = &p.summary {
            println!("{:?} at {}: mean {:.3}", p.measure, p.size, s.mean);
        }
    }

    let charts = cli::render_cmd(&RenderArgs {
        report: out.join("run/report.json"),
        out: out.join("charts"),
    })?;
    println!("{} charts in {}", charts.len(), out.join("charts").display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/examples-out/external_predictor".into());
    run_example(Path::new(&out))
}
