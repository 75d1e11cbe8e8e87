// How much do fairness gaps move between samples of the same corpus?
//
// Draws a synthetic population with a rare, male-dominated class, runs 50
// replicates at two sample sizes with a memoryless predictor, and reports
// the spread of each gap. Writes the report, CSV tables and SVG charts.
//
// Run with `cargo run --release --example variance_study [OUT_DIR]`.

use std::error::Error;
use std::path::Path;

use fairgauge::render::render_report;
use fairgauge::sampler::{run_plan_with, SamplingPlan};
use fairgauge::stats::{build_report, summarize, ReplicateResult, ReportOptions};
use fairgauge::synth::{generate, surgeon_scenario, OraclePredictor};
use fairgauge::MetricKind;

pub fn run_example(out: &Path, sizes: Vec<usize>, replicates: usize) -> Result<(), Box<dyn Error>> {
    let spec = surgeon_scenario();
    let population = generate(&spec, 400_000, 2024)?;
    let oracle = OraclePredictor::new(&spec)?;
    let plan = SamplingPlan::new(sizes, replicates, 7);

    let results = run_plan_with(&plan, &population, &oracle, |h| {
        ReplicateResult::from_handle("synthetic", &h, ("M", "F"))
    })?
    .into_iter()
    .map(|r| r.and_then(|r| r))
    .collect::<Result<Vec<_>, _>>()?;
    let report = build_report(&results, ReportOptions::default())?;

    println!("classes kept: {:?}, excluded: {:?}", report.classes, report.excluded);
    println!("{:<10} {:>7} {:<4} {:>12} {:>10}", "class", "size", "gap", "variance", "undefined");
    for s in &report.gap_summaries {
        let var = s.summary.as_ref().and_then(|s| s.variance);
        println!(
            "{:<10} {:>7} {:<4} {:>12} {:>10}",
            s.class,
            s.size,
            s.metric.code(),
            var.map_or("undef".into(), |v| format!("{v:.3e}")),
            s.undefined_count
        );
    }
    // The filter drops the rare class from the report; its spread can still
    // be read off the replicate results directly.
    for &size in &report.sizes {
        print!("surgeon gap at {size}:");
        for kind in MetricKind::ALL {
            let gaps: Vec<Option<f64>> = results
                .iter()
                .filter(|r| r.size == size)
                .map(|r| r.gaps.gap(kind, "surgeon"))
                .collect();
            let s = summarize(&gaps)?;
            print!(
                "  {} var {:.2e} ({} undefined)",
                kind.code(),
                s.variance.unwrap_or(f64::NAN),
                s.undefined_count
            );
        }
        println!();
    }

    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("report.json"), report.to_canonical_json()?)?;
    report.write_csv_tables(out)?;
    let files = render_report(&report, out)?;
    println!("wrote report, tables and {} charts to {}", files.len(), out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/examples-out/variance_study".into());
    run_example(Path::new(&out), vec![10_000, 120_000], 50)
}
