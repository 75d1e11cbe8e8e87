// Exact metric values of a synthetic population next to estimates from a
// sample drawn from it.
//
// Run with `cargo run --release --example synthetic_oracle`.

use std::error::Error;

use fairgauge::metrics::Tally;
use fairgauge::synth::{generate, reference_two_group, surgeon_scenario, true_metrics};
use fairgauge::MetricKind;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (spec, n) in [(reference_two_group(), 100_000), (surgeon_scenario(), 200_000)] {
        let truth = true_metrics(&spec)?;
        let ds = generate(&spec, n, 11)?;
        let tally = Tally::new(&ds);
        println!("{} (n = {n})", spec.name);
        println!("  {:<4} {:<3} {:<10} {:>9} {:>9} {:>7}", "", "", "class", "true", "estimate", "support");
        for kind in MetricKind::ALL {
            for g in ds.group_ids() {
                for y in ds.class_ids() {
                    let (gl, yl) = (ds.group_label(g), ds.class_label(y));
                    let est = tally.metric(kind, g, y);
                    let show = |v: Option<f64>| v.map_or("undef".to_owned(), |v| format!("{v:.4}"));
                    println!(
                        "  {:<4} {:<3} {:<10} {:>9} {:>9} {:>7}",
                        kind.code(),
                        gl,
                        yl,
                        show(truth.value(kind, gl, yl)),
                        show(est.value()),
                        est.denominator()
                    );
                }
            }
        }
        let first = &spec.classes[0];
        println!("  female share of {first}: {:.3}", spec.group_share("F", first)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
