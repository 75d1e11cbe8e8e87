// Summaries and two-sample t-tests over replicate values.
//
// Run with `cargo run --example t_test`.

use std::error::Error;

use fairgauge::stats::{summarize, t_test, TTestVariant};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let small = [Some(0.10), Some(0.40), Some(0.35), None, Some(0.80), Some(0.20), Some(0.55)];
    let large = [0.90, 1.20, 0.70, 1.50];

    let s = summarize(&small)?;
    println!(
        "n={} undefined={} mean={:.4} var={:.4} quartiles=({:.3}, {:.3}, {:.3})",
        s.count,
        s.undefined_count,
        s.mean,
        s.variance.unwrap_or(f64::NAN),
        s.q1,
        s.median,
        s.q3
    );

    let defined: Vec<f64> = small.iter().flatten().copied().collect();
    for variant in [TTestVariant::StudentPooled, TTestVariant::Welch] {
        let r = t_test(&defined, &large, variant, 0.05)?;
        println!(
            "{variant:?}: t={:.4} df={:.3} p={:.5} significant={}",
            r.t_statistic, r.degrees_of_freedom, r.p_value, r.significant
        );
    }

    let flat = t_test(&[0.2; 5], &[0.3; 5], TTestVariant::StudentPooled, 0.05)?;
    println!("constant samples: t={} p={} degenerate={}", flat.t_statistic, flat.p_value, flat.degenerate);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
