// Proportional stratified sampling and the stratified train/test split.
//
// Run with `cargo run --example stratified_sampling`.

use std::error::Error;

use fairgauge::sampler::{largest_remainder, split, stratified_sample};
use fairgauge::{AuditDataset, LabeledRecord};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // A 388,862-record corpus holding 2,002 women surgeons; a 10,000-record
    // sample keeps 51 of them.
    let counts = [2_002, 386_860];
    let alloc = largest_remainder(&counts, 10_000)?;
    println!("allocation of 10000 over {counts:?}: {alloc:?}");
    assert_eq!(alloc, [51, 9_949]);

    let mut rows = Vec::new();
    for (group, class, n) in [("F", "surgeon", 5), ("M", "surgeon", 3), ("F", "nurse", 2)] {
        for i in 0..n {
            rows.push(LabeledRecord::new(format!("{group}-{class}-{i}"), group, class));
        }
    }
    let ds = AuditDataset::from_labeled("toy", rows)?;
    let (train, test) = split(&ds, 0.7, 42)?;
    println!("split of 10 records: train {} / test {}", train.len(), test.len());

    let sample = stratified_sample(&ds, 5, 7)?;
    for r in sample.records() {
        println!("  sampled {}", r.id);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
