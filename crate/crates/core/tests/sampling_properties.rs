use std::collections::{BTreeMap, HashSet};

use fairgauge::sampler::{largest_remainder, split, stratified_sample, SamplingPlan};
use fairgauge::{AuditDataset, LabeledRecord};
use proptest::prelude::*;

fn cells(counts: &[(usize, usize, usize)]) -> AuditDataset {
    let mut rows = Vec::new();
    for &(g, y, n) in counts {
        for i in 0..n {
            rows.push(LabeledRecord::new(format!("{g}.{y}.{i}"), format!("g{g}"), format!("c{y}")));
        }
    }
    AuditDataset::from_labeled("cells", rows).unwrap()
}

fn cell_counts(ds: &AuditDataset) -> BTreeMap<(String, String), u64> {
    let mut out = BTreeMap::new();
    for r in ds.records() {
        *out.entry((ds.group_label(r.group).to_owned(), ds.class_label(r.true_class).to_owned()))
            .or_default() += 1;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn allocation_is_exact_and_proportional(
        counts in prop::collection::vec(0u64..5_000, 1..12),
        share in 0.0..=1.0f64,
    ) {
        let total: u64 = counts.iter().sum();
        prop_assume!(total > 0);
        let size = (share * total as f64).round() as u64;
        let alloc = largest_remainder(&counts, size).unwrap();
        prop_assert_eq!(alloc.iter().sum::<u64>(), size);
        for (&a, &c) in alloc.iter().zip(&counts) {
            let exact = size as f64 * c as f64 / total as f64;
            prop_assert!((a as f64 - exact).abs() < 1.0);
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn sample_follows_allocation(
        sizes in prop::collection::vec(1usize..40, 4),
        share in 0.05..=1.0f64,
        seed: u64,
    ) {
        let ds = cells(&[(0, 0, sizes[0]), (0, 1, sizes[1]), (1, 0, sizes[2]), (1, 1, sizes[3])]);
        let n = ((share * ds.len() as f64).round() as usize).max(1);
        let sample = stratified_sample(&ds, n, seed).unwrap();
        prop_assert_eq!(sample.len(), n);
        let source = cell_counts(&ds);
        let drawn = cell_counts(&sample);
        let expected = largest_remainder(&source.values().copied().collect::<Vec<_>>(), n as u64).unwrap();
        for ((cell, _), e) in source.iter().zip(expected) {
            prop_assert_eq!(drawn.get(cell).copied().unwrap_or(0), e);
        }
        let again = stratified_sample(&ds, n, seed).unwrap();
        prop_assert_eq!(again.records(), sample.records());
    }

    #[test]
    fn split_partitions_the_sample(
        sizes in prop::collection::vec(1usize..30, 4),
        ratio in 0.1..0.9f64,
        seed: u64,
    ) {
        let ds = cells(&[(0, 0, sizes[0]), (0, 1, sizes[1]), (1, 0, sizes[2]), (1, 1, sizes[3])]);
        let (train, test) = split(&ds, ratio, seed).unwrap();
        prop_assert_eq!(train.len(), (ratio * ds.len() as f64).round() as usize);
        let ids: HashSet<&str> = train.records().iter().chain(test.records()).map(|r| &*r.id).collect();
        prop_assert_eq!(ids.len(), ds.len());
        let train_cells = cell_counts(&train);
        let source = cell_counts(&ds);
        for (cell, &c) in &source {
            let t = train_cells.get(cell).copied().unwrap_or(0) as f64;
            let exact = train.len() as f64 * c as f64 / ds.len() as f64;
            prop_assert!((t - exact).abs() < 1.0);
        }
    }
}

#[test]
fn toy_split_allocation() {
    let ds = cells(&[(0, 0, 5), (0, 1, 3), (1, 0, 2)]);
    let (train, test) = split(&ds, 0.7, 1).unwrap();
    let counts = |d: &AuditDataset| cell_counts(d).into_values().collect::<Vec<_>>();
    assert_eq!(counts(&train), [4, 2, 1]);
    assert_eq!(counts(&test), [1, 1, 1]);
}

#[test]
fn plan_coordinates_and_validation() {
    let plan = SamplingPlan::new(vec![10, 20], 3, 0);
    assert_eq!(plan.replicate_count(), 6);
    assert_eq!(plan.coordinates()[3], (20, 0));
    assert!(plan.validate(15).is_err());
    assert!(plan.validate(20).is_ok());
    assert!(SamplingPlan::new(vec![], 3, 0).validate(20).is_err());
    assert!(SamplingPlan::new(vec![5], 0, 0).validate(20).is_err());
}
