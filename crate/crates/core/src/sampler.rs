//! Proportional stratified sampling, stratified train/test splits and
//! multi-size replicate plans.
//!
//! Strata are the (group, true class) cells of a dataset, in group-major,
//! class-minor vocabulary order. Fractional allocations are rounded with the
//! largest-remainder (Hamilton) rule, ties going to the earlier cell, so each
//! cell receives its exact quota rounded up or down and the total is exact.
//!
//! Every replicate draws from its own seed, derived from
//! `(master_seed, size, index)` alone, so a plan produces the same
//! memberships whether replicates run sequentially or in parallel.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{attach_predictions, AuditDataset, Record};
use crate::error::{Error, Result};

/// Apportions `size` units over cells proportionally to `counts`.
///
/// Each cell gets `floor(size·count/total)`; the units left over go to the
/// cells with the largest remainders, earlier cells first on ties. Exact in
/// integer arithmetic.
pub fn largest_remainder(counts: &[u64], size: u64) -> Result<Vec<u64>> {
    let total: u64 = counts.iter().sum();
    if size > total {
        return Err(Error::InvalidSampling(format!(
            "cannot allocate {size} units over {total} records"
        )));
    }
    if total == 0 {
        return Ok(vec![0; counts.len()]);
    }
    let total = total as u128;
    let mut alloc = Vec::with_capacity(counts.len());
    let mut remainders = Vec::with_capacity(counts.len());
    for (i, &c) in counts.iter().enumerate() {
        let scaled = size as u128 * c as u128;
        alloc.push((scaled / total) as u64);
        remainders.push((scaled % total, i));
    }
    let assigned: u64 = alloc.iter().sum();
    let mut leftover = (size - assigned) as usize;
    // Largest remainder first; stable sort keeps earlier cells ahead on ties.
    remainders.sort_by_key(|r| std::cmp::Reverse(r.0));
    for &(_, i) in &remainders {
        if leftover == 0 {
            break;
        }
        alloc[i] += 1;
        leftover -= 1;
    }
    for (a, &c) in alloc.iter().zip(counts) {
        assert!(a <= &c, "allocation exceeds cell population");
    }
    Ok(alloc)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replicate `index` at `size`, a pure function of its arguments.
pub fn derive_seed(master_seed: u64, size: u64, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ size) ^ index)
}

/// Independent stream `stream` of a replicate seed.
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0xA076_1D64_78BD_642F)))
}

fn strata(ds: &AuditDataset) -> Vec<Vec<usize>> {
    let n_classes = ds.classes().len();
    let mut cells = vec![Vec::new(); ds.groups().len() * n_classes];
    for (i, r) in ds.records().iter().enumerate() {
        cells[r.group.index() * n_classes + r.true_class.index()].push(i);
    }
    cells
}

/// Picks `alloc[c]` members of each cell uniformly without replacement and
/// returns a membership mask over the dataset.
fn choose(ds: &AuditDataset, cells: &[Vec<usize>], alloc: &[u64], seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![false; ds.len()];
    for (cell, &k) in cells.iter().zip(alloc) {
        let k = k as usize;
        if k == cell.len() {
            cell.iter().for_each(|&i| chosen[i] = true);
        } else if k > 0 {
            for pick in index::sample(&mut rng, cell.len(), k) {
                chosen[cell[pick]] = true;
            }
        }
    }
    chosen
}

fn cell_counts(cells: &[Vec<usize>]) -> Vec<u64> {
    cells.iter().map(|c| c.len() as u64).collect()
}

/// Stratified subsample of exactly `size` records, in source order.
pub fn stratified_sample(ds: &AuditDataset, size: usize, seed: u64) -> Result<AuditDataset> {
    if size == 0 || size > ds.len() {
        return Err(Error::InvalidSampling(format!(
            "sample size {size} outside 1..={}",
            ds.len()
        )));
    }
    let cells = strata(ds);
    let alloc = largest_remainder(&cell_counts(&cells), size as u64)?;
    let chosen = choose(ds, &cells, &alloc, seed);
    let records: Vec<Record> = ds
        .records()
        .iter()
        .zip(&chosen)
        .filter(|(_, &keep)| keep)
        .map(|(r, _)| r.clone())
        .collect();
    Ok(ds.derived(format!("{}[{size}]", ds.name()), records))
}

/// Stratified train/test partition. The train side receives
/// `round(ratio·n)` records apportioned over cells by largest remainder.
pub fn split(ds: &AuditDataset, ratio: f64, seed: u64) -> Result<(AuditDataset, AuditDataset)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidSampling(format!("split ratio {ratio} outside (0, 1)")));
    }
    let train_total = (ratio * ds.len() as f64).round() as u64;
    let cells = strata(ds);
    let alloc = largest_remainder(&cell_counts(&cells), train_total)?;
    let chosen = choose(ds, &cells, &alloc, seed);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (r, &in_train) in ds.records().iter().zip(&chosen) {
        if in_train {
            train.push(r.clone());
        } else {
            test.push(r.clone());
        }
    }
    Ok((
        ds.derived(format!("{}/train", ds.name()), train),
        ds.derived(format!("{}/test", ds.name()), test),
    ))
}

fn default_replicates() -> usize {
    50
}

fn default_split_ratio() -> f64 {
    0.7
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub sizes: Vec<usize>,
    #[serde(default = "default_replicates")]
    pub replicates_per_size: usize,
    #[serde(default = "default_split_ratio")]
    pub split_ratio: f64,
    #[serde(default)]
    pub master_seed: u64,
}

impl SamplingPlan {
    pub fn new(sizes: Vec<usize>, replicates_per_size: usize, master_seed: u64) -> Self {
        Self {
            sizes,
            replicates_per_size,
            split_ratio: default_split_ratio(),
            master_seed,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self, source_len: usize) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidPlan("no sample sizes".into()));
        }
        if let Some(&bad) = self.sizes.iter().find(|&&s| s == 0 || s > source_len) {
            return Err(Error::InvalidPlan(format!(
                "size {bad} outside 1..={source_len} (source dataset size)"
            )));
        }
        if self.replicates_per_size == 0 {
            return Err(Error::InvalidPlan("replicates_per_size must be at least 1".into()));
        }
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::InvalidPlan(format!(
                "split_ratio {} outside (0, 1)",
                self.split_ratio
            )));
        }
        Ok(())
    }

    /// (size, index) pairs in execution-independent report order.
    pub fn coordinates(&self) -> Vec<(usize, usize)> {
        self.sizes
            .iter()
            .flat_map(|&s| (0..self.replicates_per_size).map(move |i| (s, i)))
            .collect()
    }

    pub fn replicate_count(&self) -> usize {
        self.sizes.len() * self.replicates_per_size
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReplicateContext {
    pub size: usize,
    pub index: usize,
    /// Seed reserved for the predictor's own randomness.
    pub seed: u64,
}

pub type Predictions = HashMap<String, String>;
pub type PredictorError = Box<dyn std::error::Error + Send + Sync>;

/// The boundary through which any classifier supplies predictions for a
/// replicate's test set. Implementations may train on `train`; the toolkit
/// itself never does.
pub trait Predictor: Sync {
    fn predict(
        &self,
        ctx: &ReplicateContext,
        train: &AuditDataset,
        test: &AuditDataset,
    ) -> std::result::Result<Predictions, PredictorError>;
}

impl<F> Predictor for F
where
    F: Fn(&ReplicateContext, &AuditDataset, &AuditDataset) -> std::result::Result<Predictions, PredictorError>
        + Sync,
{
    fn predict(
        &self,
        ctx: &ReplicateContext,
        train: &AuditDataset,
        test: &AuditDataset,
    ) -> std::result::Result<Predictions, PredictorError> {
        self(ctx, train, test)
    }
}

/// Predicts each record's true class.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityPredictor;

impl Predictor for IdentityPredictor {
    fn predict(
        &self,
        _ctx: &ReplicateContext,
        _train: &AuditDataset,
        test: &AuditDataset,
    ) -> std::result::Result<Predictions, PredictorError> {
        Ok(test
            .records()
            .iter()
            .map(|r| (r.id.to_string(), test.class_label(r.true_class).to_owned()))
            .collect())
    }
}

/// Runs an external command once per replicate.
///
/// For each replicate a directory `size{size}_rep{index}` is created under
/// `workdir` holding `train.jsonl` and `test.jsonl` in the canonical dataset
/// form. The command runs through `sh -c` from that directory with four
/// positional arguments: the train path, the test path, the path where it
/// must write its predictions, and the replicate seed. The predictions file
/// is JSONL with one `{"id": ..., "predicted_class": ...}` object per line.
#[derive(Clone, Debug)]
pub struct SubprocessPredictor {
    pub command: String,
    pub workdir: PathBuf,
}

impl SubprocessPredictor {
    pub fn new(command: impl Into<String>, workdir: impl Into<PathBuf>) -> Self {
        Self {
            command: command.into(),
            workdir: workdir.into(),
        }
    }
}

#[derive(Deserialize)]
struct PredictionLine {
    id: String,
    predicted_class: String,
}

pub fn read_predictions(path: &Path) -> Result<Predictions> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut preds = Predictions::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let p: PredictionLine = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message: e.to_string(),
        })?;
        preds.insert(p.id, p.predicted_class);
    }
    Ok(preds)
}

impl Predictor for SubprocessPredictor {
    fn predict(
        &self,
        ctx: &ReplicateContext,
        train: &AuditDataset,
        test: &AuditDataset,
    ) -> std::result::Result<Predictions, PredictorError> {
        let dir = self.workdir.join(format!("size{}_rep{:03}", ctx.size, ctx.index));
        fs::create_dir_all(&dir)?;
        let train_path = dir.join("train.jsonl");
        let test_path = dir.join("test.jsonl");
        let out_path = dir.join("predictions.jsonl");
        train.save_jsonl(&train_path)?;
        test.save_jsonl(&test_path)?;
        let output = Command::new("sh")
            .arg("-c")
            .arg(format!("{} \"$@\"", self.command))
            .arg("fairgauge-predictor")
            .arg(&train_path)
            .arg(&test_path)
            .arg(&out_path)
            .arg(ctx.seed.to_string())
            .current_dir(&dir)
            .output()?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(format!("command exited with {}: {}", output.status, stderr.trim()).into());
        }
        Ok(read_predictions(&out_path)?)
    }
}

#[derive(Clone, Debug)]
pub struct ReplicateHandle {
    pub size: usize,
    pub index: usize,
    pub seed: u64,
    pub train: AuditDataset,
    /// Carries the predictor's predictions.
    pub test: AuditDataset,
}

fn without_predictions(ds: AuditDataset) -> AuditDataset {
    let name = ds.name().to_owned();
    let records = ds
        .records()
        .iter()
        .map(|r| Record {
            predicted_class: None,
            ..r.clone()
        })
        .collect();
    ds.derived(name, records)
}

/// Draws, splits and predicts one replicate.
pub fn run_replicate<P: Predictor + ?Sized>(
    plan: &SamplingPlan,
    ds: &AuditDataset,
    predictor: &P,
    size: usize,
    index: usize,
) -> Result<ReplicateHandle> {
    let seed = derive_seed(plan.master_seed, size as u64, index as u64);
    let sample = stratified_sample(ds, size, sub_seed(seed, 0))?;
    let (train, test) = split(&sample, plan.split_ratio, sub_seed(seed, 1))?;
    let (train, test) = (without_predictions(train), without_predictions(test));
    let ctx = ReplicateContext {
        size,
        index,
        seed: sub_seed(seed, 2),
    };
    let wrap = |message: String| Error::Predictor { size, index, message };
    let preds = predictor
        .predict(&ctx, &train, &test)
        .map_err(|e| wrap(e.to_string()))?;
    let test = attach_predictions(&test, &preds).map_err(|e| wrap(e.to_string()))?;
    Ok(ReplicateHandle {
        size,
        index,
        seed,
        train,
        test,
    })
}

/// Runs every replicate of the plan and maps each handle through `reduce`
/// as soon as it is ready, so large plans need not hold every sample in
/// memory. Results come back in (size, index) order; a failing replicate
/// yields an error in its slot and leaves the others untouched.
pub fn run_plan_with<P, T, F>(plan: &SamplingPlan, ds: &AuditDataset, predictor: &P, reduce: F) -> Result<Vec<Result<T>>>
where
    P: Predictor + ?Sized,
    T: Send,
    F: Fn(ReplicateHandle) -> T + Sync,
{
    plan.validate(ds.len())?;
    Ok(plan
        .coordinates()
        .into_par_iter()
        .map(|(size, index)| run_replicate(plan, ds, predictor, size, index).map(&reduce))
        .collect())
}

pub fn run_plan<P: Predictor + ?Sized>(
    plan: &SamplingPlan,
    ds: &AuditDataset,
    predictor: &P,
) -> Result<Vec<Result<ReplicateHandle>>> {
    run_plan_with(plan, ds, predictor, |h| h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::LabeledRecord;
    use crate::metrics;

    fn cells_dataset(counts: &[(&str, &str, usize)]) -> AuditDataset {
        let mut rows = Vec::new();
        for (g, y, n) in counts {
            for i in 0..*n {
                rows.push(LabeledRecord::new(format!("{g}-{y}-{i}"), *g, *y));
            }
        }
        AuditDataset::from_labeled("cells", rows).unwrap()
    }

    /// Enumerates every allocation summing to `size` and keeps the one a
    /// Hamilton apportionment must produce: minimal max deviation first,
    /// then the remainder ranking. Slow, independent reference.
    fn brute_force_hamilton(counts: &[u64], size: u64) -> Vec<u64> {
        let total: u64 = counts.iter().sum();
        let quota = |i: usize| size as f64 * counts[i] as f64 / total as f64;
        let mut best: Option<Vec<u64>> = None;
        let mut current = vec![0u64; counts.len()];
        fn walk(
            i: usize,
            left: u64,
            counts: &[u64],
            current: &mut Vec<u64>,
            out: &mut Vec<Vec<u64>>,
        ) {
            if i == counts.len() {
                if left == 0 {
                    out.push(current.clone());
                }
                return;
            }
            for k in 0..=left.min(counts[i]) {
                current[i] = k;
                walk(i + 1, left - k, counts, current, out);
            }
        }
        let mut all = Vec::new();
        walk(0, size, counts, &mut current, &mut all);
        for cand in all {
            // Hamilton allocations are floor or ceil of every quota, and
            // round up exactly the cells with largest fractional parts.
            let ok = cand.iter().enumerate().all(|(i, &k)| (k as f64 - quota(i)).abs() < 1.0);
            if !ok {
                continue;
            }
            let ups: Vec<usize> = (0..counts.len()).filter(|&i| cand[i] as f64 > quota(i)).collect();
            let downs: Vec<usize> = (0..counts.len())
                .filter(|&i| (cand[i] as f64) < quota(i))
                .collect();
            let frac = |i: usize| quota(i) - quota(i).floor();
            let consistent = ups.iter().all(|&u| {
                downs
                    .iter()
                    .all(|&d| frac(u) > frac(d) + 1e-12 || ((frac(u) - frac(d)).abs() <= 1e-12 && u < d))
            });
            if consistent {
                assert!(best.is_none(), "two Hamilton allocations for {counts:?}/{size}");
                best = Some(cand);
            }
        }
        best.unwrap()
    }

    #[test]
    fn allocation_toy() {
        assert_eq!(largest_remainder(&[50, 30, 20], 10).unwrap(), [5, 3, 2]);
        assert_eq!(brute_force_hamilton(&[50, 30, 20], 10), [5, 3, 2]);
    }

    #[test]
    fn split_allocation_toy() {
        // quotas 3.5, 2.1, 1.4 for a 7-record train side: floors 3,2,1 and the
        // single leftover unit goes to the 0.5 remainder.
        assert_eq!(brute_force_hamilton(&[5, 3, 2], 7), [4, 2, 1]);
        assert_eq!(largest_remainder(&[5, 3, 2], 7).unwrap(), [4, 2, 1]);
        let ds = cells_dataset(&[("M", "a", 5), ("M", "b", 3), ("M", "c", 2)]);
        let (train, test) = split(&ds, 0.7, 11).unwrap();
        let count = |d: &AuditDataset, y: &str| {
            let y = d.class_id(y).unwrap();
            d.records().iter().filter(|r| r.true_class == y).count()
        };
        assert_eq!([count(&train, "a"), count(&train, "b"), count(&train, "c")], [4, 2, 1]);
        assert_eq!([count(&test, "a"), count(&test, "b"), count(&test, "c")], [1, 1, 1]);
    }

    #[test]
    fn allocation_matches_brute_force_on_small_inputs() {
        let cases: &[(&[u64], u64)] = &[
            (&[1, 1, 1], 2),
            (&[3, 3, 3], 4),
            (&[7, 2, 9, 1], 6),
            (&[10, 0, 5], 7),
            (&[4, 4], 3),
            (&[2, 5, 3, 6], 11),
        ];
        for &(counts, size) in cases {
            assert_eq!(
                largest_remainder(counts, size).unwrap(),
                brute_force_hamilton(counts, size),
                "{counts:?} / {size}"
            );
        }
    }

    #[test]
    fn fifty_one_women_surgeons() {
        // 10000 * 2002 / 388862 = 51.48...; the other cell has the larger
        // remainder (.52) and takes the leftover unit.
        assert_eq!(largest_remainder(&[2002, 386_860], 10_000).unwrap(), [51, 9949]);
    }

    #[test]
    fn allocation_rejects_oversize() {
        assert!(largest_remainder(&[1, 2], 4).is_err());
    }

    #[test]
    fn full_size_sample_is_identity() {
        let ds = cells_dataset(&[("M", "a", 4), ("F", "a", 3), ("F", "b", 2)]);
        let s = stratified_sample(&ds, ds.len(), 3).unwrap();
        assert_eq!(s.records(), ds.records());
    }

    #[test]
    fn sample_is_stratified_and_exact() {
        let ds = cells_dataset(&[("M", "a", 50), ("M", "b", 30), ("F", "a", 20)]);
        let s = stratified_sample(&ds, 10, 99).unwrap();
        assert_eq!(s.len(), 10);
        let report = crate::data::validate(&s);
        assert_eq!(report.count("M", "a"), Some(5));
        assert_eq!(report.count("M", "b"), Some(3));
        assert_eq!(report.count("F", "a"), Some(2));
        assert!(stratified_sample(&ds, 0, 1).is_err());
        assert!(stratified_sample(&ds, 101, 1).is_err());
    }

    #[test]
    fn split_is_deterministic_disjoint_and_exhaustive() {
        let ds = cells_dataset(&[("M", "a", 10)]);
        let (train, test) = split(&ds, 0.7, 5).unwrap();
        assert_eq!((train.len(), test.len()), (7, 3));
        let (train2, test2) = split(&ds, 0.7, 5).unwrap();
        assert_eq!(train.records(), train2.records());
        assert_eq!(test.records(), test2.records());
        let mut ids: Vec<_> = train.records().iter().chain(test.records()).map(|r| r.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 10);
        assert!(split(&ds, 1.0, 5).is_err());
        assert!(split(&ds, 0.0, 5).is_err());
    }

    #[test]
    fn seeds_are_pure_and_distinct() {
        assert_eq!(derive_seed(1, 100, 2), derive_seed(1, 100, 2));
        assert_ne!(derive_seed(1, 100, 2), derive_seed(1, 100, 3));
        assert_ne!(derive_seed(1, 100, 2), derive_seed(1, 200, 2));
        assert_ne!(derive_seed(1, 100, 2), derive_seed(2, 100, 2));
        assert_ne!(sub_seed(7, 0), sub_seed(7, 1));
    }

    #[test]
    fn identity_plan() {
        let ds = cells_dataset(&[("M", "a", 80), ("M", "b", 40), ("F", "a", 50), ("F", "b", 30)]);
        let plan = SamplingPlan::new(vec![100], 3, 42);
        let handles = run_plan(&plan, &ds, &IdentityPredictor).unwrap();
        assert_eq!(handles.len(), 3);
        for (i, h) in handles.into_iter().enumerate() {
            let h = h.unwrap();
            assert_eq!((h.size, h.index), (100, i));
            assert_eq!(h.train.len() + h.test.len(), 100);
            assert_eq!(metrics::accuracy(&h.test).unwrap(), 1.0);
            assert_eq!(h.train.predicted_count(), 0);
        }
    }

    #[test]
    fn plan_counts_and_validation() {
        let ds = cells_dataset(&[("M", "a", 300), ("F", "b", 300)]);
        let plan = SamplingPlan::new(vec![10, 20, 50, 120], 50, 1);
        assert_eq!(plan.replicate_count(), 200);
        let results = run_plan_with(&plan, &ds, &IdentityPredictor, |h| (h.size, h.index)).unwrap();
        assert_eq!(results.len(), 200);
        assert_eq!(*results[0].as_ref().unwrap(), (10, 0));
        assert_eq!(*results[199].as_ref().unwrap(), (120, 49));

        let too_big = SamplingPlan::new(vec![601], 1, 1);
        assert!(matches!(run_plan(&too_big, &ds, &IdentityPredictor), Err(Error::InvalidPlan(_))));
        let mut bad_ratio = SamplingPlan::new(vec![10], 1, 1);
        bad_ratio.split_ratio = 1.0;
        assert!(bad_ratio.validate(600).is_err());
        assert!(SamplingPlan::new(vec![10], 0, 1).validate(600).is_err());
    }

    #[test]
    fn predictor_failure_is_isolated() {
        let ds = cells_dataset(&[("M", "a", 30), ("F", "b", 30)]);
        let plan = SamplingPlan::new(vec![20], 3, 9);
        let flaky = |ctx: &ReplicateContext, train: &AuditDataset, test: &AuditDataset| {
            if ctx.index == 1 {
                Err("boom".into())
            } else {
                IdentityPredictor.predict(ctx, train, test)
            }
        };
        let results = run_plan(&plan, &ds, &flaky).unwrap();
        assert!(results[0].is_ok());
        assert!(matches!(&results[1], Err(Error::Predictor { size: 20, index: 1, message }) if message == "boom"));
        assert!(results[2].is_ok());
    }

    #[test]
    fn plan_json_defaults() {
        let plan: SamplingPlan = serde_json::from_str(r#"{"sizes":[10,20]}"#).unwrap();
        assert_eq!(plan.replicates_per_size, 50);
        assert_eq!(plan.split_ratio, 0.7);
        assert_eq!(plan.master_seed, 0);
    }
}
