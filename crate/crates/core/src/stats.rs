//! Distributional summaries of replicate results, two-sample t-tests, class
//! filtering, and the replicate report.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::canonical::{self, format_cell};
use crate::data::AuditDataset;
use crate::error::{Error, Result};
use crate::metrics::{GapTable, MetricKind, Tally};
use crate::sampler::ReplicateHandle;

/// Moments and five-number summary over the defined observations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (n − 1); undefined for a single observation.
    pub variance: Option<f64>,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub undefined_count: usize,
}

/// Linear interpolation between order statistics at rank `p·(n − 1)`.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(values: &[Option<f64>]) -> Result<Summary> {
    let mut defined: Vec<f64> = values.iter().flatten().copied().collect();
    let undefined_count = values.len() - defined.len();
    if defined.is_empty() {
        return Err(Error::AllUndefined);
    }
    if defined.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidStats("non-finite observation".into()));
    }
    let n = defined.len() as f64;
    let mean = defined.iter().sum::<f64>() / n;
    // Corrected two-pass: the second sum cancels the rounding error of the mean.
    let (sq, dev) = defined.iter().fold((0.0, 0.0), |(sq, dev), &v| {
        let d = v - mean;
        (sq + d * d, dev + d)
    });
    let variance = (defined.len() >= 2).then(|| (sq - dev * dev / n) / (n - 1.0));
    defined.sort_by(f64::total_cmp);
    Ok(Summary {
        count: defined.len(),
        mean: mean + dev / n,
        variance,
        min: defined[0],
        q1: quantile(&defined, 0.25),
        median: quantile(&defined, 0.5),
        q3: quantile(&defined, 0.75),
        max: defined[defined.len() - 1],
        undefined_count,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TTestVariant {
    /// Pooled variance, df = n₁ + n₂ − 2.
    #[default]
    StudentPooled,
    /// Welch–Satterthwaite df.
    Welch,
}

impl FromStr for TTestVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "student" | "student_pooled" | "pooled" => Ok(TTestVariant::StudentPooled),
            "welch" => Ok(TTestVariant::Welch),
            _ => Err(Error::InvalidStats(format!("unknown t-test variant `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub variant: TTestVariant,
    /// Infinite for degenerate samples with different constants; serialized
    /// as the strings `"inf"` / `"-inf"` in that case.
    #[serde(with = "extended_float")]
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub significant: bool,
    /// Both samples constant: p is 1 when they are equal, 0 otherwise.
    pub degenerate: bool,
}

mod extended_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sided two-sample t-test of `a` against `b`.
pub fn t_test(a: &[f64], b: &[f64], variant: TTestVariant, alpha: f64) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidStats(format!(
            "t-test needs at least 2 observations per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidStats(format!("alpha {alpha} outside (0, 1)")));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (m1, v1) = mean_var(a);
    let (m2, v2) = mean_var(b);
    let (se2, df) = match variant {
        TTestVariant::StudentPooled => {
            let pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / (n1 + n2 - 2.0);
            (pooled * (1.0 / n1 + 1.0 / n2), n1 + n2 - 2.0)
        }
        TTestVariant::Welch => {
            let (s1, s2) = (v1 / n1, v2 / n2);
            let se2 = s1 + s2;
            let df = if se2 > 0.0 {
                se2 * se2 / (s1 * s1 / (n1 - 1.0) + s2 * s2 / (n2 - 1.0))
            } else {
                n1 + n2 - 2.0
            };
            (se2, df)
        }
    };
    let diff = m1 - m2;
    if se2 == 0.0 {
        let (t, p) = if diff == 0.0 {
            (0.0, 1.0)
        } else {
            (diff.signum() * f64::INFINITY, 0.0)
        };
        return Ok(TTestResult {
            variant,
            t_statistic: t,
            degrees_of_freedom: df,
            p_value: p,
            significant: p < alpha,
            degenerate: true,
        });
    }
    let t = diff / se2.sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::InvalidStats(e.to_string()))?;
    let p = (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0);
    Ok(TTestResult {
        variant,
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: p,
        significant: p < alpha,
        degenerate: false,
    })
}

/// Which classes are reliable enough to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterRule {
    /// At least one prediction of the class for each group in every replicate.
    AnyPrediction,
    /// More than `k` predictions of the class for each group in every replicate.
    MinPredictions(u64),
}

impl FilterRule {
    fn passes(self, predictions: u64) -> bool {
        match self {
            FilterRule::AnyPrediction => predictions >= 1,
            FilterRule::MinPredictions(k) => predictions > k,
        }
    }
}

impl fmt::Display for FilterRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterRule::AnyPrediction => f.write_str("any-prediction"),
            FilterRule::MinPredictions(k) => write!(f, "min-preds={k}"),
        }
    }
}

impl FromStr for FilterRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "any-prediction" {
            return Ok(FilterRule::AnyPrediction);
        }
        s.strip_prefix("min-preds=")
            .and_then(|k| k.parse().ok())
            .map(FilterRule::MinPredictions)
            .ok_or_else(|| Error::InvalidStats(format!("unknown filter `{s}`")))
    }
}

impl Serialize for FilterRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FilterRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub class: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFilter {
    pub retained: Vec<String>,
    pub excluded: Vec<Exclusion>,
}

/// Keeps the classes that satisfy `rule` in every table. Tables must share
/// one class vocabulary; classes come back in its order.
pub fn filter_classes(tables: &[&GapTable], rule: FilterRule) -> Result<ClassFilter> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidStats("no replicate tables to filter".into()))?;
    if tables.iter().any(|t| t.classes != first.classes) {
        return Err(Error::InvalidStats("replicate tables disagree on classes".into()));
    }
    let mut out = ClassFilter::default();
    for (y, class) in first.classes.iter().enumerate() {
        let failure = tables.iter().enumerate().find_map(|(r, t)| {
            let groups = [&t.groups.0, &t.groups.1];
            (0..2).find_map(|side| {
                let n = t.supports[side][y].n_gp;
                (!rule.passes(n)).then(|| {
                    format!(
                        "group {} has {n} predictions in replicate {r} (rule {rule})",
                        groups[side]
                    )
                })
            })
        });
        match failure {
            Some(reason) => out.excluded.push(Exclusion {
                class: class.clone(),
                reason,
            }),
            None => out.retained.push(class.clone()),
        }
    }
    Ok(out)
}

/// Everything the report needs from one replicate; the sampled datasets
/// themselves are not kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateResult {
    pub variant: String,
    pub size: usize,
    pub index: usize,
    pub seed: u64,
    pub test_size: usize,
    pub gaps: GapTable,
    pub accuracy: Option<f64>,
    /// One-vs-rest F1, aligned with `gaps.classes`.
    pub f1: Vec<Option<f64>>,
}

impl ReplicateResult {
    pub fn from_test_set(
        variant: &str,
        size: usize,
        index: usize,
        seed: u64,
        test: &AuditDataset,
        groups: (&str, &str),
    ) -> Result<Self> {
        if groups.0 == groups.1 {
            return Err(Error::IdenticalGroups(groups.0.to_owned()));
        }
        let tally = Tally::new(test);
        let (g, h) = (test.group_id(groups.0)?, test.group_id(groups.1)?);
        Ok(Self {
            variant: variant.to_owned(),
            size,
            index,
            seed,
            test_size: test.len(),
            gaps: GapTable::from_tally(test, &tally, g, h),
            accuracy: tally.accuracy(),
            f1: test.class_ids().map(|y| tally.f1(y)).collect(),
        })
    }

    pub fn from_handle(variant: &str, handle: &ReplicateHandle, groups: (&str, &str)) -> Result<Self> {
        Self::from_test_set(variant, handle.size, handle.index, handle.seed, &handle.test, groups)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub variant: String,
    pub size: usize,
    pub metric: MetricKind,
    pub class: String,
    pub replicates: usize,
    pub undefined_count: usize,
    /// `None` when every replicate's gap was undefined.
    pub summary: Option<Summary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Gap,
    Accuracy,
    F1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerformanceSummary {
    pub variant: String,
    pub size: usize,
    pub measure: Measure,
    pub class: Option<String>,
    pub undefined_count: usize,
    pub summary: Option<Summary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Comparison {
    /// Same dataset variant, two sample sizes.
    Sizes { variant: String, a: usize, b: usize },
    /// Same sample size, two dataset variants.
    Variants { size: usize, a: String, b: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TTestEntry {
    pub measure: Measure,
    pub metric: Option<MetricKind>,
    pub class: Option<String>,
    pub comparison: Comparison,
    pub result: Option<TTestResult>,
    /// Why no test could be run, when `result` is `None`.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub groups: (String, String),
    pub alpha: f64,
    pub t_test: TTestVariant,
    pub filter: FilterRule,
    pub variants: Vec<String>,
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub classes: Vec<String>,
    pub excluded: Vec<Exclusion>,
    pub gap_summaries: Vec<GapSummary>,
    pub performance: Vec<PerformanceSummary>,
    pub t_tests: Vec<TTestEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    pub alpha: f64,
    pub rule: FilterRule,
    pub variant: TTestVariant,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            rule: FilterRule::AnyPrediction,
            variant: TTestVariant::StudentPooled,
        }
    }
}

fn summary_or_flag(values: &[Option<f64>]) -> (usize, Option<Summary>) {
    let undefined = values.iter().filter(|v| v.is_none()).count();
    (undefined, summarize(values).ok())
}

fn compare(a: &[Option<f64>], b: &[Option<f64>], opts: &ReportOptions) -> (Option<TTestResult>, Option<String>) {
    let a: Vec<f64> = a.iter().flatten().copied().collect();
    let b: Vec<f64> = b.iter().flatten().copied().collect();
    match t_test(&a, &b, opts.variant, opts.alpha) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

/// Aggregates replicate results into the report. Results are grouped by
/// variant (first-appearance order) and size (ascending); within a group
/// they are taken in `index` order.
pub fn build_report(results: &[ReplicateResult], opts: ReportOptions) -> Result<SummaryReport> {
    let first = results
        .first()
        .ok_or_else(|| Error::InvalidStats("no replicate results".into()))?;
    if results
        .iter()
        .any(|r| r.gaps.groups != first.gaps.groups || r.gaps.classes != first.gaps.classes)
    {
        return Err(Error::InvalidStats(
            "replicates disagree on group pair or class vocabulary".into(),
        ));
    }
    let mut variants: Vec<String> = Vec::new();
    for r in results {
        if !variants.contains(&r.variant) {
            variants.push(r.variant.clone());
        }
    }
    let mut sizes: Vec<usize> = results.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    sizes.dedup();

    let tables: Vec<&GapTable> = results.iter().map(|r| &r.gaps).collect();
    let filter = filter_classes(&tables, opts.rule)?;
    let class_pos = |c: &str| first.gaps.classes.iter().position(|x| x == c).expect("retained class");

    let cell = |variant: &str, size: usize| -> Vec<&ReplicateResult> {
        let mut v: Vec<&ReplicateResult> = results
            .iter()
            .filter(|r| r.variant == variant && r.size == size)
            .collect();
        v.sort_by_key(|r| r.index);
        v
    };
    let gap_values = |reps: &[&ReplicateResult], kind: MetricKind, class: &str| -> Vec<Option<f64>> {
        reps.iter().map(|r| r.gaps.gap(kind, class)).collect()
    };

    let mut gap_summaries = Vec::new();
    let mut performance = Vec::new();
    let mut replicates = 0;
    for variant in &variants {
        for &size in &sizes {
            let reps = cell(variant, size);
            if reps.is_empty() {
                continue;
            }
            replicates = replicates.max(reps.len());
            for kind in MetricKind::ALL {
                for class in &filter.retained {
                    let values = gap_values(&reps, kind, class);
                    let (undefined_count, summary) = summary_or_flag(&values);
                    gap_summaries.push(GapSummary {
                        variant: variant.clone(),
                        size,
                        metric: kind,
                        class: class.clone(),
                        replicates: reps.len(),
                        undefined_count,
                        summary,
                    });
                }
            }
            let acc: Vec<Option<f64>> = reps.iter().map(|r| r.accuracy).collect();
            let (undefined_count, summary) = summary_or_flag(&acc);
            performance.push(PerformanceSummary {
                variant: variant.clone(),
                size,
                measure: Measure::Accuracy,
                class: None,
                undefined_count,
                summary,
            });
            for class in &filter.retained {
                let y = class_pos(class);
                let f1: Vec<Option<f64>> = reps.iter().map(|r| r.f1[y]).collect();
                let (undefined_count, summary) = summary_or_flag(&f1);
                performance.push(PerformanceSummary {
                    variant: variant.clone(),
                    size,
                    measure: Measure::F1,
                    class: Some(class.clone()),
                    undefined_count,
                    summary,
                });
            }
        }
    }

    let mut t_tests = Vec::new();
    let mut run_tests = |comparison: Comparison, left: &[&ReplicateResult], right: &[&ReplicateResult]| {
        for kind in MetricKind::ALL {
            for class in &filter.retained {
                let (result, note) = compare(
                    &gap_values(left, kind, class),
                    &gap_values(right, kind, class),
                    &opts,
                );
                t_tests.push(TTestEntry {
                    measure: Measure::Gap,
                    metric: Some(kind),
                    class: Some(class.clone()),
                    comparison: comparison.clone(),
                    result,
                    note,
                });
            }
        }
        let acc = |reps: &[&ReplicateResult]| reps.iter().map(|r| r.accuracy).collect::<Vec<_>>();
        let (result, note) = compare(&acc(left), &acc(right), &opts);
        t_tests.push(TTestEntry {
            measure: Measure::Accuracy,
            metric: None,
            class: None,
            comparison,
            result,
            note,
        });
    };
    for variant in &variants {
        for (i, &a) in sizes.iter().enumerate() {
            for &b in &sizes[i + 1..] {
                let (left, right) = (cell(variant, a), cell(variant, b));
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                let comparison = Comparison::Sizes {
                    variant: variant.clone(),
                    a,
                    b,
                };
                run_tests(comparison, &left, &right);
            }
        }
    }
    for &size in &sizes {
        for (i, a) in variants.iter().enumerate() {
            for b in &variants[i + 1..] {
                let (left, right) = (cell(a, size), cell(b, size));
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                let comparison = Comparison::Variants {
                    size,
                    a: a.clone(),
                    b: b.clone(),
                };
                run_tests(comparison, &left, &right);
            }
        }
    }

    Ok(SummaryReport {
        groups: first.gaps.groups.clone(),
        alpha: opts.alpha,
        t_test: opts.variant,
        filter: opts.rule,
        variants,
        sizes,
        replicates,
        classes: filter.retained,
        excluded: filter.excluded,
        gap_summaries,
        performance,
        t_tests,
    })
}

fn summary_cells(s: &Option<Summary>) -> Vec<String> {
    match s {
        Some(s) => vec![
            s.count.to_string(),
            format_cell(Some(s.mean)),
            format_cell(s.variance),
            format_cell(Some(s.min)),
            format_cell(Some(s.q1)),
            format_cell(Some(s.median)),
            format_cell(Some(s.q3)),
            format_cell(Some(s.max)),
        ],
        None => vec!["0".into(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new()],
    }
}

const SUMMARY_HEADER: [&str; 8] = ["count", "mean", "variance", "min", "q1", "median", "q3", "max"];

impl SummaryReport {
    pub fn gap_summary(&self, variant: &str, size: usize, metric: MetricKind, class: &str) -> Option<&GapSummary> {
        self.gap_summaries
            .iter()
            .find(|g| g.variant == variant && g.size == size && g.metric == metric && g.class == class)
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        canonical::to_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedReport(e.to_string()))
    }

    /// Writes `gap_summaries.csv`, `variance_table.csv`, `mean_table.csv`,
    /// `performance.csv` and `t_tests.csv` into `dir`.
    pub fn write_csv_tables(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let open = |name: &str| csv::Writer::from_path(dir.join(name));

        let mut w = open("gap_summaries.csv")?;
        let mut header = vec!["variant", "size", "metric", "class", "replicates", "undefined"];
        header.extend(SUMMARY_HEADER);
        w.write_record(&header)?;
        for g in &self.gap_summaries {
            let mut row = vec![
                g.variant.clone(),
                g.size.to_string(),
                g.metric.to_string(),
                g.class.clone(),
                g.replicates.to_string(),
                g.undefined_count.to_string(),
            ];
            row.extend(summary_cells(&g.summary));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;

        for (name, pick) in [
            ("variance_table.csv", (|s: &Summary| s.variance) as fn(&Summary) -> Option<f64>),
            ("mean_table.csv", |s: &Summary| Some(s.mean)),
        ] {
            let mut w = open(name)?;
            let mut header = vec!["variant".to_owned(), "class".to_owned()];
            for kind in MetricKind::ALL {
                for size in &self.sizes {
                    header.push(format!("{kind}@{size}"));
                }
            }
            w.write_record(&header)?;
            for variant in &self.variants {
                for class in &self.classes {
                    let mut row = vec![variant.clone(), class.clone()];
                    for kind in MetricKind::ALL {
                        for &size in &self.sizes {
                            let v = self
                                .gap_summary(variant, size, kind, class)
                                .and_then(|g| g.summary.as_ref())
                                .and_then(pick);
                            row.push(format_cell(v));
                        }
                    }
                    w.write_record(&row)?;
                }
            }
            w.flush().map_err(|e| Error::io(dir, e))?;
        }

        let mut w = open("performance.csv")?;
        let mut header = vec!["variant", "size", "measure", "class", "undefined"];
        header.extend(SUMMARY_HEADER);
        w.write_record(&header)?;
        for p in &self.performance {
            let measure = match p.measure {
                Measure::Accuracy => "accuracy",
                Measure::F1 => "f1",
                Measure::Gap => "gap",
            };
            let mut row = vec![
                p.variant.clone(),
                p.size.to_string(),
                measure.to_owned(),
                p.class.clone().unwrap_or_default(),
                p.undefined_count.to_string(),
            ];
            row.extend(summary_cells(&p.summary));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;

        let mut w = open("t_tests.csv")?;
        w.write_record([
            "measure", "metric", "class", "comparison", "within", "a", "b", "t", "df", "p_value", "significant",
            "degenerate", "note",
        ])?;
        for t in &self.t_tests {
            let (kind, within, a, b) = match &t.comparison {
                Comparison::Sizes { variant, a, b } => ("sizes", variant.clone(), a.to_string(), b.to_string()),
                Comparison::Variants { size, a, b } => ("variants", size.to_string(), a.clone(), b.clone()),
            };
            let measure = match t.measure {
                Measure::Gap => "gap",
                Measure::Accuracy => "accuracy",
                Measure::F1 => "f1",
            };
            let r = t.result.as_ref();
            w.write_record([
                measure.to_owned(),
                t.metric.map(|m| m.to_string()).unwrap_or_default(),
                t.class.clone().unwrap_or_default(),
                kind.to_owned(),
                within,
                a,
                b,
                format_cell(r.map(|r| r.t_statistic)),
                format_cell(r.map(|r| r.degrees_of_freedom)),
                format_cell(r.map(|r| r.p_value)),
                r.map(|r| r.significant.to_string()).unwrap_or_default(),
                r.map(|r| r.degenerate.to_string()).unwrap_or_default(),
                t.note.clone().unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;
        Ok(())
    }
}
