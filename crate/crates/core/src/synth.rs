//! Synthetic populations with a known generative law, used as ground truth
//! for the estimators.
//!
//! A population draws a group from fixed weights, then a true class from
//! `p(y | g)`, then a prediction from the group's confusion row
//! `c_g(ŷ | y)`. Under that law the metrics have closed forms:
//!
//! ```text
//! GP(g, y)  = Σ_t p(t | g) · c_g(y | t)
//! TPR(g, y) = c_g(y | y)                      (undefined if p(y | g) = 0)
//! PP(g, y)  = p(y | g) · c_g(y | y) / GP(g, y) (undefined if GP(g, y) = 0)
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{AuditDataset, ClassId, GroupId, Record, Vocabulary};
use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::sampler::{Predictions, Predictor, PredictorError, ReplicateContext};

const SUM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub label: String,
    pub weight: f64,
    /// p(y | g); omitted classes have probability 0.
    pub class_prevalence: BTreeMap<String, f64>,
    /// True class → predicted class → c_g(ŷ | y). Every class needs a row;
    /// omitted entries within a row are 0.
    pub confusion: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PopulationSpec {
    #[serde(default)]
    pub name: String,
    /// Free-text provenance of the numbers, e.g. which ones are calibration
    /// targets and which are illustrative.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    /// Class vocabulary, in order.
    pub classes: Vec<String>,
    pub groups: Vec<GroupSpec>,
}

/// Dense form of a validated spec: `prevalence[g][y]`,
/// `confusion[g][true][pred]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Law {
    pub groups: Vec<String>,
    pub classes: Vec<String>,
    pub weights: Vec<f64>,
    pub prevalence: Vec<Vec<f64>>,
    pub confusion: Vec<Vec<Vec<f64>>>,
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::InvalidSpec {
        location: location.into(),
        message: message.into(),
    }
}

fn check_distribution(location: &str, values: &[f64]) -> Result<()> {
    for (i, &p) in values.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(location, format!("entry {i} = {p} is not a probability")));
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(invalid(location, format!("sums to {sum}, expected 1")));
    }
    Ok(())
}

fn dense(location: &str, classes: &[String], entries: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
    if let Some(unknown) = entries.keys().find(|k| !classes.contains(k)) {
        return Err(invalid(location, format!("unknown class `{unknown}`")));
    }
    Ok(classes.iter().map(|c| entries.get(c).copied().unwrap_or(0.0)).collect())
}

impl PopulationSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| invalid(path.display().to_string(), e.to_string()))
    }

    pub fn validate(&self) -> Result<Law> {
        if self.classes.is_empty() {
            return Err(invalid("classes", "no classes"));
        }
        if self.groups.is_empty() {
            return Err(invalid("groups", "no groups"));
        }
        let mut seen = Vocabulary::new();
        for (i, c) in self.classes.iter().enumerate() {
            if seen.position(c).is_some() {
                return Err(invalid(format!("classes[{i}]"), format!("duplicate class `{c}`")));
            }
            seen.intern(c);
        }
        let mut labels = Vocabulary::new();
        let mut prevalence = Vec::new();
        let mut confusion = Vec::new();
        for (gi, g) in self.groups.iter().enumerate() {
            let at = format!("groups[{gi}] ({})", g.label);
            if labels.position(&g.label).is_some() {
                return Err(invalid(at, "duplicate group label"));
            }
            labels.intern(&g.label);
            let p = dense(&format!("{at}.class_prevalence"), &self.classes, &g.class_prevalence)?;
            check_distribution(&format!("{at}.class_prevalence"), &p)?;
            prevalence.push(p);
            if let Some(unknown) = g.confusion.keys().find(|k| !self.classes.contains(k)) {
                return Err(invalid(format!("{at}.confusion"), format!("unknown class `{unknown}`")));
            }
            let mut rows = Vec::new();
            for c in &self.classes {
                let row_at = format!("{at}.confusion.{c}");
                let row = g
                    .confusion
                    .get(c)
                    .ok_or_else(|| invalid(&row_at, "missing confusion row"))?;
                let row = dense(&row_at, &self.classes, row)?;
                check_distribution(&row_at, &row)?;
                rows.push(row);
            }
            confusion.push(rows);
        }
        let weights: Vec<f64> = self.groups.iter().map(|g| g.weight).collect();
        check_distribution("groups[*].weight", &weights)?;
        Ok(Law {
            groups: labels.labels().to_vec(),
            classes: self.classes.clone(),
            weights,
            prevalence,
            confusion,
        })
    }

    /// Share of group `g` among members of class `y` in the population.
    pub fn group_share(&self, group: &str, class: &str) -> Result<f64> {
        let law = self.validate()?;
        let g = law.groups.iter().position(|l| l == group).ok_or_else(|| Error::UnknownGroup(group.into()))?;
        let y = law.classes.iter().position(|l| l == class).ok_or_else(|| Error::UnknownClass(class.into()))?;
        let mass = |g: usize| law.weights[g] * law.prevalence[g][y];
        let total: f64 = (0..law.groups.len()).map(mass).sum();
        Ok(mass(g) / total)
    }

    /// Overall prevalence of class `y`.
    pub fn class_prevalence(&self, class: &str) -> Result<f64> {
        let law = self.validate()?;
        let y = law.classes.iter().position(|l| l == class).ok_or_else(|| Error::UnknownClass(class.into()))?;
        Ok((0..law.groups.len()).map(|g| law.weights[g] * law.prevalence[g][y]).sum())
    }
}

fn row(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Two groups and two classes with equal prevalence; the predictor is better
/// on `y1` for M (0.9) than for F (0.7) and has the same 0.1 false-positive
/// rate into `y1` for both.
pub fn reference_two_group() -> PopulationSpec {
    let group = |label: &str, hit: f64| GroupSpec {
        label: label.into(),
        weight: 0.5,
        class_prevalence: row(&[("y1", 0.5), ("y2", 0.5)]),
        confusion: [
            ("y1".to_owned(), row(&[("y1", hit), ("y2", 1.0 - hit)])),
            ("y2".to_owned(), row(&[("y1", 0.1), ("y2", 0.9)])),
        ]
        .into(),
    };
    PopulationSpec {
        name: "reference-two-group".into(),
        note: "Hand-checkable two-class example; all numbers are illustrative.".into(),
        classes: vec!["y1".into(), "y2".into()],
        groups: vec![group("M", 0.9), group("F", 0.7)],
    }
}

/// A rare, male-dominated class (`surgeon`, 0.5% prevalence, 15% female), a
/// common balanced class (`physician`, 8% prevalence, 49.5% female) and a
/// remainder class.
///
/// Only the two female shares and the rare-class prevalence are calibrated
/// targets. The 8% physician prevalence, the equal group weights and every
/// confusion probability are illustrative: the predictor recognizes the rare
/// class less well for F (0.55) than for M (0.75) and rarely predicts it for
/// anyone else.
pub fn surgeon_scenario() -> PopulationSpec {
    const RARE: f64 = 0.005;
    const RARE_FEMALE_SHARE: f64 = 0.15;
    const COMMON: f64 = 0.08;
    const COMMON_FEMALE_SHARE: f64 = 0.495;
    // With equal weights p(y | g) = 2 · share_g · prevalence(y).
    let p = |prevalence: f64, share: f64| 2.0 * share * prevalence;
    let group = |label: &str, rare_share: f64, common_share: f64, rare_hit: f64| {
        let surgeon = p(RARE, rare_share);
        let physician = p(COMMON, common_share);
        let rare_miss = 1.0 - rare_hit;
        GroupSpec {
            label: label.into(),
            weight: 0.5,
            class_prevalence: row(&[
                ("surgeon", surgeon),
                ("physician", physician),
                ("other", 1.0 - surgeon - physician),
            ]),
            confusion: [
                (
                    "surgeon".to_owned(),
                    row(&[("surgeon", rare_hit), ("physician", 0.6 * rare_miss), ("other", 0.4 * rare_miss)]),
                ),
                (
                    "physician".to_owned(),
                    row(&[("surgeon", 0.002), ("physician", 0.85), ("other", 0.148)]),
                ),
                (
                    "other".to_owned(),
                    row(&[("surgeon", 0.0001), ("physician", 0.02), ("other", 0.9799)]),
                ),
            ]
            .into(),
        }
    };
    PopulationSpec {
        name: "surgeon-scenario".into(),
        note: "Calibration targets: surgeon prevalence 0.5%, female share 15% among surgeons and 49.5% among \
               physicians. Artifact choices: equal group weights, physician prevalence 8%, every confusion \
               probability."
            .into(),
        classes: vec!["surgeon".into(), "physician".into(), "other".into()],
        groups: vec![
            group("M", 1.0 - RARE_FEMALE_SHARE, 1.0 - COMMON_FEMALE_SHARE, 0.75),
            group("F", RARE_FEMALE_SHARE, COMMON_FEMALE_SHARE, 0.55),
        ],
    }
}

pub fn bundled(name: &str) -> Option<PopulationSpec> {
    match name {
        "surgeon" | "surgeon-scenario" => Some(surgeon_scenario()),
        "reference" | "reference-two-group" => Some(reference_two_group()),
        _ => None,
    }
}

/// Exact metric values of a population, indexed `[group][class]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrueMetrics {
    pub groups: Vec<String>,
    pub classes: Vec<String>,
    pub gp: Vec<Vec<Option<f64>>>,
    pub tpr: Vec<Vec<Option<f64>>>,
    pub pp: Vec<Vec<Option<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrueMetricRow {
    pub metric: MetricKind,
    pub group: String,
    pub class: String,
    pub value: Option<f64>,
}

impl TrueMetrics {
    fn position(labels: &[String], label: &str) -> Option<usize> {
        labels.iter().position(|l| l == label)
    }

    pub fn value(&self, kind: MetricKind, group: &str, class: &str) -> Option<f64> {
        let g = Self::position(&self.groups, group)?;
        let y = Self::position(&self.classes, class)?;
        match kind {
            MetricKind::GroupParity => self.gp[g][y],
            MetricKind::TruePositiveRate => self.tpr[g][y],
            MetricKind::PredictiveParity => self.pp[g][y],
        }
    }

    pub fn gap(&self, kind: MetricKind, group: &str, other: &str, class: &str) -> Option<f64> {
        Some(self.value(kind, group, class)? - self.value(kind, other, class)?)
    }

    pub fn rows(&self) -> Vec<TrueMetricRow> {
        let mut rows = Vec::new();
        for kind in MetricKind::ALL {
            for g in &self.groups {
                for y in &self.classes {
                    rows.push(TrueMetricRow {
                        metric: kind,
                        group: g.clone(),
                        class: y.clone(),
                        value: self.value(kind, g, y),
                    });
                }
            }
        }
        rows
    }
}

pub fn true_metrics(spec: &PopulationSpec) -> Result<TrueMetrics> {
    let law = spec.validate()?;
    let n_classes = law.classes.len();
    let mut gp = Vec::new();
    let mut tpr = Vec::new();
    let mut pp = Vec::new();
    for g in 0..law.groups.len() {
        let defined = law.weights[g] > 0.0;
        let prev = &law.prevalence[g];
        let conf = &law.confusion[g];
        let gp_row: Vec<Option<f64>> = (0..n_classes)
            .map(|y| defined.then(|| (0..n_classes).map(|t| prev[t] * conf[t][y]).sum()))
            .collect();
        let tpr_row = (0..n_classes)
            .map(|y| (defined && prev[y] > 0.0).then(|| conf[y][y]))
            .collect();
        let pp_row = (0..n_classes)
            .map(|y| match gp_row[y] {
                Some(p) if p > 0.0 => Some(prev[y] * conf[y][y] / p),
                _ => None,
            })
            .collect();
        gp.push(gp_row);
        tpr.push(tpr_row);
        pp.push(pp_row);
    }
    Ok(TrueMetrics {
        groups: law.groups,
        classes: law.classes,
        gp,
        tpr,
        pp,
    })
}

struct Sampler {
    groups: WeightedIndex<f64>,
    classes: Vec<Option<WeightedIndex<f64>>>,
    predictions: Vec<Vec<Option<WeightedIndex<f64>>>>,
}

fn weighted(weights: &[f64]) -> Option<WeightedIndex<f64>> {
    WeightedIndex::new(weights).ok()
}

impl Sampler {
    fn new(law: &Law) -> Self {
        Self {
            groups: weighted(&law.weights).expect("validated weights"),
            classes: law.prevalence.iter().map(|p| weighted(p)).collect(),
            predictions: law
                .confusion
                .iter()
                .map(|rows| rows.iter().map(|r| weighted(r)).collect())
                .collect(),
        }
    }

    fn predict(&self, g: usize, t: usize, rng: &mut ChaCha8Rng) -> usize {
        self.predictions[g][t]
            .as_ref()
            .expect("validated confusion row")
            .sample(rng)
    }
}

/// Draws `n` i.i.d. records (ids `s0000001`, ...). Vocabularies list every
/// group and class of the spec, observed or not.
pub fn generate(spec: &PopulationSpec, n: usize, seed: u64) -> Result<AuditDataset> {
    if n == 0 {
        return Err(Error::InvalidSampling("cannot generate an empty population".into()));
    }
    let law = spec.validate()?;
    let sampler = Sampler::new(&law);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    for i in 0..n {
        let g = sampler.groups.sample(&mut rng);
        let t = sampler.classes[g]
            .as_ref()
            .expect("validated prevalence")
            .sample(&mut rng);
        let p = sampler.predict(g, t, &mut rng);
        records.push(Record {
            id: format!("s{:07}", i + 1).into(),
            group: GroupId(g),
            true_class: ClassId(t),
            predicted_class: Some(ClassId(p)),
            text: None,
        });
    }
    let name = if spec.name.is_empty() { "synthetic".to_owned() } else { spec.name.clone() };
    Ok(AuditDataset::from_parts_unchecked(
        name,
        Arc::new(Vocabulary::from_labels(law.groups)),
        Arc::new(Vocabulary::from_labels(law.classes)),
        records,
    ))
}

/// A memoryless predictor that draws each prediction from the spec's
/// confusion row for the record's group and true class. Ignores the train
/// set.
pub struct OraclePredictor {
    law: Law,
    sampler: Sampler,
}

impl OraclePredictor {
    pub fn new(spec: &PopulationSpec) -> Result<Self> {
        let law = spec.validate()?;
        let sampler = Sampler::new(&law);
        Ok(Self { law, sampler })
    }

    /// Draws predictions for every record of `ds` in record order.
    pub fn draw(&self, ds: &AuditDataset, seed: u64) -> Result<Predictions> {
        let map_labels = |labels: &[String], vocab: &Vocabulary, unknown: fn(String) -> Error| {
            vocab
                .labels()
                .iter()
                .map(|l| labels.iter().position(|x| x == l).ok_or_else(|| unknown(l.clone())))
                .collect::<Result<Vec<usize>>>()
        };
        let groups = map_labels(&self.law.groups, ds.groups(), Error::UnknownGroup)?;
        let classes = map_labels(&self.law.classes, ds.classes(), Error::UnknownClass)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut preds = HashMap::with_capacity(ds.len());
        for r in ds.records() {
            let p = self
                .sampler
                .predict(groups[r.group.index()], classes[r.true_class.index()], &mut rng);
            preds.insert(r.id.to_string(), self.law.classes[p].clone());
        }
        Ok(preds)
    }
}

impl Predictor for OraclePredictor {
    fn predict(
        &self,
        ctx: &ReplicateContext,
        _train: &AuditDataset,
        test: &AuditDataset,
    ) -> std::result::Result<Predictions, PredictorError> {
        Ok(self.draw(test, ctx.seed)?)
    }
}
