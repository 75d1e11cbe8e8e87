//! Group-conditional fairness metrics, their gaps, and support counts.
//!
//! Every estimator is an exact integer ratio. Counting happens once per
//! dataset in a [`Tally`]; ratios are produced at the very end, so the
//! values are bit-comparable with a naive enumeration. A metric whose
//! denominator is zero is reported as undefined (`None`), never as zero.
//!
//! Records without a prediction are left out of every count.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{AuditDataset, ClassId, GroupId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    /// P(Ŷ = y | G = g)
    #[serde(rename = "GP")]
    GroupParity,
    /// P(Ŷ = y | G = g, Y = y)
    #[serde(rename = "TPR")]
    TruePositiveRate,
    /// P(Y = y | Ŷ = y, G = g)
    #[serde(rename = "PP")]
    PredictiveParity,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [
        MetricKind::GroupParity,
        MetricKind::TruePositiveRate,
        MetricKind::PredictiveParity,
    ];

    pub fn code(self) -> &'static str {
        match self {
            MetricKind::GroupParity => "GP",
            MetricKind::TruePositiveRate => "TPR",
            MetricKind::PredictiveParity => "PP",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GP" => Ok(MetricKind::GroupParity),
            "TPR" => Ok(MetricKind::TruePositiveRate),
            "PP" => Ok(MetricKind::PredictiveParity),
            _ => Err(Error::InvalidStats(format!("unknown metric `{s}`"))),
        }
    }
}

/// Exact count ratio; undefined when the denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        debug_assert!(numerator <= denominator);
        Self {
            numerator,
            denominator,
        }
    }

    pub fn value(self) -> Option<f64> {
        (self.denominator > 0).then(|| self.numerator as f64 / self.denominator as f64)
    }

    pub fn is_defined(self) -> bool {
        self.denominator > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricValue {
    pub kind: MetricKind,
    pub group: GroupId,
    pub class: ClassId,
    pub ratio: Ratio,
}

impl MetricValue {
    pub fn value(&self) -> Option<f64> {
        self.ratio.value()
    }

    pub fn numerator(&self) -> u64 {
        self.ratio.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.ratio.denominator
    }
}

/// `first − second` for one metric and class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapValue {
    pub kind: MetricKind,
    pub class: ClassId,
    pub first: MetricValue,
    pub second: MetricValue,
}

impl GapValue {
    pub fn gap(&self) -> Option<f64> {
        Some(self.first.value()? - self.second.value()?)
    }

    /// Numerator supports (individuals entering the estimator's numerator)
    /// for each side.
    pub fn supports(&self) -> (u64, u64) {
        (self.first.numerator(), self.second.numerator())
    }

    pub fn reversed(&self) -> GapValue {
        GapValue {
            first: self.second,
            second: self.first,
            ..*self
        }
    }
}

/// Numerator sizes of the three estimators for one (group, class) cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportCounts {
    pub n_gp: u64,
    pub n_tpr: u64,
    pub n_pp: u64,
}

impl SupportCounts {
    /// Share of the GP support that TPR and PP do not use.
    pub fn information_loss(&self) -> Option<f64> {
        (self.n_gp > 0).then(|| 1.0 - self.n_tpr as f64 / self.n_gp as f64)
    }
}

/// Per-group confusion counts over predicted records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    n_classes: usize,
    /// `[group][true][predicted]`, flattened.
    confusion: Vec<u64>,
    group_totals: Vec<u64>,
    unpredicted: u64,
}

impl Tally {
    pub fn new(ds: &AuditDataset) -> Self {
        let n_groups = ds.groups().len();
        let n_classes = ds.classes().len();
        let mut confusion = vec![0u64; n_groups * n_classes * n_classes];
        let mut group_totals = vec![0u64; n_groups];
        let mut unpredicted = 0;
        for r in ds.records() {
            match r.predicted_class {
                Some(p) => {
                    confusion[(r.group.0 * n_classes + r.true_class.0) * n_classes + p.0] += 1;
                    group_totals[r.group.0] += 1;
                }
                None => unpredicted += 1,
            }
        }
        Self {
            n_classes,
            confusion,
            group_totals,
            unpredicted,
        }
    }

    fn cell(&self, g: GroupId, truth: usize, pred: usize) -> u64 {
        self.confusion[(g.0 * self.n_classes + truth) * self.n_classes + pred]
    }

    pub fn unpredicted(&self) -> u64 {
        self.unpredicted
    }

    /// |{G=g}| among predicted records.
    pub fn group_total(&self, g: GroupId) -> u64 {
        self.group_totals[g.0]
    }

    /// |{Ŷ=y ∧ G=g}|
    pub fn predicted_as(&self, g: GroupId, y: ClassId) -> u64 {
        (0..self.n_classes).map(|t| self.cell(g, t, y.0)).sum()
    }

    /// |{Y=y ∧ G=g}| among predicted records.
    pub fn truly(&self, g: GroupId, y: ClassId) -> u64 {
        (0..self.n_classes).map(|p| self.cell(g, y.0, p)).sum()
    }

    /// |{Ŷ=y ∧ Y=y ∧ G=g}|
    pub fn hits(&self, g: GroupId, y: ClassId) -> u64 {
        self.cell(g, y.0, y.0)
    }

    pub fn metric(&self, kind: MetricKind, g: GroupId, y: ClassId) -> MetricValue {
        let ratio = match kind {
            MetricKind::GroupParity => Ratio::new(self.predicted_as(g, y), self.group_total(g)),
            MetricKind::TruePositiveRate => Ratio::new(self.hits(g, y), self.truly(g, y)),
            MetricKind::PredictiveParity => Ratio::new(self.hits(g, y), self.predicted_as(g, y)),
        };
        MetricValue {
            kind,
            group: g,
            class: y,
            ratio,
        }
    }

    pub fn gap(&self, kind: MetricKind, g: GroupId, other: GroupId, y: ClassId) -> GapValue {
        GapValue {
            kind,
            class: y,
            first: self.metric(kind, g, y),
            second: self.metric(kind, other, y),
        }
    }

    pub fn support(&self, g: GroupId, y: ClassId) -> SupportCounts {
        let hits = self.hits(g, y);
        SupportCounts {
            n_gp: self.predicted_as(g, y),
            n_tpr: hits,
            n_pp: hits,
        }
    }

    pub fn correct(&self) -> u64 {
        let groups = self.group_totals.len();
        (0..groups)
            .flat_map(|g| (0..self.n_classes).map(move |y| (g, y)))
            .map(|(g, y)| self.cell(GroupId(g), y, y))
            .sum()
    }

    pub fn predicted_total(&self) -> u64 {
        self.group_totals.iter().sum()
    }

    pub fn accuracy(&self) -> Option<f64> {
        Ratio::new(self.correct(), self.predicted_total()).value()
    }

    /// One-vs-rest F1 over all groups. Undefined when precision and recall
    /// are both undefined or both zero.
    pub fn f1(&self, y: ClassId) -> Option<f64> {
        let groups = (0..self.group_totals.len()).map(GroupId);
        let (mut hits, mut predicted, mut truly) = (0u64, 0u64, 0u64);
        for g in groups {
            hits += self.hits(g, y);
            predicted += self.predicted_as(g, y);
            truly += self.truly(g, y);
        }
        // With no hits precision and recall are each zero or undefined.
        if hits == 0 {
            return None;
        }
        // 2PR/(P+R) reduces to 2·hits/(predicted + truly).
        Some(2.0 * hits as f64 / (predicted + truly) as f64)
    }
}

fn ids(ds: &AuditDataset, g: &str, y: &str) -> Result<(GroupId, ClassId)> {
    Ok((ds.group_id(g)?, ds.class_id(y)?))
}

pub fn group_parity(ds: &AuditDataset, g: &str, y: &str) -> Result<MetricValue> {
    let (g, y) = ids(ds, g, y)?;
    Ok(Tally::new(ds).metric(MetricKind::GroupParity, g, y))
}

pub fn true_positive_rate(ds: &AuditDataset, g: &str, y: &str) -> Result<MetricValue> {
    let (g, y) = ids(ds, g, y)?;
    Ok(Tally::new(ds).metric(MetricKind::TruePositiveRate, g, y))
}

pub fn predictive_parity(ds: &AuditDataset, g: &str, y: &str) -> Result<MetricValue> {
    let (g, y) = ids(ds, g, y)?;
    Ok(Tally::new(ds).metric(MetricKind::PredictiveParity, g, y))
}

pub fn gap(kind: MetricKind, ds: &AuditDataset, g: &str, other: &str, y: &str) -> Result<GapValue> {
    if g == other {
        return Err(Error::IdenticalGroups(g.to_owned()));
    }
    let (g, y) = ids(ds, g, y)?;
    let other = ds.group_id(other)?;
    Ok(Tally::new(ds).gap(kind, g, other, y))
}

pub fn support_counts(ds: &AuditDataset, g: &str, y: &str) -> Result<SupportCounts> {
    let (g, y) = ids(ds, g, y)?;
    Ok(Tally::new(ds).support(g, y))
}

pub fn accuracy(ds: &AuditDataset) -> Result<f64> {
    Tally::new(ds).accuracy().ok_or(Error::NoPredictions)
}

pub fn f1_per_class(ds: &AuditDataset, y: &str) -> Result<Option<f64>> {
    let y = ds.class_id(y)?;
    Ok(Tally::new(ds).f1(y))
}

/// One gap cell of a [`GapTable`], with labels resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub metric: MetricKind,
    pub class: String,
    pub first: Ratio,
    pub second: Ratio,
}

impl GapRow {
    pub fn gap(&self) -> Option<f64> {
        Some(self.first.value()? - self.second.value()?)
    }
}

/// Every (metric, class) gap for one ordered group pair, plus the support
/// counts for both groups. Rows are metric-major (GP, TPR, PP) and then in
/// class vocabulary order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapTable {
    pub groups: (String, String),
    pub classes: Vec<String>,
    pub rows: Vec<GapRow>,
    /// `[side][class]`, side 0 for the first group.
    pub supports: [Vec<SupportCounts>; 2],
}

impl GapTable {
    pub fn compute(ds: &AuditDataset, first: &str, second: &str) -> Result<Self> {
        if first == second {
            return Err(Error::IdenticalGroups(first.to_owned()));
        }
        let g = ds.group_id(first)?;
        let h = ds.group_id(second)?;
        Ok(Self::from_tally(ds, &Tally::new(ds), g, h))
    }

    pub fn from_tally(ds: &AuditDataset, tally: &Tally, g: GroupId, h: GroupId) -> Self {
        let classes: Vec<String> = ds.classes().labels().to_vec();
        let mut rows = Vec::with_capacity(3 * classes.len());
        for kind in MetricKind::ALL {
            for y in ds.class_ids() {
                let gap = tally.gap(kind, g, h, y);
                rows.push(GapRow {
                    metric: kind,
                    class: ds.class_label(y).to_owned(),
                    first: gap.first.ratio,
                    second: gap.second.ratio,
                });
            }
        }
        let supports = [
            ds.class_ids().map(|y| tally.support(g, y)).collect(),
            ds.class_ids().map(|y| tally.support(h, y)).collect(),
        ];
        Self {
            groups: (ds.group_label(g).to_owned(), ds.group_label(h).to_owned()),
            classes,
            rows,
            supports,
        }
    }

    pub fn row(&self, kind: MetricKind, class: &str) -> Option<&GapRow> {
        let y = self.classes.iter().position(|c| c == class)?;
        let k = MetricKind::ALL.iter().position(|&m| m == kind)?;
        self.rows.get(k * self.classes.len() + y)
    }

    pub fn gap(&self, kind: MetricKind, class: &str) -> Option<f64> {
        self.row(kind, class)?.gap()
    }

    pub fn class_supports(&self, class: &str) -> Option<(SupportCounts, SupportCounts)> {
        let y = self.classes.iter().position(|c| c == class)?;
        Some((self.supports[0][y], self.supports[1][y]))
    }
}
