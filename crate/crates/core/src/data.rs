//! Record schema, ingestion from CSV / JSONL, and dataset validation.
//!
//! Labels are interned into two ordered vocabularies (groups and classes) in
//! first-appearance order. Records refer to labels through [`GroupId`] and
//! [`ClassId`], so every downstream table inherits the same deterministic
//! ordering and a record can never carry a label outside its vocabularies.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(pub(crate) usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId(pub(crate) usize);

impl GroupId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl ClassId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Ordered set of labels; position is the label's id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vocabulary from labels in the given order, dropping repeats.
    pub fn from_labels<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = Self::new();
        for label in labels {
            vocab.intern(&label.into());
        }
        vocab
    }

    pub(crate) fn intern(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), i);
        i
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub id: Arc<str>,
    pub group: GroupId,
    pub true_class: ClassId,
    pub predicted_class: Option<ClassId>,
    pub text: Option<Arc<str>>,
}

/// A record whose labels are still plain strings, before interning.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledRecord {
    pub id: String,
    pub group: String,
    pub true_class: String,
    pub predicted_class: Option<String>,
    pub text: Option<String>,
}

impl LabeledRecord {
    pub fn new(id: impl Into<String>, group: impl Into<String>, true_class: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            group: group.into(),
            true_class: true_class.into(),
            predicted_class: None,
            text: None,
        }
    }

    pub fn predicted(mut self, class: impl Into<String>) -> Self {
        self.predicted_class = Some(class.into());
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }
}

/// Validated, immutable collection of records with their vocabularies.
#[derive(Clone, Debug)]
pub struct AuditDataset {
    name: String,
    groups: Arc<Vocabulary>,
    classes: Arc<Vocabulary>,
    records: Vec<Record>,
}

impl AuditDataset {
    /// Interns labels in first-appearance order. Within a record the true
    /// class is seen before the predicted class, so predicted-only labels are
    /// appended after every label seen earlier in the file.
    pub fn from_labeled<I>(name: impl Into<String>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = LabeledRecord>,
    {
        let mut groups = Vocabulary::new();
        let mut classes = Vocabulary::new();
        let mut records = Vec::new();
        for row in rows {
            let group = GroupId(groups.intern(&row.group));
            let true_class = ClassId(classes.intern(&row.true_class));
            let predicted_class = row.predicted_class.as_deref().map(|p| ClassId(classes.intern(p)));
            records.push(Record {
                id: row.id.into(),
                group,
                true_class,
                predicted_class,
                text: row.text.map(Into::into),
            });
        }
        Self::assemble(name.into(), groups, classes, records)
    }

    /// Uses declared vocabularies; labels outside them are rejected.
    pub fn with_vocabularies<I>(
        name: impl Into<String>,
        groups: Vocabulary,
        classes: Vocabulary,
        rows: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = LabeledRecord>,
    {
        let mut records = Vec::new();
        for row in rows {
            let group = groups
                .position(&row.group)
                .map(GroupId)
                .ok_or_else(|| Error::UnknownGroup(row.group.clone()))?;
            let true_class = classes
                .position(&row.true_class)
                .map(ClassId)
                .ok_or_else(|| Error::UnknownClass(row.true_class.clone()))?;
            let predicted_class = match row.predicted_class.as_deref() {
                Some(p) => Some(ClassId(
                    classes.position(p).ok_or_else(|| Error::UnknownClass(p.to_owned()))?,
                )),
                None => None,
            };
            records.push(Record {
                id: row.id.into(),
                group,
                true_class,
                predicted_class,
                text: row.text.map(Into::into),
            });
        }
        Self::assemble(name.into(), groups, classes, records)
    }

    fn assemble(name: String, groups: Vocabulary, classes: Vocabulary, records: Vec<Record>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyDataset(name));
        }
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !seen.insert(&*r.id) {
                return Err(Error::DuplicateId(r.id.to_string()));
            }
        }
        Ok(Self {
            name,
            groups: Arc::new(groups),
            classes: Arc::new(classes),
            records,
        })
    }

    /// Records are a subset of a valid dataset, so ids stay unique.
    pub(crate) fn derived(&self, name: String, records: Vec<Record>) -> Self {
        Self {
            name,
            groups: Arc::clone(&self.groups),
            classes: Arc::clone(&self.classes),
            records,
        }
    }

    pub(crate) fn from_parts_unchecked(
        name: String,
        groups: Arc<Vocabulary>,
        classes: Arc<Vocabulary>,
        records: Vec<Record>,
    ) -> Self {
        Self {
            name,
            groups,
            classes,
            records,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn groups(&self) -> &Vocabulary {
        &self.groups
    }

    pub fn classes(&self) -> &Vocabulary {
        &self.classes
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn group_id(&self, label: &str) -> Result<GroupId> {
        self.groups
            .position(label)
            .map(GroupId)
            .ok_or_else(|| Error::UnknownGroup(label.to_owned()))
    }

    pub fn class_id(&self, label: &str) -> Result<ClassId> {
        self.classes
            .position(label)
            .map(ClassId)
            .ok_or_else(|| Error::UnknownClass(label.to_owned()))
    }

    pub fn group_label(&self, g: GroupId) -> &str {
        self.groups.label(g.0)
    }

    pub fn class_label(&self, y: ClassId) -> &str {
        self.classes.label(y.0)
    }

    pub fn group_ids(&self) -> impl Iterator<Item = GroupId> + '_ {
        (0..self.groups.len()).map(GroupId)
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.classes.len()).map(ClassId)
    }

    pub fn predicted_count(&self) -> usize {
        self.records.iter().filter(|r| r.predicted_class.is_some()).count()
    }

    pub fn to_labeled(&self) -> impl Iterator<Item = LabeledRecord> + '_ {
        self.records.iter().map(|r| LabeledRecord {
            id: r.id.to_string(),
            group: self.group_label(r.group).to_owned(),
            true_class: self.class_label(r.true_class).to_owned(),
            predicted_class: r.predicted_class.map(|p| self.class_label(p).to_owned()),
            text: r.text.as_deref().map(str::to_owned),
        })
    }

    /// Ingestion requires a real audit shape: two groups and two classes.
    pub fn ensure_auditable(&self) -> Result<()> {
        if self.groups.len() < 2 {
            return Err(Error::TooFewLabels {
                kind: "groups",
                found: self.groups.len(),
            });
        }
        if self.classes.len() < 2 {
            return Err(Error::TooFewLabels {
                kind: "classes",
                found: self.classes.len(),
            });
        }
        Ok(())
    }

    /// Writes the canonical JSONL form (keys id, group, true_class,
    /// predicted_class, text; absent values as null).
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in self.to_labeled() {
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save_jsonl(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_jsonl(&mut out).map_err(|e| Error::io(path, e))?;
        out.flush().map_err(|e| Error::io(path, e))
    }
}

/// Returns a copy of `ds` with the given predictions set; other records keep
/// whatever prediction they had.
pub fn attach_predictions<K, V>(ds: &AuditDataset, preds: &HashMap<K, V>) -> Result<AuditDataset>
where
    K: AsRef<str> + Eq + std::hash::Hash,
    V: AsRef<str>,
{
    let positions: HashMap<&str, usize> = ds.records.iter().enumerate().map(|(i, r)| (&*r.id, i)).collect();
    let mut records = ds.records.clone();
    for (id, label) in preds {
        let i = *positions
            .get(id.as_ref())
            .ok_or_else(|| Error::UnknownId(id.as_ref().to_owned()))?;
        records[i].predicted_class = Some(ds.class_id(label.as_ref())?);
    }
    Ok(ds.derived(ds.name.clone(), records))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "jsonl" | "ndjson" | "json" => Some(Format::Jsonl),
            _ => None,
        }
    }
}

/// Column names (CSV) or keys (JSONL) holding each record field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Schema {
    /// When the id column is absent from a file, ids are the 1-based row
    /// number.
    pub id: String,
    pub group: String,
    pub true_class: String,
    pub predicted_class: Option<String>,
    pub text: Option<String>,
}

impl Default for Schema {
    fn default() -> Self {
        Self {
            id: "id".into(),
            group: "group".into(),
            true_class: "true_class".into(),
            predicted_class: Some("predicted_class".into()),
            text: Some("text".into()),
        }
    }
}

impl Schema {
    /// Parses `field=column` pairs separated by commas, starting from the
    /// default mapping, e.g. `group=gender,true_class=occupation,predicted_class=pred`.
    pub fn parse_mapping(spec: &str) -> Result<Self> {
        let mut schema = Schema::default();
        for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (field, column) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidSchema(format!("schema entry `{pair}` is not field=column")))?;
            let column = column.trim().to_owned();
            match field.trim() {
                "id" => schema.id = column,
                "group" => schema.group = column,
                "true_class" => schema.true_class = column,
                "predicted_class" => schema.predicted_class = Some(column),
                "text" => schema.text = Some(column),
                other => {
                    return Err(Error::InvalidSchema(format!("unknown schema field `{other}`")));
                }
            }
        }
        Ok(schema)
    }
}

/// Loads a dataset that can be audited: at least two groups and two classes.
/// Optional columns named by the schema but absent from the file leave the
/// corresponding field empty on every record.
pub fn load_dataset(path: &Path, format: Format, schema: &Schema) -> Result<AuditDataset> {
    let ds = load_records(path, format, schema)?;
    ds.ensure_auditable()?;
    Ok(ds)
}

/// As [`load_dataset`], without the group and class count check.
pub fn load_records(path: &Path, format: Format, schema: &Schema) -> Result<AuditDataset> {
    let rows = match format {
        Format::Csv => read_csv(path, schema)?,
        Format::Jsonl => read_jsonl(path, schema)?,
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_owned());
    AuditDataset::from_labeled(name, rows)
}

fn non_empty(value: Option<&str>) -> Option<String> {
    value.map(str::trim).filter(|v| !v.is_empty()).map(str::to_owned)
}

fn read_csv(path: &Path, schema: &Schema) -> Result<Vec<LabeledRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let require = |name: &str| {
        column(name).ok_or_else(|| Error::MissingColumn {
            path: path.to_path_buf(),
            column: name.to_owned(),
        })
    };
    let group_col = require(&schema.group)?;
    let class_col = require(&schema.true_class)?;
    let id_col = column(&schema.id);
    let pred_col = schema.predicted_class.as_deref().and_then(column);
    let text_col = schema.text.as_deref().and_then(column);

    let mut rows = Vec::new();
    for (n, result) in reader.records().enumerate() {
        let row = result?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(n + 2);
        let missing = |col: &str| Error::MissingField {
            path: path.to_path_buf(),
            row: line,
            column: col.to_owned(),
        };
        let id = match id_col {
            Some(c) => non_empty(row.get(c)).ok_or_else(|| missing(&schema.id))?,
            None => (n + 1).to_string(),
        };
        rows.push(LabeledRecord {
            id,
            group: non_empty(row.get(group_col)).ok_or_else(|| missing(&schema.group))?,
            true_class: non_empty(row.get(class_col)).ok_or_else(|| missing(&schema.true_class))?,
            predicted_class: pred_col.and_then(|c| non_empty(row.get(c))),
            text: text_col.and_then(|c| row.get(c)).map(str::to_owned),
        });
    }
    Ok(rows)
}

fn json_scalar(value: Option<&serde_json::Value>) -> Option<String> {
    match value? {
        serde_json::Value::Null => None,
        serde_json::Value::String(s) => Some(s.clone()),
        other => Some(other.to_string()),
    }
}

fn read_jsonl(path: &Path, schema: &Schema) -> Result<Vec<LabeledRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    let mut seen_group = false;
    let mut seen_class = false;
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let object: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(&line).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: e.to_string(),
            })?;
        seen_group |= object.contains_key(&schema.group);
        seen_class |= object.contains_key(&schema.true_class);
        let missing = |col: &str| Error::MissingField {
            path: path.to_path_buf(),
            row: lineno,
            column: col.to_owned(),
        };
        let field = |key: &str| non_empty(json_scalar(object.get(key)).as_deref());
        let id = if object.contains_key(&schema.id) {
            field(&schema.id).ok_or_else(|| missing(&schema.id))?
        } else {
            (rows.len() + 1).to_string()
        };
        let group = field(&schema.group);
        let true_class = field(&schema.true_class);
        // A key absent from every line is a schema problem, not a row problem.
        if group.is_none() && !seen_group {
            return Err(Error::MissingColumn {
                path: path.to_path_buf(),
                column: schema.group.clone(),
            });
        }
        if true_class.is_none() && !seen_class {
            return Err(Error::MissingColumn {
                path: path.to_path_buf(),
                column: schema.true_class.clone(),
            });
        }
        rows.push(LabeledRecord {
            id,
            group: group.ok_or_else(|| missing(&schema.group))?,
            true_class: true_class.ok_or_else(|| missing(&schema.true_class))?,
            predicted_class: schema.predicted_class.as_deref().and_then(field),
            text: schema.text.as_deref().and_then(|k| json_scalar(object.get(k))),
        });
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub record_id: Option<String>,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.record_id {
            Some(id) => write!(f, "{level}: record {id}: {}", self.message),
            None => write!(f, "{level}: {}", self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCount {
    pub group: String,
    pub class: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub record_count: usize,
    /// Group-major, class-minor, in vocabulary order.
    pub cells: Vec<CellCount>,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn count(&self, group: &str, class: &str) -> Option<usize> {
        self.cells
            .iter()
            .find(|c| c.group == group && c.class == class)
            .map(|c| c.count)
    }

    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }
}

pub fn validate(ds: &AuditDataset) -> ValidationReport {
    let n_classes = ds.classes().len();
    let mut counts = vec![0usize; ds.groups().len() * n_classes];
    let mut issues = Vec::new();
    for r in ds.records() {
        counts[r.group.0 * n_classes + r.true_class.0] += 1;
        if r.predicted_class.is_none() {
            issues.push(Issue {
                record_id: Some(r.id.to_string()),
                severity: Severity::Warning,
                message: "no predicted class; excluded from metric denominators".into(),
            });
        }
    }
    if let Err(e) = ds.ensure_auditable() {
        issues.push(Issue {
            record_id: None,
            severity: Severity::Error,
            message: e.to_string(),
        });
    }
    let mut cells = Vec::with_capacity(counts.len());
    for g in ds.group_ids() {
        for y in ds.class_ids() {
            let count = counts[g.0 * n_classes + y.0];
            if count == 0 {
                issues.push(Issue {
                    record_id: None,
                    severity: Severity::Warning,
                    message: format!(
                        "empty cell ({}, {}): no records of this group with this true class",
                        ds.group_label(g),
                        ds.class_label(y)
                    ),
                });
            }
            cells.push(CellCount {
                group: ds.group_label(g).to_owned(),
                class: ds.class_label(y).to_owned(),
                count,
            });
        }
    }
    ValidationReport {
        record_count: ds.len(),
        cells,
        issues,
    }
}
