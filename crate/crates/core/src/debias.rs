//! Removes explicit gender information from text: gender indicator words are
//! rewritten to a single target gender and first names are replaced by one
//! neutral name.
//!
//! Matching is whole-word over Unicode word boundaries and case-insensitive.
//! A replacement keeps the case of the original token's first letter; every
//! other byte of the input is copied through. A word with an apostrophe
//! (`she's`) is matched on the part before the apostrophe.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_segmentation::UnicodeSegmentation;

use crate::data::{AuditDataset, Record};
use crate::error::{Error, Result};

const BUNDLED_NAMES: &str = include_str!("../data/first_names.txt");

pub const DEFAULT_NEUTRAL_NAME: &str = "Camille";

/// The indicator vocabulary handled by the default maps.
pub const INDICATORS: [&str; 12] = [
    "he", "she", "her", "his", "him", "hers", "himself", "herself", "mr", "mrs", "ms", "miss",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    pub fn parse(label: &str) -> Option<Self> {
        match label.to_ascii_lowercase().as_str() {
            "m" | "male" | "man" => Some(Gender::Male),
            "f" | "female" | "woman" => Some(Gender::Female),
            _ => None,
        }
    }
}

/// How "her" is rewritten for a male target.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum HerReading {
    /// her → his
    #[default]
    Possessive,
    /// her → him
    Objective,
}

pub fn default_indicator_map(target: Gender, her: HerReading) -> BTreeMap<String, String> {
    let pairs: &[(&str, &str)] = match target {
        Gender::Male => &[
            ("she", "he"),
            ("her", if her == HerReading::Objective { "him" } else { "his" }),
            ("hers", "his"),
            ("herself", "himself"),
            ("mrs", "mr"),
            ("ms", "mr"),
            ("miss", "mr"),
        ],
        Gender::Female => &[
            ("he", "she"),
            ("his", "her"),
            ("him", "her"),
            ("himself", "herself"),
            ("mr", "mrs"),
        ],
    };
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn is_single_token(s: &str) -> bool {
    let mut words = s.unicode_words();
    matches!((words.next(), words.next()), (Some(w), None) if w == s)
}

pub fn parse_lexicon(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn load_lexicon(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_lexicon(&text))
}

pub fn bundled_lexicon() -> HashSet<String> {
    parse_lexicon(BUNDLED_NAMES)
}

pub fn load_indicator_map(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidDebiasConfig(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DebiasConfig {
    target_gender: String,
    indicator_map: BTreeMap<String, String>,
    name_lexicon: HashSet<String>,
    neutral_name: String,
}

impl DebiasConfig {
    /// Default indicator map for a male or female target, bundled lexicon,
    /// default neutral name.
    pub fn for_target(target: &str) -> Result<Self> {
        let gender = Gender::parse(target).ok_or_else(|| {
            Error::InvalidDebiasConfig(format!(
                "no default indicator map for target `{target}`; supply one explicitly"
            ))
        })?;
        Self::new(
            target,
            default_indicator_map(gender, HerReading::default()),
            bundled_lexicon(),
            DEFAULT_NEUTRAL_NAME,
        )
    }

    pub fn new(
        target: &str,
        indicator_map: BTreeMap<String, String>,
        name_lexicon: HashSet<String>,
        neutral_name: &str,
    ) -> Result<Self> {
        let config = Self {
            target_gender: target.to_owned(),
            indicator_map,
            name_lexicon: name_lexicon.into_iter().map(|n| n.to_lowercase()).collect(),
            neutral_name: neutral_name.to_owned(),
        };
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDebiasConfig(m));
        if self.neutral_name.is_empty() || !is_single_token(&self.neutral_name) {
            return bad(format!("neutral name `{}` must be a single word", self.neutral_name));
        }
        for (key, value) in &self.indicator_map {
            if key != &key.to_lowercase() || !is_single_token(key) {
                return bad(format!("indicator `{key}` must be a lowercase single word"));
            }
            if value.is_empty() || !is_single_token(value) {
                return bad(format!("replacement `{value}` for `{key}` must be a single word"));
            }
            // A replacement that is itself rewritten would make a second pass
            // change the text again.
            if self.indicator_map.contains_key(&value.to_lowercase()) {
                return bad(format!("replacement `{value}` for `{key}` is itself an indicator"));
            }
        }
        if self.indicator_map.contains_key(&self.neutral_name.to_lowercase()) {
            return bad(format!("neutral name `{}` is an indicator", self.neutral_name));
        }
        Ok(())
    }

    pub fn with_her_reading(mut self, her: HerReading) -> Result<Self> {
        if Gender::parse(&self.target_gender) == Some(Gender::Male) {
            let v = if her == HerReading::Objective { "him" } else { "his" };
            self.indicator_map.insert("her".into(), v.into());
        }
        self.check()?;
        Ok(self)
    }

    pub fn with_indicator_map(mut self, map: BTreeMap<String, String>) -> Result<Self> {
        self.indicator_map = map;
        self.check()?;
        Ok(self)
    }

    pub fn with_lexicon(mut self, names: HashSet<String>) -> Self {
        self.name_lexicon = names.into_iter().map(|n| n.to_lowercase()).collect();
        self
    }

    pub fn with_neutral_name(mut self, name: &str) -> Result<Self> {
        self.neutral_name = name.to_owned();
        self.check()?;
        Ok(self)
    }

    pub fn target_gender(&self) -> &str {
        &self.target_gender
    }

    pub fn indicator_map(&self) -> &BTreeMap<String, String> {
        &self.indicator_map
    }

    pub fn neutral_name(&self) -> &str {
        &self.neutral_name
    }

    pub fn name_lexicon(&self) -> &HashSet<String> {
        &self.name_lexicon
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DebiasReport {
    pub replaced_indicator_count: u64,
    pub replaced_name_count: u64,
    /// Replacements per original token, lowercased.
    pub per_token: BTreeMap<String, u64>,
    pub records_without_text: Vec<String>,
}

impl DebiasReport {
    fn merge(&mut self, other: DebiasReport) {
        self.replaced_indicator_count += other.replaced_indicator_count;
        self.replaced_name_count += other.replaced_name_count;
        for (k, v) in other.per_token {
            *self.per_token.entry(k).or_default() += v;
        }
        self.records_without_text.extend(other.records_without_text);
    }

    pub fn total(&self) -> u64 {
        self.replaced_indicator_count + self.replaced_name_count
    }
}

fn match_case(original: &str, replacement: &str) -> String {
    let upper = original.chars().next().is_some_and(char::is_uppercase);
    let mut chars = replacement.chars();
    match chars.next() {
        Some(first) if upper => first.to_uppercase().chain(chars).collect(),
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Splits `word` at its first apostrophe into (head, rest).
fn split_contraction(word: &str) -> (&str, &str) {
    match word.find(['\'', '\u{2019}']) {
        Some(i) if i > 0 => word.split_at(i),
        _ => (word, ""),
    }
}

enum Hit<'a> {
    Indicator(&'a str),
    Name,
}

fn classify<'a>(head: &str, config: &'a DebiasConfig) -> Option<Hit<'a>> {
    let lower = head.to_lowercase();
    if let Some(v) = config.indicator_map.get(&lower) {
        return Some(Hit::Indicator(v));
    }
    // Replacement words are never treated as names, so a second pass is a no-op.
    if config.name_lexicon.contains(&lower)
        && lower != config.neutral_name.to_lowercase()
        && !config.indicator_map.values().any(|v| v.to_lowercase() == lower)
    {
        return Some(Hit::Name);
    }
    None
}

pub fn neutralize(text: &str, config: &DebiasConfig) -> (String, DebiasReport) {
    let mut out = String::with_capacity(text.len());
    let mut report = DebiasReport::default();
    for (_, segment) in text.split_word_bound_indices() {
        let is_word = segment.chars().next().is_some_and(char::is_alphanumeric);
        if !is_word {
            out.push_str(segment);
            continue;
        }
        let (head, rest) = split_contraction(segment);
        let replacement = match classify(head, config) {
            Some(Hit::Indicator(v)) => {
                report.replaced_indicator_count += 1;
                v
            }
            Some(Hit::Name) => {
                report.replaced_name_count += 1;
                config.neutral_name.as_str()
            }
            None => {
                out.push_str(segment);
                continue;
            }
        };
        *report.per_token.entry(head.to_lowercase()).or_default() += 1;
        out.push_str(&match_case(head, replacement));
        out.push_str(rest);
    }
    (out, report)
}

/// Rewrites every record's text. Records without text pass through and are
/// listed in the report.
pub fn neutralize_dataset(ds: &AuditDataset, config: &DebiasConfig) -> (AuditDataset, DebiasReport) {
    let results: Vec<(Record, DebiasReport)> = ds
        .records()
        .par_iter()
        .map(|r| match r.text.as_deref() {
            Some(text) => {
                let (new_text, report) = neutralize(text, config);
                (
                    Record {
                        text: Some(new_text.into()),
                        ..r.clone()
                    },
                    report,
                )
            }
            None => (
                r.clone(),
                DebiasReport {
                    records_without_text: vec![r.id.to_string()],
                    ..Default::default()
                },
            ),
        })
        .collect();
    let mut total = DebiasReport::default();
    let mut records = Vec::with_capacity(results.len());
    for (record, report) in results {
        records.push(record);
        total.merge(report);
    }
    let name = format!("{}-{}", ds.name(), config.target_gender.to_lowercase());
    (ds.derived(name, records), total)
}

/// Whole-word tokens (apostrophe heads, lowercased) of `text`, split the same
/// way [`neutralize`] sees them.
pub fn word_heads(text: &str) -> impl Iterator<Item = String> + '_ {
    text.unicode_words().map(|w| split_contraction(w).0.to_lowercase())
}
