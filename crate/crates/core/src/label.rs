//! Raw label text, canonical atomic labels, and compound decomposition.
//!
//! A [`RawLabel`] is whatever a source dataset printed: mixed case,
//! parenthetical qualifiers, slash alternatives, hyphenated compounds.
//! [`normalize`] turns it into a [`Label`]: lowercase, punctuation-free,
//! single-spaced. [`decompose`] then splits a compound label into atoms,
//! consulting a [`RuleSet`] of exceptions and explicit curation records
//! first.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("label is empty after normalization: {0:?}")]
    EmptyLabel(String),
    #[error("text is not a normalized label: {0:?}")]
    NotNormalized(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("invalid rule file: {0}")]
    Parse(String),
    #[error("record for {raw:?}: {detail}")]
    InvalidRecord { raw: String, detail: String },
    #[error("exception {0:?} is not a normalized label")]
    InvalidException(String),
}

/// Label text exactly as found in a source dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawLabel(String);

impl RawLabel {
    pub fn new(text: impl Into<String>) -> Result<Self, LabelError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(LabelError::EmptyLabel(text));
        }
        Ok(RawLabel(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RawLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Optional object/action tag. Metadata only; never part of label identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Object,
    Action,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Object => "object",
            Tag::Action => "action",
        }
    }
}

impl std::str::FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "object" | "obj" => Ok(Tag::Object),
            "action" | "act" => Ok(Tag::Action),
            other => Err(format!("unknown tag {other:?}")),
        }
    }
}

/// A normalized, atomic vocabulary term.
///
/// Equality, ordering and hashing look at the text only, so `"glass"` tagged
/// as an object and an untagged `"glass"` are the same label.
#[derive(Debug, Clone)]
pub struct Label {
    text: String,
    tag: Option<Tag>,
}

impl Label {
    /// Wraps text that is already in normalized form.
    pub fn parse(text: &str) -> Result<Self, LabelError> {
        if is_normalized(text) {
            Ok(Label {
                text: text.to_owned(),
                tag: None,
            })
        } else if text.is_empty() {
            Err(LabelError::EmptyLabel(String::new()))
        } else {
            Err(LabelError::NotNormalized(text.to_owned()))
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tag(&self) -> Option<Tag> {
        self.tag
    }

    pub fn with_tag(mut self, tag: Option<Tag>) -> Self {
        self.tag = tag;
        self
    }

    pub fn into_text(self) -> String {
        self.text
    }

    pub fn token_count(&self) -> usize {
        self.text.split(' ').count()
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Label {}

impl Hash for Label {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.text.hash(state);
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.text.cmp(&other.text)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() && !c.is_uppercase()
}

fn is_separator(c: char) -> bool {
    c.is_whitespace() || matches!(c, '-' | '/' | '\\' | '_' | ',' | ';' | ':' | '&' | '+' | '|')
}

/// True if `text` satisfies every [`Label`] invariant.
pub fn is_normalized(text: &str) -> bool {
    !text.is_empty()
        && !text.starts_with(' ')
        && !text.ends_with(' ')
        && !text.contains("  ")
        && text.chars().all(|c| c == ' ' || is_label_char(c))
}

/// Blanks out balanced parenthesized segments. An unmatched `(` is left for
/// the punctuation pass.
fn strip_parentheticals(input: &str) -> String {
    let chars: Vec<char> = input.chars().collect();
    let mut out = String::with_capacity(input.len());
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '(' {
            let mut depth = 0usize;
            let mut close = None;
            for (j, &c) in chars.iter().enumerate().skip(i) {
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            close = Some(j);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            if let Some(end) = close {
                out.push(' ');
                i = end + 1;
                continue;
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out
}

/// Canonicalizes raw label text.
///
/// Parenthesized qualifiers are removed, text is lowercased, hyphens, slashes
/// and similar joiners become spaces, every other punctuation character is
/// deleted, and whitespace is collapsed.
pub fn normalize(raw: &RawLabel) -> Result<Label, LabelError> {
    normalize_str(raw.as_str())
}

pub fn normalize_str(raw: &str) -> Result<Label, LabelError> {
    let lowered = strip_parentheticals(raw).to_lowercase();
    let mut text = String::with_capacity(lowered.len());
    let mut pending_space = false;
    for c in lowered.chars() {
        if is_label_char(c) {
            if pending_space && !text.is_empty() {
                text.push(' ');
            }
            pending_space = false;
            text.push(c);
        } else if is_separator(c) {
            pending_space = true;
        }
    }
    if text.is_empty() {
        return Err(LabelError::EmptyLabel(raw.to_owned()));
    }
    Ok(Label { text, tag: None })
}

/// What a curation record does with the label it matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordAction {
    Keep,
    MapSynonym,
    Decompose,
    Drop,
}

impl RecordAction {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordAction::Keep => "keep",
            RecordAction::MapSynonym => "map_synonym",
            RecordAction::Decompose => "decompose",
            RecordAction::Drop => "drop",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordOutput {
    pub text: String,
    #[serde(default, rename = "kind", skip_serializing_if = "Option::is_none")]
    pub tag: Option<Tag>,
}

/// An explicit, human-made decision about one raw label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurationRecord {
    pub raw: String,
    pub action: RecordAction,
    #[serde(default)]
    pub outputs: Vec<RecordOutput>,
    /// Restricts the record to merges into this cluster.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    pub reason: String,
}

impl CurationRecord {
    pub fn validate(&self) -> Result<(), RuleError> {
        let invalid = |detail: String| RuleError::InvalidRecord {
            raw: self.raw.clone(),
            detail,
        };
        let normalized = normalize_str(&self.raw).map_err(|e| invalid(e.to_string()))?;
        for out in &self.outputs {
            if !is_normalized(&out.text) {
                return Err(invalid(format!("output {:?} is not normalized", out.text)));
            }
        }
        match self.action {
            RecordAction::Drop if !self.outputs.is_empty() => Err(invalid("drop must have no outputs".into())),
            RecordAction::Keep if self.outputs.len() != 1 || self.outputs[0].text != normalized.text => Err(invalid(
                "keep must have exactly the normalized raw text as output".into(),
            )),
            RecordAction::MapSynonym if self.outputs.len() != 1 => {
                Err(invalid("map_synonym must have exactly one output".into()))
            }
            RecordAction::Decompose if self.outputs.is_empty() => {
                Err(invalid("decompose needs at least one output".into()))
            }
            _ => Ok(()),
        }
    }

    /// Records written in normalized form match any raw text normalizing to
    /// them; anything else only matches the exact (trimmed) raw string.
    fn match_rank(&self, raw: &str, normalized: &str, scope: Option<&str>) -> Option<u8> {
        let scope_rank = match (&self.scope, scope) {
            (None, _) => 0,
            (Some(want), Some(have)) if want == have => 2,
            (Some(_), _) => return None,
        };
        if self.raw.trim() == raw.trim() {
            Some(scope_rank + 1)
        } else if is_normalized(&self.raw) && self.raw == normalized {
            Some(scope_rank)
        } else {
            None
        }
    }

    pub fn output_labels(&self) -> Vec<Label> {
        self.outputs
            .iter()
            .map(|o| Label {
                text: o.text.clone(),
                tag: o.tag,
            })
            .collect()
    }
}

/// Exceptions and curation records consulted before generic token splitting.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    /// Multi-word terms that generic splitting keeps intact.
    #[serde(default)]
    pub exceptions: BTreeSet<String>,
    #[serde(default, rename = "record")]
    pub records: Vec<CurationRecord>,
}

impl RuleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_toml_str(text: &str) -> Result<Self, RuleError> {
        let rules: RuleSet = toml::from_str(text).map_err(|e| RuleError::Parse(e.to_string()))?;
        rules.validate()?;
        Ok(rules)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("rule sets always serialize")
    }

    pub fn validate(&self) -> Result<(), RuleError> {
        if let Some(bad) = self.exceptions.iter().find(|e| !is_normalized(e)) {
            return Err(RuleError::InvalidException(bad.clone()));
        }
        self.records.iter().try_for_each(CurationRecord::validate)
    }

    /// Best matching record: scoped beats unscoped, exact raw beats normalized.
    pub fn find_record(&self, raw: &str, normalized: &str, scope: Option<&str>) -> Option<&CurationRecord> {
        let mut best: Option<(u8, &CurationRecord)> = None;
        for record in &self.records {
            if let Some(rank) = record.match_rank(raw, normalized, scope) {
                if best.is_none_or(|(r, _)| rank > r) {
                    best = Some((rank, record));
                }
            }
        }
        best.map(|(_, r)| r)
    }
}

/// Splits a label into atomic labels.
///
/// An unscoped record for the label's text wins (`decompose` and
/// `map_synonym` records only). Otherwise tokens are split on spaces, with
/// the longest exception phrase at each position kept intact. A single-token
/// label returns itself.
pub fn decompose(label: &Label, rules: &RuleSet) -> Vec<Label> {
    if let Some(record) = rules.find_record(&label.text, &label.text, None) {
        if matches!(record.action, RecordAction::Decompose | RecordAction::MapSynonym) {
            return record.output_labels();
        }
    }
    if rules.exceptions.contains(&label.text) || !label.text.contains(' ') {
        return vec![label.clone()];
    }

    let tokens: Vec<&str> = label.text.split(' ').collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut taken = 1;
        for end in (i + 2..=tokens.len()).rev() {
            if rules.exceptions.contains(&tokens[i..end].join(" ")) {
                taken = end - i;
                break;
            }
        }
        out.push(Label {
            text: tokens[i..i + taken].join(" "),
            tag: None,
        });
        i += taken;
    }
    out
}
