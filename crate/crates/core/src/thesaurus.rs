//! Synsets and preferred-term resolution.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{is_normalized, Label};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThesaurusError {
    #[error("invalid thesaurus file: {0}")]
    Parse(String),
    #[error("term {0:?} is not a normalized label")]
    NotNormalized(String),
    #[error("preferred term {0:?} is also listed as its own variant")]
    PreferredIsVariant(String),
    #[error("term {term:?} appears in synsets {first:?} and {second:?}")]
    DuplicateTerm {
        term: String,
        first: String,
        second: String,
    },
}

/// A group of synonyms indexed by its preferred term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub preferred: String,
    #[serde(default)]
    pub variants: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ThesaurusFile {
    #[serde(default, rename = "synset")]
    synsets: Vec<Synset>,
}

/// An immutable collection of synsets where every term belongs to at most
/// one synset, so resolution is a function.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    synsets: Vec<Synset>,
    // term -> index of its synset
    index: BTreeMap<String, usize>,
}

impl Thesaurus {
    pub fn new(synsets: Vec<Synset>) -> Result<Self, ThesaurusError> {
        let mut index = BTreeMap::new();
        for (i, synset) in synsets.iter().enumerate() {
            if synset.variants.contains(&synset.preferred) {
                return Err(ThesaurusError::PreferredIsVariant(synset.preferred.clone()));
            }
            for term in std::iter::once(&synset.preferred).chain(&synset.variants) {
                if !is_normalized(term) {
                    return Err(ThesaurusError::NotNormalized(term.clone()));
                }
                if let Some(&j) = index.get(term) {
                    let first: &Synset = &synsets[j];
                    return Err(ThesaurusError::DuplicateTerm {
                        term: term.clone(),
                        first: first.preferred.clone(),
                        second: synset.preferred.clone(),
                    });
                }
                index.insert(term.clone(), i);
            }
        }
        Ok(Thesaurus { synsets, index })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ThesaurusError> {
        let file: ThesaurusFile = toml::from_str(text).map_err(|e| ThesaurusError::Parse(e.to_string()))?;
        Self::new(file.synsets)
    }

    pub fn to_toml_string(&self) -> String {
        let file = ThesaurusFile {
            synsets: self.synsets.clone(),
        };
        toml::to_string(&file).expect("thesaurus always serializes")
    }

    pub fn synsets(&self) -> &[Synset] {
        &self.synsets
    }

    pub fn synset_of(&self, term: &str) -> Option<&Synset> {
        self.index.get(term).map(|&i| &self.synsets[i])
    }

    /// Every term the thesaurus knows, preferred and variant alike.
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.index.keys().map(String::as_str)
    }

    pub fn preferred_text<'a>(&'a self, term: &'a str) -> &'a str {
        self.synset_of(term).map_or(term, |s| s.preferred.as_str())
    }

    /// True if `term` is listed as a non-preferred variant.
    pub fn is_variant(&self, term: &str) -> bool {
        self.synset_of(term).is_some_and(|s| s.preferred != term)
    }

    /// Maps a term to its synset's preferred term, keeping the tag.
    /// Unknown terms pass through unchanged.
    pub fn resolve(&self, term: &Label) -> Label {
        match self.synset_of(term.text()) {
            Some(s) if s.preferred != term.text() => Label::parse(&s.preferred)
                .expect("synset terms are validated on load")
                .with_tag(term.tag()),
            _ => term.clone(),
        }
    }

    pub fn are_synonyms(&self, a: &Label, b: &Label) -> bool {
        self.preferred_text(a.text()) == self.preferred_text(b.text())
    }
}
