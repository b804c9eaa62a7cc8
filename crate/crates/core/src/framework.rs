//! The pipeline that extends a taxonomy with new labels and label sets.
//!
//! Every raw label goes through the same fixed stages:
//!
//! 1. normalize the raw text;
//! 2. apply a matching curation record, if any (records win over everything
//!    below and are the only way a label is dropped);
//! 3. otherwise resolve the whole compound against the thesaurus and
//!    decompose it into atoms;
//! 4. resolve each atom against the thesaurus;
//! 5. insert each atom into the graph.
//!
//! Each stage is recorded in a [`ReportEntry`], so a merge leaves a full audit
//! trail of what was added, what was already present and what was dropped.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, InsertOutcome, SubsetKind, TaxonomyGraph};
use crate::label::{decompose, normalize, Label, LabelError, RawLabel, RecordAction, RuleSet, Tag};
use crate::thesaurus::Thesaurus;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameworkError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomOutcome {
    Added,
    Duplicate,
    Dropped,
}

impl AtomOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            AtomOutcome::Added => "added",
            AtomOutcome::Duplicate => "duplicate",
            AtomOutcome::Dropped => "dropped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomReport {
    /// Atom text as produced by decomposition, before atom-level resolution.
    pub source: String,
    /// Text of the node the atom ended up as.
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tag: Option<Tag>,
    pub outcome: AtomOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppliedRecord {
    /// The record's `raw` and `scope`, which identify it within the rule set.
    pub raw: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scope: Option<String>,
    pub action: RecordAction,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub raw: String,
    pub cluster: String,
    pub normalized: Option<String>,
    /// Set when the whole compound resolved to a different preferred term.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compound_resolved: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<AppliedRecord>,
    pub decomposed: Vec<String>,
    pub atoms: Vec<AtomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportEntry {
    fn new(raw: &str, cluster: &str) -> Self {
        ReportEntry {
            raw: raw.to_owned(),
            cluster: cluster.to_owned(),
            normalized: None,
            compound_resolved: None,
            record: None,
            decomposed: Vec::new(),
            atoms: Vec::new(),
            error: None,
        }
    }

    pub fn count(&self, outcome: AtomOutcome) -> usize {
        self.atoms.iter().filter(|a| a.outcome == outcome).count()
    }
}

impl fmt::Display for ReportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{:?}", self.cluster, self.raw)?;
        if let Some(err) = &self.error {
            return write!(f, " -> error: {err}");
        }
        if let Some(c) = &self.compound_resolved {
            write!(f, " ={c:?}")?;
        }
        f.write_str(" ->")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{}", atom.text)?;
            if atom.source != atom.text {
                write!(f, " (from {})", atom.source)?;
            }
            write!(f, " [{}]", atom.outcome.as_str())?;
        }
        if let Some(r) = &self.record {
            write!(f, "  # {}: {}", r.action.as_str(), r.reason)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ReportSummary {
    pub entries: usize,
    pub added: usize,
    pub duplicate: usize,
    pub dropped: usize,
    pub errors: usize,
}

/// Per-input verdict trail of one or more merges.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CurationReport {
    pub entries: Vec<ReportEntry>,
}

impl CurationReport {
    pub fn summary(&self) -> ReportSummary {
        let mut s = ReportSummary {
            entries: self.entries.len(),
            ..Default::default()
        };
        for e in &self.entries {
            s.added += e.count(AtomOutcome::Added);
            s.duplicate += e.count(AtomOutcome::Duplicate);
            s.dropped += e.count(AtomOutcome::Dropped);
            s.errors += usize::from(e.error.is_some());
        }
        s
    }

    /// Texts of every atom added, in processing order.
    pub fn added(&self) -> Vec<&str> {
        self.entries
            .iter()
            .flat_map(|e| &e.atoms)
            .filter(|a| a.outcome == AtomOutcome::Added)
            .map(|a| a.text.as_str())
            .collect()
    }

    pub fn extend(&mut self, other: CurationReport) {
        self.entries.extend(other.entries);
    }
}

impl fmt::Display for CurationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        let s = self.summary();
        writeln!(
            f,
            "# entries={} added={} duplicate={} dropped={} errors={}",
            s.entries, s.added, s.duplicate, s.dropped, s.errors
        )
    }
}

/// One line of a label-set file: a raw label with optional overrides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSetEntry {
    pub raw: String,
    pub cluster: Option<String>,
    pub kinds: Option<BTreeSet<SubsetKind>>,
    pub tag: Option<Tag>,
}

impl LabelSetEntry {
    pub fn plain(raw: impl Into<String>) -> Self {
        LabelSetEntry {
            raw: raw.into(),
            cluster: None,
            kinds: None,
            tag: None,
        }
    }
}

/// Runs one label through the pipeline in place. On error the graph is left
/// as it was before the call.
fn apply(
    graph: &mut TaxonomyGraph,
    raw: &str,
    cluster: &str,
    kinds: &BTreeSet<SubsetKind>,
    tag: Option<Tag>,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
) -> Result<ReportEntry, Box<(ReportEntry, FrameworkError)>> {
    let mut entry = ReportEntry::new(raw, cluster);
    let normalized = match RawLabel::new(raw).and_then(|r| normalize(&r)) {
        Ok(n) => n,
        Err(e) => {
            entry.error = Some(e.to_string());
            return Err(Box::new((entry, e.into())));
        }
    };
    entry.normalized = Some(normalized.text().to_owned());

    let atoms: Vec<Label> = match rules.find_record(raw, normalized.text(), Some(cluster)) {
        Some(record) => {
            entry.record = Some(AppliedRecord {
                raw: record.raw.clone(),
                scope: record.scope.clone(),
                action: record.action,
                reason: record.reason.clone(),
            });
            match record.action {
                RecordAction::Drop => {
                    entry.atoms.push(AtomReport {
                        source: normalized.text().to_owned(),
                        text: normalized.text().to_owned(),
                        tag: None,
                        outcome: AtomOutcome::Dropped,
                    });
                    return Ok(entry);
                }
                RecordAction::Keep => vec![normalized.clone()],
                RecordAction::MapSynonym | RecordAction::Decompose => record.output_labels(),
            }
        }
        None => {
            let compound = thesaurus.resolve(&normalized);
            if compound.text() != normalized.text() {
                entry.compound_resolved = Some(compound.text().to_owned());
            }
            decompose(&compound, rules)
        }
    };
    entry.decomposed = atoms.iter().map(|a| a.text().to_owned()).collect();

    let single = atoms.len() == 1;
    let backup = (atoms.len() > 1).then(|| graph.clone());
    for atom in atoms {
        let atom = match (atom.tag(), tag) {
            (None, Some(t)) if single => atom.with_tag(Some(t)),
            _ => atom,
        };
        match graph.insert_label(&atom, cluster, kinds, thesaurus) {
            Ok(outcome) => entry.atoms.push(AtomReport {
                source: atom.text().to_owned(),
                text: outcome.text().to_owned(),
                tag: atom.tag(),
                outcome: match outcome {
                    InsertOutcome::Added(_) => AtomOutcome::Added,
                    InsertOutcome::Duplicate(_) => AtomOutcome::Duplicate,
                },
            }),
            Err(e) => {
                if let Some(b) = backup {
                    *graph = b;
                }
                entry.atoms.clear();
                entry.error = Some(e.to_string());
                return Err(Box::new((entry, e.into())));
            }
        }
    }
    Ok(entry)
}

/// Processes a single raw label, returning the extended graph and the
/// report entry. The input graph is untouched.
pub fn process_label(
    graph: &TaxonomyGraph,
    raw: &RawLabel,
    cluster: &str,
    kinds: &BTreeSet<SubsetKind>,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
) -> Result<(TaxonomyGraph, ReportEntry), FrameworkError> {
    let mut next = graph.clone();
    match apply(&mut next, raw.as_str(), cluster, kinds, None, thesaurus, rules) {
        Ok(entry) => Ok((next, entry)),
        Err(failed) => Err(failed.1),
    }
}

/// Folds [`process_label`] over `raws` in order. Failures become report
/// entries and never stop the merge.
pub fn merge_label_set(
    graph: &TaxonomyGraph,
    raws: &[RawLabel],
    cluster: &str,
    kinds: &BTreeSet<SubsetKind>,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
) -> (TaxonomyGraph, CurationReport) {
    let entries: Vec<LabelSetEntry> = raws.iter().map(|r| LabelSetEntry::plain(r.as_str())).collect();
    merge_entries(graph, &entries, cluster, kinds, thesaurus, rules)
}

/// Like [`merge_label_set`], honoring per-entry cluster/kind/tag overrides.
pub fn merge_entries(
    graph: &TaxonomyGraph,
    entries: &[LabelSetEntry],
    cluster: &str,
    kinds: &BTreeSet<SubsetKind>,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
) -> (TaxonomyGraph, CurationReport) {
    let mut next = graph.clone();
    let mut report = CurationReport::default();
    for e in entries {
        let cluster = e.cluster.as_deref().unwrap_or(cluster);
        let kinds = e.kinds.as_ref().unwrap_or(kinds);
        let entry = match apply(&mut next, &e.raw, cluster, kinds, e.tag, thesaurus, rules) {
            Ok(entry) => entry,
            Err(failed) => failed.0,
        };
        report.entries.push(entry);
    }
    (next, report)
}
