//! Graph cuts into task-specific label sets, and synonym-aware set algebra
//! over the resulting sub-graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge_key, CrossEdge, GraphError, LabelInfo, SubsetKind, TaxonomyGraph};
use crate::label::Tag;
use crate::thesaurus::Thesaurus;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CutError {
    #[error("selector has no criteria")]
    EmptySelector,
    #[error("unknown cluster {0:?}")]
    UnknownCluster(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("labels {texts:?} are all synonyms of {preferred:?}; operand was built with an incompatible thesaurus")]
    SynonymConflict { preferred: String, texts: Vec<String> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How the criteria of a selector combine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combine {
    /// A label matching any criterion is kept.
    #[default]
    Union,
    /// A label must match every criterion present.
    Intersection,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSelector {
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub kinds: BTreeSet<SubsetKind>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub clusters: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub labels: BTreeSet<String>,
    #[serde(default)]
    pub mode: Combine,
}

impl CutSelector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every subset kind and every cluster of `graph`.
    pub fn everything(graph: &TaxonomyGraph) -> Self {
        CutSelector {
            kinds: SubsetKind::ALL.into_iter().collect(),
            clusters: graph.clusters().map(|(n, _)| n.to_owned()).collect(),
            ..Self::default()
        }
    }

    pub fn kind(mut self, kind: SubsetKind) -> Self {
        self.kinds.insert(kind);
        self
    }

    pub fn cluster(mut self, name: impl Into<String>) -> Self {
        self.clusters.insert(name.into());
        self
    }

    pub fn label(mut self, text: impl Into<String>) -> Self {
        self.labels.insert(text.into());
        self
    }

    pub fn mode(mut self, mode: Combine) -> Self {
        self.mode = mode;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty() && self.clusters.is_empty() && self.labels.is_empty()
    }

    fn matches(&self, graph: &TaxonomyGraph, text: &str, info: &LabelInfo) -> bool {
        let mut checks = Vec::with_capacity(3);
        if !self.kinds.is_empty() {
            checks.push(info.kinds.iter().any(|k| self.kinds.contains(k)));
        }
        if !self.clusters.is_empty() {
            checks.push(graph.clusters_of(text).any(|c| self.clusters.contains(c)));
        }
        if !self.labels.is_empty() {
            checks.push(self.labels.contains(text));
        }
        match self.mode {
            Combine::Union => checks.into_iter().any(|c| c),
            Combine::Intersection => checks.into_iter().all(|c| c),
        }
    }
}

impl fmt::Display for CutSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        parts.extend(self.kinds.iter().map(|k| format!("kind={k}")));
        parts.extend(self.clusters.iter().map(|c| format!("cluster={c}")));
        parts.extend(self.labels.iter().map(|l| format!("label={l}")));
        let joiner = match self.mode {
            Combine::Union => " | ",
            Combine::Intersection => " & ",
        };
        f.write_str(&parts.join(joiner))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    pub selector: CutSelector,
}

/// A standalone taxonomy carved out of (or combined from) other taxonomies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SubGraph {
    graph: TaxonomyGraph,
    provenance: Option<Provenance>,
}

impl SubGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn graph(&self) -> &TaxonomyGraph {
        &self.graph
    }

    pub fn into_graph(self) -> TaxonomyGraph {
        self.graph
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Names the parent taxonomy in the provenance of a cut.
    pub fn with_parent(mut self, parent: impl Into<String>) -> Self {
        if let Some(p) = &mut self.provenance {
            p.parent = Some(parent.into());
        }
        self
    }
}

impl From<TaxonomyGraph> for SubGraph {
    fn from(graph: TaxonomyGraph) -> Self {
        SubGraph {
            graph,
            provenance: None,
        }
    }
}

impl std::ops::Deref for SubGraph {
    type Target = TaxonomyGraph;

    fn deref(&self) -> &TaxonomyGraph {
        &self.graph
    }
}

/// Keeps the labels `selector` matches, together with their clusters
/// (restricted to kept members, empty ones dropped), subset kinds and the
/// cross edges whose endpoints both survive.
pub fn cut(graph: &TaxonomyGraph, selector: &CutSelector) -> Result<SubGraph, CutError> {
    if selector.is_empty() {
        return Err(CutError::EmptySelector);
    }
    if let Some(c) = selector.clusters.iter().find(|c| graph.cluster(c).is_none()) {
        return Err(CutError::UnknownCluster(c.clone()));
    }
    if let Some(l) = selector.labels.iter().find(|l| !graph.contains(l)) {
        return Err(CutError::UnknownLabel(l.clone()));
    }

    let kept: BTreeMap<String, LabelInfo> = graph
        .labels()
        .filter(|(text, info)| selector.matches(graph, text, info))
        .map(|(t, i)| (t.to_owned(), i.clone()))
        .collect();
    let clusters: Vec<(String, BTreeSet<String>)> = graph
        .clusters()
        .map(|(name, members)| {
            let members: BTreeSet<String> = members.iter().filter(|m| kept.contains_key(*m)).cloned().collect();
            (name.to_owned(), members)
        })
        .filter(|(_, m)| !m.is_empty())
        .collect();
    let edges: Vec<CrossEdge> = graph
        .cross_edges()
        .filter(|e| kept.contains_key(&e.a) && kept.contains_key(&e.b))
        .collect();

    Ok(SubGraph {
        graph: TaxonomyGraph::from_parts(kept, clusters, edges),
        provenance: Some(Provenance {
            parent: None,
            selector: selector.clone(),
        }),
    })
}

/// Maps each label of `g` to its preferred text, failing if two labels of the
/// same operand collapse together.
fn canonical_texts(g: &TaxonomyGraph, thesaurus: &Thesaurus) -> Result<BTreeMap<String, String>, CutError> {
    let mut seen: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut map = BTreeMap::new();
    for (text, _) in g.labels() {
        let preferred = thesaurus.preferred_text(text);
        seen.entry(preferred).or_default().push(text.to_owned());
        map.insert(text.to_owned(), preferred.to_owned());
    }
    if let Some((preferred, texts)) = seen.into_iter().find(|(_, t)| t.len() > 1) {
        return Err(CutError::SynonymConflict {
            preferred: preferred.to_owned(),
            texts,
        });
    }
    Ok(map)
}

fn merge_tag(a: Option<Tag>, b: Option<Tag>) -> Option<Tag> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

fn merge_weight(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

/// Combines both operands restricted to the canonical labels `keep` accepts.
/// All metadata of kept labels is merged by union.
fn combine(
    a: &TaxonomyGraph,
    b: &TaxonomyGraph,
    thesaurus: &Thesaurus,
    keep: impl Fn(&str) -> bool,
) -> Result<TaxonomyGraph, CutError> {
    let maps = [canonical_texts(a, thesaurus)?, canonical_texts(b, thesaurus)?];
    let operands = [a, b];

    let mut labels: BTreeMap<String, LabelInfo> = BTreeMap::new();
    let mut clusters: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut edges: BTreeMap<(String, String), Option<f64>> = BTreeMap::new();

    for (g, map) in operands.iter().zip(&maps) {
        for (text, info) in g.labels() {
            let canon = &map[text];
            if !keep(canon) {
                continue;
            }
            let entry = labels.entry(canon.clone()).or_default();
            entry.kinds.extend(info.kinds.iter().copied());
            entry.tag = merge_tag(entry.tag, info.tag);
        }
    }
    for (g, map) in operands.iter().zip(&maps) {
        for (name, members) in g.clusters() {
            let kept: Vec<String> = members
                .iter()
                .filter_map(|m| map.get(m).or(Some(m)))
                .filter(|m| labels.contains_key(*m))
                .cloned()
                .collect();
            if !kept.is_empty() {
                clusters.entry(name.to_owned()).or_default().extend(kept);
            }
        }
    }
    if let Some(name) = clusters.keys().find(|n| labels.contains_key(*n)) {
        return Err(GraphError::SubsetNameCollision(name.clone()).into());
    }
    for (g, map) in operands.iter().zip(&maps) {
        for e in g.cross_edges() {
            let (Some(x), Some(y)) = (map.get(&e.a), map.get(&e.b)) else {
                continue;
            };
            if x == y || !labels.contains_key(x) || !labels.contains_key(y) {
                continue;
            }
            let key = edge_key(x, y);
            let w = match edges.get(&key) {
                Some(existing) => merge_weight(*existing, e.weight),
                None => e.weight,
            };
            edges.insert(key, w);
        }
    }
    edges.retain(|(x, y), _| !clusters.values().any(|m| m.contains(x) && m.contains(y)));

    Ok(TaxonomyGraph::from_parts(
        labels,
        clusters,
        edges.into_iter().map(|((x, y), w)| CrossEdge::new(x, y, w)),
    ))
}

/// Synonym-aware union: labels collapse to their preferred term and all
/// metadata is merged.
pub fn union(a: &SubGraph, b: &SubGraph, thesaurus: &Thesaurus) -> Result<SubGraph, CutError> {
    combine(&a.graph, &b.graph, thesaurus, |_| true).map(SubGraph::from)
}

/// Synonym-aware intersection: keeps labels present in both operands, with
/// their metadata from either side.
pub fn intersect(a: &SubGraph, b: &SubGraph, thesaurus: &Thesaurus) -> Result<SubGraph, CutError> {
    let in_a: BTreeSet<String> = canonical_texts(&a.graph, thesaurus)?.into_values().collect();
    let in_b: BTreeSet<String> = canonical_texts(&b.graph, thesaurus)?.into_values().collect();
    combine(&a.graph, &b.graph, thesaurus, |t| in_a.contains(t) && in_b.contains(t)).map(SubGraph::from)
}

/// Label texts in lexicographic order, for use as a classifier label vector.
pub fn export_label_vector(sub: &TaxonomyGraph) -> Vec<String> {
    sub.label_texts().into_iter().collect()
}
