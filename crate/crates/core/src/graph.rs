//! The cluster-graph taxonomy: the superset of labels, the clusters that
//! group them, subset kinds, and the explicit edges between clusters.
//!
//! Clusters are cliques. Their edges are never stored; two labels sharing a
//! cluster are adjacent by definition. Only edges between labels that share
//! no cluster are stored, as cross edges with an optional weight.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{is_normalized, Label, Tag};
use crate::thesaurus::Thesaurus;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("{0:?} is both a cluster name and a label")]
    SubsetNameCollision(String),
    #[error("label {0:?} must belong to at least one subset kind")]
    NoSubsetKind(String),
    #[error("{0:?} is not a valid normalized name")]
    InvalidName(String),
    #[error("self edge on {0:?}")]
    SelfEdge(String),
    #[error("{0:?} and {1:?} share a cluster; their edge is implicit")]
    SameCluster(String, String),
    #[error("edge weight must be finite and non-negative, got {0}")]
    InvalidWeight(f64),
}

/// The three subset kinds every label is sorted into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetKind {
    /// Tangible description of a scene.
    Environment,
    /// Sound-emitting action or object.
    Event,
    /// Human-perceptual description of a scene.
    Context,
}

impl SubsetKind {
    pub const ALL: [SubsetKind; 3] = [SubsetKind::Environment, SubsetKind::Event, SubsetKind::Context];

    pub fn as_str(self) -> &'static str {
        match self {
            SubsetKind::Environment => "environment",
            SubsetKind::Event => "event",
            SubsetKind::Context => "context",
        }
    }
}

impl FromStr for SubsetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "environment" | "en" => Ok(SubsetKind::Environment),
            "event" | "ev" => Ok(SubsetKind::Event),
            "context" | "c" => Ok(SubsetKind::Context),
            other => Err(format!("unknown subset kind {other:?}")),
        }
    }
}

impl fmt::Display for SubsetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-label attributes. Identity is the text key in the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelInfo {
    pub tag: Option<Tag>,
    pub kinds: BTreeSet<SubsetKind>,
}

impl LabelInfo {
    pub fn new(kinds: impl IntoIterator<Item = SubsetKind>) -> Self {
        LabelInfo {
            tag: None,
            kinds: kinds.into_iter().collect(),
        }
    }

    pub fn with_tag(mut self, tag: Option<Tag>) -> Self {
        self.tag = tag;
        self
    }

    /// Union of kinds; an existing tag wins over the incoming one.
    pub fn absorb(&mut self, other: &LabelInfo) {
        self.kinds.extend(other.kinds.iter().copied());
        if self.tag.is_none() {
            self.tag = other.tag;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossEdge {
    pub a: String,
    pub b: String,
    pub weight: Option<f64>,
}

impl CrossEdge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, weight: Option<f64>) -> Self {
        CrossEdge {
            a: a.into(),
            b: b.into(),
            weight,
        }
    }
}

pub(crate) fn edge_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

/// Result of inserting one label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertOutcome {
    Added(String),
    /// The label (or a synonym of it) was already present under this text.
    Duplicate(String),
}

impl InsertOutcome {
    pub fn text(&self) -> &str {
        match self {
            InsertOutcome::Added(t) | InsertOutcome::Duplicate(t) => t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Closed set of validation findings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    /// Two distinct labels resolve to the same preferred term.
    SynonymCollision,
    /// A cluster name is also a label.
    SubsetNameAsNode,
    /// A label belongs to no cluster.
    OrphanLabel,
    /// A cluster lists a member that is not a label.
    UnknownMember,
    EmptyCluster,
    MissingSubsetKind,
    UnnormalizedText,
    SelfEdge,
    /// A cross edge joins two labels that share a cluster.
    IntraClusterEdge,
    UnknownEdgeEndpoint,
    InvalidWeight,
    /// A label is stored under a non-preferred synonym. Warning only.
    VariantTerm,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::SynonymCollision => "SYNONYM_COLLISION",
            IssueCode::SubsetNameAsNode => "SUBSET_NAME_AS_NODE",
            IssueCode::OrphanLabel => "ORPHAN_LABEL",
            IssueCode::UnknownMember => "UNKNOWN_MEMBER",
            IssueCode::EmptyCluster => "EMPTY_CLUSTER",
            IssueCode::MissingSubsetKind => "MISSING_SUBSET_KIND",
            IssueCode::UnnormalizedText => "UNNORMALIZED_TEXT",
            IssueCode::SelfEdge => "SELF_EDGE",
            IssueCode::IntraClusterEdge => "INTRA_CLUSTER_EDGE",
            IssueCode::UnknownEdgeEndpoint => "UNKNOWN_EDGE_ENDPOINT",
            IssueCode::InvalidWeight => "INVALID_WEIGHT",
            IssueCode::VariantTerm => "VARIANT_TERM",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            IssueCode::VariantTerm => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub severity: Severity,
    pub code: IssueCode,
    pub subject: String,
    pub detail: String,
}

impl ValidationIssue {
    fn new(code: IssueCode, subject: impl Into<String>, detail: impl Into<String>) -> Self {
        ValidationIssue {
            severity: code.severity(),
            code,
            subject: subject.into(),
            detail: detail.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} {} {:?}: {}", self.code.as_str(), self.subject, self.detail)
    }
}

/// The superset of labels with its cluster structure.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaxonomyGraph {
    labels: BTreeMap<String, LabelInfo>,
    clusters: BTreeMap<String, BTreeSet<String>>,
    edges: BTreeMap<(String, String), Option<f64>>,
}

impl TaxonomyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph without checking any invariant. Run [`validate`]
    /// afterwards if the parts come from an untrusted source.
    ///
    /// [`validate`]: TaxonomyGraph::validate
    pub fn from_parts<C, M>(
        labels: impl IntoIterator<Item = (String, LabelInfo)>,
        clusters: C,
        edges: impl IntoIterator<Item = CrossEdge>,
    ) -> Self
    where
        C: IntoIterator<Item = (String, M)>,
        M: IntoIterator<Item = String>,
    {
        TaxonomyGraph {
            labels: labels.into_iter().collect(),
            clusters: clusters
                .into_iter()
                .map(|(name, members)| (name, members.into_iter().collect()))
                .collect(),
            edges: edges.into_iter().map(|e| (edge_key(&e.a, &e.b), e.weight)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, text: &str) -> bool {
        self.labels.contains_key(text)
    }

    pub fn label_info(&self, text: &str) -> Option<&LabelInfo> {
        self.labels.get(text)
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, &LabelInfo)> {
        self.labels.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn label_texts(&self) -> BTreeSet<String> {
        self.labels.keys().cloned().collect()
    }

    /// Labels carrying `kind`: the event, environment or context subset.
    pub fn subset(&self, kind: SubsetKind) -> BTreeSet<String> {
        self.labels
            .iter()
            .filter(|(_, info)| info.kinds.contains(&kind))
            .map(|(text, _)| text.clone())
            .collect()
    }

    pub fn clusters(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.clusters.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn cluster(&self, name: &str) -> Option<&BTreeSet<String>> {
        self.clusters.get(name)
    }

    pub fn clusters_of<'a>(&'a self, text: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.clusters
            .iter()
            .filter(move |(_, members)| members.contains(text))
            .map(|(name, _)| name.as_str())
    }

    pub fn cross_edges(&self) -> impl Iterator<Item = CrossEdge> + '_ {
        self.edges
            .iter()
            .map(|((a, b), w)| CrossEdge::new(a.clone(), b.clone(), *w))
    }

    pub fn cross_edge_count(&self) -> usize {
        self.edges.len()
    }

    fn share_cluster(&self, a: &str, b: &str) -> bool {
        self.clusters
            .values()
            .any(|members| members.contains(a) && members.contains(b))
    }

    /// Adds `label` (after synonym resolution) to `cluster` with `kinds`.
    ///
    /// If the resolved label, or any label that is its synonym, is already in
    /// the graph, only its memberships grow and the outcome is a duplicate.
    /// Cross edges that become intra-cluster are dropped since the cluster
    /// now implies them.
    pub fn insert_label(
        &mut self,
        label: &Label,
        cluster: &str,
        kinds: &BTreeSet<SubsetKind>,
        thesaurus: &Thesaurus,
    ) -> Result<InsertOutcome, GraphError> {
        if !is_normalized(cluster) {
            return Err(GraphError::InvalidName(cluster.to_owned()));
        }
        let resolved = thesaurus.resolve(label);
        if kinds.is_empty() {
            return Err(GraphError::NoSubsetKind(resolved.into_text()));
        }

        let existing = if self.labels.contains_key(resolved.text()) {
            Some(resolved.text().to_owned())
        } else {
            self.labels
                .keys()
                .find(|t| thesaurus.preferred_text(t) == resolved.text())
                .cloned()
        };
        let target = existing.clone().unwrap_or_else(|| resolved.text().to_owned());

        if self.clusters.contains_key(&target) {
            return Err(GraphError::SubsetNameCollision(target));
        }
        if !self.clusters.contains_key(cluster) && self.labels.contains_key(cluster) {
            return Err(GraphError::SubsetNameCollision(cluster.to_owned()));
        }
        if cluster == target {
            return Err(GraphError::SubsetNameCollision(target));
        }

        let info = LabelInfo {
            tag: resolved.tag(),
            kinds: kinds.clone(),
        };
        self.labels
            .entry(target.clone())
            .and_modify(|e| e.absorb(&info))
            .or_insert(info);
        let members = self.clusters.entry(cluster.to_owned()).or_default();
        if members.insert(target.clone()) {
            let members = members.clone();
            self.edges
                .retain(|(a, b), _| !((a == &target && members.contains(b)) || (b == &target && members.contains(a))));
        }

        Ok(match existing {
            Some(t) => InsertOutcome::Duplicate(t),
            None => InsertOutcome::Added(target),
        })
    }

    /// Adds or replaces the cross edge between two labels in different clusters.
    pub fn add_cross_edge(&mut self, a: &str, b: &str, weight: Option<f64>) -> Result<(), GraphError> {
        for t in [a, b] {
            if !self.labels.contains_key(t) {
                return Err(GraphError::UnknownLabel(t.to_owned()));
            }
        }
        if a == b {
            return Err(GraphError::SelfEdge(a.to_owned()));
        }
        if let Some(w) = weight {
            if !w.is_finite() || w < 0.0 {
                return Err(GraphError::InvalidWeight(w));
            }
        }
        if self.share_cluster(a, b) {
            return Err(GraphError::SameCluster(a.to_owned(), b.to_owned()));
        }
        self.edges.insert(edge_key(a, b), weight);
        Ok(())
    }

    /// Co-cluster members plus cross-edge partners, excluding `text` itself.
    pub fn neighbors(&self, text: &str) -> Result<BTreeSet<String>, GraphError> {
        if !self.labels.contains_key(text) {
            return Err(GraphError::UnknownLabel(text.to_owned()));
        }
        let mut out = BTreeSet::new();
        for members in self.clusters.values().filter(|m| m.contains(text)) {
            out.extend(members.iter().filter(|m| *m != text).cloned());
        }
        for (a, b) in self.edges.keys() {
            if a == text && b != text {
                out.insert(b.clone());
            } else if b == text && a != text {
                out.insert(a.clone());
            }
        }
        Ok(out)
    }

    fn shortest_path(
        &self,
        from: &str,
        to: &str,
        edge_cost: impl Fn(Option<f64>) -> u64,
    ) -> Result<Option<u64>, GraphError> {
        for t in [from, to] {
            if !self.labels.contains_key(t) {
                return Err(GraphError::UnknownLabel(t.to_owned()));
            }
        }
        // Labels are nodes 0..n, clusters are hub nodes n.. that a member
        // enters at cost 1 and leaves at cost 0, which is the clique metric
        // without materializing the clique.
        let index: BTreeMap<&str, usize> = self.labels.keys().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
        let n = index.len();
        let mut adjacent: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n + self.clusters.len()];
        for (c, members) in self.clusters.values().enumerate() {
            let hub = n + c;
            for m in members.iter().filter_map(|m| index.get(m.as_str())) {
                adjacent[*m].push((hub, 1));
                adjacent[hub].push((*m, 0));
            }
        }
        for ((a, b), w) in &self.edges {
            if let (Some(&i), Some(&j)) = (index.get(a.as_str()), index.get(b.as_str())) {
                let cost = edge_cost(*w);
                adjacent[i].push((j, cost));
                adjacent[j].push((i, cost));
            }
        }

        let (source, target) = (index[from], index[to]);
        let mut best = vec![u64::MAX; adjacent.len()];
        best[source] = 0;
        let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
        while let Some(Reverse((d, node))) = heap.pop() {
            if node == target {
                return Ok(Some(d));
            }
            if d > best[node] {
                continue;
            }
            for &(next, cost) in &adjacent[node] {
                let nd = d.saturating_add(cost);
                if nd < best[next] {
                    best[next] = nd;
                    heap.push(Reverse((nd, next)));
                }
            }
        }
        Ok(None)
    }

    /// Shortest-path length. Clique edges cost 1; a cross edge costs the
    /// ceiling of its weight when one is set, otherwise 1. `None` means the
    /// labels are in different connected components.
    pub fn distance(&self, a: &str, b: &str) -> Result<Option<u64>, GraphError> {
        self.shortest_path(a, b, |w| w.map_or(1, |w| w.ceil() as u64))
    }

    /// Shortest-path length counting every edge as 1, ignoring weights.
    pub fn hop_distance(&self, a: &str, b: &str) -> Result<Option<u64>, GraphError> {
        self.shortest_path(a, b, |_| 1)
    }

    /// Checks every structural invariant and synonym uniqueness. Issues are
    /// sorted by code, then subject.
    pub fn validate(&self, thesaurus: &Thesaurus) -> Vec<ValidationIssue> {
        use IssueCode::*;
        let mut issues = Vec::new();

        let mut in_cluster: BTreeSet<&str> = BTreeSet::new();
        for (name, members) in &self.clusters {
            if !is_normalized(name) {
                issues.push(ValidationIssue::new(UnnormalizedText, name, "cluster name"));
            }
            if self.labels.contains_key(name) {
                issues.push(ValidationIssue::new(
                    SubsetNameAsNode,
                    name,
                    "cluster name is also a label",
                ));
            }
            if members.is_empty() {
                issues.push(ValidationIssue::new(EmptyCluster, name, "cluster has no members"));
            }
            for m in members {
                in_cluster.insert(m);
                if !self.labels.contains_key(m) {
                    issues.push(ValidationIssue::new(
                        UnknownMember,
                        m,
                        format!("member of cluster {name:?} is not a label"),
                    ));
                }
            }
        }

        let mut by_preferred: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (text, info) in &self.labels {
            if !is_normalized(text) {
                issues.push(ValidationIssue::new(UnnormalizedText, text, "label text"));
            }
            if !in_cluster.contains(text.as_str()) {
                issues.push(ValidationIssue::new(OrphanLabel, text, "label belongs to no cluster"));
            }
            if info.kinds.is_empty() {
                issues.push(ValidationIssue::new(
                    MissingSubsetKind,
                    text,
                    "label has no subset kind",
                ));
            }
            if thesaurus.is_variant(text) {
                issues.push(ValidationIssue::new(
                    VariantTerm,
                    text,
                    format!("preferred term is {:?}", thesaurus.preferred_text(text)),
                ));
            }
            by_preferred
                .entry(thesaurus.preferred_text(text))
                .or_default()
                .push(text);
        }
        for (preferred, texts) in by_preferred {
            if texts.len() > 1 {
                issues.push(ValidationIssue::new(
                    SynonymCollision,
                    preferred,
                    format!("synonymous labels: {}", texts.join(", ")),
                ));
            }
        }

        for ((a, b), weight) in &self.edges {
            let subject = format!("{a} -- {b}");
            if a == b {
                issues.push(ValidationIssue::new(SelfEdge, &subject, "edge joins a label to itself"));
                continue;
            }
            let missing: Vec<&str> = [a, b]
                .into_iter()
                .filter(|t| !self.labels.contains_key(*t))
                .map(String::as_str)
                .collect();
            if !missing.is_empty() {
                issues.push(ValidationIssue::new(
                    UnknownEdgeEndpoint,
                    &subject,
                    format!("not labels: {}", missing.join(", ")),
                ));
            } else if self.share_cluster(a, b) {
                issues.push(ValidationIssue::new(
                    IntraClusterEdge,
                    &subject,
                    "endpoints share a cluster",
                ));
            }
            if let Some(w) = weight {
                if !w.is_finite() || *w < 0.0 {
                    issues.push(ValidationIssue::new(InvalidWeight, &subject, format!("weight {w}")));
                }
            }
        }

        issues.sort_by(|x, y| (x.code.as_str(), &x.subject, &x.detail).cmp(&(y.code.as_str(), &y.subject, &y.detail)));
        issues
    }

    pub fn has_errors(&self, thesaurus: &Thesaurus) -> bool {
        self.validate(thesaurus).iter().any(ValidationIssue::is_error)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Label {
        Label::parse(s).unwrap()
    }

    fn kinds(k: &[SubsetKind]) -> BTreeSet<SubsetKind> {
        k.iter().copied().collect()
    }

    fn ev() -> BTreeSet<SubsetKind> {
        kinds(&[SubsetKind::Event])
    }

    fn coughs() -> Thesaurus {
        Thesaurus::from_toml_str("[[synset]]\npreferred = \"cough\"\nvariants = [\"coughing\"]\n").unwrap()
    }

    #[test]
    fn insert_into_empty_graph() {
        let mut g = TaxonomyGraph::new();
        let out = g
            .insert_label(&l("speech"), "d13t2", &ev(), &Thesaurus::empty())
            .unwrap();
        assert_eq!(out, InsertOutcome::Added("speech".into()));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn insert_duplicate_and_synonym() {
        let th = coughs();
        let mut g = TaxonomyGraph::new();
        g.insert_label(&l("speech"), "d13t2", &ev(), &th).unwrap();
        g.insert_label(&l("cough"), "d13t2", &ev(), &th).unwrap();
        let out = g.insert_label(&l("speech"), "d16t2", &ev(), &th).unwrap();
        assert_eq!(out, InsertOutcome::Duplicate("speech".into()));
        let out = g.insert_label(&l("coughing"), "d16t2", &ev(), &th).unwrap();
        assert_eq!(out, InsertOutcome::Duplicate("cough".into()));
        assert_eq!(g.len(), 2);
        assert_eq!(g.cluster("d16t2").unwrap().len(), 2);
        let out = g.insert_label(&l("frying"), "d18t4", &ev(), &th).unwrap();
        assert_eq!(out, InsertOutcome::Added("frying".into()));
        assert_eq!(g.len(), 3);
        assert!(g.validate(&th).is_empty());
    }

    #[test]
    fn first_seen_synonym_wins() {
        let mut g = TaxonomyGraph::new();
        g.insert_label(&l("coughing"), "a", &ev(), &Thesaurus::empty()).unwrap();
        let out = g.insert_label(&l("cough"), "b", &ev(), &coughs()).unwrap();
        assert_eq!(out, InsertOutcome::Duplicate("coughing".into()));
        assert_eq!(g.label_texts(), BTreeSet::from(["coughing".to_string()]));
    }

    #[test]
    fn insert_merges_kinds_and_is_idempotent() {
        let th = Thesaurus::empty();
        let mut g = TaxonomyGraph::new();
        g.insert_label(&l("park"), "scenes", &kinds(&[SubsetKind::Environment]), &th)
            .unwrap();
        g.insert_label(&l("park"), "events", &ev(), &th).unwrap();
        let snapshot = g.clone();
        g.insert_label(&l("park"), "events", &ev(), &th).unwrap();
        assert_eq!(g, snapshot);
        assert_eq!(
            g.label_info("park").unwrap().kinds,
            kinds(&[SubsetKind::Environment, SubsetKind::Event])
        );
    }

    #[test]
    fn subset_name_collisions() {
        let th = Thesaurus::empty();
        let mut g = TaxonomyGraph::new();
        g.insert_label(&l("office"), "scenes", &ev(), &th).unwrap();
        assert_eq!(
            g.insert_label(&l("scenes"), "other", &ev(), &th),
            Err(GraphError::SubsetNameCollision("scenes".into()))
        );
        assert_eq!(
            g.insert_label(&l("desk"), "office", &ev(), &th),
            Err(GraphError::SubsetNameCollision("office".into()))
        );
        assert_eq!(
            g.insert_label(&l("speech"), "speech", &ev(), &th),
            Err(GraphError::SubsetNameCollision("speech".into()))
        );
        assert!(matches!(
            g.insert_label(&l("desk"), "office", &BTreeSet::new(), &th),
            Err(GraphError::NoSubsetKind(_))
        ));
    }

    #[test]
    fn validate_detects_synonym_collision() {
        let g = TaxonomyGraph::from_parts(
            [
                ("cough".to_string(), LabelInfo::new([SubsetKind::Event])),
                ("coughing".to_string(), LabelInfo::new([SubsetKind::Event])),
            ],
            [("c".to_string(), vec!["cough".to_string(), "coughing".to_string()])],
            [],
        );
        let issues = g.validate(&coughs());
        let errors: Vec<_> = issues.iter().filter(|i| i.is_error()).collect();
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].code, IssueCode::SynonymCollision);
        assert_eq!(errors[0].subject, "cough");
    }

    #[test]
    fn validate_detects_subset_name_as_node() {
        let g = TaxonomyGraph::from_parts(
            [("speech".to_string(), LabelInfo::new([SubsetKind::Event]))],
            [("speech".to_string(), vec!["speech".to_string()])],
            [],
        );
        let issues = g.validate(&Thesaurus::empty());
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].code, IssueCode::SubsetNameAsNode);
    }

    #[test]
    fn validate_structural_issues_sorted() {
        let g = TaxonomyGraph::from_parts(
            [
                ("a".to_string(), LabelInfo::new([SubsetKind::Event])),
                ("b".to_string(), LabelInfo::default()),
                ("Bad".to_string(), LabelInfo::new([SubsetKind::Event])),
            ],
            [
                (
                    "k".to_string(),
                    vec!["a".to_string(), "b".to_string(), "ghost".to_string()],
                ),
                ("empty".to_string(), vec![]),
            ],
            [
                CrossEdge::new("a", "a", None),
                CrossEdge::new("a", "b", Some(-1.0)),
                CrossEdge::new("a", "zzz", None),
            ],
        );
        let codes: Vec<&str> = g
            .validate(&Thesaurus::empty())
            .iter()
            .map(|i| i.code.as_str())
            .collect();
        let mut sorted = codes.clone();
        sorted.sort();
        assert_eq!(codes, sorted);
        for expected in [
            "EMPTY_CLUSTER",
            "INTRA_CLUSTER_EDGE",
            "INVALID_WEIGHT",
            "MISSING_SUBSET_KIND",
            "ORPHAN_LABEL",
            "SELF_EDGE",
            "UNKNOWN_EDGE_ENDPOINT",
            "UNKNOWN_MEMBER",
            "UNNORMALIZED_TEXT",
        ] {
            assert!(codes.contains(&expected), "missing {expected}: {codes:?}");
        }
    }

    fn toy() -> TaxonomyGraph {
        let th = Thesaurus::empty();
        let mut g = TaxonomyGraph::new();
        for (t, c) in [("a", "k1"), ("b", "k1"), ("c", "k2"), ("d", "k2"), ("e", "k3")] {
            g.insert_label(&l(t), c, &ev(), &th).unwrap();
        }
        g.add_cross_edge("b", "c", None).unwrap();
        g
    }

    #[test]
    fn neighbors_clique_and_cross() {
        let g = toy();
        assert_eq!(g.neighbors("a").unwrap(), BTreeSet::from(["b".to_string()]));
        assert_eq!(
            g.neighbors("b").unwrap(),
            BTreeSet::from(["a".to_string(), "c".to_string()])
        );
        assert!(g.neighbors("e").unwrap().is_empty());
        assert_eq!(g.neighbors("nope"), Err(GraphError::UnknownLabel("nope".into())));
    }

    #[test]
    fn distance_examples() {
        let mut g = toy();
        assert_eq!(g.distance("a", "a").unwrap(), Some(0));
        assert_eq!(g.distance("a", "b").unwrap(), Some(1));
        assert_eq!(g.distance("a", "d").unwrap(), Some(3));
        assert_eq!(g.distance("a", "e").unwrap(), None);
        assert!(g.distance("a", "q").is_err());

        g.add_cross_edge("b", "c", Some(2.5)).unwrap();
        assert_eq!(g.distance("a", "d").unwrap(), Some(5));
        assert_eq!(g.hop_distance("a", "d").unwrap(), Some(3));
    }

    #[test]
    fn cross_edge_errors() {
        let mut g = toy();
        assert!(matches!(
            g.add_cross_edge("a", "b", None),
            Err(GraphError::SameCluster(..))
        ));
        assert!(matches!(g.add_cross_edge("a", "a", None), Err(GraphError::SelfEdge(_))));
        assert!(matches!(
            g.add_cross_edge("a", "x", None),
            Err(GraphError::UnknownLabel(_))
        ));
        assert!(matches!(
            g.add_cross_edge("a", "e", Some(f64::NAN)),
            Err(GraphError::InvalidWeight(_))
        ));
    }

    #[test]
    fn joining_a_cluster_absorbs_cross_edge() {
        let mut g = toy();
        g.insert_label(&l("c"), "k1", &ev(), &Thesaurus::empty()).unwrap();
        assert_eq!(g.cross_edge_count(), 0);
        assert!(g.validate(&Thesaurus::empty()).is_empty());
    }
}
