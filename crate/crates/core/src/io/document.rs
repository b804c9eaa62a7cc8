use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{FormatError, FORMAT_VERSION};
use crate::graph::{CrossEdge, LabelInfo, SubsetKind, TaxonomyGraph};
use crate::label::{is_normalized, Tag};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocLabel {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Tag>,
    pub kinds: Vec<SubsetKind>,
    pub clusters: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocCluster {
    pub name: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocEdge {
    pub a: String,
    pub b: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// The full taxonomy as a JSON document. Every list is sorted, so equal
/// graphs serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyDocument {
    pub format_version: u32,
    pub labels: Vec<DocLabel>,
    pub clusters: Vec<DocCluster>,
    pub cross_edges: Vec<DocEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

impl TaxonomyDocument {
    pub fn from_graph(graph: &TaxonomyGraph, provenance: &[String]) -> Self {
        TaxonomyDocument {
            format_version: FORMAT_VERSION,
            labels: graph
                .labels()
                .map(|(text, info)| DocLabel {
                    text: text.to_owned(),
                    tag: info.tag,
                    kinds: info.kinds.iter().copied().collect(),
                    clusters: graph.clusters_of(text).map(str::to_owned).collect(),
                })
                .collect(),
            clusters: graph
                .clusters()
                .map(|(name, members)| DocCluster {
                    name: name.to_owned(),
                    members: members.iter().cloned().collect(),
                })
                .collect(),
            cross_edges: graph
                .cross_edges()
                .map(|e| DocEdge {
                    a: e.a,
                    b: e.b,
                    weight: e.weight,
                })
                .collect(),
            provenance: provenance.to_vec(),
        }
    }

    pub fn to_graph(&self) -> Result<TaxonomyGraph, FormatError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FormatError::UnknownFormatVersion(self.format_version.to_string()));
        }
        let bad = |m: String| FormatError::Document(m);
        for text in self
            .labels
            .iter()
            .map(|l| &l.text)
            .chain(self.clusters.iter().map(|c| &c.name))
        {
            if !is_normalized(text) {
                return Err(bad(format!("{text:?} is not normalized")));
            }
        }
        let graph = TaxonomyGraph::from_parts(
            self.labels
                .iter()
                .map(|l| (l.text.clone(), LabelInfo::new(l.kinds.iter().copied()).with_tag(l.tag))),
            self.clusters
                .iter()
                .map(|c| (c.name.clone(), c.members.iter().cloned())),
            self.cross_edges
                .iter()
                .map(|e| CrossEdge::new(e.a.clone(), e.b.clone(), e.weight)),
        );
        if graph.len() != self.labels.len() {
            return Err(bad("duplicate label entries".into()));
        }
        for l in &self.labels {
            let listed: BTreeSet<&str> = l.clusters.iter().map(String::as_str).collect();
            let actual: BTreeSet<&str> = graph.clusters_of(&l.text).collect();
            if listed != actual {
                return Err(bad(format!(
                    "label {:?} lists clusters {listed:?} but cluster blocks say {actual:?}",
                    l.text
                )));
            }
        }
        Ok(graph)
    }
}

/// Serializes `graph` as pretty-printed JSON with a trailing newline.
pub fn write_document(graph: &TaxonomyGraph, provenance: &[String]) -> String {
    let doc = TaxonomyDocument::from_graph(graph, provenance);
    let mut out = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    out.push('\n');
    out
}

/// Parses a JSON taxonomy document, returning the graph and its provenance notes.
pub fn read_document(text: &str) -> Result<(TaxonomyGraph, Vec<String>), FormatError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| FormatError::at(e.line(), e.to_string()))?;
    match value.get("format_version") {
        Some(serde_json::Value::Number(n)) if n.as_u64() == Some(FORMAT_VERSION as u64) => {}
        Some(other) => return Err(FormatError::UnknownFormatVersion(other.to_string())),
        None => return Err(FormatError::Document("missing format_version".into())),
    }
    let doc: TaxonomyDocument = serde_json::from_value(value).map_err(|e| FormatError::Document(e.to_string()))?;
    let graph = doc.to_graph()?;
    Ok((graph, doc.provenance))
}
