//! Line-oriented edge-list format.
//!
//! ```text
//! taxograph-edges v1
//! @cluster d13t2
//! door<TAB>event
//! glass<TAB>event<TAB>object
//! @edges
//! office<TAB>speech
//! park<TAB>street<TAB>0.5
//! ```
//!
//! Cluster blocks list members with their subset kinds (comma separated)
//! and optional tag; clique edges are implied by the blocks. Lines after
//! `@edges` are cross edges with an optional weight. Blocks, members and
//! edges are sorted, so the output is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::FormatError;
use crate::graph::{CrossEdge, LabelInfo, SubsetKind, TaxonomyGraph};
use crate::label::Label;
use crate::thesaurus::Thesaurus;

pub const EDGE_LIST_HEADER: &str = "taxograph-edges v1";

pub fn export_edges(graph: &TaxonomyGraph) -> Result<String, FormatError> {
    let errors: Vec<_> = graph
        .validate(&Thesaurus::empty())
        .into_iter()
        .filter(|i| i.is_error())
        .collect();
    if !errors.is_empty() {
        return Err(FormatError::InvalidGraph(errors));
    }

    let mut out = String::new();
    out.push_str(EDGE_LIST_HEADER);
    out.push('\n');
    for (name, members) in graph.clusters() {
        writeln!(out, "@cluster {name}").unwrap();
        for m in members {
            let info = graph.label_info(m).expect("validated");
            let kinds: Vec<&str> = info.kinds.iter().map(|k| k.as_str()).collect();
            write!(out, "{m}\t{}", kinds.join(",")).unwrap();
            if let Some(tag) = info.tag {
                write!(out, "\t{}", tag.as_str()).unwrap();
            }
            out.push('\n');
        }
    }
    if graph.cross_edge_count() > 0 {
        out.push_str("@edges\n");
        for e in graph.cross_edges() {
            write!(out, "{}\t{}", e.a, e.b).unwrap();
            if let Some(w) = e.weight {
                write!(out, "\t{w}").unwrap();
            }
            out.push('\n');
        }
    }
    Ok(out)
}

fn parse_label(line: usize, text: &str) -> Result<String, FormatError> {
    Label::parse(text)
        .map(Label::into_text)
        .map_err(|e| FormatError::at(line, e.to_string()))
}

pub fn import_edges(text: &str) -> Result<TaxonomyGraph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, h)) if h == EDGE_LIST_HEADER => {}
        Some((_, h)) if h.starts_with("taxograph-edges ") => {
            return Err(FormatError::UnknownFormatVersion(
                h["taxograph-edges ".len()..].to_owned(),
            ))
        }
        _ => return Err(FormatError::at(1, format!("expected header {EDGE_LIST_HEADER:?}"))),
    }

    let mut labels: BTreeMap<String, LabelInfo> = BTreeMap::new();
    let mut clusters: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut current: Option<String> = None;
    let mut in_edges = false;

    for (n, line) in lines {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix("@cluster ") {
            if in_edges {
                return Err(FormatError::at(n, "cluster block after @edges"));
            }
            let name = parse_label(n, name)?;
            clusters.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        if line == "@edges" {
            in_edges = true;
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if in_edges {
            if !(2..=3).contains(&fields.len()) {
                return Err(FormatError::at(n, "edge line needs 2 or 3 tab-separated fields"));
            }
            let weight = match fields.get(2) {
                None => None,
                Some(w) => {
                    let w: f64 = w.parse().map_err(|_| FormatError::at(n, format!("bad weight {w:?}")))?;
                    if !w.is_finite() || w < 0.0 {
                        return Err(FormatError::at(
                            n,
                            format!("weight {w} must be finite and non-negative"),
                        ));
                    }
                    Some(w)
                }
            };
            edges.push(CrossEdge::new(
                parse_label(n, fields[0])?,
                parse_label(n, fields[1])?,
                weight,
            ));
            continue;
        }

        let Some(cluster) = &current else {
            return Err(FormatError::at(n, "member line outside a cluster block"));
        };
        if !(2..=3).contains(&fields.len()) {
            return Err(FormatError::at(n, "member line needs 2 or 3 tab-separated fields"));
        }
        let text = parse_label(n, fields[0])?;
        let kinds = fields[1]
            .split(',')
            .map(|k| k.parse::<SubsetKind>())
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(|e| FormatError::at(n, e))?;
        let tag = fields
            .get(2)
            .map(|t| t.parse())
            .transpose()
            .map_err(|e: String| FormatError::at(n, e))?;
        let info = LabelInfo { tag, kinds };
        match labels.get(&text) {
            Some(prev) if prev != &info => {
                return Err(FormatError::at(
                    n,
                    format!("label {text:?} annotated differently than in an earlier block"),
                ))
            }
            Some(_) => {}
            None => {
                labels.insert(text.clone(), info);
            }
        }
        clusters.get_mut(cluster).expect("block opened").insert(text);
    }

    Ok(TaxonomyGraph::from_parts(labels, clusters, edges))
}
