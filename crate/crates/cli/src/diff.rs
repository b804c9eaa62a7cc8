//! Line-oriented structural comparison of two graphs.

use std::collections::{BTreeMap, BTreeSet};

use taxograph::graph::LabelInfo;
use taxograph::TaxonomyGraph;

fn describe(info: &LabelInfo) -> String {
    let kinds: Vec<&str> = info.kinds.iter().map(|k| k.as_str()).collect();
    match info.tag {
        Some(tag) => format!("{} {}", kinds.join(","), tag.as_str()),
        None => kinds.join(","),
    }
}

fn weight(w: Option<f64>) -> String {
    w.map_or_else(|| "unweighted".to_owned(), |w| w.to_string())
}

/// One line per difference: `-` only in `a`, `+` only in `b`, `~` changed.
/// Empty when the graphs are equal.
pub fn diff(a: &TaxonomyGraph, b: &TaxonomyGraph) -> Vec<String> {
    let mut out = Vec::new();

    let la: BTreeMap<&str, &LabelInfo> = a.labels().collect();
    let lb: BTreeMap<&str, &LabelInfo> = b.labels().collect();
    for (text, info) in &la {
        match lb.get(text) {
            None => out.push(format!("- label {text:?}")),
            Some(other) if other != info => {
                out.push(format!("~ label {text:?}: {} -> {}", describe(info), describe(other)))
            }
            Some(_) => {}
        }
    }
    for text in lb.keys().filter(|t| !la.contains_key(*t)) {
        out.push(format!("+ label {text:?}"));
    }

    let ca: BTreeMap<&str, &BTreeSet<String>> = a.clusters().collect();
    let cb: BTreeMap<&str, &BTreeSet<String>> = b.clusters().collect();
    for (name, members) in &ca {
        match cb.get(name) {
            None => out.push(format!("- cluster {name:?}")),
            Some(other) => {
                let gone: Vec<&str> = members.difference(other).map(String::as_str).collect();
                let new: Vec<&str> = other.difference(members).map(String::as_str).collect();
                if !gone.is_empty() || !new.is_empty() {
                    out.push(format!(
                        "~ cluster {name:?}: -[{}] +[{}]",
                        gone.join(", "),
                        new.join(", ")
                    ));
                }
            }
        }
    }
    for name in cb.keys().filter(|n| !ca.contains_key(*n)) {
        out.push(format!("+ cluster {name:?}"));
    }

    let ea: BTreeMap<(String, String), Option<f64>> = a.cross_edges().map(|e| ((e.a, e.b), e.weight)).collect();
    let eb: BTreeMap<(String, String), Option<f64>> = b.cross_edges().map(|e| ((e.a, e.b), e.weight)).collect();
    for ((x, y), w) in &ea {
        match eb.get(&(x.clone(), y.clone())) {
            None => out.push(format!("- edge {x:?} {y:?}")),
            Some(other) if other != w => out.push(format!("~ edge {x:?} {y:?}: {} -> {}", weight(*w), weight(*other))),
            Some(_) => {}
        }
    }
    for (x, y) in eb.keys().filter(|k| !ea.contains_key(*k)) {
        out.push(format!("+ edge {x:?} {y:?}"));
    }
    out
}
