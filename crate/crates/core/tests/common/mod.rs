#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use taxograph::graph::{IssueCode, SubsetKind, TaxonomyGraph};
use taxograph::{Label, Tag, Thesaurus};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_kinds(rng: &mut TestRng) -> BTreeSet<SubsetKind> {
    loop {
        let kinds: BTreeSet<SubsetKind> = SubsetKind::ALL.into_iter().filter(|_| rng.random_bool(0.4)).collect();
        if !kinds.is_empty() {
            return kinds;
        }
    }
}

pub fn random_tag(rng: &mut TestRng) -> Option<Tag> {
    *[None, Some(Tag::Object), Some(Tag::Action)].choose(rng).unwrap()
}

/// Label pool for small random graphs: single and two-token terms.
pub fn pool() -> Vec<String> {
    (0..40)
        .map(|i| {
            if i % 7 == 3 {
                format!("w{i} x{i}")
            } else {
                format!("w{i}")
            }
        })
        .collect()
}

/// Synonyms among the pool: w0 ~ w1 ~ w2, w10 ~ w11, w20 ~ w21 ~ w22.
pub fn pool_thesaurus() -> Thesaurus {
    Thesaurus::from_toml_str(
        r#"
[[synset]]
preferred = "w0"
variants = ["w1", "w2"]

[[synset]]
preferred = "w10"
variants = ["w11"]

[[synset]]
preferred = "w20"
variants = ["w21", "w22"]
"#,
    )
    .unwrap()
}

/// A valid random graph with at most `max_labels` labels, built through
/// `insert_label` so every label is in preferred form.
pub fn random_graph(rng: &mut TestRng, max_labels: usize, thesaurus: &Thesaurus) -> TaxonomyGraph {
    let pool = pool();
    let n = rng.random_range(0..=max_labels);
    let clusters: Vec<String> = (0..rng.random_range(1..=6)).map(|i| format!("k{i}")).collect();
    let mut g = TaxonomyGraph::new();
    for _ in 0..n * 2 {
        if g.len() >= n {
            break;
        }
        let text = pool.choose(rng).unwrap();
        let label = Label::parse(text).unwrap().with_tag(random_tag(rng));
        let kinds = random_kinds(rng);
        let homes = rng.random_range(1..=2);
        for _ in 0..homes {
            g.insert_label(&label, clusters.choose(rng).unwrap(), &kinds, thesaurus)
                .unwrap();
        }
    }
    let texts: Vec<String> = g.label_texts().into_iter().collect();
    if texts.len() >= 2 {
        for _ in 0..rng.random_range(0..=texts.len()) {
            let a = texts.choose(rng).unwrap();
            let b = texts.choose(rng).unwrap();
            let weight = match rng.random_range(0..3) {
                0 => None,
                1 => Some(rng.random_range(0..4) as f64),
                _ => Some(rng.random::<f64>() * 5.0),
            };
            let _ = g.add_cross_edge(a, b, weight);
        }
    }
    g
}

pub fn error_codes(g: &TaxonomyGraph, th: &Thesaurus) -> Vec<IssueCode> {
    g.validate(th)
        .into_iter()
        .filter(|i| i.is_error())
        .map(|i| i.code)
        .collect()
}

/// All-pairs shortest paths by Floyd–Warshall over an explicit adjacency
/// matrix built from cluster co-membership and cross edges.
pub fn floyd_warshall(
    g: &TaxonomyGraph,
    edge_cost: impl Fn(Option<f64>) -> u64,
) -> (Vec<String>, Vec<Vec<Option<u64>>>) {
    let names: Vec<String> = g.label_texts().into_iter().collect();
    let idx: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let n = names.len();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    let relax = |d: &mut Vec<Vec<Option<u64>>>, i: usize, j: usize, c: u64| {
        if d[i][j].is_none_or(|x| c < x) {
            d[i][j] = Some(c);
            d[j][i] = Some(c);
        }
    };
    for (_, members) in g.clusters() {
        let m: Vec<usize> = members.iter().map(|t| idx[t.as_str()]).collect();
        for &i in &m {
            for &j in &m {
                if i != j {
                    relax(&mut d, i, j, 1);
                }
            }
        }
    }
    for e in g.cross_edges() {
        relax(&mut d, idx[e.a.as_str()], idx[e.b.as_str()], edge_cost(e.weight));
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|x| a + b < x) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    (names, d)
}
