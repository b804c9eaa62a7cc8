mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use taxograph::cuts::Combine;
use taxograph::dcase;
use taxograph::io::{export_edges, import_edges, read_document, write_document};
use taxograph::label::{is_normalized, normalize_str};
use taxograph::{cut, decompose, intersect, union, CutSelector, Label, RuleSet, SubGraph, SubsetKind, TaxonomyGraph};

use common::{error_codes, floyd_warshall, pool_thesaurus, random_graph, rng};

fn graph_strategy(max_labels: usize) -> impl Strategy<Value = TaxonomyGraph> {
    any::<u64>().prop_map(move |seed| random_graph(&mut rng(seed), max_labels, &pool_thesaurus()))
}

fn sub(g: &TaxonomyGraph) -> SubGraph {
    SubGraph::from(g.clone())
}

proptest! {
    #[test]
    fn normalize_is_idempotent(raw in "\\PC{0,40}") {
        if let Ok(once) = normalize_str(&raw) {
            prop_assert!(is_normalized(once.text()));
            let twice = normalize_str(once.text()).unwrap();
            prop_assert_eq!(twice.text(), once.text());
        }
    }

    #[test]
    fn normalize_ignores_case_and_separators(words in prop::collection::vec("[a-z0-9]{1,6}", 1..5), sep in "[ _/,-]{1,3}") {
        let plain = words.join(" ");
        let noisy = words.join(&sep).to_uppercase();
        prop_assert_eq!(normalize_str(&noisy).unwrap().into_text(), plain);
    }

    #[test]
    fn decompose_splits_into_tokens(words in prop::collection::vec("[a-z]{1,6}", 1..5)) {
        let label = Label::parse(&words.join(" ")).unwrap();
        let atoms = decompose(&label, &RuleSet::new());
        let texts: Vec<&str> = atoms.iter().map(|a| a.text()).collect();
        prop_assert_eq!(texts.join(" "), label.text());
        for atom in &atoms {
            let again = decompose(atom, &RuleSet::new());
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!(again[0].text(), atom.text());
        }
    }

    #[test]
    fn decompose_keeps_exceptions_whole(prefix in "[a-z]{1,5}", suffix in "[a-z]{1,5}") {
        let rules = RuleSet::from_toml_str("exceptions = [\"public space\"]").unwrap();
        let label = Label::parse(&format!("{prefix} public space {suffix}")).unwrap();
        let atoms: Vec<String> = decompose(&label, &rules).into_iter().map(Label::into_text).collect();
        prop_assert!(atoms.iter().any(|a| a == "public space"));
        prop_assert_eq!(atoms.join(" "), label.text());
    }

    #[test]
    fn inserted_graphs_validate(g in graph_strategy(30)) {
        prop_assert_eq!(error_codes(&g, &pool_thesaurus()), vec![]);
    }

    #[test]
    fn cut_is_monotone(g in graph_strategy(30), kinds in prop::collection::btree_set(0usize..3, 1..3)) {
        let kinds: Vec<SubsetKind> = kinds.into_iter().map(|i| SubsetKind::ALL[i]).collect();
        let narrow = CutSelector::new().kind(kinds[0]);
        let mut wide = narrow.clone();
        for k in &kinds[1..] {
            wide = wide.kind(*k);
        }
        let small = cut(&g, &narrow).unwrap().label_texts();
        let big = cut(&g, &wide).unwrap().label_texts();
        prop_assert!(small.is_subset(&big));
        prop_assert!(big.is_subset(&g.label_texts()));

        // In intersection mode another criterion group can only narrow.
        if let Some((name, _)) = g.clusters().next() {
            let both = wide.clone().cluster(name).mode(Combine::Intersection);
            let both = cut(&g, &both).unwrap().label_texts();
            prop_assert!(both.is_subset(&big));
        }
    }

    #[test]
    fn full_cut_is_identity(g in graph_strategy(30)) {
        let everything = cut(&g, &CutSelector::everything(&g)).unwrap();
        prop_assert_eq!(everything.into_graph(), g);
    }

    #[test]
    fn set_algebra_laws(a in graph_strategy(20), b in graph_strategy(20), c in graph_strategy(20)) {
        let th = pool_thesaurus();
        let (a, b, c) = (sub(&a), sub(&b), sub(&c));
        let u = |x: &SubGraph, y: &SubGraph| union(x, y, &th).unwrap();
        let i = |x: &SubGraph, y: &SubGraph| intersect(x, y, &th).unwrap();
        let ab = u(&a, &b);
        prop_assert_eq!(ab.graph().clone(), u(&b, &a).into_graph());
        prop_assert_eq!(u(&ab, &c).into_graph(), u(&a, &u(&b, &c)).into_graph());
        prop_assert_eq!(u(&a, &a).into_graph(), a.graph().clone());

        let iab = i(&a, &b);
        prop_assert_eq!(iab.graph().clone(), i(&b, &a).into_graph());
        prop_assert_eq!(i(&iab, &c).into_graph(), i(&a, &i(&b, &c)).into_graph());
        prop_assert_eq!(i(&a, &a).into_graph(), a.graph().clone());
        prop_assert!(iab.label_texts().is_subset(&ab.label_texts()));
        prop_assert_eq!(error_codes(&ab, &th), vec![]);
        prop_assert_eq!(error_codes(&iab, &th), vec![]);
    }

    #[test]
    fn cluster_cuts_reconstruct_labels(g in graph_strategy(30), split in any::<u64>()) {
        let names: Vec<String> = g.clusters().map(|(n, _)| n.to_owned()).collect();
        prop_assume!(!names.is_empty());
        let (left, right): (Vec<_>, Vec<_>) =
            names.iter().enumerate().partition(|(i, _)| split >> (i % 64) & 1 == 1);
        let th = pool_thesaurus();
        let mut acc = SubGraph::empty();
        for part in [left, right] {
            if part.is_empty() {
                continue;
            }
            let selector = part.into_iter().fold(CutSelector::new(), |s, (_, n)| s.cluster(n.clone()));
            acc = union(&acc, &cut(&g, &selector).unwrap(), &th).unwrap();
        }
        prop_assert_eq!(acc.label_texts(), g.label_texts());
    }

    #[test]
    fn formats_round_trip(g in graph_strategy(30)) {
        let doc = write_document(&g, &["origin".to_owned()]);
        let (back, provenance) = read_document(&doc).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(provenance, vec!["origin".to_owned()]);
        prop_assert_eq!(write_document(&back, &["origin".to_owned()]), doc);

        let edges = export_edges(&g).unwrap();
        let back = import_edges(&edges).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(export_edges(&back).unwrap(), edges);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_matches_oracle(g in graph_strategy(30)) {
        let (names, weighted) = floyd_warshall(&g, |w| w.map_or(1, |w| w.ceil() as u64));
        let (_, hops) = floyd_warshall(&g, |_| 1);
        for (i, a) in names.iter().enumerate() {
            for (j, b) in names.iter().enumerate() {
                prop_assert_eq!(g.distance(a, b).unwrap(), weighted[i][j]);
                prop_assert_eq!(g.hop_distance(a, b).unwrap(), hops[i][j]);
                prop_assert_eq!(g.distance(a, b).unwrap(), g.distance(b, a).unwrap());
            }
        }
    }
}

#[test]
fn are_synonyms_is_an_equivalence_on_bundled_terms() {
    let th = dcase::thesaurus();
    let terms: Vec<Label> = th.terms().map(|t| Label::parse(t).unwrap()).collect();
    for a in &terms {
        assert!(th.are_synonyms(a, a));
        assert_eq!(th.resolve(&th.resolve(a)).text(), th.resolve(a).text());
        for b in &terms {
            assert_eq!(th.are_synonyms(a, b), th.are_synonyms(b, a));
            for c in &terms {
                if th.are_synonyms(a, b) && th.are_synonyms(b, c) {
                    assert!(th.are_synonyms(a, c), "{a:?} {b:?} {c:?}");
                }
            }
        }
    }
}

#[test]
fn bundled_rules_and_thesaurus_round_trip() {
    let th = dcase::thesaurus();
    assert_eq!(taxograph::Thesaurus::from_toml_str(&th.to_toml_string()).unwrap(), th);
    let rules = dcase::rules();
    assert_eq!(RuleSet::from_toml_str(&rules.to_toml_string()).unwrap(), rules);
    let exceptions: BTreeSet<&str> = rules.exceptions.iter().map(String::as_str).collect();
    assert!(exceptions.contains("public space"));
}
