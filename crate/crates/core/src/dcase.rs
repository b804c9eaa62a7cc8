//! Embedded DCASE 2013–2018 label sets and the scripted initialization of
//! the taxonomy from them.
//!
//! Event sets are merged first, in publication order, each into a cluster of
//! its own with kind `event`. Scene sets follow into a separate graph with
//! kind `environment`. The two graphs are joined with a synonym-aware
//! [`union`], and the context seed is merged last. Every event label also
//! joins the `dcase events` cluster, every scene label `dcase scenes`, and
//! every context label `dcase context`.
//!
//! The same data ships as plain files under `data/`, so the run can be
//! repeated from files alone with [`DcaseData::from_dir`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cuts::{union, SubGraph};
use crate::framework::{merge_label_set, CurationReport};
use crate::graph::{SubsetKind, TaxonomyGraph};
use crate::io::parse_label_set;
use crate::label::{normalize_str, Label, RawLabel, RuleSet};
use crate::thesaurus::Thesaurus;

pub const EVENTS_CLUSTER: &str = "dcase events";
pub const SCENES_CLUSTER: &str = "dcase scenes";
pub const CONTEXT_CLUSTER: &str = "dcase context";

/// Clusters whose union is the first event stage.
pub const EV0_CLUSTERS: &[&str] = &["d13t2", "d16t2"];
/// Clusters whose union is the second event stage.
pub const EV1_CLUSTERS: &[&str] = &["d13t2", "d16t2", "d16t3 home"];

const THESAURUS_TOML: &str = include_str!("../data/thesaurus.toml");
const RECORDS_TOML: &str = include_str!("../data/records.toml");

const EMBEDDED: &[(&str, &str)] = &[
    ("sources.toml", include_str!("../data/dcase/sources.toml")),
    ("goldens.toml", include_str!("../data/dcase/goldens.toml")),
    ("context.txt", include_str!("../data/dcase/context.txt")),
    ("d13t2.txt", include_str!("../data/dcase/d13t2.txt")),
    ("d16t2.txt", include_str!("../data/dcase/d16t2.txt")),
    ("d16t3_home.txt", include_str!("../data/dcase/d16t3_home.txt")),
    (
        "d16t3_residential.txt",
        include_str!("../data/dcase/d16t3_residential.txt"),
    ),
    ("d17t3.txt", include_str!("../data/dcase/d17t3.txt")),
    ("d17t4.txt", include_str!("../data/dcase/d17t4.txt")),
    ("d18t4.txt", include_str!("../data/dcase/d18t4.txt")),
    ("d13t1.txt", include_str!("../data/dcase/d13t1.txt")),
    ("d16t1.txt", include_str!("../data/dcase/d16t1.txt")),
    ("d18t1.txt", include_str!("../data/dcase/d18t1.txt")),
];

/// The embedded DCASE thesaurus.
pub fn thesaurus() -> Thesaurus {
    Thesaurus::from_toml_str(THESAURUS_TOML).expect("embedded thesaurus is valid")
}

/// The embedded curation records.
pub fn rules() -> RuleSet {
    RuleSet::from_toml_str(RECORDS_TOML).expect("embedded records are valid")
}

/// Raw text of the embedded thesaurus and record files, for export.
pub fn embedded_files() -> impl Iterator<Item = (String, &'static str)> {
    [
        ("thesaurus.toml".to_string(), THESAURUS_TOML),
        ("records.toml".to_string(), RECORDS_TOML),
    ]
    .into_iter()
    .chain(EMBEDDED.iter().map(|(n, t)| (format!("dcase/{n}"), *t)))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DcaseError {
    #[error("cannot read {file}: {detail}")]
    Data { file: String, detail: String },
    #[error("stage {stage} differs from the expected set:\n{diff}")]
    GoldenMismatch { stage: String, diff: GoldenDiff },
    #[error(transparent)]
    Cut(#[from] crate::cuts::CutError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    Event,
    Scene,
}

/// One published label set, transcribed verbatim.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceLabelSet {
    /// `DxxTy`: challenge year and task number.
    pub id: String,
    /// Sub-task or remark, when one task published several lists.
    pub part: Option<String>,
    pub task: TaskKind,
    pub cluster: String,
    pub labels: Vec<RawLabel>,
}

/// True for `D` + two digits + `T` + one or more digits.
pub fn is_source_id(id: &str) -> bool {
    let b = id.as_bytes();
    b.len() >= 5
        && b[0] == b'D'
        && b[1].is_ascii_digit()
        && b[2].is_ascii_digit()
        && b[3] == b'T'
        && b[4..].iter().all(u8::is_ascii_digit)
}

#[derive(Deserialize)]
struct SourcesFile {
    context: String,
    #[serde(rename = "source")]
    sources: Vec<SourceEntry>,
}

#[derive(Deserialize)]
struct SourceEntry {
    id: String,
    #[serde(default)]
    part: Option<String>,
    task: TaskKind,
    cluster: String,
    file: String,
}

#[derive(Deserialize)]
struct GoldensFile {
    ev0: Vec<String>,
    ev1_additions: Vec<String>,
    t_events: Vec<String>,
    t_scenes: Vec<String>,
    c: Vec<String>,
}

/// Expected label sets, normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenSets {
    /// Atomized: compounds such as "door knock" are split.
    pub ev0: BTreeSet<String>,
    pub ev1: BTreeSet<String>,
    pub t_events: BTreeSet<String>,
    pub t_scenes: BTreeSet<String>,
    pub c: BTreeSet<String>,
    /// `t_events ∪ t_scenes ∪ c`.
    pub t: BTreeSet<String>,
}

pub const GOLDEN_SET_NAMES: [&str; 6] = ["ev0", "ev1", "t_events", "t_scenes", "c", "t"];

impl GoldenSets {
    fn from_file(file: GoldensFile) -> Result<Self, String> {
        let norm = |items: &[String]| -> Result<BTreeSet<String>, String> {
            items
                .iter()
                .map(|s| normalize_str(s).map(Label::into_text).map_err(|e| e.to_string()))
                .collect()
        };
        let ev0: BTreeSet<String> = norm(&file.ev0)?
            .iter()
            .flat_map(|t| t.split(' ').map(str::to_owned).collect::<Vec<_>>())
            .collect();
        let ev1 = ev0.union(&norm(&file.ev1_additions)?).cloned().collect();
        let t_events = norm(&file.t_events)?;
        let t_scenes = norm(&file.t_scenes)?;
        let c = norm(&file.c)?;
        let t = t_events.iter().chain(&t_scenes).chain(&c).cloned().collect();
        Ok(GoldenSets {
            ev0,
            ev1,
            t_events,
            t_scenes,
            c,
            t,
        })
    }

    pub fn get(&self, name: &str) -> Option<&BTreeSet<String>> {
        match name {
            "ev0" => Some(&self.ev0),
            "ev1" => Some(&self.ev1),
            "t_events" => Some(&self.t_events),
            "t_scenes" => Some(&self.t_scenes),
            "c" => Some(&self.c),
            "t" => Some(&self.t),
            _ => None,
        }
    }
}

/// Everything needed to run the initialization.
#[derive(Debug, Clone, PartialEq)]
pub struct DcaseData {
    pub sources: Vec<SourceLabelSet>,
    pub context: Vec<RawLabel>,
    pub goldens: GoldenSets,
}

impl DcaseData {
    pub fn embedded() -> Self {
        Self::load(|name| {
            EMBEDDED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| "not embedded".to_string())
        })
        .expect("embedded DCASE data is valid")
    }

    /// Loads `sources.toml`, `goldens.toml` and the files they name from a
    /// directory laid out like `data/dcase`.
    pub fn from_dir(dir: &Path) -> Result<Self, DcaseError> {
        Self::load(|name| std::fs::read_to_string(dir.join(name)).map_err(|e| e.to_string()))
    }

    fn load(read: impl Fn(&str) -> Result<String, String>) -> Result<Self, DcaseError> {
        let fail = |file: &str, detail: String| DcaseError::Data {
            file: file.to_owned(),
            detail,
        };
        let fetch = |file: &str| read(file).map_err(|e| fail(file, e));
        let raws = |file: &str| -> Result<Vec<RawLabel>, DcaseError> {
            parse_label_set(&fetch(file)?)
                .map_err(|e| fail(file, e.to_string()))?
                .into_iter()
                .map(|e| RawLabel::new(e.raw).map_err(|e| fail(file, e.to_string())))
                .collect()
        };

        let sources_file: SourcesFile =
            toml::from_str(&fetch("sources.toml")?).map_err(|e| fail("sources.toml", e.to_string()))?;
        let mut sources = Vec::new();
        for s in sources_file.sources {
            if !is_source_id(&s.id) {
                return Err(fail("sources.toml", format!("{:?} is not a DxxTy id", s.id)));
            }
            sources.push(SourceLabelSet {
                labels: raws(&s.file)?,
                id: s.id,
                part: s.part,
                task: s.task,
                cluster: s.cluster,
            });
        }
        let context = raws(&sources_file.context)?;

        let goldens_file: GoldensFile =
            toml::from_str(&fetch("goldens.toml")?).map_err(|e| fail("goldens.toml", e.to_string()))?;
        let goldens = GoldenSets::from_file(goldens_file).map_err(|e| fail("goldens.toml", e))?;

        Ok(DcaseData {
            sources,
            context,
            goldens,
        })
    }

    pub fn source(&self, cluster: &str) -> Option<&SourceLabelSet> {
        self.sources.iter().find(|s| s.cluster == cluster)
    }
}

/// Missing and extra labels of one set, both sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SetDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

impl SetDiff {
    pub fn between(expected: &BTreeSet<String>, actual: &BTreeSet<String>) -> Self {
        SetDiff {
            missing: expected.difference(actual).cloned().collect(),
            extra: actual.difference(expected).cloned().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Per-set differences; sets that match exactly are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GoldenDiff {
    pub sets: BTreeMap<String, SetDiff>,
}

impl GoldenDiff {
    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

impl fmt::Display for GoldenDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, d) in &self.sets {
            if !d.missing.is_empty() {
                writeln!(f, "{name} missing: {}", d.missing.join(", "))?;
            }
            if !d.extra.is_empty() {
                writeln!(f, "{name} extra: {}", d.extra.join(", "))?;
            }
        }
        Ok(())
    }
}

fn union_of_clusters(graph: &TaxonomyGraph, names: &[&str]) -> BTreeSet<String> {
    names
        .iter()
        .filter_map(|n| graph.cluster(n))
        .flatten()
        .cloned()
        .collect()
}

/// The graph's view of a named golden set.
pub fn actual_set(graph: &TaxonomyGraph, name: &str) -> Option<BTreeSet<String>> {
    Some(match name {
        "ev0" => union_of_clusters(graph, EV0_CLUSTERS),
        "ev1" => union_of_clusters(graph, EV1_CLUSTERS),
        "t_events" => graph.subset(SubsetKind::Event),
        "t_scenes" => graph.subset(SubsetKind::Environment),
        "c" => graph.subset(SubsetKind::Context),
        "t" => graph.label_texts(),
        _ => return None,
    })
}

/// Compares `graph` against every golden set.
pub fn golden_diff(graph: &TaxonomyGraph, golden: &GoldenSets) -> GoldenDiff {
    let mut diff = GoldenDiff::default();
    for name in GOLDEN_SET_NAMES {
        let actual = actual_set(graph, name).expect("known set name");
        let d = SetDiff::between(golden.get(name).expect("known set name"), &actual);
        if !d.is_empty() {
            diff.sets.insert(name.to_owned(), d);
        }
    }
    diff
}

fn check_stage(stage: &str, set: &str, graph: &TaxonomyGraph, golden: Option<&GoldenSets>) -> Result<(), DcaseError> {
    let Some(golden) = golden else { return Ok(()) };
    let d = SetDiff::between(golden.get(set).unwrap(), &actual_set(graph, set).unwrap());
    if d.is_empty() {
        Ok(())
    } else {
        let mut diff = GoldenDiff::default();
        diff.sets.insert(set.to_owned(), d);
        Err(DcaseError::GoldenMismatch {
            stage: stage.to_owned(),
            diff,
        })
    }
}

fn merge_task(
    data: &DcaseData,
    task: TaskKind,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
    report: &mut CurationReport,
    golden: Option<&GoldenSets>,
) -> Result<TaxonomyGraph, DcaseError> {
    let (kind, all_cluster) = match task {
        TaskKind::Event => (SubsetKind::Event, EVENTS_CLUSTER),
        TaskKind::Scene => (SubsetKind::Environment, SCENES_CLUSTER),
    };
    let kinds = BTreeSet::from([kind]);
    let mut graph = TaxonomyGraph::new();
    for source in data.sources.iter().filter(|s| s.task == task) {
        let (next, r) = merge_label_set(&graph, &source.labels, &source.cluster, &kinds, thesaurus, rules);
        graph = next;
        report.extend(r);
        if source.cluster == EV0_CLUSTERS[EV0_CLUSTERS.len() - 1] {
            check_stage(&source.cluster, "ev0", &graph, golden)?;
        }
        if source.cluster == EV1_CLUSTERS[EV1_CLUSTERS.len() - 1] {
            check_stage(&source.cluster, "ev1", &graph, golden)?;
        }
    }
    let members = graph.label_texts();
    for text in members {
        let label = Label::parse(&text).expect("graph labels are normalized");
        graph
            .insert_label(&label, all_cluster, &kinds, thesaurus)
            .expect("existing labels cannot collide");
    }
    Ok(graph)
}

fn run(
    data: &DcaseData,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
    golden: Option<&GoldenSets>,
) -> Result<(TaxonomyGraph, CurationReport), DcaseError> {
    let mut report = CurationReport::default();
    let events = merge_task(data, TaskKind::Event, thesaurus, rules, &mut report, golden)?;
    check_stage("events", "t_events", &events, golden)?;
    let scenes = merge_task(data, TaskKind::Scene, thesaurus, rules, &mut report, golden)?;
    check_stage("scenes", "t_scenes", &scenes, golden)?;

    let joined = union(&SubGraph::from(events), &SubGraph::from(scenes), thesaurus)?.into_graph();
    let (graph, r) = merge_label_set(
        &joined,
        &data.context,
        CONTEXT_CLUSTER,
        &BTreeSet::from([SubsetKind::Context]),
        thesaurus,
        rules,
    );
    report.extend(r);
    check_stage("context", "c", &graph, golden)?;
    check_stage("final", "t", &graph, golden)?;
    Ok((graph, report))
}

/// Builds the taxonomy from the embedded DCASE label sets.
pub fn init_dcase(thesaurus: &Thesaurus, rules: &RuleSet) -> (TaxonomyGraph, CurationReport) {
    init_from(&DcaseData::embedded(), thesaurus, rules)
}

/// Builds the taxonomy from arbitrary DCASE-shaped data.
pub fn init_from(data: &DcaseData, thesaurus: &Thesaurus, rules: &RuleSet) -> (TaxonomyGraph, CurationReport) {
    run(data, thesaurus, rules, None).expect("union of independently built graphs cannot conflict")
}

/// Like [`init_from`], but stops with [`DcaseError::GoldenMismatch`] at the
/// first stage whose output differs from the data's golden sets.
pub fn init_verified(
    data: &DcaseData,
    thesaurus: &Thesaurus,
    rules: &RuleSet,
) -> Result<(TaxonomyGraph, CurationReport), DcaseError> {
    run(data, thesaurus, rules, Some(&data.goldens))
}
