//! `taxograph`: build, extend, slice and exchange label taxonomies.

mod diff;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use taxograph::cuts::Combine;
use taxograph::dcase::{self, DcaseData, DcaseError};
use taxograph::framework::{merge_entries, LabelSetEntry};
use taxograph::io::{export_edges, import_edges, parse_label_set, read_document, write_document, FormatError};
use taxograph::{
    cut, export_label_vector, union, CurationReport, CutSelector, RuleSet, SubGraph, SubsetKind, Tag, TaxonomyGraph,
    Thesaurus,
};

#[derive(Parser)]
#[command(
    name = "taxograph",
    version,
    about = "Curate and slice cluster-graph label taxonomies"
)]
struct Cli {
    /// Thesaurus file (TOML). Defaults to the bundled DCASE thesaurus.
    #[arg(long, global = true, env = "TAXOGRAPH_THESAURUS", value_name = "PATH")]
    thesaurus: Option<PathBuf>,

    /// Curation-record file (TOML). Defaults to the bundled DCASE records.
    #[arg(long, global = true, value_name = "PATH")]
    records: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Serialization for written graphs.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Edges,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Union,
    Intersection,
}

#[derive(Subcommand)]
enum Command {
    /// Build the taxonomy from the DCASE label sets and check it against the expected sets.
    Init {
        /// Use the DCASE label sets (the only built-in source).
        #[arg(long, required = true)]
        dcase: bool,
        /// Directory with sources.toml and goldens.toml instead of the bundled data.
        #[arg(long, value_name = "DIR")]
        data: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Add one raw label to a cluster.
    Add {
        label: String,
        #[arg(long)]
        cluster: String,
        #[arg(long = "kind", required = true)]
        kinds: Vec<SubsetKind>,
        #[arg(long)]
        tag: Option<Tag>,
        /// Graph to extend. Defaults to the initialized DCASE taxonomy.
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Merge a label-set file (one raw label per line) into a cluster.
    Merge {
        file: PathBuf,
        #[arg(long)]
        cluster: String,
        #[arg(long = "kind", required = true)]
        kinds: Vec<SubsetKind>,
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Cut a sub-taxonomy by subset kind, cluster or label.
    Cut {
        #[arg(long = "kind")]
        kinds: Vec<SubsetKind>,
        #[arg(long = "cluster")]
        clusters: Vec<String>,
        #[arg(long = "label")]
        labels: Vec<String>,
        #[arg(long, value_enum, default_value_t = Mode::Union)]
        mode: Mode,
        /// Print the label vector instead of a document.
        #[arg(long)]
        vector: bool,
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Synonym-aware union of two graphs.
    Union {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Check every invariant; exits 1 if any error is found.
    Validate { file: PathBuf },
    /// Convert a graph to the edge-list format.
    ExportEdges {
        file: PathBuf,
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Convert an edge list to a JSON document.
    ImportEdges {
        file: PathBuf,
        #[arg(long, short, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Compare two graphs; exits 1 if they differ.
    Diff { a: PathBuf, b: PathBuf },
    /// Print the label vector of a graph.
    Vector { file: PathBuf },
}

enum Failure {
    Invalid(String),
    Parse(String),
    Golden(String),
    Usage(String),
    Read(String),
    Write(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Golden(_) => 3,
            Failure::Usage(_) => 64,
            Failure::Read(_) => 66,
            Failure::Write(_) => 73,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m)
            | Failure::Parse(m)
            | Failure::Golden(m)
            | Failure::Usage(m)
            | Failure::Read(m)
            | Failure::Write(m) => m,
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("taxograph: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Read(format!("{}: {e}", path.display())))
}

fn format_failure(path: &Path, e: FormatError) -> Failure {
    match e {
        FormatError::InvalidGraph(issues) => Failure::Invalid(format!(
            "{}: {}",
            path.display(),
            issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        )),
        e => Failure::Parse(format!("{}: {e}", path.display())),
    }
}

fn load_thesaurus(path: Option<&Path>) -> Result<Thesaurus, Failure> {
    match path {
        None => Ok(dcase::thesaurus()),
        Some(p) => Thesaurus::from_toml_str(&read(p)?).map_err(|e| Failure::Parse(format!("{}: {e}", p.display()))),
    }
}

fn load_rules(path: Option<&Path>) -> Result<RuleSet, Failure> {
    match path {
        None => Ok(dcase::rules()),
        Some(p) => RuleSet::from_toml_str(&read(p)?).map_err(|e| Failure::Parse(format!("{}: {e}", p.display()))),
    }
}

/// Reads a graph in either format along with its provenance notes.
fn load_graph(path: &Path) -> Result<(TaxonomyGraph, Vec<String>), Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        read_document(&text).map_err(|e| format_failure(path, e))
    } else {
        let graph = import_edges(&text).map_err(|e| format_failure(path, e))?;
        Ok((graph, vec![format!("imported from {}", path.display())]))
    }
}

/// Loads a graph that later steps rely on being valid.
fn load_valid(path: &Path, th: &Thesaurus) -> Result<(TaxonomyGraph, Vec<String>), Failure> {
    let (graph, provenance) = load_graph(path)?;
    let errors: Vec<String> = graph
        .validate(th)
        .into_iter()
        .filter(|i| i.is_error())
        .map(|i| i.to_string())
        .collect();
    if errors.is_empty() {
        Ok((graph, provenance))
    } else {
        Err(Failure::Invalid(format!("{}: {}", path.display(), errors.join("; "))))
    }
}

fn base_graph(path: Option<&Path>, th: &Thesaurus, rules: &RuleSet) -> Result<(TaxonomyGraph, Vec<String>), Failure> {
    match path {
        Some(p) => load_valid(p, th),
        None => Ok((dcase::init_dcase(th, rules).0, vec!["init dcase".to_owned()])),
    }
}

/// Refuses to overwrite any input with the output.
fn guard_inputs(out: Option<&Path>, inputs: &[Option<&Path>]) -> Result<(), Failure> {
    let Some(out) = out.and_then(|o| fs::canonicalize(o).ok()) else {
        return Ok(());
    };
    for input in inputs.iter().flatten() {
        if fs::canonicalize(input).is_ok_and(|i| i == out) {
            return Err(Failure::Usage(format!(
                "refusing to overwrite input file {}",
                input.display()
            )));
        }
    }
    Ok(())
}

fn write_text(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Write(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Write(format!("standard output: {e}"))),
    }
}

fn emit(output: &Output, graph: &TaxonomyGraph, provenance: &[String]) -> Result<(), Failure> {
    let text = match output.format {
        Format::Json => write_document(graph, provenance),
        Format::Edges => export_edges(graph).map_err(|e| Failure::Invalid(e.to_string()))?,
    };
    write_text(output.out.as_deref(), &text)
}

/// Reports go to standard output when the document goes to a file, and to
/// standard error otherwise so the document stays machine-readable.
fn print_report(output: &Output, report: &CurationReport) {
    if output.out.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
}

/// The vocabulary every subcommand curates against.
struct Vocabulary {
    thesaurus: Thesaurus,
    rules: RuleSet,
}

struct Merge<'a> {
    graph: Option<&'a Path>,
    cluster: &'a str,
    kinds: &'a [SubsetKind],
    output: &'a Output,
    note: String,
}

fn merge_into(m: Merge<'_>, entries: &[LabelSetEntry], vocab: &Vocabulary) -> Outcome {
    let (th, rules) = (&vocab.thesaurus, &vocab.rules);
    let Merge {
        graph,
        cluster,
        kinds,
        output,
        note,
    } = m;
    let (base, mut provenance) = base_graph(graph, th, rules)?;
    let kinds: BTreeSet<SubsetKind> = kinds.iter().copied().collect();
    let (next, report) = merge_entries(&base, entries, cluster, &kinds, th, rules);
    provenance.push(note);
    emit(output, &next, &provenance)?;
    print_report(output, &report);
    Ok(if report.summary().errors > 0 { 1 } else { 0 })
}

fn run(cli: Cli) -> Outcome {
    let vocab = Vocabulary {
        thesaurus: load_thesaurus(cli.thesaurus.as_deref())?,
        rules: load_rules(cli.records.as_deref())?,
    };
    let (th, rules) = (&vocab.thesaurus, &vocab.rules);

    match cli.command {
        Command::Init { dcase: _, data, output } => {
            let data = match &data {
                Some(dir) => DcaseData::from_dir(dir).map_err(|e| Failure::Parse(e.to_string()))?,
                None => DcaseData::embedded(),
            };
            match dcase::init_verified(&data, th, rules) {
                Ok((graph, report)) => {
                    emit(&output, &graph, &["init dcase".to_owned()])?;
                    print_report(&output, &report);
                    Ok(0)
                }
                Err(e @ DcaseError::GoldenMismatch { .. }) => Err(Failure::Golden(e.to_string())),
                Err(e @ DcaseError::Data { .. }) => Err(Failure::Parse(e.to_string())),
                Err(e) => Err(Failure::Invalid(e.to_string())),
            }
        }

        Command::Add {
            label,
            cluster,
            kinds,
            tag,
            graph,
            output,
        } => {
            guard_inputs(output.out.as_deref(), &[graph.as_deref()])?;
            let entry = LabelSetEntry {
                tag,
                ..LabelSetEntry::plain(label.clone())
            };
            let note = format!("add {label:?} to {cluster}");
            let m = Merge {
                graph: graph.as_deref(),
                cluster: &cluster,
                kinds: &kinds,
                output: &output,
                note,
            };
            merge_into(m, &[entry], &vocab)
        }

        Command::Merge {
            file,
            cluster,
            kinds,
            graph,
            output,
        } => {
            guard_inputs(output.out.as_deref(), &[Some(&file), graph.as_deref()])?;
            let entries = parse_label_set(&read(&file)?).map_err(|e| format_failure(&file, e))?;
            let note = format!("merge {} into {cluster}", file.display());
            let m = Merge {
                graph: graph.as_deref(),
                cluster: &cluster,
                kinds: &kinds,
                output: &output,
                note,
            };
            merge_into(m, &entries, &vocab)
        }

        Command::Cut {
            kinds,
            clusters,
            labels,
            mode,
            vector,
            graph,
            output,
        } => {
            guard_inputs(output.out.as_deref(), &[graph.as_deref()])?;
            let mut selector = CutSelector::new().mode(match mode {
                Mode::Union => Combine::Union,
                Mode::Intersection => Combine::Intersection,
            });
            selector.kinds.extend(kinds);
            selector.clusters.extend(clusters);
            selector.labels.extend(labels);
            if selector.is_empty() {
                return Err(Failure::Usage(
                    "cut needs at least one --kind, --cluster or --label".into(),
                ));
            }
            let (base, mut provenance) = base_graph(graph.as_deref(), th, rules)?;
            let sub = cut(&base, &selector).map_err(|e| Failure::Invalid(e.to_string()))?;
            if vector {
                let mut text = export_label_vector(&sub).join("\n");
                if !text.is_empty() {
                    text.push('\n');
                }
                write_text(output.out.as_deref(), &text)?;
            } else {
                provenance.push(format!("cut {selector}"));
                emit(&output, &sub, &provenance)?;
            }
            Ok(0)
        }

        Command::Union { a, b, output } => {
            guard_inputs(output.out.as_deref(), &[Some(&a), Some(&b)])?;
            let (ga, pa) = load_valid(&a, th)?;
            let (gb, pb) = load_valid(&b, th)?;
            let joined =
                union(&SubGraph::from(ga), &SubGraph::from(gb), th).map_err(|e| Failure::Invalid(e.to_string()))?;
            let mut provenance = pa;
            provenance.extend(pb);
            provenance.push(format!("union {} {}", a.display(), b.display()));
            emit(&output, &joined, &provenance)?;
            Ok(0)
        }

        Command::Validate { file } => {
            let (graph, _) = load_graph(&file)?;
            let issues = graph.validate(th);
            let errors = issues.iter().filter(|i| i.is_error()).count();
            for issue in &issues {
                println!("{issue}");
            }
            println!(
                "# labels={} clusters={} errors={errors} warnings={}",
                graph.len(),
                graph.clusters().count(),
                issues.len() - errors
            );
            Ok(if errors > 0 { 1 } else { 0 })
        }

        Command::ExportEdges { file, out } => {
            guard_inputs(out.as_deref(), &[Some(&file)])?;
            let (graph, _) = load_graph(&file)?;
            let text = export_edges(&graph).map_err(|e| format_failure(&file, e))?;
            write_text(out.as_deref(), &text)?;
            Ok(0)
        }

        Command::ImportEdges { file, out } => {
            guard_inputs(out.as_deref(), &[Some(&file)])?;
            let graph = import_edges(&read(&file)?).map_err(|e| format_failure(&file, e))?;
            let text = write_document(&graph, &[format!("imported from {}", file.display())]);
            write_text(out.as_deref(), &text)?;
            Ok(0)
        }

        Command::Diff { a, b } => {
            let (ga, _) = load_graph(&a)?;
            let (gb, _) = load_graph(&b)?;
            let lines = diff::diff(&ga, &gb);
            for line in &lines {
                println!("{line}");
            }
            Ok(if lines.is_empty() { 0 } else { 1 })
        }

        Command::Vector { file } => {
            let (graph, _) = load_graph(&file)?;
            for text in export_label_vector(&graph) {
                println!("{text}");
            }
            Ok(0)
        }
    }
}
