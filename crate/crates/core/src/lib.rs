//! An extensible cluster-graph taxonomy for open-set sound scene labels.
//!
//! Labels from many datasets are normalized, resolved against a thesaurus,
//! decomposed into atoms and merged into one superset without duplicates.
//! Each source label set stays available as a cluster, every label carries
//! one or more subset kinds (environment, event, context), and the whole
//! graph can be cut into standalone task-specific label sets.
//!
//! ```
//! use taxograph::{dcase, cuts, SubsetKind};
//!
//! let (graph, _report) = dcase::init_dcase(&dcase::thesaurus(), &dcase::rules());
//! let context = cuts::cut(&graph, &cuts::CutSelector::new().kind(SubsetKind::Context)).unwrap();
//! assert_eq!(cuts::export_label_vector(&context), ["meeting", "office", "shopping"]);
//! ```

pub mod cuts;
pub mod dcase;
pub mod framework;
pub mod graph;
pub mod io;
pub mod label;
pub mod thesaurus;

pub use cuts::{cut, export_label_vector, intersect, union, CutSelector, SubGraph};
pub use framework::{merge_label_set, process_label, CurationReport};
pub use graph::{InsertOutcome, SubsetKind, TaxonomyGraph, ValidationIssue};
pub use label::{decompose, normalize, Label, RawLabel, RuleSet, Tag};
pub use thesaurus::{Synset, Thesaurus};
