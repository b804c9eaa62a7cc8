//! The guide in `book/` cannot run its snippets against this workspace by
//! itself, so each chapter is included here as a module doc and `cargo test`
//! runs the snippets as doc tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/labels.md")]
pub mod labels {}
#[doc = include_str!("../../../book/src/thesaurus.md")]
pub mod thesaurus {}
#[doc = include_str!("../../../book/src/graph.md")]
pub mod graph {}
#[doc = include_str!("../../../book/src/framework.md")]
pub mod framework {}
#[doc = include_str!("../../../book/src/cuts.md")]
pub mod cuts {}
#[doc = include_str!("../../../book/src/dcase.md")]
pub mod dcase {}
#[doc = include_str!("../../../book/src/formats.md")]
pub mod formats {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
