//! The guide's chapters, compiled as rustdoc so `cargo test` runs every
//! snippet in the book.
//!
//! mdbook cannot test snippets against a workspace crate, so each chapter is
//! pulled in as the docs of an empty module instead. One module per chapter
//! keeps doctest names traceable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/temporal-graphs.md")]
pub mod temporal_graphs {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/foremost-trees.md")]
pub mod foremost_trees {}

#[doc = include_str!("../../../book/src/thresholds.md")]
pub mod thresholds {}

#[doc = include_str!("../../../book/src/spanners.md")]
pub mod spanners {}

#[doc = include_str!("../../../book/src/gossip.md")]
pub mod gossip {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
