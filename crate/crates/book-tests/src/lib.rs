//! Compiles the guide chapters as doc-tests, so every listing in `book/`
//! builds and runs against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/replicator.md")]
pub mod replicator {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/interfaces.md")]
pub mod interfaces {}

#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
