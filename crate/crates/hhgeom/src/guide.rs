//! The user guide, chapter by chapter.
//!
//! Each module embeds one chapter of the rendered book (`book/` at the
//! repository root), so every code block in the guide compiles and runs as
//! a documentation test: the book cannot drift from the API.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/bodies.md")]
pub mod bodies {}

#[doc = include_str!("../../../book/src/sections.md")]
pub mod sections {}

#[doc = include_str!("../../../book/src/symmetrization.md")]
pub mod symmetrization {}

#[doc = include_str!("../../../book/src/inequalities.md")]
pub mod inequalities {}

#[doc = include_str!("../../../book/src/means.md")]
pub mod means {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
