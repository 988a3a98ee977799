//! The guide under `book/` cannot see workspace crates from `mdbook test`,
//! so its chapters are pulled in here and checked by `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/scalars.md")]
pub mod scalars {}
#[doc = include_str!("../../../book/src/bimodules.md")]
pub mod bimodules {}
#[doc = include_str!("../../../book/src/complexes.md")]
pub mod complexes {}
#[doc = include_str!("../../../book/src/traces.md")]
pub mod traces {}
#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}
#[doc = include_str!("../../../book/src/serre.md")]
pub mod serre {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
