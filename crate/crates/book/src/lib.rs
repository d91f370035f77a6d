//! Code listings of the guide, compiled and run as doc-tests.
//!
//! One module per chapter so a failing listing points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}
#[doc = include_str!("../../../book/src/convergence.md")]
pub mod convergence {}
#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}
#[doc = include_str!("../../../book/src/fitting.md")]
pub mod fitting {}
#[doc = include_str!("../../../book/src/steps.md")]
pub mod steps {}
#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
