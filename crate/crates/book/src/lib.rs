/*!
The chapters of the guide in `book/`, compiled as documentation so that every
Rust snippet in them runs under `cargo test`.

This crate has no code of its own. Build the readable version with
`mdbook build book`.
*/

// Each module is just a chapter. Keep this list in the order of
// `book/src/SUMMARY.md`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/regions.md")]
pub mod regions {}

#[doc = include_str!("../../../book/src/equilibria.md")]
pub mod equilibria {}

#[doc = include_str!("../../../book/src/calibration.md")]
pub mod calibration {}

#[doc = include_str!("../../../book/src/schedules.md")]
pub mod schedules {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/analysis.md")]
pub mod analysis {}

#[doc = include_str!("../../../book/src/scenarios.md")]
pub mod scenarios {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

// The README's quick start is checked the same way.
#[doc = include_str!("../../../README.md")]
pub mod readme {}
