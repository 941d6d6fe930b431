//! The guide's chapters, compiled so that `cargo test` runs every snippet.
//!
//! mdbook cannot link snippets against a workspace crate, so each chapter is
//! pulled in as the docs of an empty module and rustdoc does the rest. One
//! module per chapter keeps failures traceable to a file.

#[doc = include_str!("../../../book/src/index.md")]
pub mod index {}
#[doc = include_str!("../../../book/src/routes.md")]
pub mod routes {}
#[doc = include_str!("../../../book/src/single-integral.md")]
pub mod single_integral {}
#[doc = include_str!("../../../book/src/double-integral.md")]
pub mod double_integral {}
#[doc = include_str!("../../../book/src/lerch.md")]
pub mod lerch {}
#[doc = include_str!("../../../book/src/properties.md")]
pub mod properties {}
#[doc = include_str!("../../../book/src/quadrature.md")]
pub mod quadrature {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
