//! The guide chapters from `book/src`, included here so that their code
//! blocks run as doc-tests and stay in sync with the library.
//!
//! Build the rendered book with `mdbook build book` from the repository
//! root; run the snippets with `cargo test --doc`.

#[doc = include_str!("../../../book/src/overview.md")]
pub mod overview {}

#[doc = include_str!("../../../book/src/first-integral.md")]
pub mod first_integral {}

#[doc = include_str!("../../../book/src/quadrature.md")]
pub mod quadrature {}

#[doc = include_str!("../../../book/src/profiles.md")]
pub mod profiles {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/prescribed.md")]
pub mod prescribed {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
