//! Doc-test harness for the guide in `book/`: every chapter is included
//! as a doc comment, so `cargo test` compiles and runs each of the book's
//! Rust code blocks against the current library. One module per chapter
//! to keep failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/corpus-model.md")]
pub mod corpus_model {}

#[doc = include_str!("../../../book/src/lexicons.md")]
pub mod lexicons {}

#[doc = include_str!("../../../book/src/features.md")]
pub mod features {}

#[doc = include_str!("../../../book/src/timeline.md")]
pub mod timeline {}

#[doc = include_str!("../../../book/src/statistics.md")]
pub mod statistics {}

#[doc = include_str!("../../../book/src/groups.md")]
pub mod groups {}

#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}

#[doc = include_str!("../../../book/src/synthetic-storms.md")]
pub mod synthetic_storms {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
