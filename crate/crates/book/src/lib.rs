//! Runs the guide's code listings as doc-tests, one module per chapter so a
//! failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/words.md")]
mod words {}

#[doc = include_str!("../../../book/src/parsing.md")]
mod parsing {}

#[doc = include_str!("../../../book/src/learning.md")]
mod learning {}

#[doc = include_str!("../../../book/src/maintenance.md")]
mod maintenance {}

#[doc = include_str!("../../../book/src/corpora.md")]
mod corpora {}

#[doc = include_str!("../../../book/src/evaluation.md")]
mod evaluation {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}

#[doc = include_str!("../../../README.md")]
mod readme {}
