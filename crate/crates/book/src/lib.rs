//! The guide's chapters, compiled as doc-tests so their snippets stay current.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/u-mean.md")]
pub mod u_mean {}

#[doc = include_str!("../../../book/src/confidence-intervals.md")]
pub mod confidence_intervals {}

#[doc = include_str!("../../../book/src/distributions.md")]
pub mod distributions {}

#[doc = include_str!("../../../book/src/calibration.md")]
pub mod calibration {}

#[doc = include_str!("../../../book/src/restricted-prediction.md")]
pub mod restricted_prediction {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
