// Each test binary uses a different subset of these helpers.
#![allow(dead_code)]

pub mod goals;
pub mod semantics;
pub mod ted_oracle;
