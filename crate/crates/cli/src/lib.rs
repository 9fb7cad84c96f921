//! Scenario configuration and execution pipeline behind the `gridwave`
//! binary. The library surface exists so the integration and acceptance
//! suites can drive the exact preset experiments the binary ships.

// validation guards use `!(x > 0.0)` on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod pipeline;
pub mod scenario;
