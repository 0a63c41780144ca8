//! Oracles shared by the integration tests.
#![allow(dead_code)]

pub mod heat;
pub mod weights;
