//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod closure;
pub mod freudenthal;
pub mod hensel;
