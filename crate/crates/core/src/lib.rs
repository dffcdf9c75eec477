//! Exact computations around rational forms of semisimple Lie algebras and
//! their representations.

pub mod exactfield;
pub mod linalg;
pub mod rootsys;
pub mod chevalley;
pub mod repbuild;
pub mod rationality;
pub mod classify;
