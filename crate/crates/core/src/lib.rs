//! Synthesis of strategies that let one agent mimic another agent acting in a
//! separate dynamic domain, by reduction to two-player games on graphs.

pub mod automata;
pub mod batch;
pub mod cli;
pub mod domains;
pub mod games;
pub mod ltlf;
pub mod oracle;
pub mod qbf;
pub mod reductions;
