//! Spec files, dataset sweeps, design search, and report shapes backing the
//! `qoc` command-line tool.

pub mod design;
pub mod report;
pub mod spec;
pub mod sweep;
pub mod table;
