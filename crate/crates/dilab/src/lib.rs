//! Growth rates of weighted graphs and digraphs, and the constrained
//! minimizations behind lower bounds on braid dilatations.

pub mod casework;
pub mod cli;
pub mod digraph;
pub mod exppoly;
pub mod foldcalc;
pub mod wgraph;
