//! Inputs shared by the benchmarks.

use puiseux_core::dsl::{parse_problem, Problem};

pub const WORKED: &str = include_str!("../../../problems/worked.pf");
pub const ALGEBRAIC: &str = include_str!("../../../problems/algebraic.pf");

pub fn problem(src: &str) -> Problem {
    parse_problem(src).expect("bundled problem parses")
}
