//! Fixtures, strategies, brute-force oracles and property checks shared by the
//! property suite and the acceptance target.
#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;
pub mod props;
pub mod strategies;
