//! twistzero: additively twisted L-functions of integral- and half-integral-
//! weight cusp forms, their real-valued critical-line functions Z_f and Z_g,
//! sign-change zero detection, and the Hardy-Littlewood window experiment.

pub mod arith;
pub mod cli;
pub mod hlharness;
pub mod lfun;
pub mod qseries;
pub mod quad;
pub mod specfun;
pub mod zeros;
