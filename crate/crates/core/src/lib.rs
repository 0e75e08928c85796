//! Causal-set event quantification, the pair-valued process calculus, and the
//! Feynman checkerboard model of the 1+1 dimensional Dirac equation.

pub mod checkerboard;
pub mod numfmt;
pub mod poset;
pub mod proc_calc;
pub mod seqlang;
pub mod sequences;
pub mod suite;

pub use proc_calc::Amplitude;
