//! Exact, machine-checked toolkit for Z3 constraint satisfaction: Fourier
//! analysis over Z3, gadget reductions, dictator tests and the long-code
//! reduction from Label Cover to 4NAT.

pub mod commands;
pub mod csp;
pub mod cyclo;
pub mod dictator;
pub mod error;
pub mod fourier;
pub mod gadgets;
pub mod io;
pub mod longcode;
pub mod predicates;
pub mod rational;
pub mod report;
pub mod z3;
