//! Command-line front end for `specfam`: an operator gallery, Matrix Market
//! I/O, and a verification battery that reports every check as JSON.

pub mod error;
pub mod gallery;
pub mod market;
pub mod report;
pub mod verify;
