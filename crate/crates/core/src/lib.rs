//! Numerical toolkit for the complex analogue of Hoeffding's exponential bound.
//!
//! For a complex random variable `Z` whose support has diameter at most `d`,
//! `|E e^{Z - E Z} - 1| <= e^{d^2/8} - 1`. This crate evaluates the tight
//! extremal function `G(d)`, searches the two- and three-point extremal
//! families, locates the critical diameter `d0` below which `Re E e^Z >= 0`,
//! decomposes finite distributions into zero-mean pieces on at most three
//! points, and samples and traces the attainable-value regions `S_d`.
//!
//! All random variables are finite-support [`FiniteDistribution`]s and every
//! expectation is an exact finite sum.

pub mod bounds;
pub mod caratheodory;
pub mod complex_dist;
pub mod error;
pub mod exec;
pub mod families;
pub mod geometry;
pub mod qmc;
pub mod regions;
pub mod search;
pub mod verify;

pub use complex_dist::{mix, Atom, ComplexValue, Disk, FiniteDistribution};
pub use error::{Error, Result};
