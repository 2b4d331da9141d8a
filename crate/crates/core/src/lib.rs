//! Exact computation of quasi-invariant polynomials of the symmetric group
//! over the rationals and over prime fields.

#![no_std]
extern crate alloc;

pub mod charp;
pub mod combinat;
pub mod exact;
pub mod hilbert;
pub mod linsolve;
pub mod multipoly;
pub mod quasi;
pub mod twisted;
