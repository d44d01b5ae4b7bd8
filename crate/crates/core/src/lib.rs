//! Factorization-method toolkit for one-dimensional Schrödinger operators.
//!
//! Darboux/Crum chains over exponential-sum seeds, KdV solitons and their
//! Ising lattice-gas reading, generalized coherent states, q-oscillators and
//! self-similar potentials, and discrete-time Toda maps of orthogonal
//! polynomial recurrences.

pub mod error;
pub mod numerics;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub mod oscillator;
pub mod darboux;
pub mod soliton;
pub mod ising;
pub mod coherent;
pub mod qalgebra;
pub mod ortho;
