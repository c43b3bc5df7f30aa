//! Exact combinatorial machinery for extended affine Weyl groups:
//! cyclotomic scalar arithmetic, Coxeter element arithmetic with
//! Iwahori-Matsumoto lengths, finite-order conjugacy classes with
//! elliptic anchors, finite-group character tables, the nonabelian
//! Fourier transform on M(Gamma), and the class functions built from
//! all of the above.
//!
//! Everything is computed over exact rationals; there is no floating
//! point anywhere in this crate.

pub mod charformula;
pub mod coxeter;
pub mod fourier;
pub mod groups;
pub mod linalg;
pub mod par;
pub mod scalar;
pub mod torus;
