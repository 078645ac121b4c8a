//! Exact toolkit for Okounkov polygons on surfaces: Zariski
//! decompositions, BKS chambers, Minkowski bases and chambers, generator
//! sets for global Okounkov body cones, and the lift to threefolds whose
//! effective divisors are nef. All arithmetic is rational and exact.

pub mod body;
pub mod cone;
pub mod error;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod minkowski;
pub mod polygon;
pub mod surface;
pub mod svg;
pub mod threefold;
pub mod zariski;

#[cfg(test)]
pub(crate) mod testutil;
