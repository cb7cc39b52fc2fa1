//! Exact first-cohomology vanishing for line bundles on K3 and Enriques
//! surfaces, decided from lattice data alone.
//!
//! Start from a [`surface::SurfaceContext`] (Gram matrix, ample class,
//! surface kind) and call [`vanishing::classify_h1`] on a
//! [`surface::LineBundleClass`].

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod lattice;
pub mod oracle;
pub mod roots;
pub mod surface;
pub mod vanishing;
