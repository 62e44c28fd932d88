//! Mean distance of random points in convex bodies.
//!
//! This crate holds the numerical kernels and is `no_std` (it needs `alloc`).
//! The companion `meandist` crate adds threads, file formats and the CLI.
//!
//! The central quantity is the mean distance `Δ(K) = E|X₁ − X₂|` of two
//! independent uniform points in a convex body `K ⊂ ℝ^d`, compared against the
//! first intrinsic volume `V₁(K)`. For every convex body
//!
//! ```text
//! (3d+1) / (2(d+1)(2d+1))  <  Δ(K) / V₁(K)  <  1/3
//! ```
//!
//! and both ends are approached by degenerating families (see [`extremal`]).
//! The one-dimensional reduction behind the bounds lives in [`profiles`].
//!
//! | module | contents |
//! |--------|----------|
//! | [`bodies`] | convex body model, support/width/chord/volume |
//! | [`sampling`] | seeded uniform samplers on bodies and spheres |
//! | [`meandist`] | Monte Carlo and chord estimators, closed-form catalog, Sylvester `p(4,K)` |
//! | [`intrinsic`] | mean width, `V₁`, the ratio `Δ/V₁` |
//! | [`profiles`] | concave-root densities on `[-1,1]`, the functional `I(h)`, rearrangement, optimizers |
//! | [`extremal`] | `K_δ`, `K'_δ`, bound constants, limit verification |

#![no_std]

extern crate alloc;

pub mod bodies;
pub mod error;
pub mod exec;
pub mod extremal;
pub mod intrinsic;
pub mod linalg;
pub mod meandist;
pub mod profiles;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod stats;

pub use bodies::{BodyKind, ConvexBody};
pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use stats::{Estimate, Method};
