//! Hyperbolic potential theory on the unit ball `B^n`, `n >= 3`.
//!
//! The crate provides Möbius self-maps of the ball, the Poisson–Szegő kernel
//! and the invariant Green function of the hyperbolic Laplacian, quadrature on
//! the sphere and the ball, the potentials `P_h[phi]` and `G_h[psi]`, the
//! representation `u = P_h[phi] - G_h[psi]` of solutions of
//! `Delta_h u = psi`, explicit Lipschitz constants, and the planar
//! counterexample showing the `n >= 3` restriction is needed.

pub mod analysis;
pub mod config;
pub mod error;
pub mod fd;
pub mod fields;
pub mod geometry;
pub mod grid;
pub mod kernels;
pub mod output;
pub mod potentials;
pub mod quadrature;
pub mod sampling;
pub mod specialfn;
pub mod verify;

pub use error::{HyperError, Result};
pub use geometry::{BallPoint, SpherePoint};
