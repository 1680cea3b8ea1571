//! Numerics for the PT-symmetric cross-stitch lattice.
//!
//! The crate covers the Bloch band structure and its phase classification
//! ([`bands`]), the finite open chain and its non-Hermitian spectrum
//! ([`spectra`]), two-lead transmission through the bordered scattering
//! system ([`transport`]) and the Fano-lattice rewriting of the chain
//! ([`fano`]). Everything is `no_std` with `alloc`. The `std` feature switches
//! `thiserror` and `num-complex` to their std builds, which adds
//! `std::error::Error` impls.
//!
//! ```
//! use crossstitch_core::{bands, spectra, transport, Complex64, FiniteLattice, LatticeParams, LeadParams};
//!
//! let p = LatticeParams::new(1.0, 1.0, 0.0, 1.0)?;
//! let edges = bands::band_edges(&p);
//! assert!(edges.gap().is_some());
//! let chain = FiniteLattice::new(100, p)?;
//! assert_eq!(spectra::eigenvalues(&chain, 1e-10)?.len(), 200);
//! let lead = LeadParams::new(10.0, 1.0)?;
//! let sol = transport::solve_scattering(&chain, &lead, Complex64::new(0.5, 0.0))?;
//! assert!(sol.transmission >= 0.0 && sol.reflection >= 0.0);
//! # Ok::<(), crossstitch_core::Error>(())
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
// NaN must fail tolerance checks, which `!(x <= tol)` expresses directly.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod bands;
pub mod error;
pub mod fano;
pub mod linalg;
pub mod params;
pub mod spectra;
pub mod transport;

mod real;

pub use num_complex::Complex64;

/// Crate version, recorded in run metadata by front ends.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use params::{FiniteLattice, LatticeParams, LeadParams};

/// Complex on-site or band energy `re + i im`.
pub type ComplexEnergy = Complex64;
