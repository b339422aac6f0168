//! Closed-form solutions of Maxwell's equations on periodic domains.
//!
//! A periodic initial field is expanded in plane waves, each plane-wave
//! amplitude is split along the three eigenvectors of the curl, and every
//! eigen-direction then evolves by a pure phase. The result can be evaluated
//! exactly at any `(t, x, y, z)`.
//!
//! ```
//! use curlwave::{Complex64, Medium, Mode, ModalSolution, WaveVector};
//!
//! let w = WaveVector::new(0.0, 0.0, 1.0);
//! let a = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
//! let sol = ModalSolution::build(&[Mode::new(w, a)], Medium::unit(), [1.0; 3]).unwrap();
//! let f = sol.evaluate_point(0.0, &[0.0, 0.0, 0.0]);
//! assert!((f[1] - a[1]).norm() < 1e-15);
//! ```

pub mod error;
pub mod ingest;
pub mod propagator;
pub mod spectral;
pub mod validation;
pub mod vec3;

pub use error::{Error, Result};
pub use ingest::{FieldGrid, LatticeMode};
pub use num_complex::Complex64;
pub use propagator::{pack_fields, unpack_fields, BuildOptions, Medium, ModalSolution, Mode};
pub use spectral::{Branch, EigenSystem, ModalProjection, WaveVector};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/eigenbasis.md")]
    mod eigenbasis {}
    #[doc = include_str!("../../../book/src/propagation.md")]
    mod propagation {}
    #[doc = include_str!("../../../book/src/ingestion.md")]
    mod ingestion {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
