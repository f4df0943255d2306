//! Classification of concrete operators against subnormal-type classes.
//!
//! Three kinds of operators are supported: dense complex matrices, unilateral
//! weighted shifts with eventually periodic weights, and finite sections of
//! block Toeplitz operators with trigonometric-polynomial symbols. Every
//! verdict carries a certificate that can be re-checked from the input.
//!
//! ```
//! use opclass::rational::ratio;
//! use opclass::shift::{self, WeightSequence};
//!
//! let w = WeightSequence::with_constant_tail(vec![ratio(1, 2), ratio(3, 4)], ratio(1, 1))?;
//! assert!(shift::is_n_subnormal_shift(&w, 2)?.holds);
//! assert!(!shift::is_subnormal_shift(&w).holds);
//! # Ok::<(), opclass::Error>(())
//! ```

pub mod analyze;
pub mod certificate;
pub mod classes;
pub mod error;
pub mod extensions;
pub mod io;
pub mod linalg;
pub mod rational;
pub mod registry;
pub mod report;
pub mod sample;
pub mod shift;
pub mod toeplitz;

pub use error::{Error, Result};
