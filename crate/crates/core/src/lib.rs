//! Exact computations in the quantized nilpotent algebra `U`, its restricted
//! dual `A`, Feigin homomorphisms into quantum tori, q-exponential group-like
//! elements, transition maps between reduced words, extremal vectors and
//! congruence invariants of skew forms.

pub mod bialgebra;
pub mod cartan;
pub mod error;
pub mod extremal;
pub mod feigin;
pub mod linalg;
pub mod scalars;
pub mod skewform;
pub mod torus;
pub mod transition;
pub mod typea;

pub use error::{Error, Result};
pub use scalars::{Poly, RatFun};
