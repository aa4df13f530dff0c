//! Polynomial and Dirichlet functors over finite sets, made executable.
//!
//! A bundle `π: E -> B` of finite sets determines two functors on finite
//! sets: the polynomial `P(X) = Σ_b X^{E_b}` and the Dirichlet
//! `D(X) = Σ_b E_b^X`. This crate materializes both on skeletal finite
//! sets, together with the structures that make their theory checkable by
//! exhaustive computation: five presentations of the Dirichlet extent,
//! bundle maps in covariant and contravariant flavors, the
//! vertical/cartesian factorization, the adjoint sextuple over the walking
//! arrow, exact cardinality series, and a verification suite that sweeps
//! every claim over a small corpus.
//!
//! Everything is deterministic and exact: sets are sizes, elements are
//! canonical integer codes, and every enumeration has a documented total
//! order.

pub mod bundle;
pub mod equivalence;
pub mod error;
pub mod finset;
pub mod functor;
pub mod series;
pub mod verify;

pub use bundle::{Bundle, BundleMap, ContraBundleMap};
pub use error::{Error, Result};
pub use finset::{FinFunction, FinSet, DEFAULT_ENUM_CAP};
pub use functor::{DirMethod, NatTransform};
pub use series::{CardinalitySeries, SeriesKind};
pub use verify::{CheckOutcome, VerifyConfig};
