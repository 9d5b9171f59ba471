//! Newton and Hodge polygon data for Hilbert modular eigenforms.
//!
//! * [`polygon`]: exact semiring of slope multisets and the `P`, `P′` families.
//! * [`galois`]: permutation-group invariants (orbit lengths, slopes, bisection).
//! * [`numberfield`]: prime splitting, `k(p)` and ordinariness.
//! * [`satotate`]: the semicircle measure and the tail constants `c(k, t)`.
//! * [`pipeline`]: ingestion, per-prime analysis and guarantee classification.
//! * [`cli`]: the `ordprimes` command-line front end.

pub mod cli;
pub mod galois;
pub mod numberfield;
pub mod pipeline;
pub mod polygon;
pub mod satotate;
pub mod util;

pub use galois::{PermGroupAction, Permutation};
pub use numberfield::{FieldElement, IntPolynomial};
pub use polygon::{p_family, p_prime_family, Rational, SlopeMultiset};
