//! Denominators of Bernoulli polynomials and of all their derivatives,
//! computed from prime and base-p digit-sum conditions.
//!
//! * [`arith`]: digit sums, prime tables, radicals and squarefree products.
//! * [`denom`]: the denominator families for a single index.
//! * [`oracle`]: exact rational Bernoulli polynomials used as ground truth.
//! * [`scanner`]: parallel, resumable range scans and exceptional-set searches.
//! * [`verify`]: invariant suites behind `berndenom verify`.
//! * [`cli`]: the `berndenom` command line.

pub mod arith;
pub mod cli;
pub mod denom;
pub mod error;
pub mod oracle;
pub mod scanner;
pub mod verify;

pub use arith::{PrimeSieve, SquarefreeProduct};
pub use denom::DenomProfile;
pub use error::{Error, Result};
pub use oracle::RationalPolynomial;
