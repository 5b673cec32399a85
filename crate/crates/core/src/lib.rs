//! Canonical basis coefficients d_{λ,μ}(v) for the level-1 Fock space of
//! quantum affine sl_l, truncated to diagrams with at most k rows.
//!
//! Three independent algorithms compute the same family of vectors:
//!
//! * `llt`: ladder tableaux applied to the empty diagram, then triangular
//!   reduction (the original construction, kept as the oracle),
//! * `fast`: a case dispatch that restarts the tableau at a nearby weight
//!   with large isotropy, so the recursion stays shallow,
//! * `soergel`: the wall-crossing recursion for antispherical affine
//!   Kazhdan-Lusztig polynomials, evaluated through alcove geometry.
//!
//! Agreement of the three routes is the project's central correctness check;
//! see the `acceptance` integration test and the `cbt` command-line tool.
//!
//! Everything is exact integer arithmetic. The polynomial coefficient type
//! is generic over [`laurent::Coeff`]; the aliases below fix the default
//! instantiation used by the CLI and the tests.
//!
//! ```
//! use cbt_core::canonical::Mode;
//! use cbt_core::{Context, LaurentPoly, Partition, Session};
//!
//! let ctx = Context::new(2, 2)?;
//! let mut session = Session::new(ctx, Mode::Fast);
//!
//! let mu: Partition = "4".parse()?;
//! let g = session.gcb(&mu)?;
//! assert_eq!(g.coeff(&"3,1".parse()?), LaurentPoly::v());
//! assert_eq!(g.coeff(&"2,2".parse()?), LaurentPoly::zero());
//!
//! // The same coefficient through the alcove recursion:
//! let mut kl = cbt_core::KLSession::new(ctx);
//! assert_eq!(kl.n_poly(&"3,1".parse()?, &mu)?, LaurentPoly::v());
//! # Ok::<(), cbt_core::Error>(())
//! ```

pub mod alcove;
pub mod bench;
pub mod cache;
pub mod canonical;
pub mod fock;
pub mod kl;
pub mod laurent;
pub mod partition;
pub mod paths;
pub mod selftest;

use std::fmt;

pub use partition::{Context, Node, Partition, Residue};

/// Default coefficient scalar: overflow-checked signed 64-bit integers.
///
/// All ring operations abort loudly on overflow instead of wrapping; swap in
/// `num_bigint::BigInt` through the generic layer if a computation ever needs
/// more range.
pub type Int = i64;

/// Laurent polynomial in `v` over [`Int`].
pub type LaurentPoly = laurent::LaurentPolyOf<Int>;
/// Formal sum of diagrams with [`LaurentPoly`] coefficients.
pub type FockVector = fock::FockVectorOf<Int>;
/// Memoized canonical-basis session over [`Int`].
pub type Session = canonical::SessionOf<Int>;
/// Formal sum of alcoves with [`LaurentPoly`] coefficients.
pub type KLVector = kl::KLVectorOf<Int>;
/// Memoized Kazhdan-Lusztig session over [`Int`].
pub type KLSession = kl::KLSessionOf<Int>;

/// Errors surfaced by the library.
///
/// `Internal` marks a broken invariant (a bug), not bad input; the CLI maps
/// it to its own exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid (k, l) context parameters.
    BadContext(String),
    /// Malformed partition input (parse or construction).
    BadPartition(String),
    /// A diagram required to be l-regular is not.
    NotRegular { mu: Partition, l: u32 },
    /// A diagram has more rows than the truncation bound k.
    TooManyRows { mu: Partition, k: usize },
    /// Box decomposition requested for a diagram that is not interior.
    NotInterior(Partition),
    /// A point on a reflection hyperplane was passed where an open-alcove
    /// point is required.
    SingularPoint(Vec<i64>),
    /// Node addition that does not produce a diagram, or whose residue does
    /// not match.
    InvalidNodeAddition {
        mu: Partition,
        row: usize,
        residue: Residue,
    },
    /// Persistent cache I/O or format problem.
    Cache(String),
    /// Broken internal invariant.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadContext(msg) => write!(f, "invalid context: {msg}"),
            Error::BadPartition(msg) => write!(f, "invalid partition: {msg}"),
            Error::NotRegular { mu, l } => write!(f, "mu = {mu} is not {l}-regular"),
            Error::TooManyRows { mu, k } => write!(f, "mu = {mu} has more than {k} rows"),
            Error::NotInterior(mu) => write!(f, "{mu} is not interior"),
            Error::SingularPoint(x) => {
                write!(f, "point {x:?} is singular; use a_plus_of_point")
            }
            Error::InvalidNodeAddition { mu, row, residue } => write!(
                f,
                "cannot add a node of residue {residue} to {mu} in row {row}"
            ),
            Error::Cache(msg) => write!(f, "cache error: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Library result type.
pub type Result<T> = std::result::Result<T, Error>;
