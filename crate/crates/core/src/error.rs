use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::convex::Direction;
use crate::minkowski::MinkowskiSolution;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone)]
pub enum Error {
    /// The body has empty interior or is unbounded.
    DegenerateBody(String),
    DimensionMismatch { expected: usize, found: usize },
    /// A direction set or measure support fails to span the ambient space.
    NonSpanning { dim: usize, rank: usize },
    InvalidInput(String),
    /// The solver ran out of iterations. The best iterate is attached.
    NoConvergence(Box<MinkowskiSolution>),
    /// Surface area measures are not supported on the same direction set.
    SupportMismatch {
        only_first: Vec<Direction>,
        only_second: Vec<Direction>,
    },
    TooManyGenerators { count: usize, cap: usize },
    InterpolationIllConditioned(String),
    /// A decomposition invariant failed, usually because a pair of
    /// directions sits close to the orthogonality threshold.
    InconsistentDecomposition {
        reason: String,
        pair: Option<(Direction, Direction)>,
    },
}

fn write_dirs(f: &mut fmt::Formatter<'_>, dirs: &[Direction]) -> fmt::Result {
    f.write_str("[")?;
    for (i, d) in dirs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{d}")?;
    }
    f.write_str("]")
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateBody(why) => write!(f, "degenerate body: {why}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonSpanning { dim, rank } => {
                write!(f, "directions span a {rank}-dimensional subspace of R^{dim}")
            }
            Error::InvalidInput(why) => write!(f, "invalid input: {why}"),
            Error::NoConvergence(sol) => write!(
                f,
                "Minkowski solver did not converge after {} iterations (residual {:e})",
                sol.iterations, sol.residual
            ),
            Error::SupportMismatch {
                only_first,
                only_second,
            } => {
                f.write_str("surface area measures have different supports; only in first: ")?;
                write_dirs(f, only_first)?;
                f.write_str(", only in second: ")?;
                write_dirs(f, only_second)
            }
            Error::TooManyGenerators { count, cap } => {
                write!(f, "{count} generators exceeds the cap of {cap}")
            }
            Error::InterpolationIllConditioned(why) => {
                write!(f, "mixed measure interpolation ill-conditioned: {why}")
            }
            Error::InconsistentDecomposition { reason, pair } => {
                write!(f, "inconsistent decomposition: {reason}")?;
                if let Some((v, u)) = pair {
                    write!(f, " (near-orthogonal pair {v} / {u})")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for Error {}
