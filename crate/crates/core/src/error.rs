use core::fmt;

/// Errors surfaced by the geometric operations and oracles.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The (θ, φ) chart is singular at the requested point (h₃ = 0).
    ChartSingular,
    /// The point lies outside the causal shadow x ≥ |y| of the base point.
    OutsideCausalShadow,
    /// A root-finder failed; carries the best residual reached. This signals
    /// solver failure, never a geometric statement about the target.
    NoConvergence { best_residual: f64 },
    /// The (t₁, t₂) pair does not satisfy the strict cone inclusion needed
    /// to close a periodic trajectory; carries the signed cone defect.
    NotAdmissible { defect: f64 },
    /// The reachability planner exhausted its search.
    PlanFailure { attempts: u32 },
    /// Finite differences lost too much precision (step-halving disagreement).
    IllConditioned,
    /// A control violates the causal cone beyond tolerance.
    NotCausal { defect: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ChartSingular => write!(f, "chart is singular: sin(phi)*sinh(theta) = 0"),
            Error::OutsideCausalShadow => write!(f, "point lies outside the causal shadow x >= |y|"),
            Error::NoConvergence { best_residual } => {
                write!(f, "root-finding did not converge (best residual {best_residual:e})")
            }
            Error::NotAdmissible { defect } => {
                write!(f, "segment endpoint misses the chord cone (defect {defect:e})")
            }
            Error::PlanFailure { attempts } => {
                write!(f, "reachability search exhausted after {attempts} attempts")
            }
            Error::IllConditioned => write!(f, "finite differences are ill-conditioned"),
            Error::NotCausal { defect } => {
                write!(f, "control violates the causal cone (defect {defect:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
