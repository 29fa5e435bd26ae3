//! Row-constrained supersaturated designs for pooled high-throughput screening.
//!
//! The crate covers the whole pipeline of a pooled screen:
//!
//! * [`design`] and [`criterion`]: pooling designs over `{-1, +1}` with at most
//!   `c` compounds per well, and the exact integer UE(s²) criterion;
//! * [`construct`]: coordinate-exchange search with fast exchange tests and
//!   rank-2 updates, multi-start orchestration and constraint sweeps;
//! * [`bounds`]: lower bounds for designs whose rows are all full;
//! * [`analyze`]: the Lasso-based hit-calling pipeline;
//! * [`baselines`]: one-compound-one-well screening and shifted transversal
//!   pooling with its combinatorial decoder;
//! * [`sim`]: response simulation and method-comparison studies.
//!
//! ```
//! use crows::construct::{construct, ConstructConfig};
//! use crows::bounds::theorem1_bound;
//!
//! let built = construct(&ConstructConfig::new(4, 4, 1).starts(20).seed(7)).unwrap();
//! assert_eq!(built.best.q(), theorem1_bound(4, 4, 1).unwrap().q_lb);
//! ```

pub mod analyze;
pub mod baselines;
pub mod bounds;
pub mod construct;
pub mod criterion;
pub mod design;
pub mod dist;
mod error;
pub mod io;
pub mod seed;
pub mod sim;

pub use criterion::{build_state, CriterionState, UeValue};
pub use design::{row_slack, Design, SlackProfile};
pub use error::{Error, Result, Violation};

/// Direction of the effect a screen is looking for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Positive,
    Negative,
}

impl Direction {
    /// `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Positive => 1.0,
            Direction::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Positive => Direction::Negative,
            Direction::Negative => Direction::Positive,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "positive" | "pos" | "+" => Ok(Direction::Positive),
            "negative" | "neg" | "-" => Ok(Direction::Negative),
            other => Err(Error::Parameter(format!("unknown direction {other:?}"))),
        }
    }
}
