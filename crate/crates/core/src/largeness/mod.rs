//! Largeness relative to a Π⁰₃ sentence: apartness, certificates, search,
//! minimal intervals and the constructive extractors.

use std::fmt;
use std::sync::Arc;

use crate::formula::{Pi03Sentence, Theta};

pub mod apart;
pub mod certificate;
pub mod extract;
pub mod minimal;
pub mod search;

pub use apart::{apart_u64, apart_values, t_apart, ApartTable};
pub use certificate::{
    certificate_from_values, verify_certificate, Block, Certificate, ValueBlock, ValueTree,
};
pub use extract::{decompose_mixed, fuse, pigeonhole_extract, PigeonholeOutcome, PigeonholeRoute};
pub use minimal::{
    is_minimal, max_of_minimal, minimal_interval_size, minimal_large_interval, Magnitude,
};
pub use search::{check_large, is_large, search_registry, LargenessSearch, Mode, Searcher};

/// `ω^exponent·multiplier`-largeness relative to `theta`.
#[derive(Clone)]
pub struct LargenessSpec {
    pub exponent: usize,
    pub multiplier: usize,
    pub theta: Arc<dyn Theta>,
}

impl LargenessSpec {
    pub fn new(exponent: usize, multiplier: usize, theta: Arc<dyn Theta>) -> Self {
        LargenessSpec {
            exponent,
            multiplier,
            theta,
        }
    }

    /// Plain largeness (θ ≡ true).
    pub fn plain(exponent: usize, multiplier: usize) -> Self {
        Self::new(exponent, multiplier, Arc::new(Pi03Sentence::top()))
    }

    pub fn with_exponent(&self, exponent: usize) -> Self {
        Self::new(exponent, self.multiplier, self.theta.clone())
    }

    pub fn with_multiplier(&self, multiplier: usize) -> Self {
        Self::new(self.exponent, multiplier, self.theta.clone())
    }
}

impl fmt::Debug for LargenessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ω^{}·{}-large({})",
            self.exponent,
            self.multiplier,
            self.theta.describe()
        )
    }
}
