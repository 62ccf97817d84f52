//! Floating-point abstraction shared by the numeric stages.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar used for z-scores, edge weights, modularity, PageRank, TF-IDF
/// scores and classification metrics. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for configuration constants.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("integer count is representable in every Real")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Rounds to 6 decimals the same way the exporters print, so a value that went
/// through a file and one that stayed in memory are bit-identical.
pub fn round6(v: f64) -> f64 {
    format!("{v:.6}").parse().unwrap_or(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round6_matches_printed_value() {
        for v in [0.1234565, 1.0 / 3.0, 2.0_f64.ln() * 4.0, 0.0, 1e-9] {
            let r = round6(v);
            assert_eq!(format!("{r:.6}"), format!("{v:.6}"));
            assert_eq!(round6(r), r);
        }
    }

    #[test]
    fn conversions() {
        assert_eq!(<f32 as Real>::of(0.5), 0.5f32);
        assert_eq!(<f64 as Real>::from_count(7), 7.0);
    }
}
