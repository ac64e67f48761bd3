//! Truth degrees in `[0, 1]`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

/// A scalar usable as a truth degree.
///
/// Only ordering, `0`, `1`, `min` and `max` are needed by the logic; no
/// arithmetic is ever performed on degrees.
pub trait Degree:
    Copy + PartialOrd + Zero + One + Debug + Display + Send + Sync + 'static
{
    /// Parse a degree written as a decimal (`0.75`) or fraction (`3/4`).
    fn parse_degree(text: &str) -> Option<Self>;

    /// Lossy conversion used for JSON output and plotting.
    fn to_f64(self) -> f64;

    fn min_deg(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_deg(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `0 <= self <= 1`, rejecting NaN.
    fn in_unit_interval(self) -> bool {
        self >= Self::zero() && self <= Self::one()
    }

    /// `0 < self <= 1`, the admissible range for edge weights.
    fn is_positive_degree(self) -> bool {
        self > Self::zero() && self <= Self::one()
    }
}

/// Exact rational degrees.
pub type Rational = Ratio<i64>;

macro_rules! float_degree {
    ($t:ty) => {
        impl Degree for $t {
            fn parse_degree(text: &str) -> Option<Self> {
                let text = text.trim();
                if let Some((n, d)) = text.split_once('/') {
                    let n: $t = n.trim().parse().ok()?;
                    let d: $t = d.trim().parse().ok()?;
                    return if d == 0.0 { None } else { Some(n / d) };
                }
                text.parse().ok()
            }

            fn to_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

float_degree!(f32);
float_degree!(f64);

impl Degree for Rational {
    fn parse_degree(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.contains('/') {
            return Rational::from_str(text).ok();
        }
        if let Some(rest) = text.strip_prefix('-') {
            return Self::parse_degree(rest).map(|r| -r);
        }
        let (int, frac) = text.split_once('.').unwrap_or((text, ""));
        if frac.len() > 17 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let denom = 10i64.checked_pow(frac.len() as u32)?;
        let whole: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let part: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        let numer = whole.checked_mul(denom)?.checked_add(part)?;
        Some(Rational::new(numer, denom))
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

/// Minimum of a sequence of degrees; `1` for the empty sequence.
pub fn min_all<D: Degree>(degrees: impl IntoIterator<Item = D>) -> D {
    degrees.into_iter().fold(D::one(), D::min_deg)
}

/// Maximum of a sequence of degrees; `0` for the empty sequence.
pub fn max_all<D: Degree>(degrees: impl IntoIterator<Item = D>) -> D {
    degrees.into_iter().fold(D::zero(), D::max_deg)
}
