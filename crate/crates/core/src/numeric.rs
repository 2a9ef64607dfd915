//! Exact ratio helpers and half-up rendering at a fixed number of decimals.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// `num / den` as an exact, reduced ratio. `den` must be non-zero.
pub fn ratio(num: u64, den: u64) -> Ratio<u64> {
    Ratio::new(num, den)
}

pub fn to_f64(r: &Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Renders `r` with `places` decimals, rounding half away from zero using exact arithmetic.
pub fn fixed(r: &Ratio<u64>, places: u32) -> String {
    let scale = 10u128.pow(places);
    let num = *r.numer() as u128 * scale;
    let den = *r.denom() as u128;
    let mut q = num / den;
    if 2 * (num % den) >= den {
        q += 1;
    }
    if places == 0 {
        return q.to_string();
    }
    let int = q / scale;
    let frac = q % scale;
    format!("{int}.{frac:0width$}", width = places as usize)
}

/// Same as [`fixed`] but for an optional value; absent values render as an empty cell.
pub fn fixed_opt(r: Option<&Ratio<u64>>, places: u32) -> String {
    r.map(|r| fixed(r, places)).unwrap_or_default()
}

/// Percentage `part / whole * 100` as an exact ratio. `None` when `whole` is zero.
pub fn percentage(part: u64, whole: u64) -> Option<Ratio<u64>> {
    (whole > 0).then(|| Ratio::new(part * 100, whole))
}

/// Serialized form of an exact ratio: numerator, denominator and the nearest double.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub num: u64,
    pub den: u64,
    pub value: f64,
}

impl From<&Ratio<u64>> for ExactValue {
    fn from(r: &Ratio<u64>) -> Self {
        ExactValue {
            num: *r.numer(),
            den: *r.denom(),
            value: to_f64(r),
        }
    }
}

impl ExactValue {
    pub fn ratio(&self) -> Ratio<u64> {
        Ratio::new(self.num, self.den)
    }
}
