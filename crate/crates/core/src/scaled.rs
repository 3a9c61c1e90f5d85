//! Exact dyadic lengths.
//!
//! A [`ScaledDistance`] stores `value · 4^{-unit_exponent}` with an integer
//! value. Two distances are only compared after both are rescaled to the finer
//! of the two exponents, which is always exact.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Multiplies `value` by `4^shift`.
fn scale_up(value: u64, shift: u32) -> u64 {
    value
        .checked_mul(4u64.checked_pow(shift).expect("unit exponent overflow"))
        .expect("scaled distance overflow")
}

/// A nonnegative length `value · 4^{-unit_exponent}`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledDistance {
    pub value: u64,
    pub unit_exponent: u32,
}

impl ScaledDistance {
    pub const fn new(value: u64, unit_exponent: u32) -> Self {
        Self {
            value,
            unit_exponent,
        }
    }

    pub const fn zero(unit_exponent: u32) -> Self {
        Self::new(0, unit_exponent)
    }

    /// `4^{-k}` expressed in units of `4^{-unit_exponent}`; requires `k <= unit_exponent`.
    pub fn power_of_quarter(k: u32, unit_exponent: u32) -> Self {
        assert!(k <= unit_exponent, "4^-{k} is not integral at exponent {unit_exponent}");
        Self::new(4u64.pow(unit_exponent - k), unit_exponent)
    }

    /// Re-expresses the distance at a finer (or equal) unit exponent.
    pub fn rescale(self, unit_exponent: u32) -> Self {
        assert!(
            unit_exponent >= self.unit_exponent,
            "cannot coarsen {self} to exponent {unit_exponent}"
        );
        Self::new(
            scale_up(self.value, unit_exponent - self.unit_exponent),
            unit_exponent,
        )
    }

    /// Halves the length by moving one exponent finer.
    pub fn half(self) -> Self {
        Self::new(self.value * 2, self.unit_exponent + 1)
    }

    pub fn double(self) -> Self {
        Self::new(self.value * 2, self.unit_exponent)
    }

    /// Smallest exponent at which the value is still an integer.
    pub fn normalized(self) -> Self {
        let mut out = self;
        while out.unit_exponent > 0 && out.value.is_multiple_of(4) {
            out.value /= 4;
            out.unit_exponent -= 1;
        }
        if out.value == 0 {
            out.unit_exponent = 0;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn to_f64(self) -> f64 {
        self.value as f64 / 4f64.powi(self.unit_exponent as i32)
    }

    fn common(self, other: Self) -> (u64, u64, u32) {
        let k = self.unit_exponent.max(other.unit_exponent);
        (self.rescale(k).value, other.rescale(k).value, k)
    }
}

impl std::ops::Add for ScaledDistance {
    type Output = ScaledDistance;

    fn add(self, rhs: Self) -> Self {
        let (a, b, k) = self.common(rhs);
        Self::new(a + b, k)
    }
}

impl PartialEq for ScaledDistance {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ScaledDistance {}

impl PartialOrd for ScaledDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScaledDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.common(*other);
        a.cmp(&b)
    }
}

impl fmt::Display for ScaledDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·4^-{}", self.value, self.unit_exponent)
    }
}

#[derive(Serialize)]
struct ScaledOut {
    value: u64,
    unit_exponent: u32,
    decimal: f64,
}

#[derive(Deserialize)]
struct ScaledIn {
    value: u64,
    unit_exponent: u32,
}

// `decimal` is written for convenience and ignored on input.
impl Serialize for ScaledDistance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScaledOut {
            value: self.value,
            unit_exponent: self.unit_exponent,
            decimal: self.to_f64(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ScaledDistance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ScaledIn::deserialize(deserializer)?;
        Ok(Self::new(raw.value, raw.unit_exponent))
    }
}

/// A signed length `value · 4^{-unit_exponent}`, the range of a difference function.
#[derive(Debug, Clone, Copy)]
pub struct SignedDistance {
    pub value: i64,
    pub unit_exponent: u32,
}

impl SignedDistance {
    pub const fn new(value: i64, unit_exponent: u32) -> Self {
        Self {
            value,
            unit_exponent,
        }
    }

    pub fn difference(lhs: ScaledDistance, rhs: ScaledDistance) -> Self {
        let (a, b, k) = lhs.common(rhs);
        Self::new(a as i64 - b as i64, k)
    }

    pub fn abs(self) -> ScaledDistance {
        ScaledDistance::new(self.value.unsigned_abs(), self.unit_exponent)
    }

    pub fn rescale(self, unit_exponent: u32) -> Self {
        assert!(unit_exponent >= self.unit_exponent);
        let factor = 4i64.pow(unit_exponent - self.unit_exponent);
        Self::new(self.value * factor, unit_exponent)
    }

    pub fn to_f64(self) -> f64 {
        self.value as f64 / 4f64.powi(self.unit_exponent as i32)
    }
}

impl PartialEq for SignedDistance {
    fn eq(&self, other: &Self) -> bool {
        let k = self.unit_exponent.max(other.unit_exponent);
        self.rescale(k).value == other.rescale(k).value
    }
}

impl Eq for SignedDistance {}

impl std::ops::Neg for SignedDistance {
    type Output = SignedDistance;

    fn neg(self) -> Self {
        Self::new(-self.value, self.unit_exponent)
    }
}

impl std::ops::Sub for SignedDistance {
    type Output = SignedDistance;

    fn sub(self, rhs: Self) -> Self {
        let k = self.unit_exponent.max(rhs.unit_exponent);
        Self::new(self.rescale(k).value - rhs.rescale(k).value, k)
    }
}

#[derive(Serialize)]
struct SignedOut {
    value: i64,
    unit_exponent: u32,
    decimal: f64,
}

#[derive(Deserialize)]
struct SignedIn {
    value: i64,
    unit_exponent: u32,
}

impl Serialize for SignedDistance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SignedOut {
            value: self.value,
            unit_exponent: self.unit_exponent,
            decimal: self.to_f64(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignedDistance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SignedIn::deserialize(deserializer)?;
        Ok(Self::new(raw.value, raw.unit_exponent))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn comparisons_rescale() {
        let quarter = ScaledDistance::new(1, 1);
        assert_eq!(quarter, ScaledDistance::new(4, 2));
        assert!(ScaledDistance::new(3, 2) < quarter);
        assert_eq!(ScaledDistance::power_of_quarter(0, 3).value, 64);
        assert_eq!(quarter.half(), ScaledDistance::new(2, 2));
    }

    #[test]
    fn normalized_is_minimal() {
        assert_eq!(ScaledDistance::new(64, 3).normalized(), ScaledDistance::new(1, 0));
        assert_eq!(ScaledDistance::new(64, 3).normalized().unit_exponent, 0);
        assert_eq!(ScaledDistance::new(6, 2).normalized().unit_exponent, 2);
    }

    #[test]
    fn decimal_is_ignored_on_input() {
        let json = r#"{"value":6,"unit_exponent":2,"decimal":123.0}"#;
        let d: ScaledDistance = serde_json::from_str(json).unwrap();
        assert_eq!(d, ScaledDistance::new(6, 2));
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"decimal\":0.375"));
    }

    proptest! {
        #[test]
        fn rescaling_preserves_order(a in 0u64..10_000, b in 0u64..10_000, ka in 0u32..6, kb in 0u32..6, extra in 0u32..4) {
            let x = ScaledDistance::new(a, ka);
            let y = ScaledDistance::new(b, kb);
            prop_assert_eq!(x.cmp(&y), x.rescale(ka + extra).cmp(&y));
            prop_assert_eq!(x.partial_cmp(&y).map(|o| o.reverse()), y.partial_cmp(&x));
            prop_assert!((x.to_f64() < y.to_f64()) == (x < y) || x.to_f64() == y.to_f64());
        }
    }
}
