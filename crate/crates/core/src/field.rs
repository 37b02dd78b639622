//! Exact scalar arithmetic: the two coefficient fields ℚ and GF(2).
//!
//! Every homological computation in this crate is generic over [`Field`]; a
//! computation fixes its field once at the type level (the CLI dispatches on
//! `--field`).

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// An exact field. Implementations must be genuinely exact: equal values
/// compare equal bit-for-bit regardless of the computation path.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse. Panics on zero (callers guard).
    fn inv(&self) -> Self;
    /// Canonical image of an integer.
    fn from_int(n: i64) -> Self;
    /// Parse from a decimal integer or `p/q` fraction string.
    fn parse(s: &str) -> Option<Self>;
    /// Name used in output ("Q" or "GF2").
    fn name() -> &'static str;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// The rationals, backed by arbitrary-precision `BigRational` (always stored
/// in lowest terms with positive denominator).
pub type Rat = BigRational;

impl Field for Rat {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "division by zero in Q");
        self.recip()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn parse(s: &str) -> Option<Self> {
        BigRational::from_str(s.trim()).ok()
    }
    fn name() -> &'static str {
        "Q"
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GF2(pub u8);

impl GF2 {
    pub fn new(v: u8) -> Self {
        GF2(v & 1)
    }
}

impl fmt::Display for GF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for GF2 {
    fn zero() -> Self {
        GF2(0)
    }
    fn one() -> Self {
        GF2(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        GF2(self.0 ^ rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn mul(&self, rhs: &Self) -> Self {
        GF2(self.0 & rhs.0)
    }
    fn inv(&self) -> Self {
        assert!(self.0 == 1, "division by zero in GF2");
        GF2(1)
    }
    fn from_int(n: i64) -> Self {
        GF2((n.rem_euclid(2)) as u8)
    }
    fn parse(s: &str) -> Option<Self> {
        // Accept any integer (reduced mod 2) and p/q with odd q.
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.parse().ok()?;
            let q: i64 = q.parse().ok()?;
            if q.rem_euclid(2) == 0 {
                return None;
            }
            Some(GF2::from_int(p))
        } else {
            let p: i64 = s.parse().ok()?;
            Some(GF2::from_int(p))
        }
    }
    fn name() -> &'static str {
        "GF2"
    }
}

/// Parse a rational given as a JSON number or a `p/q` string.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    Rat::parse(s)
}

/// Sign-aware pretty-printer used by polynomial Display impls.
pub fn rat_is_negative(r: &Rat) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact_and_reduced() {
        let a = Rat::parse("2/4").unwrap();
        assert_eq!(a, Rat::parse("1/2").unwrap());
        // (a/b)+(c/d) computed two ways agrees bit-for-bit.
        let b = Rat::parse("7/6").unwrap();
        let left = a.add(&b);
        let right = b.add(&a);
        assert_eq!(left, right);
        assert_eq!(left, Rat::parse("5/3").unwrap());
        assert_eq!(a.mul(&b), Rat::parse("7/12").unwrap());
        assert_eq!(b.inv(), Rat::parse("6/7").unwrap());
        assert!(Rat::parse("-3/9").unwrap() == Rat::parse("-1/3").unwrap());
    }

    #[test]
    fn gf2_arithmetic() {
        let one = GF2::one();
        let zero = GF2::zero();
        assert_eq!(one.add(&one), zero);
        assert_eq!(one.mul(&one), one);
        assert_eq!(one.neg(), one);
        assert_eq!(GF2::from_int(-3), one);
        assert_eq!(GF2::parse("5").unwrap(), one);
        assert_eq!(GF2::parse("1/3").unwrap(), one);
        assert!(GF2::parse("1/2").is_none());
    }
}
