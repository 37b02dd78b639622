//! Exact two-variable Laurent polynomials over the integers.
//!
//! Sparse representation keyed by (s-exponent, t-exponent) with `BigInt`
//! coefficients; zero coefficients are never stored. Display prints terms
//! with s-exponent descending, then t-exponent descending, with explicit
//! signs and caret exponents (`3s^-1t^2`), matching the command-line output
//! format.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        LaurentPoly2::default()
    }

    pub fn one() -> Self {
        LaurentPoly2::monomial(BigInt::one(), 0, 0)
    }

    pub fn monomial(coef: BigInt, s_exp: i64, t_exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert((s_exp, t_exp), coef);
        }
        LaurentPoly2 { terms }
    }

    /// Σ coeffs[k]·t^{exps[k]} — univariate in t.
    pub fn univariate_t(terms: &[(i64, BigInt)]) -> Self {
        let mut p = LaurentPoly2::zero();
        for (e, c) in terms {
            p.add_term(0, *e, c.clone());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s_exp: i64, t_exp: i64) -> BigInt {
        self.terms.get(&(s_exp, t_exp)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn add_term(&mut self, s_exp: i64, t_exp: i64, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry((s_exp, t_exp)).or_insert_with(BigInt::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&(s_exp, t_exp));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((s, t), c) in other.terms() {
            out.add_term(s, t, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly2 { terms: self.terms.iter().map(|(&k, v)| (k, -v)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly2::zero();
        for ((s1, t1), c1) in self.terms() {
            for ((s2, t2), c2) in other.terms() {
                out.add_term(s1 + s2, t1 + t2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly2::zero();
        }
        LaurentPoly2 { terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    /// Multiply by the monomial s^{ds}·t^{dt}.
    pub fn shifted(&self, ds: i64, dt: i64) -> Self {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&(s, t), v)| ((s + ds, t + dt), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = LaurentPoly2::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation; `None` if a negative exponent meets a zero base.
    pub fn eval(&self, s: &BigRational, t: &BigRational) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for ((se, te), c) in self.terms() {
            let sp = rat_pow(s, se)?;
            let tp = rat_pow(t, te)?;
            acc += BigRational::from_integer(c.clone()) * sp * tp;
        }
        Some(acc)
    }

    /// Substitute t ↦ the given polynomial (s is untouched). Requires every
    /// t-exponent to be ≥ 0.
    pub fn subst_t(&self, value: &LaurentPoly2) -> Self {
        let mut out = LaurentPoly2::zero();
        for ((se, te), c) in self.terms() {
            assert!(te >= 0, "substitution requires nonnegative t-exponents");
            let term = value.pow(te as usize).scale(c).shifted(se, 0);
            out = out.add(&term);
        }
        out
    }

    /// Total degree in t of the highest t-exponent, if nonzero.
    pub fn t_degree(&self) -> Option<i64> {
        self.terms.keys().map(|&(_, t)| t).max()
    }
}

fn rat_pow(base: &BigRational, e: i64) -> Option<BigRational> {
    if e == 0 {
        return Some(BigRational::one());
    }
    if base.is_zero() {
        return if e > 0 { Some(BigRational::zero()) } else { None };
    }
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc = acc.recip();
    }
    Some(acc)
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // s-exponent descending, then t-exponent descending.
        let mut keys: Vec<(i64, i64)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| b.cmp(a));
        for (i, &(se, te)) in keys.iter().enumerate() {
            let c = &self.terms[&(se, te)];
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = monomial_string(se, te);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

fn monomial_string(se: i64, te: i64) -> String {
    let mut out = String::new();
    for (var, e) in [("s", se), ("t", te)] {
        match e {
            0 => {}
            1 => out.push_str(var),
            _ => out.push_str(&format!("{var}^{e}")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn display_univariate_descending() {
        // t^3 - 3t^2 + 2t
        let p = LaurentPoly2::univariate_t(&[(3, int(1)), (2, int(-3)), (1, int(2))]);
        assert_eq!(p.to_string(), "t^3 - 3t^2 + 2t");
    }

    #[test]
    fn display_two_variable() {
        let mut p = LaurentPoly2::one();
        p.add_term(-1, 2, int(3));
        p.add_term(-2, 4, int(2));
        assert_eq!(p.to_string(), "1 + 3s^-1t^2 + 2s^-2t^4");
    }

    #[test]
    fn display_corner_cases() {
        assert_eq!(LaurentPoly2::zero().to_string(), "0");
        assert_eq!(LaurentPoly2::monomial(int(-1), 0, 1).to_string(), "-t");
        assert_eq!(LaurentPoly2::monomial(int(1), 1, 1).to_string(), "st");
        assert_eq!(LaurentPoly2::monomial(int(-7), 0, 0).to_string(), "-7");
        let q = LaurentPoly2::monomial(int(1), 0, 2).sub(&LaurentPoly2::one());
        assert_eq!(q.to_string(), "t^2 - 1");
    }

    #[test]
    fn arithmetic_and_normalization() {
        let t = LaurentPoly2::monomial(int(1), 0, 1);
        let one = LaurentPoly2::one();
        // (1+t)(1+2t) = 2t^2 + 3t + 1
        let p = one.add(&t).mul(&one.add(&t.scale(&int(2))));
        assert_eq!(p.coeff(0, 2), int(2));
        assert_eq!(p.coeff(0, 1), int(3));
        assert_eq!(p.coeff(0, 0), int(1));
        assert_eq!(p.to_string(), "2t^2 + 3t + 1");
        // x - x = 0 with no stored terms
        assert!(p.sub(&p).is_zero());
        // pow
        let sq = one.add(&t).pow(2);
        assert_eq!(sq.to_string(), "t^2 + 2t + 1");
    }

    #[test]
    fn eval_with_negative_exponents() {
        // s^-1 t^2 at s=2, t=3 → 9/2
        let p = LaurentPoly2::monomial(int(1), -1, 2);
        let two = BigRational::from_integer(int(2));
        let three = BigRational::from_integer(int(3));
        let v = p.eval(&two, &three).unwrap();
        assert_eq!(v, BigRational::new(int(9), int(2)));
        assert!(p.eval(&BigRational::zero(), &three).is_none());
    }

    #[test]
    fn substitute_into_t() {
        // χ(t) = t^2 - t, t ↦ (1+t): (1+t)^2 - (1+t) = t^2 + t
        let chi = LaurentPoly2::univariate_t(&[(2, int(1)), (1, int(-1))]);
        let val = LaurentPoly2::one().add(&LaurentPoly2::monomial(int(1), 0, 1));
        let out = chi.subst_t(&val);
        assert_eq!(out.to_string(), "t^2 + t");
    }
}
