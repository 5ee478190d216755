use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// An exact real number `a + b·√n` with rational `a`, `b`.
///
/// Canonical form: either `b = 0` and `n = 0` (a rational), or `b ≠ 0` and
/// `n ≥ 2` squarefree. Values with different radicands never mix; such
/// arithmetic is a domain error.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuad")]
pub struct QuadValue {
    a: Rational,
    b: Rational,
    n: u64,
}

#[derive(Deserialize)]
struct RawQuad {
    a: Rational,
    b: Rational,
    n: u64,
}

impl TryFrom<RawQuad> for QuadValue {
    type Error = String;

    fn try_from(raw: RawQuad) -> std::result::Result<Self, String> {
        let v = QuadValue::new(raw.a.clone(), raw.b.clone(), raw.n);
        if v.a != raw.a || v.b != raw.b || v.n != raw.n {
            return Err(format!(
                "quadratic value not in canonical form: a={}, b={}, n={}",
                raw.a, raw.b, raw.n
            ));
        }
        Ok(v)
    }
}

/// Splits `n` as `s² · m` with `m` squarefree, by trial division.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 0);
    }
    let mut m = n;
    let mut s = 1u64;
    let mut d = 2u64;
    while d * d <= m {
        while m % (d * d) == 0 {
            m /= d * d;
            s *= d;
        }
        d += 1;
    }
    (s, m)
}

fn squarefree_split_big(n: &BigInt) -> Result<(BigInt, u64)> {
    // Radicands here come from 9 - 4γ and similar; they always fit.
    let small = n
        .to_u64()
        .ok_or_else(|| Error::domain(format!("radicand {n} too large")))?;
    let (s, m) = squarefree_split(small);
    Ok((BigInt::from(s), m))
}

impl QuadValue {
    /// Builds `a + b·√n`, bringing it to canonical form.
    pub fn new(a: Rational, b: Rational, n: u64) -> Self {
        if b.is_zero() || n == 0 {
            return QuadValue::rational(a);
        }
        let (s, m) = squarefree_split(n);
        let b = b * Rational::from_int(s as i64);
        if m == 1 {
            return QuadValue::rational(a + b);
        }
        QuadValue { a, b, n: m }
    }

    pub fn rational(a: Rational) -> Self {
        QuadValue {
            a,
            b: Rational::zero(),
            n: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        QuadValue::rational(Rational::from_int(v))
    }

    pub fn zero() -> Self {
        QuadValue::rational(Rational::zero())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    fn common_radicand(&self, other: &QuadValue) -> Result<u64> {
        match (self.n, other.n) {
            (0, m) | (m, 0) => Ok(m),
            (m, k) if m == k => Ok(m),
            (m, k) => Err(Error::domain(format!("mixed radicands √{m} and √{k}"))),
        }
    }

    pub fn try_add(&self, other: &QuadValue) -> Result<QuadValue> {
        let n = self.common_radicand(other)?;
        Ok(QuadValue::new(&self.a + &other.a, &self.b + &other.b, n))
    }

    pub fn try_sub(&self, other: &QuadValue) -> Result<QuadValue> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &QuadValue) -> Result<QuadValue> {
        let n = self.common_radicand(other)?;
        let nr = Rational::from_int(n as i64);
        let a = &self.a * &other.a + &self.b * &other.b * &nr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadValue::new(a, b, n))
    }

    /// Division through the conjugate; dividing by zero is a domain error.
    pub fn try_div(&self, other: &QuadValue) -> Result<QuadValue> {
        if other.signum() == 0 {
            return Err(Error::domain("division by zero"));
        }
        let n = self.common_radicand(other)?;
        let norm = &other.a * &other.a - &other.b * &other.b * Rational::from_int(n as i64);
        let num = self.try_mul(&other.conjugate())?;
        Ok(QuadValue::new(
            num.a.checked_div(&norm)?,
            num.b.checked_div(&norm)?,
            num.n.max(n),
        ))
    }

    pub fn conjugate(&self) -> QuadValue {
        QuadValue::new(self.a.clone(), -&self.b, self.n)
    }

    pub fn add_rational(&self, r: &Rational) -> QuadValue {
        QuadValue::new(&self.a + r, self.b.clone(), self.n)
    }

    pub fn scale(&self, r: &Rational) -> QuadValue {
        QuadValue::new(&self.a * r, &self.b * r, self.n)
    }

    /// Evaluates a polynomial with rational coefficients (constant term first).
    pub fn eval_poly(&self, coeffs: &[Rational]) -> Result<QuadValue> {
        let mut acc = QuadValue::zero();
        for c in coeffs.iter().rev() {
            acc = acc.try_mul(self)?.add_rational(c);
        }
        Ok(acc)
    }

    /// Exact sign of `a + b√n`: case split on the signs of `a` and `b`,
    /// comparing `a²` with `b²n` when they differ.
    pub fn signum(&self) -> i32 {
        let sa = self.a.signum();
        let sb = self.b.signum();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2n = &self.b * &self.b * Rational::from_int(self.n as i64);
        match a2.cmp(&b2n) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            // a² = b²n with n squarefree ≥ 2 forces a = b = 0, excluded above
            Ordering::Equal => 0,
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        self.add_rational(&-r).signum().cmp(&0)
    }

    /// Exact comparison of two values sharing a radicand.
    pub fn try_cmp(&self, other: &QuadValue) -> Result<Ordering> {
        Ok(self.try_sub(other)?.signum().cmp(&0))
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.n as f64).sqrt()
    }
}

impl std::ops::Neg for &QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue::new(-&self.a, -&self.b, self.n)
    }
}

impl std::ops::Neg for QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        -&self
    }
}

impl From<Rational> for QuadValue {
    fn from(r: Rational) -> Self {
        QuadValue::rational(r)
    }
}

/// Exact square root of a nonnegative rational as `s·√m`, `m` squarefree.
pub fn sqrt_to_quad(q: &Rational) -> Result<QuadValue> {
    if q.is_negative() {
        return Err(Error::domain(format!("square root of negative number {q}")));
    }
    if q.is_zero() {
        return Ok(QuadValue::zero());
    }
    // √(p/d) = √(p·d) / d
    let p = q.numer();
    let d = q.denom();
    let (s, m) = squarefree_split_big(&(p * d))?;
    let coeff = Rational::from_bigints(s, d.clone())?;
    Ok(QuadValue::new(Rational::zero(), coeff, m))
}

pub fn quad_is_rational(v: &QuadValue) -> bool {
    v.is_rational()
}

/// Integer square root test used by oracles: `Some(r)` when `n = r²`.
pub fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub(crate) fn is_one(r: &Rational) -> bool {
    r.numer().is_one() && r.denom().is_one()
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_r = |r: &Rational| {
            if r.is_integer() {
                format!("{}", r.numer())
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        };
        if self.is_rational() {
            return write!(f, "{}", fmt_r(&self.a));
        }
        let mag = self.b.abs();
        let coeff = if is_one(&mag) {
            String::new()
        } else {
            format!("{}*", fmt_r(&mag))
        };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coeff}sqrt({})", self.n)
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{} {sign} {coeff}sqrt({})", fmt_r(&self.a), self.n)
        }
    }
}

impl fmt::Debug for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let v = sqrt_to_quad(&q(9, 4)).unwrap();
        assert_eq!(v, QuadValue::rational(q(3, 2)));
        assert_eq!(v.n(), 0);
    }

    #[test]
    fn sqrt_of_45_over_4() {
        let v = sqrt_to_quad(&(q(9, 4) - q(-9, 1))).unwrap();
        assert_eq!(v.b(), &q(3, 2));
        assert_eq!(v.n(), 5);
        assert!(v.a().is_zero());
    }

    #[test]
    fn sqrt_of_quarter() {
        let v = sqrt_to_quad(&(q(9, 4) - q(2, 1))).unwrap();
        assert_eq!(v, QuadValue::rational(q(1, 2)));
        assert_eq!(v.try_mul(&v).unwrap(), QuadValue::rational(q(1, 4)));
    }

    #[test]
    fn negative_radicand_rejected() {
        assert!(matches!(sqrt_to_quad(&q(-3, 4)), Err(Error::Domain(_))));
    }

    #[test]
    fn rationality_predicate() {
        assert!(quad_is_rational(&QuadValue::new(q(3, 2), Rational::zero(), 0)));
        assert!(quad_is_rational(&QuadValue::zero()));
        let k = QuadValue::new(q(9, 2), q(-3, 2), 5);
        assert!(!quad_is_rational(&k));
    }

    #[test]
    fn canonicalization_absorbs_square_factors() {
        let v = QuadValue::new(q(1, 1), q(1, 1), 12);
        assert_eq!(v.b(), &q(2, 1));
        assert_eq!(v.n(), 3);
        assert_eq!(QuadValue::new(q(1, 1), q(2, 1), 4), QuadValue::from_int(5));
    }

    #[test]
    fn mixed_radicands_rejected() {
        let x = QuadValue::new(Rational::zero(), q(1, 1), 2);
        let y = QuadValue::new(Rational::zero(), q(1, 1), 3);
        assert!(matches!(x.try_add(&y), Err(Error::Domain(_))));
        assert!(matches!(x.try_mul(&y), Err(Error::Domain(_))));
    }

    #[test]
    fn sign_determination() {
        // 9/2 - (3/2)√5 ≈ 1.146
        let k = QuadValue::new(q(9, 2), q(-3, 2), 5);
        assert_eq!(k.signum(), 1);
        assert_eq!(k.cmp_rational(&q(3, 2)), Ordering::Less);
        assert_eq!(k.cmp_rational(&q(1, 1)), Ordering::Greater);
        // -36 + 6√117 = -36 + 18√13 > 0
        let v = QuadValue::new(q(-36, 1), q(6, 1), 117);
        assert_eq!(v.signum(), 1);
        assert_eq!(v.n(), 13);
        // 1 - √2 < 0
        assert_eq!(QuadValue::new(q(1, 1), q(-1, 1), 2).signum(), -1);
    }

    #[test]
    fn division_and_conjugate() {
        let x = QuadValue::new(q(1, 1), q(1, 1), 2);
        let inv = QuadValue::from_int(1).try_div(&x).unwrap();
        // 1/(1+√2) = √2 - 1
        assert_eq!(inv, QuadValue::new(q(-1, 1), q(1, 1), 2));
        assert!(x.try_div(&QuadValue::zero()).is_err());
    }

    #[test]
    fn json_shape() {
        let k = QuadValue::new(q(9, 2), q(-3, 2), 5);
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"a":"9/2","b":"-3/2","n":5}"#);
        let back: QuadValue = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<QuadValue>(r#"{"a":"1/1","b":"1/1","n":4}"#).is_err());
        assert_eq!(k.to_string(), "9/2 - 3/2*sqrt(5)");
    }
}
