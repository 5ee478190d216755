//! The Chow ring of `Z = P(E)` for a rank-3 bundle `E` on `P²`.
//!
//! Additively the ring has the basis `ξ^i H^j` with `0 ≤ i, j ≤ 2`, where
//! `ξ = c₁(O_Z(1))` and `H` is the pullback of the hyperplane class. Products
//! are reduced with `H³ = 0` and the tautological relation
//! `ξ³ = c₁ ξ²H − c₂ ξH²`. The point class is `ξ²H²`, the fibre class
//! `F = H²`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

/// Chern numbers `(c₁(E)·h, c₂(E))` of a rank-3 bundle on `P²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChernPair {
    pub c1: i64,
    pub c2: i64,
}

impl ChernPair {
    pub const fn new(c1: i64, c2: i64) -> Self {
        ChernPair { c1, c2 }
    }

    /// Chern numbers of `O(e₁) ⊕ O(e₂) ⊕ O(e₃)`.
    pub fn from_split(e: [i64; 3]) -> Self {
        ChernPair {
            c1: e[0] + e[1] + e[2],
            c2: e[0] * e[1] + e[0] * e[2] + e[1] * e[2],
        }
    }

    /// `c₁² − 3c₂`, unchanged by twisting.
    pub fn gamma(&self) -> i64 {
        self.c1 * self.c1 - 3 * self.c2
    }

    /// Chern numbers of `E ⊗ O(t)`.
    pub fn twisted(&self, t: i64) -> Self {
        ChernPair {
            c1: self.c1 + 3 * t,
            c2: self.c2 + 2 * t * self.c1 + 3 * t * t,
        }
    }
}

impl fmt::Display for ChernPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c1, self.c2)
    }
}

const MONOMIAL_NAMES: [[&str; 3]; 3] = [
    ["1", "h", "h2"],
    ["xi", "xi_h", "xi_h2"],
    ["xi2", "xi2_h", "xi2_h2"],
];

/// An element of the Chow ring, stored in the reduced monomial basis.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ChowClass {
    // coef[i][j] multiplies ξ^i H^j
    coef: [[Rational; 3]; 3],
}

impl ChowClass {
    pub fn zero() -> Self {
        ChowClass::default()
    }

    /// The basis monomial `ξ^i H^j`; both exponents must be at most 2.
    pub fn basis(i: usize, j: usize) -> Self {
        assert!(i <= 2 && j <= 2, "ξ^{i}H^{j} is not a basis monomial");
        let mut out = ChowClass::zero();
        out.coef[i][j] = Rational::one();
        out
    }

    pub fn one() -> Self {
        ChowClass::basis(0, 0)
    }

    pub fn xi() -> Self {
        ChowClass::basis(1, 0)
    }

    pub fn h() -> Self {
        ChowClass::basis(0, 1)
    }

    /// The fibre class `F = H²`.
    pub fn fiber() -> Self {
        ChowClass::basis(0, 2)
    }

    /// The point class `ξ²H²`.
    pub fn point() -> Self {
        ChowClass::basis(2, 2)
    }

    /// The divisor class `α ξ + β H`.
    pub fn divisor(alpha: impl Into<Rational>, beta: impl Into<Rational>) -> Self {
        let mut out = ChowClass::zero();
        out.coef[1][0] = alpha.into();
        out.coef[0][1] = beta.into();
        out
    }

    /// The coefficient of `ξ^i H^j` (zero outside the basis range).
    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        if i <= 2 && j <= 2 {
            self.coef[i][j].clone()
        } else {
            Rational::zero()
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: Rational) {
        self.coef[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coef.iter().flatten().all(Rational::is_zero)
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        (0..3).flat_map(move |i| (0..3).map(move |j| (i, j, &self.coef[i][j])))
    }

    /// The homogeneous component of degree `d`.
    pub fn degree_part(&self, d: usize) -> ChowClass {
        let mut out = ChowClass::zero();
        for (i, j, c) in self.terms() {
            if i + j == d {
                out.coef[i][j] = c.clone();
            }
        }
        out
    }

    /// True when every nonzero term has degree `d`.
    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms().all(|(i, j, c)| c.is_zero() || i + j == d)
    }

    /// The degree-4 coefficient, i.e. the integral over `Z`.
    pub fn degree4(&self) -> Rational {
        self.coef[2][2].clone()
    }

    pub fn scale(&self, r: &Rational) -> ChowClass {
        let mut out = self.clone();
        out.coef.iter_mut().flatten().for_each(|c| *c *= r);
        out
    }

    pub fn all_integral(&self) -> bool {
        self.coef.iter().flatten().all(Rational::is_integer)
    }
}

impl Add for &ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        let mut out = self.clone();
        for (i, j, c) in rhs.terms() {
            out.coef[i][j] += c;
        }
        out
    }
}

impl Add for ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: ChowClass) -> ChowClass {
        &self + &rhs
    }
}

impl Sub for &ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self + &(-rhs)
    }
}

impl Sub for ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: ChowClass) -> ChowClass {
        &self - &rhs
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        -&self
    }
}

impl fmt::Debug for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(i, j, c)| format!("{c:?}*{}", MONOMIAL_NAMES[i][j]))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for ChowClass {
    /// A map from monomial name (`xi2_h`, `h2`, ...) to coefficient; zero
    /// coefficients are omitted.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, &Rational> = self
            .terms()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(i, j, c)| (MONOMIAL_NAMES[i][j], c))
            .collect();
        map.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChowClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, Rational>::deserialize(deserializer)?;
        let mut out = ChowClass::zero();
        for (name, v) in map {
            let (i, j) = (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .find(|&(i, j)| MONOMIAL_NAMES[i][j] == name)
                .ok_or_else(|| serde::de::Error::custom(format!("unknown monomial `{name}`")))?;
            out.coef[i][j] = v;
        }
        Ok(out)
    }
}

/// Multiplication and integration in the Chow ring of a fixed `P(E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChowRing {
    c: ChernPair,
    // red[i][j] is ξ^i H^j in the reduced basis, for i ≤ 4, j ≤ 2
    red: [[[[i64; 3]; 3]; 3]; 5],
}

fn reduce_int(c: ChernPair, i: usize, j: usize) -> [[i64; 3]; 3] {
    let mut out = [[0; 3]; 3];
    if j >= 3 || i + j > 4 {
        return out;
    }
    if i <= 2 {
        out[i][j] = 1;
        return out;
    }
    let a = reduce_int(c, i - 1, j + 1);
    let b = reduce_int(c, i - 2, j + 2);
    for s in 0..3 {
        for t in 0..3 {
            out[s][t] = c.c1 * a[s][t] - c.c2 * b[s][t];
        }
    }
    out
}

impl ChowRing {
    pub fn new(c: ChernPair) -> Self {
        let mut red = [[[[0; 3]; 3]; 3]; 5];
        for (i, row) in red.iter_mut().enumerate() {
            for (j, m) in row.iter_mut().enumerate() {
                *m = reduce_int(c, i, j);
            }
        }
        ChowRing { c, red }
    }

    pub fn chern(&self) -> ChernPair {
        self.c
    }

    /// Rewrites `ξ^i H^j` in the reduced basis.
    pub fn reduce_monomial(&self, i: usize, j: usize) -> ChowClass {
        if j >= 3 || i + j > 4 {
            return ChowClass::zero();
        }
        if i <= 2 {
            return ChowClass::basis(i, j);
        }
        // ξ^i H^j = ξ^(i-3) H^j (c₁ ξ²H − c₂ ξH²)
        let c1 = Rational::from_int(self.c.c1);
        let c2 = Rational::from_int(self.c.c2);
        &self.reduce_monomial(i - 1, j + 1).scale(&c1) - &self.reduce_monomial(i - 2, j + 2).scale(&c2)
    }

    pub fn mul(&self, x: &ChowClass, y: &ChowClass) -> ChowClass {
        let mut out = ChowClass::zero();
        for (i, j, a) in x.terms().filter(|t| !t.2.is_zero()) {
            for (k, l, b) in y.terms().filter(|t| !t.2.is_zero()) {
                if i + k > 4 || j + l > 2 {
                    continue;
                }
                let prod = a * b;
                let red = &self.red[i + k][j + l];
                for (s, row) in red.iter().enumerate() {
                    for (t, &r) in row.iter().enumerate() {
                        if r != 0 {
                            out.coef[s][t] += &(&prod * &Rational::from_int(r));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn product(&self, factors: &[&ChowClass]) -> ChowClass {
        factors
            .iter()
            .fold(ChowClass::one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, x: &ChowClass, k: u32) -> ChowClass {
        (0..k).fold(ChowClass::one(), |acc, _| self.mul(&acc, x))
    }

    /// Integral over `Z` of the product of the given classes.
    pub fn integrate(&self, factors: &[&ChowClass]) -> Rational {
        self.product(factors).degree4()
    }

    /// Intersection number of four divisor classes on `Z`.
    pub fn intersect4(&self, factors: [&ChowClass; 4]) -> Result<Rational> {
        if let Some(bad) = factors.iter().position(|f| !f.is_homogeneous(1)) {
            return Err(Error::domain(format!(
                "intersect4 factor {bad} is not a divisor class: {:?}",
                factors[bad]
            )));
        }
        Ok(self.integrate(&factors))
    }

    /// Integral over the anticanonical hypersurface `X` of the product of
    /// the given classes (multiplication by `−K_Z` on `Z`).
    pub fn integrate_on_x(&self, factors: &[&ChowClass]) -> Rational {
        let k = anticanonical(self.c);
        let mut all: Vec<&ChowClass> = factors.to_vec();
        all.push(&k);
        self.integrate(&all)
    }
}

/// `−K_Z = 3ξ + (3 − c₁)H`.
pub fn anticanonical(c: ChernPair) -> ChowClass {
    ChowClass::divisor(3, 3 - c.c1)
}

/// Chern classes `c₀ … c₄` of `T_Z` (index = degree).
///
/// `c(T_Z) = c(p*T_{P²}) · c(p*E^∨ ⊗ O_Z(1))`, with the second factor
/// expanded from the Chern roots of `E^∨` as
/// `(1+ξ)³ − c₁H(1+ξ)² + c₂H²(1+ξ)`.
pub fn chern_tangent_z(c: ChernPair) -> Vec<ChowClass> {
    let ring = ChowRing::new(c);
    let base = &(&ChowClass::one() + &ChowClass::h().scale(&3.into()))
        + &ChowClass::fiber().scale(&3.into());
    let one_plus_xi = &ChowClass::one() + &ChowClass::xi();
    let relative = &(&ring.pow(&one_plus_xi, 3)
        - &ring
            .mul(&ChowClass::h(), &ring.pow(&one_plus_xi, 2))
            .scale(&c.c1.into()))
        + &ring
            .mul(&ChowClass::fiber(), &one_plus_xi)
            .scale(&c.c2.into());
    let total = ring.mul(&base, &relative);
    (0..=4).map(|d| total.degree_part(d)).collect()
}

/// A degree-2 class on `Z` whose restriction to `X` is `c₂(X)`:
/// `c₂(Z) + K_Z·c₁(Z) + K_Z²`. Since `c₁(Z) = −K_Z` this is `c₂(Z)`.
pub fn c2_of_x(c: ChernPair) -> ChowClass {
    let ring = ChowRing::new(c);
    let cz = chern_tangent_z(c);
    let k = -anticanonical(c);
    &(&cz[2] + &ring.mul(&k, &cz[1])) + &ring.mul(&k, &k)
}

/// A degree-3 class on `Z` whose restriction is `c₃(X)`:
/// `c₃(Z) + K_Z c₂(Z) + K_Z² c₁(Z) + K_Z³`.
pub fn c3_of_x(c: ChernPair) -> ChowClass {
    let ring = ChowRing::new(c);
    let cz = chern_tangent_z(c);
    let k = -anticanonical(c);
    let k2 = ring.mul(&k, &k);
    let mut out = cz[3].clone();
    out = &out + &ring.mul(&k, &cz[2]);
    out = &out + &ring.mul(&k2, &cz[1]);
    &out + &ring.mul(&k2, &k)
}

/// Pairing matrix of `(F, ξH, ξ²)` in `H⁴(Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub entries: [[i64; 3]; 3],
    pub det: i64,
}

pub fn gram_matrix(c: ChernPair) -> Result<GramMatrix> {
    let ring = ChowRing::new(c);
    let basis = [ChowClass::fiber(), ChowClass::basis(1, 1), ChowClass::basis(2, 0)];
    let mut entries = [[0i64; 3]; 3];
    for (r, x) in basis.iter().enumerate() {
        for (s, y) in basis.iter().enumerate() {
            let v = ring.integrate(&[x, y]);
            entries[r][s] = v
                .to_i64()
                .ok_or_else(|| Error::Invariant(format!("non-integral pairing {v} in H^4")))?;
        }
    }
    let det = det3(&entries);
    Ok(GramMatrix { entries, det })
}

pub(crate) fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Numerical data of a surface `G ⊂ Z` contracted by the anticanonical map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSurface {
    /// Coefficients of `μG` on `(ξ², ξH, F)`.
    pub coeffs: [i64; 3],
    /// Multiplicities `μ` compatible with integrality of `G`; empty when
    /// no such surface can exist.
    pub mu_candidates: BTreeSet<u64>,
}

impl GSurface {
    /// The class `μG` as a Chow class.
    pub fn mu_class(&self) -> ChowClass {
        let mut out = ChowClass::zero();
        out.set_coeff(2, 0, self.coeffs[0].into());
        out.set_coeff(1, 1, self.coeffs[1].into());
        out.set_coeff(0, 2, self.coeffs[2].into());
        out
    }

    /// The class of `G` itself for a given `μ`.
    pub fn class_for_mu(&self, mu: u64) -> Result<ChowClass> {
        let inv = Rational::from_int(mu as i64).recip()?;
        Ok(self.mu_class().scale(&inv))
    }
}

/// Class of a surface `G` with `−K_Z·G ≡ 0`, and the admissible `μ`.
///
/// Solving `−K_Z·G·ξ = −K_Z·G·H = 0` gives
/// `μG = 9ξ² − (6c₁+9)ξH + (9c₂ + 3c₁ + 9 − 2c₁²)F`. Since `(F, ξH, ξ²)` is a
/// ℤ-basis, `μ` must divide the gcd of the three coefficients, so
/// `G·F = 9/μ` is a positive integer. A contracted surface lies in the base
/// locus of two members of `|O_Z(1)|`, so `G·F ≤ ξ²·F = 1` and `μ = 9`; when
/// 9 does not divide the gcd, the candidate set is empty.
pub fn g_surface_class(c: ChernPair) -> GSurface {
    let coeffs = [
        9,
        -(6 * c.c1 + 9),
        9 * c.c2 + 3 * c.c1 + 9 - 2 * c.c1 * c.c1,
    ];
    let g = coeffs.iter().fold(0i64, |acc, &x| acc.gcd(&x)).unsigned_abs();
    let mu_candidates = if g % 9 == 0 {
        (1..=9u64).filter(|m| 9 % m == 0).collect()
    } else {
        BTreeSet::new()
    };
    GSurface {
        coeffs,
        mu_candidates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn xi_cubed_reduces_by_tautological_relation() {
        let ring = ChowRing::new(ChernPair::new(3, 2));
        let mut expect = ChowClass::zero();
        expect.set_coeff(2, 1, r(3));
        expect.set_coeff(1, 2, r(-2));
        assert_eq!(ring.reduce_monomial(3, 0), expect);
    }

    #[test]
    fn h_cubed_vanishes() {
        let ring = ChowRing::new(ChernPair::new(3, 2));
        assert!(ring.reduce_monomial(0, 3).is_zero());
        assert!(ring.reduce_monomial(3, 3).is_zero());
        assert!(ring.reduce_monomial(5, 0).is_zero());
    }

    #[test]
    fn xi_fourth_is_c1_squared_minus_c2() {
        let ring = ChowRing::new(ChernPair::new(3, 2));
        assert_eq!(ring.reduce_monomial(4, 0), ChowClass::point().scale(&r(7)));
        assert_eq!(ring.reduce_monomial(4, 0).degree4() * r(81), r(567));
    }

    #[test]
    fn basic_products() {
        let ring = ChowRing::new(ChernPair::new(3, 2));
        assert_eq!(ring.mul(&ChowClass::xi(), &ChowClass::basis(1, 1)), ChowClass::basis(2, 1));
        assert_eq!(ring.mul(&ChowClass::basis(2, 0), &ChowClass::fiber()), ChowClass::point());
        let xi3 = ring.reduce_monomial(3, 0);
        assert_eq!(ring.mul(&xi3, &ChowClass::h()), ChowClass::point().scale(&r(3)));
    }

    #[test]
    fn intersect4_examples() {
        let xi = ChowClass::xi();
        let h = ChowClass::h();
        let ring = ChowRing::new(ChernPair::new(3, 0));
        assert_eq!(ring.intersect4([&xi, &xi, &xi, &xi]).unwrap(), r(9));
        let c = ChernPair::new(3, 2);
        let k = anticanonical(c);
        let ring = ChowRing::new(c);
        assert_eq!(ring.intersect4([&k, &k, &k, &k]).unwrap(), r(567));
        assert_eq!(ring.intersect4([&h, &h, &h, &xi]).unwrap(), r(0));
        assert!(ring.intersect4([&h, &h, &h, &ChowClass::fiber()]).is_err());
    }

    #[test]
    fn anticanonical_examples() {
        assert_eq!(anticanonical(ChernPair::new(3, 2)), ChowClass::divisor(3, 0));
        assert_eq!(anticanonical(ChernPair::new(0, 0)), ChowClass::divisor(3, 3));
        assert_eq!(anticanonical(ChernPair::new(-1, 5)), ChowClass::divisor(3, 4));
    }

    #[test]
    fn tangent_chern_classes() {
        for c in [ChernPair::new(3, 2), ChernPair::new(0, 0), ChernPair::new(-2, 7)] {
            let cz = chern_tangent_z(c);
            assert_eq!(cz[0], ChowClass::one());
            assert_eq!(cz[1], anticanonical(c));
            assert_eq!(cz[4].degree4(), r(9));
        }
    }

    #[test]
    fn c2_of_x_pairings() {
        let c = ChernPair::new(3, 2);
        let ring = ChowRing::new(c);
        let c2x = c2_of_x(c);
        assert_eq!(ring.integrate_on_x(&[&ChowClass::xi(), &c2x]), r(78));
        assert_eq!(ring.integrate_on_x(&[&ChowClass::h(), &c2x]), r(36));
        assert_eq!(ring.integrate_on_x(&[&c3_of_x(c)]), r(-180));
    }

    #[test]
    fn gram_examples() {
        let g = gram_matrix(ChernPair::new(3, 2)).unwrap();
        assert_eq!(g.entries, [[0, 0, 1], [0, 1, 3], [1, 3, 7]]);
        assert_eq!(g.det, -1);
        let g = gram_matrix(ChernPair::new(0, 0)).unwrap();
        assert_eq!(g.entries, [[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        assert_eq!(g.det, -1);
    }

    #[test]
    fn g_surface_examples() {
        let g = g_surface_class(ChernPair::new(3, 2));
        assert_eq!(g.coeffs, [9, -27, 18]);
        assert_eq!(g.mu_candidates, [1, 3, 9].into_iter().collect());
        let mut reduced = ChowClass::basis(2, 0);
        reduced.set_coeff(1, 1, r(-3));
        reduced.set_coeff(0, 2, r(2));
        assert_eq!(g.class_for_mu(9).unwrap(), reduced);

        let g = g_surface_class(ChernPair::new(3, 0));
        assert_eq!(g.coeffs, [9, -27, 0]);
        assert_eq!(g.mu_candidates.len(), 3);

        for c2 in -5..10 {
            let g = g_surface_class(ChernPair::new(2, c2));
            assert_eq!(g.coeffs[2], 9 * c2 + 7);
            assert!(g.mu_candidates.is_empty());
        }
    }

    #[test]
    fn twist_moves_chern_pair() {
        let c = ChernPair::from_split([0, 1, 2]);
        assert_eq!(c, ChernPair::new(3, 2));
        assert_eq!(c.twisted(1), ChernPair::from_split([1, 2, 3]));
        assert_eq!(c.twisted(-2), ChernPair::from_split([-2, -1, 0]));
    }

    #[test]
    fn serialized_as_named_coefficients() {
        let k = anticanonical(ChernPair::new(2, 1));
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"h":"1/1","xi":"3/1"}"#);
        let back: ChowClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}
