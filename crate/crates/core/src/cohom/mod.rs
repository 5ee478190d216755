//! Sheaf cohomology on `P²`.
//!
//! Every evaluable expression is normalized into a direct sum of pieces of
//! two kinds, line bundles `O(k)` and twisted symmetric powers
//! `S^a T ⊗ O(b)`. Line bundles have `h¹ = 0`; the symmetric powers are
//! handled through the symmetric power of the Euler sequence
//! `0 → S^{a-1}(O(1)³) → S^a(O(1)³) → S^a T → 0`, Serre duality with
//! `Ω ≅ T(−3)`, and Riemann–Roch for `h¹`.

mod expr;

use std::ops::Add;

use serde::{Deserialize, Serialize};

pub use expr::SheafExpr;

use crate::bundle::{BundleSpec, CohomStrategy};
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::tri::Tri;

/// `h⁰, h¹, h²` and `χ` of a sheaf on `P²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub chi: i64,
}

impl CohomologyTable {
    pub fn new(h0: i64, h1: i64, h2: i64) -> Self {
        CohomologyTable {
            h0,
            h1,
            h2,
            chi: h0 - h1 + h2,
        }
    }

    pub fn h(&self, i: usize) -> i64 {
        match i {
            0 => self.h0,
            1 => self.h1,
            2 => self.h2,
            _ => 0,
        }
    }
}

impl Add for CohomologyTable {
    type Output = CohomologyTable;
    fn add(self, o: CohomologyTable) -> CohomologyTable {
        CohomologyTable::new(self.h0 + o.h0, self.h1 + o.h1, self.h2 + o.h2)
    }
}

impl std::iter::Sum for CohomologyTable {
    fn sum<I: Iterator<Item = CohomologyTable>>(iter: I) -> Self {
        iter.fold(CohomologyTable::default(), Add::add)
    }
}

/// `C(n, k)` for `n ≥ 0`; zero when `k < 0` or `k > n`.
pub(crate) fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// `h⁰(O(k)) = C(k+2, 2)` for `k ≥ 0`.
pub fn h0_line(k: i64) -> i64 {
    if k < 0 {
        0
    } else {
        (k + 1) * (k + 2) / 2
    }
}

pub fn cohom_line(k: i64) -> CohomologyTable {
    CohomologyTable::new(h0_line(k), 0, h0_line(-3 - k))
}

fn h0_sym_tangent(a: u32, b: i64) -> i64 {
    let a = a as i64;
    binom(a + 2, 2) * h0_line(a + b) - binom(a + 1, 2) * h0_line(a + b - 1)
}

/// Cohomology of `S^a T ⊗ O(b)` by the Euler-resolution method.
pub fn cohom_sym_t(a: u32, b: i64) -> CohomologyTable {
    let h0 = h0_sym_tangent(a, b);
    let h2 = h0_sym_tangent(a, -3 * a as i64 - b - 3);
    let chi = sym_tangent_chern(a, b).chi();
    let chi = chi
        .to_i64()
        .expect("Riemann-Roch of S^a T(b) is an integer");
    CohomologyTable::new(h0, h0 + h2 - chi, h2)
}

/// `h⁰(S^a Q ⊗ O(b))` where `Q = O(1)^n / O` (restricted Euler sequence,
/// e.g. `T_{P³}|P²` for `n = 4`). Uses `h¹ = 0` for line bundles.
pub fn h0_restricted_euler(n: u32, a: i64, b: i64) -> i64 {
    if a < 0 {
        return h0_line(b);
    }
    let n = n as i64;
    binom(n + a - 1, a) * h0_line(a + b) - binom(n + a - 2, a - 1) * h0_line(a + b - 1)
}

/// Summand of a normalized expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Line(i64),
    /// `S^a T ⊗ O(b)` with `a ≥ 1`.
    SymT { a: u32, b: i64 },
}

impl Piece {
    fn sym_t(a: u32, b: i64) -> Piece {
        if a == 0 {
            Piece::Line(b)
        } else {
            Piece::SymT { a, b }
        }
    }

    fn twist(self, k: i64) -> Piece {
        match self {
            Piece::Line(d) => Piece::Line(d + k),
            Piece::SymT { a, b } => Piece::SymT { a, b: b + k },
        }
    }

    /// `(S^a T(b))^∨ = S^a Ω(−b) = S^a T(−3a − b)`.
    fn dual(self) -> Piece {
        match self {
            Piece::Line(d) => Piece::Line(-d),
            Piece::SymT { a, b } => Piece::SymT {
                a,
                b: -3 * a as i64 - b,
            },
        }
    }

    fn table(self) -> CohomologyTable {
        match self {
            Piece::Line(d) => cohom_line(d),
            Piece::SymT { a, b } => cohom_sym_t(a, b),
        }
    }

    fn line_degree(self) -> Option<i64> {
        match self {
            Piece::Line(d) => Some(d),
            Piece::SymT { .. } => None,
        }
    }
}

/// All multisets of size `p` drawn from `items`, as sums of degrees.
fn multiset_sums(items: &[i64], p: usize) -> Vec<i64> {
    fn go(items: &[i64], start: usize, left: usize, acc: i64, out: &mut Vec<i64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..items.len() {
            go(items, i, left - 1, acc + items[i], out);
        }
    }
    let mut out = Vec::new();
    go(items, 0, p, 0, &mut out);
    out
}

/// Rewrites `e` as a direct sum of line bundles and `S^a T(b)` pieces.
///
/// `end` needs a split argument. `sym` is supported on split bundles, on a
/// sum of one `T(c)` with line bundles (binomial expansion), and on a single
/// `S²T(b)` squared, through the split sequence
/// `0 → (det T)^{⊗2} → S²S²T → S⁴T → 0`.
pub fn normalize(e: &SheafExpr) -> Result<Vec<Piece>> {
    Ok(match e {
        SheafExpr::Line(k) => vec![Piece::Line(*k)],
        SheafExpr::SymTangent { a, b } => vec![Piece::sym_t(*a, *b)],
        SheafExpr::DirectSum(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(normalize(p)?);
            }
            out
        }
        SheafExpr::TwistBy(inner, k) => normalize(inner)?.into_iter().map(|p| p.twist(*k)).collect(),
        SheafExpr::DualOf(inner) => normalize(inner)?.into_iter().map(Piece::dual).collect(),
        SheafExpr::EndOf(inner) => {
            let pieces = normalize(inner)?;
            let degrees: Option<Vec<i64>> = pieces.iter().map(|p| p.line_degree()).collect();
            let degrees = degrees.ok_or_else(|| {
                Error::unsupported(e.to_string(), "endomorphisms of a non-split bundle")
            })?;
            degrees
                .iter()
                .flat_map(|i| degrees.iter().map(move |j| Piece::Line(j - i)))
                .collect()
        }
        SheafExpr::SymPower(inner, p) => sym_pieces(e, &normalize(inner)?, *p)?,
    })
}

fn sym_pieces(node: &SheafExpr, pieces: &[Piece], p: i64) -> Result<Vec<Piece>> {
    if p <= 0 {
        return Ok(vec![Piece::Line(0)]);
    }
    if p == 1 {
        return Ok(pieces.to_vec());
    }
    let lines: Vec<i64> = pieces.iter().filter_map(|q| q.line_degree()).collect();
    let others: Vec<Piece> = pieces.iter().copied().filter(|q| q.line_degree().is_none()).collect();
    match others.as_slice() {
        [] => Ok(multiset_sums(&lines, p as usize)
            .into_iter()
            .map(Piece::Line)
            .collect()),
        // S^p(T(c) ⊕ L) = ⊕_i S^i T(ic) ⊗ S^{p-i} L
        [Piece::SymT { a: 1, b: c }] => {
            let mut out = Vec::new();
            for i in 0..=p {
                for d in multiset_sums(&lines, (p - i) as usize) {
                    out.push(Piece::sym_t(i as u32, i * c + d));
                }
            }
            Ok(out)
        }
        // S²(S²T(b)) = S⁴T(2b) ⊕ O(6 + 2b)
        [Piece::SymT { a: 2, b }] if lines.is_empty() && p == 2 => {
            Ok(vec![Piece::SymT { a: 4, b: 2 * b }, Piece::Line(6 + 2 * b)])
        }
        _ => Err(Error::unsupported(
            node.to_string(),
            "symmetric power of a non-split bundle outside the supported plethysm",
        )),
    }
}

pub fn cohom_expr(e: &SheafExpr) -> Result<CohomologyTable> {
    Ok(normalize(e)?.into_iter().map(Piece::table).sum())
}

/// Rank, first Chern class and degree-2 Chern character of a sheaf on
/// `P²`, enough for Riemann–Roch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    pub rank: i64,
    pub c1: Rational,
    pub ch2: Rational,
}

impl ChernData {
    pub fn line(k: i64) -> Self {
        ChernData {
            rank: 1,
            c1: k.into(),
            ch2: Rational::new(k * k, 2).unwrap(),
        }
    }

    pub fn zero() -> Self {
        ChernData {
            rank: 0,
            c1: Rational::zero(),
            ch2: Rational::zero(),
        }
    }

    pub fn tangent() -> Self {
        // c₁ = 3, c₂ = 3, ch₂ = (9 − 6)/2
        ChernData {
            rank: 2,
            c1: 3.into(),
            ch2: Rational::new(3, 2).unwrap(),
        }
    }

    pub fn c2(&self) -> Rational {
        (&self.c1 * &self.c1 - &self.ch2 * Rational::from_int(2))
            .checked_div(&2.into())
            .unwrap()
    }

    /// `χ = rk + (3/2)c₁ + ch₂ = rk + c₁(c₁+3)/2 − c₂`.
    pub fn chi(&self) -> Rational {
        Rational::from_int(self.rank) + &self.c1 * Rational::new(3, 2).unwrap() + &self.ch2
    }

    pub fn sum(&self, o: &ChernData) -> ChernData {
        ChernData {
            rank: self.rank + o.rank,
            c1: &self.c1 + &o.c1,
            ch2: &self.ch2 + &o.ch2,
        }
    }

    pub fn tensor(&self, o: &ChernData) -> ChernData {
        let r = Rational::from_int(self.rank);
        let s = Rational::from_int(o.rank);
        ChernData {
            rank: self.rank * o.rank,
            c1: &r * &o.c1 + &s * &self.c1,
            ch2: &r * &o.ch2 + &s * &self.ch2 + &self.c1 * &o.c1,
        }
    }

    pub fn dual(&self) -> ChernData {
        ChernData {
            rank: self.rank,
            c1: -&self.c1,
            ch2: self.ch2.clone(),
        }
    }

    pub fn twist(&self, k: i64) -> ChernData {
        self.tensor(&ChernData::line(k))
    }

    /// `S^p` by the splitting principle: with multiplicities `m_i` of a
    /// multiset of roots, `ch₂(S^p) = ½(A·Σx_i² + B·Σ_{i≠j} x_i x_j)` where
    /// `A = Σ_M m_1²`, `B = Σ_M m_1 m_2` by symmetry.
    pub fn sym_power(&self, p: i64) -> ChernData {
        if p <= 0 {
            return ChernData::line(0);
        }
        let r = self.rank;
        if r == 0 {
            return ChernData::zero();
        }
        // multisets of size k over n elements
        let count = |n: i64, k: i64| -> i64 {
            if k < 0 {
                0
            } else if n == 0 {
                i64::from(k == 0)
            } else {
                binom(n + k - 1, k)
            }
        };
        let rank = count(r, p);
        let c1 = &self.c1 * Rational::new(rank * p, r).unwrap();
        let a: i64 = (0..=p).map(|m| m * m * count(r - 1, p - m)).sum();
        let b: i64 = if r >= 2 {
            (0..=p)
                .flat_map(|m| (0..=p - m).map(move |l| (m, l)))
                .map(|(m, l)| m * l * count(r - 2, p - m - l))
                .sum()
        } else {
            0
        };
        let sq_sum = &self.ch2 * Rational::from_int(2);
        let cross = &self.c1 * &self.c1 - &sq_sum;
        let ch2 = (Rational::from_int(a) * sq_sum + Rational::from_int(b) * cross)
            .checked_div(&2.into())
            .unwrap();
        ChernData { rank, c1, ch2 }
    }
}

fn sym_tangent_chern(a: u32, b: i64) -> ChernData {
    ChernData::tangent().sym_power(a as i64).twist(b)
}

/// Chern data of any expression; total, since every construction admits
/// Chern-root bookkeeping.
pub fn chern_data(e: &SheafExpr) -> ChernData {
    match e {
        SheafExpr::Line(k) => ChernData::line(*k),
        SheafExpr::SymTangent { a, b } => sym_tangent_chern(*a, *b),
        SheafExpr::DirectSum(parts) => parts
            .iter()
            .fold(ChernData::zero(), |acc, p| acc.sum(&chern_data(p))),
        SheafExpr::TwistBy(inner, k) => chern_data(inner).twist(*k),
        SheafExpr::SymPower(inner, p) => chern_data(inner).sym_power(*p),
        SheafExpr::EndOf(inner) => {
            let d = chern_data(inner);
            d.dual().tensor(&d)
        }
        SheafExpr::DualOf(inner) => chern_data(inner).dual(),
    }
}

/// Riemann–Roch Euler characteristic on `P²`.
pub fn chi_rr(e: &SheafExpr) -> Result<i64> {
    let chi = chern_data(e).chi();
    chi.to_i64()
        .ok_or_else(|| Error::Invariant(format!("non-integral Euler characteristic {chi} for {e}")))
}

/// How `h⁰(−K_Z)` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H0Reason {
    /// Computed exactly from `S³E ⊗ O(3 − c₁)`.
    Exact,
    /// Not computed; `γ ≥ −18` forces `h⁰(−K_Z) > 1`.
    GammaBound,
    /// Not computed and no criterion applies.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H0MinusK {
    pub value: Option<i64>,
    pub gt1: Tri,
    pub reason: H0Reason,
}

/// `h⁰(−K_Z) = h⁰(S³E ⊗ O(3 − c₁))`, exactly when the bundle's strategy
/// allows, otherwise the `γ ≥ −18` criterion.
pub fn h0_minus_k(spec: &BundleSpec) -> H0MinusK {
    let c = spec.chern();
    let twist = 3 - c.c1;
    let exact = match spec.strategy() {
        CohomStrategy::Split(e) => Some(
            multiset_sums(&e, 3)
                .into_iter()
                .map(|d| h0_line(d + twist))
                .sum(),
        ),
        CohomStrategy::SymTangent(expr) => cohom_expr(&expr.sym(3).twist(twist)).ok().map(|t| t.h0),
        CohomStrategy::RestrictedEuler { rank, twist: t } => {
            // S³(Q(t)) ⊗ O(b) = S³Q ⊗ O(3t + b)
            Some(h0_restricted_euler(rank, 3, 3 * t + twist))
        }
        CohomStrategy::None => None,
    };
    match exact {
        Some(v) => H0MinusK {
            value: Some(v),
            gt1: Tri::from(v > 1),
            reason: H0Reason::Exact,
        },
        None if c.gamma() >= -18 => H0MinusK {
            value: None,
            gt1: Tri::True,
            reason: H0Reason::GammaBound,
        },
        None => H0MinusK {
            value: None,
            gt1: Tri::Unknown,
            reason: H0Reason::Undetermined,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> SheafExpr {
        s.parse().unwrap()
    }

    #[test]
    fn line_bundles() {
        assert_eq!(cohom_line(0), CohomologyTable::new(1, 0, 0));
        assert_eq!(cohom_line(1), CohomologyTable::new(3, 0, 0));
        assert_eq!(cohom_line(-3), CohomologyTable::new(0, 0, 1));
        assert_eq!(cohom_line(-1), CohomologyTable::new(0, 0, 0));
    }

    #[test]
    fn sym_tangent_tables() {
        assert_eq!(cohom_sym_t(1, 0), CohomologyTable::new(8, 0, 0));
        assert_eq!(cohom_sym_t(4, -5).h0, 0);
        assert_eq!(cohom_sym_t(1, -3), CohomologyTable::new(0, 1, 0));
        assert_eq!(cohom_sym_t(0, 2), cohom_line(2));
    }

    #[test]
    fn end_of_rho4_bundle() {
        let t = cohom_expr(&parse("end(O(0) + O(0) + O(3))")).unwrap();
        assert_eq!(t.h2, 2);
        let t = cohom_expr(&parse("end(O(0) + O(1) + O(2))")).unwrap();
        assert_eq!(t.chi, 15);
    }

    #[test]
    fn plethysm_case() {
        let e = SheafExpr::sym_tangent(1, -1).sym(2).sym(2).twist(-1);
        assert_eq!(cohom_expr(&e).unwrap().h0, 3);
        assert_eq!(
            normalize(&e).unwrap(),
            vec![Piece::SymT { a: 4, b: -5 }, Piece::Line(1)]
        );
    }

    #[test]
    fn unsupported_expressions_name_the_node() {
        let e = parse("end(SymT(1,0) + O(0))");
        match cohom_expr(&e) {
            Err(Error::Unsupported { node, .. }) => assert_eq!(node, "end(SymT(1,0) + O(0))"),
            other => panic!("{other:?}"),
        }
        let e = parse("sym(SymT(2,0),3)");
        assert!(matches!(cohom_expr(&e), Err(Error::Unsupported { .. })));
        // χ is still available
        assert!(chi_rr(&e).is_ok());
    }

    #[test]
    fn degenerate_sym_powers() {
        assert_eq!(normalize(&parse("sym(SymT(1,0),0)")).unwrap(), vec![Piece::Line(0)]);
        assert_eq!(normalize(&parse("sym(O(2),-1)")).unwrap(), vec![Piece::Line(0)]);
        assert_eq!(normalize(&parse("SymT(0,-4)")).unwrap(), vec![Piece::Line(-4)]);
    }

    #[test]
    fn riemann_roch_examples() {
        for k in -6..6 {
            assert_eq!(chi_rr(&SheafExpr::line(k)).unwrap(), (k + 1) * (k + 2) / 2);
        }
        assert_eq!(chi_rr(&SheafExpr::sym_tangent(1, -3)).unwrap(), -1);
        let end = SheafExpr::split(&[0, 1, 2]).end();
        assert_eq!(chi_rr(&end).unwrap(), 2 * 3 + 9);
    }

    #[test]
    fn chern_data_of_tangent_twists() {
        let d = chern_data(&SheafExpr::sym_tangent(1, -3));
        assert_eq!(d.c1, Rational::from_int(-3));
        assert_eq!(d.c2(), Rational::from_int(3));
        // S²(T(−1)) has c = (3, 6)
        let d = chern_data(&parse("sym(SymT(1,-1),2)"));
        assert_eq!((d.rank, d.c1.clone(), d.c2()), (3, 3.into(), 6.into()));
    }

    #[test]
    fn restricted_euler_matches_sym_tangent_for_rank_three() {
        for a in 0..5 {
            for b in -8..4 {
                assert_eq!(h0_restricted_euler(3, a, b), cohom_sym_t(a as u32, b).h0);
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(6, 3), 20);
        assert_eq!(binom(2, 3), 0);
        assert_eq!(binom(3, -1), 0);
    }
}
