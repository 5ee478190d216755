//! Kähler-cone data for `X`: positivity of `−K_Z`, the `D³ = 0` boundary
//! root, the rationality verdict, `c₂`-positivity and exceptional surfaces.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bundle::{BundleSpec, MinusKHint};
use crate::chow::{anticanonical, c2_of_x, g_surface_class, ChernPair, ChowClass, ChowRing, GSurface};
use crate::cohom::{h0_minus_k, H0MinusK, H0Reason};
use crate::error::{Error, Result};
use crate::exactnum::{quad_is_rational, sqrt_to_quad, QuadValue, Rational};
use crate::tri::Tri;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub test: String,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusKStatus {
    pub nef: Tri,
    pub ample: Tri,
    pub big: Tri,
    pub h0_gt_1: Tri,
    pub h0: H0MinusK,
    pub witnesses: Vec<Witness>,
}

impl MinusKStatus {
    pub fn big_and_nef(&self) -> Tri {
        self.big.and(self.nef)
    }
}

/// `(−K_Z)⁴` from the Chow ring.
pub fn anticanonical_degree(c: ChernPair) -> Rational {
    let k = anticanonical(c);
    ChowRing::new(c).integrate(&[&k, &k, &k, &k])
}

pub fn minus_k_status(spec: &BundleSpec) -> MinusKStatus {
    let c = spec.chern();
    let deg = anticanonical_degree(c);
    let mut witnesses = vec![Witness {
        test: "(-K_Z)^4".into(),
        value: deg.clone(),
    }];
    let (nef, ample) = match spec.uniform_type() {
        Some(e) => {
            // −K_Z on the section P(O(e₁)) over a line
            let line = 3 * e[0] + 3 - c.c1;
            witnesses.push(Witness {
                test: "-K_Z.P(O(e1)) = 3e1+3-c1".into(),
                value: line.into(),
            });
            (Tri::from(line >= 0), Tri::from(line > 0))
        }
        None => match spec.minus_k_hint {
            Some(MinusKHint::Ample) => (Tri::True, Tri::True),
            Some(MinusKHint::NefNotAmple) => (Tri::True, Tri::False),
            Some(MinusKHint::NotNef) => (Tri::False, Tri::False),
            None => (Tri::Unknown, Tri::Unknown),
        },
    };
    let big = match nef {
        Tri::True => Tri::from(deg.is_positive()),
        _ => Tri::Unknown,
    };
    let h0 = h0_minus_k(spec);
    if let Some(v) = h0.value {
        witnesses.push(Witness {
            test: "h0(-K_Z)".into(),
            value: v.into(),
        });
    }
    MinusKStatus {
        nef,
        ample,
        big,
        h0_gt_1: h0.gt1,
        h0,
        witnesses,
    }
}

/// Which ray the boundary root is measured on: `O_X(3) − kπ*h` or
/// `O_X(1) − kπ*h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Oz3,
    Oz1,
}

impl Normalization {
    pub fn xi_coeff(self) -> i64 {
        match self {
            Normalization::Oz3 => 3,
            Normalization::Oz1 => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRoot {
    pub normalization: Normalization,
    pub exists: bool,
    /// The smaller root.
    pub k: Option<QuadValue>,
    /// The conjugate root.
    pub k_other: Option<QuadValue>,
}

/// Coefficients `[p₀, p₁, p₂, p₃]` of `(αξ − kH)³|X` as a polynomial in `k`.
pub fn d_cubed_poly(c: ChernPair, norm: Normalization) -> Vec<Rational> {
    let ring = ChowRing::new(c);
    let xi = ChowClass::xi();
    let h = ChowClass::h();
    let a = Rational::from_int(norm.xi_coeff());
    let x3 = ring.integrate_on_x(&[&xi, &xi, &xi]);
    let x2h = ring.integrate_on_x(&[&xi, &xi, &h]);
    let xh2 = ring.integrate_on_x(&[&xi, &h, &h]);
    let h3 = ring.integrate_on_x(&[&h, &h, &h]);
    let three = Rational::from_int(3);
    vec![
        a.pow(3) * x3,
        -(&three * &a.pow(2) * x2h),
        &three * &a * xh2,
        -h3,
    ]
}

/// `D³` on `X` for `D = αξ − kH`, exactly.
pub fn d_cubed_at(c: ChernPair, norm: Normalization, k: &QuadValue) -> Result<QuadValue> {
    k.eval_poly(&d_cubed_poly(c, norm))
}

/// Real roots of `D³ = 0` along `αξ − kH`.
pub fn boundary_root(c: ChernPair, norm: Normalization) -> Result<BoundaryRoot> {
    let p = d_cubed_poly(c, norm);
    if !p[3].is_zero() || p[2].is_zero() {
        return Err(Error::Invariant(format!(
            "unexpected shape of D^3 along the ray for c = {c}"
        )));
    }
    // p₂k² + p₁k + p₀ = 0
    let two = Rational::from_int(2);
    let disc = &p[1] * &p[1] - Rational::from_int(4) * &p[2] * &p[0];
    if disc.is_negative() {
        return Ok(BoundaryRoot {
            normalization: norm,
            exists: false,
            k: None,
            k_other: None,
        });
    }
    let denom = (&two * &p[2]).recip()?;
    let centre = -(&p[1] * &denom);
    let s = sqrt_to_quad(&disc)?.scale(&denom.abs());
    let lo = s.scale(&Rational::from_int(-1)).add_rational(&centre);
    let hi = s.add_rational(&centre);
    Ok(BoundaryRoot {
        normalization: norm,
        exists: true,
        k: Some(lo),
        k_other: Some(hi),
    })
}

/// `k = c₁ + 3/2 − √(9/4 − γ)` on the `O_X(3)` ray.
pub fn boundary_root_closed_form(c: ChernPair) -> Result<Option<QuadValue>> {
    let r = Rational::new(9, 4)? - Rational::from_int(c.gamma());
    if r.is_negative() {
        return Ok(None);
    }
    let centre = Rational::from_int(c.c1) + Rational::new(3, 2)?;
    Ok(Some((-sqrt_to_quad(&r)?).add_rational(&centre)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Rational,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailEntry {
    pub tag: String,
    pub detail: String,
    /// Holds only under an additional, unverified hypothesis.
    pub conditional: bool,
}

pub const TAG_H0: &str = "h0_anticanonical_gt_1";
pub const TAG_GAMMA: &str = "gamma_at_least_minus_18";
pub const TAG_ROOT_ABSENT: &str = "boundary_root_absent";
pub const TAG_ROOT_RATIONAL: &str = "boundary_root_rational";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    /// Every criterion that holds, in decision order; the first decides.
    pub trail: Vec<TrailEntry>,
}

/// Rationality of `∂K(X)`, assuming `ρ(X) = 2`.
pub fn rationality_verdict(spec: &BundleSpec) -> Result<VerdictReport> {
    let c = spec.chern();
    let h0 = h0_minus_k(spec);
    rationality_from_parts(c, &h0)
}

fn rationality_from_parts(c: ChernPair, h0: &H0MinusK) -> Result<VerdictReport> {
    let mut trail = Vec::new();
    if h0.reason == H0Reason::Exact && h0.gt1.is_true() {
        trail.push(TrailEntry {
            tag: TAG_H0.into(),
            detail: format!("h0(-K_Z) = {}", h0.value.unwrap_or_default()),
            conditional: false,
        });
    }
    let g = c.gamma();
    if g >= -18 {
        trail.push(TrailEntry {
            tag: TAG_GAMMA.into(),
            detail: format!("gamma = {g}, c3(X) = {}", -6 * g - 162),
            conditional: false,
        });
    }
    let root = boundary_root(c, Normalization::Oz3)?;
    match &root.k {
        None => trail.push(TrailEntry {
            tag: TAG_ROOT_ABSENT.into(),
            detail: format!("9/4 - gamma = {} < 0", Rational::new(9, 4)? - Rational::from_int(g)),
            conditional: true,
        }),
        Some(k) if quad_is_rational(k) => trail.push(TrailEntry {
            tag: TAG_ROOT_RATIONAL.into(),
            detail: format!("k = {k}"),
            conditional: true,
        }),
        Some(_) => {}
    }
    let verdict = if trail.is_empty() {
        Verdict::Unknown
    } else {
        Verdict::Rational
    };
    Ok(VerdictReport { verdict, trail })
}

/// Values of `D·c₂(X)` on the boundary of the nef cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct C2Positivity {
    /// `D·c₂` at `D = O_X(1) − k'π*h` for the smaller root `k'`.
    pub value_at_root: Option<QuadValue>,
    /// `π*h·c₂(X)`.
    pub hray_value: i64,
    /// `−K_Z|X·c₂(X)`, reported when no root exists.
    pub minus_k_value: Option<i64>,
    pub min_value: QuadValue,
    pub positive: bool,
    /// `γ ≥ −27`, required for `ρ(X) = 2`.
    pub consistent: bool,
}

/// `18 + 2γ + 12√(9/4 − γ)`, for `γ ≤ 2`.
pub fn c2_root_bound(gamma: i64) -> Result<QuadValue> {
    let r = Rational::new(9, 4)? - Rational::from_int(gamma);
    Ok(sqrt_to_quad(&r)?
        .scale(&Rational::from_int(12))
        .add_rational(&Rational::from_int(18 + 2 * gamma)))
}

pub fn c2_positivity(c: ChernPair) -> Result<C2Positivity> {
    let ring = ChowRing::new(c);
    let c2 = c2_of_x(c);
    let int = |v: Rational, what: &str| {
        v.to_i64()
            .ok_or_else(|| Error::Invariant(format!("{what} = {v} is not an integer")))
    };
    let xi_c2 = ring.integrate_on_x(&[&ChowClass::xi(), &c2]);
    let hray_value = int(ring.integrate_on_x(&[&ChowClass::h(), &c2]), "h.c2")?;
    let root = boundary_root(c, Normalization::Oz1)?;
    let (value_at_root, minus_k_value) = match &root.k {
        Some(k) => {
            // (ξ − k'H)·c₂
            let v = k
                .scale(&Rational::from_int(-hray_value))
                .add_rational(&xi_c2);
            (Some(v), None)
        }
        None => {
            let mk = anticanonical(c);
            (None, Some(int(ring.integrate_on_x(&[&mk, &c2]), "-K.c2")?))
        }
    };
    let mut values = vec![QuadValue::from_int(hray_value)];
    values.extend(value_at_root.clone());
    values.extend(minus_k_value.map(QuadValue::from_int));
    let mut min_value = values[0].clone();
    for v in &values[1..] {
        if v.try_cmp(&min_value)?.is_lt() {
            min_value = v.clone();
        }
    }
    Ok(C2Positivity {
        positive: min_value.signum() > 0,
        value_at_root,
        hray_value,
        minus_k_value,
        min_value,
        consistent: c.gamma() >= -27,
    })
}

/// Generic splitting types `(a ≤ b ≤ c)` compatible with an irrational
/// boundary in the normalization where `O_X(1)` is ample but
/// `O_X(1) − π*h` is not. Empty outside `−1 ≤ c₁ ≤ 4`.
pub fn allowed_splitting_types(c1: i64) -> Vec<[i64; 3]> {
    if !(-1..=4).contains(&c1) {
        return Vec::new();
    }
    let a_min = (c1 - 3).div_euclid(3) + i64::from((c1 - 3).rem_euclid(3) != 0);
    let mut out = Vec::new();
    let mut a = a_min;
    while 3 * a <= c1 {
        let mut b = a;
        while 2 * b <= c1 - a {
            if 3 * b + 3 - c1 > 0 {
                out.push([a, b, c1 - a - b]);
            }
            b += 1;
        }
        a += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum KollarCase {
    /// `K(X) = K(Z)|X`.
    Equality { caveat: Option<String> },
    /// A surface contracted by `|−mK_Z|` may exist.
    ExceptionalCandidate {
        surface: GSurface,
        /// The class of `G` for `μ = 9`.
        reduced_class: Option<ChowClass>,
    },
    NotDetermined,
}

pub const CAVEAT_CANONICAL_SIDE: &str = "minus_k_not_nef_canonical_side";
pub const CAVEAT_EMPTY_MU: &str = "no_integral_exceptional_surface";

pub fn genkollar_classify(spec: &BundleSpec) -> Result<KollarCase> {
    let st = minus_k_status(spec);
    kollar_from_status(spec.chern(), &st)
}

fn kollar_from_status(c: ChernPair, st: &MinusKStatus) -> Result<KollarCase> {
    if st.ample.is_true() {
        return Ok(KollarCase::Equality { caveat: None });
    }
    if st.nef.is_false() {
        return Ok(KollarCase::Equality {
            caveat: Some(CAVEAT_CANONICAL_SIDE.into()),
        });
    }
    if st.nef.is_true() && st.ample.is_false() && st.big.is_true() {
        let surface = g_surface_class(c);
        if surface.mu_candidates.is_empty() {
            return Ok(KollarCase::Equality {
                caveat: Some(CAVEAT_EMPTY_MU.into()),
            });
        }
        let reduced_class = Some(surface.class_for_mu(9)?);
        return Ok(KollarCase::ExceptionalCandidate {
            surface,
            reduced_class,
        });
    }
    Ok(KollarCase::NotDetermined)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeReport {
    pub root_oz3: BoundaryRoot,
    pub root_oz1: BoundaryRoot,
    pub k_exists: bool,
    pub verdict: Verdict,
    pub trail: Vec<TrailEntry>,
    pub c2: C2Positivity,
    pub kollar_case: KollarCase,
    pub w_contains_boundary: Tri,
}

pub fn cone_report(spec: &BundleSpec, status: &MinusKStatus) -> Result<ConeReport> {
    let c = spec.chern();
    let root_oz3 = boundary_root(c, Normalization::Oz3)?;
    let root_oz1 = boundary_root(c, Normalization::Oz1)?;
    let v = rationality_from_parts(c, &status.h0)?;
    let c2 = c2_positivity(c)?;
    if c2.consistent && !c2.positive {
        return Err(Error::Invariant(format!(
            "non-positive D.c2 = {} at a nef boundary for c = {c}",
            c2.min_value
        )));
    }
    // W(X) is the line Rπ*h plus the two roots; without roots the second
    // boundary ray cannot lie on W.
    let w_contains_boundary = if root_oz3.exists {
        Tri::Unknown
    } else {
        Tri::False
    };
    Ok(ConeReport {
        k_exists: root_oz3.exists,
        root_oz3,
        root_oz1,
        verdict: v.verdict,
        trail: v.trail,
        c2,
        kollar_case: kollar_from_status(c, status)?,
        w_contains_boundary,
    })
}

/// Admissible types for `c₁`, as a set.
pub fn tab_set(c1: i64) -> BTreeSet<[i64; 3]> {
    allowed_splitting_types(c1).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::CatalogId;
    use crate::exactnum::QuadValue;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn status_examples() {
        let s = minus_k_status(&BundleSpec::split([0, 1, 2]));
        assert_eq!((s.nef, s.ample, s.big), (Tri::True, Tri::False, Tri::True));
        assert_eq!(s.h0.value, Some(115));
        let s = minus_k_status(&BundleSpec::split([0, 0, 1]));
        assert_eq!(s.ample, Tri::True);
        let s = minus_k_status(&BundleSpec::split([0, 0, 3]));
        assert_eq!((s.nef, s.ample, s.big), (Tri::True, Tri::False, Tri::True));
        assert_eq!(s.witnesses[0].value, Rational::from_int(729));
        let s = minus_k_status(&BundleSpec::chern_only(ChernPair::new(3, 2)));
        assert_eq!((s.nef, s.big), (Tri::Unknown, Tri::Unknown));
        let s = minus_k_status(&BundleSpec::split([-3, 0, 3]));
        assert_eq!((s.nef, s.ample, s.big), (Tri::False, Tri::False, Tri::Unknown));
    }

    #[test]
    fn root_for_s2t() {
        let c = CatalogId::SymSquareTwistedTangent.chern();
        let r = boundary_root(c, Normalization::Oz3).unwrap();
        let k = r.k.clone().unwrap();
        assert_eq!(k, QuadValue::new(q(9, 2), q(-3, 2), 5));
        assert!(!quad_is_rational(&k));
        assert!(d_cubed_at(c, Normalization::Oz3, &k).unwrap().signum() == 0);
        assert_eq!(boundary_root_closed_form(c).unwrap(), Some(k.clone()));
        let r1 = boundary_root(c, Normalization::Oz1).unwrap();
        assert_eq!(r1.k.unwrap(), k.scale(&q(1, 3)));
        // smaller root is below 3/2
        assert!(k.cmp_rational(&q(3, 2)).is_lt());
    }

    #[test]
    fn root_rational_and_absent() {
        let r = boundary_root(ChernPair::new(0, 0), Normalization::Oz3).unwrap();
        assert_eq!(r.k, Some(QuadValue::from_int(0)));
        assert_eq!(r.k_other, Some(QuadValue::from_int(3)));
        assert!(!boundary_root(ChernPair::new(3, 2), Normalization::Oz3).unwrap().exists);
    }

    #[test]
    fn verdicts() {
        let v = rationality_verdict(&BundleSpec::split([0, 1, 2])).unwrap();
        assert_eq!(v.verdict, Verdict::Rational);
        let tags: Vec<&str> = v.trail.iter().map(|t| t.tag.as_str()).collect();
        assert_eq!(tags, vec![TAG_H0, TAG_GAMMA, TAG_ROOT_ABSENT]);
        // γ = −20: c = (1, 7)
        let v = rationality_verdict(&BundleSpec::chern_only(ChernPair::new(1, 7))).unwrap();
        assert_eq!(v.verdict, Verdict::Unknown);
        assert!(v.trail.is_empty());
        // γ = −18: c = (0, 6)
        let v = rationality_verdict(&BundleSpec::chern_only(ChernPair::new(0, 6))).unwrap();
        assert_eq!(v.verdict, Verdict::Rational);
        assert_eq!(v.trail[0].tag, TAG_GAMMA);
        assert!(v.trail[0].detail.contains("c3(X) = -54"));
    }

    #[test]
    fn c2_values() {
        // γ = −27: c = (0, 9)
        let p = c2_positivity(ChernPair::new(0, 9)).unwrap();
        assert_eq!(p.value_at_root, Some(QuadValue::new(q(-36, 1), q(6, 1), 117)));
        assert!(p.positive && p.consistent);
        assert_eq!(p.hray_value, 36);
        let p = c2_positivity(ChernPair::new(3, 2)).unwrap();
        assert_eq!(p.value_at_root, None);
        assert_eq!(p.minus_k_value, Some(6 * 3 + 216));
        assert_eq!(p.min_value, QuadValue::from_int(36));
        assert_eq!(c2_root_bound(-27).unwrap(), QuadValue::new(q(-36, 1), q(18, 1), 13));
    }

    #[test]
    fn tab_rows() {
        assert_eq!(allowed_splitting_types(3), vec![[0, 1, 2], [1, 1, 1]]);
        assert_eq!(allowed_splitting_types(-1), vec![[-1, -1, 1], [-1, 0, 0]]);
        assert_eq!(allowed_splitting_types(4), vec![[1, 1, 2]]);
        assert!(allowed_splitting_types(5).is_empty());
        assert!(allowed_splitting_types(-2).is_empty());
    }

    #[test]
    fn kollar_cases() {
        match genkollar_classify(&BundleSpec::split([0, 1, 2])).unwrap() {
            KollarCase::ExceptionalCandidate { surface, reduced_class } => {
                assert_eq!(surface.coeffs, [9, -27, 18]);
                assert_eq!(surface.mu_candidates, [1, 3, 9].into_iter().collect());
                let mut want = ChowClass::zero();
                want.set_coeff(2, 0, 1.into());
                want.set_coeff(1, 1, (-3).into());
                want.set_coeff(0, 2, 2.into());
                assert_eq!(reduced_class, Some(want));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            genkollar_classify(&BundleSpec::split([0, 0, 1])).unwrap(),
            KollarCase::Equality { caveat: None }
        );
        let spec = BundleSpec::chern_only(ChernPair::new(2, 1)).with_hint(MinusKHint::NefNotAmple);
        assert_eq!(
            genkollar_classify(&spec).unwrap(),
            KollarCase::Equality { caveat: Some(CAVEAT_EMPTY_MU.into()) }
        );
        assert_eq!(
            genkollar_classify(&BundleSpec::chern_only(ChernPair::new(2, 1))).unwrap(),
            KollarCase::NotDetermined
        );
    }
}
