//! Numerical invariants of the anticanonical Calabi-Yau hypersurface
//! `X ⊂ Z = P(E)`.

use serde::{Deserialize, Serialize};

use crate::bundle::BundleSpec;
use crate::chow::{c2_of_x, c3_of_x, ChernPair, ChowClass, ChowRing};
use crate::cohom::cohom_expr;
use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::tri::Tri;

/// `γ = c₁² − 3c₂`.
pub fn gamma(c: ChernPair) -> i64 {
    c.gamma()
}

/// The six basic pairings on `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XProd {
    /// `ξ|X³`
    pub xi3: i64,
    /// `ξ|X² · π*h`
    pub xi2_h: i64,
    /// `ξ|X · F`
    pub xi_f: i64,
    /// `ξ|X · c₂(X)`
    pub xi_c2: i64,
    /// `π*h · c₂(X)`
    pub h_c2: i64,
    /// `c₃(X)`
    pub c3: i64,
}

impl XProd {
    pub fn as_array(&self) -> [i64; 6] {
        [self.xi3, self.xi2_h, self.xi_f, self.xi_c2, self.h_c2, self.c3]
    }

    pub const NAMES: [&'static str; 6] = ["xi3", "xi2_h", "xi_f", "xi_c2", "h_c2", "c3"];
}

/// The pairings from their closed forms in `c₁` and `γ`.
pub fn xprod_closed_form(c: ChernPair) -> XProd {
    let (c1, g) = (c.c1, c.gamma());
    XProd {
        xi3: g + c1 * c1 + 3 * c1,
        xi2_h: 2 * c1 + 3,
        xi_f: 3,
        xi_c2: 36 + 12 * c1 + 2 * g,
        h_c2: 36,
        c3: -6 * g - 162,
    }
}

fn integral(v: Rational, what: &str) -> Result<i64> {
    v.to_i64()
        .ok_or_else(|| Error::Invariant(format!("{what} = {v} is not an integer")))
}

/// The pairings computed in the Chow ring of `Z`.
pub fn xprod_engine(c: ChernPair) -> Result<XProd> {
    let ring = ChowRing::new(c);
    let xi = ChowClass::xi();
    let h = ChowClass::h();
    let f = ChowClass::fiber();
    let c2 = c2_of_x(c);
    let c3 = c3_of_x(c);
    Ok(XProd {
        xi3: integral(ring.integrate_on_x(&[&xi, &xi, &xi]), "xi^3")?,
        xi2_h: integral(ring.integrate_on_x(&[&xi, &xi, &h]), "xi^2.h")?,
        xi_f: integral(ring.integrate_on_x(&[&xi, &f]), "xi.F")?,
        xi_c2: integral(ring.integrate_on_x(&[&xi, &c2]), "xi.c2")?,
        h_c2: integral(ring.integrate_on_x(&[&h, &c2]), "h.c2")?,
        c3: integral(ring.integrate_on_x(&[&c3]), "c3")?,
    })
}

/// Invariants of `X`. `h12` is filled in only once `ρ(X) = 2` is known or
/// assumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CYInvariants {
    pub gamma: i64,
    pub c3: i64,
    pub h12: Option<i64>,
    pub xprod: XProd,
}

impl CYInvariants {
    /// `c₃ = 2(ρ − h¹²)` together with `ρ = 2` needs `γ ≥ −27`.
    pub fn consistent_with_rho2(&self) -> bool {
        self.gamma >= -27
    }

    pub fn with_rho(mut self, rho: Option<i64>) -> Self {
        self.h12 = match rho {
            Some(2) => Some(h12_rho2(self.gamma)),
            _ => None,
        };
        self
    }
}

/// `h¹²(X) = 2 − c₃/2 = 3γ + 83` when `ρ(X) = 2`.
pub fn h12_rho2(gamma: i64) -> i64 {
    3 * gamma + 83
}

/// Both computations of the pairings; disagreement is an invariant error.
pub fn xprod_table(c: ChernPair) -> Result<CYInvariants> {
    let closed = xprod_closed_form(c);
    let engine = xprod_engine(c)?;
    if closed != engine {
        let diffs: Vec<String> = XProd::NAMES
            .iter()
            .zip(closed.as_array().iter().zip(engine.as_array()))
            .filter(|(_, (a, b))| *a != b)
            .map(|(n, (a, b))| format!("{n}: closed {a}, engine {b}"))
            .collect();
        return Err(Error::Invariant(format!(
            "pairings on X disagree for c = {c}: {}",
            diffs.join("; ")
        )));
    }
    Ok(CYInvariants {
        gamma: c.gamma(),
        c3: closed.c3,
        h12: None,
        xprod: closed,
    })
}

/// `χ(O_X(mD))` for `D = αξ + βH`, by Riemann-Roch on a threefold with
/// trivial canonical class.
pub fn chi_on_x(c: ChernPair, d: (i64, i64), m: i64) -> Rational {
    let (a, b) = chi_on_x_coeffs(c, d);
    let m = Rational::from_int(m);
    &a * &m.pow(3) + &b * &m
}

/// `(D³/6, D·c₂/12)`: the cubic and linear coefficients of `χ(mD)`.
pub fn chi_on_x_coeffs(c: ChernPair, d: (i64, i64)) -> (Rational, Rational) {
    let ring = ChowRing::new(c);
    let dc = ChowClass::divisor(d.0, d.1);
    let d3 = ring.integrate_on_x(&[&dc, &dc, &dc]);
    let dc2 = ring.integrate_on_x(&[&dc, &c2_of_x(c)]);
    let sixth = Rational::new(1, 6).expect("nonzero");
    let twelfth = Rational::new(1, 12).expect("nonzero");
    (&d3 * &sixth, &dc2 * &twelfth)
}

pub const HYP_OX1_AMPLE: &str = "assumes O_X(1) ample";
pub const HYP_MINUS_K_NEF: &str = "assumes -K_Z nef";
pub const HYP_RHO2: &str = "assumes rho(X) = 2";

/// Lower bounds for sections on `X`, each conditional on the listed
/// hypotheses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionBounds {
    /// Lower bound for `h⁰(O_X(1) − π*h)`: `γ/3 + c₁²/6 + c₁/2`.
    pub lb_minus_h: Rational,
    /// `χ(O_X(1))`.
    pub h0_o1_chi: Rational,
    /// Lower bound `5γ + 91` for `h⁰(N_{X|Z})`.
    pub normal_bound: i64,
    /// `c₁ ≥ −1`, necessary under the hypotheses.
    pub c1_at_least_minus_1: bool,
    /// The bound is positive, which forces `c₁ ≥ 1`.
    pub lb_positive: bool,
    /// When `lb_positive`, whether `c₁ ≥ 1` indeed holds.
    pub c1_at_least_1: Option<bool>,
    pub hypotheses: Vec<String>,
}

pub fn section_bounds(c: ChernPair) -> SectionBounds {
    let g = Rational::from_int(c.gamma());
    let c1 = Rational::from_int(c.c1);
    let lb = &g * &Rational::new(1, 3).expect("nonzero")
        + &c1 * &c1 * Rational::new(1, 6).expect("nonzero")
        + &c1 * &Rational::new(1, 2).expect("nonzero");
    let lb_positive = lb.is_positive();
    SectionBounds {
        h0_o1_chi: chi_on_x(c, (1, 0), 1),
        normal_bound: 5 * c.gamma() + 91,
        c1_at_least_minus_1: c.c1 >= -1,
        lb_positive,
        c1_at_least_1: lb_positive.then_some(c.c1 >= 1),
        lb_minus_h: lb,
        hypotheses: [HYP_OX1_AMPLE, HYP_MINUS_K_NEF, HYP_RHO2]
            .map(String::from)
            .to_vec(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoReason {
    /// `2 + h²(E^∨ ⊗ E)`.
    EndCohomology,
    /// Normalized generic splitting type is not `(0,0,3)`.
    SplittingType,
    /// Normalized generic splitting type is `(0,0,3)`; the End cohomology
    /// is needed but not available.
    SplittingType003,
    /// `−K_Z` is not known to be big and nef.
    MinusKNotBigNef,
    /// Neither End cohomology nor a splitting type is available.
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoResult {
    pub rho: Option<i64>,
    pub reason: RhoReason,
}

/// Twist making `c₁ ∈ {1, 2, 3}`.
pub fn normalizing_twist(c1: i64) -> i64 {
    -(c1 - 1).div_euclid(3)
}

/// Picard number of `X`, valid when `−K_Z` is big and nef.
pub fn rho_of_x(spec: &BundleSpec, big_and_nef: Tri) -> RhoResult {
    if !big_and_nef.is_true() {
        return RhoResult {
            rho: None,
            reason: RhoReason::MinusKNotBigNef,
        };
    }
    if let Some(e) = spec.expr() {
        if let Ok(t) = cohom_expr(&e.end()) {
            return RhoResult {
                rho: Some(2 + t.h2),
                reason: RhoReason::EndCohomology,
            };
        }
    }
    match spec.splitting_type() {
        Some(ty) => {
            let t = normalizing_twist(ty.iter().sum());
            if ty.map(|x| x + t) == [0, 0, 3] {
                RhoResult {
                    rho: None,
                    reason: RhoReason::SplittingType003,
                }
            } else {
                RhoResult {
                    rho: Some(2),
                    reason: RhoReason::SplittingType,
                }
            }
        }
        None => RhoResult {
            rho: None,
            reason: RhoReason::Undetermined,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::CatalogId;

    fn cp(c1: i64, c2: i64) -> ChernPair {
        ChernPair::new(c1, c2)
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(cp(3, 2)), 3);
        assert_eq!(gamma(cp(3, 6)), -9);
        assert_eq!(gamma(cp(3, 3)), 0);
    }

    #[test]
    fn xprod_for_012() {
        let inv = xprod_table(cp(3, 2)).unwrap();
        assert_eq!(inv.xprod.as_array(), [21, 9, 3, 78, 36, -180]);
        assert_eq!(inv.c3, -180);
        assert_eq!(inv.clone().with_rho(Some(2)).h12, Some(92));
        assert_eq!(inv.with_rho(Some(4)).h12, None);
    }

    #[test]
    fn chi_examples() {
        // c₁ = 2, c₂ = 1: γ = 1, χ = 1/3 + 20/3 = 7
        assert_eq!(chi_on_x(cp(2, 1), (1, 0), 1), Rational::from_int(7));
        // c₁ = 3, c₂ = 2: γ = 3, χ = 10
        assert_eq!(chi_on_x(cp(3, 2), (1, 0), 1), Rational::from_int(10));
        assert!(chi_on_x(cp(1, 5), (0, 0), 3).is_zero());
        // O_X(1) on X ⊂ P²×P²: 9·(1/6)(ξ+H)³... check only oddness in m
        let c = cp(0, 0);
        assert_eq!(chi_on_x(c, (1, 1), -2), -chi_on_x(c, (1, 1), 2));
    }

    #[test]
    fn bounds_012() {
        let b = section_bounds(cp(3, 2));
        assert_eq!(b.lb_minus_h, Rational::from_int(4));
        assert_eq!(b.normal_bound, 106);
        assert!(b.c1_at_least_minus_1 && b.lb_positive);
        assert_eq!(b.c1_at_least_1, Some(true));
        assert_eq!(section_bounds(cp(0, 6)).normal_bound, 1);
    }

    #[test]
    fn rho_cases() {
        let r = rho_of_x(&BundleSpec::split([0, 0, 3]), Tri::True);
        assert_eq!(r, RhoResult { rho: Some(4), reason: RhoReason::EndCohomology });
        assert_eq!(rho_of_x(&BundleSpec::split([0, 1, 2]), Tri::True).rho, Some(2));
        let r = rho_of_x(&BundleSpec::named(CatalogId::TangentP3Restricted), Tri::True);
        assert_eq!(r, RhoResult { rho: Some(2), reason: RhoReason::SplittingType });
        let r = rho_of_x(&BundleSpec::split([0, 1, 2]), Tri::Unknown);
        assert_eq!(r.rho, None);
        assert_eq!(normalizing_twist(4), -1);
        assert_eq!(normalizing_twist(0), 1);
        assert_eq!(normalizing_twist(3), 0);
        assert_eq!(normalizing_twist(-2), 1);
    }
}
