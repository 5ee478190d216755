//! Built-in regression checks, runnable from the CLI.
//!
//! The Gram matrix and the closed form for `c₃(X)` are injectable so that
//! a tampered formula can be shown to be caught.

use serde::{Deserialize, Serialize};

use crate::bundle::{BundleSpec, CatalogId, MinusKHint};
use crate::chow::{gram_matrix, ChernPair, ChowClass, ChowRing, GramMatrix};
use crate::cohom::{chi_rr, cohom_expr, cohom_sym_t, SheafExpr};
use crate::cone::{
    allowed_splitting_types, anticanonical_degree, boundary_root, c2_positivity, c2_root_bound,
    d_cubed_at, genkollar_classify, minus_k_status, rationality_verdict, KollarCase, Normalization,
    Verdict,
};
use crate::cyinv::{chi_on_x, chi_on_x_coeffs, rho_of_x, xprod_closed_form, xprod_engine};
use crate::error::Result;
use crate::exactnum::{perfect_square, quad_is_rational, QuadValue, Rational};
use crate::report::split_types;
use crate::tri::Tri;

#[derive(Debug, Clone, Copy)]
pub struct Hooks {
    pub gram: fn(ChernPair) -> Result<GramMatrix>,
    pub c3_closed: fn(ChernPair) -> i64,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks {
            gram: gram_matrix,
            c3_closed: |c| xprod_closed_form(c).c3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: Vec<CheckResult>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn grid() -> impl Iterator<Item = ChernPair> {
    (-6..=6).flat_map(|c1| (-10..=10).map(move |c2| ChernPair::new(c1, c2)))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

fn split_section(e2: i64, e3: i64) -> ChowClass {
    ChowRing::new(ChernPair::new(0, 0)).mul(&ChowClass::divisor(1, -e2), &ChowClass::divisor(1, -e3))
}

fn check_example_012(_: &Hooks) -> Check {
    let spec = BundleSpec::split([0, 1, 2]);
    let deg = anticanonical_degree(spec.chern());
    ensure(deg == Rational::from_int(567), || format!("(-K_Z)^4 = {deg}"))?;
    let st = minus_k_status(&spec);
    ensure((st.nef, st.ample, st.big) == (Tri::True, Tri::False, Tri::True), || {
        format!("nef/ample/big = {}/{}/{}", st.nef, st.ample, st.big)
    })?;
    match lift(genkollar_classify(&spec))? {
        KollarCase::ExceptionalCandidate {
            reduced_class: Some(g),
            ..
        } => ensure(g == split_section(1, 2), || format!("G = {g:?}")),
        other => Err(format!("kollar case {other:?}")),
    }
}

fn check_example_003(_: &Hooks) -> Check {
    let spec = BundleSpec::split([0, 0, 3]);
    let deg = anticanonical_degree(spec.chern());
    ensure(deg == Rational::from_int(729), || format!("(-K_Z)^4 = {deg}"))?;
    let end = lift(cohom_expr(&SheafExpr::split(&[0, 0, 3]).end()))?;
    ensure(end.h2 == 2, || format!("h2(End E) = {}", end.h2))?;
    let rho = rho_of_x(&spec, minus_k_status(&spec).big_and_nef());
    ensure(rho.rho == Some(4), || format!("rho = {:?}", rho.rho))
}

fn check_uniform_gammas(_: &Hooks) -> Check {
    let got: Vec<i64> = [
        CatalogId::SplitFamily { a: 1, b: 2 },
        CatalogId::TangentPlusTrivial,
        CatalogId::TwistedTangentPlusO2,
        CatalogId::SymSquareTwistedTangent,
    ]
    .iter()
    .map(|id| id.chern().gamma())
    .collect();
    ensure(got == [3, 0, 0, -9], || format!("gammas {got:?}"))
}

fn check_xprod_grid(_: &Hooks) -> Check {
    for c in grid() {
        let e = lift(xprod_engine(c))?;
        let f = xprod_closed_form(c);
        ensure(e.as_array()[..5] == f.as_array()[..5], || {
            format!("c = {c}: engine {:?}, closed {:?}", e, f)
        })?;
    }
    Ok(())
}

fn check_c3_closed_form(h: &Hooks) -> Check {
    for c in grid() {
        let e = lift(xprod_engine(c))?.c3;
        let f = (h.c3_closed)(c);
        ensure(e == f, || format!("c = {c}: engine c3 = {e}, closed form {f}"))?;
    }
    Ok(())
}

fn check_chi_end(_: &Hooks) -> Check {
    for e in split_types(-4, 4) {
        let end = SheafExpr::split(&e).end();
        let t = lift(cohom_expr(&end))?;
        let rr = lift(chi_rr(&end))?;
        let g = ChernPair::from_split(e).gamma();
        ensure(t.chi == 2 * g + 9 && rr == 2 * g + 9, || {
            format!("{e:?}: cohomology {}, RR {rr}, 2g+9 = {}", t.chi, 2 * g + 9)
        })?;
    }
    Ok(())
}

fn check_tab(_: &Hooks) -> Check {
    let want: [(i64, &[[i64; 3]]); 6] = [
        (-1, &[[-1, -1, 1], [-1, 0, 0]]),
        (0, &[[-1, 0, 1], [0, 0, 0]]),
        (1, &[[0, 0, 1]]),
        (2, &[[0, 0, 2], [0, 1, 1]]),
        (3, &[[0, 1, 2], [1, 1, 1]]),
        (4, &[[1, 1, 2]]),
    ];
    for (c1, rows) in want {
        let got = allowed_splitting_types(c1);
        ensure(got == rows, || format!("c1 = {c1}: {got:?}"))?;
    }
    Ok(())
}

fn check_rr_on_x(_: &Hooks) -> Check {
    for c2 in -10..=10 {
        let c = ChernPair::new(2, c2);
        let g = Rational::from_int(c.gamma());
        let want = &g * &q(1, 3) + q(20, 3);
        let got = chi_on_x(c, (1, 0), 1);
        ensure(got == want, || format!("c = {c}: chi(O_X(1)) = {got}"))?;
        let c = ChernPair::new(3, c2);
        let g = Rational::from_int(c.gamma());
        let got = chi_on_x(c, (1, 0), 1);
        ensure(got == &g * &q(1, 3) + Rational::from_int(9), || {
            format!("c = {c}: chi(O_X(1)) = {got}")
        })?;
        let c = ChernPair::new(-1, c2);
        let g = Rational::from_int(c.gamma());
        let (a, b) = chi_on_x_coeffs(c, (3, 0));
        ensure(
            a == &g * &q(9, 2) - Rational::from_int(9) && b == &g * &q(1, 2) + Rational::from_int(6),
            || format!("c = {c}: chi(m O_X(3)) = ({a}) m^3 + ({b}) m"),
        )?;
    }
    Ok(())
}

fn check_plethysm(_: &Hooks) -> Check {
    let s4 = cohom_sym_t(4, -5).h0;
    ensure(s4 == 0, || format!("h0(S^4 T(-5)) = {s4}"))?;
    let e = SheafExpr::sym_tangent(1, -1).sym(2).sym(2).twist(-1);
    let t = lift(cohom_expr(&e))?;
    ensure(t.h0 == 3, || format!("h0(S^2 E(-1)) = {}", t.h0))
}

fn check_boundary_root(_: &Hooks) -> Check {
    let c = CatalogId::SymSquareTwistedTangent.chern();
    let r = lift(boundary_root(c, Normalization::Oz3))?;
    let k = r.k.ok_or("no root")?;
    ensure(k == QuadValue::new(q(9, 2), q(-3, 2), 5), || format!("k = {k}"))?;
    ensure(!quad_is_rational(&k), || "k reported rational".into())?;
    let d3 = lift(d_cubed_at(c, Normalization::Oz3, &k))?;
    ensure(d3.signum() == 0, || format!("D^3 = {d3}"))?;
    for g in -27..=2i64 {
        // any c₁ with c₁² ≡ γ (mod 3)
        let Some(c) = (0..3).find(|c1| (c1 * c1 - g).rem_euclid(3) == 0).map(|c1| ChernPair::new(c1, (c1 * c1 - g) / 3)) else {
            continue;
        };
        let k = lift(boundary_root(c, Normalization::Oz3))?.k.ok_or("no root")?;
        let square = perfect_square(&(9 - 4 * g).into()).is_some();
        ensure(quad_is_rational(&k) == square, || format!("gamma = {g}: k = {k}"))?;
    }
    Ok(())
}

fn check_gram(h: &Hooks) -> Check {
    for c in grid() {
        let m = lift((h.gram)(c))?;
        let want = [[0, 0, 1], [0, 1, c.c1], [1, c.c1, c.c1 * c.c1 - c.c2]];
        ensure(m.entries == want && m.det == -1, || {
            format!("c = {c}: entries {:?}, det {}", m.entries, m.det)
        })?;
    }
    Ok(())
}

fn check_c2_sweep(_: &Hooks) -> Check {
    for g in -27..=27i64 {
        if g <= 2 {
            let b = lift(c2_root_bound(g))?;
            ensure(b.signum() > 0, || format!("gamma = {g}: bound {b}"))?;
        }
        let Some(c) = (0..3).find(|c1| (c1 * c1 - g).rem_euclid(3) == 0).map(|c1| ChernPair::new(c1, (c1 * c1 - g) / 3)) else {
            continue;
        };
        let p = lift(c2_positivity(c))?;
        ensure(p.positive && p.hray_value == 36, || {
            format!("gamma = {g}: min {} h-ray {}", p.min_value, p.hray_value)
        })?;
    }
    Ok(())
}

fn check_nef_gamma(_: &Hooks) -> Check {
    for e in split_types(-4, 4) {
        let spec = BundleSpec::split(e);
        if minus_k_status(&spec).nef.is_true() {
            let g = spec.gamma();
            ensure(g >= -18, || format!("{e:?}: nef with gamma = {g}"))?;
            let v = lift(rationality_verdict(&spec))?;
            ensure(v.verdict == Verdict::Rational, || format!("{e:?}: verdict unknown"))?;
        }
    }
    Ok(())
}

fn check_mu_c1_2(_: &Hooks) -> Check {
    for c2 in -10..=10 {
        let spec = BundleSpec::chern_only(ChernPair::new(2, c2)).with_hint(MinusKHint::NefNotAmple);
        let g = crate::chow::g_surface_class(spec.chern());
        ensure(g.mu_candidates.is_empty(), || format!("c2 = {c2}: mu {:?}", g.mu_candidates))?;
        if spec.gamma() > -18 {
            let k = lift(genkollar_classify(&spec))?;
            ensure(matches!(k, KollarCase::Equality { .. }), || format!("c2 = {c2}: {k:?}"))?;
        }
    }
    Ok(())
}

type CheckFn = fn(&Hooks) -> Check;

pub const CHECKS: [(&str, CheckFn); 14] = [
    ("split_012_exceptional_surface", check_example_012),
    ("split_003_picard_number", check_example_003),
    ("uniform_012_gammas", check_uniform_gammas),
    ("pairings_closed_forms", check_xprod_grid),
    ("c3_closed_form", check_c3_closed_form),
    ("chi_end_equals_2gamma_plus_9", check_chi_end),
    ("splitting_type_table", check_tab),
    ("riemann_roch_on_x", check_rr_on_x),
    ("plethysm_s2s2", check_plethysm),
    ("boundary_root_exact", check_boundary_root),
    ("gram_unimodular", check_gram),
    ("c2_positivity_sweep", check_c2_sweep),
    ("nef_implies_gamma_bound", check_nef_gamma),
    ("mu_candidates_empty_c1_2", check_mu_c1_2),
];

pub fn run_with(hooks: &Hooks) -> Summary {
    let checks = CHECKS
        .iter()
        .map(|(name, f)| {
            let r = f(hooks);
            CheckResult {
                name: name.to_string(),
                passed: r.is_ok(),
                detail: r.err().unwrap_or_default(),
            }
        })
        .collect();
    Summary { checks }
}

pub fn run() -> Summary {
    run_with(&Hooks::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass() {
        let s = run();
        assert!(s.all_passed(), "{:?}", s.failed());
    }

    #[test]
    fn tampered_gram_is_named() {
        let hooks = Hooks {
            gram: |c| {
                let mut m = gram_matrix(c)?;
                m.entries[2][2] += 1;
                m.det = crate::chow::det3(&m.entries);
                Ok(m)
            },
            ..Hooks::default()
        };
        let s = run_with(&hooks);
        let failed: Vec<&str> = s.failed().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["gram_unimodular"]);
    }

    #[test]
    fn tampered_c3_is_named() {
        let hooks = Hooks {
            c3_closed: |c| -6 * c.gamma() - 160,
            ..Hooks::default()
        };
        let failed: Vec<String> = run_with(&hooks).failed().iter().map(|c| c.name.clone()).collect();
        assert_eq!(failed, vec!["c3_closed_form"]);
    }
}
