//! Aggregated analysis of one bundle, and survey rows over split bundles.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleSpec;
use crate::chow::{g_surface_class, gram_matrix, ChernPair, GSurface, GramMatrix};
use crate::cone::{
    allowed_splitting_types, cone_report, minus_k_status, ConeReport, KollarCase, MinusKStatus,
    Verdict,
};
use crate::cyinv::{h12_rho2, rho_of_x, section_bounds, xprod_table, CYInvariants, RhoResult, SectionBounds};
use crate::error::{Error, Result};
use crate::tri::Tri;

pub const WARN_RHO2_VERDICT: &str = "rationality verdict assumes rho(X) = 2";
pub const WARN_H12_ASSUMED: &str = "h12 assumes rho(X) = 2";
pub const WARN_GAMMA_BOUNDARY: &str = "gamma = -27: c3(X) = 0, at the boundary of validity for rho(X) = 2";
pub const WARN_GAMMA_INCONSISTENT: &str = "gamma < -27 is inconsistent with rho(X) = 2";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub spec: BundleSpec,
    pub label: String,
    pub chern: ChernPair,
    pub splitting_type: Option<[i64; 3]>,
    pub gamma: i64,
    pub c3: i64,
    pub invariants: CYInvariants,
    pub rho: RhoResult,
    pub minus_k: MinusKStatus,
    pub cone: ConeReport,
    pub section_bounds: SectionBounds,
    pub g_surface: GSurface,
    pub gram: GramMatrix,
    pub warnings: Vec<String>,
}

pub fn analyze(spec: &BundleSpec) -> Result<AnalysisReport> {
    let c = spec.chern();
    let gram = gram_matrix(c)?;
    if gram.det != -1 {
        return Err(Error::Invariant(format!(
            "Gram determinant {} != -1 for c = {c}",
            gram.det
        )));
    }
    let minus_k = minus_k_status(spec);
    let rho = rho_of_x(spec, minus_k.big_and_nef());
    let mut invariants = xprod_table(c)?.with_rho(rho.rho);
    let mut warnings = Vec::new();
    match rho.rho {
        Some(2) => {}
        Some(r) => warnings.push(format!("rho(X) = {r}: {WARN_RHO2_VERDICT}")),
        None => {
            warnings.push(WARN_RHO2_VERDICT.to_string());
            if invariants.consistent_with_rho2() {
                invariants.h12 = Some(h12_rho2(invariants.gamma));
                warnings.push(WARN_H12_ASSUMED.to_string());
            }
        }
    }
    if invariants.gamma == -27 {
        warnings.push(WARN_GAMMA_BOUNDARY.to_string());
    }
    if !invariants.consistent_with_rho2() {
        warnings.push(WARN_GAMMA_INCONSISTENT.to_string());
    }
    let cone = cone_report(spec, &minus_k)?;
    if let Some(t) = cone.trail.first().filter(|t| t.conditional) {
        warnings.push(format!(
            "verdict from {} assumes every boundary ray off W(X) is rational",
            t.tag
        ));
    }
    Ok(AnalysisReport {
        spec: spec.clone(),
        label: spec.label(),
        chern: c,
        splitting_type: spec.splitting_type(),
        gamma: invariants.gamma,
        c3: invariants.c3,
        rho,
        minus_k,
        cone,
        section_bounds: section_bounds(c),
        g_surface: g_surface_class(c),
        gram,
        invariants,
        warnings,
    })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "unknown".to_string(), T::to_string)
}

fn kollar_tag(k: &KollarCase) -> &'static str {
    match k {
        KollarCase::Equality { .. } => "equality",
        KollarCase::ExceptionalCandidate { .. } => "exceptional_candidate",
        KollarCase::NotDetermined => "not_determined",
    }
}

fn verdict_tag(v: Verdict) -> &'static str {
    match v {
        Verdict::Rational => "rational",
        Verdict::Unknown => "unknown",
    }
}

impl AnalysisReport {
    pub const TSV_COLUMNS: [&'static str; 16] = [
        "label", "c1", "c2", "gamma", "c3", "h12", "rho", "nef", "ample", "big", "h0_minus_k",
        "h0_gt_1", "verdict", "k_oz3", "c2_min", "kollar_case",
    ];

    pub fn tsv_row(&self) -> String {
        let cols = [
            self.label.clone(),
            self.chern.c1.to_string(),
            self.chern.c2.to_string(),
            self.gamma.to_string(),
            self.c3.to_string(),
            opt(&self.invariants.h12),
            opt(&self.rho.rho),
            self.minus_k.nef.to_string(),
            self.minus_k.ample.to_string(),
            self.minus_k.big.to_string(),
            opt(&self.minus_k.h0.value),
            self.minus_k.h0_gt_1.to_string(),
            verdict_tag(self.cone.verdict).to_string(),
            self.cone.root_oz3.k.as_ref().map_or_else(|| "none".into(), |k| k.to_string()),
            self.cone.c2.min_value.to_string(),
            kollar_tag(&self.cone.kollar_case).to_string(),
        ];
        cols.join("\t")
    }

    /// Plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "bundle          {}", self.label);
        let _ = writeln!(s, "chern           c1 = {}, c2 = {}", self.chern.c1, self.chern.c2);
        if let Some(t) = self.splitting_type {
            let _ = writeln!(s, "splitting type  ({}, {}, {})", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "gamma           {}", self.gamma);
        let _ = writeln!(s, "c3(X)           {}", self.c3);
        let _ = writeln!(s, "h12(X)          {}", opt(&self.invariants.h12));
        let reason = serde_json::to_value(self.rho.reason)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let _ = writeln!(s, "rho(X)          {} ({reason})", opt(&self.rho.rho));
        let x = &self.invariants.xprod;
        let _ = writeln!(
            s,
            "pairings        xi^3 {}, xi^2.h {}, xi.F {}, xi.c2 {}, h.c2 {}",
            x.xi3, x.xi2_h, x.xi_f, x.xi_c2, x.h_c2
        );
        let m = &self.minus_k;
        let _ = writeln!(
            s,
            "-K_Z            nef {}, ample {}, big {}, h0 {} (> 1: {})",
            m.nef,
            m.ample,
            m.big,
            opt(&m.h0.value),
            m.h0_gt_1
        );
        for w in &m.witnesses {
            let _ = writeln!(s, "  {} = {:?}", w.test, w.value);
        }
        let c = &self.cone;
        let _ = writeln!(
            s,
            "boundary root   {}",
            c.root_oz3.k.as_ref().map_or_else(|| "none".into(), |k| k.to_string())
        );
        let _ = writeln!(
            s,
            "  O_X(1) ray    {}",
            c.root_oz1.k.as_ref().map_or_else(|| "none".into(), |k| k.to_string())
        );
        let _ = writeln!(s, "verdict         {}", verdict_tag(c.verdict));
        for t in &c.trail {
            let cond = if t.conditional { " [conditional]" } else { "" };
            let _ = writeln!(s, "  {}: {}{cond}", t.tag, t.detail);
        }
        let _ = writeln!(
            s,
            "D.c2 minimum    {} (positive: {})",
            c.c2.min_value, c.c2.positive
        );
        let _ = writeln!(s, "kollar case     {}", kollar_tag(&c.kollar_case));
        if let KollarCase::ExceptionalCandidate { surface, reduced_class } = &c.kollar_case {
            let _ = writeln!(
                s,
                "  mu*G = {:?} on (xi^2, xi.h, F), mu in {:?}",
                surface.coeffs, surface.mu_candidates
            );
            if let Some(r) = reduced_class {
                let _ = writeln!(s, "  G (mu = 9) = {r:?}");
            }
        }
        let b = &self.section_bounds;
        let _ = writeln!(
            s,
            "section bounds  h0(O_X(1)-h) >= {:?}, chi(O_X(1)) = {:?}, h0(N) >= {}",
            b.lb_minus_h, b.h0_o1_chi, b.normal_bound
        );
        let _ = writeln!(s, "  ({})", b.hypotheses.join(", "));
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub splitting_type: [i64; 3],
    pub c1: i64,
    pub c2: i64,
    pub gamma: i64,
    pub nef: Tri,
    pub ample: Tri,
    pub big: Tri,
    pub rho: Option<i64>,
    pub verdict: Verdict,
    pub tab_admissible: bool,
}

impl SurveyRow {
    pub const TSV_COLUMNS: [&'static str; 12] = [
        "e1", "e2", "e3", "c1", "c2", "gamma", "nef", "ample", "big", "rho", "verdict",
        "tab_admissible",
    ];

    pub fn tsv_row(&self) -> String {
        let e = self.splitting_type;
        [
            e[0].to_string(),
            e[1].to_string(),
            e[2].to_string(),
            self.c1.to_string(),
            self.c2.to_string(),
            self.gamma.to_string(),
            self.nef.to_string(),
            self.ample.to_string(),
            self.big.to_string(),
            opt(&self.rho),
            verdict_tag(self.verdict).to_string(),
            self.tab_admissible.to_string(),
        ]
        .join("\t")
    }
}

pub fn survey_row(e: [i64; 3]) -> Result<SurveyRow> {
    let r = analyze(&BundleSpec::split(e))?;
    let e = r.splitting_type.unwrap_or(e);
    Ok(SurveyRow {
        splitting_type: e,
        c1: r.chern.c1,
        c2: r.chern.c2,
        gamma: r.gamma,
        nef: r.minus_k.nef,
        ample: r.minus_k.ample,
        big: r.minus_k.big,
        rho: r.rho.rho,
        verdict: r.cone.verdict,
        tab_admissible: allowed_splitting_types(r.chern.c1).contains(&e),
    })
}

/// All sorted triples with entries in `[emin, emax]`.
pub fn split_types(emin: i64, emax: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for a in emin..=emax {
        for b in a..=emax {
            for c in b..=emax {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub const SURVEY_MAX_SPAN: i64 = 12;

/// Survey of split bundles, rows in lexicographic order of the exponents.
pub fn survey(emin: i64, emax: i64, workers: usize) -> Result<Vec<SurveyRow>> {
    if emin > emax {
        return Err(Error::Usage(format!("--emin {emin} exceeds --emax {emax}")));
    }
    if emax - emin > SURVEY_MAX_SPAN {
        return Err(Error::Usage(format!(
            "range [{emin}, {emax}] is wider than {SURVEY_MAX_SPAN}"
        )));
    }
    let types = split_types(emin, emax);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    let mut rows: Vec<SurveyRow> = pool.install(|| {
        types
            .par_iter()
            .map(|&e| survey_row(e))
            .collect::<Result<Vec<_>>>()
    })?;
    rows.sort_by_key(|r| r.splitting_type);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::CatalogId;

    #[test]
    fn report_012() {
        let r = analyze(&BundleSpec::split([0, 1, 2])).unwrap();
        assert_eq!((r.gamma, r.c3), (3, -180));
        assert_eq!(r.cone.verdict, Verdict::Rational);
        assert_eq!(r.invariants.h12, Some(92));
        let json = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn report_chern_only_boundary() {
        let r = analyze(&BundleSpec::chern_only(ChernPair::new(3, 12))).unwrap();
        assert_eq!(r.c3, 0);
        assert_eq!(r.invariants.h12, Some(2));
        assert!(r.warnings.iter().any(|w| w == WARN_GAMMA_BOUNDARY));
        assert!(r.warnings.iter().any(|w| w == WARN_H12_ASSUMED));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<AnalysisReport>(&json).unwrap(), r);
    }

    #[test]
    fn report_named_rho4() {
        let r = analyze(&BundleSpec::named(CatalogId::TwoTrivialPlusO3)).unwrap();
        assert_eq!(r.rho.rho, Some(4));
        assert_eq!(r.invariants.h12, None);
        assert_eq!(r.tsv_row().split('\t').count(), AnalysisReport::TSV_COLUMNS.len());
    }

    #[test]
    fn survey_trivial_range() {
        let rows = survey(0, 0, 1).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.splitting_type, [0, 0, 0]);
        assert_eq!(r.ample, Tri::True);
        assert_eq!(r.rho, Some(2));
        assert!(survey(0, 13, 1).is_err());
        assert!(survey(1, 0, 1).is_err());
    }

    #[test]
    fn survey_worker_invariance() {
        assert_eq!(survey(-2, 2, 1).unwrap(), survey(-2, 2, 4).unwrap());
    }
}
