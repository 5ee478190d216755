//! Rank-3 bundles on `P²` as analysis inputs: split bundles, the named
//! catalog, and bare Chern data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chow::ChernPair;
use crate::cohom::SheafExpr;
use crate::error::{Error, Result};

/// Named bundles with known Chern numbers and (uniform) splitting type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogId {
    /// `O ⊕ O(a) ⊕ O(b)`.
    SplitFamily { a: i64, b: i64 },
    /// `T_{P³}|P²`.
    TangentP3Restricted,
    /// `T_{P²} ⊕ O`.
    TangentPlusTrivial,
    /// `T_{P²}(−1) ⊕ O(2)`.
    TwistedTangentPlusO2,
    /// `S²(T_{P²}(−1))`.
    SymSquareTwistedTangent,
    /// `2O ⊕ O(3)`.
    TwoTrivialPlusO3,
}

/// The named catalog in listing order.
pub const CATALOG: [CatalogId; 10] = [
    CatalogId::SplitFamily { a: 0, b: 0 },
    CatalogId::SplitFamily { a: 0, b: 1 },
    CatalogId::SplitFamily { a: 0, b: 2 },
    CatalogId::SplitFamily { a: 1, b: 1 },
    CatalogId::SplitFamily { a: 1, b: 2 },
    CatalogId::TangentP3Restricted,
    CatalogId::TangentPlusTrivial,
    CatalogId::TwistedTangentPlusO2,
    CatalogId::SymSquareTwistedTangent,
    CatalogId::TwoTrivialPlusO3,
];

/// How the cohomology of `E` (and of `S^pE`) can be computed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomStrategy {
    /// `O(e₁) ⊕ O(e₂) ⊕ O(e₃)`.
    Split([i64; 3]),
    /// A sheaf expression in `O(k)` and `S^aT(b)`.
    SymTangent(SheafExpr),
    /// `(O(1)^rank / O) ⊗ O(twist)`.
    RestrictedEuler { rank: u32, twist: i64 },
    /// Only Chern data are known.
    None,
}

impl CohomStrategy {
    pub fn tag(&self) -> &'static str {
        match self {
            CohomStrategy::Split(_) => "split",
            CohomStrategy::SymTangent(_) => "sym_tangent",
            CohomStrategy::RestrictedEuler { .. } => "restricted_euler",
            CohomStrategy::None => "none",
        }
    }

    fn twisted(self, t: i64) -> CohomStrategy {
        if t == 0 {
            return self;
        }
        match self {
            CohomStrategy::Split(e) => CohomStrategy::Split(e.map(|x| x + t)),
            CohomStrategy::SymTangent(expr) => CohomStrategy::SymTangent(expr.twist(t)),
            CohomStrategy::RestrictedEuler { rank, twist } => CohomStrategy::RestrictedEuler {
                rank,
                twist: twist + t,
            },
            CohomStrategy::None => CohomStrategy::None,
        }
    }
}

fn sorted(mut e: [i64; 3]) -> [i64; 3] {
    e.sort_unstable();
    e
}

impl CatalogId {
    pub fn name(&self) -> String {
        match self {
            CatalogId::SplitFamily { a, b } => format!("O+O({a})+O({b})"),
            CatalogId::TangentP3Restricted => "TP3restP2".into(),
            CatalogId::TangentPlusTrivial => "TP2+O".into(),
            CatalogId::TwistedTangentPlusO2 => "TP2(-1)+O(2)".into(),
            CatalogId::SymSquareTwistedTangent => "S2TP2(-1)".into(),
            CatalogId::TwoTrivialPlusO3 => "2O+O(3)".into(),
        }
    }

    pub fn chern(&self) -> ChernPair {
        match self {
            CatalogId::SplitFamily { a, b } => ChernPair::from_split([0, *a, *b]),
            CatalogId::TangentP3Restricted => ChernPair::new(4, 6),
            CatalogId::TangentPlusTrivial => ChernPair::new(3, 3),
            CatalogId::TwistedTangentPlusO2 => ChernPair::new(3, 3),
            CatalogId::SymSquareTwistedTangent => ChernPair::new(3, 6),
            CatalogId::TwoTrivialPlusO3 => ChernPair::new(3, 0),
        }
    }

    /// Splitting type on a general line; every catalog bundle is uniform.
    pub fn splitting_type(&self) -> [i64; 3] {
        match self {
            CatalogId::SplitFamily { a, b } => sorted([0, *a, *b]),
            CatalogId::TangentP3Restricted => [1, 1, 2],
            CatalogId::TangentPlusTrivial
            | CatalogId::TwistedTangentPlusO2
            | CatalogId::SymSquareTwistedTangent => [0, 1, 2],
            CatalogId::TwoTrivialPlusO3 => [0, 0, 3],
        }
    }

    pub fn strategy(&self) -> CohomStrategy {
        match self {
            CatalogId::SplitFamily { a, b } => CohomStrategy::Split(sorted([0, *a, *b])),
            CatalogId::TwoTrivialPlusO3 => CohomStrategy::Split([0, 0, 3]),
            CatalogId::TangentP3Restricted => CohomStrategy::RestrictedEuler { rank: 4, twist: 0 },
            CatalogId::TangentPlusTrivial => CohomStrategy::SymTangent(SheafExpr::sum(vec![
                SheafExpr::sym_tangent(1, 0),
                SheafExpr::line(0),
            ])),
            CatalogId::TwistedTangentPlusO2 => CohomStrategy::SymTangent(SheafExpr::sum(vec![
                SheafExpr::sym_tangent(1, -1),
                SheafExpr::line(2),
            ])),
            CatalogId::SymSquareTwistedTangent => {
                CohomStrategy::SymTangent(SheafExpr::sym_tangent(1, -1).sym(2))
            }
        }
    }

    /// The bundle as a sheaf expression, when it has one.
    pub fn expr(&self) -> Option<SheafExpr> {
        match self.strategy() {
            CohomStrategy::Split(e) => Some(SheafExpr::split(&e)),
            CohomStrategy::SymTangent(e) => Some(e),
            _ => None,
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(id) = CATALOG
            .iter()
            .find(|id| !matches!(id, CatalogId::SplitFamily { .. }) && id.name() == s)
        {
            return Ok(*id);
        }
        // O+O(a)+O(b) with arbitrary a, b
        if let Ok(SheafExpr::DirectSum(parts)) = s.parse::<SheafExpr>() {
            if let [SheafExpr::Line(0), SheafExpr::Line(a), SheafExpr::Line(b)] = parts.as_slice() {
                return Ok(CatalogId::SplitFamily { a: *a, b: *b });
            }
        }
        let known: Vec<String> = CATALOG.iter().map(CatalogId::name).collect();
        Err(Error::usage(format!(
            "unknown catalog bundle `{s}` (known: {}, or O+O(a)+O(b))",
            known.join(", ")
        )))
    }
}

impl Serialize for CatalogId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CatalogId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Externally supplied positivity of `−K_Z`, used when only Chern data are
/// known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinusKHint {
    Ample,
    NefNotAmple,
    NotNef,
}

impl FromStr for MinusKHint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ample" => Ok(MinusKHint::Ample),
            "nef-not-ample" => Ok(MinusKHint::NefNotAmple),
            "not-nef" => Ok(MinusKHint::NotNef),
            _ => Err(Error::usage(format!(
                "unknown -K_Z hint `{s}` (ample, nef-not-ample, not-nef)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BundleKind {
    /// Exponents, sorted ascending.
    Split([i64; 3]),
    Named(CatalogId),
    ChernOnly(ChernPair),
}

/// A rank-3 bundle `E ⊗ O(twist)` on `P²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSpec {
    pub kind: BundleKind,
    pub twist: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_k_hint: Option<MinusKHint>,
}

impl BundleSpec {
    pub fn split(e: [i64; 3]) -> Self {
        BundleSpec {
            kind: BundleKind::Split(sorted(e)),
            twist: 0,
            minus_k_hint: None,
        }
    }

    pub fn named(id: CatalogId) -> Self {
        BundleSpec {
            kind: BundleKind::Named(id),
            twist: 0,
            minus_k_hint: None,
        }
    }

    pub fn chern_only(c: ChernPair) -> Self {
        BundleSpec {
            kind: BundleKind::ChernOnly(c),
            twist: 0,
            minus_k_hint: None,
        }
    }

    pub fn twisted(mut self, t: i64) -> Self {
        self.twist += t;
        self
    }

    pub fn with_hint(mut self, hint: MinusKHint) -> Self {
        self.minus_k_hint = Some(hint);
        self
    }

    /// Chern numbers of the twisted bundle.
    pub fn chern(&self) -> ChernPair {
        let base = match &self.kind {
            BundleKind::Split(e) => ChernPair::from_split(*e),
            BundleKind::Named(id) => id.chern(),
            BundleKind::ChernOnly(c) => *c,
        };
        base.twisted(self.twist)
    }

    pub fn gamma(&self) -> i64 {
        self.chern().gamma()
    }

    /// Splitting type on a general line, after the twist.
    pub fn splitting_type(&self) -> Option<[i64; 3]> {
        let base = match &self.kind {
            BundleKind::Split(e) => Some(*e),
            BundleKind::Named(id) => Some(id.splitting_type()),
            BundleKind::ChernOnly(_) => None,
        };
        base.map(|e| e.map(|x| x + self.twist))
    }

    /// Splitting type known to hold on every line.
    pub fn uniform_type(&self) -> Option<[i64; 3]> {
        self.splitting_type()
    }

    pub fn strategy(&self) -> CohomStrategy {
        let base = match &self.kind {
            BundleKind::Split(e) => CohomStrategy::Split(*e),
            BundleKind::Named(id) => id.strategy(),
            BundleKind::ChernOnly(_) => CohomStrategy::None,
        };
        base.twisted(self.twist)
    }

    /// The twisted bundle as a sheaf expression, when it has one.
    pub fn expr(&self) -> Option<SheafExpr> {
        match self.strategy() {
            CohomStrategy::Split(e) => Some(SheafExpr::split(&e)),
            CohomStrategy::SymTangent(e) => Some(e),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        let base = match &self.kind {
            BundleKind::Split(e) => format!("split({},{},{})", e[0], e[1], e[2]),
            BundleKind::Named(id) => id.name(),
            BundleKind::ChernOnly(c) => format!("chern({},{})", c.c1, c.c2),
        };
        if self.twist == 0 {
            base
        } else {
            format!("{base} twist {}", self.twist)
        }
    }
}

/// Parses `a,b,c` into three integers.
pub fn parse_triple(s: &str) -> Result<[i64; 3]> {
    let v = parse_ints(s)?;
    <[i64; 3]>::try_from(v).map_err(|_| Error::usage(format!("expected three integers, got `{s}`")))
}

/// Parses `c1,c2`.
pub fn parse_chern(s: &str) -> Result<ChernPair> {
    let v = parse_ints(s)?;
    match v.as_slice() {
        [c1, c2] => Ok(ChernPair::new(*c1, *c2)),
        _ => Err(Error::usage(format!("expected c1,c2, got `{s}`"))),
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::usage(format!("not an integer list: `{s}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::chern_data;
    use crate::exactnum::Rational;

    #[test]
    fn catalog_names_round_trip() {
        for id in CATALOG {
            assert_eq!(id.name().parse::<CatalogId>().unwrap(), id);
        }
        assert_eq!(
            "O+O(3)+O(-1)".parse::<CatalogId>().unwrap(),
            CatalogId::SplitFamily { a: 3, b: -1 }
        );
        assert!("T_P5".parse::<CatalogId>().is_err());
    }

    #[test]
    fn catalog_chern_pairs_match_their_expressions() {
        for id in CATALOG {
            if let Some(e) = id.expr() {
                let d = chern_data(&e);
                assert_eq!(d.rank, 3, "{id}");
                assert_eq!(d.c1, Rational::from_int(id.chern().c1), "{id}");
                assert_eq!(d.c2(), Rational::from_int(id.chern().c2), "{id}");
            }
        }
        // (1 + h)^4 truncated: c₁ = 4, c₂ = 6
        assert_eq!(CatalogId::TangentP3Restricted.chern(), ChernPair::new(4, 6));
    }

    #[test]
    fn catalog_splitting_types_have_matching_c1() {
        for id in CATALOG {
            let t = id.splitting_type();
            assert_eq!(t.iter().sum::<i64>(), id.chern().c1, "{id}");
        }
    }

    #[test]
    fn uniform_012_gammas() {
        let ids = [
            CatalogId::SplitFamily { a: 1, b: 2 },
            CatalogId::TangentPlusTrivial,
            CatalogId::TwistedTangentPlusO2,
            CatalogId::SymSquareTwistedTangent,
        ];
        let gammas: Vec<i64> = ids.iter().map(|id| id.chern().gamma()).collect();
        assert_eq!(gammas, vec![3, 0, 0, -9]);
    }

    #[test]
    fn twist_updates_everything() {
        let s = BundleSpec::split([2, 0, 1]).twisted(-1);
        assert_eq!(s.splitting_type(), Some([-1, 0, 1]));
        assert_eq!(s.chern(), ChernPair::from_split([-1, 0, 1]));
        assert_eq!(s.strategy(), CohomStrategy::Split([-1, 0, 1]));
        let n = BundleSpec::named(CatalogId::TangentP3Restricted).twisted(-1);
        assert_eq!(n.splitting_type(), Some([0, 0, 1]));
        assert_eq!(n.chern(), ChernPair::new(1, 1));
    }

    #[test]
    fn input_parsing() {
        assert_eq!(parse_triple("0, 1,2").unwrap(), [0, 1, 2]);
        assert!(parse_triple("0,1").is_err());
        assert_eq!(parse_chern("3,-12").unwrap(), ChernPair::new(3, -12));
        assert!(parse_chern("x,1").is_err());
        assert_eq!("nef-not-ample".parse::<MinusKHint>().unwrap(), MinusKHint::NefNotAmple);
    }
}
