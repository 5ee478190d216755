use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A formal sheaf on `P²` built from line bundles and twisted symmetric
/// powers of the tangent bundle.
///
/// Textual form: `O(k)`, `SymT(a,b)`, `e + e`, `twist(e,k)`, `sym(e,p)`,
/// `end(e)`, `dual(e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SheafExpr {
    Line(i64),
    /// `S^a(T_{P²}) ⊗ O(b)`.
    SymTangent { a: u32, b: i64 },
    DirectSum(Vec<SheafExpr>),
    TwistBy(Box<SheafExpr>, i64),
    SymPower(Box<SheafExpr>, i64),
    EndOf(Box<SheafExpr>),
    DualOf(Box<SheafExpr>),
}

impl SheafExpr {
    pub fn line(k: i64) -> Self {
        SheafExpr::Line(k)
    }

    pub fn sym_tangent(a: u32, b: i64) -> Self {
        SheafExpr::SymTangent { a, b }
    }

    /// `O(e₁) ⊕ O(e₂) ⊕ …`.
    pub fn split(exps: &[i64]) -> Self {
        SheafExpr::DirectSum(exps.iter().map(|&k| SheafExpr::Line(k)).collect())
    }

    pub fn sum(parts: Vec<SheafExpr>) -> Self {
        SheafExpr::DirectSum(parts)
    }

    pub fn twist(self, k: i64) -> Self {
        SheafExpr::TwistBy(Box::new(self), k)
    }

    pub fn sym(self, p: i64) -> Self {
        SheafExpr::SymPower(Box::new(self), p)
    }

    pub fn end(self) -> Self {
        SheafExpr::EndOf(Box::new(self))
    }

    pub fn dual(self) -> Self {
        SheafExpr::DualOf(Box::new(self))
    }
}

impl fmt::Display for SheafExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafExpr::Line(k) => write!(f, "O({k})"),
            SheafExpr::SymTangent { a, b } => write!(f, "SymT({a},{b})"),
            SheafExpr::DirectSum(parts) if parts.is_empty() => write!(f, "0"),
            SheafExpr::DirectSum(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            SheafExpr::TwistBy(e, k) => write!(f, "twist({e},{k})"),
            SheafExpr::SymPower(e, p) => write!(f, "sym({e},{p})"),
            SheafExpr::EndOf(e) => write!(f, "end({e})"),
            SheafExpr::DualOf(e) => write!(f, "dual({e})"),
        }
    }
}

impl FromStr for SheafExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

impl Serialize for SheafExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SheafExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, what: &str) -> Error {
        Error::usage(format!(
            "bad sheaf expression `{}`: {what} at offset {}",
            self.src, self.pos
        ))
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
            .count();
        let v = rest[..len]
            .parse::<i64>()
            .map_err(|_| self.error("expected integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn sum(&mut self) -> Result<SheafExpr> {
        let mut parts = vec![self.atom()?];
        while self.eat("+") {
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            SheafExpr::DirectSum(parts)
        })
    }

    fn atom(&mut self) -> Result<SheafExpr> {
        self.skip_ws();
        if self.eat("(") {
            let e = self.sum()?;
            self.expect(")")?;
            return Ok(e);
        }
        for (kw, unary) in [("twist", 0), ("sym", 1), ("SymT", 2), ("end", 3), ("dual", 4)] {
            if self.eat(kw) {
                self.expect("(")?;
                let e = match unary {
                    0 | 1 => {
                        let inner = self.sum()?;
                        self.expect(",")?;
                        let k = self.int()?;
                        if unary == 0 {
                            inner.twist(k)
                        } else {
                            inner.sym(k)
                        }
                    }
                    2 => {
                        let a = self.int()?;
                        self.expect(",")?;
                        let b = self.int()?;
                        let a = u32::try_from(a).map_err(|_| self.error("SymT needs a ≥ 0"))?;
                        SheafExpr::sym_tangent(a, b)
                    }
                    3 => self.sum()?.end(),
                    _ => self.sum()?.dual(),
                };
                self.expect(")")?;
                return Ok(e);
            }
        }
        if self.eat("O") {
            if self.eat("(") {
                let k = self.int()?;
                self.expect(")")?;
                return Ok(SheafExpr::Line(k));
            }
            return Ok(SheafExpr::Line(0));
        }
        Err(self.error("expected O(k), SymT(a,b), twist, sym, end or dual"))
    }
}
