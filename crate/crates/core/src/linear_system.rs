//! Integer linear systems over named coordinates, kept in canonical form.
//!
//! Inequalities are stored as `coeffs · x ≤ rhs`, equalities as
//! `coeffs · x = rhs`. Every row is a primitive integer vector (the gcd of its
//! coefficients and right-hand side is one); equalities additionally have a
//! positive leading nonzero entry. Rows are sorted by coefficient vector, then
//! right-hand side, and deduplicated, so two systems describing the same rows
//! compare equal and serialize to the same bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub coeffs: Vec<BigInt>,
    pub rhs: BigInt,
}

impl Row {
    /// Builds a primitive integer row from rational data (clears denominators).
    pub fn from_rationals(coeffs: &[Rational], rhs: &Rational) -> Row {
        let mut lcm = BigInt::one();
        for v in coeffs.iter().chain(std::iter::once(rhs)) {
            lcm = lcm.lcm(&v.denom());
        }
        let scale = |v: &Rational| v.numer() * (&lcm / v.denom());
        Row {
            coeffs: coeffs.iter().map(scale).collect(),
            rhs: scale(rhs),
        }
        .primitive()
    }

    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Row {
        Row {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            rhs: BigInt::from(rhs),
        }
        .primitive()
    }

    fn primitive(mut self) -> Row {
        let mut g = BigInt::zero();
        for v in self.coeffs.iter().chain(std::iter::once(&self.rhs)) {
            g = g.gcd(v);
        }
        if !g.is_zero() && !g.is_one() {
            for v in self.coeffs.iter_mut() {
                *v /= &g;
            }
            self.rhs /= &g;
        }
        self
    }

    pub fn is_zero_lhs(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, x)| Rational::from(c) * x)
            .sum()
    }

    pub fn coeffs_rational(&self) -> Vec<Rational> {
        self.coeffs.iter().map(Rational::from).collect()
    }

    pub fn rhs_rational(&self) -> Rational {
        Rational::from(&self.rhs)
    }

    pub fn coeff_i64(&self, k: usize) -> i64 {
        self.coeffs[k].to_i64().expect("small coefficient")
    }
}

/// Primitive form of an inequality; `None` for a tautology `0 ≤ k`, `k ≥ 0`,
/// and `0 ≤ -1` for any contradiction.
pub(crate) fn normalize_inequality(r: Row) -> Option<Row> {
    let r = r.primitive();
    if !r.is_zero_lhs() {
        return Some(r);
    }
    r.rhs.is_negative().then(|| Row {
        coeffs: r.coeffs,
        rhs: BigInt::from(-1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    coords: Vec<String>,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        let coords: Vec<String> = coords.iter().map(|s| s.as_ref().to_string()).collect();
        let unique: BTreeSet<&String> = coords.iter().collect();
        if unique.len() != coords.len() {
            return Err(Error::validation("coords", "duplicate coordinate name"));
        }
        for c in &coords {
            if c.is_empty() || !c.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') {
                return Err(Error::validation("coords", format!("invalid coordinate name {c:?}")));
            }
        }
        Ok(LinearSystem {
            coords,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        })
    }

    /// Canonicalizes and collects the given rows.
    pub fn from_rows<S: AsRef<str>>(
        coords: &[S],
        equalities: impl IntoIterator<Item = Row>,
        inequalities: impl IntoIterator<Item = Row>,
    ) -> Result<Self> {
        let mut sys = Self::new(coords)?;
        for r in equalities {
            sys.push_equality(r)?;
        }
        for r in inequalities {
            sys.push_inequality(r)?;
        }
        sys.canonicalize();
        Ok(sys)
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn equalities(&self) -> &[Row] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Row] {
        &self.inequalities
    }

    pub fn row_count(&self) -> usize {
        self.equalities.len() + self.inequalities.len()
    }

    fn check_len(&self, r: &Row) -> Result<()> {
        if r.coeffs.len() != self.coords.len() {
            return Err(Error::validation(
                "row",
                format!("row has {} coefficients, system has {} coordinates", r.coeffs.len(), self.dim()),
            ));
        }
        Ok(())
    }

    /// Adds `r.coeffs · x ≤ r.rhs`. Tautologies `0 ≤ k` with `k ≥ 0` are
    /// dropped; contradictions normalize to `0 ≤ -1`.
    pub fn push_inequality(&mut self, r: Row) -> Result<()> {
        self.check_len(&r)?;
        if let Some(r) = normalize_inequality(r) {
            self.inequalities.push(r);
        }
        Ok(())
    }

    /// Adds `r.coeffs · x = r.rhs`, oriented so the leading nonzero entry is
    /// positive. `0 = 0` is dropped and `0 = k` normalizes to `0 = 1`.
    pub fn push_equality(&mut self, r: Row) -> Result<()> {
        self.check_len(&r)?;
        let mut r = r.primitive();
        let lead = r
            .coeffs
            .iter()
            .chain(std::iter::once(&r.rhs))
            .find(|v| !v.is_zero())
            .cloned();
        match lead {
            None => return Ok(()),
            Some(l) if l.is_negative() => {
                for v in r.coeffs.iter_mut() {
                    *v = -&*v;
                }
                r.rhs = -r.rhs;
            }
            _ => {}
        }
        self.equalities.push(r);
        Ok(())
    }

    pub fn add_inequality(&mut self, coeffs: &[Rational], rhs: &Rational) -> Result<()> {
        self.push_inequality(Row::from_rationals(coeffs, rhs))?;
        self.canonicalize();
        Ok(())
    }

    pub fn add_equality(&mut self, coeffs: &[Rational], rhs: &Rational) -> Result<()> {
        self.push_equality(Row::from_rationals(coeffs, rhs))?;
        self.canonicalize();
        Ok(())
    }

    pub(crate) fn canonicalize(&mut self) {
        for rows in [&mut self.equalities, &mut self.inequalities] {
            rows.sort();
            rows.dedup();
        }
    }

    /// Membership test for a point in coordinate order.
    pub fn contains(&self, point: &[Rational]) -> bool {
        self.equalities.iter().all(|r| r.lhs(point) == r.rhs_rational())
            && self.inequalities.iter().all(|r| r.lhs(point) <= r.rhs_rational())
    }

    /// Same rows over a relabeled/reordered coordinate list. Every coordinate
    /// with a nonzero coefficient must exist in `coords`.
    pub fn reindexed<S: AsRef<str>>(&self, coords: &[S]) -> Result<LinearSystem> {
        let target = LinearSystem::new(coords)?;
        let map: Vec<Option<usize>> = self
            .coords
            .iter()
            .map(|c| target.coord_index(c))
            .collect();
        let convert = |r: &Row| -> Result<Row> {
            let mut coeffs = vec![BigInt::zero(); target.dim()];
            for (k, c) in r.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match map[k] {
                    Some(t) => coeffs[t] = c.clone(),
                    None => {
                        return Err(Error::validation(
                            "coords",
                            format!("coordinate {} missing from target", self.coords[k]),
                        ))
                    }
                }
            }
            Ok(Row {
                coeffs,
                rhs: r.rhs.clone(),
            })
        };
        let eqs = self.equalities.iter().map(convert).collect::<Result<Vec<_>>>()?;
        let ineqs = self.inequalities.iter().map(convert).collect::<Result<Vec<_>>>()?;
        LinearSystem::from_rows(coords, eqs, ineqs)
    }

    fn render_row(&self, out: &mut String, r: &Row, op: &str) {
        let terms: Vec<String> = r
            .coeffs
            .iter()
            .zip(&self.coords)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, name)| format!("{c}*{name}"))
            .collect();
        let lhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        let _ = writeln!(out, "{lhs} {op} {}", r.rhs);
    }

    /// One inequality in text form, without a trailing newline.
    pub fn inequality_text(&self, r: &Row) -> String {
        let mut out = String::new();
        self.render_row(&mut out, r, "<=");
        out.pop();
        out
    }

    /// Text form: a coordinate header line, then one row per line
    /// (`c1*name1 + c2*name2 + ... <= k`, equalities with `=`), equalities
    /// first, each group in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# coordinates: {}", self.coords.join(" "));
        for r in &self.equalities {
            self.render_row(&mut out, r, "=");
        }
        for r in &self.inequalities {
            self.render_row(&mut out, r, "<=");
        }
        out
    }

    /// Parses the output of [`LinearSystem::to_text`]. Without a coordinate
    /// header, `coords` must be given.
    pub fn parse_text(text: &str, coords: Option<&[String]>) -> Result<LinearSystem> {
        let mut declared: Option<Vec<String>> = coords.map(|c| c.to_vec());
        let mut rows: Vec<(Vec<(BigInt, String)>, bool, BigInt)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(list) = rest.trim().strip_prefix("coordinates:") {
                    if declared.is_none() {
                        declared = Some(list.split_whitespace().map(str::to_string).collect());
                    }
                }
                continue;
            }
            let err = |m: &str| Error::Parse(format!("line {}: {m}: {line:?}", lineno + 1));
            let (lhs, is_eq, rhs) = if let Some((l, r)) = line.split_once("<=") {
                (l, false, r)
            } else if let Some((l, r)) = line.split_once('=') {
                (l, true, r)
            } else {
                return Err(err("missing relation"));
            };
            let rhs: BigInt = rhs.trim().parse().map_err(|_| err("bad right-hand side"))?;
            let mut terms = Vec::new();
            let lhs = lhs.trim();
            if lhs != "0" {
                for term in lhs.split(" + ") {
                    let (c, name) = term.trim().split_once('*').ok_or_else(|| err("bad term"))?;
                    let c: BigInt = c.trim().parse().map_err(|_| err("bad coefficient"))?;
                    terms.push((c, name.trim().to_string()));
                }
            }
            rows.push((terms, is_eq, rhs));
        }
        let coords = declared.ok_or_else(|| Error::Parse("no coordinate list".into()))?;
        let mut sys = LinearSystem::new(&coords)?;
        for (terms, is_eq, rhs) in rows {
            let mut coeffs = vec![BigInt::zero(); sys.dim()];
            for (c, name) in terms {
                let k = sys
                    .coord_index(&name)
                    .ok_or_else(|| Error::Parse(format!("undeclared coordinate {name:?}")))?;
                coeffs[k] += c;
            }
            let row = Row { coeffs, rhs };
            if is_eq {
                sys.push_equality(row)?;
            } else {
                sys.push_inequality(row)?;
            }
        }
        sys.canonicalize();
        Ok(sys)
    }
}
