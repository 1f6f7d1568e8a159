//! Domain types: context tables, observed and connection expectations,
//! couplings over all joint outcome assignments.
//!
//! Atoms of a coupling are indexed by the bit pattern of the variable values
//! in the fixed order of [`SystemKind::variables`], most significant bit
//! first, with bit 1 standing for the value +1.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    /// Two binary inputs, two binary outputs: eight random variables.
    Bell,
    /// Cyclic system of three variables measured pairwise: six random variables.
    Lg,
}

const BELL_VARS: [&str; 8] = ["A11", "B11", "A12", "B12", "A21", "B21", "A22", "B22"];
const LG_VARS: [&str; 6] = ["X12", "Y12", "X13", "Z13", "Y23", "Z23"];

const BELL_OBSERVED: [(usize, usize); 4] = [(0, 1), (2, 3), (4, 5), (6, 7)];
const LG_OBSERVED: [(usize, usize); 3] = [(0, 1), (2, 3), (4, 5)];

// aa1 = (A11,A12), aa2 = (A21,A22), bb1 = (B11,B21), bb2 = (B12,B22)
const BELL_CONNECTIONS: [(usize, usize); 4] = [(0, 2), (4, 6), (1, 5), (3, 7)];
// xx = (X12,X13), yy = (Y12,Y23), zz = (Z13,Z23)
const LG_CONNECTIONS: [(usize, usize); 3] = [(0, 2), (1, 4), (3, 5)];

impl SystemKind {
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            SystemKind::Bell => &BELL_VARS,
            SystemKind::Lg => &LG_VARS,
        }
    }

    pub fn variable_count(self) -> usize {
        self.variables().len()
    }

    pub fn atom_count(self) -> usize {
        1 << self.variable_count()
    }

    /// Pairs of variable indices whose joint distributions are observed, in
    /// context order (Bell: a1b1, a1b2, a2b1, a2b2; LG: xy, xz, yz).
    pub fn observed_pairs(self) -> &'static [(usize, usize)] {
        match self {
            SystemKind::Bell => &BELL_OBSERVED,
            SystemKind::Lg => &LG_OBSERVED,
        }
    }

    /// Unobservable same-output pairs, in declaration order
    /// (Bell: aa1, aa2, bb1, bb2; LG: xx, yy, zz).
    pub fn connection_pairs(self) -> &'static [(usize, usize)] {
        match self {
            SystemKind::Bell => &BELL_CONNECTIONS,
            SystemKind::Lg => &LG_CONNECTIONS,
        }
    }

    pub fn variable_index(self, name: &str) -> Option<usize> {
        self.variables().iter().position(|v| *v == name)
    }

    /// Value (+1 or -1) of variable `var` in atom `atom`.
    #[inline]
    pub fn atom_value(self, atom: usize, var: usize) -> i64 {
        let bit = self.variable_count() - 1 - var;
        if (atom >> bit) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// Resolves a pair of variable names to indices. Only observed pairs and
    /// connection pairs are accepted, in either orientation.
    pub fn pair(self, first: &str, second: &str) -> Result<(usize, usize)> {
        let unknown = || Error::UnknownPair(format!("({first},{second})"));
        let f = self.variable_index(first).ok_or_else(unknown)?;
        let s = self.variable_index(second).ok_or_else(unknown)?;
        let known = self
            .observed_pairs()
            .iter()
            .chain(self.connection_pairs())
            .any(|&(x, y)| (x, y) == (f, s) || (x, y) == (s, f));
        if known {
            Ok((f, s))
        } else {
            Err(unknown())
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Bell => "bell",
            SystemKind::Lg => "lg",
        })
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bell" => Ok(SystemKind::Bell),
            "lg" => Ok(SystemKind::Lg),
            other => Err(Error::Parse(format!("unknown system kind {other:?}"))),
        }
    }
}

/// Joint distribution of two binary variables. `pm` is the probability of
/// (first = +1, second = -1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContextTable {
    pp: Rational,
    pm: Rational,
    mp: Rational,
    mm: Rational,
}

impl ContextTable {
    /// Exact table: nonnegative entries summing to exactly one.
    pub fn new(pp: Rational, pm: Rational, mp: Rational, mm: Rational) -> Result<Self> {
        Self::with_tolerance(pp, pm, mp, mm, &Rational::zero())
    }

    /// Table whose entries may sum to `1 ± tol` (rounded published data).
    /// Entries are kept as given, never renormalized.
    pub fn with_tolerance(
        pp: Rational,
        pm: Rational,
        mp: Rational,
        mm: Rational,
        tol: &Rational,
    ) -> Result<Self> {
        for (name, v) in [("pp", &pp), ("pm", &pm), ("mp", &mp), ("mm", &mm)] {
            if v.is_negative() {
                return Err(Error::validation(name, format!("negative probability {v}")));
            }
        }
        let sum = &pp + &pm + &mp + &mm;
        if (&sum - Rational::one()).abs() > *tol {
            return Err(Error::validation(
                "sum",
                format!("table sum out of tolerance ({sum})"),
            ));
        }
        Ok(ContextTable { pp, pm, mp, mm })
    }

    /// Rebuilds the table from expectations: `p±± = (1 ± a ± b ± ab)/4`.
    pub fn from_expectations(ab: &Rational, a: &Rational, b: &Rational) -> Result<Self> {
        let quarter = Rational::new(1, 4);
        let one = Rational::one();
        let pp = (&one + a + b + ab) * &quarter;
        let pm = (&one + a - b - ab) * &quarter;
        let mp = (&one - a + b - ab) * &quarter;
        let mm = (&one - a - b + ab) * &quarter;
        Self::new(pp, pm, mp, mm)
    }

    pub fn pp(&self) -> &Rational {
        &self.pp
    }
    pub fn pm(&self) -> &Rational {
        &self.pm
    }
    pub fn mp(&self) -> &Rational {
        &self.mp
    }
    pub fn mm(&self) -> &Rational {
        &self.mm
    }

    /// Cells in the order (+,+), (+,-), (-,+), (-,-).
    pub fn cells(&self) -> [&Rational; 4] {
        [&self.pp, &self.pm, &self.mp, &self.mm]
    }

    pub fn expectations(&self) -> (Rational, Rational, Rational) {
        expectations_from_table(self)
    }
}

/// Product and single expectations `(⟨AB⟩, ⟨A⟩, ⟨B⟩)` of a context table.
pub fn expectations_from_table(t: &ContextTable) -> (Rational, Rational, Rational) {
    let ab = &t.pp - &t.pm - &t.mp + &t.mm;
    let a = &t.pp + &t.pm - &t.mp - &t.mm;
    let b = &t.pp - &t.pm + &t.mp - &t.mm;
    (ab, a, b)
}

/// True iff some joint distribution of two ±1 variables has these
/// expectations: all three in [-1, 1] and `-1 + |a+b| ≤ ab ≤ 1 - |a-b|`.
pub fn validate_context(ab: &Rational, a: &Rational, b: &Rational) -> bool {
    let one = Rational::one();
    let in_range = |v: &Rational| v.abs() <= one;
    if !(in_range(ab) && in_range(a) && in_range(b)) {
        return false;
    }
    let lower = (a + b).abs() - &one;
    let upper = &one - (a - b).abs();
    lower <= *ab && *ab <= upper
}

fn check_context(path: &str, ab: &Rational, a: &Rational, b: &Rational) -> Result<()> {
    if validate_context(ab, a, b) {
        Ok(())
    } else {
        Err(Error::validation(
            path,
            format!("expectations (ab={ab}, a={a}, b={b}) admit no joint distribution"),
        ))
    }
}

/// Common view of Bell and LG observations used by the oracle and the
/// polytope code.
pub trait ObservedSystem {
    fn kind(&self) -> SystemKind;

    /// `[product, first single, second single]` per observed pair, in
    /// [`SystemKind::observed_pairs`] order.
    fn contexts(&self) -> Vec<[Rational; 3]>;

    /// Expectation of variable `var` (each variable belongs to exactly one
    /// observed pair).
    fn single(&self, var: usize) -> Rational {
        let kind = self.kind();
        let contexts = self.contexts();
        for (k, &(f, s)) in kind.observed_pairs().iter().enumerate() {
            if f == var {
                return contexts[k][1].clone();
            }
            if s == var {
                return contexts[k][2].clone();
            }
        }
        panic!("variable index {var} out of range")
    }

    /// Observed pair probabilities, four per context in (++, +-, -+, --) order.
    fn observed_probabilities(&self) -> Vec<Rational> {
        self.contexts()
            .iter()
            .flat_map(|[ab, a, b]| {
                let t = ContextTable::from_expectations(ab, a, b)
                    .expect("validated observables reconstruct to a table");
                t.cells().into_iter().cloned().collect::<Vec<_>>()
            })
            .collect()
    }
}

/// The twelve observed expectations of a Bell system. Indices are zero-based:
/// `ab[i][j]` is ⟨A_{i+1,j+1} B_{i+1,j+1}⟩.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BellObservables {
    ab: [[Rational; 2]; 2],
    a: [[Rational; 2]; 2],
    b: [[Rational; 2]; 2],
}

pub const BELL_CONTEXT_KEYS: [&str; 4] = ["a1b1", "a1b2", "a2b1", "a2b2"];

impl BellObservables {
    pub fn new(
        ab: [[Rational; 2]; 2],
        a: [[Rational; 2]; 2],
        b: [[Rational; 2]; 2],
    ) -> Result<Self> {
        for i in 0..2 {
            for j in 0..2 {
                check_context(BELL_CONTEXT_KEYS[2 * i + j], &ab[i][j], &a[i][j], &b[i][j])?;
            }
        }
        Ok(BellObservables { ab, a, b })
    }

    /// Tables in context order a1b1, a1b2, a2b1, a2b2.
    pub fn from_tables(tables: &[ContextTable; 4]) -> Result<Self> {
        let mut ab: [[Rational; 2]; 2] = Default::default();
        let mut a: [[Rational; 2]; 2] = Default::default();
        let mut b: [[Rational; 2]; 2] = Default::default();
        for (k, t) in tables.iter().enumerate() {
            let (p, s, u) = t.expectations();
            ab[k / 2][k % 2] = p;
            a[k / 2][k % 2] = s;
            b[k / 2][k % 2] = u;
        }
        Self::new(ab, a, b)
    }

    /// Builds from `[ab, a, b]` per context in context order.
    pub fn from_contexts(contexts: &[[Rational; 3]; 4]) -> Result<Self> {
        let mut ab: [[Rational; 2]; 2] = Default::default();
        let mut a: [[Rational; 2]; 2] = Default::default();
        let mut b: [[Rational; 2]; 2] = Default::default();
        for (k, [p, s, u]) in contexts.iter().enumerate() {
            ab[k / 2][k % 2] = p.clone();
            a[k / 2][k % 2] = s.clone();
            b[k / 2][k % 2] = u.clone();
        }
        Self::new(ab, a, b)
    }

    pub fn ab(&self, i: usize, j: usize) -> &Rational {
        &self.ab[i][j]
    }
    pub fn a(&self, i: usize, j: usize) -> &Rational {
        &self.a[i][j]
    }
    pub fn b(&self, i: usize, j: usize) -> &Rational {
        &self.b[i][j]
    }

    /// Products in context order.
    pub fn products(&self) -> [Rational; 4] {
        [
            self.ab[0][0].clone(),
            self.ab[0][1].clone(),
            self.ab[1][0].clone(),
            self.ab[1][1].clone(),
        ]
    }

    /// Values in coordinate order ab11 ab12 ab21 ab22 a11 a12 a21 a22 b11 b12 b21 b22.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut out = self.products().to_vec();
        for m in [&self.a, &self.b] {
            out.extend([m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()]);
        }
        out
    }
}

impl ObservedSystem for BellObservables {
    fn kind(&self) -> SystemKind {
        SystemKind::Bell
    }

    fn contexts(&self) -> Vec<[Rational; 3]> {
        (0..4)
            .map(|k| {
                let (i, j) = (k / 2, k % 2);
                [self.ab[i][j].clone(), self.a[i][j].clone(), self.b[i][j].clone()]
            })
            .collect()
    }
}

/// The nine observed expectations of a Leggett–Garg system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LGObservables {
    pub(crate) xy: Rational,
    pub(crate) xz: Rational,
    pub(crate) yz: Rational,
    pub(crate) x12: Rational,
    pub(crate) x13: Rational,
    pub(crate) y12: Rational,
    pub(crate) y23: Rational,
    pub(crate) z13: Rational,
    pub(crate) z23: Rational,
}

pub const LG_CONTEXT_KEYS: [&str; 3] = ["xy", "xz", "yz"];

impl LGObservables {
    /// Contexts as `[product, first single, second single]` for xy (X12,Y12),
    /// xz (X13,Z13), yz (Y23,Z23).
    pub fn from_contexts(contexts: &[[Rational; 3]; 3]) -> Result<Self> {
        for (k, [p, s, t]) in contexts.iter().enumerate() {
            check_context(LG_CONTEXT_KEYS[k], p, s, t)?;
        }
        let [xy, x12, y12] = contexts[0].clone();
        let [xz, x13, z13] = contexts[1].clone();
        let [yz, y23, z23] = contexts[2].clone();
        Ok(LGObservables {
            xy,
            xz,
            yz,
            x12,
            x13,
            y12,
            y23,
            z13,
            z23,
        })
    }

    /// Tables in context order xy, xz, yz.
    pub fn from_tables(tables: &[ContextTable; 3]) -> Result<Self> {
        let contexts = tables.clone().map(|t| {
            let (p, s, u) = t.expectations();
            [p, s, u]
        });
        Self::from_contexts(&contexts)
    }

    pub fn xy(&self) -> &Rational {
        &self.xy
    }
    pub fn xz(&self) -> &Rational {
        &self.xz
    }
    pub fn yz(&self) -> &Rational {
        &self.yz
    }
    pub fn x12(&self) -> &Rational {
        &self.x12
    }
    pub fn x13(&self) -> &Rational {
        &self.x13
    }
    pub fn y12(&self) -> &Rational {
        &self.y12
    }
    pub fn y23(&self) -> &Rational {
        &self.y23
    }
    pub fn z13(&self) -> &Rational {
        &self.z13
    }
    pub fn z23(&self) -> &Rational {
        &self.z23
    }

    /// Values in coordinate order xy xz yz x12 x13 y12 y23 z13 z23.
    pub fn coordinates(&self) -> Vec<Rational> {
        [
            &self.xy, &self.xz, &self.yz, &self.x12, &self.x13, &self.y12, &self.y23, &self.z13,
            &self.z23,
        ]
        .into_iter()
        .cloned()
        .collect()
    }
}

impl ObservedSystem for LGObservables {
    fn kind(&self) -> SystemKind {
        SystemKind::Lg
    }

    fn contexts(&self) -> Vec<[Rational; 3]> {
        vec![
            [self.xy.clone(), self.x12.clone(), self.y12.clone()],
            [self.xz.clone(), self.x13.clone(), self.z13.clone()],
            [self.yz.clone(), self.y23.clone(), self.z23.clone()],
        ]
    }
}

/// Either kind of observed system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observables {
    Bell(BellObservables),
    Lg(LGObservables),
}

impl ObservedSystem for Observables {
    fn kind(&self) -> SystemKind {
        match self {
            Observables::Bell(o) => o.kind(),
            Observables::Lg(o) => o.kind(),
        }
    }

    fn contexts(&self) -> Vec<[Rational; 3]> {
        match self {
            Observables::Bell(o) => o.contexts(),
            Observables::Lg(o) => o.contexts(),
        }
    }
}

impl From<BellObservables> for Observables {
    fn from(o: BellObservables) -> Self {
        Observables::Bell(o)
    }
}

impl From<LGObservables> for Observables {
    fn from(o: LGObservables) -> Self {
        Observables::Lg(o)
    }
}

/// Product expectations of the connection pairs, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConnectionExpectations {
    /// `[aa1, aa2, bb1, bb2]` = ⟨A11A12⟩, ⟨A21A22⟩, ⟨B11B21⟩, ⟨B12B22⟩.
    Bell([Rational; 4]),
    /// `[xx, yy, zz]` = ⟨X12X13⟩, ⟨Y12Y23⟩, ⟨Z13Z23⟩.
    Lg([Rational; 3]),
}

pub const BELL_CONNECTION_NAMES: [&str; 4] = ["aa1", "aa2", "bb1", "bb2"];
pub const LG_CONNECTION_NAMES: [&str; 3] = ["xx", "yy", "zz"];

impl ConnectionExpectations {
    pub fn bell(values: [Rational; 4]) -> Result<Self> {
        Self::check(&values, &BELL_CONNECTION_NAMES)?;
        Ok(ConnectionExpectations::Bell(values))
    }

    pub fn lg(values: [Rational; 3]) -> Result<Self> {
        Self::check(&values, &LG_CONNECTION_NAMES)?;
        Ok(ConnectionExpectations::Lg(values))
    }

    fn check(values: &[Rational], names: &[&str]) -> Result<()> {
        for (v, name) in values.iter().zip(names) {
            if v.abs() > Rational::one() {
                return Err(Error::validation(*name, format!("{v} outside [-1, 1]")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> SystemKind {
        match self {
            ConnectionExpectations::Bell(_) => SystemKind::Bell,
            ConnectionExpectations::Lg(_) => SystemKind::Lg,
        }
    }

    pub fn values(&self) -> &[Rational] {
        match self {
            ConnectionExpectations::Bell(v) => v,
            ConnectionExpectations::Lg(v) => v,
        }
    }
}

/// Probability vector over all joint outcome assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    kind: SystemKind,
    atoms: Vec<Rational>,
}

impl Coupling {
    pub fn new(kind: SystemKind, atoms: Vec<Rational>) -> Result<Self> {
        if atoms.len() != kind.atom_count() {
            return Err(Error::validation(
                "atoms",
                format!("expected {} atoms, got {}", kind.atom_count(), atoms.len()),
            ));
        }
        if let Some(i) = atoms.iter().position(Rational::is_negative) {
            return Err(Error::validation(format!("atoms[{i}]"), "negative probability"));
        }
        let total: Rational = atoms.iter().sum();
        if total != Rational::one() {
            return Err(Error::validation("atoms", format!("probabilities sum to {total}")));
        }
        Ok(Coupling { kind, atoms })
    }

    pub fn uniform(kind: SystemKind) -> Self {
        let n = kind.atom_count();
        Coupling {
            kind,
            atoms: vec![Rational::new(1, n as i64); n],
        }
    }

    pub fn point_mass(kind: SystemKind, atom: usize) -> Self {
        let mut atoms = vec![Rational::zero(); kind.atom_count()];
        atoms[atom] = Rational::one();
        Coupling { kind, atoms }
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    /// Two-variable marginal by variable indices (any pair).
    pub fn marginal_by_index(&self, first: usize, second: usize) -> ContextTable {
        let mut cells = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        for (atom, p) in self.atoms.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let f = self.kind.atom_value(atom, first);
            let s = self.kind.atom_value(atom, second);
            let cell = match (f, s) {
                (1, 1) => 0,
                (1, _) => 1,
                (_, 1) => 2,
                _ => 3,
            };
            cells[cell] += p;
        }
        let [pp, pm, mp, mm] = cells;
        ContextTable { pp, pm, mp, mm }
    }
}

/// The exact 2-marginal of `q` for an observed or connection pair named by
/// its variables, oriented as given.
pub fn coupling_marginal(q: &Coupling, first: &str, second: &str) -> Result<ContextTable> {
    let (f, s) = q.kind.pair(first, second)?;
    Ok(q.marginal_by_index(f, s))
}
