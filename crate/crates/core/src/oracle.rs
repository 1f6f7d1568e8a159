//! Exact LP over couplings, used as ground truth for the closed forms.
//!
//! The LP only sees the marginal matrix and observed probabilities: a
//! coupling `q ≥ 0` over all atoms must reproduce every observed 2-marginal,
//! and Δ is the expected number of connection pairs whose two members
//! disagree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{minimize, LpOutcome, StandardLp};
use crate::measures;
use crate::model::{
    BellObservables, ConnectionExpectations, ContextTable, Coupling, LGObservables,
    ObservedSystem, Observables, SystemKind,
};
use crate::polytope::{build_marginal_matrix, SystemDescriptor};
use crate::rational::Rational;

/// `min/max c·q` subject to `A q = b`, `q ≥ 0`, over the atoms of `kind`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub kind: SystemKind,
    pub objective: Vec<Rational>,
    /// Rows of the marginal matrix (as 0/1) followed by the all-ones row.
    pub constraints: Vec<Vec<bool>>,
    pub rhs: Vec<Rational>,
}

impl LpProblem {
    /// Observed-marginal rows plus normalization; objective Δ.
    pub fn for_observed(obs: &dyn ObservedSystem) -> Self {
        let kind = obs.kind();
        let m = build_marginal_matrix(&SystemDescriptor::new(kind));
        let observed = 4 * kind.observed_pairs().len();
        let mut constraints: Vec<Vec<bool>> = (0..observed).map(|r| m.row(r).to_vec()).collect();
        constraints.push(vec![true; kind.atom_count()]);
        let mut rhs = obs.observed_probabilities();
        rhs.push(Rational::one());
        LpProblem {
            kind,
            objective: (0..kind.atom_count())
                .map(|atom| Rational::from_integer(mismatches(kind, atom)))
                .collect(),
            constraints,
            rhs,
        }
    }

    /// Adds the connection-pair rows `p = (1 ± s ± t ± c)/4`.
    fn with_connections(mut self, obs: &dyn ObservedSystem, conn: &ConnectionExpectations) -> Self {
        let kind = self.kind;
        let m = build_marginal_matrix(&SystemDescriptor::new(kind));
        let start = 4 * kind.observed_pairs().len();
        for (k, &(u, v)) in kind.connection_pairs().iter().enumerate() {
            let (s, t, c) = (obs.single(u), obs.single(v), &conn.values()[k]);
            let quarter = Rational::new(1, 4);
            let cells = [
                (Rational::one() + &s + &t + c) * &quarter,
                (Rational::one() + &s - &t - c) * &quarter,
                (Rational::one() - &s + &t - c) * &quarter,
                (Rational::one() - &s - &t + c) * &quarter,
            ];
            for (j, cell) in cells.into_iter().enumerate() {
                self.constraints.push(m.row(start + 4 * k + j).to_vec());
                self.rhs.push(cell);
            }
        }
        self
    }

    fn standard(&self, sign: i64) -> StandardLp {
        let mut lp = StandardLp::new(self.constraints.len());
        for (i, b) in self.rhs.iter().enumerate() {
            lp.set_rhs(i, b.clone());
        }
        for atom in 0..self.objective.len() {
            let column = (0..self.constraints.len())
                .filter(|&r| self.constraints[r][atom])
                .map(|r| (r, Rational::one()))
                .collect();
            lp.push_column(column, &self.objective[atom] * Rational::from_integer(sign));
        }
        lp
    }

    fn solve(&self, sign: i64) -> Result<(Rational, Coupling)> {
        match minimize(&self.standard(sign)) {
            LpOutcome::Optimal(s) => {
                let value = s.value * Rational::from_integer(sign);
                Ok((value, Coupling::new(self.kind, s.x)?))
            }
            LpOutcome::Infeasible { farkas } => Err(Error::Infeasible { certificate: farkas }),
            LpOutcome::Unbounded => Err(Error::Unbounded),
        }
    }
}

/// Number of connection pairs whose members disagree in `atom`.
fn mismatches(kind: SystemKind, atom: usize) -> i64 {
    kind.connection_pairs()
        .iter()
        .filter(|&&(u, v)| kind.atom_value(atom, u) != kind.atom_value(atom, v))
        .count() as i64
}

/// Minimum Δ over all couplings of `obs`.
pub fn min_delta_lp(obs: &dyn ObservedSystem) -> Result<Rational> {
    Ok(min_delta_witness(obs)?.0)
}

/// Minimum Δ together with an optimal coupling.
pub fn min_delta_witness(obs: &dyn ObservedSystem) -> Result<(Rational, Coupling)> {
    LpProblem::for_observed(obs).solve(1)
}

/// Maximum Δ over all couplings of `obs`.
pub fn max_delta_lp(obs: &dyn ObservedSystem) -> Result<Rational> {
    Ok(LpProblem::for_observed(obs).solve(-1)?.0)
}

/// Whether some coupling matches both the observed and the connection
/// expectations; returns a witness if so. Connection expectations of the
/// wrong kind, or violating the implicit constraint against their singles,
/// are rejected.
pub fn coupling_feasible(
    obs: &dyn ObservedSystem,
    conn: &ConnectionExpectations,
) -> Result<Option<Coupling>> {
    let kind = obs.kind();
    if conn.kind() != kind {
        return Err(Error::validation(
            "connections",
            format!("{} connections for a {} system", conn.kind(), kind),
        ));
    }
    let names = match kind {
        SystemKind::Bell => &crate::model::BELL_CONNECTION_NAMES[..],
        SystemKind::Lg => &crate::model::LG_CONNECTION_NAMES[..],
    };
    for (k, &(u, v)) in kind.connection_pairs().iter().enumerate() {
        let (s, t) = (obs.single(u), obs.single(v));
        if ContextTable::from_expectations(&conn.values()[k], &s, &t).is_err() {
            return Err(Error::validation(
                names[k],
                format!("{} is incompatible with singles {s} and {t}", conn.values()[k]),
            ));
        }
    }
    lp_feasibility(obs, conn)
}

/// Raw LP feasibility, without the implicit-constraint precheck.
fn lp_feasibility(
    obs: &dyn ObservedSystem,
    conn: &ConnectionExpectations,
) -> Result<Option<Coupling>> {
    let mut problem = LpProblem::for_observed(obs).with_connections(obs, conn);
    problem.objective = vec![Rational::zero(); problem.objective.len()];
    match problem.solve(1) {
        Ok((_, q)) => Ok(Some(q)),
        Err(Error::Infeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Shared denominator of the random scheme.
const SCALE: i64 = 1 << 32;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Four numerators in `[0, 2³²]` summing to `2³²`: spacings of three sorted
/// uniform cut points.
fn dirichlet4(rng: &mut impl Rng) -> [i64; 4] {
    let mut cuts = [0i64; 3].map(|_| rng.gen_range(0..=SCALE));
    cuts.sort_unstable();
    [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], SCALE - cuts[2]]
}

fn table_from(n: [i64; 4], denom: i64) -> ContextTable {
    let [pp, pm, mp, mm] = n.map(|x| Rational::new(x, denom));
    ContextTable::new(pp, pm, mp, mm).expect("cells are nonnegative and sum to one")
}

/// Random table with `P(first = +1) = a/2³²`, `P(second = +1) = b/2³²`:
/// `p₊₊` uniform in its Fréchet range.
fn table_with_marginals(rng: &mut impl Rng, a: i64, b: i64) -> [i64; 4] {
    let lo = (a + b - SCALE).max(0);
    let hi = a.min(b);
    let pp = rng.gen_range(lo..=hi);
    [pp, a - pp, b - pp, SCALE - a - b + pp]
}

fn observables(kind: SystemKind, tables: Vec<ContextTable>) -> Observables {
    match kind {
        SystemKind::Bell => {
            let t: [ContextTable; 4] = tables.try_into().expect("four contexts");
            BellObservables::from_tables(&t).expect("valid tables").into()
        }
        SystemKind::Lg => {
            let t: [ContextTable; 3] = tables.try_into().expect("three contexts");
            LGObservables::from_tables(&t).expect("valid tables").into()
        }
    }
}

/// Deterministic random system: every context table independently drawn
/// from the Dirichlet-like scheme over denominator 2³².
pub fn random_system(kind: SystemKind, seed: u64) -> Observables {
    let mut rng = rng_for(seed, 0);
    let tables = (0..kind.observed_pairs().len())
        .map(|_| table_from(dirichlet4(&mut rng), SCALE))
        .collect();
    observables(kind, tables)
}

/// Deterministic random marginally selective system: each variable's
/// distribution is shared by all its contexts. With `mix`, a random
/// fraction of the extremal nonclassical correlation (PR box for Bell,
/// the all-anticorrelated cycle for LG) is blended in; marginals stay put
/// because those correlations have uniform marginals.
pub fn random_ms_system(kind: SystemKind, seed: u64, mix: bool) -> Observables {
    let mut rng = rng_for(seed, 1);
    let pairs = kind.observed_pairs();
    // Variable → shared marginal index: Bell A_i / B_j, LG X / Y / Z.
    let marginal_of: &[usize] = match kind {
        SystemKind::Bell => &[0, 2, 0, 3, 1, 2, 1, 3],
        SystemKind::Lg => &[0, 1, 0, 2, 1, 2],
    };
    let marginals: Vec<i64> = (0..4).map(|_| rng.gen_range(0..=SCALE)).collect();
    let lambda = if mix { rng.gen_range(0..=256i64) } else { 0 };
    let tables = pairs
        .iter()
        .enumerate()
        .map(|(k, &(u, v))| {
            let base = table_with_marginals(&mut rng, marginals[marginal_of[u]], marginals[marginal_of[v]]);
            let anti = match kind {
                SystemKind::Bell => k == 3,
                SystemKind::Lg => true,
            };
            let extremal = if anti {
                [0, SCALE / 2, SCALE / 2, 0]
            } else {
                [SCALE / 2, 0, 0, SCALE / 2]
            };
            let mixed = [0, 1, 2, 3].map(|c| lambda * extremal[c] + (256 - lambda) * base[c]);
            table_from(mixed, SCALE * 256)
        })
        .collect();
    observables(kind, tables)
}

/// Random connection expectations for `obs`. Each value is usually drawn
/// inside the range its singles allow (sometimes exactly at an end point);
/// one instance in ten ignores that range.
pub fn random_connections(obs: &dyn ObservedSystem, seed: u64) -> ConnectionExpectations {
    let mut rng = rng_for(seed, 2);
    let kind = obs.kind();
    let unconstrained = rng.gen_ratio(1, 10);
    let values: Vec<Rational> = kind
        .connection_pairs()
        .iter()
        .map(|&(u, v)| {
            let (s, t) = (obs.single(u), obs.single(v));
            let (lo, hi) = if unconstrained {
                (-Rational::one(), Rational::one())
            } else {
                (
                    (&s + &t).abs() - Rational::one(),
                    Rational::one() - (&s - &t).abs(),
                )
            };
            match rng.gen_range(0..4) {
                0 => lo,
                1 => hi,
                _ => {
                    let u = Rational::new(rng.gen_range(0..=SCALE), SCALE);
                    &lo + (&hi - &lo) * u
                }
            }
        })
        .collect();
    match kind {
        SystemKind::Bell => ConnectionExpectations::Bell(values.try_into().expect("four values")),
        SystemKind::Lg => ConnectionExpectations::Lg(values.try_into().expect("three values")),
    }
}

/// Instance `i` of a verification run: cycles through independent, marginally
/// selective and mixed-in nonclassical systems.
pub fn verification_instance(kind: SystemKind, seed: u64, i: u64) -> Observables {
    let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i);
    match i % 3 {
        0 => random_system(kind, s),
        1 => random_ms_system(kind, s, false),
        _ => random_ms_system(kind, s, true),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub instances: usize,
    pub passed: usize,
    /// Instances with a positive contextuality degree.
    pub contextual: usize,
    /// Random connections the LP found compatible.
    pub compatible: usize,
    /// Instances whose LP maximum equals the closed-form upper bound.
    pub upper_attained: usize,
    /// LG only: instances whose LP maximum equals the alternative reading
    /// `3 − (−½ − ½ s₁)` of the upper bound.
    pub alternative_upper_attained: usize,
    pub first_failure: Option<String>,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.passed == self.instances
    }
}

impl std::fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            write!(f, "{}/{} instances: closed form = LP oracle", self.passed, self.instances)
        } else {
            write!(
                f,
                "{}/{} instances: closed form = LP oracle; first failure: {}",
                self.passed,
                self.instances,
                self.first_failure.as_deref().unwrap_or("?")
            )
        }
    }
}

struct InstanceOutcome {
    failure: Option<String>,
    contextual: bool,
    compatible: bool,
    upper_attained: bool,
    alternative_attained: bool,
}

fn check_instance(kind: SystemKind, seed: u64, i: u64) -> InstanceOutcome {
    let obs = verification_instance(kind, seed, i);
    let conn = random_connections(&obs, seed.wrapping_add(i));
    let mut failure = None;
    let mut fail = |msg: String| {
        if failure.is_none() {
            failure = Some(format!("instance {i}: {msg}; observables {:?}", obs.contexts()));
        }
    };

    let (delta_min, degree, lower, upper, alternative) = match &obs {
        Observables::Bell(b) => {
            let r = measures::contextuality_degree_bell(b);
            (r.delta_min, r.degree, r.delta_lower, r.delta_upper, None)
        }
        Observables::Lg(l) => {
            let r = measures::delta_min_lg(l);
            let s1 = measures::s_parity(&[l.xy().clone(), l.xz().clone(), l.yz().clone()], measures::Parity::Odd)
                .expect("three values");
            let alt = Rational::from_integer(3) - (Rational::new(-1, 2) - s1 * Rational::new(1, 2));
            (r.delta_min, r.degree, r.delta_lower, r.delta_upper, Some(alt))
        }
    };

    let (lp_min, lp_max) = match (min_delta_witness(&obs), max_delta_lp(&obs)) {
        (Ok((v, q)), Ok(m)) => {
            let matches = kind.observed_pairs().iter().enumerate().all(|(k, &(u, v))| {
                let [ab, a, b] = &obs.contexts()[k];
                q.marginal_by_index(u, v).expectations() == (ab.clone(), a.clone(), b.clone())
            });
            if !matches {
                fail("witness coupling does not reproduce the observed marginals".into());
            }
            (v, m)
        }
        (Err(e), _) | (_, Err(e)) => {
            fail(format!("LP failed: {e}"));
            return InstanceOutcome {
                failure,
                contextual: false,
                compatible: false,
                upper_attained: false,
                alternative_attained: false,
            };
        }
    };
    if lp_min != delta_min {
        fail(format!("LP minimum {lp_min} != closed form {delta_min}"));
    }
    if lower > lp_min || lp_max > upper {
        fail(format!("bounds [{lower}, {upper}] do not bracket LP range [{lp_min}, {lp_max}]"));
    }
    if lower != lp_min || upper != lp_max {
        fail(format!("bounds [{lower}, {upper}] are not attained: LP range [{lp_min}, {lp_max}]"));
    }

    let closed = match &obs {
        Observables::Bell(b) => measures::connections_compatible_bell(b, &conn),
        Observables::Lg(l) => measures::connections_compatible_lg(l, &conn),
    };
    let compatible = match lp_feasibility(&obs, &conn) {
        Ok(w) => {
            if let Some(q) = &w {
                let fits = kind.connection_pairs().iter().enumerate().all(|(k, &(u, v))| {
                    q.marginal_by_index(u, v).expectations().0 == conn.values()[k]
                });
                if !fits {
                    fail("feasibility witness misses a connection".into());
                }
            }
            w.is_some()
        }
        Err(e) => {
            fail(format!("feasibility LP failed: {e}"));
            false
        }
    };
    if compatible != closed {
        fail(format!(
            "connections {:?}: LP feasible = {compatible}, closed form = {closed}",
            conn.values()
        ));
    }

    InstanceOutcome {
        failure,
        contextual: degree.is_positive(),
        compatible,
        upper_attained: lp_max == upper,
        alternative_attained: alternative.is_some_and(|a| a == lp_max),
    }
}

/// Checks `n` seeded instances: LP Δ_min equals the closed form, LP
/// feasibility of random connections equals the closed-form compatibility
/// test, and the closed-form bounds equal the LP range of Δ. Instances run in
/// parallel; the report is merged in instance order.
pub fn verify_equivalence(kind: SystemKind, n: usize, seed: u64) -> EquivalenceReport {
    let outcomes: Vec<InstanceOutcome> = (0..n as u64)
        .into_par_iter()
        .map(|i| check_instance(kind, seed, i))
        .collect();
    let mut report = EquivalenceReport {
        instances: n,
        ..Default::default()
    };
    for o in outcomes {
        match o.failure {
            None => report.passed += 1,
            Some(f) => {
                report.first_failure.get_or_insert(f);
            }
        }
        report.contextual += o.contextual as usize;
        report.compatible += o.compatible as usize;
        report.upper_attained += o.upper_attained as usize;
        report.alternative_upper_attained += o.alternative_attained as usize;
    }
    report
}

/// Compatibility-only sweep: for `n` seeded (observables, connections)
/// pairs, LP feasibility must equal the closed-form test. Returns the report
/// with `compatible` counting feasible pairs.
pub fn verify_compatibility(kind: SystemKind, n: usize, seed: u64) -> EquivalenceReport {
    let outcomes: Vec<(Option<String>, bool)> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let obs = verification_instance(kind, seed, i);
            let conn = random_connections(&obs, seed.wrapping_add(i));
            let closed = match &obs {
                Observables::Bell(b) => measures::connections_compatible_bell(b, &conn),
                Observables::Lg(l) => measures::connections_compatible_lg(l, &conn),
            };
            match lp_feasibility(&obs, &conn) {
                Ok(w) if w.is_some() == closed => (None, closed),
                Ok(w) => (
                    Some(format!(
                        "instance {i}: connections {:?}: LP feasible = {}, closed form = {closed}",
                        conn.values(),
                        w.is_some()
                    )),
                    w.is_some(),
                ),
                Err(e) => (Some(format!("instance {i}: LP failed: {e}")), false),
            }
        })
        .collect();
    let mut report = EquivalenceReport {
        instances: n,
        ..Default::default()
    };
    for (failure, compatible) in outcomes {
        match failure {
            None => report.passed += 1,
            Some(f) => {
                report.first_failure.get_or_insert(f);
            }
        }
        report.compatible += compatible as usize;
    }
    report
}
