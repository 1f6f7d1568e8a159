//! Fourier–Motzkin elimination, LP-based redundancy removal, and the
//! Δ-system derivation built from them.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{enumerate_vertices, facet_enumeration, SystemDescriptor};
use crate::error::{Error, Result};
use crate::linear_system::{normalize_inequality, LinearSystem, Row};
use crate::lp::{find_feasible, minimize, LpOutcome, SparseColumn, StandardLp};
use crate::model::SystemKind;
use crate::rational::Rational;

/// `ca·a + cb·b`.
fn combine(a: &Row, ca: &BigInt, b: &Row, cb: &BigInt) -> Row {
    Row {
        coeffs: a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| ca * x + cb * y)
            .collect(),
        rhs: ca * &a.rhs + cb * &b.rhs,
    }
}

fn drop_coordinate(r: &Row, k: usize) -> Row {
    let mut coeffs = r.coeffs.clone();
    coeffs.remove(k);
    Row {
        coeffs,
        rhs: r.rhs.clone(),
    }
}

/// Uses `eq` (with a nonzero `k` coefficient) to clear coordinate `k` from `r`.
/// The multiplier on `r` is positive, so inequalities keep their direction.
fn substitute(r: &Row, eq: &Row, k: usize) -> Row {
    let e = &eq.coeffs[k];
    let c = &r.coeffs[k];
    if c.is_zero() {
        return r.clone();
    }
    let scale = e.abs();
    let factor = if e.is_negative() { c.clone() } else { -c };
    combine(r, &scale, eq, &factor)
}

/// Projects out `var`. An equality involving `var` is used for substitution;
/// otherwise every lower bound is paired with every upper bound. The result
/// is over the remaining coordinates. An absent `var` returns the system
/// unchanged.
pub fn fourier_motzkin_eliminate(sys: &LinearSystem, var: &str) -> Result<LinearSystem> {
    let Some(k) = sys.coord_index(var) else {
        return Ok(sys.clone());
    };
    let coords: Vec<String> = sys.coords().iter().filter(|c| *c != var).cloned().collect();
    let mut equalities = Vec::new();
    let mut inequalities = Vec::new();
    if let Some(pivot) = sys.equalities().iter().find(|e| !e.coeffs[k].is_zero()) {
        for e in sys.equalities() {
            if !std::ptr::eq(e, pivot) {
                equalities.push(drop_coordinate(&substitute(e, pivot, k), k));
            }
        }
        for r in sys.inequalities() {
            inequalities.push(drop_coordinate(&substitute(r, pivot, k), k));
        }
    } else {
        equalities.extend(sys.equalities().iter().map(|e| drop_coordinate(e, k)));
        let tracked: Vec<Tracked> = sys
            .inequalities()
            .iter()
            .map(|r| Tracked::new(r.clone(), 0, 1))
            .collect();
        inequalities.extend(eliminate(tracked, k, None).into_iter().map(|t| t.row));
    }
    LinearSystem::from_rows(&coords, equalities, inequalities)
}

/// An inequality with the set of original rows it was combined from.
#[derive(Debug, Clone)]
struct Tracked {
    row: Row,
    ancestors: Vec<u64>,
}

impl Tracked {
    fn new(row: Row, index: usize, total: usize) -> Self {
        let mut ancestors = vec![0u64; total.div_ceil(64).max(1)];
        ancestors[index / 64] |= 1 << (index % 64);
        Tracked { row, ancestors }
    }

    fn ancestor_count(&self) -> u32 {
        self.ancestors.iter().map(|w| w.count_ones()).sum()
    }
}

/// One FM step on coordinate `k` (which is dropped). With `limit`, rows
/// built from more than `limit` original rows are discarded (Chernikov's
/// rule: after `s` eliminations such rows with more than `s + 1` ancestors
/// are implied by the others).
fn eliminate(rows: Vec<Tracked>, k: usize, limit: Option<u32>) -> Vec<Tracked> {
    let (mut upper, mut lower, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for t in rows {
        match t.row.coeffs[k].sign() {
            num_bigint::Sign::Plus => upper.push(t),
            num_bigint::Sign::Minus => lower.push(t),
            num_bigint::Sign::NoSign => out.push(Tracked {
                row: drop_coordinate(&t.row, k),
                ..t
            }),
        }
    }
    for u in &upper {
        for l in &lower {
            let ancestors: Vec<u64> = u
                .ancestors
                .iter()
                .zip(&l.ancestors)
                .map(|(a, b)| a | b)
                .collect();
            let count: u32 = ancestors.iter().map(|w| w.count_ones()).sum();
            if limit.is_some_and(|m| count > m) {
                continue;
            }
            let row = combine(&u.row, &-&l.row.coeffs[k], &l.row, &u.row.coeffs[k]);
            out.push(Tracked {
                row: drop_coordinate(&row, k),
                ancestors,
            });
        }
    }
    out
}

/// Makes rows primitive, drops tautologies, and among rows with identical
/// left-hand sides keeps the tightest (fewest ancestors on ties).
fn tidy(rows: Vec<Tracked>) -> Vec<Tracked> {
    let mut kept: Vec<Tracked> = rows
        .into_iter()
        .filter_map(|t| {
            normalize_inequality(t.row).map(|row| Tracked {
                row,
                ancestors: t.ancestors,
            })
        })
        .collect();
    kept.sort_by(|a, b| {
        a.row
            .coeffs
            .cmp(&b.row.coeffs)
            .then_with(|| a.row.rhs.cmp(&b.row.rhs))
            .then_with(|| a.ancestor_count().cmp(&b.ancestor_count()))
    });
    kept.dedup_by(|later, earlier| later.row.coeffs == earlier.row.coeffs);
    kept
}

/// Farkas test: `G x ≤ h, E x = e` is infeasible iff some `y ≥ 0, z` has
/// `Gᵀy + Eᵀz = 0` and `h·y + e·z = −1`.
pub fn is_feasible(sys: &LinearSystem) -> bool {
    rows_feasible(sys.inequalities(), sys.equalities(), sys.dim())
}

fn rows_feasible<'a>(
    inequalities: impl IntoIterator<Item = &'a Row>,
    equalities: &[Row],
    dim: usize,
) -> bool {
    let mut lp = StandardLp::new(dim + 1);
    let column = |r: &Row, sign: i64| -> SparseColumn {
        let mut col: SparseColumn = r
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, Rational::from(c) * Rational::from_integer(sign)))
            .collect();
        if !r.rhs.is_zero() {
            col.push((dim, Rational::from(&r.rhs) * Rational::from_integer(sign)));
        }
        col
    };
    for r in inequalities {
        lp.push_column(column(r, 1), Rational::zero());
    }
    for e in equalities {
        lp.push_column(column(e, 1), Rational::zero());
        lp.push_column(column(e, -1), Rational::zero());
    }
    lp.set_rhs(dim, -Rational::one());
    !matches!(find_feasible(&lp), LpOutcome::Optimal(_))
}

/// Drops every inequality implied by the remaining ones, testing rows in
/// canonical order against the rows still kept. Each test solves the dual of
/// `max g·x` over the other rows: `min h·y` subject to `Gᵀy + Eᵀz = g`,
/// `y ≥ 0`.
pub fn remove_redundant(sys: &LinearSystem) -> Result<LinearSystem> {
    let rows = sys.inequalities();
    let alive = redundancy_mask(rows, sys.equalities(), sys.dim());
    let kept = rows
        .iter()
        .zip(alive)
        .filter_map(|(r, a)| a.then(|| r.clone()));
    LinearSystem::from_rows(sys.coords(), sys.equalities().to_vec(), kept)
}

/// `false` marks rows found redundant.
fn redundancy_mask(rows: &[Row], equalities: &[Row], dim: usize) -> Vec<bool> {
    let mut alive = vec![true; rows.len()];
    for k in 0..rows.len() {
        let others: Vec<&Row> = rows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k && alive[i])
            .map(|(_, r)| r)
            .collect();
        if is_implied(&rows[k], &others, equalities, dim) {
            alive[k] = false;
        }
    }
    alive
}

fn is_implied(target: &Row, others: &[&Row], equalities: &[Row], dim: usize) -> bool {
    let mut lp = StandardLp::new(dim);
    let column = |r: &Row, sign: i64| -> SparseColumn {
        r.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, Rational::from(c) * Rational::from_integer(sign)))
            .collect()
    };
    for r in others {
        lp.push_column(column(r, 1), Rational::from(&r.rhs));
    }
    for e in equalities {
        lp.push_column(column(e, 1), Rational::from(&e.rhs));
        lp.push_column(column(e, -1), -Rational::from(&e.rhs));
    }
    for (i, c) in target.coeffs.iter().enumerate() {
        lp.set_rhs(i, Rational::from(c));
    }
    match minimize(&lp) {
        LpOutcome::Optimal(s) => s.value <= Rational::from(&target.rhs),
        // The other rows are infeasible.
        LpOutcome::Unbounded => true,
        // `g·x` is unbounded over the other rows, or they are infeasible.
        LpOutcome::Infeasible { .. } => !rows_feasible(others.iter().copied(), equalities, dim),
    }
}

/// Coordinate name for the total connection mismatch Δ.
pub const DELTA: &str = "delta";

/// Full pipeline from the vertex set of `d`.
pub fn derive_delta_system(d: &SystemDescriptor) -> Result<LinearSystem> {
    let facets = facet_enumeration(&enumerate_vertices(d))?;
    derive_delta_system_from(&facets, d)
}

/// Adjoins `2Δ + Σ connections = #connections` to the facet system, solves it
/// for the first connection coordinate, then eliminates the others in
/// declaration order with redundancy removal after each step. The result is
/// over the observable coordinates followed by `delta`.
pub fn derive_delta_system_from(facets: &LinearSystem, d: &SystemDescriptor) -> Result<LinearSystem> {
    let mut coords = d.coordinate_names();
    coords.push(DELTA.to_string());
    let sys = facets.reindexed(&coords)?;
    let dim = coords.len();
    let connections: Vec<usize> = d
        .connection_names()
        .iter()
        .map(|n| coords.iter().position(|c| c == n).expect("connection coordinate"))
        .collect();

    let mut definition = vec![BigInt::zero(); dim];
    for &c in &connections {
        definition[c] = BigInt::from(1);
    }
    definition[dim - 1] = BigInt::from(2);
    let definition = Row {
        coeffs: definition,
        rhs: BigInt::from(connections.len()),
    };

    let first = connections[0];
    let originals: Vec<Row> = sys
        .inequalities()
        .iter()
        .map(|r| drop_coordinate(&substitute(r, &definition, first), first))
        .collect();
    let total = originals.len();
    let mut rows: Vec<Tracked> = originals
        .into_iter()
        .enumerate()
        .map(|(i, r)| Tracked::new(r, i, total))
        .collect();
    coords.remove(first);
    rows = tidy(rows);

    for (step, name) in d.connection_names().iter().skip(1).enumerate() {
        let k = coords.iter().position(|c| c == name).expect("connection coordinate");
        rows = eliminate(rows, k, Some(step as u32 + 2));
        coords.remove(k);
        rows = tidy(rows);
        let plain: Vec<Row> = rows.iter().map(|t| t.row.clone()).collect();
        let alive = redundancy_mask(&plain, &[], coords.len());
        rows = rows
            .into_iter()
            .zip(alive)
            .filter_map(|(t, a)| a.then_some(t))
            .collect();
    }

    let inequalities: Vec<Row> = rows.into_iter().map(|t| t.row).collect();
    let out = LinearSystem::from_rows(&coords, Vec::new(), inequalities)?;
    if out.inequalities().iter().any(Row::is_zero_lhs) {
        return Err(Error::Degenerate("derived system is infeasible".into()));
    }
    Ok(out)
}

/// Variables of the Δ-system for `kind`: observables then `delta`.
pub fn delta_coordinates(kind: SystemKind) -> Vec<String> {
    let mut names = SystemDescriptor::new(kind).observable_names();
    names.push(DELTA.to_string());
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn system(coords: &[&str], rows: &[(&[i64], i64)]) -> LinearSystem {
        LinearSystem::from_rows(
            coords,
            Vec::new(),
            rows.iter().map(|(c, r)| Row::from_ints(c, *r)),
        )
        .unwrap()
    }

    #[test]
    fn eliminate_between_bounds() {
        // x ≥ y, x ≤ z
        let s = system(&["x", "y", "z"], &[(&[-1, 1, 0], 0), (&[1, 0, -1], 0)]);
        let out = fourier_motzkin_eliminate(&s, "x").unwrap();
        assert_eq!(out, system(&["y", "z"], &[(&[1, -1], 0)]));
    }

    #[test]
    fn eliminate_keeps_contradiction() {
        let s = system(&["x"], &[(&[-1], 0), (&[1], -1)]);
        let out = fourier_motzkin_eliminate(&s, "x").unwrap();
        assert_eq!(out.to_text(), "# coordinates: \n0 <= -1\n");
        assert!(!is_feasible(&out));
        assert_eq!(fourier_motzkin_eliminate(&s, "w").unwrap(), s);
    }

    #[test]
    fn eliminate_through_equality() {
        let mut s = system(&["x", "y"], &[(&[1, 1], 3)]);
        s.add_equality(&[q("2"), q("-1")], &q("0")).unwrap();
        let out = fourier_motzkin_eliminate(&s, "y").unwrap();
        assert_eq!(out, system(&["x"], &[(&[1], 1)]));
    }

    #[test]
    fn redundancy_examples() {
        let s = system(&["x"], &[(&[1], 1), (&[1], 2)]);
        assert_eq!(remove_redundant(&s).unwrap(), system(&["x"], &[(&[1], 1)]));
        let s = system(&["x", "y"], &[(&[1, 0], 1), (&[0, 1], 1)]);
        assert_eq!(remove_redundant(&s).unwrap(), s);
        let s = system(&["x", "y"], &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 2), (&[1, 1], 3)]);
        assert_eq!(remove_redundant(&s).unwrap().inequalities().len(), 2);
    }

    #[test]
    fn lg_delta_system_shape() {
        let d = SystemDescriptor::lg();
        let out = derive_delta_system(&d).unwrap();
        assert_eq!(out.coords(), &delta_coordinates(SystemKind::Lg)[..]);
        assert_eq!(out, crate::polytope::closed_form_delta_system(SystemKind::Lg));
    }

    fn small_system() -> impl Strategy<Value = LinearSystem> {
        proptest::collection::vec((proptest::array::uniform3(-3i64..=3), -4i64..=6), 1..8).prop_map(
            |rows| {
                let rows: Vec<(&[i64], i64)> = rows.iter().map(|(c, r)| (&c[..], *r)).collect();
                system(&["x", "y", "z"], &rows)
            },
        )
    }

    fn point() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((-12i64..=12).prop_map(|n| Rational::new(n, 4)), 3)
    }

    proptest! {
        #[test]
        fn fm_is_sound(s in small_system(), p in point()) {
            // The projection contains (y, z) iff some x extends it; the
            // admissible x form an interval computable row by row.
            let out = fourier_motzkin_eliminate(&s, "x").unwrap();
            let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
            let mut ok = true;
            for r in s.inequalities() {
                let c = Rational::from(&r.coeffs[0]);
                let rest = Rational::from(&r.coeffs[1]) * &p[1] + Rational::from(&r.coeffs[2]) * &p[2];
                let slack = r.rhs_rational() - rest;
                if c.is_zero() {
                    ok &= !slack.is_negative();
                } else if c.is_positive() {
                    let b = slack / c;
                    hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
                } else {
                    let b = slack / c;
                    lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
                }
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                ok &= l <= h;
            }
            prop_assert_eq!(out.contains(&p[1..]), ok);
        }

        #[test]
        fn redundancy_removal_preserves_membership(s in small_system(), pts in proptest::collection::vec(point(), 20)) {
            let out = remove_redundant(&s).unwrap();
            prop_assert!(out.inequalities().len() <= s.inequalities().len());
            for p in &pts {
                prop_assert_eq!(s.contains(p), out.contains(p));
            }
        }
    }
}
