//! Closed-form inequality systems, generated by sign enumeration, and
//! comparison of derived systems against them.

use std::collections::BTreeSet;

use super::{delta_coordinates, SystemDescriptor};
use crate::error::{Error, Result};
use crate::linear_system::{LinearSystem, Row};
use crate::model::SystemKind;

/// Sign vectors of length `n` whose number of −1 entries has the given parity.
fn sign_patterns(n: usize, odd: bool) -> impl Iterator<Item = Vec<i64>> {
    (0u32..1 << n)
        .filter(move |m| (m.count_ones() % 2 == 1) == odd)
        .map(move |m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
}

fn row(dim: usize, terms: &[(usize, i64)], rhs: i64) -> Row {
    let mut coeffs = vec![0i64; dim];
    for &(k, c) in terms {
        coeffs[k] += c;
    }
    Row::from_ints(&coeffs, rhs)
}

/// The four rows of `−1 + |s + t| ≤ st ≤ 1 − |s − t|`.
fn implicit_rows(dim: usize, st: usize, s: usize, t: usize) -> [Row; 4] {
    [
        row(dim, &[(s, 1), (t, 1), (st, -1)], 1),
        row(dim, &[(s, -1), (t, -1), (st, -1)], 1),
        row(dim, &[(st, 1), (s, 1), (t, -1)], 1),
        row(dim, &[(st, 1), (s, -1), (t, 1)], 1),
    ]
}

fn all_implicit_rows(d: &SystemDescriptor, dim: usize, pairs: &[(usize, usize)]) -> Vec<Row> {
    pairs
        .iter()
        .flat_map(|&(u, v)| {
            implicit_rows(
                dim,
                d.pair_coordinate(u, v),
                d.single_coordinate(u),
                d.single_coordinate(v),
            )
        })
        .collect()
}

/// Compatibility rows: every signed sum of all observed and connection
/// products with an odd number of minus signs is at most `#terms − 2`
/// (Bell: `s₀(ab) ≤ 6 − s₁(c)` and `s₁(ab) ≤ 6 − s₀(c)`; LG:
/// `s₁(…) ≤ 4`).
fn compatibility_rows(d: &SystemDescriptor) -> Vec<Row> {
    let dim = d.coordinates.len();
    let terms: Vec<usize> = d.pairs().map(|(u, v)| d.pair_coordinate(u, v)).collect();
    let bound = terms.len() as i64 - 2;
    sign_patterns(terms.len(), true)
        .map(|signs| {
            let t: Vec<(usize, i64)> = terms.iter().copied().zip(signs).collect();
            row(dim, &t, bound)
        })
        .collect()
}

/// The closed-form compatibility system over the descriptor's coordinates:
/// the parity rows plus the implicit rows of every pair.
pub fn closed_form_compatibility(d: &SystemDescriptor) -> LinearSystem {
    let pairs: Vec<(usize, usize)> = d.pairs().collect();
    let rows = compatibility_rows(d)
        .into_iter()
        .chain(all_implicit_rows(d, d.coordinates.len(), &pairs));
    LinearSystem::from_rows(&d.coordinate_names(), Vec::new(), rows).expect("valid names")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FacetPartition {
    pub compatibility: usize,
    pub implicit: usize,
}

impl FacetPartition {
    pub fn total(&self) -> usize {
        self.compatibility + self.implicit
    }
}

/// Splits `facets` into compatibility and implicit rows. Any facet matching
/// neither, any expected row not present, or any equality is reported in a
/// [`Error::Mismatch`].
pub fn match_closed_form(facets: &LinearSystem, d: &SystemDescriptor) -> Result<FacetPartition> {
    let names = d.coordinate_names();
    let facets = facets
        .reindexed(&names)
        .map_err(|e| Error::Mismatch(format!("coordinates do not fit the descriptor: {e}")))?;
    let dim = names.len();
    let pairs: Vec<(usize, usize)> = d.pairs().collect();
    let compatibility: BTreeSet<Row> = canonical(compatibility_rows(d));
    let implicit: BTreeSet<Row> = canonical(all_implicit_rows(d, dim, &pairs));
    let found: BTreeSet<Row> = facets.inequalities().iter().cloned().collect();

    let mut problems = Vec::new();
    for e in facets.equalities() {
        let text = facets.inequality_text(e).replace("<=", "=");
        problems.push(format!("unexpected equality: {text}"));
    }
    for r in &found {
        if !compatibility.contains(r) && !implicit.contains(r) {
            problems.push(format!("unmatched: {}", facets.inequality_text(r)));
        }
    }
    for r in compatibility.iter().chain(&implicit) {
        if !found.contains(r) {
            problems.push(format!("missing: {}", facets.inequality_text(r)));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Mismatch(problems.join("\n")));
    }
    Ok(FacetPartition {
        compatibility: compatibility.len(),
        implicit: implicit.len(),
    })
}

fn canonical(rows: Vec<Row>) -> BTreeSet<Row> {
    rows.into_iter().collect()
}

/// Closed-form Δ-system over the observables and `delta`, with every row
/// multiplied by 2. Bell:
///
/// ```text
/// Δ ≥ −1 + ½ s₁(ab)            Δ ≥ ½ Σ |sᵢ − tᵢ|
/// Δ ≤ 4 − (−1 + ½ s₁(ab))      Δ ≤ 4 − ½ Σ |sᵢ + tᵢ|
/// ```
///
/// LG:
///
/// ```text
/// Δ′ ≥ −½ + ½ s₁(xy, xz, yz)       Δ′ ≥ ½ Σ |sᵢ − tᵢ|
/// Δ′ ≤ 3 − (−½ + ½ s₀(xy, xz, yz)) Δ′ ≤ 3 − ½ Σ |sᵢ + tᵢ|
/// ```
///
/// where `(sᵢ, tᵢ)` run over the singles joined by each connection. Both
/// include the implicit rows of the observed pairs.
pub fn closed_form_delta_system(kind: SystemKind) -> LinearSystem {
    let d = SystemDescriptor::new(kind);
    let coords = delta_coordinates(kind);
    let dim = coords.len();
    let delta = dim - 1;
    let products: Vec<usize> = d
        .observed_pairs
        .iter()
        .map(|&(u, v)| d.pair_coordinate(u, v))
        .collect();
    let singles: Vec<(usize, usize)> = d
        .connection_pairs
        .iter()
        .map(|&(u, v)| (d.single_coordinate(u), d.single_coordinate(v)))
        .collect();
    let n = singles.len() as i64;
    // Doubled constants of the product bounds, and the parity of s in the upper one.
    let (lower, upper, upper_odd) = match kind {
        SystemKind::Bell => (2, 10, true),
        SystemKind::Lg => (1, 7, false),
    };

    let mut rows = Vec::new();
    for signs in sign_patterns(products.len(), true) {
        let mut t: Vec<(usize, i64)> = products.iter().copied().zip(signs).collect();
        t.push((delta, -2));
        rows.push(row(dim, &t, lower));
    }
    for signs in sign_patterns(products.len(), upper_odd) {
        let mut t: Vec<(usize, i64)> = products.iter().copied().zip(signs).collect();
        t.push((delta, 2));
        rows.push(row(dim, &t, upper));
    }
    for mask in 0u32..1 << singles.len() {
        let mut minus: Vec<(usize, i64)> = vec![(delta, -2)];
        let mut plus: Vec<(usize, i64)> = vec![(delta, 2)];
        for (i, &(s, t)) in singles.iter().enumerate() {
            let sign = if mask >> i & 1 == 1 { -1 } else { 1 };
            minus.extend([(s, sign), (t, -sign)]);
            plus.extend([(s, sign), (t, sign)]);
        }
        rows.push(row(dim, &minus, 0));
        rows.push(row(dim, &plus, 2 * n));
    }
    rows.extend(all_implicit_rows(&d, dim, &d.observed_pairs));
    LinearSystem::from_rows(&coords, Vec::new(), rows).expect("valid names")
}
