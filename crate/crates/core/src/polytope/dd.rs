//! Facet enumeration by the double-description method.
//!
//! The inequalities `a·x ≤ b` valid on every point form the polyhedral cone
//! `{(a, b) : a·v − b ≤ 0 for all points v}`; its extreme rays are the facets.
//! The cone is built incrementally, one point (one homogeneous constraint) at a
//! time, starting from a simplex of affinely independent points. Rays are kept
//! as primitive integer vectors and adjacency is decided combinatorially from
//! the sets of constraints each ray is tight at.
//!
//! Lower-dimensional point sets are handled by computing the affine hull
//! first, projecting onto a set of pivot coordinates in which the hull is
//! full-dimensional, and lifting the facets back with zero coefficients.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;

use super::VertexSet;
use crate::error::{Error, Result};
use crate::linear_system::{LinearSystem, Row};
use crate::rational::Rational;

pub fn facet_enumeration(v: &VertexSet) -> Result<LinearSystem> {
    let dim = v.dim();
    if v.points.is_empty() {
        return Err(Error::Empty("facet enumeration needs at least one point"));
    }
    if let Some(p) = v.points.iter().find(|p| p.len() != dim) {
        return Err(Error::validation(
            "points",
            format!("point has {} coordinates, expected {dim}", p.len()),
        ));
    }
    let points: Vec<Vec<Rational>> = v
        .points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if points.len() < 2 {
        return Err(Error::Degenerate("all points are identical".into()));
    }

    let hull = AffineHull::new(&points);
    let mut equalities = Vec::new();
    for e in &hull.normals {
        let rhs: Rational = e.iter().zip(&points[0]).map(|(c, x)| c * x).sum();
        equalities.push(Row::from_rationals(e, &rhs));
    }

    let projected: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| hull.pivots.iter().map(|&k| p[k].clone()).collect())
        .collect();
    let rays = ConeBuilder::new(&projected)?.run()?;

    let mut inequalities = Vec::new();
    for ray in rays {
        let k = hull.pivots.len();
        let mut coeffs = vec![BigInt::from(0); dim];
        for (slot, &col) in hull.pivots.iter().enumerate() {
            coeffs[col] = BigInt::from(ray[slot]);
        }
        inequalities.push(Row {
            coeffs,
            rhs: BigInt::from(ray[k]),
        });
    }
    LinearSystem::from_rows(&v.coords, equalities, inequalities)
}

/// Affine hull of a point set: pivot coordinates of the direction space and
/// normals of the hull (one per free coordinate).
struct AffineHull {
    pivots: Vec<usize>,
    normals: Vec<Vec<Rational>>,
}

impl AffineHull {
    fn new(points: &[Vec<Rational>]) -> Self {
        let dim = points[0].len();
        let rows: Vec<Vec<Rational>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&points[0]).map(|(x, y)| x - y).collect())
            .collect();
        let (rref, pivots) = rref(rows, dim);
        let normals = (0..dim)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut n = vec![Rational::zero(); dim];
                n[free] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    n[p] = -&rref[r][free];
                }
                n
            })
            .collect();
        AffineHull { pivots, normals }
    }
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn rref(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

fn overflow() -> Error {
    Error::Degenerate("coefficient overflow in facet enumeration".into())
}

fn to_primitive(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        if *x == 0 || *y == 0 {
            return Some(acc);
        }
        acc.checked_add(x.checked_mul(*y)?)
    })
    .ok_or_else(overflow)
}

/// Flat storage for rays and their zero sets.
struct ConeBuilder {
    /// Homogeneous constraints `(L·v, −L)`, one per point, scaled to integers.
    constraints: Vec<Vec<i128>>,
    width: usize,
    words: usize,
    rays: Vec<Vec<i128>>,
    zeros: Vec<u64>,
    pending: Vec<usize>,
}

impl ConeBuilder {
    fn new(points: &[Vec<Rational>]) -> Result<Self> {
        let width = points[0].len() + 1;
        let mut constraints = Vec::with_capacity(points.len());
        for p in points {
            let mut row: Vec<Rational> = p.clone();
            row.push(-Rational::one());
            let r = Row::from_rationals(&row, &Rational::zero());
            let ints = r
                .coeffs
                .iter()
                .map(|c| i128::try_from(c).map_err(|_| overflow()))
                .collect::<Result<Vec<_>>>()?;
            constraints.push(ints);
        }
        let words = points.len().div_ceil(64);

        let basis = independent_subset(points, width);
        let inverse = invert(
            &basis
                .iter()
                .map(|&i| {
                    constraints[i]
                        .iter()
                        .map(|&x| Rational::from(BigInt::from(x)))
                        .collect()
                })
                .collect::<Vec<Vec<Rational>>>(),
        );
        let mut builder = ConeBuilder {
            constraints,
            width,
            words,
            rays: Vec::new(),
            zeros: Vec::new(),
            pending: (0..points.len()).filter(|i| !basis.contains(i)).collect(),
        };
        for j in 0..width {
            let column: Vec<Rational> = (0..width).map(|i| -&inverse[i][j]).collect();
            let row = Row::from_rationals(&column, &Rational::zero());
            let mut ray = row
                .coeffs
                .iter()
                .map(|c| i128::try_from(c).map_err(|_| overflow()))
                .collect::<Result<Vec<_>>>()?;
            to_primitive(&mut ray);
            let mut zero = vec![0u64; words];
            for &i in &basis {
                if dot(&builder.constraints[i], &ray)? == 0 {
                    zero[i / 64] |= 1 << (i % 64);
                }
            }
            builder.rays.push(ray);
            builder.zeros.extend(zero);
        }
        Ok(builder)
    }

    fn zero_set(&self, r: usize) -> &[u64] {
        &self.zeros[r * self.words..(r + 1) * self.words]
    }

    fn run(mut self) -> Result<Vec<Vec<i128>>> {
        let pending = std::mem::take(&mut self.pending);
        for i in pending {
            self.add_constraint(i)?;
        }
        Ok(self.rays)
    }

    fn add_constraint(&mut self, i: usize) -> Result<()> {
        let a = self.constraints[i].clone();
        let values = self
            .rays
            .iter()
            .map(|r| dot(&a, r))
            .collect::<Result<Vec<_>>>()?;
        let positive: Vec<usize> = (0..self.rays.len()).filter(|&r| values[r] > 0).collect();
        let negative: Vec<usize> = (0..self.rays.len()).filter(|&r| values[r] < 0).collect();
        let (word, bit) = (i / 64, 1u64 << (i % 64));
        if positive.is_empty() {
            for r in 0..self.rays.len() {
                if values[r] == 0 {
                    self.zeros[r * self.words + word] |= bit;
                }
            }
            return Ok(());
        }

        // A facet of the new cone is tight at ≥ width − 2 earlier constraints.
        let need = self.width as u32 - 2;
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        let mut common = vec![0u64; self.words];
        for &p in &positive {
            for &n in &negative {
                let mut count = 0;
                for (w, c) in common.iter_mut().enumerate() {
                    *c = self.zeros[p * self.words + w] & self.zeros[n * self.words + w];
                    count += c.count_ones();
                }
                if count < need || !self.adjacent(p, n, &common) {
                    continue;
                }
                let (vp, vn) = (values[p], -values[n]);
                let mut ray = self.rays[n]
                    .iter()
                    .zip(&self.rays[p])
                    .map(|(x, y)| {
                        vp.checked_mul(*x)?.checked_add(vn.checked_mul(*y)?)
                    })
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(overflow)?;
                to_primitive(&mut ray);
                common[word] |= bit;
                new_rays.push(ray);
                new_zeros.extend_from_slice(&common);
            }
        }

        let mut rays = Vec::with_capacity(self.rays.len() - positive.len() + new_rays.len());
        let mut zeros = Vec::with_capacity(rays.capacity() * self.words);
        for r in 0..self.rays.len() {
            if values[r] > 0 {
                continue;
            }
            let start = zeros.len();
            zeros.extend_from_slice(self.zero_set(r));
            if values[r] == 0 {
                zeros[start + word] |= bit;
            }
            rays.push(std::mem::take(&mut self.rays[r]));
        }
        rays.extend(new_rays);
        zeros.extend(new_zeros);
        self.rays = rays;
        self.zeros = zeros;
        Ok(())
    }

    /// No third ray is tight on every constraint both `p` and `n` are tight on.
    fn adjacent(&self, p: usize, n: usize, common: &[u64]) -> bool {
        (0..self.rays.len()).all(|r| {
            r == p
                || r == n
                || self
                    .zero_set(r)
                    .iter()
                    .zip(common)
                    .any(|(z, c)| c & !z != 0)
        })
    }
}

/// Indices of the first `width` points (in order) whose homogenized vectors
/// `(v, 1)` are linearly independent.
fn independent_subset(points: &[Vec<Rational>], width: usize) -> Vec<usize> {
    let mut basis: Vec<(Vec<Rational>, usize)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut v: Vec<Rational> = p.clone();
        v.push(Rational::one());
        for (b, pivot) in &basis {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &b[*pivot];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            basis.push((v, pivot));
            chosen.push(i);
            if chosen.len() == width {
                break;
            }
        }
    }
    debug_assert_eq!(chosen.len(), width, "projected hull is full-dimensional");
    chosen
}

fn invert(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let (reduced, pivots) = rref(std::mem::take(&mut aug), 2 * n);
    debug_assert_eq!(&pivots[..], &(0..n).collect::<Vec<_>>()[..]);
    reduced.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{enumerate_vertices, SystemDescriptor};
    use crate::rational::q;

    fn vs(points: &[&[&str]]) -> VertexSet {
        let dim = points[0].len();
        VertexSet::new(
            (0..dim).map(|i| format!("x{i}")).collect(),
            points.iter().map(|p| p.iter().map(|s| q(s)).collect()).collect(),
        )
    }

    #[test]
    fn square() {
        let v = vs(&[&["1", "1"], &["1", "-1"], &["-1", "1"], &["-1", "-1"]]);
        let sys = facet_enumeration(&v).unwrap();
        assert_eq!(
            sys.to_text(),
            "# coordinates: x0 x1\n-1*x0 <= 1\n-1*x1 <= 1\n1*x1 <= 1\n1*x0 <= 1\n"
        );
    }

    #[test]
    fn triangle_in_3d_has_an_equality() {
        let v = vs(&[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]]);
        let sys = facet_enumeration(&v).unwrap();
        assert_eq!(sys.equalities().len(), 1);
        assert_eq!(sys.inequalities().len(), 3);
        assert!(sys.contains(&[q("1/3"), q("1/3"), q("1/3")]));
        assert!(!sys.contains(&[q("1/2"), q("1/2"), q("1/2")]));
    }

    #[test]
    fn segment_and_degenerate() {
        let v = vs(&[&["0", "0"], &["2", "2"], &["1", "1"]]);
        let sys = facet_enumeration(&v).unwrap();
        assert_eq!(sys.equalities().len(), 1);
        assert_eq!(sys.inequalities().len(), 2);
        let same = vs(&[&["1/2", "3"], &["1/2", "3"]]);
        assert!(matches!(facet_enumeration(&same), Err(Error::Degenerate(_))));
    }

    #[test]
    fn duplicates_and_order_do_not_matter() {
        let base = vs(&[&["0", "0"], &["3", "0"], &["0", "2"], &["1", "1"], &["1/2", "1/3"]]);
        let mut shuffled = base.clone();
        shuffled.points.reverse();
        shuffled.points.push(base.points[1].clone());
        assert_eq!(
            facet_enumeration(&base).unwrap(),
            facet_enumeration(&shuffled).unwrap()
        );
        assert_eq!(facet_enumeration(&base).unwrap().inequalities().len(), 3);
    }

    #[test]
    fn lg_hull_has_56_facets() {
        let d = SystemDescriptor::lg();
        let v = enumerate_vertices(&d);
        let sys = facet_enumeration(&v).unwrap();
        assert!(sys.equalities().is_empty());
        assert_eq!(sys.inequalities().len(), 56);
        for f in sys.inequalities() {
            let tight = v.points.iter().filter(|p| f.lhs(p) == f.rhs_rational()).count();
            assert!(tight >= 12);
        }
    }
}
