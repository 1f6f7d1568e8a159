//! Exact linear programming in standard form:
//!
//! ```text
//! minimize  c·x   subject to  A x = b,  x ≥ 0
//! ```
//!
//! Two-phase revised simplex over [`Rational`] with an explicit basis inverse
//! and Bland's rule for both the entering and the leaving variable, so it
//! terminates on degenerate problems. Phase one uses one artificial variable
//! per row; artificials never re-enter once they leave, and those stuck in
//! the basis on linearly dependent rows are harmless.

use crate::rational::Rational;

/// Sparse column: `(row, value)` pairs with nonzero values.
pub type SparseColumn = Vec<(usize, Rational)>;

#[derive(Debug, Clone)]
pub struct StandardLp {
    rows: usize,
    columns: Vec<SparseColumn>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
}

impl StandardLp {
    pub fn new(rows: usize) -> Self {
        StandardLp {
            rows,
            columns: Vec::new(),
            rhs: vec![Rational::zero(); rows],
            cost: Vec::new(),
        }
    }

    /// Builds from dense row-major data.
    pub fn from_dense(a: &[Vec<Rational>], b: Vec<Rational>, c: Vec<Rational>) -> Self {
        let rows = a.len();
        assert_eq!(b.len(), rows);
        let mut lp = StandardLp::new(rows);
        lp.rhs = b;
        for (j, cost) in c.into_iter().enumerate() {
            let col = (0..rows)
                .filter(|&i| !a[i][j].is_zero())
                .map(|i| (i, a[i][j].clone()))
                .collect();
            lp.push_column(col, cost);
        }
        lp
    }

    pub fn push_column(&mut self, column: SparseColumn, cost: Rational) -> usize {
        debug_assert!(column.iter().all(|(r, v)| *r < self.rows && !v.is_zero()));
        self.columns.push(column);
        self.cost.push(cost);
        self.columns.len() - 1
    }

    pub fn set_rhs(&mut self, row: usize, value: Rational) {
        self.rhs[row] = value;
    }

    pub fn set_cost(&mut self, column: usize, value: Rational) {
        self.cost[column] = value;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseColumn {
        &self.columns[j]
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<Rational>,
    pub value: Rational,
    /// Simplex multipliers `y = c_B B⁻¹` for the original rows.
    pub duals: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    /// `farkas` satisfies `yᵀA ≤ 0` and `yᵀb > 0`.
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

struct Simplex<'a> {
    lp: &'a StandardLp,
    m: usize,
    n: usize,
    /// Row sign flips applied so that the working right-hand side is ≥ 0.
    flip: Vec<bool>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a StandardLp) -> Self {
        let m = lp.rows;
        let n = lp.columns.len();
        let flip: Vec<bool> = lp.rhs.iter().map(Rational::is_negative).collect();
        let xb = lp.rhs.iter().map(Rational::abs).collect();
        let mut binv = vec![vec![Rational::zero(); m]; m];
        for (i, row) in binv.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        Simplex {
            lp,
            m,
            n,
            flip,
            basis: (n..n + m).collect(),
            in_basis: vec![false; n + m],
            binv,
            xb,
            pivots: 0,
        }
        .mark_basis()
    }

    fn mark_basis(mut self) -> Self {
        for &j in &self.basis {
            self.in_basis[j] = true;
        }
        self
    }

    #[inline]
    fn entry(&self, row: usize, v: &Rational) -> Rational {
        if self.flip[row] {
            -v
        } else {
            v.clone()
        }
    }

    /// `B⁻¹ a_j` for structural or artificial column `j`.
    fn ftran(&self, j: usize) -> Vec<Rational> {
        let mut u = vec![Rational::zero(); self.m];
        if j >= self.n {
            let r = j - self.n;
            for (i, ui) in u.iter_mut().enumerate() {
                *ui = self.binv[i][r].clone();
            }
            return u;
        }
        for (r, v) in &self.lp.columns[j] {
            let v = self.entry(*r, v);
            for (i, ui) in u.iter_mut().enumerate() {
                let b = &self.binv[i][*r];
                if !b.is_zero() {
                    *ui += b * &v;
                }
            }
        }
        u
    }

    /// Row `r` of `B⁻¹ A` at structural column `j`.
    fn row_entry(&self, r: usize, j: usize) -> Rational {
        let mut s = Rational::zero();
        for (k, v) in &self.lp.columns[j] {
            let b = &self.binv[r][*k];
            if !b.is_zero() {
                s += b * self.entry(*k, v);
            }
        }
        s
    }

    fn multipliers(&self, cost: &dyn Fn(usize) -> Rational) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); self.m];
        for (i, &j) in self.basis.iter().enumerate() {
            let c = cost(j);
            if c.is_zero() {
                continue;
            }
            for (k, yk) in y.iter_mut().enumerate() {
                let b = &self.binv[i][k];
                if !b.is_zero() {
                    *yk += &c * b;
                }
            }
        }
        y
    }

    fn pivot(&mut self, r: usize, q: usize, u: &[Rational]) {
        let pivot = u[r].clone();
        if pivot != Rational::one() {
            let inv = pivot.recip();
            for v in self.binv[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.xb[r] *= &inv;
        }
        let pivot_row = self.binv[r].clone();
        let pivot_x = self.xb[r].clone();
        for i in 0..self.m {
            if i == r || u[i].is_zero() {
                continue;
            }
            let f = &u[i];
            for (v, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= f * p;
                }
            }
            if !pivot_x.is_zero() {
                self.xb[i] -= f * &pivot_x;
            }
        }
        self.in_basis[self.basis[r]] = false;
        self.basis[r] = q;
        self.in_basis[q] = true;
        self.pivots += 1;
    }

    /// One Bland iteration over structural columns.
    fn step(&mut self, cost: &dyn Fn(usize) -> Rational) -> Step {
        let y = self.multipliers(cost);
        let mut entering = None;
        for j in 0..self.n {
            if self.in_basis[j] {
                continue;
            }
            let mut d = cost(j);
            for (r, v) in &self.lp.columns[j] {
                if !y[*r].is_zero() {
                    d -= &y[*r] * self.entry(*r, v);
                }
            }
            if d.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(q) = entering else {
            return Step::Optimal;
        };
        let u = self.ftran(q);
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..self.m {
            if !u[i].is_positive() {
                continue;
            }
            let ratio = &self.xb[i] / &u[i];
            let better = match &leave {
                None => true,
                Some((l, best)) => match ratio.cmp(best) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => self.basis[i] < self.basis[*l],
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        match leave {
            None => Step::Unbounded,
            Some((r, _)) => {
                self.pivot(r, q, &u);
                Step::Pivoted
            }
        }
    }

    fn run(&mut self, cost: &dyn Fn(usize) -> Rational) -> Step {
        loop {
            match self.step(cost) {
                Step::Pivoted => continue,
                other => return other,
            }
        }
    }

    fn unflip(&self, y: Vec<Rational>) -> Vec<Rational> {
        y.into_iter()
            .zip(&self.flip)
            .map(|(v, &f)| if f { -v } else { v })
            .collect()
    }

    /// Pivots basic artificials out wherever a structural column allows it.
    fn expel_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.n {
                continue;
            }
            let candidate = (0..self.n)
                .filter(|&j| !self.in_basis[j])
                .find(|&j| !self.row_entry(r, j).is_zero());
            if let Some(j) = candidate {
                let u = self.ftran(j);
                self.pivot(r, j, &u);
            }
        }
    }
}

/// Solves `min c·x, Ax = b, x ≥ 0` exactly.
pub fn minimize(lp: &StandardLp) -> LpOutcome {
    let mut s = Simplex::new(lp);
    let n = s.n;
    let phase1 = move |j: usize| {
        if j >= n {
            Rational::one()
        } else {
            Rational::zero()
        }
    };
    s.run(&phase1);
    let infeasibility: Rational = s
        .basis
        .iter()
        .zip(&s.xb)
        .filter(|(&j, _)| j >= n)
        .map(|(_, v)| v)
        .sum();
    if infeasibility.is_positive() {
        let y = s.multipliers(&phase1);
        return LpOutcome::Infeasible {
            farkas: s.unflip(y),
        };
    }
    s.expel_artificials();
    let costs = &lp.cost;
    let phase2 = move |j: usize| {
        if j >= n {
            Rational::zero()
        } else {
            costs[j].clone()
        }
    };
    match s.run(&phase2) {
        Step::Unbounded => LpOutcome::Unbounded,
        _ => {
            let mut x = vec![Rational::zero(); n];
            for (&j, v) in s.basis.iter().zip(&s.xb) {
                if j < n {
                    x[j] = v.clone();
                }
            }
            let value = x
                .iter()
                .zip(costs)
                .filter(|(v, _)| !v.is_zero())
                .map(|(v, c)| v * c)
                .sum();
            let y = s.multipliers(&phase2);
            LpOutcome::Optimal(LpSolution {
                x,
                value,
                duals: s.unflip(y),
            })
        }
    }
}

/// Feasibility only: a point of `{Ax = b, x ≥ 0}` or a Farkas certificate.
pub fn find_feasible(lp: &StandardLp) -> LpOutcome {
    let mut zero_cost = lp.clone();
    for c in zero_cost.cost.iter_mut() {
        *c = Rational::zero();
    }
    minimize(&zero_cost)
}

/// `A x` for a standard-form problem.
pub fn apply(lp: &StandardLp, x: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); lp.rows];
    for (j, col) in lp.columns.iter().enumerate() {
        if x[j].is_zero() {
            continue;
        }
        for (r, v) in col {
            out[*r] += v * &x[j];
        }
    }
    out
}

/// Checks a Farkas certificate: `yᵀA ≤ 0` column by column and `yᵀb > 0`.
pub fn is_farkas_certificate(lp: &StandardLp, y: &[Rational]) -> bool {
    let yb: Rational = y.iter().zip(&lp.rhs).map(|(a, b)| a * b).sum();
    if !yb.is_positive() {
        return false;
    }
    lp.columns.iter().all(|col| {
        let s: Rational = col.iter().map(|(r, v)| &y[*r] * v).sum();
        !s.is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn small_optimum() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![
            vec![r(1), r(2), r(1), r(0)],
            vec![r(3), r(1), r(0), r(1)],
        ];
        let lp = StandardLp::from_dense(&a, vec![r(4), r(6)], vec![r(-1), r(-1), r(0), r(0)]);
        let sol = minimize(&lp).optimal().unwrap();
        assert_eq!(sol.value, q("-14/5"));
        assert_eq!(&sol.x[..2], &[q("8/5"), q("6/5")]);
        assert_eq!(apply(&lp, &sol.x), vec![r(4), r(6)]);
    }

    #[test]
    fn infeasible_with_certificate() {
        // x + y = 1, x + y = 2
        let a = vec![vec![r(1), r(1)], vec![r(1), r(1)]];
        let lp = StandardLp::from_dense(&a, vec![r(1), r(2)], vec![r(0), r(0)]);
        match minimize(&lp) {
            LpOutcome::Infeasible { farkas } => assert!(is_farkas_certificate(&lp, &farkas)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_certificate() {
        // x = -1 has no nonnegative solution.
        let lp = StandardLp::from_dense(&[vec![r(1)]], vec![r(-1)], vec![r(0)]);
        match minimize(&lp) {
            LpOutcome::Infeasible { farkas } => assert!(is_farkas_certificate(&lp, &farkas)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn unbounded() {
        // min -x s.t. x - y = 0
        let lp = StandardLp::from_dense(&[vec![r(1), r(-1)]], vec![r(0)], vec![r(-1), r(0)]);
        assert_eq!(minimize(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        // x + y = 1 stated twice, plus 2x + 2y = 2; min x.
        let a = vec![
            vec![r(1), r(1)],
            vec![r(1), r(1)],
            vec![r(2), r(2)],
        ];
        let lp = StandardLp::from_dense(&a, vec![r(1), r(1), r(2)], vec![r(1), r(0)]);
        let sol = minimize(&lp).optimal().unwrap();
        assert_eq!(sol.value, r(0));
        assert_eq!(sol.x, vec![r(0), r(1)]);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's classic cycling example (cycles under Dantzig's rule).
        let a = vec![
            vec![q("1/4"), r(-60), q("-1/25"), r(9), r(1), r(0), r(0)],
            vec![q("1/2"), r(-90), q("-1/50"), r(3), r(0), r(1), r(0)],
            vec![r(0), r(0), r(1), r(0), r(0), r(0), r(1)],
        ];
        let c = vec![q("-3/4"), r(150), q("-1/50"), r(6), r(0), r(0), r(0)];
        let lp = StandardLp::from_dense(&a, vec![r(0), r(0), r(1)], c);
        let sol = minimize(&lp).optimal().unwrap();
        assert_eq!(sol.value, q("-1/20"));
    }

    #[test]
    fn dual_values_certify_optimality() {
        let a = vec![
            vec![r(1), r(1), r(1), r(0)],
            vec![r(1), r(-1), r(0), r(1)],
        ];
        let lp = StandardLp::from_dense(&a, vec![r(3), r(1)], vec![r(-2), r(-1), r(0), r(0)]);
        let sol = minimize(&lp).optimal().unwrap();
        let yb: Rational = sol.duals.iter().zip(lp.rhs()).map(|(a, b)| a * b).sum();
        assert_eq!(yb, sol.value);
    }
}
