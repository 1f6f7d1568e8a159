//! Closed-form contextuality measures.
//!
//! Bell (2×2) systems: Δ₀ (minimal connection cost forced by the marginals),
//! Δ_CHSH (half the CHSH excess over 2), Δ_min = max(Δ₀, Δ_CHSH) and the
//! degree Δ_min − Δ₀. Leggett–Garg (cyclic-3) systems: the same with Δ′₀,
//! Δ′_SZ and bound 1 + 2Δ′₀.
//!
//! Δ_CHSH and Δ′_SZ are reported unclamped and can be negative.

use crate::error::{Error, Result};
use crate::model::{
    validate_context, BellObservables, ConnectionExpectations, LGObservables,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Maximum of `±v₁ ± v₂ ± … ± v_k` over sign assignments whose number of
/// minus signs has the given parity.
///
/// Taking every term with its own sign gives `Σ|vᵢ|` with as many minuses as
/// there are negative entries; if that count has the wrong parity the best
/// repair flips the smallest magnitude, costing `2·min|vᵢ|`.
pub fn s_parity(values: &[Rational], parity: Parity) -> Result<Rational> {
    if values.is_empty() {
        return Err(Error::Empty("s_parity needs at least one value"));
    }
    let total: Rational = values.iter().map(Rational::abs).sum();
    let negatives = values.iter().filter(|v| v.is_negative()).count();
    let natural = if negatives % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    };
    let value = if natural == parity {
        total
    } else {
        let smallest = values
            .iter()
            .map(Rational::abs)
            .min()
            .expect("nonempty");
        total - smallest * Rational::from_integer(2)
    };
    #[cfg(debug_assertions)]
    if values.len() <= 8 {
        debug_assert_eq!(value, s_parity_enumerated(values, parity)?);
    }
    Ok(value)
}

/// Brute-force `s_parity` over all 2^k sign assignments.
pub fn s_parity_enumerated(values: &[Rational], parity: Parity) -> Result<Rational> {
    if values.is_empty() {
        return Err(Error::Empty("s_parity needs at least one value"));
    }
    let k = values.len();
    let want_odd = parity == Parity::Odd;
    (0u32..1 << k)
        .filter(|mask| (mask.count_ones() % 2 == 1) == want_odd)
        .map(|mask| {
            values
                .iter()
                .enumerate()
                .map(|(i, v)| if mask >> i & 1 == 1 { -v } else { v.clone() })
                .sum::<Rational>()
        })
        .max()
        .ok_or(Error::Empty("no sign assignment of the requested parity"))
}

fn s_odd(values: &[Rational]) -> Rational {
    s_parity(values, Parity::Odd).expect("nonempty")
}

fn s_even(values: &[Rational]) -> Rational {
    s_parity(values, Parity::Even).expect("nonempty")
}

fn half() -> Rational {
    Rational::new(1, 2)
}

/// Sums `|x - y|` over the pairs.
fn abs_diff_sum<'a>(pairs: impl IntoIterator<Item = (&'a Rational, &'a Rational)>) -> Rational {
    pairs.into_iter().map(|(x, y)| (x - y).abs()).sum()
}

fn abs_sum_sum<'a>(pairs: impl IntoIterator<Item = (&'a Rational, &'a Rational)>) -> Rational {
    pairs.into_iter().map(|(x, y)| (x + y).abs()).sum()
}

/// Pairs of single expectations belonging to the same output across the
/// two contexts: (A11,A12), (A21,A22), (B11,B21), (B12,B22).
fn bell_connection_singles(obs: &BellObservables) -> [(&Rational, &Rational); 4] {
    [
        (obs.a(0, 0), obs.a(0, 1)),
        (obs.a(1, 0), obs.a(1, 1)),
        (obs.b(0, 0), obs.b(1, 0)),
        (obs.b(0, 1), obs.b(1, 1)),
    ]
}

/// (X12,X13), (Y12,Y23), (Z13,Z23).
fn lg_connection_singles(obs: &LGObservables) -> [(&Rational, &Rational); 3] {
    [
        (obs.x12(), obs.x13()),
        (obs.y12(), obs.y23()),
        (obs.z13(), obs.z23()),
    ]
}

/// Δ₀ = ½(|a₁₁−a₁₂| + |a₂₁−a₂₂| + |b₁₁−b₂₁| + |b₁₂−b₂₂|).
pub fn delta0_bell(obs: &BellObservables) -> Rational {
    abs_diff_sum(bell_connection_singles(obs)) * half()
}

/// Δ_CHSH = ½·s_odd(ab₁₁, ab₁₂, ab₂₁, ab₂₂) − 1.
pub fn delta_chsh(obs: &BellObservables) -> Rational {
    s_odd(&obs.products()) * half() - Rational::one()
}

pub fn delta_min_bell(obs: &BellObservables) -> Rational {
    delta0_bell(obs).max(delta_chsh(obs))
}

/// Bracket `[lower, upper]` on the connection cost Δ over all
/// couplings: lower = max(Δ₀, Δ_CHSH), upper =
/// min(4 − (−1 + ½ s_odd(ab)), 4 − ½ Σ|sᵢ + tᵢ|).
pub fn delta_bounds_bell(obs: &BellObservables) -> (Rational, Rational) {
    let four = Rational::from_integer(4);
    let s1 = s_odd(&obs.products());
    let from_products = &four - (&s1 * half() - Rational::one());
    let from_singles = &four - abs_sum_sum(bell_connection_singles(obs)) * half();
    (delta_min_bell(obs), from_products.min(from_singles))
}

/// True iff every defining equality of marginal selectivity holds within `tol`.
pub fn marginal_selectivity_bell(obs: &BellObservables, tol: &Rational) -> bool {
    bell_connection_singles(obs)
        .iter()
        .all(|(x, y)| (*x - *y).abs() <= *tol)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellReport {
    pub delta0: Rational,
    pub delta_chsh: Rational,
    pub delta_min: Rational,
    pub degree: Rational,
    /// |ab₁₁+ab₁₂+ab₂₁−ab₂₂|, |ab₁₁+ab₁₂−ab₂₁+ab₂₂|, |ab₁₁−ab₁₂+ab₂₁+ab₂₂|,
    /// |−ab₁₁+ab₁₂+ab₂₁+ab₂₂|.
    pub chsh_lhs: [Rational; 4],
    /// 2(1 + Δ₀).
    pub bound: Rational,
    pub marginal_selectivity: bool,
    pub delta_lower: Rational,
    pub delta_upper: Rational,
}

impl BellReport {
    pub fn is_contextual(&self) -> bool {
        self.degree.is_positive()
    }
}

pub fn contextuality_degree_bell(obs: &BellObservables) -> BellReport {
    let delta0 = delta0_bell(obs);
    let delta_chsh = delta_chsh(obs);
    let delta_min = delta0.clone().max(delta_chsh.clone());
    let degree = &delta_min - &delta0;
    let [p11, p12, p21, p22] = obs.products();
    let chsh_lhs = [
        (&p11 + &p12 + &p21 - &p22).abs(),
        (&p11 + &p12 - &p21 + &p22).abs(),
        (&p11 - &p12 + &p21 + &p22).abs(),
        (-&p11 + &p12 + &p21 + &p22).abs(),
    ];
    let bound = (Rational::one() + &delta0) * Rational::from_integer(2);
    let (delta_lower, delta_upper) = delta_bounds_bell(obs);
    BellReport {
        marginal_selectivity: delta0.is_zero(),
        delta0,
        delta_chsh,
        delta_min,
        degree,
        chsh_lhs,
        bound,
        delta_lower,
        delta_upper,
    }
}

/// Δ′₀ = ½(|x₁₂−x₁₃| + |y₁₂−y₂₃| + |z₁₃−z₂₃|).
pub fn delta0_lg(obs: &LGObservables) -> Rational {
    abs_diff_sum(lg_connection_singles(obs)) * half()
}

/// Δ′_SZ = −½ + ½·s_odd(xy, xz, yz).
pub fn delta_sz(obs: &LGObservables) -> Rational {
    let s1 = s_odd(&[obs.xy().clone(), obs.xz().clone(), obs.yz().clone()]);
    s1 * half() - half()
}

/// Bracket on Δ′ over all couplings: lower = max(Δ′₀, Δ′_SZ), upper =
/// min(3 − (−½ + ½ s_even(xy, xz, yz)), 3 − ½ Σ|sᵢ + tᵢ|).
pub fn delta_bounds_lg(obs: &LGObservables) -> (Rational, Rational) {
    let three = Rational::from_integer(3);
    let s0 = s_even(&[obs.xy().clone(), obs.xz().clone(), obs.yz().clone()]);
    let from_products = &three - (&s0 * half() - half());
    let from_singles = &three - abs_sum_sum(lg_connection_singles(obs)) * half();
    let lower = delta0_lg(obs).max(delta_sz(obs));
    (lower, from_products.min(from_singles))
}

pub fn marginal_selectivity_lg(obs: &LGObservables, tol: &Rational) -> bool {
    lg_connection_singles(obs)
        .iter()
        .all(|(x, y)| (*x - *y).abs() <= *tol)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LGReport {
    pub delta0: Rational,
    pub delta_sz: Rational,
    pub delta_min: Rational,
    pub degree: Rational,
    /// xy+yz−xz, xy−yz+xz, −xy+yz+xz, −xy−yz−xz.
    pub sz_lhs: [Rational; 4],
    /// 1 + 2Δ′₀.
    pub bound: Rational,
    pub marginal_selectivity: bool,
    pub delta_lower: Rational,
    pub delta_upper: Rational,
    /// `−1 − 2Δ′₀ ≤ xy+yz+xz ≤ 1 + 2Δ′₀ + 2·min(xy, yz, xz)`; always equal
    /// to "every `sz_lhs` entry ≤ bound".
    pub two_sided_holds: bool,
}

impl LGReport {
    pub fn is_contextual(&self) -> bool {
        self.degree.is_positive()
    }
}

/// Two-sided Suppes–Zanotti form with bound slack `2Δ′₀`.
pub fn suppes_zanotti_two_sided(obs: &LGObservables, delta0: &Rational) -> bool {
    let two = Rational::from_integer(2);
    let sum = obs.xy() + obs.yz() + obs.xz();
    let smallest = obs.xy().clone().min(obs.yz().clone()).min(obs.xz().clone());
    let lower = -Rational::one() - &two * delta0;
    let upper = Rational::one() + &two * delta0 + &two * smallest;
    lower <= sum && sum <= upper
}

pub fn delta_min_lg(obs: &LGObservables) -> LGReport {
    let delta0 = delta0_lg(obs);
    let delta_sz = delta_sz(obs);
    let delta_min = delta0.clone().max(delta_sz.clone());
    let degree = &delta_min - &delta0;
    let (xy, xz, yz) = (obs.xy(), obs.xz(), obs.yz());
    let sz_lhs = [
        xy + yz - xz,
        xy - yz + xz,
        -xy + yz + xz,
        -xy - yz - xz,
    ];
    let bound = Rational::one() + &delta0 * Rational::from_integer(2);
    let four_form_holds = sz_lhs.iter().all(|v| *v <= bound);
    let two_sided_holds = suppes_zanotti_two_sided(obs, &delta0);
    assert_eq!(
        four_form_holds, two_sided_holds,
        "two-sided and four-inequality forms disagree"
    );
    let (delta_lower, delta_upper) = delta_bounds_lg(obs);
    LGReport {
        marginal_selectivity: delta0.is_zero(),
        delta0,
        delta_sz,
        delta_min,
        degree,
        sz_lhs,
        bound,
        delta_lower,
        delta_upper,
        two_sided_holds,
    }
}

fn implicit_ok(product: &Rational, s: &Rational, t: &Rational) -> bool {
    validate_context(product, s, t)
}

/// Closed-form compatibility of connection expectations with observed Bell
/// expectations: `s_even(ab) ≤ 6 − s_odd(c)`, `s_odd(ab) ≤ 6 − s_even(c)` with
/// `c = (aa1, bb1, aa2, bb2)`, plus the implicit constraints of the four
/// connection pairs.
pub fn connections_compatible_bell(obs: &BellObservables, conn: &ConnectionExpectations) -> bool {
    let ConnectionExpectations::Bell([aa1, aa2, bb1, bb2]) = conn else {
        return false;
    };
    let six = Rational::from_integer(6);
    let products = obs.products();
    let c = [aa1.clone(), bb1.clone(), aa2.clone(), bb2.clone()];
    let compatible = s_even(&products) <= &six - s_odd(&c) && s_odd(&products) <= &six - s_even(&c);
    let singles = bell_connection_singles(obs);
    compatible
        && [aa1, aa2, bb1, bb2]
            .iter()
            .zip(singles)
            .all(|(p, (s, t))| implicit_ok(p, s, t))
}

/// Closed-form LG compatibility: `s_odd(xy, xz, yz, xx, yy, zz) ≤ 4` plus
/// implicit constraints of the three connection pairs.
pub fn connections_compatible_lg(obs: &LGObservables, conn: &ConnectionExpectations) -> bool {
    let ConnectionExpectations::Lg([xx, yy, zz]) = conn else {
        return false;
    };
    let values = [
        obs.xy().clone(),
        obs.xz().clone(),
        obs.yz().clone(),
        xx.clone(),
        yy.clone(),
        zz.clone(),
    ];
    let singles = lg_connection_singles(obs);
    s_odd(&values) <= Rational::from_integer(4)
        && [xx, yy, zz]
            .iter()
            .zip(singles)
            .all(|(p, (s, t))| implicit_ok(p, s, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn r(s: &str) -> Rational {
        q(s)
    }

    fn bell(products: [&str; 4], a: [&str; 4], b: [&str; 4]) -> BellObservables {
        let m = |v: [&str; 4]| [[r(v[0]), r(v[1])], [r(v[2]), r(v[3])]];
        BellObservables::new(m(products), m(a), m(b)).unwrap()
    }

    fn lg(products: [&str; 3], singles: [&str; 6]) -> LGObservables {
        let s = singles.map(r);
        LGObservables::from_contexts(&[
            [r(products[0]), s[0].clone(), s[2].clone()],
            [r(products[1]), s[1].clone(), s[4].clone()],
            [r(products[2]), s[3].clone(), s[5].clone()],
        ])
        .unwrap()
    }

    const ZERO4: [&str; 4] = ["0", "0", "0", "0"];

    #[test]
    fn s_parity_examples() {
        let ones = [r("1"), r("1"), r("1"), r("1")];
        assert_eq!(s_parity(&ones, Parity::Odd).unwrap(), r("2"));
        assert_eq!(s_parity(&ones, Parity::Even).unwrap(), r("4"));
        let mixed = [r("1"), r("1"), r("1"), r("-1")];
        assert_eq!(s_parity(&mixed, Parity::Odd).unwrap(), r("4"));
        assert!(s_parity(&[], Parity::Odd).is_err());
    }

    #[test]
    fn s_parity_aerts_products_against_enumeration() {
        let v = [r("-.778"), r(".358"), r(".655"), r(".630")];
        let enumerated = s_parity_enumerated(&v, Parity::Odd).unwrap();
        assert_eq!(enumerated, r("2.421"));
        assert_eq!(s_parity(&v, Parity::Odd).unwrap(), enumerated);
    }

    #[test]
    fn delta0_examples() {
        assert_eq!(delta0_bell(&bell(ZERO4, ZERO4, ZERO4)), r("0"));
        let o = bell(ZERO4, ["1", "-1", "0", "0"], ZERO4);
        assert_eq!(delta0_bell(&o), r("1"));
    }

    #[test]
    fn delta_chsh_examples() {
        let pr = bell(["1", "1", "1", "-1"], ZERO4, ZERO4);
        assert_eq!(delta_chsh(&pr), r("1"));
        assert_eq!(delta_min_bell(&pr), r("1"));
        let zero = bell(ZERO4, ZERO4, ZERO4);
        assert_eq!(delta_chsh(&zero), r("-1"));
        assert_eq!(delta_min_bell(&zero), r("0"));
    }

    #[test]
    fn tsirelson_products() {
        for rv in ["1/3", "7/10", "0.7071067811865475"] {
            let neg = format!("-{rv}");
            let o = bell([rv, rv, rv, &neg], ZERO4, ZERO4);
            assert_eq!(delta_chsh(&o), r(rv) * r("2") - r("1"));
        }
        let x = Rational::from_f64(0.7071067811865475).unwrap();
        let m = [[x.clone(), x.clone()], [x.clone(), -&x]];
        let z = || [[r("0"), r("0")], [r("0"), r("0")]];
        let o = BellObservables::new(m, z(), z()).unwrap();
        let report = contextuality_degree_bell(&o);
        assert!((report.delta_min.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(report.degree, report.delta_min);
    }

    #[test]
    fn marginal_selectivity_tolerance() {
        let o = bell(ZERO4, ["1/3", "1/3", "-1/5", "-1/5"], ["0", "1/7", "0", "1/7"]);
        assert!(marginal_selectivity_bell(&o, &r("0")));
        let o = bell(ZERO4, ["0", "1e-12", "0", "0"], ZERO4);
        assert!(!marginal_selectivity_bell(&o, &r("0")));
        assert!(marginal_selectivity_bell(&o, &r("1e-9")));
    }

    #[test]
    fn degree_matches_chsh_excess_form() {
        let o = bell(["9/10", "9/10", "9/10", "-9/10"], ["1/10", "0", "0", "0"], ZERO4);
        let rep = contextuality_degree_bell(&o);
        let max_lhs = rep.chsh_lhs.iter().max().unwrap().clone();
        let excess = (max_lhs - &rep.bound).max(r("0")) * r("1/2");
        assert_eq!(rep.degree, excess);
        assert_eq!(rep.delta0, r("1/20"));
        assert_eq!(rep.degree, r("3/4"));
    }

    #[test]
    fn lg_examples() {
        let det = lg(["1", "1", "1"], ["1", "1", "1", "1", "1", "1"]);
        let rep = delta_min_lg(&det);
        assert_eq!(rep.delta_min, r("0"));
        let frustrated = lg(["-1", "-1", "-1"], ["0"; 6]);
        assert_eq!(delta_sz(&frustrated), r("1"));
        let rep = delta_min_lg(&frustrated);
        assert_eq!((rep.delta_min, rep.degree), (r("1"), r("1")));
        assert_eq!(delta_sz(&lg(["0", "0", "0"], ["0"; 6])), r("-1/2"));
        let signaling = lg(["0", "0", "0"], ["1", "0", "0", "0", "0", "0"]);
        assert_eq!(delta0_lg(&signaling), r("1/2"));
    }

    #[test]
    fn two_sided_form_uses_the_smallest_product() {
        // X=Y, Y=Z, X=-Z is impossible; the four-inequality form rejects it.
        let o = lg(["1", "-1", "1"], ["0"; 6]);
        let rep = delta_min_lg(&o);
        assert!(!rep.two_sided_holds);
        assert!(rep.is_contextual());
    }

    #[test]
    fn closed_form_compatibility_simple_cases() {
        let zero = bell(ZERO4, ZERO4, ZERO4);
        let identity = ConnectionExpectations::bell([r("1"), r("1"), r("1"), r("1")]).unwrap();
        assert!(connections_compatible_bell(&zero, &identity));
        let pr = bell(["1", "1", "1", "-1"], ZERO4, ZERO4);
        assert!(!connections_compatible_bell(&pr, &identity));
        let lg_zero = lg(["0", "0", "0"], ["0"; 6]);
        let lg_id = ConnectionExpectations::lg([r("1"), r("1"), r("1")]).unwrap();
        assert!(connections_compatible_lg(&lg_zero, &lg_id));
        let frustrated = lg(["-1", "-1", "-1"], ["0"; 6]);
        assert!(!connections_compatible_lg(&frustrated, &lg_id));
        assert!(!connections_compatible_lg(&frustrated, &identity));
    }

    mod props {
        use super::*;
        use crate::model::ContextTable;
        use proptest::prelude::*;

        fn table(w: [u32; 4]) -> ContextTable {
            let total: i64 = w.iter().map(|&x| x as i64).sum::<i64>().max(1);
            let cell = |x: u32| Rational::new(x as i64, total);
            if w.iter().all(|&x| x == 0) {
                return ContextTable::new(r("1/4"), r("1/4"), r("1/4"), r("1/4")).unwrap();
            }
            ContextTable::new(cell(w[0]), cell(w[1]), cell(w[2]), cell(w[3])).unwrap()
        }

        fn bell_obs() -> impl Strategy<Value = BellObservables> {
            proptest::array::uniform4(proptest::array::uniform4(0u32..50)).prop_map(|ws| {
                BellObservables::from_tables(&ws.map(table)).unwrap()
            })
        }

        fn lg_obs() -> impl Strategy<Value = LGObservables> {
            proptest::array::uniform3(proptest::array::uniform4(0u32..50))
                .prop_map(|ws| LGObservables::from_tables(&ws.map(table)).unwrap())
        }

        fn rebuild(p: [[Rational; 2]; 2], a: [[Rational; 2]; 2], b: [[Rational; 2]; 2]) -> BellObservables {
            BellObservables::new(p, a, b).unwrap()
        }

        fn parts(o: &BellObservables) -> [[[Rational; 2]; 2]; 3] {
            let g = |f: &dyn Fn(usize, usize) -> Rational| {
                [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
            };
            [
                g(&|i, j| o.ab(i, j).clone()),
                g(&|i, j| o.a(i, j).clone()),
                g(&|i, j| o.b(i, j).clone()),
            ]
        }

        fn measures(o: &BellObservables) -> (Rational, Rational, Rational, Rational) {
            let rep = contextuality_degree_bell(o);
            (rep.delta0, rep.delta_chsh, rep.delta_min, rep.degree)
        }

        proptest! {
            #[test]
            fn closed_form_parity_matches_enumeration(
                v in proptest::collection::vec(-20i64..=20, 1..7),
                odd in any::<bool>(),
            ) {
                let v: Vec<Rational> = v.into_iter().map(|x| Rational::new(x, 7)).collect();
                let parity = if odd { Parity::Odd } else { Parity::Even };
                prop_assert_eq!(s_parity(&v, parity).unwrap(), s_parity_enumerated(&v, parity).unwrap());
            }

            #[test]
            fn bell_report_invariants(o in bell_obs()) {
                let rep = contextuality_degree_bell(&o);
                prop_assert!(!rep.delta0.is_negative());
                prop_assert!(rep.delta_min >= rep.delta0);
                prop_assert!(!rep.degree.is_negative());
                prop_assert!(rep.delta_lower <= rep.delta_upper);
                if rep.delta0 >= Rational::one() {
                    prop_assert!(rep.degree.is_zero());
                }
                let max_lhs = rep.chsh_lhs.iter().max().unwrap().clone();
                let excess = (max_lhs - &rep.bound).max(Rational::zero()) * half();
                prop_assert_eq!(&rep.degree, &excess);
            }

            #[test]
            fn bell_recoding_invariance(o in bell_obs(), which in 0usize..4) {
                let [mut p, mut a, mut b] = parts(&o);
                // Flip the coding of A_i (which < 2) or B_j.
                let k = which % 2;
                if which < 2 {
                    for j in 0..2 {
                        a[k][j] = -&a[k][j];
                        p[k][j] = -&p[k][j];
                    }
                } else {
                    for i in 0..2 {
                        b[i][k] = -&b[i][k];
                        p[i][k] = -&p[i][k];
                    }
                }
                prop_assert_eq!(measures(&o), measures(&rebuild(p, a, b)));
            }

            #[test]
            fn bell_relabeling_invariance(o in bell_obs(), swap_alpha in any::<bool>()) {
                let [p, a, b] = parts(&o);
                let swapped = if swap_alpha {
                    rebuild(
                        [p[1].clone(), p[0].clone()],
                        [a[1].clone(), a[0].clone()],
                        [b[1].clone(), b[0].clone()],
                    )
                } else {
                    let sw = |m: &[[Rational; 2]; 2]| {
                        [[m[0][1].clone(), m[0][0].clone()], [m[1][1].clone(), m[1][0].clone()]]
                    };
                    rebuild(sw(&p), sw(&a), sw(&b))
                };
                prop_assert_eq!(measures(&o), measures(&swapped));
            }

            #[test]
            fn fine_theorem_under_marginal_selectivity(
                p in proptest::array::uniform4(-10i64..=10),
            ) {
                let m = |v: [i64; 4]| {
                    [[Rational::new(v[0], 10), Rational::new(v[1], 10)],
                     [Rational::new(v[2], 10), Rational::new(v[3], 10)]]
                };
                let o = rebuild(m(p), m([0; 4]), m([0; 4]));
                let rep = contextuality_degree_bell(&o);
                let chsh_ok = rep.chsh_lhs.iter().all(|v| *v <= Rational::from_integer(2));
                prop_assert_eq!(rep.degree.is_zero(), chsh_ok);
            }

            #[test]
            fn lg_report_invariants(o in lg_obs()) {
                let rep = delta_min_lg(&o);
                prop_assert!(rep.delta_min >= rep.delta0);
                prop_assert!(!rep.degree.is_negative());
                prop_assert!(rep.delta_lower <= rep.delta_upper);
                let max_lhs = rep.sz_lhs.iter().max().unwrap().clone();
                let excess = (max_lhs - &rep.bound).max(Rational::zero()) * half();
                prop_assert_eq!(&rep.degree, &excess);
            }

            #[test]
            fn lg_recoding_invariance(o in lg_obs(), var in 0usize..3) {
                // Flip X, Y or Z in both of its contexts.
                let neg = |x: &Rational| -x;
                let id = |x: &Rational| x.clone();
                let (fx, fy, fz): (&dyn Fn(&Rational) -> Rational, &dyn Fn(&Rational) -> Rational, &dyn Fn(&Rational) -> Rational) = match var {
                    0 => (&neg, &id, &id),
                    1 => (&id, &neg, &id),
                    _ => (&id, &id, &neg),
                };
                let flipped = LGObservables::from_contexts(&[
                    [fx(&fy(o.xy())), fx(o.x12()), fy(o.y12())],
                    [fx(&fz(o.xz())), fx(o.x13()), fz(o.z13())],
                    [fy(&fz(o.yz())), fy(o.y23()), fz(o.z23())],
                ]).unwrap();
                let a = delta_min_lg(&o);
                let b = delta_min_lg(&flipped);
                prop_assert_eq!((a.delta0, a.delta_sz, a.delta_min, a.degree), (b.delta0, b.delta_sz, b.delta_min, b.degree));
            }
        }
    }
}
