//! Exhaustive checks of the index inequality, its equality cases, the
//! Malle invariants and the oracle identities over ranges of `d` and `A`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::group::{
    abelian_counting_constants, conjugacy_classes_product, malle_invariants_product, AbelianGroup,
};
use crate::index::{
    beta, default_epsilon, delta, delta_closed_form, equality_cases, hypothesis_b_margin,
    index_compare, tail_series, ExponentMap, TailParams, DEFAULT_TAIL_FLOOR,
};
use crate::perm::{pair_index, partitions, product_embed, CycleType};
use crate::splitting::{disc_valuation_pair, local_splittings, remark_formula};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status}\t{}\t{} checks", self.name, self.checked)?;
        if let Some(first) = self.failures.first() {
            write!(f, "\t{} failures, first: {first}", self.failures.len())?;
        }
        Ok(())
    }
}

/// Every abelian group with `lo <= |A| <= hi`.
pub fn groups_in_range(lo: u64, hi: u64) -> Vec<AbelianGroup> {
    (lo..=hi).flat_map(AbelianGroup::all_of_order).collect()
}

/// `pair_index` against the explicit product permutation, `delta` against
/// the closed form, and the remark formula against `ind(g, h)` for every
/// Frobenius compatible with `(g, h)`.
pub fn oracle_suite(dmax: usize, amax: u64) -> SuiteReport {
    let cases: Vec<(usize, AbelianGroup)> = (1..=dmax)
        .flat_map(|d| groups_in_range(1, amax).into_iter().map(move |a| (d, a)))
        .collect();
    let parts: Vec<SuiteReport> = cases
        .par_iter()
        .map(|(d, group)| {
            let d = *d;
            let mut report = SuiteReport::new("oracle");
            let order = group.order() as usize;
            for g in partitions(d) {
                for h in group.elements() {
                    let h_type = h.regular_cycle_type();
                    let label = || format!("d={d} A={group} g={g} h={h}");
                    let embedded = product_embed(&g.representative(), &h.regular_permutation());
                    let pi = pair_index(&g, &h_type);
                    report.check(embedded.cycle_type().ind() == pi, || format!("pair_index {}", label()));
                    let dl = delta(d, group, &g, &h).expect("valid input") as i64;
                    report.check(dl == delta_closed_form(&g, &h_type, d, order), || {
                        format!("closed form {}", label())
                    });
                    let v = disc_valuation_pair(&g, &h, d, group).expect("valid input");
                    for s in local_splittings(&g, &h, d, group).expect("valid input") {
                        report.check(remark_formula(&s.f, &s.k) == v, || {
                            format!("remark formula {} F={} K={}", label(), s.f, s.k)
                        });
                        report.check(s.fk.disc_valuation() == v, || {
                            format!("FK pattern {} {}", label(), s.fk)
                        });
                    }
                }
            }
            report
        })
        .collect();
    let mut report = SuiteReport::new("oracle: pair index, closed form, remark formula");
    for p in parts {
        report.absorb(p);
    }
    report
}

/// `ind(g, e) = |A| ind(g) <= ind(g, h)` with equality exactly when
/// `ord(h)` divides every cycle length, and a deficit of at least `1/|A|`
/// otherwise.
pub fn index_inequality_suite(dmax: usize, amax: u64) -> SuiteReport {
    let mut report = SuiteReport::new("index inequality and equality criterion");
    for d in 1..=dmax {
        for group in groups_in_range(1, amax) {
            let order = group.order();
            for class in conjugacy_classes_product(d, &group, false) {
                let (g, h) = (&class.sd_part, &class.a_part);
                let c = index_compare(g, h);
                let label = || format!("d={d} A={group} g={g} h={h}");
                let identity = pair_index(g, &group.identity().regular_cycle_type());
                report.check(identity == order * g.ind(), || format!("ind(g,e) {}", label()));
                report.check(c.lhs <= c.rhs, || format!("inequality {}", label()));
                report.check(c.equality == c.divisibility, || format!("criterion {}", label()));
                if !c.equality {
                    report.check(
                        c.normalized_deficit(order) <= Rational::new(-1, order as i64),
                        || format!("deficit {}", label()),
                    );
                }
            }
        }
    }
    report
}

/// Cycle types of `S_d` (d = 3, 4, 5) that admit an equality case with a
/// nontrivial `h` in a group of order `n`.
pub fn expected_equality_types(d: usize, n: u64) -> Vec<CycleType> {
    let listed: &[(&[u32], u64)] = match d {
        3 => &[(&[3], 3)],
        4 => &[(&[2, 2], 2), (&[4], 2)],
        5 => &[(&[5], 5)],
        _ => &[],
    };
    listed
        .iter()
        .filter(|(_, p)| n.is_multiple_of(*p))
        .map(|(parts, _)| CycleType::new(parts.to_vec()).expect("valid"))
        .collect()
}

pub fn equality_case_groups() -> Vec<AbelianGroup> {
    let mut groups: Vec<AbelianGroup> = (2..=12).map(AbelianGroup::cyclic).collect();
    for label in ["C2xC2", "C2xC4", "C2xC6"] {
        groups.push(label.parse().expect("valid label"));
    }
    groups
}

/// The equality cases for `d = 3, 4, 5` are exactly the listed cycle types,
/// each paired with every `h != e` whose order divides its cycle lengths.
pub fn equality_case_suite(groups: &[AbelianGroup]) -> SuiteReport {
    let mut report = SuiteReport::new("equality cases for d = 3, 4, 5");
    for d in 3..=5 {
        for group in groups {
            let cases = equality_cases(d, group);
            let found: BTreeSet<CycleType> = cases.iter().map(|c| c.sd_part.clone()).collect();
            let expected: BTreeSet<CycleType> = expected_equality_types(d, group.order()).into_iter().collect();
            report.check(found == expected, || {
                format!("d={d} A={group}: found {found:?}, expected {expected:?}")
            });
            for g in &expected {
                let hs: BTreeSet<_> = cases.iter().filter(|c| &c.sd_part == g).map(|c| c.a_part.clone()).collect();
                let want: BTreeSet<_> = group
                    .elements()
                    .into_iter()
                    .filter(|h| !h.is_identity() && g.parts_gcd() % h.order() == 0)
                    .collect();
                report.check(hs == want, || format!("d={d} A={group} g={g}: wrong h set"));
            }
        }
    }
    report
}

/// `b(A)` by testing, for every pair of elements of order `p`, whether some
/// unit multiple maps one to the other.
pub fn brute_force_b(group: &AbelianGroup) -> u64 {
    let order = group.order();
    let p = (2..=order).find(|q| order.is_multiple_of(*q)).expect("nontrivial group");
    let elems: Vec<_> = group.elements().into_iter().filter(|a| a.order() == p).collect();
    let e = group.exponent();
    let units: Vec<u64> = (1..=e).filter(|k| num_integer::gcd(*k, e) == 1).collect();
    let mut reps: Vec<usize> = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        let seen = reps
            .iter()
            .any(|&j| units.iter().any(|&k| a.scale(k) == elems[j]));
        if !seen {
            reps.push(i);
        }
    }
    reps.len() as u64
}

/// `a(S_d x A) = |A|` with `b = 1` attained at (transposition, e), and
/// `a_A = p / (|A| (p - 1))` for the smallest prime `p | |A|`.
pub fn malle_suite(amax: u64) -> SuiteReport {
    let mut report = SuiteReport::new("Malle invariants and abelian constants");
    let transposition = |d: usize| {
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, d - 2));
        CycleType::new(parts).expect("valid")
    };
    for group in groups_in_range(2, amax) {
        let order = group.order();
        for d in 3..=5 {
            let m = malle_invariants_product(d, &group).expect("d >= 3");
            report.check(m.a == order, || format!("a(S{d} x {group}) = {}", m.a));
            report.check(m.exponent == Rational::new(1, order as i64), || {
                format!("exponent for S{d} x {group}")
            });
            report.check(m.b == 1, || format!("b(S{d} x {group}) = {}", m.b));
            let orbit = &m.minimal_orbits[0];
            report.check(
                orbit.len() == 1
                    && orbit[0].sd_part == transposition(d)
                    && orbit[0].a_part.is_identity(),
                || format!("minimal class of S{d} x {group}"),
            );
        }
        let c = abelian_counting_constants(&group).expect("nontrivial");
        let min_ind = group
            .elements()
            .iter()
            .filter(|h| !h.is_identity())
            .map(|h| h.ind())
            .min()
            .expect("nontrivial");
        report.check(c.a_a == Rational::new(1, min_ind as i64), || {
            format!("a_A({group}) = {}, 1/min ind = 1/{min_ind}", c.a_a)
        });
        let p = (2..=order).find(|q| order % q == 0).expect("nontrivial") as i64;
        report.check(c.a_a == Rational::new(p, order as i64 * (p - 1)), || {
            format!("a_A({group}) = {} against p/(|A|(p-1)) with p = {p}", c.a_a)
        });
        report.check(c.b == brute_force_b(&group), || format!("b({group}) brute force"));
        report.check(c.b_a + 1 == c.b, || format!("b_A({group})"));
    }
    let klein: AbelianGroup = "C2xC2".parse().expect("valid");
    let c = abelian_counting_constants(&klein).expect("nontrivial");
    report.check(c.b_a == 2 && brute_force_b(&klein) == 3, || "b_A(C2xC2) != 2".into());
    report
}

/// `beta < 0` for the uniformity presets, and agreement of `beta` with the
/// largest per-class margin.
pub fn beta_suite(amax: u64, epsilon: Rational) -> SuiteReport {
    let mut report = SuiteReport::new("beta negativity under the presets");
    for d in 3..=5 {
        let r = ExponentMap::sieve_preset(d, epsilon).expect("preset exists");
        for group in groups_in_range(2, amax) {
            let params = TailParams {
                d,
                group: group.clone(),
                r: r.clone(),
                epsilon,
                y: 1024.0,
            };
            let b = beta(&params).expect("exponents cover every class");
            report.check(b.beta < Rational::from_integer(0), || {
                format!("beta(S{d} x {group}) = {}", b.beta)
            });
            for t in &b.terms {
                report.check(t.value == t.middle, || format!("middle expression at {}", t.class));
            }
            let margins = hypothesis_b_margin(d, &group, &r).expect("exponents cover every class");
            for (g, m) in &margins {
                let best = b
                    .terms
                    .iter()
                    .filter(|t| &t.class.sd_part == g)
                    .map(|t| t.value)
                    .max()
                    .expect("every class has a term");
                report.check(best == *m, || format!("margin of {g} in S{d} x {group}"));
            }
            let top = margins.values().max().copied().expect("nonempty");
            report.check(top == b.beta, || format!("max margin vs beta for S{d} x {group}"));
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailCheck {
    pub m: u32,
    pub s: Rational,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl TailCheck {
    pub fn constant(&self) -> f64 {
        self.ratios.iter().cloned().fold(f64::MIN, f64::max)
    }

    /// `max / min - 1` over the ratios.
    pub fn drift(&self) -> f64 {
        let min = self.ratios.iter().cloned().fold(f64::MAX, f64::min);
        self.constant() / min - 1.0
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0])
    }

    pub fn bounded_by_constant(&self) -> bool {
        let k = self.constant();
        self.ratios.iter().all(|r| r.is_finite() && *r <= k)
    }
}

pub fn tail_check(m: u32, s: Rational, ys: &[f64]) -> TailCheck {
    let series: Vec<_> = ys
        .iter()
        .map(|&y| tail_series(s, Rational::from_integer(0), m, y, DEFAULT_TAIL_FLOOR).expect("s < 0"))
        .collect();
    TailCheck {
        m,
        s,
        ys: ys.to_vec(),
        values: series.iter().map(|t| t.value).collect(),
        ratios: series.iter().map(|t| t.ratio()).collect(),
    }
}

/// Runs the exhaustive suites over `d <= dmax`, `|A| <= amax`.
pub fn verify_all(dmax: usize, amax: u64) -> Vec<SuiteReport> {
    vec![
        oracle_suite(dmax, amax),
        index_inequality_suite(dmax, amax),
        equality_case_suite(&equality_case_groups()),
        malle_suite(amax),
        beta_suite(amax, default_epsilon()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges_pass() {
        for report in verify_all(3, 4) {
            assert!(report.passed(), "{report}");
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn brute_force_b_values() {
        assert_eq!(brute_force_b(&"C2xC2".parse().unwrap()), 3);
        assert_eq!(brute_force_b(&"C5".parse().unwrap()), 1);
        assert_eq!(brute_force_b(&"C3xC3".parse().unwrap()), 4);
    }

    #[test]
    fn expected_types() {
        assert!(expected_equality_types(3, 4).is_empty());
        assert_eq!(expected_equality_types(4, 6).len(), 2);
        assert_eq!(equality_case_groups().len(), 14);
    }

    #[test]
    fn report_display() {
        let mut r = SuiteReport::new("x");
        r.check(true, String::new);
        assert_eq!(r.to_string(), "PASS\tx\t1 checks");
        r.check(false, || "bad".into());
        assert!(r.to_string().starts_with("FAIL\tx\t2 checks\t1 failures, first: bad"));
    }
}
