//! Discriminant discrepancy `Delta(g, h)`, the index inequality and its
//! equality cases, and the exponent bookkeeping behind the dyadic tail
//! estimate. All exponent arithmetic is exact.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes_product, AbelianElement, AbelianGroup, ProductClass};
use crate::perm::{pair_cycle_count, pair_index, partitions, CycleType};
use crate::Rational;

/// Default `epsilon` for the verification presets.
pub fn default_epsilon() -> Rational {
    Rational::new(1, 1000)
}

/// Default relative truncation floor of [`tail_series`].
pub const DEFAULT_TAIL_FLOOR: f64 = 1e-15;

fn check_degree(g: &CycleType, d: usize) -> Result<()> {
    if g.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d as u64,
            found: g.degree() as u64,
        });
    }
    Ok(())
}

fn check_member(h: &AbelianElement, group: &AbelianGroup) -> Result<()> {
    if h.group() != group {
        return Err(Error::ForeignElement(format!("{h} is not an element of {group}")));
    }
    Ok(())
}

/// `|A| ind(g) + d ind(h) - ind(g, h)` with `h` acting regularly.
pub fn delta(d: usize, group: &AbelianGroup, g: &CycleType, h: &AbelianElement) -> Result<u64> {
    check_degree(g, d)?;
    check_member(h, group)?;
    Ok(delta_cycle_types(g, &h.regular_cycle_type()))
}

/// `n ind(g) + m ind(h) - ind(g, h)` for `g` of degree `m`, `h` of degree `n`.
pub fn delta_cycle_types(g: &CycleType, h: &CycleType) -> u64 {
    let m = g.degree() as u64;
    let n = h.degree() as u64;
    n * g.ind() + m * h.ind() - pair_index(g, h)
}

/// The closed form
/// `n sum_i (|c_i| - 1) + m sum_j (|d_j| - 1) - (mn - sum_{i,j} gcd(|c_i|, |d_j|))`,
/// evaluated term by term.
pub fn delta_closed_form(g: &CycleType, h: &CycleType, m: usize, n: usize) -> i64 {
    assert_eq!(g.degree(), m, "g must have degree m");
    assert_eq!(h.degree(), n, "h must have degree n");
    let sum_g: i64 = g.parts().iter().map(|&c| c as i64 - 1).sum();
    let sum_h: i64 = h.parts().iter().map(|&c| c as i64 - 1).sum();
    let cycles = pair_cycle_count(g, h) as i64;
    let (m, n) = (m as i64, n as i64);
    n * sum_g + m * sum_h - (m * n - cycles)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexComparison {
    /// `ind(g, e) = |A| ind(g)`.
    pub lhs: u64,
    /// `ind(g, h)`.
    pub rhs: u64,
    pub equality: bool,
    /// `ord(h) | gcd_i |c_i|`.
    pub divisibility: bool,
}

impl IndexComparison {
    /// `ind(g) - ind(g, h) / |A|`, which is `<= 0`.
    pub fn normalized_deficit(&self, order: u64) -> Rational {
        Rational::new(self.lhs as i64 - self.rhs as i64, order as i64)
    }
}

pub fn index_compare(g: &CycleType, h: &AbelianElement) -> IndexComparison {
    let order = h.group().order();
    let lhs = order * g.ind();
    let rhs = pair_index(g, &h.regular_cycle_type());
    IndexComparison {
        lhs,
        rhs,
        equality: lhs == rhs,
        divisibility: g.parts_gcd().is_multiple_of(h.order()),
    }
}

/// Nontrivial `(g, h)` with `h != e` and `ind(g, h) = |A| ind(g)`.
pub fn equality_cases(d: usize, group: &AbelianGroup) -> Vec<ProductClass> {
    conjugacy_classes_product(d, group, true)
        .into_iter()
        .filter(|c| !c.a_part.is_identity())
        .filter(|c| index_compare(&c.sd_part, &c.a_part).equality)
        .collect()
}

/// `theta = Delta(g, h) / d - ind(h)`.
pub fn theta(class: &ProductClass, d: usize, group: &AbelianGroup) -> Result<Rational> {
    let delta = delta(d, group, &class.sd_part, &class.a_part)?;
    Ok(Rational::new(delta as i64, d as i64) - Rational::from_integer(class.a_part.ind() as i64))
}

/// Exponents `r_g` attached to the nontrivial classes of `S_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMap {
    d: usize,
    values: BTreeMap<CycleType, Rational>,
}

impl ExponentMap {
    pub fn new(d: usize) -> Self {
        ExponentMap {
            d,
            values: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn set(&mut self, class: CycleType, r: Rational) -> Result<()> {
        check_degree(&class, self.d)?;
        if class.is_identity() {
            return Err(Error::InvalidArgument(
                "exponents are attached to nontrivial classes only".into(),
            ));
        }
        self.values.insert(class, r);
        Ok(())
    }

    pub fn get(&self, class: &CycleType) -> Result<Rational> {
        self.values
            .get(class)
            .copied()
            .ok_or_else(|| Error::MissingExponent(class.to_string()))
    }

    /// The same `r` for every nontrivial class.
    pub fn constant(d: usize, r: Rational) -> Self {
        let mut map = ExponentMap::new(d);
        for g in partitions(d).into_iter().filter(|g| !g.is_identity()) {
            map.values.insert(g, r);
        }
        map
    }

    /// Exponents from the averaged uniformity bounds for `d = 3, 4, 5`: the
    /// first class set gets `epsilon`, the second `-1 + epsilon` (d = 3, 4)
    /// or `-1/20 + epsilon` (d = 5).
    pub fn sieve_preset(d: usize, epsilon: Rational) -> Result<Self> {
        let first: &[&[u32]] = match d {
            3 => &[&[2, 1]],
            4 => &[&[2, 1, 1], &[3, 1]],
            5 => &[&[2, 1, 1, 1]],
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "no uniformity preset for d = {d} (only 3, 4, 5)"
                )))
            }
        };
        let second = if d == 5 {
            Rational::new(-1, 20)
        } else {
            Rational::from_integer(-1)
        } + epsilon;
        let mut map = ExponentMap::new(d);
        for g in partitions(d).into_iter().filter(|g| !g.is_identity()) {
            let r = if first.iter().any(|p| *p == g.parts()) {
                epsilon
            } else {
                second
            };
            map.values.insert(g, r);
        }
        Ok(map)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CycleType, &Rational)> {
        self.values.iter()
    }
}

#[derive(Clone, Debug)]
pub struct TailParams {
    pub d: usize,
    pub group: AbelianGroup,
    pub r: ExponentMap,
    pub epsilon: Rational,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaTerm {
    pub class: ProductClass,
    pub theta: Rational,
    pub r: Rational,
    /// `(d/|A|) theta + r`.
    pub value: Rational,
    /// `Delta/|A| - d ind(h)/|A| + r`.
    pub middle: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaReport {
    pub beta: Rational,
    pub argmax: ProductClass,
    pub terms: Vec<BetaTerm>,
}

/// Classes where both components are nontrivial: the only ones a prime
/// ramified in both `F` and `K` can produce.
pub fn doubly_ramified_classes(d: usize, group: &AbelianGroup) -> Vec<ProductClass> {
    conjugacy_classes_product(d, group, true)
        .into_iter()
        .filter(|c| !c.sd_part.is_identity() && !c.a_part.is_identity())
        .collect()
}

/// `beta = max_k (d/|A|) theta_k + r_{g_k}` over the doubly ramified classes.
pub fn beta(params: &TailParams) -> Result<BetaReport> {
    let d = params.d;
    let group = &params.group;
    if params.r.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d as u64,
            found: params.r.degree() as u64,
        });
    }
    let order = group.order() as i64;
    let classes = doubly_ramified_classes(d, group);
    if classes.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "S_{d} x {group} has no class ramified in both factors"
        )));
    }
    let mut terms = Vec::with_capacity(classes.len());
    for class in classes {
        let r = params.r.get(&class.sd_part)?;
        let theta = theta(&class, d, group)?;
        let value = Rational::new(d as i64, order) * theta + r;
        let delta = delta(d, group, &class.sd_part, &class.a_part)? as i64;
        let middle = Rational::new(delta, order)
            - Rational::new(d as i64 * class.a_part.ind() as i64, order)
            + r;
        terms.push(BetaTerm {
            class,
            theta,
            r,
            value,
            middle,
        });
    }
    let best = terms
        .iter()
        .max_by(|a, b| a.value.cmp(&b.value))
        .expect("at least one class");
    Ok(BetaReport {
        beta: best.value,
        argmax: best.class.clone(),
        terms: terms.clone(),
    })
}

/// For each nontrivial class `g` of `S_d`, the largest
/// `r_g + ind(g) - ind(g, h)/|A|` over nontrivial `h`. Empty for trivial `A`.
pub fn hypothesis_b_margin(
    d: usize,
    group: &AbelianGroup,
    r: &ExponentMap,
) -> Result<BTreeMap<CycleType, Rational>> {
    let order = group.order() as i64;
    let nontrivial: Vec<AbelianElement> =
        group.elements().into_iter().filter(|h| !h.is_identity()).collect();
    let mut out = BTreeMap::new();
    if nontrivial.is_empty() {
        return Ok(out);
    }
    for g in partitions(d).into_iter().filter(|g| !g.is_identity()) {
        let rg = r.get(&g)?;
        let base = Rational::from_integer(g.ind() as i64);
        let margin = nontrivial
            .iter()
            .map(|h| rg + base - Rational::new(pair_index(&g, &h.regular_cycle_type()) as i64, order))
            .max()
            .expect("nonempty");
        out.insert(g, margin);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailSeries {
    /// `sum_{r >= r0} C(r + m - 1, m - 1) 2^{(beta + eps) r}`.
    pub value: f64,
    /// `(log Y)^{m-1} Y^{beta + eps}`.
    pub comparator: f64,
    pub start: u64,
    pub terms: usize,
}

impl TailSeries {
    pub fn ratio(&self) -> f64 {
        self.value / self.comparator
    }
}

/// Dyadic tail `sum_{r >= ceil(log2 Y - m)} C(r+m-1, m-1) 2^{s r}` with
/// `s = beta + epsilon`, summed until a term falls below `floor` times the
/// running sum past the peak of the summand.
pub fn tail_series(beta: Rational, epsilon: Rational, m: u32, y: f64, floor: f64) -> Result<TailSeries> {
    let s = beta + epsilon;
    if s >= Rational::from_integer(0) {
        return Err(Error::Divergent(s.to_string()));
    }
    if y.is_nan() || y <= 1.0 {
        return Err(Error::InvalidArgument(format!("tail cutoff Y must exceed 1, got {y}")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let s_f = *s.numer() as f64 / *s.denom() as f64;
    let start = (y.log2() - m as f64).ceil().max(0.0) as u64;
    let ratio = 2f64.powf(s_f);
    let mut coeff = 1.0f64;
    for k in 1..m as u64 {
        coeff *= (start + k) as f64 / k as f64;
    }
    let mut term = coeff * ratio.powf(start as f64);
    let mut sum = 0.0f64;
    let mut r = start;
    let mut count = 0usize;
    loop {
        sum += term;
        count += 1;
        let next = term * (r + m as u64) as f64 / (r + 1) as f64 * ratio;
        let past_peak = next <= term;
        if past_peak && next < floor * sum {
            break;
        }
        term = next;
        r += 1;
    }
    let comparator = y.ln().powi(m as i32 - 1) * y.powf(s_f);
    Ok(TailSeries {
        value: sum,
        comparator,
        start,
        terms: count,
    })
}

impl fmt::Display for BetaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.class, self.theta, self.r, self.value)
    }
}
