//! Finite abelian groups in invariant-factor form, their regular
//! representation, and Malle's invariants for `S_d x A`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::arith::{factorize, lcm_up_to, smallest_prime_factor, units_mod};
use crate::error::{Error, Result};
use crate::perm::{pair_index, partitions, CycleType, Permutation};
use crate::Rational;

/// `C_{d_1} x ... x C_{d_r}` with `d_1 | d_2 | ... | d_r`, every `d_i >= 2`.
/// The empty chain is the trivial group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_factors(&[n]).expect("positive order")
    }

    /// Normalises an arbitrary product of cyclic groups to invariant factors.
    pub fn from_cyclic_factors(orders: &[u64]) -> Result<Self> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in orders {
            if n == 0 {
                return Err(Error::InvalidGroupLabel {
                    label: format!("{orders:?}"),
                    reason: "cyclic factor of order 0".into(),
                });
            }
            for (p, k) in factorize(n) {
                by_prime.entry(p).or_default().push(k);
            }
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (p, mut ks) in by_prime {
            ks.sort_unstable_by(|a, b| b.cmp(a));
            // largest prime powers go to the last invariant factor
            for (slot, k) in ks.into_iter().enumerate() {
                factors[rank - 1 - slot] *= p.pow(k);
            }
        }
        Ok(AbelianGroup { factors })
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn identity(&self) -> AbelianElement {
        AbelianElement {
            group: self.clone(),
            residues: vec![0; self.factors.len()],
        }
    }

    pub fn element(&self, residues: &[u64]) -> Result<AbelianElement> {
        if residues.len() != self.factors.len() {
            return Err(Error::ForeignElement(format!(
                "{residues:?} has {} components, {self} needs {}",
                residues.len(),
                self.factors.len()
            )));
        }
        Ok(AbelianElement {
            group: self.clone(),
            residues: residues
                .iter()
                .zip(&self.factors)
                .map(|(a, d)| a % d)
                .collect(),
        })
    }

    /// Generator of the last cyclic factor; for cyclic groups a generator.
    pub fn standard_generator(&self) -> AbelianElement {
        let mut e = self.identity();
        if let Some(last) = e.residues.last_mut() {
            *last = 1;
        }
        e
    }

    /// Elements in mixed-radix order (last component fastest).
    pub fn elements(&self) -> Vec<AbelianElement> {
        let n = self.order() as usize;
        (0..n).map(|i| self.element_at(i)).collect()
    }

    pub fn element_at(&self, mut index: usize) -> AbelianElement {
        let mut residues = vec![0u64; self.factors.len()];
        for (slot, &d) in self.factors.iter().enumerate().rev() {
            residues[slot] = (index as u64) % d;
            index /= d as usize;
        }
        AbelianElement {
            group: self.clone(),
            residues,
        }
    }

    pub fn index_of(&self, a: &AbelianElement) -> usize {
        a.residues
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&r, &d)| acc * d as usize + r as usize)
    }

    /// Every isomorphism class of abelian group of order `n`.
    pub fn all_of_order(n: u64) -> Vec<AbelianGroup> {
        if n == 1 {
            return vec![AbelianGroup::trivial()];
        }
        let mut groups: Vec<Vec<u64>> = vec![vec![]];
        for (p, k) in factorize(n) {
            let mut next = Vec::new();
            for part in partitions(k as usize) {
                for g in &groups {
                    let mut orders = g.clone();
                    orders.extend(part.parts().iter().map(|&e| p.pow(e)));
                    next.push(orders);
                }
            }
            groups = next;
        }
        let mut out: Vec<AbelianGroup> = groups
            .iter()
            .map(|orders| AbelianGroup::from_cyclic_factors(orders).expect("positive"))
            .collect();
        out.sort();
        out
    }

    /// All abelian groups of order `1..=max_order` (trivial group included).
    pub fn all_up_to(max_order: u64) -> Vec<AbelianGroup> {
        (1..=max_order).flat_map(AbelianGroup::all_of_order).collect()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        let labels: Vec<String> = self.factors.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", labels.join("x"))
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// `"C" INT ("x" "C" INT)*`; `C1` and `1` denote the trivial group.
    fn from_str(label: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidGroupLabel {
            label: label.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = label.trim();
        if trimmed == "1" {
            return Ok(AbelianGroup::trivial());
        }
        let mut orders = Vec::new();
        for piece in trimmed.split(['x', 'X', '*']) {
            let digits = piece
                .trim()
                .strip_prefix('C')
                .ok_or_else(|| bad("expected factors of the form C<n>"))?;
            let n: u64 = digits.parse().map_err(|_| bad("factor order is not an integer"))?;
            if n == 0 {
                return Err(bad("factor order must be positive"));
            }
            orders.push(n);
        }
        AbelianGroup::from_cyclic_factors(&orders)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElement {
    group: AbelianGroup,
    residues: Vec<u64>,
}

impl AbelianElement {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn is_identity(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    /// `lcm_i d_i / gcd(a_i, d_i)`.
    pub fn order(&self) -> u64 {
        self.residues
            .iter()
            .zip(self.group.invariant_factors())
            .fold(1u64, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    pub fn add(&self, other: &AbelianElement) -> AbelianElement {
        assert_eq!(self.group, other.group, "adding elements of different groups");
        AbelianElement {
            group: self.group.clone(),
            residues: self
                .residues
                .iter()
                .zip(&other.residues)
                .zip(self.group.invariant_factors())
                .map(|((a, b), d)| (a + b) % d)
                .collect(),
        }
    }

    /// `k * a` in additive notation.
    pub fn scale(&self, k: u64) -> AbelianElement {
        AbelianElement {
            group: self.group.clone(),
            residues: self
                .residues
                .iter()
                .zip(self.group.invariant_factors())
                .map(|(&a, &d)| ((a as u128 * k as u128) % d as u128) as u64)
                .collect(),
        }
    }

    /// Translation `x -> x + a` on the elements of the group, indexed as in
    /// [`AbelianGroup::elements`].
    pub fn regular_permutation(&self) -> Permutation {
        let images = self
            .group
            .elements()
            .iter()
            .map(|x| self.group.index_of(&x.add(self)) as u32)
            .collect();
        Permutation::from_zero_based_unchecked(images)
    }

    /// `|A| / ord(a)` cycles of length `ord(a)`.
    pub fn regular_cycle_type(&self) -> CycleType {
        let ord = self.order();
        CycleType::uniform(ord as u32, (self.group.order() / ord) as usize)
    }

    /// Index of the regular-representation image.
    pub fn ind(&self) -> u64 {
        self.regular_cycle_type().ind()
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.residues.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", r.join(","))
    }
}

pub fn element_order(a: &AbelianElement) -> u64 {
    a.order()
}

pub fn regular_cycle_type(a: &AbelianElement) -> CycleType {
    a.regular_cycle_type()
}

/// Orbits of `a -> k*a` for `k` coprime to the exponent, each sorted by
/// element index, orbits ordered by their smallest element.
pub fn galois_orbits(group: &AbelianGroup) -> Vec<Vec<AbelianElement>> {
    let units = units_mod(group.exponent());
    let n = group.order() as usize;
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let a = group.element_at(i);
        let mut members: Vec<usize> = units
            .iter()
            .map(|&k| group.index_of(&a.scale(k.max(1))))
            .collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            seen[m] = true;
        }
        orbits.push(members.into_iter().map(|m| group.element_at(m)).collect());
    }
    orbits
}

/// A conjugacy class of `S_d x A`: a cycle type of `S_d` paired with an
/// element of `A` (conjugation is trivial on the abelian factor).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductClass {
    pub sd_part: CycleType,
    pub a_part: AbelianElement,
}

impl ProductClass {
    pub fn new(sd_part: CycleType, a_part: AbelianElement) -> Self {
        ProductClass { sd_part, a_part }
    }

    pub fn is_identity(&self) -> bool {
        self.sd_part.is_identity() && self.a_part.is_identity()
    }

    /// Class of the `k`-th power.
    pub fn power(&self, k: u64) -> ProductClass {
        ProductClass {
            sd_part: self.sd_part.power(k),
            a_part: self.a_part.scale(k),
        }
    }

    /// Index in the product embedding `S_d x A -> S_{d|A|}`.
    pub fn index(&self) -> u64 {
        pair_index(&self.sd_part, &self.a_part.regular_cycle_type())
    }
}

impl fmt::Display for ProductClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {}", self.sd_part, self.a_part)
    }
}

/// Every class of `S_d x A`, S_d-part in [`partitions`] order, A-part in
/// element order.
pub fn conjugacy_classes_product(
    d: usize,
    group: &AbelianGroup,
    nontrivial_only: bool,
) -> Vec<ProductClass> {
    let elements = group.elements();
    let mut out = Vec::new();
    for g in partitions(d) {
        for a in &elements {
            let class = ProductClass::new(g.clone(), a.clone());
            if nontrivial_only && class.is_identity() {
                continue;
            }
            out.push(class);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalleInvariants {
    /// Minimal index over nontrivial elements.
    pub a: u64,
    /// `1 / a`, the exponent of `X` in the predicted count.
    pub exponent: Rational,
    /// Number of cyclotomic orbits of minimal-index classes.
    pub b: u64,
    /// One representative per minimal orbit.
    pub minimal_orbits: Vec<Vec<ProductClass>>,
}

/// Malle's `a` and `b` for `S_d x A` in `S_{d|A|}`.
pub fn malle_invariants_product(d: usize, group: &AbelianGroup) -> Result<MalleInvariants> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "S_d x A requires d >= 3, got {d}"
        )));
    }
    let classes = conjugacy_classes_product(d, group, true);
    let a = classes
        .iter()
        .map(ProductClass::index)
        .min()
        .expect("S_d has nontrivial classes for d >= 2");
    let minimal: Vec<ProductClass> = classes.into_iter().filter(|c| c.index() == a).collect();
    let exponent = lcm_up_to(d as u64).lcm(&group.exponent());
    let orbits = power_orbits(&minimal, exponent);
    Ok(MalleInvariants {
        a,
        exponent: Rational::new(1, a as i64),
        b: orbits.len() as u64,
        minimal_orbits: orbits,
    })
}

/// Partition of a power-stable set of classes into orbits of
/// `g -> g^k`, `k` a unit modulo `exponent`.
fn power_orbits(classes: &[ProductClass], exponent: u64) -> Vec<Vec<ProductClass>> {
    let units = units_mod(exponent);
    let mut remaining: Vec<ProductClass> = classes.to_vec();
    remaining.sort();
    let mut orbits = Vec::new();
    while let Some(first) = remaining.first().cloned() {
        let mut orbit: Vec<ProductClass> = units.iter().map(|&k| first.power(k.max(1))).collect();
        orbit.sort();
        orbit.dedup();
        remaining.retain(|c| !orbit.contains(c));
        orbits.push(orbit);
    }
    orbits
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianConstants {
    /// `(|A| (1 - 1/p))^{-1}` for the smallest prime `p | |A|`.
    pub a_a: Rational,
    /// Malle's `b(A)` for the regular representation.
    pub b: u64,
    /// `b(A) - 1`, the power of `log X` in the abelian count.
    pub b_a: u64,
}

pub fn abelian_counting_constants(group: &AbelianGroup) -> Result<AbelianConstants> {
    let n = group.order();
    let p = smallest_prime_factor(n).ok_or_else(|| {
        Error::InvalidArgument("abelian counting constants need a nontrivial group".into())
    })?;
    let a_a = Rational::new(p as i64, (n * (p - 1)) as i64);
    let min_ind = group
        .elements()
        .iter()
        .filter(|a| !a.is_identity())
        .map(AbelianElement::ind)
        .min()
        .expect("nontrivial group");
    let b = galois_orbits(group)
        .iter()
        .filter(|orbit| !orbit[0].is_identity() && orbit[0].ind() == min_ind)
        .count() as u64;
    Ok(AbelianConstants {
        a_a,
        b,
        b_a: b - 1,
    })
}
