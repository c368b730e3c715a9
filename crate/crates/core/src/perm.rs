//! Permutations, cycle types, and the product embedding `S_m x S_n -> S_{mn}`.
//!
//! Points are 1-based in every public constructor and in `Display`; the
//! image table is stored 0-based.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest `m * n` the exhaustive product-embedding oracles are run on.
pub const DEFAULT_MAX_PRODUCT_DEGREE: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from one-line notation with values in `1..=n`.
    pub fn from_one_line(images: &[u32]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v as usize > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} outside 1..={n}"
                )));
            }
            let i = (v - 1) as usize;
            if seen[i] {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
            seen[i] = true;
            zero_based.push(v - 1);
        }
        Ok(Permutation { images: zero_based })
    }

    /// Builds a permutation of `degree` points from disjoint cycles written
    /// with 1-based points, e.g. `&[&[1, 2], &[3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p as usize > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} outside 1..={degree}"
                    )));
                }
                if touched[(p - 1) as usize] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {p} appears in two cycles"
                    )));
                }
                touched[(p - 1) as usize] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[(p - 1) as usize] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_zero_based_unchecked(images: Vec<u32>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i as u32 == v)
        });
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn zero_based_images(&self) -> &[u32] {
        &self.images
    }

    /// One-line notation with 1-based values.
    pub fn one_line(&self) -> Vec<u32> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composing unequal degrees");
        Permutation {
            images: other.images.iter().map(|&v| self.images[v as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exponent: u64) -> Permutation {
        let mut out = vec![0u32; self.degree()];
        for cycle in self.cycles() {
            let len = cycle.len();
            let shift = (exponent % len as u64) as usize;
            for (k, &p) in cycle.iter().enumerate() {
                out[p] = cycle[(k + shift) % len] as u32;
            }
        }
        Permutation { images: out }
    }

    /// Disjoint cycles as lists of 0-based points, fixed points included,
    /// each cycle starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_unsorted(
            self.cycles().iter().map(|c| c.len() as u32).collect(),
        )
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().order()
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles() {
            if cycle.len() == 1 {
                continue;
            }
            any = true;
            write!(f, "(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 && self.degree() > 9 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

pub fn cycle_type(p: &Permutation) -> CycleType {
    p.cycle_type()
}

/// Cycle structure of a permutation: a partition of its degree, stored in
/// descending order with fixed points as parts of size 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<u32>,
}

impl CycleType {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidCycleType("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidCycleType("zero-length cycle".into()));
        }
        Ok(Self::from_unsorted(parts))
    }

    pub(crate) fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn identity(degree: usize) -> Self {
        CycleType {
            parts: vec![1; degree],
        }
    }

    /// `count` cycles of length `len`.
    pub fn uniform(len: u32, count: usize) -> Self {
        CycleType {
            parts: vec![len; count],
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.parts.len()
    }

    /// Degree minus number of cycles.
    pub fn ind(&self) -> u64 {
        (self.degree() - self.num_cycles()) as u64
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    pub fn order(&self) -> u64 {
        self.parts.iter().fold(1u64, |acc, &p| acc.lcm(&(p as u64)))
    }

    /// Gcd of all cycle lengths.
    pub fn parts_gcd(&self) -> u64 {
        self.parts.iter().fold(0u64, |acc, &p| acc.gcd(&(p as u64)))
    }

    /// Cycle type of the `k`-th power: a cycle of length `c` splits into
    /// `gcd(c, k)` cycles of length `c / gcd(c, k)`.
    pub fn power(&self, k: u64) -> CycleType {
        let mut parts = Vec::with_capacity(self.parts.len());
        for &c in &self.parts {
            let g = (c as u64).gcd(&k);
            let g = if k == 0 { c as u64 } else { g };
            for _ in 0..g {
                parts.push((c as u64 / g) as u32);
            }
        }
        CycleType::from_unsorted(parts)
    }

    /// Representative with consecutive cycles: `(2,2,1)` gives `(12)(34)`.
    pub fn representative(&self) -> Permutation {
        let n = self.degree();
        let mut images = Vec::with_capacity(n);
        let mut start = 0u32;
        for &c in &self.parts {
            for k in 0..c {
                images.push(start + (k + 1) % c);
            }
            start += c;
        }
        Permutation::from_zero_based_unchecked(images)
    }

    /// Dot-separated parts as used in record files, e.g. `2.1`.
    pub fn dotted(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts `(2,1)`, `2,1`, `2.1` or `2 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c == '.' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::InvalidCycleType(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CycleType::new(parts)
    }
}

/// Every partition of `n`, largest first part first.
pub fn partitions(n: usize) -> Vec<CycleType> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<u32>, out: &mut Vec<CycleType>) {
        if rem == 0 {
            out.push(CycleType { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p as u32);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All `n!` permutations of `n` points in lexicographic order.
pub fn all_permutations(n: usize) -> AllPermutations {
    AllPermutations {
        next: Some((0..n as u32).collect()),
    }
}

pub struct AllPermutations {
    next: Option<Vec<u32>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let n = succ.len();
        if n >= 2 {
            let mut i = n - 1;
            while i > 0 && succ[i - 1] >= succ[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while succ[j] <= succ[i - 1] {
                    j -= 1;
                }
                succ.swap(i - 1, j);
                succ[i..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation::from_zero_based_unchecked(current))
    }
}

/// Number of cycles of `(g, h)` acting on pairs: `sum_{i,j} gcd(c_i, d_j)`.
pub fn pair_cycle_count(g: &CycleType, h: &CycleType) -> u64 {
    let mut total = 0u64;
    for &c in g.parts() {
        for &d in h.parts() {
            total += (c as u64).gcd(&(d as u64));
        }
    }
    total
}

/// Index of `(g, h)` in the product embedding on `m * n` points.
pub fn pair_index(g: &CycleType, h: &CycleType) -> u64 {
    (g.degree() * h.degree()) as u64 - pair_cycle_count(g, h)
}

/// The permutation `(i, j) -> (g(i), h(j))` on pairs, where the 0-based pair
/// `(i, j)` is the point `i * n + j`.
pub fn product_embed(g: &Permutation, h: &Permutation) -> Permutation {
    let n = h.degree();
    let mut images = Vec::with_capacity(g.degree() * n);
    for i in 0..g.degree() {
        let gi = g.apply(i);
        for j in 0..n {
            images.push((gi * n + h.apply(j)) as u32);
        }
    }
    Permutation::from_zero_based_unchecked(images)
}
