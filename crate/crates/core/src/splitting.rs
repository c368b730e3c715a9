//! Tame splitting patterns of primes in `F`, `K` and `FK`, computed from an
//! inertia generator and every compatible Frobenius, and the discriminant
//! valuation tables built from them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::group::{AbelianElement, AbelianGroup};
use crate::perm::{all_permutations, pair_index, partitions, product_embed, CycleType, Permutation};

/// Factorisation shape `p = prod P_i^{e_i}` with residue degrees `f_i`,
/// stored as `(e, f)` pairs sorted by `e` descending, then `f` ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingPattern {
    factors: Vec<(u32, u32)>,
}

impl SplittingPattern {
    pub fn new(mut factors: Vec<(u32, u32)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::MalformedPattern {
                text: String::new(),
                reason: "no prime factors".into(),
            });
        }
        if factors.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(Error::MalformedPattern {
                text: format!("{factors:?}"),
                reason: "ramification index and residue degree must be positive".into(),
            });
        }
        factors.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Ok(SplittingPattern { factors })
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    /// `sum e_i f_i`.
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|&(e, f)| e as u64 * f as u64).sum()
    }

    pub fn is_unramified(&self) -> bool {
        self.factors.iter().all(|&(e, _)| e == 1)
    }

    /// `sum f_i (e_i - 1)`, the tame discriminant valuation.
    pub fn disc_valuation(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(e, f)| f as u64 * (e as u64 - 1))
            .sum()
    }

    /// Cycle type of an inertia generator: `f_i` cycles of length `e_i`.
    pub fn inertia_type(&self) -> CycleType {
        let mut parts = Vec::new();
        for &(e, f) in &self.factors {
            parts.extend(std::iter::repeat_n(e, f as usize));
        }
        CycleType::new(parts).expect("pattern is nonempty")
    }

    pub fn parse_with_degree(text: &str, degree: u64) -> Result<Self> {
        let pattern: SplittingPattern = text.parse()?;
        if pattern.degree() != degree {
            return Err(Error::MalformedPattern {
                text: text.to_string(),
                reason: format!("degree {} but {degree} was expected", pattern.degree()),
            });
        }
        Ok(pattern)
    }
}

pub fn parse_pattern(text: &str) -> Result<SplittingPattern> {
    text.parse()
}

pub fn format_pattern(pattern: &SplittingPattern) -> String {
    pattern.to_string()
}

fn write_number(out: &mut String, n: u32) {
    if n < 10 {
        out.push(char::from(b'0' + n as u8));
    } else {
        out.push_str(&format!("{{{n}}}"));
    }
}

impl fmt::Display for SplittingPattern {
    /// Ramified factors as `f^e` separated by spaces, then the residue
    /// degrees of the unramified factors as one run: `(1^2 12)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut words = Vec::new();
        for &(e, deg) in self.factors.iter().filter(|&&(e, _)| e > 1) {
            let mut w = String::new();
            write_number(&mut w, deg);
            w.push('^');
            write_number(&mut w, e);
            words.push(w);
        }
        let mut run = String::new();
        for &(_, deg) in self.factors.iter().filter(|&&(e, _)| e == 1) {
            write_number(&mut run, deg);
        }
        if !run.is_empty() {
            words.push(run);
        }
        write!(f, "({})", words.join(" "))
    }
}

struct PatternParser<'a> {
    text: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl<'a> PatternParser<'a> {
    fn error(&self, reason: impl Into<String>) -> Error {
        Error::MalformedPattern {
            text: self.text.to_string(),
            reason: reason.into(),
        }
    }

    fn skip_space(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    /// A single digit or a braced integer.
    fn number(&mut self) -> Result<u32> {
        match self.chars.next() {
            Some((_, '{')) => {
                let mut digits = String::new();
                loop {
                    match self.chars.next() {
                        Some((_, '}')) => break,
                        Some((_, c)) if c.is_ascii_digit() => digits.push(c),
                        Some((i, c)) => return Err(self.error(format!("unexpected {c:?} at {i}"))),
                        None => return Err(self.error("unterminated brace")),
                    }
                }
                let n: u32 = digits
                    .parse()
                    .map_err(|_| self.error(format!("bad number {{{digits}}}")))?;
                if n == 0 {
                    return Err(self.error("zero is not allowed"));
                }
                Ok(n)
            }
            Some((_, c)) if ('1'..='9').contains(&c) => Ok(c as u32 - '0' as u32),
            Some((i, c)) => Err(self.error(format!("unexpected {c:?} at {i}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn parse(mut self) -> Result<SplittingPattern> {
        self.skip_space();
        if self.chars.next().map(|(_, c)| c) != Some('(') {
            return Err(self.error("expected '('"));
        }
        let mut factors = Vec::new();
        loop {
            self.skip_space();
            match self.chars.peek() {
                Some((_, ')')) => {
                    self.chars.next();
                    break;
                }
                None => return Err(self.error("missing ')'")),
                _ => {}
            }
            let f = self.number()?;
            self.skip_space();
            let e = if self.chars.next_if(|(_, c)| *c == '^').is_some() {
                self.skip_space();
                self.number()?
            } else {
                1
            };
            factors.push((e, f));
        }
        self.skip_space();
        if let Some((i, c)) = self.chars.next() {
            return Err(self.error(format!("trailing {c:?} at {i}")));
        }
        SplittingPattern::new(factors).map_err(|_| self.error("empty pattern"))
    }
}

impl FromStr for SplittingPattern {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        PatternParser {
            text,
            chars: text.char_indices().peekable(),
        }
        .parse()
    }
}

/// Orbit lengths of `(g, h)` on the `d|A|` points of the compositum:
/// the ramification indices of the primes of `FK`.
pub fn inertia_orbits(g: &CycleType, h: &AbelianElement, d: usize, group: &AbelianGroup) -> Result<Vec<u32>> {
    check_inputs(g, h, d, group)?;
    let iota = product_embed(&g.representative(), &h.regular_permutation());
    Ok(iota.cycle_type().parts().to_vec())
}

fn check_inputs(g: &CycleType, h: &AbelianElement, d: usize, group: &AbelianGroup) -> Result<()> {
    if g.degree() != d {
        return Err(Error::DegreeMismatch {
            expected: d as u64,
            found: g.degree() as u64,
        });
    }
    if h.group() != group {
        return Err(Error::ForeignElement(format!("{h} is not an element of {group}")));
    }
    Ok(())
}

/// Splitting pattern from an inertia generator `iota` and a Frobenius `phi`
/// normalising `<iota>`: each orbit of `<iota, phi>` of size `e f` splits
/// into `f` orbits of `iota` of length `e`.
pub fn pattern_from_generators(iota: &Permutation, phi: &Permutation) -> SplittingPattern {
    let n = iota.degree();
    assert_eq!(n, phi.degree(), "generators act on different sets");
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for x in 0..n {
        for y in [iota.apply(x), phi.apply(x)] {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut size = vec![0u32; n];
    let mut cycle_len = vec![0u32; n];
    for cycle in iota.cycles() {
        for &x in &cycle {
            cycle_len[x] = cycle.len() as u32;
        }
    }
    let mut e_of_root = vec![0u32; n];
    for (x, &len) in cycle_len.iter().enumerate() {
        let r = find(&mut parent, x);
        size[r] += 1;
        e_of_root[r] = len;
    }
    let factors = (0..n)
        .filter(|&r| size[r] > 0)
        .map(|r| (e_of_root[r], size[r] / e_of_root[r]))
        .collect();
    SplittingPattern::new(factors).expect("nonempty action")
}

/// Patterns of one prime in `F`, `K` and `FK` for a fixed Frobenius.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalSplitting {
    pub f: SplittingPattern,
    pub k: SplittingPattern,
    pub fk: SplittingPattern,
}

/// Every elements `phi` of `S_d x A` with `phi iota phi^-1 = iota^u` for a unit
/// `u`, where `iota = (g~, h)`, reduced to the patterns it induces.
pub fn local_splittings(
    g: &CycleType,
    h: &AbelianElement,
    d: usize,
    group: &AbelianGroup,
) -> Result<BTreeSet<LocalSplitting>> {
    check_inputs(g, h, d, group)?;
    let g_rep = g.representative();
    let h_reg = h.regular_permutation();
    let iota = product_embed(&g_rep, &h_reg);
    let order = iota.order();
    let units: Vec<u64> = (1..=order.max(1)).filter(|u| u.gcd(&order) == 1).collect();
    let powers: HashSet<Permutation> = units.iter().map(|&u| iota.pow(u)).collect();
    let translations: Vec<Permutation> = group.elements().iter().map(|a| a.regular_permutation()).collect();
    let mut out = BTreeSet::new();
    for sigma in all_permutations(d) {
        let sigma_inv = sigma.inverse();
        for a_reg in &translations {
            let phi = product_embed(&sigma, a_reg);
            let conj = phi.compose(&iota).compose(&phi.inverse());
            if !powers.contains(&conj) {
                continue;
            }
            debug_assert!(sigma.compose(&g_rep).compose(&sigma_inv).cycle_type() == *g);
            out.insert(LocalSplitting {
                f: pattern_from_generators(&g_rep, &sigma),
                k: pattern_from_generators(&h_reg, a_reg),
                fk: pattern_from_generators(&iota, &phi),
            });
        }
    }
    Ok(out)
}

/// De-duplicated `FK` patterns over all compatible Frobenius elements.
pub fn decomposition_patterns(
    g: &CycleType,
    h: &AbelianElement,
    d: usize,
    group: &AbelianGroup,
) -> Result<BTreeSet<SplittingPattern>> {
    Ok(local_splittings(g, h, d, group)?.into_iter().map(|s| s.fk).collect())
}

pub fn disc_valuation(g: &CycleType) -> u64 {
    g.ind()
}

pub fn disc_valuation_pair(g: &CycleType, h: &AbelianElement, d: usize, group: &AbelianGroup) -> Result<u64> {
    check_inputs(g, h, d, group)?;
    Ok(pair_index(g, &h.regular_cycle_type()))
}

/// `sum_{i,j} f_i f_j gcd(e_i, e_j) (lcm(e_i, e_j) - 1)` over the factors of
/// both patterns.
pub fn remark_formula(pattern_f: &SplittingPattern, pattern_k: &SplittingPattern) -> u64 {
    let mut total = 0u64;
    for &(e1, f1) in pattern_f.factors() {
        for &(e2, f2) in pattern_k.factors() {
            let (e1, e2) = (e1 as u64, e2 as u64);
            total += f1 as u64 * f2 as u64 * e1.gcd(&e2) * (e1.lcm(&e2) - 1);
        }
    }
    total
}

/// One line of a discriminant valuation table for `S_d x C_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub generator: CycleType,
    pub f_splitting: Vec<SplittingPattern>,
    pub fk_splitting: Vec<SplittingPattern>,
    pub v_disc_f: u64,
    pub v_disc_fk: u64,
    pub delta: u64,
}

impl TableRow {
    /// Cycle notation of the standard representative, e.g. `(123)(45)`.
    pub fn generator_label(&self) -> String {
        self.generator.representative().to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTable {
    pub d: usize,
    pub group: AbelianGroup,
    pub rows: Vec<TableRow>,
    /// `d ind(h)`, the largest possible `Delta`.
    pub max_delta: u64,
}

pub const TABLE_COLUMNS: [&str; 6] = ["generator", "F", "FK", "vF", "vFK", "delta"];

fn join_patterns(patterns: &[SplittingPattern]) -> String {
    patterns
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn sorted_by_text(set: BTreeSet<SplittingPattern>) -> Vec<SplittingPattern> {
    let mut v: Vec<SplittingPattern> = set.into_iter().collect();
    v.sort_by_key(|p| p.to_string());
    v
}

impl DeltaTable {
    fn cells(&self) -> Vec<[String; 6]> {
        self.rows
            .iter()
            .map(|r| {
                [
                    r.generator_label(),
                    join_patterns(&r.f_splitting),
                    join_patterns(&r.fk_splitting),
                    r.v_disc_f.to_string(),
                    r.v_disc_fk.to_string(),
                    r.delta.to_string(),
                ]
            })
            .collect()
    }

    pub fn caption(&self) -> String {
        format!(
            "S{} x {} (delta <= {})",
            self.d, self.group, self.max_delta
        )
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.caption(), TABLE_COLUMNS.join("\t"));
        for cells in self.cells() {
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_aligned(&self) -> String {
        let cells = self.cells();
        let mut widths: Vec<usize> = TABLE_COLUMNS.iter().map(|c| c.len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| -> String {
            row.iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let header: Vec<String> = TABLE_COLUMNS.iter().map(|s| s.to_string()).collect();
        let mut out = format!("{}\n{}\n", self.caption(), line(&header));
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// Table of valuations at a tame prime ramified in `K = C_p`-extension,
/// one row per nontrivial class of `S_d`, ordered by index and then by
/// cycle type.
pub fn generate_table(d: usize, group: &AbelianGroup) -> Result<DeltaTable> {
    let factors = group.invariant_factors();
    if factors.len() != 1 || !is_prime(factors[0]) {
        return Err(Error::InvalidArgument(format!(
            "tables are defined for cyclic groups of prime order, got {group}"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {d}")));
    }
    let p = factors[0];
    let h = group.standard_generator();
    let v_k = h.ind();
    let mut classes: Vec<CycleType> = partitions(d).into_iter().filter(|g| !g.is_identity()).collect();
    classes.sort_by(|a, b| a.ind().cmp(&b.ind()).then_with(|| a.parts().cmp(b.parts())));
    let mut rows = Vec::with_capacity(classes.len());
    for g in classes {
        let splittings = local_splittings(&g, &h, d, group)?;
        let f_set: BTreeSet<SplittingPattern> = splittings.iter().map(|s| s.f.clone()).collect();
        let fk_set: BTreeSet<SplittingPattern> = splittings.into_iter().map(|s| s.fk).collect();
        let v_disc_f = disc_valuation(&g);
        let v_disc_fk = disc_valuation_pair(&g, &h, d, group)?;
        let delta = p * v_disc_f + d as u64 * v_k - v_disc_fk;
        rows.push(TableRow {
            generator: g,
            f_splitting: sorted_by_text(f_set),
            fk_splitting: sorted_by_text(fk_set),
            v_disc_f,
            v_disc_fk,
            delta,
        });
    }
    Ok(DeltaTable {
        d,
        group: group.clone(),
        rows,
        max_delta: d as u64 * v_k,
    })
}
