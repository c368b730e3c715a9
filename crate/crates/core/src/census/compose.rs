//! Discriminant of a compositum `FK` from the local data of `F` and `K`,
//! the linear disjointness test, and the table of wild `Delta_p` overrides.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;

use crate::arith::fundamental_discriminant;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::index::delta_cycle_types;

use super::record::{FieldGroup, FieldRecord};

/// Explicit `Delta_p` values for primes where both fields ramify and the
/// tame formula does not apply. Lines read `p;F-label|*;K-label|*;delta`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WildOverrides {
    entries: HashMap<(u64, Option<String>, Option<String>), u64>,
}

impl WildOverrides {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prime: u64, f_label: Option<&str>, k_label: Option<&str>, delta: u64) {
        self.entries.insert(
            (prime, f_label.map(str::to_string), k_label.map(str::to_string)),
            delta,
        );
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Most specific match first: both labels, `F` only, `K` only, neither.
    pub fn lookup(&self, prime: u64, f_label: &str, k_label: &str) -> Option<u64> {
        let f = Some(f_label.to_string());
        let k = Some(k_label.to_string());
        [(f.clone(), k.clone()), (f, None), (None, k), (None, None)]
            .into_iter()
            .find_map(|(a, b)| self.entries.get(&(prime, a, b)).copied())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut out = WildOverrides::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::Parse { line: i + 1, reason };
            let fields: Vec<&str> = line.split(';').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(err(format!("expected p;F;K;delta, found {line:?}")));
            }
            let prime: u64 = fields[0].parse().map_err(|_| err(format!("bad prime {:?}", fields[0])))?;
            let label = |s: &str| (s != "*").then(|| s.to_string());
            let delta: u64 = fields[3].parse().map_err(|_| err(format!("bad delta {:?}", fields[3])))?;
            out.entries
                .insert((prime, label(fields[1]), label(fields[2])), delta);
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }
}

/// How `v_p(Disc FK)` was obtained at a ramified prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeSource {
    /// Only `F` ramifies: `v = |A| v_p(F)`.
    OnlyF,
    /// Only `K` ramifies: `v = d v_p(K)`.
    OnlyK,
    /// Both tame: `Delta_p = Delta(g, h)`.
    Tame,
    /// Both ramify, at least one wildly, `Delta_p` from the override table.
    Override,
    /// Both ramify, at least one wildly, no override available.
    WildOverlap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeContribution {
    pub prime: u64,
    pub v_f: u64,
    pub v_k: u64,
    /// `Delta_p`; `None` for an unresolved wild overlap.
    pub delta: Option<u64>,
    pub source: PrimeSource,
}

impl PrimeContribution {
    /// `|A| v_p(F) + d v_p(K)`, the exponent when `Delta_p = 0`.
    pub fn naive(&self, d: u64, order: u64) -> u64 {
        order * self.v_f + d * self.v_k
    }

    /// Exact `v_p(Disc FK)` when known.
    pub fn valuation(&self, d: u64, order: u64) -> Option<u64> {
        self.delta.map(|delta| self.naive(d, order) - delta)
    }

    /// `max(|A| v_p(F), d v_p(K))`: `Disc FK` is divisible by both
    /// `Disc(F)^{|A|}` and `Disc(K)^d`.
    pub fn lower_bound(&self, d: u64, order: u64) -> u64 {
        (order * self.v_f).max(d * self.v_k)
    }
}

/// `|Disc(FK)|` factored prime by prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedDisc {
    pub d: u64,
    pub order: u64,
    pub primes: Vec<PrimeContribution>,
}

impl ComposedDisc {
    pub fn is_exact(&self) -> bool {
        self.primes.iter().all(|c| c.delta.is_some())
    }

    pub fn wild_overlaps(&self) -> Vec<u64> {
        self.primes
            .iter()
            .filter(|c| c.source == PrimeSource::WildOverlap)
            .map(|c| c.prime)
            .collect()
    }

    fn product(&self, exponent: impl Fn(&PrimeContribution) -> u64) -> BigUint {
        self.primes.iter().fold(BigUint::from(1u32), |acc, c| {
            acc * BigUint::from(c.prime).pow(exponent(c) as u32)
        })
    }

    /// `|Disc(FK)|`, or `None` when some wild overlap is unresolved.
    pub fn magnitude(&self) -> Option<BigUint> {
        self.is_exact()
            .then(|| self.product(|c| c.valuation(self.d, self.order).expect("exact")))
    }

    /// `Disc_Y(FK)`: exact exponents at primes `p <= y`, naive ones above.
    pub fn truncated_magnitude(&self, y: u64) -> Option<BigUint> {
        if self.primes.iter().any(|c| c.prime <= y && c.delta.is_none()) {
            return None;
        }
        Some(self.product(|c| {
            if c.prime <= y {
                c.valuation(self.d, self.order).expect("resolved below y")
            } else {
                c.naive(self.d, self.order)
            }
        }))
    }

    /// Smallest value `|Disc(FK)|` can take given the unresolved primes.
    pub fn lower_bound(&self) -> BigUint {
        self.product(|c| {
            c.valuation(self.d, self.order)
                .unwrap_or_else(|| c.lower_bound(self.d, self.order))
        })
    }

    /// `Disc(F)^{|A|} Disc(K)^d / |Disc(FK)| = prod p^{Delta_p}`.
    pub fn delta_product(&self) -> Option<BigUint> {
        self.is_exact()
            .then(|| self.product(|c| c.delta.expect("exact")))
    }
}

impl fmt::Display for ComposedDisc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.magnitude() {
            Some(m) => write!(f, "{m}"),
            None => write!(f, "wild-overlap at {:?}", self.wild_overlaps()),
        }
    }
}

fn check_pair<'a>(f: &FieldRecord, k: &'a FieldRecord) -> Result<(u64, &'a AbelianGroup)> {
    let FieldGroup::Symmetric(d) = f.group else {
        return Err(Error::InvalidRecord {
            label: f.label.clone(),
            reason: format!("expected an S_d field, found group {}", f.group),
        });
    };
    let FieldGroup::Abelian(group) = &k.group else {
        return Err(Error::InvalidRecord {
            label: k.label.clone(),
            reason: format!("expected an abelian field, found group {}", k.group),
        });
    };
    Ok((d as u64, group))
}

/// Valuations of `Disc(FK)` at every prime ramified in `F` or `K`.
pub fn compose_disc(f: &FieldRecord, k: &FieldRecord, overrides: &WildOverrides) -> Result<ComposedDisc> {
    let (d, group) = check_pair(f, k)?;
    let order = group.order();
    let mut primes = Vec::with_capacity(f.local.len() + k.local.len());
    let (mut i, mut j) = (0, 0);
    while i < f.local.len() || j < k.local.len() {
        let pf = f.local.get(i).map_or(u64::MAX, |l| l.prime);
        let pk = k.local.get(j).map_or(u64::MAX, |l| l.prime);
        let contribution = if pf < pk {
            i += 1;
            PrimeContribution {
                prime: pf,
                v_f: f.local[i - 1].valuation(),
                v_k: 0,
                delta: Some(0),
                source: PrimeSource::OnlyF,
            }
        } else if pk < pf {
            j += 1;
            PrimeContribution {
                prime: pk,
                v_f: 0,
                v_k: k.local[j - 1].valuation(),
                delta: Some(0),
                source: PrimeSource::OnlyK,
            }
        } else {
            let (lf, lk) = (&f.local[i], &k.local[j]);
            i += 1;
            j += 1;
            let (v_f, v_k) = (lf.valuation(), lk.valuation());
            let (delta, source) = match (lf.inertia(), lk.inertia()) {
                (Some(g), Some(h)) => (Some(delta_cycle_types(g, h)), PrimeSource::Tame),
                _ => match overrides.lookup(pf, &f.label, &k.label) {
                    Some(delta) => {
                        if delta > (order * v_f).min(d * v_k) {
                            return Err(Error::InvalidArgument(format!(
                                "override Delta_{pf} = {delta} for ({}, {}) exceeds min(|A| v_F, d v_K) = {}",
                                f.label,
                                k.label,
                                (order * v_f).min(d * v_k)
                            )));
                        }
                        (Some(delta), PrimeSource::Override)
                    }
                    None => (None, PrimeSource::WildOverlap),
                },
            };
            PrimeContribution {
                prime: pf,
                v_f,
                v_k,
                delta,
                source,
            }
        };
        primes.push(contribution);
    }
    Ok(ComposedDisc { d, order, primes })
}

/// Whether `F^c` and `K` meet only in `Q`. The only nontrivial abelian
/// subfield of `F^c` is `Q(sqrt(Disc F))`, so odd `|A|` always passes.
pub fn linearly_disjoint(f: &FieldRecord, k: &FieldRecord) -> Result<bool> {
    let (_, group) = check_pair(f, k)?;
    if group.order() % 2 == 1 {
        return Ok(true);
    }
    if k.quad_subfield_discs.is_empty() {
        return Err(Error::InsufficientData {
            label: k.label.clone(),
            reason: format!("{group} has even order but no quadratic subfields are listed"),
        });
    }
    let resolvent = fundamental_discriminant(f.disc).ok_or_else(|| Error::InvalidRecord {
        label: f.label.clone(),
        reason: "square discriminant".into(),
    })?;
    Ok(!k.quad_subfield_discs.contains(&resolvent))
}
