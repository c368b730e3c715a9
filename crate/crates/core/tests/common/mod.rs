#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use malle_core::group::AbelianGroup;
use malle_core::perm::CycleType;
use malle_core::splitting::{generate_table, inertia_orbits, DeltaTable, SplittingPattern};

pub const TABLES: [(usize, &str, &str); 5] = [
    (3, "C2", "table_S3_C2.tsv"),
    (3, "C3", "table_S3_C3.tsv"),
    (4, "C2", "table_S4_C2.tsv"),
    (5, "C2", "table_S5_C2.tsv"),
    (5, "C5", "table_S5_C5.tsv"),
];

pub fn manifest_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

pub fn fixture_path() -> PathBuf {
    manifest_path("data/d3_c2.fields")
}

#[derive(Clone, Debug)]
pub struct GoldenRow {
    pub generator: String,
    pub f: Vec<String>,
    pub fk: Vec<String>,
    pub v_f: u64,
    pub v_fk: u64,
    pub delta: u64,
}

pub fn load_golden(file: &str) -> Vec<GoldenRow> {
    let text = std::fs::read_to_string(manifest_path(&format!("tests/golden/{file}"))).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("generator\t"))
        .map(|line| {
            let cols: Vec<&str> = line.split('\t').collect();
            assert_eq!(cols.len(), 6, "{file}: {line}");
            let split = |s: &str| s.split(", ").map(str::to_string).collect::<Vec<_>>();
            GoldenRow {
                generator: cols[0].to_string(),
                f: split(cols[1]),
                fk: split(cols[2]),
                v_f: cols[3].parse().unwrap(),
                v_fk: cols[4].parse().unwrap(),
                delta: cols[5].parse().unwrap(),
            }
        })
        .collect()
}

/// Every pattern string printed in a golden file.
pub fn golden_pattern_strings() -> Vec<String> {
    TABLES
        .iter()
        .flat_map(|(_, _, file)| load_golden(file))
        .flat_map(|row| row.f.into_iter().chain(row.fk))
        .collect()
}

/// A printed `FK` cell that cannot be a splitting for its row: wrong total
/// degree, or inertia orbits different from those of `(g, h)`.
pub fn is_advisory(cell: &SplittingPattern, g: &CycleType, d: usize, group: &AbelianGroup) -> bool {
    let h = group.standard_generator();
    let mut expected = inertia_orbits(g, &h, d, group).unwrap();
    expected.sort_unstable();
    let mut orbits: Vec<u32> = cell
        .factors()
        .iter()
        .flat_map(|&(e, f)| std::iter::repeat_n(e, f as usize))
        .collect();
    orbits.sort_unstable();
    cell.degree() != d as u64 * group.order() || orbits != expected
}

#[derive(Debug, Default)]
pub struct GoldenOutcome {
    pub cells: usize,
    pub mismatches: Vec<String>,
    pub advisory: Vec<String>,
}

pub fn compare_golden(d: usize, group_label: &str, file: &str) -> GoldenOutcome {
    let group: AbelianGroup = group_label.parse().unwrap();
    let table: DeltaTable = generate_table(d, &group).unwrap();
    let golden = load_golden(file);
    let mut out = GoldenOutcome::default();
    if table.rows.len() != golden.len() {
        out.mismatches.push(format!("{file}: {} rows, expected {}", table.rows.len(), golden.len()));
        return out;
    }
    for (row, want) in table.rows.iter().zip(&golden) {
        let at = format!("{file} row {}", want.generator);
        out.cells += 3;
        if row.generator_label() != want.generator {
            out.mismatches.push(format!("{at}: generator {}", row.generator_label()));
        }
        for (name, got, exp) in [
            ("vF", row.v_disc_f, want.v_f),
            ("vFK", row.v_disc_fk, want.v_fk),
            ("delta", row.delta, want.delta),
        ] {
            if got != exp {
                out.mismatches.push(format!("{at}: {name} = {got}, expected {exp}"));
            }
        }
        let f_got: BTreeSet<&SplittingPattern> = row.f_splitting.iter().collect();
        let f_want: BTreeSet<SplittingPattern> = want.f.iter().map(|s| s.parse().unwrap()).collect();
        if f_got != f_want.iter().collect() {
            out.mismatches.push(format!("{at}: F patterns differ"));
        }
        for cell in &want.fk {
            out.cells += 1;
            let p: SplittingPattern = cell.parse().unwrap();
            if row.fk_splitting.contains(&p) {
                continue;
            }
            if is_advisory(&p, &row.generator, d, &group) {
                out.advisory.push(format!("{at}: {cell}"));
            } else {
                out.mismatches.push(format!("{at}: FK {cell} not enumerated"));
            }
        }
    }
    out
}

use malle_core::census::{Dataset, FieldRecord, LocalKind};
use malle_core::splitting::remark_formula;

/// Square-free kernel of `|n|`, with the sign of `n`, turned into a
/// fundamental discriminant.
pub fn fundamental_of(n: i64) -> i64 {
    let mut m = n.unsigned_abs();
    let mut core = 1u64;
    let mut p = 2;
    while p * p <= m {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if k % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core *= m;
    let core = n.signum() * core as i64;
    if core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

/// Pattern of a degree-`d` field at a prime with tame inertia of the given
/// cycle type, valid when every residue degree is forced to be 1.
fn forced_pattern(parts: &[u32]) -> SplittingPattern {
    SplittingPattern::new(parts.iter().map(|&e| (e, 1)).collect()).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleDisc {
    Exact(u128),
    /// Some prime is ramified in both fields and wild in one.
    Unknown { lower: u128 },
}

/// Compositum discriminant of a cubic and a quadratic field, prime by prime,
/// with the naive valuation `2 vF + 3 vK` at primes above `y`.
pub fn oracle_disc(f: &FieldRecord, k: &FieldRecord, y: Option<u64>) -> OracleDisc {
    let mut primes: Vec<u64> = f.local.iter().chain(&k.local).map(|l| l.prime).collect();
    primes.sort_unstable();
    primes.dedup();
    let mut exact = true;
    let mut value: u128 = 1;
    for p in primes {
        let (lf, lk) = (f.local_at(p), k.local_at(p));
        let vf = lf.map_or(0, |l| l.valuation());
        let vk = lk.map_or(0, |l| l.valuation());
        let naive = 2 * vf + 3 * vk;
        let v = match (lf, lk) {
            _ if y.is_some_and(|y| p > y) => naive,
            (Some(_), None) => 2 * vf,
            (None, Some(_)) => 3 * vk,
            (Some(a), Some(b)) => match (&a.kind, &b.kind) {
                (LocalKind::Tame(g), LocalKind::Tame(h)) => {
                    remark_formula(&forced_pattern(g.parts()), &forced_pattern(h.parts()))
                }
                _ => {
                    exact = false;
                    (2 * vf).max(3 * vk)
                }
            },
            (None, None) => unreachable!(),
        };
        value *= (p as u128).pow(v as u32);
    }
    if exact {
        OracleDisc::Exact(value)
    } else {
        OracleDisc::Unknown { lower: value }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleCount {
    pub count: u64,
    pub flagged: u64,
    pub non_disjoint: u64,
}

pub fn oracle_count(data: &Dataset, x: u128, y: Option<u64>) -> OracleCount {
    let cubics: Vec<&FieldRecord> = data.records.iter().filter(|r| r.degree == 3).collect();
    let quads: Vec<&FieldRecord> = data.records.iter().filter(|r| r.degree == 2).collect();
    let mut out = OracleCount::default();
    for f in &cubics {
        for k in &quads {
            let (below, exact) = match oracle_disc(f, k, y) {
                OracleDisc::Exact(v) => (v < x, true),
                OracleDisc::Unknown { lower } => (lower < x, false),
            };
            if !below {
                continue;
            }
            if k.disc == fundamental_of(f.disc) {
                out.non_disjoint += 1;
            } else if exact {
                out.count += 1;
            } else {
                out.flagged += 1;
            }
        }
    }
    out
}

pub fn fixture() -> Dataset {
    Dataset::ingest(fixture_path()).unwrap()
}
