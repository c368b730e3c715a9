//! Field records and the semicolon-separated dataset format.
//!
//! ```text
//! #pairing d=3 A=C2
//! #coverage group=S3 maxdisc=2000
//! 3.1.23.1;3;S3;-23;23:t(2.1);
//! 2.0.4.1;2;C2;-4;2:w(2);-4
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::arith::{factorial, fundamental_discriminant, is_fundamental_discriminant, is_prime};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::perm::CycleType;

/// Galois group of a record: `S_d` in its natural action or an abelian
/// group in its regular action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldGroup {
    Symmetric(usize),
    Abelian(AbelianGroup),
}

impl FieldGroup {
    /// Degree of the corresponding field.
    pub fn degree(&self) -> u64 {
        match self {
            FieldGroup::Symmetric(d) => *d as u64,
            FieldGroup::Abelian(a) => a.order(),
        }
    }

    /// Primes dividing this number are wild for the group on its own.
    fn modulus(&self) -> u64 {
        match self {
            FieldGroup::Symmetric(d) => factorial(*d as u64),
            FieldGroup::Abelian(a) => a.order(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self, FieldGroup::Symmetric(_))
    }
}

impl fmt::Display for FieldGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldGroup::Symmetric(d) => write!(f, "S{d}"),
            FieldGroup::Abelian(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for FieldGroup {
    type Err = Error;

    fn from_str(label: &str) -> Result<Self> {
        if let Some(rest) = label.strip_prefix('S') {
            let d: usize = rest.parse().map_err(|_| Error::InvalidGroupLabel {
                label: label.to_string(),
                reason: "expected S<d>".into(),
            })?;
            if d < 3 {
                return Err(Error::InvalidGroupLabel {
                    label: label.to_string(),
                    reason: "symmetric groups start at S3 (use C2 for quadratic fields)".into(),
                });
            }
            return Ok(FieldGroup::Symmetric(d));
        }
        let group: AbelianGroup = label.parse()?;
        if group.is_trivial() {
            return Err(Error::InvalidGroupLabel {
                label: label.to_string(),
                reason: "the trivial group has no fields besides Q".into(),
            });
        }
        Ok(FieldGroup::Abelian(group))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalKind {
    /// Tame ramification with the given inertia cycle type.
    Tame(CycleType),
    /// Wild ramification; only the discriminant valuation is recorded.
    Wild(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalDatum {
    pub prime: u64,
    pub kind: LocalKind,
}

impl LocalDatum {
    pub fn tame(prime: u64, class: CycleType) -> Self {
        LocalDatum {
            prime,
            kind: LocalKind::Tame(class),
        }
    }

    pub fn wild(prime: u64, valuation: u32) -> Self {
        LocalDatum {
            prime,
            kind: LocalKind::Wild(valuation),
        }
    }

    pub fn valuation(&self) -> u64 {
        match &self.kind {
            LocalKind::Tame(c) => c.ind(),
            LocalKind::Wild(v) => *v as u64,
        }
    }

    pub fn is_wild(&self) -> bool {
        matches!(self.kind, LocalKind::Wild(_))
    }

    pub fn inertia(&self) -> Option<&CycleType> {
        match &self.kind {
            LocalKind::Tame(c) => Some(c),
            LocalKind::Wild(_) => None,
        }
    }
}

impl fmt::Display for LocalDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            LocalKind::Tame(c) => write!(f, "{}:t({})", self.prime, c.dotted()),
            LocalKind::Wild(v) => write!(f, "{}:w({v})", self.prime),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldRecord {
    pub label: String,
    pub degree: u64,
    pub group: FieldGroup,
    pub disc: i64,
    /// One entry per ramified prime, increasing.
    pub local: Vec<LocalDatum>,
    /// Fundamental discriminants of the quadratic subfields (abelian only).
    pub quad_subfield_discs: Vec<i64>,
}

impl FieldRecord {
    pub fn local_at(&self, p: u64) -> Option<&LocalDatum> {
        self.local
            .binary_search_by_key(&p, |l| l.prime)
            .ok()
            .map(|i| &self.local[i])
    }

    pub fn valuation_at(&self, p: u64) -> u64 {
        self.local_at(p).map_or(0, LocalDatum::valuation)
    }

    pub fn abs_disc(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    /// Checks the record on its own. `modulus`, when given, is `|A| d!` of a
    /// declared pairing and replaces the group's own wild modulus.
    pub fn validate(&self, modulus: Option<u64>) -> Result<()> {
        let bad = |reason: String| Error::InvalidRecord {
            label: self.label.clone(),
            reason,
        };
        if self.label.is_empty() || self.label.contains([';', '\n']) {
            return Err(bad("label must be nonempty and free of ';'".into()));
        }
        if self.degree != self.group.degree() {
            return Err(bad(format!(
                "degree {} does not match group {}",
                self.degree, self.group
            )));
        }
        if self.disc == 0 {
            return Err(bad("discriminant is zero".into()));
        }
        let modulus = modulus.unwrap_or_else(|| self.group.modulus());
        let mut product: u128 = 1;
        let mut last = 0u64;
        for datum in &self.local {
            let p = datum.prime;
            if !is_prime(p) {
                return Err(bad(format!("{p} is not prime")));
            }
            if p <= last {
                return Err(bad("ramified primes must be distinct and increasing".into()));
            }
            last = p;
            let wild_prime = modulus.is_multiple_of(p);
            match &datum.kind {
                LocalKind::Tame(c) => {
                    if wild_prime {
                        return Err(bad(format!("{p} divides {modulus} and must be recorded as wild")));
                    }
                    if c.degree() as u64 != self.degree {
                        return Err(bad(format!("inertia type {c} at {p} has the wrong degree")));
                    }
                    if c.is_identity() {
                        return Err(bad(format!("trivial inertia at ramified prime {p}")));
                    }
                    if let FieldGroup::Abelian(_) = self.group {
                        if c.parts().iter().any(|&x| x != c.parts()[0]) {
                            return Err(bad(format!(
                                "inertia type {c} at {p} is not a regular cycle type"
                            )));
                        }
                    }
                }
                LocalKind::Wild(v) => {
                    if !wild_prime {
                        return Err(bad(format!("{p} does not divide {modulus}, so it is tame")));
                    }
                    if *v == 0 {
                        return Err(bad(format!("zero valuation at ramified prime {p}")));
                    }
                }
            }
            for _ in 0..datum.valuation() {
                product = product
                    .checked_mul(p as u128)
                    .ok_or_else(|| bad("local discriminant overflows".into()))?;
            }
        }
        if product != self.abs_disc() as u128 {
            return Err(bad(format!(
                "local data give |disc| = {product}, record says {}",
                self.abs_disc()
            )));
        }
        match self.group {
            FieldGroup::Symmetric(_) => {
                if !self.quad_subfield_discs.is_empty() {
                    return Err(bad("quadratic subfields are listed for abelian records only".into()));
                }
                if fundamental_discriminant(self.disc).is_none() {
                    return Err(bad("square discriminant cannot belong to a full S_d field".into()));
                }
            }
            FieldGroup::Abelian(_) => {
                for &q in &self.quad_subfield_discs {
                    if !is_fundamental_discriminant(q) {
                        return Err(bad(format!("{q} is not a fundamental discriminant")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FieldRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let local: Vec<String> = self.local.iter().map(|l| l.to_string()).collect();
        let quads: Vec<String> = self.quad_subfield_discs.iter().map(|q| q.to_string()).collect();
        write!(
            f,
            "{};{};{};{};{};{}",
            self.label,
            self.degree,
            self.group,
            self.disc,
            local.join(","),
            quads.join(",")
        )
    }
}

fn parse_local(text: &str) -> std::result::Result<LocalDatum, String> {
    let (p, kind) = text
        .split_once(':')
        .ok_or_else(|| format!("local datum {text:?} lacks ':'"))?;
    let prime: u64 = p.trim().parse().map_err(|_| format!("bad prime {p:?}"))?;
    let kind = kind.trim();
    let inner = |prefix: &str| {
        kind.strip_prefix(prefix)
            .and_then(|rest| rest.strip_suffix(')'))
    };
    if let Some(parts) = inner("t(") {
        let class: CycleType = parts
            .parse()
            .map_err(|e: Error| format!("bad inertia type {kind:?}: {e}"))?;
        Ok(LocalDatum::tame(prime, class))
    } else if let Some(v) = inner("w(") {
        let v: u32 = v.parse().map_err(|_| format!("bad wild valuation {kind:?}"))?;
        Ok(LocalDatum::wild(prime, v))
    } else {
        Err(format!("local type {kind:?} is neither t(...) nor w(...)"))
    }
}

/// Parses one record line without validating it.
pub fn parse_record(line: &str, line_no: usize) -> Result<FieldRecord> {
    let err = |reason: String| Error::Parse {
        line: line_no,
        reason,
    };
    let fields: Vec<&str> = line.split(';').collect();
    if fields.len() != 6 {
        return Err(err(format!("expected 6 ';'-separated fields, found {}", fields.len())));
    }
    let label = fields[0].trim().to_string();
    let degree: u64 = fields[1]
        .trim()
        .parse()
        .map_err(|_| err(format!("bad degree {:?}", fields[1])))?;
    let group: FieldGroup = fields[2].trim().parse().map_err(|e: Error| err(e.to_string()))?;
    let disc: i64 = fields[3]
        .trim()
        .parse()
        .map_err(|_| err(format!("bad discriminant {:?}", fields[3])))?;
    let local = fields[4]
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_local)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(err)?;
    let quad_subfield_discs = fields[5]
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<i64>().map_err(|_| err(format!("bad quadratic discriminant {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldRecord {
        label,
        degree,
        group,
        disc,
        local,
        quad_subfield_discs,
    })
}

/// `#pairing d=<d> A=<label>`: the dataset is meant for `S_d x A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub d: usize,
    pub group: AbelianGroup,
}

impl Pairing {
    /// `|A| d!`: primes dividing it are wild throughout the dataset.
    pub fn modulus(&self) -> u64 {
        self.group.order() * factorial(self.d as u64)
    }
}

fn header_fields<'a>(line: &'a str, keyword: &str, line_no: usize) -> Result<Option<BTreeMap<&'a str, &'a str>>> {
    let Some(rest) = line.strip_prefix('#').and_then(|l| l.strip_prefix(keyword)) else {
        return Ok(None);
    };
    if !rest.starts_with(char::is_whitespace) {
        return Ok(None);
    }
    let mut out = BTreeMap::new();
    for token in rest.split_whitespace() {
        let (k, v) = token.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            reason: format!("expected key=value in #{keyword} header, found {token:?}"),
        })?;
        out.insert(k, v);
    }
    Ok(Some(out))
}

fn required<'a>(fields: &BTreeMap<&'a str, &'a str>, key: &str, line_no: usize) -> Result<&'a str> {
    fields.get(key).copied().ok_or_else(|| Error::Parse {
        line: line_no,
        reason: format!("header lacks {key}="),
    })
}

/// Validated records plus header metadata; immutable after ingest.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    /// Header lines verbatim, in file order.
    pub header: Vec<String>,
    pub pairing: Option<Pairing>,
    /// Largest `|disc|` up to which each group is complete.
    pub coverage: BTreeMap<String, u64>,
    pub records: Vec<FieldRecord>,
}

impl Dataset {
    pub fn parse(text: &str) -> Result<Self> {
        let mut data = Dataset::default();
        let mut pending = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if let Some(fields) = header_fields(line, "pairing", line_no)? {
                    let d: usize = required(&fields, "d", line_no)?.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        reason: "bad d in #pairing".into(),
                    })?;
                    let group: AbelianGroup = required(&fields, "A", line_no)?
                        .parse()
                        .map_err(|e: Error| Error::Parse {
                            line: line_no,
                            reason: e.to_string(),
                        })?;
                    data.pairing = Some(Pairing { d, group });
                } else if let Some(fields) = header_fields(line, "coverage", line_no)? {
                    let group: FieldGroup = required(&fields, "group", line_no)?
                        .parse()
                        .map_err(|e: Error| Error::Parse {
                            line: line_no,
                            reason: e.to_string(),
                        })?;
                    let max: u64 = required(&fields, "maxdisc", line_no)?.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        reason: "bad maxdisc in #coverage".into(),
                    })?;
                    data.coverage.insert(group.to_string(), max);
                }
                data.header.push(line.to_string());
                continue;
            }
            pending.push(parse_record(line, line_no)?);
        }
        let modulus = data.pairing.as_ref().map(Pairing::modulus);
        let mut labels = BTreeSet::new();
        for record in &pending {
            record.validate(modulus)?;
            if !labels.insert(record.label.clone()) {
                return Err(Error::InvalidRecord {
                    label: record.label.clone(),
                    reason: "duplicate label".into(),
                });
            }
            if let Some(pairing) = &data.pairing {
                let fits = match &record.group {
                    FieldGroup::Symmetric(d) => *d == pairing.d,
                    FieldGroup::Abelian(a) => *a == pairing.group,
                };
                if !fits {
                    return Err(Error::InvalidRecord {
                        label: record.label.clone(),
                        reason: format!(
                            "group {} is not part of the declared pairing S{} x {}",
                            record.group, pairing.d, pairing.group
                        ),
                    });
                }
            }
        }
        data.records = pending;
        Ok(data)
    }

    pub fn ingest(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn group_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.group.to_string()).or_insert(0) += 1;
        }
        out
    }

    pub fn get(&self, label: &str) -> Result<&FieldRecord> {
        self.records
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::UnknownRecord(label.to_string()))
    }

    pub fn symmetric(&self, d: usize) -> impl Iterator<Item = &FieldRecord> {
        self.records
            .iter()
            .filter(move |r| r.group == FieldGroup::Symmetric(d))
    }

    pub fn abelian<'a>(&'a self, group: &'a AbelianGroup) -> impl Iterator<Item = &'a FieldRecord> {
        self.records
            .iter()
            .filter(move |r| matches!(&r.group, FieldGroup::Abelian(a) if a == group))
    }

    pub fn coverage_of(&self, group: &FieldGroup) -> Option<u64> {
        self.coverage.get(&group.to_string()).copied()
    }

    /// Header lines, then records with symmetric groups first, each block
    /// by `|disc|`, signed disc and label.
    pub fn to_canonical_string(&self) -> String {
        let mut records: Vec<&FieldRecord> = self.records.iter().collect();
        records.sort_by(|a, b| {
            (!a.group.is_symmetric(), &a.group, a.abs_disc(), a.disc, &a.label)
                .cmp(&(!b.group.is_symmetric(), &b.group, b.abs_disc(), b.disc, &b.label))
        });
        let mut out = String::new();
        for h in &self.header {
            out.push_str(h);
            out.push('\n');
        }
        for r in records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Dataset::parse(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file() {
        let data = Dataset::parse("").unwrap();
        assert!(data.is_empty());
        assert!(data.group_counts().is_empty());
    }

    #[test]
    fn cubic_record() {
        let data = Dataset::parse("3.1.23.1;3;S3;-23;23:t(2.1);\n").unwrap();
        let r = &data.records[0];
        assert_eq!(r.valuation_at(23), 1);
        assert_eq!(r.valuation_at(5), 0);
        assert_eq!(r.to_string(), "3.1.23.1;3;S3;-23;23:t(2.1);");
    }

    #[test]
    fn local_product_must_match() {
        let err = Dataset::parse("q;2;C2;12;2:w(2);12\n").unwrap_err();
        assert!(matches!(err, Error::InvalidRecord { .. }), "{err}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Dataset::parse("# x\n3.1.23.1;3;S3;-23\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = Dataset::parse("a;3;S3;-23;23:x(2.1);\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Dataset::parse("#pairing d=three A=C2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn tame_and_wild_primes_are_checked() {
        assert!(Dataset::parse("a;3;S3;-44;2:t(2.1),11:t(2.1);\n").is_err());
        assert!(Dataset::parse("a;3;S3;-23;23:w(1);\n").is_err());
        assert!(Dataset::parse("a;3;S3;-44;2:w(2),11:t(2.1);\n").is_ok());
        // 3 is tame for a quadratic field on its own, wild once S3 x C2 is declared
        assert!(Dataset::parse("k;2;C2;-3;3:t(2);-3\n").is_ok());
        assert!(Dataset::parse("#pairing d=3 A=C2\nk;2;C2;-3;3:t(2);-3\n").is_err());
        assert!(Dataset::parse("#pairing d=3 A=C2\nk;2;C2;-3;3:w(1);-3\n").is_ok());
    }

    #[test]
    fn structural_checks() {
        assert!(Dataset::parse("a;4;S3;-23;23:t(2.1);\n").is_err());
        assert!(Dataset::parse("a;3;S3;49;7:t(3);\n").is_err());
        assert!(Dataset::parse("a;3;S3;-23;23:t(2.1);-23\n").is_err());
        assert!(Dataset::parse("k;2;C2;-4;2:w(2);-44\n").is_err());
        assert!(Dataset::parse("a;3;S3;-23;23:t(2.1);\na;3;S3;-31;31:t(2.1);\n").is_err());
        assert!(Dataset::parse("#pairing d=3 A=C3\nk;2;C2;-4;2:w(2);-4\n").is_err());
        assert!(Dataset::parse("k;4;C4;13;13:t(2.1.1);\n").is_err());
    }

    #[test]
    fn headers_are_kept() {
        let text = "# comment\n#pairing d=3 A=C2\n#coverage group=S3 maxdisc=50\nk;2;C2;-4;2:w(2);-4\na;3;S3;-23;23:t(2.1);\n";
        let data = Dataset::parse(text).unwrap();
        assert_eq!(data.pairing.as_ref().unwrap().modulus(), 12);
        assert_eq!(data.coverage["S3"], 50);
        assert_eq!(
            data.to_canonical_string(),
            "# comment\n#pairing d=3 A=C2\n#coverage group=S3 maxdisc=50\na;3;S3;-23;23:t(2.1);\nk;2;C2;-4;2:w(2);-4\n"
        );
        assert_eq!(data.group_counts()["C2"], 1);
    }
}
