//! Dyadic counts of `S_d` fields whose discriminant has prescribed
//! ramification in ranges `[Q_k, 2 Q_k)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::perm::CycleType;
use crate::Rational;

use super::record::{Dataset, FieldRecord};

/// One factor `q_k`: squarefree, in `[q, 2q)`, every prime divisor tamely
/// ramified with inertia in `classes`, weighted by `Q_k^{r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformityTerm {
    pub classes: Vec<CycleType>,
    pub q: u64,
    pub r: Rational,
}

/// Terms separated by `;`, each `classes:Q:r` with classes separated by
/// `|`, e.g. `2.1:1:1/1000;3:8:-999/1000`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformitySpec {
    pub terms: Vec<UniformityTerm>,
}

impl UniformitySpec {
    pub fn new(d: usize, terms: Vec<UniformityTerm>) -> Result<Self> {
        let mut seen: Vec<&CycleType> = Vec::new();
        for term in &terms {
            if term.q == 0 {
                return Err(Error::InvalidArgument("Q_k must be positive".into()));
            }
            if term.classes.is_empty() {
                return Err(Error::InvalidArgument("a term needs at least one class".into()));
            }
            for c in &term.classes {
                if c.degree() != d {
                    return Err(Error::DegreeMismatch {
                        expected: d as u64,
                        found: c.degree() as u64,
                    });
                }
                if c.is_identity() {
                    return Err(Error::InvalidArgument("the identity class is unramified".into()));
                }
                if seen.contains(&c) {
                    return Err(Error::InvalidArgument(format!(
                        "class {c} appears in more than one term"
                    )));
                }
                seen.push(c);
            }
        }
        Ok(UniformitySpec { terms })
    }

    pub fn parse(d: usize, text: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidArgument(format!("uniformity spec {text:?}: {reason}"));
        let mut terms = Vec::new();
        for chunk in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let pieces: Vec<&str> = chunk.split(':').map(str::trim).collect();
            if pieces.len() != 3 {
                return Err(bad(format!("term {chunk:?} is not classes:Q:r")));
            }
            let classes = pieces[0]
                .split('|')
                .map(CycleType::from_str)
                .collect::<Result<Vec<_>>>()?;
            let q: u64 = pieces[1].parse().map_err(|_| bad(format!("bad Q {:?}", pieces[1])))?;
            let r = Rational::from_str(pieces[2]).map_err(|_| bad(format!("bad exponent {:?}", pieces[2])))?;
            terms.push(UniformityTerm { classes, q, r });
        }
        Self::new(d, terms)
    }
}

impl fmt::Display for UniformitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let classes: Vec<String> = t.classes.iter().map(CycleType::dotted).collect();
                format!("{}:{}:{}", classes.join("|"), t.q, t.r)
            })
            .collect();
        write!(f, "{}", terms.join(";"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityResult {
    pub x: u64,
    pub count: u64,
    /// Fields with `|disc| < X`, before any condition.
    pub fields: u64,
    /// `X prod_k Q_k^{r_k}`.
    pub normaliser: f64,
    pub ratio: f64,
}

/// Number of subsets of `primes` whose product lies in `[q, 2q)`.
fn products_in_range(primes: &[u64], q: u64) -> u64 {
    fn walk(primes: &[u64], acc: u64, q: u64) -> u64 {
        let here = u64::from(acc >= q && acc < 2 * q);
        let mut total = here;
        for (i, &p) in primes.iter().enumerate() {
            let next = acc.saturating_mul(p);
            if next >= 2 * q {
                continue;
            }
            total += walk(&primes[i + 1..], next, q);
        }
        total
    }
    walk(primes, 1, q)
}

/// Tuples `(q_1, ..., q_m)` allowed for one field.
pub fn tuples_for_field(record: &FieldRecord, d: usize, spec: &UniformitySpec) -> u64 {
    let bad_primes = factorial(d as u64);
    spec.terms
        .iter()
        .map(|term| {
            let primes: Vec<u64> = record
                .local
                .iter()
                .filter(|l| bad_primes.gcd(&l.prime) == 1)
                .filter(|l| l.inertia().is_some_and(|c| term.classes.contains(c)))
                .map(|l| l.prime)
                .collect();
            products_in_range(&primes, term.q)
        })
        .product()
}

pub fn measure_uniformity(dataset: &Dataset, d: usize, spec: &UniformitySpec, x: u64) -> Result<UniformityResult> {
    if let Some(c) = spec.terms.iter().flat_map(|t| &t.classes).find(|c| c.degree() != d) {
        return Err(Error::DegreeMismatch {
            expected: d as u64,
            found: c.degree() as u64,
        });
    }
    let mut count = 0;
    let mut fields = 0;
    for record in dataset.symmetric(d).filter(|r| r.abs_disc() < x) {
        fields += 1;
        count += tuples_for_field(record, d, spec);
    }
    let mut normaliser = x as f64;
    for term in &spec.terms {
        let r = *term.r.numer() as f64 / *term.r.denom() as f64;
        normaliser *= (term.q as f64).powf(r);
    }
    Ok(UniformityResult {
        x,
        count,
        fields,
        normaliser,
        ratio: count as f64 / normaliser,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> Dataset {
        Dataset::parse(
            "a;3;S3;-23;23:t(2.1);\n\
             b;3;S3;-3211;13:t(3),19:t(2.1);\n\
             c;3;S3;-539;7:t(3),11:t(2.1);\n\
             e;3;S3;-121;11:t(3);\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_and_display() {
        let spec = UniformitySpec::parse(3, "2.1:1:1/1000;3:8:-999/1000").unwrap();
        assert_eq!(spec.terms.len(), 2);
        assert_eq!(spec.terms[1].r, Rational::new(-999, 1000));
        assert_eq!(spec.to_string(), "2.1:1:1/1000;3:8:-999/1000");
        let spec4 = UniformitySpec::parse(4, "2.1.1|3.1:1:0;2.2|4:4:-1").unwrap();
        assert_eq!(spec4.terms[0].classes.len(), 2);
    }

    #[test]
    fn overlapping_classes_are_rejected() {
        assert!(UniformitySpec::parse(3, "2.1:1:0;2.1|3:2:0").is_err());
        assert!(UniformitySpec::parse(3, "2.1.1:1:0").is_err());
        assert!(UniformitySpec::parse(3, "1.1.1:1:0").is_err());
        assert!(UniformitySpec::parse(3, "3:0:0").is_err());
        assert!(UniformitySpec::parse(3, "3:1").is_err());
    }

    #[test]
    fn unit_ranges_count_all_fields() {
        let spec = UniformitySpec::parse(3, "2.1:1:0;3:1:0").unwrap();
        let r = measure_uniformity(&data(), 3, &spec, 10_000).unwrap();
        assert_eq!(r.count, 4);
        assert_eq!(r.fields, 4);
        assert_eq!(r.ratio, 4.0 / 10_000.0);
    }

    #[test]
    fn totally_ramified_prime_in_dyadic_range() {
        let spec = UniformitySpec::parse(3, "3:7:0").unwrap();
        let r = measure_uniformity(&data(), 3, &spec, 10_000).unwrap();
        // 13 for b, 7 for c, 11 for e all lie in [7, 14)
        assert_eq!(r.count, 3);
        let r = measure_uniformity(&data(), 3, &spec, 1000).unwrap();
        assert_eq!(r.count, 2);
    }

    #[test]
    fn subset_products() {
        assert_eq!(products_in_range(&[5, 7, 11], 1), 1);
        assert_eq!(products_in_range(&[5, 7, 11], 35), 2);
        assert_eq!(products_in_range(&[5, 7, 11], 5), 2);
        assert_eq!(products_in_range(&[], 2), 0);
    }
}
