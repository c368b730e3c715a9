//! Counting composita `FK` with `Gal = S_d x A` by discriminant.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arith::factorial;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

use super::compose::{compose_disc, linearly_disjoint, ComposedDisc, WildOverrides};
use super::record::{Dataset, FieldGroup, FieldRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct CensusResult {
    pub x: u128,
    /// Truncation parameter for `N_Y`; `None` for the full discriminant.
    pub y: Option<u64>,
    /// Disjoint pairs with exactly known discriminant below `X`.
    pub count: u64,
    /// Disjoint pairs with an unresolved wild overlap whose discriminant
    /// may lie below `X`; neither counted nor dropped silently.
    pub flagged_wild_pairs: u64,
    /// Pairs below `X` rejected because `K` contains `Q(sqrt(Disc F))`.
    pub non_disjoint: u64,
    /// `count / X^{1/|A|}`.
    pub fit_constant: f64,
    /// Whether the dataset's coverage headers guarantee every pair below `X`.
    pub complete: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
struct Tally {
    count: u64,
    flagged: u64,
    non_disjoint: u64,
}

impl Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally {
            count: self.count + other.count,
            flagged: self.flagged + other.flagged,
            non_disjoint: self.non_disjoint + other.non_disjoint,
        }
    }
}

/// Whether `(coverage + 1)^k >= x`, i.e. every field with `|disc|^k < x`
/// lies inside the coverage range.
fn covers(coverage: u64, k: u64, x: u128) -> bool {
    BigUint::from(coverage + 1).pow(k as u32) >= BigUint::from(x)
}

fn completeness(dataset: &Dataset, d: usize, group: &AbelianGroup, x: u128) -> (bool, Vec<String>) {
    let mut warnings = Vec::new();
    let needs = [
        (FieldGroup::Symmetric(d), group.order()),
        (FieldGroup::Abelian(group.clone()), d as u64),
    ];
    for (g, k) in needs {
        match dataset.coverage_of(&g) {
            None => warnings.push(format!("no coverage declared for {g}; completeness not asserted")),
            Some(cov) if !covers(cov, k, x) => warnings.push(format!(
                "{g} is covered up to |disc| <= {cov}, but X = {x} needs fields up to X^(1/{k})"
            )),
            Some(_) => {}
        }
    }
    (warnings.is_empty(), warnings)
}

fn pairs<'a>(
    dataset: &'a Dataset,
    d: usize,
    group: &'a AbelianGroup,
) -> (Vec<&'a FieldRecord>, Vec<&'a FieldRecord>) {
    (dataset.symmetric(d).collect(), dataset.abelian(group).collect())
}

fn tally<F>(dataset: &Dataset, d: usize, group: &AbelianGroup, x: u128, overrides: &WildOverrides, size: F) -> Result<Tally>
where
    F: Fn(&ComposedDisc) -> Option<BigUint> + Sync,
{
    let (fs, ks) = pairs(dataset, d, group);
    let x = BigUint::from(x);
    fs.par_iter()
        .map(|f| {
            let mut t = Tally::default();
            for k in &ks {
                let composed = compose_disc(f, k, overrides)?;
                let below = match size(&composed) {
                    Some(m) => Some(m < x),
                    None if composed.lower_bound() < x => None,
                    None => Some(false),
                };
                if below == Some(false) {
                    continue;
                }
                if !linearly_disjoint(f, k)? {
                    t.non_disjoint += 1;
                } else if below.is_some() {
                    t.count += 1;
                } else {
                    t.flagged += 1;
                }
            }
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

fn finish(dataset: &Dataset, d: usize, group: &AbelianGroup, x: u128, y: Option<u64>, t: Tally) -> CensusResult {
    let (complete, warnings) = completeness(dataset, d, group, x);
    let root = (x as f64).powf(1.0 / group.order() as f64);
    CensusResult {
        x,
        y,
        count: t.count,
        flagged_wild_pairs: t.flagged,
        non_disjoint: t.non_disjoint,
        fit_constant: t.count as f64 / root,
        complete,
        warnings,
    }
}

fn check_groups(d: usize, group: &AbelianGroup) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("S_d needs d >= 3, got {d}")));
    }
    if group.is_trivial() {
        return Err(Error::InvalidArgument("A must be nontrivial".into()));
    }
    Ok(())
}

/// `N(X, S_d x A)`: disjoint pairs `(F, K)` with `|Disc(FK)| < X`.
pub fn count_n(dataset: &Dataset, d: usize, group: &AbelianGroup, x: u128, overrides: &WildOverrides) -> Result<CensusResult> {
    check_groups(d, group)?;
    let t = tally(dataset, d, group, x, overrides, ComposedDisc::magnitude)?;
    Ok(finish(dataset, d, group, x, None, t))
}

/// `N_Y(X, S_d x A)`, counting by `Disc_Y(FK)`; requires `Y > |A| d!`.
pub fn count_n_truncated(
    dataset: &Dataset,
    d: usize,
    group: &AbelianGroup,
    x: u128,
    y: u64,
    overrides: &WildOverrides,
) -> Result<CensusResult> {
    check_groups(d, group)?;
    let threshold = group.order() * factorial(d as u64);
    if y <= threshold {
        return Err(Error::InvalidArgument(format!(
            "Y must exceed |A| d! = {threshold}, got {y}"
        )));
    }
    let t = tally(dataset, d, group, x, overrides, |c| c.truncated_magnitude(y))?;
    Ok(finish(dataset, d, group, x, Some(y), t))
}

/// `|Disc(FK)|` for every disjoint pair with exact discriminant, sorted.
pub fn composita_discriminants(
    dataset: &Dataset,
    d: usize,
    group: &AbelianGroup,
    overrides: &WildOverrides,
) -> Result<Vec<(String, String, BigUint)>> {
    let (fs, ks) = pairs(dataset, d, group);
    let mut out = Vec::new();
    for f in &fs {
        for k in &ks {
            if !linearly_disjoint(f, k)? {
                continue;
            }
            if let Some(m) = compose_disc(f, k, overrides)?.magnitude() {
                out.push((f.label.clone(), k.label.clone(), m));
            }
        }
    }
    out.sort_by(|a, b| a.2.cmp(&b.2).then_with(|| (&a.0, &a.1).cmp(&(&b.0, &b.1))));
    Ok(out)
}

impl CensusResult {
    pub const TSV_COLUMNS: [&'static str; 7] =
        ["X", "Y", "count", "flagged_wild", "non_disjoint", "fit_constant", "complete"];

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{:.6}\t{}",
            self.x,
            self.y.map_or("-".to_string(), |y| y.to_string()),
            self.count,
            self.flagged_wild_pairs,
            self.non_disjoint,
            self.fit_constant,
            self.complete
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Dataset {
        Dataset::parse(
            "#pairing d=3 A=C2\n#coverage group=S3 maxdisc=300\n#coverage group=C2 maxdisc=40\n\
             f;3;S3;-23;23:t(2.1);\ng;3;S3;-31;31:t(2.1);\n\
             k;2;C2;-4;2:w(2);-4\nm;2;C2;-8;2:w(3);-8\nn;2;C2;-23;23:t(2);-23\n",
        )
        .unwrap()
    }

    #[test]
    fn small_x_gives_zero() {
        let r = count_n(&toy(), 3, &"C2".parse().unwrap(), 1, &WildOverrides::new()).unwrap();
        assert_eq!(r.count, 0);
        assert_eq!(r.flagged_wild_pairs, 0);
    }

    #[test]
    fn single_pair() {
        let data = Dataset::parse("f;3;S3;-23;23:t(2.1);\nk;2;C2;-4;2:w(2);-4\n").unwrap();
        let c2 = "C2".parse().unwrap();
        let r = count_n(&data, 3, &c2, 40000, &WildOverrides::new()).unwrap();
        assert_eq!(r.count, 1);
        assert!(!r.complete);
        assert_eq!(r.warnings.len(), 2);
        let r = count_n(&data, 3, &c2, 33856, &WildOverrides::new()).unwrap();
        assert_eq!(r.count, 0);
    }

    #[test]
    fn disjointness_and_truncation() {
        let data = toy();
        let c2: AbelianGroup = "C2".parse().unwrap();
        let none = WildOverrides::new();
        let big = u128::MAX;
        let r = count_n(&data, 3, &c2, big, &none).unwrap();
        // (f, n) shares Q(sqrt(-23)); every other pair is disjoint
        assert_eq!(r.non_disjoint, 1);
        assert_eq!(r.count, 5);
        // (g, n): 23 ramifies in K only, so no truncation effect
        let t = count_n_truncated(&data, 3, &c2, big, 13, &none).unwrap();
        assert_eq!(t.count, r.count);
        assert!(count_n_truncated(&data, 3, &c2, big, 12, &none).is_err());
        // 23^2 * 4^3 = 33856 for (f, k); 31^2 * 64 = 61504 for (g, k)
        let r = count_n(&data, 3, &c2, 61505, &none).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.complete);
    }

    #[test]
    fn listing() {
        let list = composita_discriminants(&toy(), 3, &"C2".parse().unwrap(), &WildOverrides::new()).unwrap();
        assert_eq!(list.len(), 5);
        assert_eq!(list[0].2, BigUint::from(33856u32));
    }
}
