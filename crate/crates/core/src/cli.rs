//! The `malle` command line.
//!
//! Exit codes: 0 on success, 1 when a computation or validation fails, 2 on
//! usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::census::{
    compose_disc, count_n, count_n_truncated, linearly_disjoint, measure_uniformity, CensusResult,
    Dataset, UniformitySpec, WildOverrides,
};
use crate::error::{Error, Result};
use crate::group::{abelian_counting_constants, malle_invariants_product, AbelianGroup};
use crate::index::{beta, default_epsilon, doubly_ramified_classes, hypothesis_b_margin, tail_series, ExponentMap, TailParams, DEFAULT_TAIL_FLOOR};
use crate::splitting::generate_table;
use crate::verify::{
    beta_suite, equality_case_groups, equality_case_suite, index_inequality_suite, malle_suite,
    oracle_suite, SuiteReport,
};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// `r = epsilon` on the mildest classes, `-1 + epsilon` (d = 3, 4) or
    /// `-1/20 + epsilon` (d = 5) elsewhere.
    Paper,
    /// `r = 0` everywhere.
    Zero,
}

#[derive(Debug, Parser)]
#[command(name = "malle", version, about = "Index calculus and field census for S_d x A composita")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Malle's a and b for S_d x A and the abelian constants a_A, b_A.
    Invariants {
        #[arg(long)]
        d: usize,
        #[arg(long = "A")]
        a: AbelianGroup,
    },
    /// Discriminant valuations at a tame prime ramified in K (A cyclic of prime order).
    DeltaTable {
        #[arg(long)]
        d: usize,
        #[arg(long = "A")]
        a: AbelianGroup,
    },
    /// Exhaustive index-inequality, equality-case, Malle and oracle checks.
    VerifyLemmas {
        #[arg(long, default_value_t = 5)]
        dmax: usize,
        #[arg(long, default_value_t = 8)]
        amax: u64,
    },
    /// beta, per-class margins and the dyadic tail series.
    TailBound {
        #[arg(long)]
        d: usize,
        #[arg(long = "A")]
        a: AbelianGroup,
        #[arg(long, value_enum, default_value_t = Preset::Paper)]
        preset: Preset,
        #[arg(long, default_value = "1/1000")]
        epsilon: Rational,
        #[arg(long = "Y")]
        y: f64,
        /// Number of classes in the tail sum; defaults to the number of
        /// classes ramified in both factors.
        #[arg(long)]
        m: Option<u32>,
    },
    /// N(X, S_d x A) and N_Y(X, S_d x A) on a dataset.
    Census {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long = "A")]
        a: AbelianGroup,
        /// One or more bounds; `1e7` is accepted.
        #[arg(long = "X", num_args = 1.., required = true, value_parser = parse_bound)]
        x: Vec<u128>,
        #[arg(long = "Y")]
        y: Option<u64>,
        #[arg(long)]
        wild_overrides: Option<PathBuf>,
    },
    /// Dyadic counts of S_d fields with prescribed ramification.
    Uniformity {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        d: usize,
        /// `classes:Q:r` terms separated by `;`, classes separated by `|`.
        #[arg(long)]
        uniformity_spec: String,
        #[arg(long = "X", num_args = 1.., required = true, value_parser = parse_bound)]
        x: Vec<u128>,
    },
    /// Discriminant of one compositum FK.
    Compose {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long = "F")]
        f: String,
        #[arg(long = "K")]
        k: String,
        #[arg(long)]
        wild_overrides: Option<PathBuf>,
    },
}

/// Integers, optionally written as `<m>e<k>` or `<m>^<k>`.
pub fn parse_bound(text: &str) -> std::result::Result<u128, String> {
    let text = text.trim();
    let bad = || format!("{text:?} is not a positive integer bound");
    if let Some((m, k)) = text.split_once(['e', 'E']) {
        let m: u128 = m.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        return 10u128.checked_pow(k).and_then(|p| p.checked_mul(m)).ok_or_else(bad);
    }
    if let Some((b, k)) = text.split_once('^') {
        let b: u128 = b.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        return b.checked_pow(k).ok_or_else(bad);
    }
    text.parse().map_err(|_| bad())
}

struct Output {
    format: Format,
    lines: Vec<String>,
}

impl Output {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// `key value` pairs: a two-column table in TSV mode, aligned text otherwise.
    fn pairs(&mut self, pairs: &[(&str, String)]) {
        match self.format {
            Format::Tsv => {
                self.line("key\tvalue");
                for (k, v) in pairs {
                    self.line(format!("{k}\t{v}"));
                }
            }
            Format::Text => {
                let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in pairs {
                    self.line(format!("{k:<w$}  {v}"));
                }
            }
        }
    }
}

fn load_overrides(path: &Option<PathBuf>) -> Result<WildOverrides> {
    match path {
        Some(p) => WildOverrides::load(p),
        None => Ok(WildOverrides::new()),
    }
}

fn exponents(d: usize, preset: Preset, epsilon: Rational) -> Result<ExponentMap> {
    match preset {
        Preset::Paper => ExponentMap::sieve_preset(d, epsilon),
        Preset::Zero => Ok(ExponentMap::constant(d, Rational::from_integer(0))),
    }
}

fn census_rows(out: &mut Output, results: &[CensusResult]) {
    out.line(CensusResult::TSV_COLUMNS.join("\t"));
    for r in results {
        out.line(r.tsv_row());
    }
    let mut seen = std::collections::BTreeSet::new();
    for w in results.iter().flat_map(|r| &r.warnings).filter(|w| seen.insert(*w)) {
        out.line(format!("# warning: {w}"));
    }
}

/// Returns `Ok(false)` when a check ran but failed.
fn execute(command: Command, out: &mut Output) -> Result<bool> {
    match command {
        Command::Invariants { d, a } => {
            let m = malle_invariants_product(d, &a)?;
            let minimal: Vec<String> = m
                .minimal_orbits
                .iter()
                .map(|orbit| orbit.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
                .collect();
            let mut pairs = vec![
                ("group", format!("S{d} x {a}")),
                ("a", m.a.to_string()),
                ("exponent", m.exponent.to_string()),
                ("b", m.b.to_string()),
                ("minimal_classes", minimal.join("; ")),
            ];
            if !a.is_trivial() {
                let c = abelian_counting_constants(&a)?;
                pairs.push(("a_A", c.a_a.to_string()));
                pairs.push(("b_A", c.b_a.to_string()));
            }
            out.pairs(&pairs);
        }
        Command::DeltaTable { d, a } => {
            let table = generate_table(d, &a)?;
            let text = match out.format {
                Format::Tsv => table.to_tsv(),
                Format::Text => table.to_aligned(),
            };
            for l in text.lines() {
                out.line(l);
            }
        }
        Command::VerifyLemmas { dmax, amax } => {
            let mut ok = true;
            out.line("status\tsuite\tchecks\tseconds");
            for (report, secs) in timed_suites(dmax, amax) {
                ok &= report.passed();
                let status = if report.passed() { "PASS" } else { "FAIL" };
                out.line(format!("{status}\t{}\t{}\t{secs:.3}", report.name, report.checked));
                for f in report.failures.iter().take(5) {
                    out.line(format!("# {f}"));
                }
            }
            out.line(if ok { "# all suites passed" } else { "# some suites failed" });
            return Ok(ok);
        }
        Command::TailBound {
            d,
            a,
            preset,
            epsilon,
            y,
            m,
        } => {
            let r = exponents(d, preset, epsilon)?;
            let params = TailParams {
                d,
                group: a.clone(),
                r: r.clone(),
                epsilon,
                y,
            };
            let report = beta(&params)?;
            let m = m.unwrap_or(doubly_ramified_classes(d, &a).len() as u32);
            let series = tail_series(report.beta, epsilon, m, y, DEFAULT_TAIL_FLOOR);
            out.line("class\ttheta\tr\tvalue");
            for t in &report.terms {
                out.line(t.to_string());
            }
            out.line("sd_class\tmargin");
            for (g, margin) in hypothesis_b_margin(d, &a, &r)? {
                out.line(format!("{g}\t{margin}"));
            }
            let mut pairs = vec![
                ("beta", report.beta.to_string()),
                ("argmax", report.argmax.to_string()),
                ("beta_negative", (report.beta < Rational::from_integer(0)).to_string()),
                ("m", m.to_string()),
            ];
            match &series {
                Ok(s) => {
                    pairs.push(("series", format!("{:.6e}", s.value)));
                    pairs.push(("comparator", format!("{:.6e}", s.comparator)));
                    pairs.push(("ratio", format!("{:.6}", s.ratio())));
                    pairs.push(("start", s.start.to_string()));
                }
                Err(e) => pairs.push(("series", e.to_string())),
            }
            out.pairs(&pairs);
            return Ok(report.beta < Rational::from_integer(0));
        }
        Command::Census {
            dataset,
            d,
            a,
            x,
            y,
            wild_overrides,
        } => {
            let data = Dataset::ingest(&dataset)?;
            let overrides = load_overrides(&wild_overrides)?;
            let mut results = Vec::new();
            for &bound in &x {
                results.push(match y {
                    Some(y) => count_n_truncated(&data, d, &a, bound, y, &overrides)?,
                    None => count_n(&data, d, &a, bound, &overrides)?,
                });
            }
            census_rows(out, &results);
        }
        Command::Uniformity {
            dataset,
            d,
            uniformity_spec,
            x,
        } => {
            let data = Dataset::ingest(&dataset)?;
            let spec = UniformitySpec::parse(d, &uniformity_spec)?;
            out.line("X\tfields\tcount\tnormaliser\tratio");
            for &bound in &x {
                let bound = u64::try_from(bound)
                    .map_err(|_| Error::InvalidArgument(format!("X = {bound} is too large")))?;
                let r = measure_uniformity(&data, d, &spec, bound)?;
                out.line(format!(
                    "{}\t{}\t{}\t{:.6e}\t{:.6e}",
                    r.x, r.fields, r.count, r.normaliser, r.ratio
                ));
            }
        }
        Command::Compose {
            dataset,
            f,
            k,
            wild_overrides,
        } => {
            let data = Dataset::ingest(&dataset)?;
            let overrides = load_overrides(&wild_overrides)?;
            let (fr, kr) = (data.get(&f)?, data.get(&k)?);
            let c = compose_disc(fr, kr, &overrides)?;
            let disjoint = linearly_disjoint(fr, kr)?;
            out.line("p\tv_F\tv_K\tdelta\tv_FK\tsource");
            for p in &c.primes {
                out.line(format!(
                    "{}\t{}\t{}\t{}\t{}\t{:?}",
                    p.prime,
                    p.v_f,
                    p.v_k,
                    p.delta.map_or("?".into(), |v| v.to_string()),
                    p.valuation(c.d, c.order).map_or("?".into(), |v| v.to_string()),
                    p.source
                ));
            }
            out.pairs(&[
                ("disc_FK", c.to_string()),
                ("lower_bound", c.lower_bound().to_string()),
                ("linearly_disjoint", disjoint.to_string()),
            ]);
        }
    }
    Ok(true)
}

fn timed_suites(dmax: usize, amax: u64) -> Vec<(SuiteReport, f64)> {
    let suites: Vec<Box<dyn Fn() -> SuiteReport>> = vec![
        Box::new(move || oracle_suite(dmax, amax)),
        Box::new(move || index_inequality_suite(dmax, amax)),
        Box::new(|| equality_case_suite(&equality_case_groups())),
        Box::new(move || malle_suite(amax)),
        Box::new(move || beta_suite(amax, default_epsilon())),
    ];
    suites
        .iter()
        .map(|suite| {
            let start = Instant::now();
            let report = suite();
            (report, start.elapsed().as_secs_f64())
        })
        .collect()
}

/// Parses `args` (including the program name), runs the command and writes
/// its output. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let mut out = Output {
        format: cli.format,
        lines: Vec::new(),
    };
    let result = execute(cli.command, &mut out);
    for l in &out.lines {
        let _ = writeln!(stdout, "{l}");
    }
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
