//! Command-line front end.
//!
//! CSV column contracts:
//! - `pairing`: `m_1,..,m_k,value` (plus `oracle` with `--oracle`)
//! - `integrate`, `euler`, `signature`, `charnum`: `value`
//! - `index`: `value` (or `index,even,odd` with `--show-forms`)
//! - `betti`: `degree,betti`
//! - `presentation`: `degree,dim_invariants,dim_ann,betti`
//! - `oracle-check`: `k,n,exponents,value,oracle`

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::charclass::{
    characteristic_number, euler_characteristic, index_group, index_group_exterior, signature, ClassName,
    NamedClassSeries,
};
use crate::config::{load_config_file, model_to_config};
use crate::error::{Error, Result};
use crate::presentation::{pairing_signature, Presentation};
use crate::quotient::{
    chern_pairing_table, degree_matching_exponents, grassmannian_model, integrate_group, integrate_torus, GroupRoots,
    QuotientModel, SplitBundle,
};
use crate::ratpoly::{format_rational, format_rational_latex, parse_rational, Rational, TruncatedPolynomial};
use crate::schubert::oracle_chern_pairing;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "abelianize",
    version,
    about = "Exact cohomology computations on symplectic quotients via their torus quotients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Grassmannian G(K, N) of K-planes in C^N.
    #[arg(long, num_args = 2, value_names = ["K", "N"], conflicts_with = "config", required_unless_present = "config")]
    pub grassmannian: Option<Vec<usize>>,
    /// JSON model file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Render fractions as LaTeX.
    #[arg(long)]
    pub latex: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chern-class pairings on a Grassmannian-type quotient.
    Pairing {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated exponents of the elementary symmetric classes; repeatable.
        #[arg(long)]
        exps: Vec<String>,
        /// Every exponent vector of full degree.
        #[arg(long, conflicts_with = "exps")]
        all: bool,
        /// Compare against the Schubert-calculus oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Integrate a Weyl-invariant lift over the quotient.
    Integrate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        poly: String,
        /// Integrate over the torus quotient instead.
        #[arg(long, conflicts_with = "subgroup")]
        torus: bool,
        /// Integrate over the quotient by the configured subgroup.
        #[arg(long)]
        subgroup: bool,
    },
    /// Betti numbers of the quotient.
    Betti {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        subgroup: bool,
    },
    /// Invariants, annihilator and pairing ranks degree by degree.
    Presentation {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        subgroup: bool,
    },
    /// Euler characteristic.
    Euler {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Signature from the L-class.
    Signature {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Also compute it from the middle pairing matrix; exit 3 on disagreement.
        #[arg(long)]
        cross_check: bool,
    },
    /// Characteristic number of a multiplicative class.
    Charnum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// total-chern, todd, l-class, chern-character-exp or custom.
        #[arg(long)]
        class: ClassName,
        /// Comma-separated series coefficients for `custom`; defaults to the config's custom_series.
        #[arg(long)]
        coeffs: Option<String>,
    },
    /// Index of the Dolbeault operator twisted by a bundle.
    Index {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Split bundle as `ROOT[:MULT];ROOT[:MULT];..`; the trivial line bundle by default.
        #[arg(long)]
        bundle: Option<String>,
        #[arg(long)]
        subgroup: bool,
        /// Use the opposite choice of positive roots.
        #[arg(long)]
        opposite_positive: bool,
        /// Also print the even and odd exterior-power sums.
        #[arg(long)]
        show_forms: bool,
    },
    /// Compare every full-degree pairing against the Schubert oracle.
    OracleCheck {
        #[arg(long, num_args = 2, value_names = ["K", "N"])]
        grassmannian: Option<Vec<usize>>,
        #[arg(long, default_value_t = 3, conflicts_with = "grassmannian")]
        k_max: usize,
        #[arg(long, default_value_t = 7, conflicts_with = "grassmannian")]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the model as a JSON config with explicit root data.
    ExportConfig {
        #[command(flatten)]
        model: ModelArgs,
    },
}

struct Loaded {
    model: QuotientModel,
    custom_series: Option<Vec<Rational>>,
}

impl ModelArgs {
    fn load(&self) -> Result<Loaded> {
        match (&self.grassmannian, &self.config) {
            (Some(kn), _) => Ok(Loaded {
                model: grassmannian_model(kn[0], kn[1]).map_err(|e| Error::config("--grassmannian", e.to_string()))?,
                custom_series: None,
            }),
            (None, Some(path)) => {
                let cfg = load_config_file(path)?;
                Ok(Loaded {
                    model: cfg.to_model()?,
                    custom_series: cfg.custom_series()?,
                })
            }
            (None, None) => Err(Error::config("--grassmannian", "a model is required")),
        }
    }
}

impl OutputArgs {
    fn fmt(&self, r: &Rational) -> String {
        if self.latex {
            format_rational_latex(r)
        } else {
            format_rational(r)
        }
    }

    fn scalar(&self, r: &Rational) -> String {
        match self.format {
            Format::Text => format!("{}\n", self.fmt(r)),
            Format::Csv => format!("value\n{}\n", self.fmt(r)),
        }
    }
}

fn which(subgroup: bool) -> GroupRoots {
    if subgroup {
        GroupRoots::ComplementOfSubgroup
    } else {
        GroupRoots::All
    }
}

fn parse_exponents(s: &str, k: usize) -> Result<Vec<u64>> {
    let parts: Vec<u64> = s
        .split(',')
        .enumerate()
        .map(|(i, p)| {
            p.trim().parse().map_err(|_| {
                Error::config(
                    format!("--exps[{i}]"),
                    format!("expected a nonnegative integer, got {p:?}"),
                )
            })
        })
        .collect::<Result<_>>()?;
    if parts.len() != k {
        return Err(Error::Arity {
            what: "--exps",
            expected: k,
            got: parts.len(),
        });
    }
    Ok(parts)
}

fn parse_bundle(m: &QuotientModel, spec: Option<&str>) -> Result<SplitBundle> {
    match spec.filter(|s| !s.trim().is_empty()) {
        None => Ok(SplitBundle::trivial(m.ring(), 1)),
        Some(s) => SplitBundle::parse(m.ring(), s).map_err(|e| Error::config("--bundle", e.to_string())),
    }
}

fn grassmannian_shape(m: &QuotientModel) -> Result<(usize, usize)> {
    let t = m.ring().truncations();
    match t.first() {
        Some(&n) if t.iter().all(|&x| x == n) => Ok((t.len(), n as usize)),
        _ => Err(Error::config("--oracle", "the oracle needs equal truncation exponents")),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotPalindromic(_) => EXIT_FAILURE,
        _ => EXIT_CONFIG,
    }
}

/// Output text plus exit status.
struct Outcome {
    stdout: String,
    stderr: String,
    status: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            status: EXIT_OK,
        }
    }
}

fn pairing(model: &ModelArgs, output: &OutputArgs, exps: &[String], all: bool, oracle: bool) -> Result<Outcome> {
    let m = model.load()?.model;
    let k = m.ring().variable_count();
    let rows: Vec<Vec<u64>> = if all {
        let dim = m.quotient_dimension(GroupRoots::All)?;
        degree_matching_exponents(k, dim as u64)
    } else if exps.is_empty() {
        return Err(Error::config("--exps", "give --exps or --all"));
    } else {
        exps.iter().map(|s| parse_exponents(s, k)).collect::<Result<_>>()?
    };
    let values = chern_pairing_table(&m, &rows)?;
    let oracle_values = if oracle {
        let (k, n) = grassmannian_shape(&m)?;
        Some(
            rows.par_iter()
                .map(|e| oracle_chern_pairing(k, n, e))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let mut out = String::new();
    let mut err = String::new();
    let single = rows.len() == 1 && !all;
    if output.format == Format::Csv {
        let mut header: Vec<String> = (1..=k).map(|i| format!("m_{i}")).collect();
        header.push("value".into());
        if oracle {
            header.push("oracle".into());
        }
        out.push_str(&header.join(","));
        out.push('\n');
    }
    let mut mismatches = 0;
    for (i, (e, v)) in rows.iter().zip(&values).enumerate() {
        let o = oracle_values.as_ref().map(|ov| &ov[i]);
        if let Some(o) = o {
            if o != v {
                mismatches += 1;
                err.push_str(&format!(
                    "mismatch at ({}): abelianization {}, oracle {}\n",
                    join(e),
                    format_rational(v),
                    format_rational(o)
                ));
            }
        }
        match output.format {
            Format::Csv => {
                out.push_str(&format!("{},{}", join(e), output.fmt(v)));
                if let Some(o) = o {
                    out.push_str(&format!(",{}", output.fmt(o)));
                }
            }
            Format::Text if single && o.is_none() => out.push_str(&output.fmt(v)),
            Format::Text => {
                out.push_str(&format!("{}: {}", join(e), output.fmt(v)));
                if let Some(o) = o {
                    out.push_str(&format!(" (oracle {})", output.fmt(o)));
                }
            }
        }
        out.push('\n');
    }
    Ok(Outcome {
        stdout: out,
        stderr: err,
        status: if mismatches > 0 { EXIT_MISMATCH } else { EXIT_OK },
    })
}

fn betti(model: &ModelArgs, output: &OutputArgs, subgroup: bool) -> Result<Outcome> {
    let m = model.load()?.model;
    let b = Presentation::new(&m, which(subgroup))?.poincare_polynomial()?;
    Ok(Outcome::ok(match output.format {
        Format::Text => format!("{}\n", join(&b)),
        Format::Csv => {
            let mut s = String::from("degree,betti\n");
            for (d, x) in b.iter().enumerate() {
                s.push_str(&format!("{d},{x}\n"));
            }
            s
        }
    }))
}

fn presentation(model: &ModelArgs, output: &OutputArgs, subgroup: bool) -> Result<Outcome> {
    let m = model.load()?.model;
    let report = Presentation::new(&m, which(subgroup))?.report()?;
    Ok(Outcome::ok(match output.format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
    }))
}

fn signature_cmd(model: &ModelArgs, output: &OutputArgs, cross_check: bool) -> Result<Outcome> {
    let m = model.load()?.model;
    let s = signature(&m)?;
    let mut outcome = Outcome::ok(output.scalar(&s));
    if cross_check {
        let p = pairing_signature(&m)?;
        if p != s {
            outcome.stderr = format!(
                "mismatch: L-class signature {}, pairing-matrix signature {}\n",
                format_rational(&s),
                format_rational(&p)
            );
            outcome.status = EXIT_MISMATCH;
        }
    }
    Ok(outcome)
}

fn charnum(model: &ModelArgs, output: &OutputArgs, class: ClassName, coeffs: Option<&str>) -> Result<Outcome> {
    let loaded = model.load()?;
    let m = loaded.model;
    let f = if class == ClassName::Custom {
        let coefficients = match coeffs {
            Some(s) => s
                .split(',')
                .enumerate()
                .map(|(i, c)| {
                    parse_rational(c.trim()).map_err(|e| Error::config(format!("--coeffs[{i}]"), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?,
            None => loaded
                .custom_series
                .ok_or_else(|| Error::config("--coeffs", "the custom class needs --coeffs or custom_series"))?,
        };
        NamedClassSeries::custom(m.ring(), coefficients)
    } else {
        NamedClassSeries::builtin(class, m.ring())?
    };
    Ok(Outcome::ok(output.scalar(&characteristic_number(&m, &f)?)))
}

fn index(
    model: &ModelArgs,
    output: &OutputArgs,
    bundle: Option<&str>,
    subgroup: bool,
    opposite: bool,
    show_forms: bool,
) -> Result<Outcome> {
    let mut m = model.load()?.model;
    if opposite {
        m = m.with_opposite_positive_roots();
    }
    let v = parse_bundle(&m, bundle)?;
    let which = which(subgroup);
    let value = index_group(&m, &v, which)?;
    if !show_forms {
        return Ok(Outcome::ok(output.scalar(&value)));
    }
    let forms = index_group_exterior(&m, &v, which)?;
    let (i, e, o) = (output.fmt(&value), output.fmt(&forms.even), output.fmt(&forms.odd));
    Ok(Outcome::ok(match output.format {
        Format::Text => format!("index: {i}\neven: {e}\nodd: {o}\n"),
        Format::Csv => format!("index,even,odd\n{i},{e},{o}\n"),
    }))
}

fn oracle_check(grassmannian: Option<&[usize]>, k_max: usize, n_max: usize, format: Format) -> Result<Outcome> {
    let shapes: Vec<(usize, usize)> = match grassmannian {
        Some(kn) => vec![(kn[0], kn[1])],
        None => (1..=k_max).flat_map(|k| (k..=n_max).map(move |n| (k, n))).collect(),
    };
    let results = shapes
        .par_iter()
        .map(|&(k, n)| {
            let m = grassmannian_model(k, n).map_err(|e| Error::config("--grassmannian", e.to_string()))?;
            let exps = degree_matching_exponents(k, (k * (n - k)) as u64);
            let ours = chern_pairing_table(&m, &exps)?;
            let theirs = exps
                .iter()
                .map(|e| oracle_chern_pairing(k, n, e))
                .collect::<Result<Vec<_>>>()?;
            Ok((k, n, exps, ours, theirs))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut out = String::new();
    let mut err = String::new();
    if format == Format::Csv {
        out.push_str("k,n,exponents,value,oracle\n");
    }
    let (mut total, mut bad) = (0usize, 0usize);
    for (k, n, exps, ours, theirs) in &results {
        let mut local_bad = 0;
        for ((e, a), b) in exps.iter().zip(ours).zip(theirs) {
            total += 1;
            if a != b {
                local_bad += 1;
                err.push_str(&format!(
                    "mismatch G({k},{n}) ({}): abelianization {}, oracle {}\n",
                    join(e),
                    format_rational(a),
                    format_rational(b)
                ));
            }
            if format == Format::Csv {
                out.push_str(&format!(
                    "{k},{n},{},{},{}\n",
                    e.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                    format_rational(a),
                    format_rational(b)
                ));
            }
        }
        bad += local_bad;
        if format == Format::Text {
            out.push_str(&format!(
                "G({k},{n}): {} pairings, {local_bad} mismatches\n",
                exps.len()
            ));
        }
    }
    if format == Format::Text {
        out.push_str(&format!("total: {total} pairings, {bad} mismatches\n"));
    }
    Ok(Outcome {
        stdout: out,
        stderr: err,
        status: if bad > 0 { EXIT_MISMATCH } else { EXIT_OK },
    })
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Pairing {
            model,
            output,
            exps,
            all,
            oracle,
        } => pairing(model, output, exps, *all, *oracle),
        Command::Integrate {
            model,
            output,
            poly,
            torus,
            subgroup,
        } => {
            let m = model.load()?.model;
            let p = TruncatedPolynomial::parse(m.ring(), poly).map_err(|e| Error::config("--poly", e.to_string()))?;
            let v = if *torus {
                integrate_torus(&m, &p)?
            } else {
                integrate_group(&m, &p, which(*subgroup))?
            };
            Ok(Outcome::ok(output.scalar(&v)))
        }
        Command::Betti {
            model,
            output,
            subgroup,
        } => betti(model, output, *subgroup),
        Command::Presentation {
            model,
            output,
            subgroup,
        } => presentation(model, output, *subgroup),
        Command::Euler { model, output } => {
            let m = model.load()?.model;
            Ok(Outcome::ok(output.scalar(&euler_characteristic(&m)?)))
        }
        Command::Signature {
            model,
            output,
            cross_check,
        } => signature_cmd(model, output, *cross_check),
        Command::Charnum {
            model,
            output,
            class,
            coeffs,
        } => charnum(model, output, *class, coeffs.as_deref()),
        Command::Index {
            model,
            output,
            bundle,
            subgroup,
            opposite_positive,
            show_forms,
        } => index(
            model,
            output,
            bundle.as_deref(),
            *subgroup,
            *opposite_positive,
            *show_forms,
        ),
        Command::OracleCheck {
            grassmannian,
            k_max,
            n_max,
            format,
        } => oracle_check(grassmannian.as_deref(), *k_max, *n_max, *format),
        Command::ExportConfig { model } => {
            let m = model.load()?.model;
            Ok(Outcome::ok(format!("{}\n", model_to_config(&m)?.to_json())))
        }
    }
}

/// Runs the CLI and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_CONFIG
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stderr.write_all(outcome.stderr.as_bytes());
            outcome.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Convenience wrapper returning captured output.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let status = run(args, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).expect("utf-8 output"),
        String::from_utf8(err).expect("utf-8 output"),
    )
}
