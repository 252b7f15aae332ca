//! Command-line front end.
//!
//! Every command echoes its effective configuration as `# ` lines, then
//! writes a deterministic report. Exit codes: 0 success, 1 verification or
//! lemma failure, 2 usage or parse error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuits::{check_mp, check_quadratic, naive_decomp, sandwich, strassen_decomp, to_quadratic, BilinearDecomp};
use crate::error::{Error, Result};
use crate::field::{make_context, FieldCtx};
use crate::formats::{self, Artifact};
use crate::lemmas::{self, LemmaLimits};
use crate::lowerbound::{
    check_certificate, commutator_family, gf2_pipeline, gfp_pipeline, invertible_difference_family, vanish_family,
    BoundCertificate, SearchConfig,
};
use crate::matcodes::{check_rank_distance, code_from_bilinear, code_from_quadratic, CheckMode, MatrixCode};
use crate::matspace::{LinForm, Mat};
use crate::rank_oracle::{karatsuba_tensor, mp_tensor, rank, rank_decide, tensor_from_decomp, terms_from_decomp, RankDecision, Tensor3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mpbounds", version, about = "Matrix-product circuits, matrix codes and checked lower-bound certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the main artifact here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a circuit computes the matrix product, or re-check a certificate.
    Verify {
        path: PathBuf,
    },
    /// Run a lower-bound pipeline on a circuit and emit its certificate.
    Bound {
        #[arg(value_enum)]
        kind: BoundKind,
        path: PathBuf,
        /// Family size for the code pipeline.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Size of the inverse-pair family (bilinear pipeline).
        #[arg(long, default_value_t = 4)]
        k1: usize,
        /// Size of the commutator family (bilinear pipeline).
        #[arg(long, default_value_t = 3)]
        k2: usize,
        /// Random evaluations for nonzero-point search.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the lemma verification suite, or one named runner.
    Lemmas {
        #[arg(default_value = "all")]
        scope: String,
        /// Random instances for the sampled parts.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact tensor rank, or an interval when time runs out.
    Rank {
        /// TENSOR, MPDECOMP or MPQUAD file; circuits contribute their own
        /// decomposition as a witness.
        path: PathBuf,
        /// Decide only whether the rank is at most this value.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long = "time-limit", value_name = "SECS")]
        time_limit: Option<f64>,
    },
    /// Build a matrix family with invertible differences or commutators.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        #[arg(long, value_parser = parse_field_spec)]
        field: FieldSpec,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Transport a circuit by x -> x c, y -> c^-1 y.
    Sandwich {
        path: PathBuf,
        /// Row-major entries of `c`; a seeded random invertible matrix otherwise.
        #[arg(long = "matrix", num_args = 1.., value_delimiter = ',')]
        matrix: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
    /// Check weight(code(a)) >= n rank(a) for the code of a circuit.
    CodeCheck {
        path: PathBuf,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a built-in circuit or tensor.
    Emit {
        #[arg(value_enum)]
        what: EmitKind,
        #[arg(long, value_parser = parse_field_spec)]
        field: FieldSpec,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Gf2,
    Gfp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Embedded field elements, pairwise invertible differences.
    Difference,
    /// Pairwise invertible differences with many coordinate forms vanishing.
    Vanish,
    /// Invertible triple commutators with many coordinate forms vanishing.
    Commutator,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitKind {
    Naive,
    Strassen,
    NaiveQuad,
    MpTensor,
    Karatsuba,
}

/// `p` or `p^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub d: usize,
}

pub fn parse_field_spec(s: &str) -> std::result::Result<FieldSpec, String> {
    let (p, d) = match s.split_once('^') {
        Some((p, d)) => (p, d.parse::<usize>().map_err(|e| format!("bad degree `{d}`: {e}"))?),
        None => (s, 1),
    };
    let p = p.parse::<u64>().map_err(|e| format!("bad characteristic `{p}`: {e}"))?;
    make_context(p, d).map_err(|e| e.to_string())?;
    Ok(FieldSpec { p, d })
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let mut report = String::new();
    let code = match dispatch(&cli.command, &mut report) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(report, "error: {e}");
            match e {
                Error::Parse { .. } | Error::Io(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            }
        }
    };
    let _ = out.write_all(report.as_bytes());
    code
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes `artifact` to `--out` when given, else appends it to the report.
fn emit(common: &Common, artifact: &str, report: &mut String) -> Result<()> {
    match &common.out {
        Some(p) => {
            std::fs::write(p, artifact).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            let _ = writeln!(report, "wrote {}", p.display());
        }
        None => report.push_str(artifact),
    }
    Ok(())
}

fn echo(report: &mut String, pairs: &[(&str, String)]) {
    for (k, v) in pairs {
        let _ = writeln!(report, "# {k} = {v}");
    }
}

fn out_name(common: &Common) -> String {
    common.out.as_ref().map_or("-".into(), |p| p.display().to_string())
}

fn field_of(spec: FieldSpec) -> Result<FieldCtx> {
    make_context(spec.p, spec.d)
}

fn load_decomp(path: &Path) -> Result<BilinearDecomp> {
    match formats::parse_artifact(&read(path)?)? {
        Artifact::Decomp(d) => Ok(d),
        _ => Err(Error::parse(1, "expected an MPDECOMP file")),
    }
}

fn load_code(path: &Path) -> Result<MatrixCode> {
    match formats::parse_artifact(&read(path)?)? {
        Artifact::Decomp(d) => code_from_bilinear(&d),
        Artifact::Quad(q) => code_from_quadratic(&q),
        _ => Err(Error::parse(1, "expected an MPDECOMP or MPQUAD file")),
    }
}

fn dispatch(cmd: &Command, r: &mut String) -> Result<i32> {
    match cmd {
        Command::Verify { path } => {
            echo(r, &[("command", "verify".into()), ("path", path.display().to_string())]);
            cmd_verify(path, r)
        }
        Command::Bound { kind, path, k, k1, k2, budget, common } => {
            let mut cfg = SearchConfig::with_seed(common.seed);
            if let Some(b) = budget {
                cfg.budget = *b;
            }
            echo(
                r,
                &[
                    ("command", "bound".into()),
                    ("kind", format!("{kind:?}").to_lowercase()),
                    ("path", path.display().to_string()),
                    ("k", k.to_string()),
                    ("k1", k1.to_string()),
                    ("k2", k2.to_string()),
                    ("seed", cfg.seed.to_string()),
                    ("budget", cfg.budget.to_string()),
                    ("out", out_name(common)),
                ],
            );
            let cert = match kind {
                BoundKind::Gf2 => gf2_pipeline(&load_code(path)?, *k, &cfg)?,
                BoundKind::Gfp => gfp_pipeline(&load_decomp(path)?, *k1, *k2, &cfg)?,
            };
            emit(common, &formats::write_certificate(&cert), r)?;
            let _ = writeln!(r, "BOUND {} GATES {} OK", cert.bound, cert.m_actual);
            Ok(EXIT_OK)
        }
        Command::Lemmas { scope, samples, seed } => {
            echo(
                r,
                &[
                    ("command", "lemmas".into()),
                    ("scope", scope.clone()),
                    ("samples", samples.to_string()),
                    ("seed", seed.to_string()),
                ],
            );
            let limits = LemmaLimits { seed: *seed, samples: *samples };
            let Some(reports) = lemmas::run(scope, &limits) else {
                let _ = writeln!(r, "error: unknown lemma `{scope}`; known: all, {}", lemmas::LEMMA_NAMES.join(", "));
                return Ok(EXIT_USAGE);
            };
            for rep in &reports {
                let _ = writeln!(r, "{rep}");
            }
            Ok(if reports.iter().all(|x| x.passed) { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Rank { path, budget, time_limit } => {
            echo(
                r,
                &[
                    ("command", "rank".into()),
                    ("path", path.display().to_string()),
                    ("budget", budget.map_or("none".into(), |b| b.to_string())),
                    ("time_limit", time_limit.map_or("none".into(), |t| t.to_string())),
                ],
            );
            let limit = match time_limit {
                Some(t) if !t.is_finite() || *t < 0.0 => return Err(Error::parse(1, "time limit must be a nonnegative number")),
                Some(t) => Some(Duration::from_secs_f64(*t)),
                None => None,
            };
            cmd_rank(path, *budget, limit, r)
        }
        Command::Family { kind, field, n, k, common } => {
            echo(
                r,
                &[
                    ("command", "family".into()),
                    ("kind", format!("{kind:?}").to_lowercase()),
                    ("field", field_spec_text(*field)),
                    ("n", n.to_string()),
                    ("k", k.to_string()),
                    ("seed", common.seed.to_string()),
                    ("out", out_name(common)),
                ],
            );
            cmd_family(*kind, *field, *n, *k, common, r)
        }
        Command::Sandwich { path, matrix, common } => {
            echo(
                r,
                &[
                    ("command", "sandwich".into()),
                    ("path", path.display().to_string()),
                    ("matrix", matrix.as_ref().map_or("random".into(), |m| m.join(","))),
                    ("seed", common.seed.to_string()),
                    ("out", out_name(common)),
                ],
            );
            let d = load_decomp(path)?;
            let n = d.n()?;
            let c = match matrix {
                Some(vals) => {
                    let elems = vals
                        .iter()
                        .map(|s| d.ctx().parse_elem(s.trim()).ok_or_else(|| Error::parse(1, format!("bad element `{s}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    Mat::from_elems(d.ctx(), n, n, elems).map_err(|e| Error::parse(1, e.to_string()))?
                }
                None => Mat::random_invertible(d.ctx(), n, &mut ChaCha8Rng::seed_from_u64(common.seed)),
            };
            let _ = writeln!(r, "# c = {}", row_text(&c));
            let s = sandwich(&d, &c)?;
            emit(common, &formats::write_decomp(&s), r)?;
            Ok(EXIT_OK)
        }
        Command::CodeCheck { path, exhaustive, samples, seed } => {
            let mode = match (exhaustive, samples) {
                (_, Some(count)) => CheckMode::Sample { count: *count, seed: *seed },
                _ => CheckMode::Exhaustive,
            };
            echo(
                r,
                &[
                    ("command", "code-check".into()),
                    ("path", path.display().to_string()),
                    ("mode", format!("{mode:?}")),
                ],
            );
            let code = load_code(path)?;
            let rep = check_rank_distance(&code, mode)?;
            let _ = writeln!(r, "checked {} matrices, {} violations", rep.checked, rep.violation_count);
            for (a, w, rk) in rep.violations.iter().take(10) {
                let _ = writeln!(r, "violation: weight {w} < {} * rank {rk} at {}", code.n(), row_text(a));
            }
            let ratio = rep.min_ratio.map_or("none".into(), |q| q.to_string());
            let _ = writeln!(r, "CODE checked={} violations={} min_ratio={ratio}", rep.checked, rep.violation_count);
            Ok(if rep.passed() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Emit { what, field, n, common } => {
            echo(
                r,
                &[
                    ("command", "emit".into()),
                    ("what", format!("{what:?}").to_lowercase()),
                    ("field", field_spec_text(*field)),
                    ("n", n.to_string()),
                    ("out", out_name(common)),
                ],
            );
            let f = field_of(*field)?;
            let text = match what {
                EmitKind::Naive => formats::write_decomp(&naive_decomp(*n, &f)),
                EmitKind::Strassen => formats::write_decomp(&strassen_decomp(&f)),
                EmitKind::NaiveQuad => formats::write_quad(&to_quadratic(&naive_decomp(*n, &f))?),
                EmitKind::MpTensor => formats::write_tensor(&mp_tensor(*n, &f)),
                EmitKind::Karatsuba => formats::write_tensor(&karatsuba_tensor(&f)),
            };
            emit(common, &text, r)?;
            Ok(EXIT_OK)
        }
    }
}

fn field_spec_text(f: FieldSpec) -> String {
    if f.d == 1 {
        f.p.to_string()
    } else {
        format!("{}^{}", f.p, f.d)
    }
}

fn row_text(m: &Mat) -> String {
    m.entries().iter().map(|&e| m.ctx().format_elem(e)).collect::<Vec<_>>().join(" ")
}

fn cmd_verify(path: &Path, r: &mut String) -> Result<i32> {
    let ok = match formats::parse_artifact(&read(path)?)? {
        Artifact::Decomp(d) => {
            let bad = check_mp(&d);
            let _ = writeln!(r, "MPDECOMP over {} dims {:?} with {} products", d.ctx().name(), d.dims(), d.m());
            if let Some(x) = &bad {
                let _ = writeln!(r, "first failing {x}");
            }
            bad.is_none()
        }
        Artifact::Quad(q) => {
            let bad = check_quadratic(&q);
            let _ = writeln!(r, "MPQUAD over {} n {} with {} products", q.ctx().name(), q.n(), q.m());
            if let Some(x) = &bad {
                let _ = writeln!(r, "first failing {x}");
            }
            bad.is_none()
        }
        Artifact::Certificate(c) => verify_certificate(&c, r),
        Artifact::Tensor(_) => return Err(Error::parse(1, "a tensor file has nothing to verify")),
    };
    let _ = writeln!(r, "{}", if ok { "VERIFIED" } else { "FAILED" });
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn verify_certificate(c: &BoundCertificate, r: &mut String) -> bool {
    let _ = writeln!(r, "BOUNDCERT {} over {} n {} bound {}", c.kind.name(), c.ctx().name(), c.n(), c.bound);
    match check_certificate(c) {
        Ok(()) => true,
        Err(e) => {
            let _ = writeln!(r, "{e}");
            false
        }
    }
}

fn cmd_rank(path: &Path, budget: Option<usize>, limit: Option<Duration>, r: &mut String) -> Result<i32> {
    let (tensor, witnesses): (Tensor3, Vec<_>) = match formats::parse_artifact(&read(path)?)? {
        Artifact::Tensor(t) => (t, vec![]),
        Artifact::Decomp(d) => (tensor_from_decomp(&d), vec![terms_from_decomp(&d)]),
        Artifact::Quad(_) | Artifact::Certificate(_) => {
            return Err(Error::parse(1, "expected a TENSOR or MPDECOMP file"))
        }
    };
    let _ = writeln!(r, "# dims = {:?}, slice spans = {:?}", tensor.dims(), tensor.slice_span_dims());
    if let Some(b) = budget {
        match rank_decide(&tensor, b, limit)? {
            RankDecision::Found(terms) => {
                let _ = writeln!(r, "RANK <= {b} (decomposition with {} terms)", terms.len());
            }
            RankDecision::ExhaustedNo => {
                let _ = writeln!(r, "RANK > {b} (complete search)");
            }
            RankDecision::TimedOut => {
                let _ = writeln!(r, "RANK <= {b} UNDECIDED (time limit)");
            }
        }
        return Ok(EXIT_OK);
    }
    let rep = rank(&tensor, limit, &witnesses)?;
    if rep.exact() {
        let _ = writeln!(r, "RANK {} (exact)", rep.lower);
    } else {
        let _ = writeln!(
            r,
            "RANK [{}, {}] (lower proven by complete search, upper by a {}-term decomposition{})",
            rep.lower,
            rep.upper,
            rep.witness.len(),
            if rep.timed_out { "; time limit reached" } else { "" }
        );
    }
    Ok(EXIT_OK)
}

fn cmd_family(kind: FamilyKind, field: FieldSpec, n: usize, k: usize, common: &Common, r: &mut String) -> Result<i32> {
    let f = field_of(field)?;
    let cfg = SearchConfig::with_seed(common.seed);
    let coords: Vec<LinForm> = (0..n * n).map(|i| LinForm::coordinate(&f, n * n, i)).collect();
    let mut text = String::new();
    let (mats, vanishing) = match kind {
        FamilyKind::Difference => (invertible_difference_family(n, k, &f)?, None),
        FamilyKind::Vanish => {
            let w = vanish_family(&coords, n, k, &f, &cfg)?;
            (w.mats, Some(w.vanishing))
        }
        FamilyKind::Commutator => {
            let w = commutator_family(n, k, &coords, &f, &cfg)?;
            (w.mats, Some(w.vanishing))
        }
    };
    for (i, m) in mats.iter().enumerate() {
        let _ = writeln!(text, "member {i} {}", row_text(m));
    }
    if let Some(v) = vanishing {
        let cells: Vec<String> = v.iter().map(|&i| format!("x{}{}", i / n + 1, i % n + 1)).collect();
        let _ = writeln!(text, "vanishing {} {}", v.len(), cells.join(" "));
    }
    emit(common, &text, r)?;
    Ok(EXIT_OK)
}
