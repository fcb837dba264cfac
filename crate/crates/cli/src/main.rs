use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dirac_cli::tables::{expand_folds, ingest_tables};
use dirac_cli::validate::{validate, Expectations};
use dirac_core::exact::{fmt_rat, parse_rat, rat, Rational};
use dirac_core::induction::{build_parabolic, hp_check, parabolic_from_support, parabolic_from_support_at, range_test};
use dirac_core::presets::{real_form, PresetFile};
use dirac_core::realform::RealFormData;
use dirac_core::rootsys::{Basis, Weight, WeylElement};
use dirac_core::series::{count_strings, enumerate_phi, fully_supported_involutions, lemma_filter, CountTable};
use dirac_core::spin::{default_pencil_cap, dirac_test, pencil_min_spin, spin_norm_sq, usmall_test};

#[derive(Parser)]
#[command(name = "dirac", version, about = "Spin norms, HP checks and Dirac-series bookkeeping for real reductive groups")]
struct Cli {
    /// Group preset name.
    #[arg(long, global = true, default_value = "e6q")]
    group: String,
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Preset file to use instead of the built-in presets.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Root-system data of g.
    Rootsys {
        #[command(subcommand)]
        cmd: RootsysCmd,
    },
    /// The real form: compact roots, K, spin-module data.
    Realform {
        #[command(subcommand)]
        cmd: RealformCmd,
    },
    /// Weyl-group listings.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Spin norms and Vogan pencils.
    Spin {
        #[command(subcommand)]
        cmd: SpinCmd,
    },
    /// Huang–Pandžić condition.
    Hp {
        #[command(subcommand)]
        cmd: HpCmd,
    },
    /// θ-stable parabolics.
    Parabolic {
        #[command(subcommand)]
        cmd: ParabolicCmd,
    },
    /// Candidate infinitesimal characters.
    Phi {
        #[command(subcommand)]
        cmd: PhiCmd,
    },
    /// String counts from per-support tallies.
    Strings {
        #[command(subcommand)]
        cmd: StringsCmd,
    },
    /// Representation tables.
    Tables {
        #[command(subcommand)]
        cmd: TablesCmd,
    },
}

#[derive(Subcommand)]
enum RootsysCmd {
    Info,
}

#[derive(Subcommand)]
enum RealformCmd {
    Show,
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Minimal coset representatives W¹ with their spin-module weights.
    W1,
}

#[derive(Subcommand)]
enum SpinCmd {
    /// Spin norm of a K-type, optionally tested against an infinitesimal character.
    Norm(NormArgs),
    /// Spin norms along δ + nβ.
    Pencil {
        /// K-type in k-fundamental coordinates.
        delta: String,
        /// Stop after this many steps without improvement.
        #[arg(long)]
        cap: Option<usize>,
        /// Infinitesimal character, used for the default cap and the comparison.
        #[arg(long)]
        lambda: Option<String>,
    },
}

#[derive(Args)]
struct NormArgs {
    /// Weight, comma-separated (rationals allowed).
    mu: String,
    /// Coordinates of `mu`.
    #[arg(long, value_enum, default_value_t = BasisArg::Kfund)]
    basis: BasisArg,
    /// Infinitesimal character in g-fundamental coordinates.
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Kfund,
    Gfund,
    Root,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Basis {
        match b {
            BasisArg::Kfund => Basis::KFund,
            BasisArg::Gfund => Basis::GFund,
            BasisArg::Root => Basis::SimpleRoot,
        }
    }
}

#[derive(Subcommand)]
enum HpCmd {
    /// Search for a K-type satisfying the HP condition at Λ.
    Check {
        /// Infinitesimal character in g-fundamental coordinates.
        lambda: String,
    },
}

#[derive(Subcommand)]
enum ParabolicCmd {
    Info(ParabolicArgs),
}

#[derive(Args)]
struct ParabolicArgs {
    /// Levi support as 0-based simple-root indices, e.g. `1,2,3,4`.
    #[arg(long, conflicts_with = "h")]
    support: Option<String>,
    /// Move the support's grading element by this Weyl word, e.g. `s2s4s3`.
    #[arg(long, requires = "support")]
    at: Option<String>,
    /// Grading element in g-fundamental coordinates.
    #[arg(long)]
    h: Option<String>,
    /// Run the range test for this λ_L (g-fundamental coordinates).
    #[arg(long)]
    lambda_l: Option<String>,
}

#[derive(Subcommand)]
enum PhiCmd {
    Enumerate {
        /// Bound on ‖Λ − wΛ‖²; defaults to ‖2ρ‖².
        #[arg(long)]
        bound: Option<String>,
        /// Reference cardinality to report the delta against.
        #[arg(long)]
        reference: Option<usize>,
        /// Write the candidates as TSV to this path.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum StringsCmd {
    Count {
        /// TSV with columns `support`, `count`.
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum TablesCmd {
    Validate {
        /// Table TSV.
        file: PathBuf,
        /// TOML with dataset-level expectations.
        #[arg(long)]
        expect: Option<PathBuf>,
        /// Print every check, not only failures.
        #[arg(long)]
        all: bool,
    },
}

/// Command output: either named fields or a table of rows.
enum Output {
    Fields(Vec<(&'static str, Value)>),
    Rows { header: Vec<&'static str>, rows: Vec<Vec<Value>> },
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Output {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Fields(fields), Format::Tsv) => fields.iter().map(|(k, v)| format!("{k}\t{}\n", cell(v))).collect(),
            (Output::Fields(fields), Format::Json) => {
                let map: serde_json::Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                format!("{}\n", serde_json::to_string_pretty(&Value::Object(map)).expect("json"))
            }
            (Output::Rows { header, rows }, Format::Tsv) => {
                let mut out = header.join("\t");
                out.push('\n');
                for r in rows {
                    out.push_str(&r.iter().map(cell).collect::<Vec<_>>().join("\t"));
                    out.push('\n');
                }
                out
            }
            (Output::Rows { header, rows }, Format::Json) => {
                let arr: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                format!("{}\n", serde_json::to_string_pretty(&Value::Array(arr)).expect("json"))
            }
        }
    }
}

fn parse_vector(s: &str) -> anyhow::Result<Vec<Rational>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    t.split(',')
        .map(|p| parse_rat(p).with_context(|| format!("malformed number `{}` in `{s}`", p.trim())))
        .collect()
}

fn parse_indices(s: &str) -> anyhow::Result<Vec<usize>> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| p.trim().parse().with_context(|| format!("bad index `{p}`")))
        .collect()
}

/// `s2s4s3` or `2,4,3` (1-based generator labels) to 0-based indices.
fn parse_word(s: &str) -> anyhow::Result<Vec<usize>> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = if s.starts_with('s') {
        s.split('s').filter(|p| !p.is_empty()).collect()
    } else {
        s.split(',').collect()
    };
    parts
        .iter()
        .map(|p| match p.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => bail!("bad generator `{p}` in word `{s}`"),
        })
        .collect()
}

fn gweight(s: &str) -> anyhow::Result<Weight> {
    Ok(Weight::new(parse_vector(s)?, Basis::GFund))
}

fn show_ints(v: &[i64]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn show_roots(roots: &[Vec<i64>]) -> Value {
    Value::Array(roots.iter().map(|r| Value::String(show_ints(r))).collect())
}

fn load_group(cli: &Cli) -> anyhow::Result<Arc<RealFormData>> {
    match &cli.config {
        Some(path) => {
            let file = PresetFile::load(path)?;
            Ok(Arc::new(file.get(&cli.group)?.build()?))
        }
        None => Ok(real_form(&cli.group)?),
    }
}

fn word_value(w: &WeylElement) -> Value {
    Value::String(w.word_label())
}

fn run(cli: &Cli) -> anyhow::Result<(Output, bool)> {
    let rf = load_group(cli)?;
    let g = rf.g();
    let out = match &cli.command {
        Command::Rootsys { cmd: RootsysCmd::Info } => Output::Fields(vec![
            ("label", json!(g.label())),
            ("rank", json!(g.rank())),
            ("positive_roots", json!(g.positive_roots().len())),
            ("weyl_order", json!(g.weyl_group()?.order())),
            ("highest_root", json!(show_ints(g.highest_root()))),
            ("rho_norm_sq", json!(fmt_rat(&g.norm_sq(&g.rho())?))),
            ("cartan", json!((0..g.rank()).map(|i| show_ints(g.cartan().row(i))).collect::<Vec<_>>())),
        ]),
        Command::Realform { cmd: RealformCmd::Show } => {
            let beta = rf.pencil_direction().map(|b| Weight::from_ints(b, Basis::KFund));
            let dim_beta = match &beta {
                Some(b) => json!(rf.ktype_dim(b)?.to_string()),
                None => Value::Null,
            };
            Output::Fields(vec![
                ("compact_positive_roots", json!(rf.compact_positive_roots().len())),
                ("noncompact_positive_roots", json!(rf.noncompact_positive_roots().len())),
                ("k_rank", json!(rf.k_rank())),
                ("k_simple_roots", show_roots(rf.k_simple_roots())),
                ("k_weyl_order", json!(rf.k_weyl_order())),
                ("s", json!(rf.s())),
                ("rho_k", json!(rf.rho_k().to_string())),
                ("pencil_direction", json!(beta.map(|b| b.to_string()))),
                ("pencil_dim", dim_beta),
            ])
        }
        Command::Weyl { cmd: WeylCmd::W1 } => Output::Rows {
            header: vec!["j", "word", "length", "rho_n"],
            rows: rf
                .coset_reps_w1()
                .iter()
                .zip(rf.rho_n_ints())
                .enumerate()
                .map(|(j, (w, r))| vec![json!(j), word_value(w), json!(w.length()), json!(show_ints(r))])
                .collect(),
        },
        Command::Spin { cmd: SpinCmd::Norm(a) } => {
            let mu = Weight::new(parse_vector(&a.mu)?, a.basis.into());
            let lambda = a.lambda.as_deref().map(gweight).transpose()?;
            let res = spin_norm_sq(&mu, &rf, lambda.as_ref())?;
            let mut fields = vec![
                ("mu", json!(Weight::new(rf.kfund_coords(&mu)?, Basis::KFund).to_string())),
                ("spin_norm_sq", json!(fmt_rat(&res.norm_sq))),
                ("minimizers", json!(res.indices())),
                (
                    "conjugates",
                    json!(res.minimizers.iter().map(|m| m.conjugate.to_string()).collect::<Vec<_>>()),
                ),
                ("usmall", json!(usmall_test(&mu, &rf)?)),
            ];
            if let Some(l) = &lambda {
                fields.push(("lambda_norm_sq", json!(fmt_rat(&rf.norm_sq(l)?))));
                fields.push(("dirac", json!(format!("{:?}", dirac_test(&res.norm_sq, l, &rf)?))));
            }
            Output::Fields(fields)
        }
        Command::Spin {
            cmd: SpinCmd::Pencil { delta, cap, lambda },
        } => {
            let delta = Weight::new(parse_vector(delta)?, Basis::KFund);
            let lambda = lambda.as_deref().map(gweight).transpose()?;
            let cap = match (cap, &lambda) {
                (Some(c), _) => *c,
                (None, Some(l)) => default_pencil_cap(l, &rf)?,
                (None, None) => bail!("pass --cap or --lambda"),
            };
            let res = pencil_min_spin(&delta, &rf, cap)?;
            let mut fields = vec![
                ("min_spin_norm_sq", json!(fmt_rat(&res.min_norm_sq))),
                ("argmin", json!(res.argmin)),
                ("values", json!(res.values.iter().map(fmt_rat).collect::<Vec<_>>())),
                ("inconclusive", json!(res.inconclusive)),
            ];
            if let Some(l) = &lambda {
                fields.push(("lambda_norm_sq", json!(fmt_rat(&rf.norm_sq(l)?))));
                fields.push(("dirac", json!(format!("{:?}", dirac_test(&res.min_norm_sq, l, &rf)?))));
            }
            Output::Fields(fields)
        }
        Command::Hp {
            cmd: HpCmd::Check { lambda },
        } => {
            let lambda = gweight(lambda)?;
            let witness = hp_check(&lambda, &rf)?;
            let lemma = lambda.to_ints().map(|v| lemma_filter(&v, &rf));
            match witness {
                Some(w) => Output::Fields(vec![
                    ("hp", json!(true)),
                    ("lemma", json!(lemma)),
                    ("delta", json!(w.delta.to_string())),
                    ("j", json!(w.j)),
                    ("w", word_value(&w.w)),
                ]),
                None => Output::Fields(vec![("hp", json!(false)), ("lemma", json!(lemma))]),
            }
        }
        Command::Parabolic {
            cmd: ParabolicCmd::Info(a),
        } => {
            let q = match (&a.support, &a.h) {
                (Some(s), None) => {
                    let s = parse_indices(s)?;
                    match &a.at {
                        Some(word) => parabolic_from_support_at(&s, &g.element_from_word(&parse_word(word)?)?, &rf)?,
                        None => parabolic_from_support(&s, &rf)?,
                    }
                }
                (None, Some(h)) => build_parabolic(&gweight(h)?, &rf)?,
                _ => bail!("pass --support or --h"),
            };
            let mut fields = vec![
                ("h", json!(q.h().to_string())),
                ("h_k_dominant", json!(q.is_h_k_dominant())),
                ("dim_u", json!(q.u_roots().len())),
                ("dim_u_k", json!(q.u_k_roots().len())),
                ("dim_u_p", json!(q.u_p_roots().len())),
                ("l_roots", json!(q.l_roots().len())),
                ("l_simple", show_roots(&q.l_simple())),
                ("rho_u", json!(q.rho_u().to_string())),
                ("rho_u_k", json!(q.rho_u_k().to_string())),
                ("rho_u_p", json!(q.rho_u_p().to_string())),
                ("s", json!(q.s())),
            ];
            if let Some(l) = &a.lambda_l {
                let v = range_test(&gweight(l)?, &q, &rf)?;
                fields.push(("range", json!(format!("{v:?}"))));
            }
            Output::Fields(fields)
        }
        Command::Phi {
            cmd: PhiCmd::Enumerate { bound, reference, dump },
        } => {
            let bound = match bound {
                Some(b) => parse_rat(b).with_context(|| format!("bad bound `{b}`"))?,
                None => g.norm_sq(&g.rho())? * rat(4),
            };
            let inv = fully_supported_involutions(&rf)?;
            let phi = enumerate_phi(&rf, &inv, &bound)?;
            if let Some(path) = dump {
                let mut text: String = (0..rf.rank()).map(|i| format!("c{}\t", i + 1)).collect();
                text.push_str("lemma\tnorm\n");
                for v in &phi.candidates {
                    for x in v {
                        text.push_str(&format!("{x}\t"));
                    }
                    text.push_str("true\ttrue\n");
                }
                std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            let binary = phi.candidates.iter().filter(|v| v.iter().all(|&x| x <= 1)).count();
            let mut fields = vec![
                ("involutions", json!(phi.involutions)),
                ("bound", json!(fmt_rat(&phi.bound))),
                ("cardinality", json!(phi.candidates.len())),
                ("binary", json!(binary)),
                ("caps", json!(phi.caps)),
            ];
            if let Some(r) = reference {
                fields.push(("reference", json!(r)));
                fields.push(("delta", json!(phi.candidates.len() as i64 - *r as i64)));
            }
            Output::Fields(fields)
        }
        Command::Strings {
            cmd: StringsCmd::Count { file },
        } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let table = CountTable::parse(&text, rf.rank(), &file.display().to_string())?;
            let (n, total) = count_strings(&table);
            let mut rows: Vec<Vec<Value>> = n.iter().enumerate().map(|(i, c)| vec![json!(format!("N_{i}")), json!(c)]).collect();
            rows.push(vec![json!("total"), json!(total)]);
            Output::Rows {
                header: vec!["term", "count"],
                rows,
            }
        }
        Command::Tables {
            cmd: TablesCmd::Validate { file, expect, all },
        } => {
            let records = expand_folds(&ingest_tables(file, rf.rank())?, &rf)?;
            let expect = match expect {
                Some(p) => Expectations::load(p)?,
                None => Expectations::default(),
            };
            let report = validate(&records, &rf, &expect);
            for n in &report.notes {
                eprintln!("note: {n}");
            }
            let failed = report.failures().count();
            eprintln!("{} checks, {failed} failed", report.checks.len());
            let rows = report
                .checks
                .iter()
                .filter(|c| *all || !c.pass)
                .map(|c| vec![json!(c.record_id), json!(c.check), json!(c.pass), json!(c.detail)])
                .collect();
            return Ok((
                Output::Rows {
                    header: vec!["record_id", "check", "pass", "detail"],
                    rows,
                },
                report.passed(),
            ));
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{}", out.render(cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
