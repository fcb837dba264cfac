//! Per-record and global checks over ingested table records.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dirac_core::exact::{fmt_rat, parse_rat, Rational};
use dirac_core::induction::hp_check;
use dirac_core::realform::RealFormData;
use dirac_core::rootsys::{Basis, Chamber, Weight};
use dirac_core::series::lemma_filter;
use dirac_core::spin::{di_parity, dirac_test, spin_norm_sq, usmall_test, DiracVerdict, IndexVerdict};
use dirac_core::{Error, Result};

use crate::tables::{fold_record, RepRecord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub record_id: String,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<CheckLine>,
    /// Informational lines that never affect the outcome.
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("record_id\tcheck\tpass\tdetail\n");
        for c in &self.checks {
            let _ = writeln!(out, "{}\t{}\t{}\t{}", c.record_id, c.check, c.pass, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "# {n}");
        }
        out
    }
}

/// Reference values a dataset is compared against as a whole.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    pub records: Option<usize>,
    /// Sorted `‖ν‖²` values, one per record.
    pub nu_norm_sq: Option<Vec<Rational>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectationsFile {
    records: Option<usize>,
    /// Entries `q` or `q*k` for `k` repetitions.
    nu_norm_sq: Option<Vec<String>>,
}

impl Expectations {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let raw: ExpectationsFile = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| {
                    let before = &text[..s.start];
                    let line = before.matches('\n').count() + 1;
                    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                    (line, column)
                })
                .unwrap_or((1, 1));
            Error::Parse {
                path: path.to_string(),
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        let nu_norm_sq = match raw.nu_norm_sq {
            None => None,
            Some(entries) => {
                let mut out = Vec::new();
                for e in entries {
                    let (value, reps) = match e.split_once('*') {
                        Some((v, k)) => (v, k.trim().parse::<usize>().ok()),
                        None => (e.as_str(), Some(1)),
                    };
                    let (Some(q), Some(k)) = (parse_rat(value), reps) else {
                        return Err(Error::Config(format!("{path}: bad statistic entry `{e}`")));
                    };
                    out.extend(std::iter::repeat(q).take(k));
                }
                out.sort();
                Some(out)
            }
        };
        Ok(Expectations {
            records: raw.records,
            nu_norm_sq,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }
}

fn line(r: &RepRecord, check: &str, pass: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        record_id: r.id(),
        check: check.to_string(),
        pass,
        detail: detail.into(),
    }
}

fn fmt_ints(v: &[i64]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort();
    v
}

/// Is there a Weyl involution `θ` with `((1+θ)λ + (1−θ)ν)/2` conjugate to
/// the recorded infinitesimal character?
fn inf_char_realized(r: &RepRecord, rf: &RealFormData) -> Result<bool> {
    let g = rf.g();
    let half = Rational::new(1.into(), 2.into());
    for w in g.involutions()? {
        let wl = w.apply_coords(&r.lambda);
        let wn = w.apply_coords(&r.nu);
        let v: Vec<Rational> = (0..r.lambda.len())
            .map(|i| (&r.lambda[i] + &wl[i] + &r.nu[i] - &wn[i]) * &half)
            .collect();
        let (dom, _) = g.dominant_rep(&Weight::new(v, Basis::GFund), &Chamber::Fundamental)?;
        if dom.to_ints().as_deref() == Some(&r.inf_char[..]) {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_record(r: &RepRecord, rf: &RealFormData) -> Vec<CheckLine> {
    let mut out = Vec::new();
    let lambda = r.inf_char_weight();
    let lam = fmt_ints(&r.inf_char);

    out.push(line(r, "lemma", lemma_filter(&r.inf_char, rf), lam.clone()));
    match hp_check(&lambda, rf) {
        Ok(w) => out.push(line(r, "hp", w.is_some(), lam.clone())),
        Err(e) => out.push(line(r, "hp", false, e.to_string())),
    }
    match inf_char_realized(r, rf) {
        Ok(ok) => out.push(line(r, "inf_char", ok, "some involution maps (λ, ν) to Λ")),
        Err(e) => out.push(line(r, "inf_char", false, e.to_string())),
    }

    let mut all_equal = true;
    for (mu, w) in r.spin_lkts.iter().zip(r.lkt_weights()) {
        let m = fmt_ints(mu);
        match rf.ktype_test(&w) {
            Ok(ok) => out.push(line(r, "parity", ok, m.clone())),
            Err(e) => out.push(line(r, "parity", false, format!("{m}: {e}"))),
        }
        let eq = spin_norm_sq(&w, rf, None).and_then(|s| {
            let v = dirac_test(&s.norm_sq, &lambda, rf)?;
            Ok((v, s.norm_sq))
        });
        match eq {
            Ok((v, n)) => {
                let ok = v == DiracVerdict::Equality;
                all_equal &= ok;
                out.push(line(r, "spin_equality", ok, format!("{m}: spin norm² {} ({v:?})", fmt_rat(&n))));
            }
            Err(e) => {
                all_equal = false;
                out.push(line(r, "spin_equality", false, format!("{m}: {e}")));
            }
        }
        match usmall_test(&w, rf) {
            Ok(ok) => out.push(line(r, "usmall", ok, m)),
            Err(e) => out.push(line(r, "usmall", false, format!("{m}: {e}"))),
        }
    }

    if r.fold.is_some() {
        let back = fold_record(r, rf).and_then(|f| fold_record(&f, rf));
        let ok = match &back {
            Ok(b) => {
                b.table == r.table
                    && b.x == r.x
                    && b.lambda == r.lambda
                    && b.nu == r.nu
                    && b.inf_char == r.inf_char
                    && sorted(b.spin_lkts.clone()) == sorted(r.spin_lkts.clone())
            }
            Err(_) => false,
        };
        let detail = match back {
            Ok(_) => format!("partner {}", r.fold.unwrap_or_default()),
            Err(e) => e.to_string(),
        };
        out.push(line(r, "fold", ok, detail));
    }

    if all_equal {
        match di_parity(&r.lkt_weights(), &lambda, rf) {
            Ok(d) => {
                let cancels = d.verdict == IndexVerdict::Cancels;
                let expected = if r.star { "cancels" } else { "survives" };
                out.push(line(r, "dirac_index", cancels == r.star, format!("{:?}, expected {expected}", d.verdict)));
            }
            Err(e) => out.push(line(r, "dirac_index", false, e.to_string())),
        }
    }
    out
}

/// Runs every per-record check, then the dataset-level comparisons.
pub fn validate(records: &[RepRecord], rf: &RealFormData, expect: &Expectations) -> Report {
    let per_record: Vec<Vec<CheckLine>> = records.par_iter().map(|r| check_record(r, rf)).collect();
    let mut report = Report {
        checks: per_record.into_iter().flatten().collect(),
        notes: Vec::new(),
    };

    if let Some(n) = expect.records {
        report.notes.push(format!("{} records observed, {n} expected", records.len()));
    }
    if let Some(want) = &expect.nu_norm_sq {
        let mut got: Vec<Rational> = records.iter().map(|r| r.nu_norm_sq(rf)).collect();
        got.sort();
        let show = |v: &[Rational]| v.iter().map(fmt_rat).collect::<Vec<_>>().join(" ");
        report.checks.push(CheckLine {
            record_id: "*".into(),
            check: "nu_statistic".into(),
            pass: &got == want,
            detail: if &got == want {
                format!("{} values match", got.len())
            } else {
                format!("got {}; expected {}", show(&got), show(want))
            },
        });
    }
    report
}
