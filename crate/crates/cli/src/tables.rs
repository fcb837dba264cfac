//! Appendix-table records: TSV ingestion, canonical serialization and fold
//! expansion.
//!
//! One header line, then one record per line with the columns of [`HEADER`].
//! Vectors are comma lists of integers or `n/d` rationals; spin LKTs are
//! semicolon-separated vectors; `-` marks an empty optional field.

use std::fmt::Write as _;
use std::path::Path;

use dirac_core::exact::{fmt_rat, parse_rat, Rational};
use dirac_core::realform::RealFormData;
use dirac_core::rootsys::{Basis, Weight};
use dirac_core::{Error, Result};

pub const HEADER: [&str; 8] = ["table", "x", "lambda", "nu", "inf_char", "spin_lkts", "fold", "flags"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepRecord {
    /// Caption label, e.g. `100101` for infinitesimal character [1,0,0,1,0,1].
    pub table: String,
    /// KGB label; `None` for records shipped without one (the trivial representation).
    pub x: Option<u32>,
    pub lambda: Vec<Rational>,
    pub nu: Vec<Rational>,
    /// Dominant infinitesimal character in g-fundamental coordinates.
    pub inf_char: Vec<i64>,
    /// k-fundamental coordinates.
    pub spin_lkts: Vec<Vec<i64>>,
    pub fold: Option<u32>,
    /// Dirac index cancels.
    pub star: bool,
    /// Special unipotent.
    pub club: bool,
    /// Produced by fold expansion rather than read from the file.
    pub folded: bool,
}

impl RepRecord {
    pub fn id(&self) -> String {
        match self.x {
            Some(x) => format!("{}/{}", self.table, x),
            None => self.table.clone(),
        }
    }

    pub fn inf_char_weight(&self) -> Weight {
        Weight::from_ints(&self.inf_char, Basis::GFund)
    }

    pub fn lkt_weights(&self) -> Vec<Weight> {
        self.spin_lkts.iter().map(|v| Weight::from_ints(v, Basis::KFund)).collect()
    }

    pub fn nu_norm_sq(&self, rf: &RealFormData) -> Rational {
        rf.g().norm_sq_coords(&self.nu)
    }
}

struct Cursor<'a> {
    path: &'a str,
    line: usize,
}

impl Cursor<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line: self.line,
            column,
            message: message.into(),
        }
    }
}

fn parse_vec(s: &str, rank: usize, what: &str, cur: &Cursor, col: usize) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != rank {
        return Err(cur.err(col, format!("{what}: expected {rank} entries, found {}", parts.len())));
    }
    let mut out = Vec::with_capacity(rank);
    let mut offset = 0;
    for p in parts {
        let q = parse_rat(p).ok_or_else(|| cur.err(col + offset, format!("{what}: malformed rational `{p}`")))?;
        out.push(q);
        offset += p.chars().count() + 1;
    }
    Ok(out)
}

fn parse_int_vec(s: &str, rank: usize, what: &str, cur: &Cursor, col: usize) -> Result<Vec<i64>> {
    let v = parse_vec(s, rank, what, cur, col)?;
    v.iter()
        .map(|q| {
            if q.is_integer() {
                i64::try_from(q.to_integer()).map_err(|_| cur.err(col, format!("{what}: entry out of range")))
            } else {
                Err(cur.err(col, format!("{what}: entries must be integers")))
            }
        })
        .collect()
}

fn parse_opt_label(s: &str, what: &str, cur: &Cursor, col: usize) -> Result<Option<u32>> {
    if s == "-" {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| cur.err(col, format!("{what}: expected an integer or `-`, found `{s}`")))
}

/// Parses a table file for a group of the given rank.
pub fn parse_tables(text: &str, rank: usize, path: &str) -> Result<Vec<RepRecord>> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let mut col = 1;
    for (i, name) in header.split('\t').enumerate() {
        let cur = Cursor { path, line: 1 };
        match HEADER.get(i) {
            Some(&expected) if expected == name => {}
            Some(&expected) => return Err(cur.err(col, format!("unknown column `{name}`, expected `{expected}`"))),
            None => return Err(cur.err(col, format!("unknown column `{name}`"))),
        }
        col += name.chars().count() + 1;
    }
    if header.split('\t').count() != HEADER.len() {
        return Err(Cursor { path, line: 1 }.err(col, "missing columns"));
    }

    let mut out = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cur = Cursor { path, line: idx + 1 };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != HEADER.len() {
            return Err(cur.err(1, format!("expected {} fields, found {}", HEADER.len(), fields.len())));
        }
        let mut cols = Vec::with_capacity(fields.len());
        let mut c = 1;
        for f in &fields {
            cols.push(c);
            c += f.chars().count() + 1;
        }

        let table = fields[0].to_string();
        if table.is_empty() || table == "-" {
            return Err(cur.err(cols[0], "empty table label"));
        }
        let x = parse_opt_label(fields[1], "x", &cur, cols[1])?;
        let lambda = parse_vec(fields[2], rank, "lambda", &cur, cols[2])?;
        let nu = parse_vec(fields[3], rank, "nu", &cur, cols[3])?;
        let inf_char = parse_int_vec(fields[4], rank, "inf_char", &cur, cols[4])?;
        let mut spin_lkts = Vec::new();
        let mut offset = 0;
        for part in fields[5].split(';') {
            spin_lkts.push(parse_int_vec(part, rank, "spin_lkts", &cur, cols[5] + offset)?);
            offset += part.chars().count() + 1;
        }
        let fold = parse_opt_label(fields[6], "fold", &cur, cols[6])?;
        let (mut star, mut club) = (false, false);
        if fields[7] != "-" {
            for flag in fields[7].split(',') {
                match flag {
                    "star" => star = true,
                    "club" => club = true,
                    other => return Err(cur.err(cols[7], format!("unknown flag `{other}`"))),
                }
            }
        }
        out.push(RepRecord {
            table,
            x,
            lambda,
            nu,
            inf_char,
            spin_lkts,
            fold,
            star,
            club,
            folded: false,
        });
    }
    Ok(out)
}

pub fn ingest_tables(path: &Path, rank: usize) -> Result<Vec<RepRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_tables(&text, rank, &path.display().to_string())
}

fn join_rats(v: &[Rational]) -> String {
    v.iter().map(fmt_rat).collect::<Vec<_>>().join(",")
}

fn join_ints(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn opt_label(x: Option<u32>) -> String {
    x.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Canonical TSV. Parsing the output gives back the same records.
pub fn to_tsv(records: &[RepRecord]) -> String {
    let mut out = HEADER.join("\t");
    out.push('\n');
    for r in records {
        let lkts = r.spin_lkts.iter().map(|v| join_ints(v)).collect::<Vec<_>>().join(";");
        let flags = match (r.club, r.star) {
            (false, false) => "-",
            (true, false) => "club",
            (false, true) => "star",
            (true, true) => "club,star",
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.table,
            opt_label(r.x),
            join_rats(&r.lambda),
            join_rats(&r.nu),
            join_ints(&r.inf_char),
            lkts,
            opt_label(r.fold),
            flags
        );
    }
    out
}

/// The diagram automorphism `−w₀` as a permutation of fundamental weights:
/// `−w₀ ϖ_i = ϖ_{perm[i]}`.
pub fn fold_permutation(rf: &RealFormData) -> Vec<usize> {
    let g = rf.g();
    let n = g.rank();
    let w0 = g.longest_element();
    (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            let img = w0.apply_ints(&e);
            img.iter().position(|&c| c == -1).expect("−w₀ permutes fundamental weights")
        })
        .collect()
}

fn permute<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    let mut out = v.to_vec();
    for (i, &j) in perm.iter().enumerate() {
        out[j] = v[i].clone();
    }
    out
}

/// The fold partner of a record: coordinates swapped by the diagram
/// automorphism, spin LKTs replaced by their contragredients (sorted),
/// flags kept.
pub fn fold_record(r: &RepRecord, rf: &RealFormData) -> Result<RepRecord> {
    let Some(partner) = r.fold else {
        return Err(Error::Precondition(format!("{} has no fold partner", r.id())));
    };
    let perm = fold_permutation(rf);
    let mut lkts = Vec::with_capacity(r.spin_lkts.len());
    for w in r.lkt_weights() {
        lkts.push(rf.dominant_kfund_ints(&rf.contragredient(&w)?)?);
    }
    lkts.sort();
    Ok(RepRecord {
        table: r.table.clone(),
        x: Some(partner),
        lambda: permute(&r.lambda, &perm),
        nu: permute(&r.nu, &perm),
        inf_char: permute(&r.inf_char, &perm),
        spin_lkts: lkts,
        fold: r.x,
        star: r.star,
        club: r.club,
        folded: !r.folded,
    })
}

/// Appends the fold partner of every record that names one.
pub fn expand_folds(records: &[RepRecord], rf: &RealFormData) -> Result<Vec<RepRecord>> {
    let mut out = records.to_vec();
    for r in records.iter().filter(|r| r.fold.is_some() && !r.folded) {
        out.push(fold_record(r, rf)?);
    }
    Ok(out)
}
