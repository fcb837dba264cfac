//! Candidate infinitesimal characters for the Dirac series: the vanishing
//! filter, the binary sets `Ω(S)`, the `Φ` enumeration bounded by
//! `‖Λ − wΛ‖ ≤ ‖2ρ‖`, and string counting from per-support tallies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{frac, IMatrix, Rational};
use crate::induction::hp_check;
use crate::realform::RealFormData;
use crate::rootsys::{Basis, Weight, WeylElement};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InfCharCandidate {
    pub coords: Vec<i64>,
    /// Simple-root indices the candidate was generated for (binary digits).
    pub support: Vec<usize>,
    pub lemma_pass: bool,
    pub norm_pass: bool,
}

/// Does no configured pair of coordinates vanish together? Groups without
/// configured pairs accept everything; a vector too short for a pair fails.
pub fn lemma_filter(coords: &[i64], rf: &RealFormData) -> bool {
    rf.vanishing_pairs()
        .map(|pairs| {
            pairs.iter().all(|&[i, j]| match (coords.get(i), coords.get(j)) {
                (Some(a), Some(b)) => a + b > 0,
                _ => false,
            })
        })
        .unwrap_or(true)
}

/// Vectors that are 0 or 1 on `support` and 1 elsewhere, passing the
/// vanishing filter and the HP condition. Sorted lexicographically.
pub fn omega_set(support: &[usize], rf: &RealFormData) -> Result<Vec<InfCharCandidate>> {
    let n = rf.rank();
    if let Some(&i) = support.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    let mut support: Vec<usize> = support.to_vec();
    support.sort_unstable();
    support.dedup();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << support.len()) {
        let mut v = vec![1i64; n];
        for (bit, &i) in support.iter().enumerate() {
            v[i] = ((mask >> bit) & 1) as i64;
        }
        if !lemma_filter(&v, rf) {
            continue;
        }
        if hp_check(&Weight::from_ints(&v, Basis::GFund), rf)?.is_some() {
            out.push(InfCharCandidate {
                coords: v,
                support: support.clone(),
                lemma_pass: true,
                norm_pass: true,
            });
        }
    }
    out.sort();
    Ok(out)
}

/// Involutions whose reduced words use every simple reflection.
pub fn fully_supported_involutions(rf: &RealFormData) -> Result<Vec<WeylElement>> {
    let g = rf.g();
    let n = g.rank();
    Ok(g.involutions()?
        .into_iter()
        .filter(|w| g.support(w).len() == n)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiEnumeration {
    /// Sorted lexicographically.
    pub candidates: Vec<Vec<i64>>,
    /// Largest value each coordinate can take under some involution.
    pub caps: Vec<i64>,
    pub involutions: usize,
    pub bound: Rational,
}

/// `‖(1 − w)Λ‖²` as an integer quadratic form over a common denominator.
fn displacement_form(rf: &RealFormData, w: &WeylElement) -> (IMatrix, i64) {
    let g = rf.g();
    let n = g.rank();
    let mut one_minus = IMatrix::identity(n).to_q();
    let wm = w.matrix().to_q();
    for i in 0..n {
        for j in 0..n {
            one_minus.set(i, j, one_minus.get(i, j) - wm.get(i, j));
        }
    }
    one_minus.transpose().mul(g.gram_fund()).mul(&one_minus).to_scaled()
}

/// All nonnegative integral `Λ` with some coordinate 0, passing the
/// vanishing filter, with `‖Λ − wΛ‖² ≤ bound` for at least one `w` in
/// `involutions`.
///
/// For an involution `w` the form `‖(1−w)Λ‖²` has nonnegative coefficients
/// in fundamental-weight coordinates, so it grows with every coordinate and a
/// depth-first search may prune as soon as a prefix exceeds the bound.
pub fn enumerate_phi(rf: &RealFormData, involutions: &[WeylElement], bound: &Rational) -> Result<PhiEnumeration> {
    let n = rf.rank();
    for w in involutions {
        if w.matrix().mul(w.matrix()) != IMatrix::identity(n) {
            return Err(Error::NotInvolution);
        }
    }
    let forms: Vec<(IMatrix, i64)> = involutions.iter().map(|w| displacement_form(rf, w)).collect();
    let mut caps = vec![0i64; n];
    for (m, den) in &forms {
        for (i, cap) in caps.iter_mut().enumerate() {
            let q = m.get(i, i);
            if q == 0 {
                return Err(Error::Precondition(format!(
                    "an involution fixes fundamental weight {}; Φ would be infinite",
                    i + 1
                )));
            }
            // Largest c with c²·q/den ≤ bound.
            let mut c = 0i64;
            while frac((c + 1) * (c + 1) * q, *den) <= *bound {
                c += 1;
            }
            *cap = (*cap).max(c);
        }
    }
    let sets: Vec<BTreeSet<Vec<i64>>> = forms
        .par_iter()
        .map(|(m, den)| {
            let limit = bound * Rational::from_integer((*den).into());
            let limit = limit.floor().to_integer();
            let limit: i64 = i64::try_from(limit).expect("bound fits in i64");
            let mut out = BTreeSet::new();
            let mut v = vec![0i64; n];
            let mut mv = vec![0i64; n];
            dfs(m, limit, 0, 0, &mut v, &mut mv, &mut out, rf);
            out
        })
        .collect();
    let mut all = BTreeSet::new();
    for s in sets {
        all.extend(s);
    }
    Ok(PhiEnumeration {
        candidates: all.into_iter().collect(),
        caps,
        involutions: involutions.len(),
        bound: bound.clone(),
    })
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    m: &IMatrix,
    limit: i64,
    depth: usize,
    q: i64,
    v: &mut Vec<i64>,
    mv: &mut Vec<i64>,
    out: &mut BTreeSet<Vec<i64>>,
    rf: &RealFormData,
) {
    let n = v.len();
    if depth == n {
        if v.contains(&0) && lemma_filter(v, rf) {
            out.insert(v.clone());
        }
        return;
    }
    let i = depth;
    let mii = m.get(i, i);
    let mut c = 0i64;
    let mut q_here = q;
    loop {
        dfs(m, limit, depth + 1, q_here, v, mv, out, rf);
        // Q(v + e_i) = Q(v) + 2(Mv)_i + M_ii.
        let next = q_here + 2 * mv[i] + mii;
        if next > limit {
            break;
        }
        q_here = next;
        c += 1;
        v[i] = c;
        for (k, x) in mv.iter_mut().enumerate() {
            *x += m.get(k, i);
        }
    }
    for (k, x) in mv.iter_mut().enumerate() {
        *x -= c * m.get(k, i);
    }
    v[i] = 0;
}

/// Per-support string counts `N(S)` and, optionally, aggregate counts for
/// whole support sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTable {
    pub rank: usize,
    pub by_support: BTreeMap<Vec<usize>, u64>,
    pub by_size: BTreeMap<usize, u64>,
}

impl CountTable {
    pub fn new(rank: usize) -> Self {
        CountTable {
            rank,
            ..Default::default()
        }
    }

    pub fn insert_support(&mut self, support: &[usize], count: u64) -> Result<()> {
        let mut s = support.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&i) = s.iter().find(|&&i| i >= self.rank) {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            });
        }
        if s.len() == self.rank {
            return Err(Error::Config("full support is not a proper subset".into()));
        }
        if self.by_size.contains_key(&s.len()) {
            return Err(Error::Config(format!("size {} already has an aggregate count", s.len())));
        }
        self.by_support.insert(s, count);
        Ok(())
    }

    pub fn insert_size(&mut self, size: usize, count: u64) -> Result<()> {
        if size >= self.rank {
            return Err(Error::Config(format!("support size {size} is not proper")));
        }
        if self.by_support.keys().any(|s| s.len() == size) {
            return Err(Error::Config(format!("size {size} already has per-support counts")));
        }
        self.by_size.insert(size, count);
        Ok(())
    }

    /// Reads the `support<TAB>count` format. Supports are comma-joined
    /// 0-based indices, `-` for the empty set, or `size=k` for an aggregate.
    pub fn parse(text: &str, rank: usize, path: &str) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            path: path.to_string(),
            line,
            column,
            message,
        };
        let mut table = CountTable::new(rank);
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim_end() == "support\tcount" => {}
            Some(_) => return Err(err(1, 1, "expected header `support\\tcount`".into())),
            None => return Ok(table),
        }
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 2 {
                return Err(err(lineno, 1, format!("expected 2 columns, found {}", cols.len())));
            }
            let count_col = cols[0].len() + 2;
            let count: u64 = cols[1]
                .trim()
                .parse()
                .map_err(|_| err(lineno, count_col, format!("bad count `{}`", cols[1])))?;
            let s = cols[0].trim();
            let res = if let Some(k) = s.strip_prefix("size=") {
                let k: usize = k
                    .parse()
                    .map_err(|_| err(lineno, 6, format!("bad size `{k}`")))?;
                table.insert_size(k, count)
            } else if s == "-" {
                table.insert_support(&[], count)
            } else {
                let idx: Vec<usize> = s
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(lineno, 1, format!("bad support `{s}`")))?;
                table.insert_support(&idx, count)
            };
            res.map_err(|e| err(lineno, 1, e.to_string()))?;
        }
        Ok(table)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("support\tcount\n");
        for (s, c) in &self.by_support {
            let label = if s.is_empty() {
                "-".to_string()
            } else {
                s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
            };
            let _ = writeln!(out, "{label}\t{c}");
        }
        for (k, c) in &self.by_size {
            let _ = writeln!(out, "size={k}\t{c}");
        }
        out
    }
}

/// `N_i = Σ_{#S=i} N(S)` for `i < rank`, and their total.
pub fn count_strings(table: &CountTable) -> (Vec<u64>, u64) {
    let mut n = vec![0u64; table.rank];
    for (s, c) in &table.by_support {
        n[s.len()] += c;
    }
    for (k, c) in &table.by_size {
        n[*k] += c;
    }
    let total = n.iter().sum();
    (n, total)
}
