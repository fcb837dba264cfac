//! Spin norms and the tests built on them: Parthasarathy's inequality, the
//! Vogan pencil, u-smallness and the parity of spin lowest K-types inside
//! Dirac cohomology.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational, Scaled};
use crate::realform::RealFormData;
use crate::rootsys::{Basis, Chamber, Weight, WeylElement};

/// Δ⁺(k)-dominant W(k)-conjugate of `v`, in k-fundamental coordinates.
pub fn prv_dominant(v: &Weight, rf: &RealFormData) -> Result<Weight> {
    let mut s = Scaled::from_rationals(&rf.kfund_coords(v)?);
    rf.k_descend(&mut s.num);
    Ok(Weight::new(s.to_rationals(), Basis::KFund))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minimizer {
    /// Index into the canonical W¹ order.
    pub index: usize,
    /// `{μ − ρ_n^(j)}` in k-fundamental coordinates.
    pub conjugate: Weight,
    /// Some `w` with `{μ − ρ_n^(j)} + ρ_K = wΛ`, when Λ was supplied and the
    /// two sides are W(g)-conjugate.
    pub witness: Option<WeylElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinNormResult {
    pub norm_sq: Rational,
    pub minimizers: Vec<Minimizer>,
}

impl SpinNormResult {
    pub fn indices(&self) -> Vec<usize> {
        self.minimizers.iter().map(|m| m.index).collect()
    }
}

/// `min_j ‖{μ − ρ_n^(j)} + ρ_K‖²` together with the minimizing indices.
pub fn spin_norm_sq(mu: &Weight, rf: &RealFormData, lambda: Option<&Weight>) -> Result<SpinNormResult> {
    let kc = rf.kfund_coords(mu)?;
    if kc[..rf.k_rank()].iter().any(|q| q.is_negative()) {
        return Err(Error::NotDominant {
            weight: mu.to_string(),
        });
    }
    let s = Scaled::from_rationals(&kc);
    let d = s.den;
    let rho_k = rf.rho_k_ints();
    let (gram, gden) = rf.kfund_gram_scaled();
    let mut best: Option<Rational> = None;
    let mut hits: Vec<(usize, Vec<i64>)> = Vec::new();
    for (j, rho_n) in rf.rho_n_ints().iter().enumerate() {
        let mut v: Vec<i64> = s.num.iter().zip(rho_n).map(|(a, b)| a - b * d).collect();
        rf.k_descend(&mut v);
        let shifted: Vec<i64> = v.iter().zip(&rho_k).map(|(a, b)| a + b * d).collect();
        let norm = crate::exact::scaled_quadratic(gram, gden * d * d, &shifted, &shifted);
        match &best {
            Some(b) if norm > *b => {}
            Some(b) if norm == *b => hits.push((j, v)),
            _ => {
                best = Some(norm);
                hits = vec![(j, v)];
            }
        }
    }
    let norm_sq = best.expect("W¹ is nonempty");
    let lambda_dom = match lambda {
        Some(l) => Some(rf.g().dominant_rep(&Weight::new(rf.gfund_coords(l)?, Basis::GFund), &Chamber::Fundamental)?),
        None => None,
    };
    let minimizers = hits
        .into_iter()
        .map(|(index, v)| {
            let conjugate = Weight::new(Scaled { num: v, den: d }.to_rationals(), Basis::KFund);
            let witness = match &lambda_dom {
                None => None,
                Some((dom, u_l)) => {
                    let target = conjugate.add(&Weight::from_ints(&rho_k, Basis::KFund));
                    let tg = Weight::new(rf.gfund_coords(&target)?, Basis::GFund);
                    let (tdom, u_t) = rf.g().dominant_rep(&tg, &Chamber::Fundamental)?;
                    // u_t·target = u_l·Λ, so target = u_t⁻¹ u_l Λ.
                    (tdom == *dom).then(|| rf.g().compose(&rf.g().inverse(&u_t), u_l))
                }
            };
            Ok(Minimizer {
                index,
                conjugate,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpinNormResult { norm_sq, minimizers })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiracVerdict {
    Violated,
    Equality,
    StrictlyAbove,
}

/// Compares a squared spin norm with `‖Λ‖²`.
pub fn dirac_compare(spin_sq: &Rational, lambda_sq: &Rational) -> DiracVerdict {
    match spin_sq.cmp(lambda_sq) {
        std::cmp::Ordering::Less => DiracVerdict::Violated,
        std::cmp::Ordering::Equal => DiracVerdict::Equality,
        std::cmp::Ordering::Greater => DiracVerdict::StrictlyAbove,
    }
}

/// Parthasarathy's inequality `‖μ‖²_spin ≥ ‖Λ‖²` for the infinitesimal
/// character `Λ`.
pub fn dirac_test(spin_sq: &Rational, lambda: &Weight, rf: &RealFormData) -> Result<DiracVerdict> {
    Ok(dirac_compare(spin_sq, &rf.norm_sq(lambda)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilResult {
    pub min_norm_sq: Rational,
    pub argmin: usize,
    /// Spin norms of `δ + nβ` for `n = 0, 1, …` as evaluated.
    pub values: Vec<Rational>,
    /// The step limit was reached before `cap` steps passed without improvement.
    pub inconclusive: bool,
}

impl PencilResult {
    /// Is the evaluated sequence nondecreasing after the argmin?
    pub fn tail_nondecreasing(&self) -> bool {
        self.values[self.argmin..].windows(2).all(|w| w[0] <= w[1])
    }
}

/// `2(1 + ⌈‖Λ‖/‖β‖⌉)`.
pub fn default_pencil_cap(lambda: &Weight, rf: &RealFormData) -> Result<usize> {
    let beta = rf.pencil_direction().ok_or(Error::NoPencilDirection)?;
    let ratio = rf.norm_sq(lambda)? / rf.kfund_norm_sq_ints(beta);
    let mut c: usize = 0;
    while rat(c as i64 * c as i64) < ratio {
        c += 1;
    }
    Ok(2 * (1 + c))
}

/// Minimum spin norm along the pencil `δ + nβ`. Stops once `cap`
/// consecutive steps bring no improvement; `max_steps` bounds the search.
pub fn pencil_min_spin_bounded(delta: &Weight, rf: &RealFormData, cap: usize, max_steps: usize) -> Result<PencilResult> {
    let beta = rf.pencil_direction().ok_or(Error::NoPencilDirection)?;
    let beta = Weight::from_ints(beta, Basis::KFund);
    if !rf.ktype_test(delta)? {
        return Err(Error::Precondition(format!("{delta} is not a K-type")));
    }
    let start = Weight::new(rf.kfund_coords(delta)?, Basis::KFund);
    let mut values = Vec::new();
    let mut argmin = 0;
    let mut current = start;
    loop {
        let n = values.len();
        let v = spin_norm_sq(&current, rf, None)?.norm_sq;
        if n == 0 || v < values[argmin] {
            argmin = n;
        }
        values.push(v);
        if n - argmin >= cap {
            break;
        }
        if n + 1 >= max_steps {
            let min_norm_sq = values[argmin].clone();
            return Ok(PencilResult {
                min_norm_sq,
                argmin,
                values,
                inconclusive: true,
            });
        }
        current = current.add(&beta);
    }
    Ok(PencilResult {
        min_norm_sq: values[argmin].clone(),
        argmin,
        values,
        inconclusive: false,
    })
}

pub fn pencil_min_spin(delta: &Weight, rf: &RealFormData, cap: usize) -> Result<PencilResult> {
    pencil_min_spin_bounded(delta, rf, cap, 16 * (cap + 1))
}

/// Is the g-dominant conjugate `μ̂` of `μ` below `2ρ`, i.e. is `2ρ − μ̂` a
/// nonnegative combination of simple roots?
pub fn usmall_test(mu: &Weight, rf: &RealFormData) -> Result<bool> {
    let g = rf.g();
    let (dom, _) = g.dominant_rep(&Weight::new(rf.gfund_coords(mu)?, Basis::GFund), &Chamber::Fundamental)?;
    let two_rho = g.rho().scale(&rat(2));
    let gap = g.to_basis(&two_rho.sub(&dom), Basis::SimpleRoot)?;
    Ok(gap.coords().iter().all(|q| !q.is_negative()))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_length(len: usize) -> Self {
        if len % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One K̃-type of Dirac cohomology: `{μ − ρ_n^(j)}` for a minimizing `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    /// The minimizing index `j`.
    pub index: usize,
    /// `j′` with `ρ_n^(j′)` contragredient to `ρ_n^(j)`.
    pub partner: usize,
    pub parity: Parity,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LktParity {
    pub weight: Weight,
    pub contributions: Vec<Contribution>,
}

impl LktParity {
    /// The common parity of all contributions, if they agree.
    pub fn parity(&self) -> Option<Parity> {
        let first = self.contributions.first()?.parity;
        self.contributions.iter().all(|c| c.parity == first).then_some(first)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexVerdict {
    Cancels,
    Survives,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiParity {
    pub entries: Vec<LktParity>,
    pub verdict: IndexVerdict,
}

/// Splits Dirac cohomology between its even and odd parts. Each spin lowest
/// K-type `μ` contributes `{μ − ρ_n^(j)}` for every minimizing `j`; since
/// `−ρ_n^(j)` is the lowest weight of `E_{ρ_n^(j′)}`, that K̃-type sits in the
/// part given by the parity of `ℓ(w^(j′))`. The index cancels when both parts
/// are the same nonzero multiset.
pub fn di_parity(lkts: &[Weight], lambda: &Weight, rf: &RealFormData) -> Result<DiParity> {
    let lambda_sq = rf.norm_sq(lambda)?;
    let w1 = rf.coset_reps_w1();
    let mut entries = Vec::with_capacity(lkts.len());
    let mut even: Vec<Vec<Rational>> = Vec::new();
    let mut odd: Vec<Vec<Rational>> = Vec::new();
    for mu in lkts {
        let res = spin_norm_sq(mu, rf, None)?;
        if dirac_compare(&res.norm_sq, &lambda_sq) != DiracVerdict::Equality {
            return Err(Error::Precondition(format!(
                "spin norm of {mu} is {} but the infinitesimal character has norm {}",
                crate::exact::fmt_rat(&res.norm_sq),
                crate::exact::fmt_rat(&lambda_sq)
            )));
        }
        let mut contributions = Vec::with_capacity(res.minimizers.len());
        for m in &res.minimizers {
            let rho_n = Weight::from_ints(&rf.rho_n_ints()[m.index], Basis::KFund);
            let dual = rf.contragredient(&rho_n)?.to_ints().expect("integral");
            let partner = rf
                .rho_n_index(&dual)
                .expect("contragredient of a spin-module weight is one");
            let parity = Parity::of_length(w1[partner].length());
            match parity {
                Parity::Even => even.push(m.conjugate.coords().to_vec()),
                Parity::Odd => odd.push(m.conjugate.coords().to_vec()),
            }
            contributions.push(Contribution {
                index: m.index,
                partner,
                parity,
                weight: m.conjugate.clone(),
            });
        }
        entries.push(LktParity {
            weight: Weight::new(rf.kfund_coords(mu)?, Basis::KFund),
            contributions,
        });
    }
    even.sort();
    odd.sort();
    let verdict = if !even.is_empty() && even == odd {
        IndexVerdict::Cancels
    } else {
        IndexVerdict::Survives
    };
    Ok(DiParity { entries, verdict })
}
