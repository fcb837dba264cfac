//! θ-stable parabolic subalgebras `q = l + u` given by a grading element
//! `H`, the good-range test for cohomological induction, the
//! Huang–Pandžić condition, and the transfer of Dirac cohomology from `L`
//! to `G` in the good range.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::exact::{rat, rat_vec, IMatrix, QMatrix, Rational, Scaled};
use crate::realform::{root_reflection_matrix, RealFormData};
use crate::rootsys::{Basis, Chamber, RootSystem, Weight, WeylElement};

#[derive(Clone, Debug)]
pub struct ThetaParabolic {
    h: Weight,
    u: Vec<Vec<i64>>,
    l: Vec<Vec<i64>>,
    u_k: Vec<Vec<i64>>,
    u_p: Vec<Vec<i64>>,
    rho_u: Weight,
    rho_u_k: Weight,
    rho_u_p: Weight,
    l_positive: Vec<Vec<i64>>,
    h_k_dominant: bool,
}

fn half_sum(g: &RootSystem, roots: &[Vec<i64>]) -> Weight {
    let n = g.rank();
    let mut acc = vec![0i64; n];
    for r in roots {
        for (a, b) in acc.iter_mut().zip(g.root_to_fund(r)) {
            *a += b;
        }
    }
    Weight::new(
        acc.iter().map(|&x| Rational::new(x.into(), 2.into())).collect(),
        Basis::GFund,
    )
}

/// Parabolic defined by the eigenvalues `α(H) = (α, H)`. Roots of `l` are
/// ordered by `(α, ρ_K)` and then `(α, ρ)`, which extends `Δ⁺(k)` whenever
/// `H` is Δ⁺(k)-dominant.
pub fn build_parabolic(h: &Weight, rf: &RealFormData) -> Result<ThetaParabolic> {
    let g = rf.g();
    let hc = rf.gfund_coords(h)?;
    let rho_k = rf.rho_k();
    let rho = rf.rho();
    let mut u = Vec::new();
    let mut l = Vec::new();
    let mut l_positive = Vec::new();
    for root in g.roots() {
        let rz = rat_vec(&g.root_to_fund(&root));
        let ev = g.inner_coords(&rz, &hc);
        if ev.is_positive() {
            u.push(root);
        } else if ev.is_zero() {
            let a = g.inner_coords(&rz, rho_k.coords());
            let positive = a.is_positive() || (a.is_zero() && g.inner_coords(&rz, rho.coords()).is_positive());
            if positive {
                l_positive.push(root.clone());
            }
            l.push(root);
        }
    }
    let kc = rf.kfund_coords(&Weight::new(hc.clone(), Basis::GFund))?;
    let h_k_dominant = kc[..rf.k_rank()].iter().all(|q| !q.is_negative());
    let (u_k, u_p): (Vec<_>, Vec<_>) = u.iter().cloned().partition(|r| rf.diagram().is_compact(r));
    let rho_u = half_sum(g, &u);
    let rho_u_k = half_sum(g, &u_k);
    let rho_u_p = half_sum(g, &u_p);
    debug_assert_eq!(rho_u, rho_u_k.add(&rho_u_p));
    Ok(ThetaParabolic {
        l_positive,
        h_k_dominant,
        h: Weight::new(hc, Basis::GFund),
        u,
        l,
        u_k,
        u_p,
        rho_u,
        rho_u_k,
        rho_u_p,
    })
}

/// Parabolic whose Levi is generated by the simple roots in `support`:
/// `H = Σ_{i ∉ S} (2/|α_i|²) ζ_i`, so `α_j(H) = 1` off the support.
pub fn parabolic_from_support(support: &[usize], rf: &RealFormData) -> Result<ThetaParabolic> {
    Ok(build_parabolic(&support_grading(support, rf)?, rf)?)
}

/// The parabolic of `support` moved by `w`: grading element `w·H`. For
/// `w ∈ W¹` this runs over the θ-stable parabolics with the same Levi type
/// relative to the different positive systems containing Δ⁺(k).
pub fn parabolic_from_support_at(support: &[usize], w: &WeylElement, rf: &RealFormData) -> Result<ThetaParabolic> {
    let h = support_grading(support, rf)?;
    build_parabolic(&Weight::new(w.apply_coords(h.coords()), Basis::GFund), rf)
}

fn support_grading(support: &[usize], rf: &RealFormData) -> Result<Weight> {
    let g = rf.g();
    let n = g.rank();
    if let Some(&i) = support.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    let h: Vec<Rational> = (0..n)
        .map(|i| {
            if support.contains(&i) {
                Rational::zero()
            } else {
                rat(2) / g.gram_simple().get(i, i)
            }
        })
        .collect();
    Ok(Weight::new(h, Basis::GFund))
}

impl ThetaParabolic {
    pub fn h(&self) -> &Weight {
        &self.h
    }

    pub fn u_roots(&self) -> &[Vec<i64>] {
        &self.u
    }

    pub fn l_roots(&self) -> &[Vec<i64>] {
        &self.l
    }

    pub fn u_k_roots(&self) -> &[Vec<i64>] {
        &self.u_k
    }

    pub fn u_p_roots(&self) -> &[Vec<i64>] {
        &self.u_p
    }

    pub fn rho_u(&self) -> &Weight {
        &self.rho_u
    }

    pub fn rho_u_k(&self) -> &Weight {
        &self.rho_u_k
    }

    pub fn rho_u_p(&self) -> &Weight {
        &self.rho_u_p
    }

    /// `S = #Δ(u∩k)`.
    pub fn s(&self) -> usize {
        self.u_k.len()
    }

    /// Is `H` dominant for Δ⁺(k), so that `Δ(u) ∪ Δ⁺(l)` contains Δ⁺(k)?
    pub fn is_h_k_dominant(&self) -> bool {
        self.h_k_dominant
    }

    /// Positive roots of `l`.
    pub fn l_positive(&self) -> Vec<Vec<i64>> {
        self.l_positive.clone()
    }

    /// Simple roots of `Δ⁺(l)`: the indecomposable positive roots.
    pub fn l_simple(&self) -> Vec<Vec<i64>> {
        let pos = self.l_positive();
        pos.iter()
            .filter(|r| {
                !pos.iter().any(|a| {
                    let rest: Vec<i64> = r.iter().zip(a).map(|(x, y)| x - y).collect();
                    pos.contains(&rest)
                })
            })
            .cloned()
            .collect()
    }

    /// `ρ_{L∩K}`: half the sum of `Δ⁺(l) ∩ Δ(k)`.
    pub fn rho_l_k(&self, rf: &RealFormData) -> Weight {
        let roots: Vec<Vec<i64>> = self
            .l_positive()
            .into_iter()
            .filter(|r| rf.diagram().is_compact(r))
            .collect();
        half_sum(rf.g(), &roots)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeVerdict {
    Good,
    WeaklyGood,
    Neither,
}

/// Signs of `⟨λ_L + ρ(u), α∨⟩` over `Δ(u)`.
pub fn range_test(lambda_l: &Weight, q: &ThetaParabolic, rf: &RealFormData) -> Result<RangeVerdict> {
    let g = rf.g();
    let lc = rf.gfund_coords(lambda_l)?;
    for r in q.l_positive().iter().filter(|r| rf.diagram().is_compact(r)) {
        let co = g.coroot_of(r).expect("root");
        if RootSystem::pair_coroot(&lc, &co).is_negative() {
            return Err(Error::NotDominant {
                weight: lambda_l.to_string(),
            });
        }
    }
    let shifted = crate::exact::add(&lc, q.rho_u.coords());
    let mut verdict = RangeVerdict::Good;
    for r in &q.u {
        let p = RootSystem::pair_coroot(&shifted, &g.coroot_of(r).expect("root"));
        if p.is_negative() {
            return Ok(RangeVerdict::Neither);
        }
        if p.is_zero() {
            verdict = RangeVerdict::WeaklyGood;
        }
    }
    Ok(verdict)
}

/// Data satisfying `{δ − ρ_n^(j)} + ρ_K = wΛ` with `δ` a K-type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpWitness {
    pub delta: Weight,
    pub j: usize,
    pub w: WeylElement,
}

/// Searches for a Huang–Pandžić witness. Order: W¹ element `w^(i)` (the
/// representative moving the dominant conjugate of Λ), then `j`.
pub fn hp_check(lambda: &Weight, rf: &RealFormData) -> Result<Option<HpWitness>> {
    let g = rf.g();
    let (dom, u) = g.dominant_rep(&Weight::new(rf.gfund_coords(lambda)?, Basis::GFund), &Chamber::Fundamental)?;
    let Some(dom_ints) = dom.to_ints() else {
        return Ok(None);
    };
    let rho_k = rf.rho_k_ints();
    let r = rf.k_rank();
    for w1 in rf.coset_reps_w1() {
        let image = rf.gfund_to_kfund().mul_vec(&w1.apply_ints(&dom_ints));
        let gamma: Vec<i64> = image.iter().zip(&rho_k).map(|(a, b)| a - b).collect();
        if gamma[..r].iter().any(|&x| x < 0) {
            continue;
        }
        for (j, rho_n) in rf.rho_n_ints().iter().enumerate() {
            let delta: Vec<i64> = gamma.iter().zip(rho_n).map(|(a, b)| a + b).collect();
            if delta[..r].iter().any(|&x| x < 0) || !rf.in_ktype_lattice(&delta) {
                continue;
            }
            return Ok(Some(HpWitness {
                delta: Weight::from_ints(&delta, Basis::KFund),
                j,
                w: g.compose(w1, &u),
            }));
        }
    }
    Ok(None)
}

/// `½(1 + θ)λ + ν` with θ acting on g-fundamental coordinates.
pub fn inf_char_from_parameter(lambda: &Weight, nu: &Weight, theta: &QMatrix) -> Result<Weight> {
    if lambda.len() != nu.len() || theta.rows != lambda.len() || theta.cols != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: lambda.len(),
            found: if nu.len() != lambda.len() { nu.len() } else { theta.rows },
        });
    }
    if !theta.mul(theta).is_identity() {
        return Err(Error::NotInvolution);
    }
    let t = theta.mul_vec(lambda.coords());
    let half = Rational::new(1.into(), 2.into());
    let out = lambda
        .coords()
        .iter()
        .zip(&t)
        .zip(nu.coords())
        .map(|((a, b), c)| (a + b) * &half + c)
        .collect();
    Ok(Weight::new(out, lambda.basis()))
}

/// Which hypothesis of the transfer theorem, or which step of its proof,
/// failed.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransferFailure {
    #[error("the grading element is not Δ⁺(k)-dominant")]
    ParabolicNotDominant,
    #[error("λ_L + ρ(u) is not in the good range ({0:?})")]
    NotGoodRange(RangeVerdict),
    #[error("λ_L + ρ(u) fails the Huang–Pandžić condition")]
    HpConditionFails,
    #[error("γ_L + ρ_(L∩K) is not W(l)-conjugate to λ_L")]
    NotConjugate,
    #[error("transferred weight violates a conclusion of the theorem: {0}")]
    ConclusionFails(String),
    #[error(transparent)]
    Input(#[from] Error),
}

/// Δ⁺(l)-dominant W(l)-conjugate of `v` (g-fundamental coordinates), by
/// descent through reflections in the simple roots of `l`.
pub fn l_dominant(v: &[Rational], q: &ThetaParabolic, rf: &RealFormData) -> Vec<Rational> {
    let g = rf.g();
    let simple: Vec<(Vec<i64>, IMatrix)> = q
        .l_simple()
        .into_iter()
        .map(|r| {
            let co = g.coroot_of(&r).expect("root");
            (co, root_reflection_matrix(g, &r))
        })
        .collect();
    let mut s = Scaled::from_rationals(v);
    loop {
        let Some((_, m)) = simple
            .iter()
            .find(|(co, _)| crate::exact::idot(co, &s.num) < 0)
        else {
            break;
        };
        s.num = m.mul_vec(&s.num);
    }
    s.to_rationals()
}

/// Carries a K̃_L-type `γ_L` of `H_D(Z)` to the K̃-type `γ_L + ρ(u∩p)` of
/// `H_D(L_S(Z))`, checking each hypothesis and the proof's assertions.
pub fn transfer_nonvanishing(
    gamma_l: &Weight,
    lambda_l: &Weight,
    q: &ThetaParabolic,
    rf: &RealFormData,
) -> std::result::Result<Weight, TransferFailure> {
    if !q.is_h_k_dominant() {
        return Err(TransferFailure::ParabolicNotDominant);
    }
    let verdict = range_test(lambda_l, q, rf)?;
    if verdict != RangeVerdict::Good {
        return Err(TransferFailure::NotGoodRange(verdict));
    }
    let lam = Weight::new(rf.gfund_coords(lambda_l)?, Basis::GFund);
    let big_lambda = lam.add(q.rho_u());
    if hp_check(&big_lambda, rf)?.is_none() {
        return Err(TransferFailure::HpConditionFails);
    }
    let gl = Weight::new(rf.gfund_coords(gamma_l)?, Basis::GFund);
    let lhs = gl.add(&q.rho_l_k(rf));
    if l_dominant(lhs.coords(), q, rf) != l_dominant(lam.coords(), q, rf) {
        return Err(TransferFailure::NotConjugate);
    }
    let gamma_g = gl.add(q.rho_u_p());
    let shifted = rf.kfund_coords(&gamma_g.add(&rf.rho_k()))?;
    let r = rf.k_rank();
    let ints = crate::exact::as_integers(&shifted)
        .ok_or_else(|| TransferFailure::ConclusionFails("γ_G + ρ_K is not integral".into()))?;
    if ints[..r].iter().any(|&x| x <= 0) {
        return Err(TransferFailure::ConclusionFails(
            "γ_G + ρ_K is not dominant regular for Δ⁺(k)".into(),
        ));
    }
    // γ_G + ρ_K = w₁(λ_L + ρ(u)) with w₁ ∈ W(l) fixing ρ(u).
    let moved = gamma_g.add(&rf.rho_k()).sub(q.rho_u());
    if l_dominant(moved.coords(), q, rf) != l_dominant(lam.coords(), q, rf) {
        return Err(TransferFailure::ConclusionFails(
            "γ_G + ρ_K is not W(l)-conjugate to λ_L + ρ(u)".into(),
        ));
    }
    let out = Weight::new(rf.kfund_coords(&gamma_g)?, Basis::KFund);
    Ok(out)
}

/// Checks that `w` preserves the set `Δ(u)`.
pub fn stabilizes_u(w_matrix: &IMatrix, q: &ThetaParabolic, rf: &RealFormData) -> bool {
    let g = rf.g();
    let set: std::collections::HashSet<Vec<i64>> = q.u.iter().map(|r| g.root_to_fund(r)).collect();
    set.iter().all(|r| set.contains(&w_matrix.mul_vec(r)))
}
