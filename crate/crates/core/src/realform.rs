//! Vogan-diagram data for equal-rank real forms: compact and noncompact
//! roots, the positive system of `k`, the minimal coset representatives
//! `W¹`, the spin-module highest weights `ρ_n^(j)`, and the K-type lattice.
//! Also the restricted root system attached to a diagram with complex pairs.

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{frac, rat, rat_vec, IMatrix, QMatrix, Rational, Scaled};
use crate::rootsys::{Basis, RootSystem, Weight, WeylElement};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Paint {
    Compact,
    Noncompact,
}

/// A Dynkin diagram with painted imaginary nodes and an optional pairing of
/// complex nodes exchanged by the Cartan involution.
#[derive(Clone, Debug)]
pub struct VoganDiagram {
    system: Arc<RootSystem>,
    painting: Vec<Paint>,
    pairing: Vec<Option<usize>>,
}

impl VoganDiagram {
    pub fn new(system: Arc<RootSystem>, painting: Vec<Paint>, pairing: Vec<Option<usize>>) -> Result<Self> {
        let n = system.rank();
        if painting.len() != n || pairing.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if painting.len() != n { painting.len() } else { pairing.len() },
            });
        }
        for (i, p) in pairing.iter().enumerate() {
            if let Some(j) = *p {
                if j >= n {
                    return Err(Error::IndexOutOfRange { index: j, rank: n });
                }
                if j == i || pairing[j] != Some(i) {
                    return Err(Error::InvalidDiagram(format!(
                        "pairing {i} -> {j} is not an involution without fixed points"
                    )));
                }
            }
        }
        let perm: Vec<usize> = (0..n).map(|i| pairing[i].unwrap_or(i)).collect();
        let a = system.cartan();
        for i in 0..n {
            for j in 0..n {
                if a.get(perm[i], perm[j]) != a.get(i, j) {
                    return Err(Error::InvalidDiagram(
                        "pairing is not a diagram automorphism".into(),
                    ));
                }
            }
        }
        Ok(VoganDiagram {
            system,
            painting,
            pairing,
        })
    }

    /// Equal-rank diagram with the listed (0-based) simple roots painted.
    pub fn equal_rank(system: Arc<RootSystem>, noncompact: &[usize]) -> Result<Self> {
        let n = system.rank();
        let mut painting = vec![Paint::Compact; n];
        for &i in noncompact {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
            painting[i] = Paint::Noncompact;
        }
        VoganDiagram::new(system, painting, vec![None; n])
    }

    pub fn system(&self) -> &Arc<RootSystem> {
        &self.system
    }

    pub fn painting(&self) -> &[Paint] {
        &self.painting
    }

    pub fn pairing(&self) -> &[Option<usize>] {
        &self.pairing
    }

    pub fn is_equal_rank(&self) -> bool {
        self.pairing.iter().all(Option::is_none)
    }

    /// A root is compact iff its coefficients on noncompact simple roots sum
    /// to an even number.
    pub fn is_compact(&self, root: &[i64]) -> bool {
        let s: i64 = root
            .iter()
            .zip(&self.painting)
            .filter(|(_, p)| **p == Paint::Noncompact)
            .map(|(c, _)| *c)
            .sum();
        s.rem_euclid(2) == 0
    }
}

/// Linear parity functional: `μ` is a K-type iff `Σ c_i μ_i` is even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityRule {
    pub coefficients: Vec<i64>,
}

impl ParityRule {
    pub fn is_even(&self, mu: &[i64]) -> bool {
        crate::exact::idot(&self.coefficients, mu).rem_euclid(2) == 0
    }
}

/// How the K-type lattice is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KTypeLattice {
    /// Configured parity functional on k-fundamental coordinates.
    Parity(ParityRule),
    /// Integrality for `Δ(g)`: the lattice of a simply connected group.
    GIntegral,
}

#[derive(Clone, Debug, Default)]
pub struct RealFormOptions {
    /// k-simple roots in the order that defines the ϖ_i labels, as
    /// simple-root coefficient vectors. Must match the computed set.
    pub k_simple_order: Option<Vec<Vec<i64>>>,
    pub parity: Option<ParityRule>,
    /// Highest weight of `p` in k-fundamental coordinates.
    pub pencil_direction: Option<Vec<i64>>,
    /// Pairs `(i, j)` of g-fundamental coordinates that may not vanish
    /// together on a dominant HP infinitesimal character.
    pub vanishing_pairs: Option<Vec<[usize; 2]>>,
}

/// Everything derived from an equal-rank Vogan diagram.
#[derive(Debug)]
pub struct RealFormData {
    diagram: VoganDiagram,
    compact_positive: Vec<Vec<i64>>,
    noncompact_positive: Vec<Vec<i64>>,
    k_simple: Vec<Vec<i64>>,
    k_rank: usize,
    k_cartan: IMatrix,
    kfund_to_gfund: QMatrix,
    gfund_to_kfund: IMatrix,
    kfund_gram: (IMatrix, i64),
    w1: Vec<WeylElement>,
    rho_n: Vec<Vec<i64>>,
    lattice: KTypeLattice,
    pencil_direction: Option<Vec<i64>>,
    vanishing_pairs: Option<Vec<[usize; 2]>>,
}

pub fn build_real_form(diagram: VoganDiagram) -> Result<RealFormData> {
    RealFormData::build(diagram, RealFormOptions::default())
}

impl RealFormData {
    pub fn build(diagram: VoganDiagram, options: RealFormOptions) -> Result<Self> {
        if !diagram.is_equal_rank() {
            return Err(Error::InvalidDiagram(
                "complex pairs present: use restricted_system for non-equal-rank diagrams".into(),
            ));
        }
        let g = diagram.system().clone();
        let n = g.rank();
        let (compact_positive, noncompact_positive): (Vec<_>, Vec<_>) = g
            .positive_roots()
            .iter()
            .cloned()
            .partition(|r| diagram.is_compact(r));

        let compact_set: HashSet<&Vec<i64>> = compact_positive.iter().collect();
        let mut computed_simple: Vec<Vec<i64>> = compact_positive
            .iter()
            .filter(|r| {
                !compact_positive.iter().any(|a| {
                    let rest: Vec<i64> = r.iter().zip(a).map(|(x, y)| x - y).collect();
                    compact_set.contains(&rest)
                })
            })
            .cloned()
            .collect();
        let r = computed_simple.len();
        let k_simple = match options.k_simple_order {
            Some(order) => {
                let mut a = order.clone();
                a.sort();
                computed_simple.sort();
                if a != computed_simple {
                    return Err(Error::Config(format!(
                        "configured k-simple roots {order:?} differ from the computed set {computed_simple:?}"
                    )));
                }
                order
            }
            None => computed_simple,
        };

        // Rows of the ζ → ϖ matrix: the k-simple coroots, then a basis of
        // coweights annihilating every compact root (the centre of k).
        let mut g2k_rows: Vec<Vec<i64>> = k_simple
            .iter()
            .map(|c| g.coroot_of(c).expect("k-simple root is a root"))
            .collect();
        let k_simple_fund: Vec<Vec<i64>> = k_simple.iter().map(|c| g.root_to_fund(c)).collect();
        g2k_rows.extend(integer_null_space(&k_simple_fund, n));
        let g2k = IMatrix::from_rows(&g2k_rows);
        let k2g = g2k.to_q().inverse().ok_or_else(|| {
            Error::InvalidDiagram("k-simple roots are linearly dependent".into())
        })?;
        let mut k_cartan = IMatrix::from_rows(&vec![vec![0; n]; n]);
        for i in 0..r {
            let gamma = g2k.mul_vec(&k_simple_fund[i]);
            for j in 0..n {
                k_cartan.data[i * n + j] = gamma[j];
            }
        }
        let k_cartan_core = IMatrix::from_rows(
            &(0..r)
                .map(|i| (0..r).map(|j| k_cartan.get(i, j)).collect())
                .collect::<Vec<Vec<i64>>>(),
        );
        let compact_count = crate::rootsys::close_roots(&k_cartan_core)?.len();
        if compact_count != compact_positive.len() {
            return Err(Error::InvalidDiagram(
                "compact roots do not form the root system generated by the k-simple roots".into(),
            ));
        }
        let group = g.weyl_group()?;
        let mut w1 = Vec::new();
        let mut rho_n = Vec::new();
        for w in group.elements() {
            let w_rho = w.apply_ints(&vec![1; n]);
            let kc = g2k.mul_vec(&w_rho);
            if kc[..r].iter().all(|&x| x > 0) {
                rho_n.push(
                    kc.iter()
                        .enumerate()
                        .map(|(i, x)| if i < r { x - 1 } else { *x })
                        .collect(),
                );
                w1.push(w.clone());
            }
        }

        let lattice = match options.parity {
            Some(p) => {
                if p.coefficients.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: p.coefficients.len(),
                    });
                }
                KTypeLattice::Parity(p)
            }
            None => KTypeLattice::GIntegral,
        };
        if let Some(pairs) = &options.vanishing_pairs {
            if let Some(&i) = pairs.iter().flatten().find(|&&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
        }
        if let Some(beta) = &options.pencil_direction {
            if beta.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: beta.len(),
                });
            }
        }

        Ok(RealFormData {
            diagram,
            compact_positive,
            noncompact_positive,
            k_simple,
            k_rank: r,
            k_cartan,
            kfund_gram: k2g.transpose().mul(g.gram_fund()).mul(&k2g).to_scaled(),
            kfund_to_gfund: k2g,
            gfund_to_kfund: g2k,
            w1,
            rho_n,
            lattice,
            pencil_direction: options.pencil_direction,
            vanishing_pairs: options.vanishing_pairs,
        })
    }

    pub fn diagram(&self) -> &VoganDiagram {
        &self.diagram
    }

    pub fn g(&self) -> &RootSystem {
        self.diagram.system()
    }

    /// Semisimple rank of `k`. The remaining ϖ-coordinates are central.
    pub fn k_rank(&self) -> usize {
        self.k_rank
    }

    /// `⟨γ_i∨, ·⟩` applied to each k-simple root: row `i < k_rank` holds the
    /// ϖ-coordinates of `γ_i`; central rows are zero.
    pub fn k_cartan(&self) -> &IMatrix {
        &self.k_cartan
    }

    pub fn k_reflect(&self, i: usize, v: &mut [i64]) {
        crate::rootsys::reflect_with(&self.k_cartan, i, v);
    }

    /// Moves `v` (integral ϖ-coordinates) to its Δ⁺(k)-dominant W(k)-conjugate
    /// and returns the reflections applied.
    pub fn k_descend(&self, v: &mut [i64]) -> Vec<usize> {
        let r = self.k_rank;
        let mut steps = Vec::new();
        while let Some(i) = v[..r].iter().position(|&x| x < 0) {
            self.k_reflect(i, v);
            steps.push(i);
        }
        steps
    }

    pub fn k_weyl_order(&self) -> usize {
        self.g().weyl_group().map(|w| w.order()).unwrap_or(0) / self.s()
    }

    pub fn rank(&self) -> usize {
        self.g().rank()
    }

    pub fn compact_positive_roots(&self) -> &[Vec<i64>] {
        &self.compact_positive
    }

    pub fn noncompact_positive_roots(&self) -> &[Vec<i64>] {
        &self.noncompact_positive
    }

    /// All compact roots (both signs).
    pub fn compact_roots(&self) -> Vec<Vec<i64>> {
        let mut v = self.compact_positive.clone();
        v.extend(self.compact_positive.iter().map(|r| r.iter().map(|c| -c).collect()));
        v
    }

    pub fn noncompact_roots(&self) -> Vec<Vec<i64>> {
        let mut v = self.noncompact_positive.clone();
        v.extend(self.noncompact_positive.iter().map(|r| r.iter().map(|c| -c).collect()));
        v
    }

    pub fn k_simple_roots(&self) -> &[Vec<i64>] {
        &self.k_simple
    }

    pub fn lattice(&self) -> &KTypeLattice {
        &self.lattice
    }

    pub fn pencil_direction(&self) -> Option<&[i64]> {
        self.pencil_direction.as_deref()
    }

    pub fn vanishing_pairs(&self) -> Option<&[[usize; 2]]> {
        self.vanishing_pairs.as_deref()
    }

    pub fn kfund_to_gfund(&self) -> &QMatrix {
        &self.kfund_to_gfund
    }

    pub fn gfund_to_kfund(&self) -> &IMatrix {
        &self.gfund_to_kfund
    }

    /// Gram matrix of the ϖ_i, as an integer matrix over a common denominator.
    pub fn kfund_gram_scaled(&self) -> (&IMatrix, i64) {
        (&self.kfund_gram.0, self.kfund_gram.1)
    }

    /// Squared norm of integral ϖ-coordinates.
    pub fn kfund_norm_sq_ints(&self, v: &[i64]) -> Rational {
        crate::exact::scaled_quadratic(&self.kfund_gram.0, self.kfund_gram.1, v, v)
    }

    /// Number of W¹ representatives, `s = |W(g)| / |W(k)|`.
    pub fn s(&self) -> usize {
        self.w1.len()
    }

    pub fn rho(&self) -> Weight {
        self.g().rho()
    }

    /// ρ_K in k-fundamental coordinates (zero on central coordinates).
    pub fn rho_k_ints(&self) -> Vec<i64> {
        (0..self.rank()).map(|i| i64::from(i < self.k_rank)).collect()
    }

    /// ρ_K in g-fundamental coordinates.
    pub fn rho_k(&self) -> Weight {
        let ones = rat_vec(&self.rho_k_ints());
        Weight::new(self.kfund_to_gfund.mul_vec(&ones), Basis::GFund)
    }

    /// W¹ in canonical order (length, then lexicographic reduced word).
    pub fn coset_reps_w1(&self) -> &[WeylElement] {
        &self.w1
    }

    /// `ρ_n^(j) = w^(j)ρ − ρ_K` in k-fundamental coordinates, indexed like W¹.
    pub fn rho_n_list(&self) -> Vec<Weight> {
        self.rho_n
            .iter()
            .map(|v| Weight::from_ints(v, Basis::KFund))
            .collect()
    }

    pub fn rho_n_ints(&self) -> &[Vec<i64>] {
        &self.rho_n
    }

    pub fn rho_n_index(&self, mu: &[i64]) -> Option<usize> {
        self.rho_n.iter().position(|r| r == mu)
    }

    pub fn check_len(&self, w: &Weight) -> Result<()> {
        match w.basis() {
            Basis::KFund => {
                if w.len() != self.rank() {
                    return Err(Error::DimensionMismatch {
                        expected: self.rank(),
                        found: w.len(),
                    });
                }
                Ok(())
            }
            _ => self.g().check_len(w),
        }
    }

    /// g-fundamental coordinates of a weight in any supported basis.
    pub fn gfund_coords(&self, w: &Weight) -> Result<Vec<Rational>> {
        self.check_len(w)?;
        match w.basis() {
            Basis::KFund => Ok(self.kfund_to_gfund.mul_vec(w.coords())),
            _ => self.g().fund_coords(w),
        }
    }

    /// k-fundamental coordinates of a weight in any supported basis.
    pub fn kfund_coords(&self, w: &Weight) -> Result<Vec<Rational>> {
        self.check_len(w)?;
        match w.basis() {
            Basis::KFund => Ok(w.coords().to_vec()),
            _ => {
                let g = self.g().fund_coords(w)?;
                Ok(self.gfund_to_kfund.to_q().mul_vec(&g))
            }
        }
    }

    /// Exact coordinates of `mu` in the target basis.
    pub fn basis_change(&self, mu: &Weight, target: Basis) -> Result<Weight> {
        if mu.basis() == target {
            self.check_len(mu)?;
            return Ok(mu.clone());
        }
        match target {
            Basis::KFund => Ok(Weight::new(self.kfund_coords(mu)?, Basis::KFund)),
            _ => {
                let g = Weight::new(self.gfund_coords(mu)?, Basis::GFund);
                self.g().to_basis(&g, target)
            }
        }
    }

    pub fn norm_sq(&self, w: &Weight) -> Result<Rational> {
        Ok(self.g().norm_sq_coords(&self.gfund_coords(w)?))
    }

    /// Integer k-fundamental coordinates of a `Δ⁺(k)`-dominant integral weight.
    pub fn dominant_kfund_ints(&self, mu: &Weight) -> Result<Vec<i64>> {
        let kc = self.kfund_coords(mu)?;
        let ints = crate::exact::as_integers(&kc).ok_or_else(|| Error::NotIntegral {
            weight: mu.to_string(),
        })?;
        if ints[..self.k_rank].iter().any(|&x| x < 0) {
            return Err(Error::NotDominant {
                weight: mu.to_string(),
            });
        }
        Ok(ints)
    }

    /// Is the dominant integral weight `μ` the highest weight of a K-type?
    pub fn ktype_test(&self, mu: &Weight) -> Result<bool> {
        let ints = self.dominant_kfund_ints(mu)?;
        Ok(self.in_ktype_lattice(&ints))
    }

    /// Lattice membership for integral k-fundamental coordinates (no
    /// dominance requirement).
    pub fn in_ktype_lattice(&self, kc: &[i64]) -> bool {
        match &self.lattice {
            KTypeLattice::Parity(p) => p.is_even(kc),
            KTypeLattice::GIntegral => self
                .kfund_to_gfund
                .mul_vec(&rat_vec(kc))
                .iter()
                .all(|q| q.is_integer()),
        }
    }

    /// Weyl dimension of the K-type with highest weight `μ`.
    pub fn ktype_dim(&self, mu: &Weight) -> Result<num_bigint::BigInt> {
        self.dominant_kfund_ints(mu)?;
        let g = self.g();
        let shifted = crate::exact::add(&self.gfund_coords(mu)?, self.rho_k().coords());
        let rho_k = self.rho_k();
        let mut num = Rational::one();
        for alpha in &self.compact_positive {
            let co = g.coroot_of(alpha).expect("compact root is a root");
            num *= RootSystem::pair_coroot(&shifted, &co) / RootSystem::pair_coroot(rho_k.coords(), &co);
        }
        debug_assert!(num.is_integer());
        Ok(num.to_integer())
    }

    /// Highest weight of the contragredient k-type, `−w₀ᵏ μ`.
    pub fn contragredient(&self, mu: &Weight) -> Result<Weight> {
        let kc = self.kfund_coords(mu)?;
        if kc[..self.k_rank].iter().any(|q| q.is_negative()) {
            return Err(Error::NotDominant {
                weight: mu.to_string(),
            });
        }
        let mut s = Scaled::from_rationals(&kc);
        for x in s.num.iter_mut() {
            *x = -*x;
        }
        self.k_descend(&mut s.num);
        Ok(Weight::new(s.to_rationals(), Basis::KFund))
    }

    /// Decomposes `w = w_k · w¹` with `w_k ∈ W(k)` and `w¹ ∈ W¹`; returns
    /// `w_k` and the index of `w¹`.
    pub fn factor(&self, w: &WeylElement) -> (WeylElement, usize) {
        let g = self.g();
        let n = self.rank();
        let w_rho = w.apply_ints(&vec![1; n]);
        let mut kc = self.gfund_to_kfund.mul_vec(&w_rho);
        self.k_descend(&mut kc);
        let rho_k = self.rho_k_ints();
        let idx = self
            .rho_n
            .iter()
            .position(|r| r.iter().zip(&rho_k).zip(&kc).all(|((a, c), b)| a + c == *b))
            .expect("k-dominant conjugate of wρ is some w¹ρ");
        let w1_inv = g.inverse(&self.w1[idx]);
        (g.compose(w, &w1_inv), idx)
    }

    /// Does `w` preserve the compact root set?
    pub fn preserves_compact_roots(&self, w: &WeylElement) -> bool {
        let g = self.g();
        let set: HashSet<Vec<i64>> = self
            .compact_roots()
            .into_iter()
            .map(|r| g.root_to_fund(&r))
            .collect();
        set.iter().all(|r| set.contains(&w.apply_ints(r)))
    }

    /// Reflection in the compact root `γ` as a matrix on ζ-coordinates.
    pub fn root_reflection(&self, root: &[i64]) -> IMatrix {
        root_reflection_matrix(self.g(), root)
    }
}

/// Primitive integer basis of `{c : m·c = 0 for every row m}`.
fn integer_null_space(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    use num_integer::Integer;
    // Reduced row echelon form over Q.
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| rat_vec(r)).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let lead = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[i][free].clone();
        }
        let lcm = v
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<num_bigint::BigInt> = v.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
        basis.push(
            ints.iter()
                .map(|x| crate::exact::checked_i64(&(x / &g)))
                .collect(),
        );
    }
    basis
}

/// `s_α λ = λ − ⟨λ, α∨⟩ α` on fundamental-weight coordinates.
pub fn root_reflection_matrix(g: &RootSystem, root: &[i64]) -> IMatrix {
    let n = g.rank();
    let alpha = g.root_to_fund(root);
    let co = g.coroot_of(root).expect("argument is a root");
    let mut m = IMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            m.data[i * n + j] -= alpha[i] * co[j];
        }
    }
    m
}

/// Restriction of `Δ(g, h_f)` to `t_f` for a diagram with complex pairs.
#[derive(Clone, Debug)]
pub struct RestrictedRootData {
    rank: usize,
    permutation: Vec<usize>,
    restricted: Vec<Vec<Rational>>,
    reduced: Vec<Vec<Rational>>,
    coroots: Vec<Vec<i64>>,
    fund_weights: Vec<Vec<Rational>>,
}

pub fn restricted_system(diagram: &VoganDiagram) -> Result<RestrictedRootData> {
    let g = diagram.system();
    let n = g.rank();
    let perm: Vec<usize> = (0..n).map(|i| diagram.pairing()[i].unwrap_or(i)).collect();
    let half = frac(1, 2);
    let mut restricted: Vec<Vec<Rational>> = g
        .roots()
        .iter()
        .map(|r| {
            (0..n)
                .map(|i| {
                    // (α + θα)/2 has coefficient (c_i + c_{π(i)})/2 on α_i.
                    &half * rat(r[i] + r[perm[i]])
                })
                .collect()
        })
        .collect();
    restricted.sort();
    let distinct: HashSet<Vec<Rational>> = restricted.iter().cloned().collect();
    let mut reduced: Vec<Vec<Rational>> = distinct
        .iter()
        .filter(|a| {
            let h: Vec<Rational> = a.iter().map(|x| x * &half).collect();
            !distinct.contains(&h)
        })
        .cloned()
        .collect();
    reduced.sort();

    let mut coroots = Vec::new();
    let mut fund_weights = Vec::new();
    for i in 0..n {
        let j = perm[i];
        if j < i {
            continue;
        }
        let mut co = vec![0i64; n];
        let mut fw = vec![Rational::zero(); n];
        if j == i {
            co[i] = 1;
            fw[i] = Rational::one();
        } else {
            co[i] = 1;
            co[j] = 1;
            fw[i] = half.clone();
            fw[j] = half.clone();
        }
        coroots.push(co);
        fund_weights.push(fw);
    }
    Ok(RestrictedRootData {
        rank: n,
        permutation: perm,
        restricted,
        reduced,
        coroots,
        fund_weights,
    })
}

impl RestrictedRootData {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The diagram involution on simple-root indices (identity off pairs).
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Restricted roots, one entry per root of `g` (a multiset), in
    /// simple-root coefficients.
    pub fn restricted_roots(&self) -> &[Vec<Rational>] {
        &self.restricted
    }

    pub fn distinct_restricted_roots(&self) -> Vec<Vec<Rational>> {
        let mut v = self.restricted.clone();
        v.dedup();
        v
    }

    /// `{ᾱ : ᾱ/2 is not a restricted root}`.
    pub fn reduced_roots(&self) -> &[Vec<Rational>] {
        &self.reduced
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced.len() == self.distinct_restricted_roots().len()
    }

    /// Coroot list: `α_i∨` for fixed nodes and `γ∨ + θ(γ∨)` for pairs, in
    /// simple-coroot coefficients.
    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    /// Fundamental-weight list: `ϖ(α_i)` and `(ϖ(γ) + ϖ(θγ))/2`, in
    /// g-fundamental coordinates.
    pub fn fund_weights(&self) -> &[Vec<Rational>] {
        &self.fund_weights
    }

    /// Pairing matrix of the fundamental-weight list against the coroot list.
    pub fn pairing_matrix(&self) -> QMatrix {
        let rows = self
            .fund_weights
            .iter()
            .map(|fw| {
                self.coroots
                    .iter()
                    .map(|co| RootSystem::pair_coroot(fw, co))
                    .collect()
            })
            .collect();
        QMatrix::from_rows(rows).expect("square")
    }
}

/// Does `μ` (g-fundamental coordinates) pair integrally with every coroot of
/// the restricted system?
pub fn restricted_integral(mu: &Weight, rrd: &RestrictedRootData) -> Result<bool> {
    if mu.basis() != Basis::GFund {
        return Err(Error::BasisUnavailable(mu.basis()));
    }
    if mu.len() != rrd.rank {
        return Err(Error::DimensionMismatch {
            expected: rrd.rank,
            found: mu.len(),
        });
    }
    Ok(rrd
        .coroots
        .iter()
        .all(|co| RootSystem::pair_coroot(mu.coords(), co).is_integer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, Family, Realization};

    fn sl2r() -> RealFormData {
        let a1 = Arc::new(build_root_system(Family::A, 1, Realization::Bourbaki).unwrap());
        build_real_form(VoganDiagram::equal_rank(a1, &[0]).unwrap()).unwrap()
    }

    #[test]
    fn sl2r_has_no_compact_roots() {
        let rf = sl2r();
        assert!(rf.compact_positive_roots().is_empty());
        assert_eq!(rf.noncompact_roots(), vec![vec![1], vec![-1]]);
        assert_eq!(rf.s(), 2);
    }

    #[test]
    fn rho_n_zero_is_rho_minus_rho_k() {
        let rf = sl2r();
        let rho_n0 = rf.basis_change(&rf.rho_n_list()[0], Basis::GFund).unwrap();
        assert_eq!(rho_n0, rf.rho().sub(&rf.rho_k()));
    }

    #[test]
    fn complex_pairs_are_rejected_by_build() {
        let a2 = Arc::new(build_root_system(Family::A, 2, Realization::Bourbaki).unwrap());
        let d = VoganDiagram::new(a2, vec![Paint::Compact; 2], vec![Some(1), Some(0)]).unwrap();
        assert!(matches!(build_real_form(d), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn non_automorphism_pairing_is_rejected() {
        let b3 = Arc::new(build_root_system(Family::B, 3, Realization::Bourbaki).unwrap());
        let r = VoganDiagram::new(b3, vec![Paint::Compact; 3], vec![Some(2), None, Some(0)]);
        assert!(matches!(r, Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn a2_swap_restricts_to_bc1() {
        let a2 = Arc::new(build_root_system(Family::A, 2, Realization::Bourbaki).unwrap());
        let d = VoganDiagram::new(a2, vec![Paint::Compact; 2], vec![Some(1), Some(0)]).unwrap();
        let rrd = restricted_system(&d).unwrap();
        let h = frac(1, 2);
        let gbar = vec![h.clone(), h.clone()];
        let two = vec![rat(1), rat(1)];
        let distinct = rrd.distinct_restricted_roots();
        assert_eq!(distinct.len(), 4);
        assert!(distinct.contains(&gbar));
        assert!(distinct.contains(&two));
        assert!(!rrd.is_reduced());
        // ᾱ/2 ∉ Δ keeps ±γ̄ and drops ±2γ̄.
        let neg: Vec<Rational> = gbar.iter().map(|x| -x).collect();
        assert_eq!(rrd.reduced_roots(), &[neg, gbar]);
        assert!(rrd.pairing_matrix().is_identity());
    }

    #[test]
    fn a1xa1_swap_restricts_to_reduced_a1() {
        let simple = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        let a1a1 = Arc::new(RootSystem::from_simple_roots("A1xA1", simple).unwrap());
        let d = VoganDiagram::new(a1a1, vec![Paint::Compact; 2], vec![Some(1), Some(0)]).unwrap();
        let rrd = restricted_system(&d).unwrap();
        assert_eq!(rrd.distinct_restricted_roots().len(), 2);
        assert!(rrd.is_reduced());
        assert_eq!(rrd.coroots(), &[vec![1, 1]]);
    }

    #[test]
    fn equal_rank_restriction_is_identity() {
        let a2 = Arc::new(build_root_system(Family::A, 2, Realization::Bourbaki).unwrap());
        let d = VoganDiagram::equal_rank(a2.clone(), &[0]).unwrap();
        let rrd = restricted_system(&d).unwrap();
        let roots: Vec<Vec<Rational>> = {
            let mut r: Vec<_> = a2.roots().iter().map(|r| rat_vec(r)).collect();
            r.sort();
            r
        };
        assert_eq!(rrd.restricted_roots(), roots.as_slice());
        assert!(rrd.is_reduced());
    }

    #[test]
    fn restricted_integrality() {
        let a2 = Arc::new(build_root_system(Family::A, 2, Realization::Bourbaki).unwrap());
        let d = VoganDiagram::new(a2, vec![Paint::Compact; 2], vec![Some(1), Some(0)]).unwrap();
        let rrd = restricted_system(&d).unwrap();
        for fw in rrd.fund_weights() {
            assert!(restricted_integral(&Weight::new(fw.clone(), Basis::GFund), &rrd).unwrap());
            let half: Vec<Rational> = fw.iter().map(|x| x * frac(1, 2)).collect();
            // Pairing of half of (ζ1+ζ2)/2 with α1∨+α2∨ is 1/2.
            assert!(!restricted_integral(&Weight::new(half, Basis::GFund), &rrd).unwrap());
        }
    }
}
