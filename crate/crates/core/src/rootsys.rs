//! Crystallographic root systems, their Weyl groups, dominance, and the
//! Weyl dimension formula.
//!
//! Weights are carried in fundamental-weight coordinates internally: the
//! `i`-th coordinate of `λ` is the pairing `⟨λ, α_i∨⟩`, so the simple
//! reflection `s_i` acts by `λ_j ← λ_j − λ_i·A_ij` with `A` the Cartan
//! matrix. The invariant form is the Euclidean form of the chosen ambient
//! realization (optionally rescaled).

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    dot, fmt_vec, frac, idot, rat, rat_vec, scaled_quadratic, IMatrix, QMatrix, Rational, Scaled,
};

/// Largest Weyl group we are willing to enumerate and cache (E6).
pub const MAX_CACHED_ORDER: u64 = 51_840;

/// Coordinate basis tag carried by every [`Weight`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Fundamental weights of `g` (ζ_i / ξ_i).
    GFund,
    /// Fundamental weights of `k` (ϖ_i).
    KFund,
    /// Simple roots of `g`.
    SimpleRoot,
    /// Coordinates of the ambient Euclidean realization.
    Ambient,
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g" | "gfund" | "g-fund" => Ok(Basis::GFund),
            "k" | "kfund" | "k-fund" => Ok(Basis::KFund),
            "root" | "simple-root" | "simpleroot" => Ok(Basis::SimpleRoot),
            "ambient" => Ok(Basis::Ambient),
            other => Err(Error::Config(format!("unknown basis `{other}`"))),
        }
    }
}

/// An exact rational weight tagged with the basis its coordinates refer to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: Vec<Rational>,
    basis: Basis,
}

impl Weight {
    pub fn new(coords: Vec<Rational>, basis: Basis) -> Self {
        Weight { coords, basis }
    }

    pub fn from_ints(coords: &[i64], basis: Basis) -> Self {
        Weight::new(rat_vec(coords), basis)
    }

    pub fn zero(len: usize, basis: Basis) -> Self {
        Weight::new(vec![Rational::zero(); len], basis)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|q| q.is_integer())
    }

    pub fn to_ints(&self) -> Option<Vec<i64>> {
        crate::exact::as_integers(&self.coords)
    }

    fn same_basis(&self, other: &Weight) {
        assert_eq!(
            self.basis, other.basis,
            "weight arithmetic across different bases"
        );
    }

    pub fn add(&self, other: &Weight) -> Weight {
        self.same_basis(other);
        Weight::new(crate::exact::add(&self.coords, &other.coords), self.basis)
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.same_basis(other);
        Weight::new(crate::exact::sub(&self.coords, &other.coords), self.basis)
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight::new(crate::exact::scale(c, &self.coords), self.basis)
    }

    pub fn neg(&self) -> Weight {
        self.scale(&rat(-1))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_vec(&self.coords))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(Error::InvalidType {
                family: other.to_string(),
                rank: 0,
            }),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl Family {
    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }

    /// Order of the Weyl group from the classical product formulas.
    pub fn weyl_order(self, rank: usize) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match self {
            Family::A => fact(rank + 1),
            Family::B | Family::C => (1u64 << rank) * fact(rank),
            Family::D => (1u64 << (rank - 1)) * fact(rank),
            Family::E => match rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1_152,
            Family::G => 12,
        }
    }
}

/// Named coordinate conventions for the ambient realization.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Realization {
    /// Bourbaki's planches.
    Bourbaki,
    /// E6 inside ℝ⁸ with α₁ = ½(1,−1,−1,−1,−1,−1,−1,1), α₂ = e₁+e₂,
    /// α_i = e_{i−1} − e_{i−2} (3 ≤ i ≤ 6).
    PaperE6,
    /// F4 labelled as in Knapp: α₁ = ½(e₁−e₂−e₃−e₄), α₂ = e₄, α₃ = e₃−e₄,
    /// α₄ = e₂−e₃ (α₁, α₂ short).
    KnappF4,
}

impl FromStr for Realization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bourbaki" | "default" => Ok(Realization::Bourbaki),
            "paper-e6" | "e6-r8" => Ok(Realization::PaperE6),
            "knapp-f4" => Ok(Realization::KnappF4),
            other => Err(Error::Config(format!("unknown realization `{other}`"))),
        }
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realization::Bourbaki => "bourbaki",
            Realization::PaperE6 => "paper-e6",
            Realization::KnappF4 => "knapp-f4",
        })
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn ambient_from(n: usize, entries: &[(usize, Rational)]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    for (i, q) in entries {
        v[*i] = q.clone();
    }
    v
}

fn e8_prefix(rank: usize) -> Vec<Vec<Rational>> {
    let h = frac(1, 2);
    let mut alpha1 = vec![-h.clone(); 8];
    alpha1[0] = h.clone();
    alpha1[7] = h;
    let mut roots = vec![alpha1, ambient_from(8, &[(0, rat(1)), (1, rat(1))])];
    for i in 3..=rank {
        // α_i = e_{i−1} − e_{i−2} in 1-based coordinates.
        roots.push(ambient_from(8, &[(i - 2, rat(1)), (i - 3, rat(-1))]));
    }
    roots
}

fn simple_roots_for(family: Family, rank: usize, realization: Realization) -> Result<Vec<Vec<Rational>>> {
    let bad = || Error::InvalidRealization {
        realization: realization.to_string(),
        family: family.to_string(),
        rank,
    };
    match realization {
        Realization::PaperE6 if !(family == Family::E && rank == 6) => return Err(bad()),
        Realization::KnappF4 if family != Family::F => return Err(bad()),
        _ => {}
    }
    let diff = |n: usize, i: usize, j: usize| ambient_from(n, &[(i, rat(1)), (j, rat(-1))]);
    let roots = match family {
        Family::A => (0..rank).map(|i| diff(rank + 1, i, i + 1)).collect(),
        Family::B | Family::C | Family::D => {
            let mut r: Vec<_> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            r.push(match family {
                Family::B => unit(rank, rank - 1),
                Family::C => ambient_from(rank, &[(rank - 1, rat(2))]),
                _ => ambient_from(rank, &[(rank - 2, rat(1)), (rank - 1, rat(1))]),
            });
            r
        }
        Family::E => e8_prefix(rank),
        Family::F => {
            let h = frac(1, 2);
            let short_spinor = vec![h.clone(), -h.clone(), -h.clone(), -h];
            match realization {
                Realization::KnappF4 => vec![short_spinor, unit(4, 3), diff(4, 2, 3), diff(4, 1, 2)],
                _ => vec![diff(4, 1, 2), diff(4, 2, 3), unit(4, 3), short_spinor],
            }
        }
        Family::G => vec![
            diff(3, 0, 1),
            ambient_from(3, &[(0, rat(-2)), (1, rat(1)), (2, rat(1))]),
        ],
    };
    Ok(roots)
}

/// Builds one of the simple types in a named realization.
pub fn build_root_system(family: Family, rank: usize, realization: Realization) -> Result<RootSystem> {
    if !family.is_valid_rank(rank) {
        return Err(Error::InvalidType {
            family: family.to_string(),
            rank,
        });
    }
    let simple = simple_roots_for(family, rank, realization)?;
    let mut rs = RootSystem::from_simple_roots(format!("{family}{rank}"), simple)?;
    rs.family = Some((family, rank));
    rs.realization = Some(realization);
    Ok(rs)
}

/// Selects the positive system with respect to which dominance is taken.
#[derive(Clone, Debug)]
pub enum Chamber {
    /// The fixed positive system of the root system.
    Fundamental,
    /// The positive system `w·Δ⁺`.
    Image(WeylElement),
}

/// An element of the Weyl group, stored as its action on fundamental-weight
/// coordinates together with its lexicographically least reduced word.
#[derive(Clone, Debug)]
pub struct WeylElement {
    word: Vec<usize>,
    matrix: IMatrix,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

impl WeylElement {
    /// Simple-reflection indices (0-based), leftmost factor first.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn matrix(&self) -> &IMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply_ints(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.mul_vec(v)
    }

    pub fn apply_coords(&self, v: &[Rational]) -> Vec<Rational> {
        let s = Scaled::from_rationals(v);
        Scaled {
            num: self.matrix.mul_vec(&s.num),
            den: s.den,
        }
        .to_rationals()
    }

    /// Word written with 1-based labels, e.g. `s2s4s5`.
    pub fn word_label(&self) -> String {
        if self.word.is_empty() {
            return "e".to_string();
        }
        self.word.iter().map(|i| format!("s{}", i + 1)).collect()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_label())
    }
}

/// The full enumerated Weyl group, sorted by (length, word).
#[derive(Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    /// Looks up an element by its image of ρ.
    pub fn position_by_rho_image(&self, w_rho: &[i64]) -> Option<usize> {
        self.index.get(w_rho).copied()
    }
}

/// Immutable record of a (possibly reducible) crystallographic root system.
#[derive(Debug)]
pub struct RootSystem {
    label: String,
    family: Option<(Family, usize)>,
    realization: Option<Realization>,
    rank: usize,
    simple_ambient: Vec<Vec<Rational>>,
    cartan: IMatrix,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
    fund_ambient: Vec<Vec<Rational>>,
    gram_simple: QMatrix,
    gram_fund: QMatrix,
    gram_fund_scaled: (IMatrix, i64),
    height_functional: Scaled,
    reflections: Vec<IMatrix>,
    form_scale: Rational,
    weyl: OnceLock<std::result::Result<WeylGroup, Error>>,
}

impl Clone for RootSystem {
    fn clone(&self) -> Self {
        RootSystem {
            label: self.label.clone(),
            family: self.family,
            realization: self.realization,
            rank: self.rank,
            simple_ambient: self.simple_ambient.clone(),
            cartan: self.cartan.clone(),
            positive_roots: self.positive_roots.clone(),
            positive_coroots: self.positive_coroots.clone(),
            fund_ambient: self.fund_ambient.clone(),
            gram_simple: self.gram_simple.clone(),
            gram_fund: self.gram_fund.clone(),
            gram_fund_scaled: self.gram_fund_scaled.clone(),
            height_functional: self.height_functional.clone(),
            reflections: self.reflections.clone(),
            form_scale: self.form_scale.clone(),
            weyl: OnceLock::new(),
        }
    }
}

const ROOT_LIMIT: usize = 20_000;

impl RootSystem {
    /// Builds the root system generated by the given linearly independent
    /// ambient vectors, which must have an integral finite-type Cartan matrix.
    pub fn from_simple_roots(label: impl Into<String>, simple: Vec<Vec<Rational>>) -> Result<Self> {
        let rank = simple.len();
        if rank == 0 {
            return Err(Error::NotCrystallographic("empty simple root list".into()));
        }
        let dim = simple[0].len();
        if let Some(bad) = simple.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let gram_rows: Vec<Vec<Rational>> = simple
            .iter()
            .map(|a| simple.iter().map(|b| dot(a, b)).collect())
            .collect();
        let gram_simple = QMatrix::from_rows(gram_rows)?;
        let mut cartan_rows = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let q = rat(2) * gram_simple.get(i, j) / gram_simple.get(j, j);
                if !q.is_integer() {
                    return Err(Error::NotCrystallographic(format!(
                        "Cartan entry ({i},{j}) = {q} is not an integer"
                    )));
                }
                cartan_rows[i][j] = crate::exact::checked_i64(&q.to_integer());
            }
            if cartan_rows[i][i] != 2 {
                return Err(Error::NotCrystallographic("zero simple root".into()));
            }
        }
        let cartan = IMatrix::from_rows(&cartan_rows);
        let cartan_q = cartan.to_q();
        let cartan_inv = cartan_q
            .inverse()
            .ok_or_else(|| Error::NotCrystallographic("simple roots are linearly dependent".into()))?;

        let positive_roots = close_roots(&cartan)?;
        let simple_norms: Vec<Rational> = (0..rank).map(|i| gram_simple.get(i, i).clone()).collect();
        let mut positive_coroots = Vec::with_capacity(positive_roots.len());
        for root in &positive_roots {
            let rq = rat_vec(root);
            let norm = gram_simple.bilinear(&rq, &rq);
            let co: Option<Vec<i64>> = root
                .iter()
                .zip(&simple_norms)
                .map(|(&c, n)| {
                    let q = rat(c) * n / &norm;
                    q.is_integer().then(|| crate::exact::checked_i64(&q.to_integer()))
                })
                .collect();
            positive_coroots.push(co.ok_or_else(|| {
                Error::NotCrystallographic("coroot is not integral in simple coroots".into())
            })?);
        }

        // ζ_i = Σ_k (A⁻¹)_{ik} α_k
        let fund_ambient: Vec<Vec<Rational>> = (0..rank)
            .map(|i| {
                (0..dim)
                    .map(|d| (0..rank).map(|k| cartan_inv.get(i, k) * &simple[k][d]).sum())
                    .collect()
            })
            .collect();
        let gram_fund = cartan_inv.mul(&gram_simple).mul(&cartan_inv.transpose());
        let gram_fund_scaled = gram_fund.to_scaled();
        // height(λ) = Σ_i (A⁻ᵀ λ)_i = (A⁻¹ 1)·λ
        let ones = vec![Rational::one(); rank];
        let height_functional = Scaled::from_rationals(&cartan_inv.mul_vec(&ones));

        let reflections = (0..rank)
            .map(|i| {
                let mut m = IMatrix::identity(rank);
                // (s_i λ)_j = λ_j − λ_i A_ij : column i picks up −A_ij in row j.
                for j in 0..rank {
                    m.data[j * rank + i] -= cartan.get(i, j);
                }
                m
            })
            .collect();

        Ok(RootSystem {
            label: label.into(),
            family: None,
            realization: None,
            rank,
            simple_ambient: simple,
            cartan,
            positive_roots,
            positive_coroots,
            fund_ambient,
            gram_simple,
            gram_fund,
            gram_fund_scaled,
            height_functional,
            reflections,
            form_scale: Rational::one(),
            weyl: OnceLock::new(),
        })
    }

    /// The same root system with the invariant form multiplied by `c > 0`.
    pub fn with_form_scale(&self, c: Rational) -> Self {
        assert!(c.is_positive(), "form scale must be positive");
        let mut rs = self.clone();
        rs.gram_simple = rs.gram_simple.scaled(&c);
        rs.gram_fund = rs.gram_fund.scaled(&c);
        rs.gram_fund_scaled = rs.gram_fund.to_scaled();
        rs.form_scale = &rs.form_scale * c;
        rs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Option<(Family, usize)> {
        self.family
    }

    pub fn realization(&self) -> Option<Realization> {
        self.realization
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient_dim(&self) -> usize {
        self.simple_ambient[0].len()
    }

    pub fn cartan(&self) -> &IMatrix {
        &self.cartan
    }

    pub fn simple_roots_ambient(&self) -> &[Vec<Rational>] {
        &self.simple_ambient
    }

    pub fn fundamental_weights_ambient(&self) -> &[Vec<Rational>] {
        &self.fund_ambient
    }

    /// Positive roots as simple-root coefficient vectors, sorted by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Coroots of the positive roots, in simple-coroot coefficients, in the
    /// same order as [`positive_roots`](Self::positive_roots).
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    /// All roots: positives followed by their negatives.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(|r| r.iter().map(|c| -c).collect()));
        all
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("nonempty root system")
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == coeffs)
    }

    /// A root given by simple-root coefficients, in fundamental-weight coordinates.
    pub fn root_to_fund(&self, coeffs: &[i64]) -> Vec<i64> {
        self.cartan.transpose().mul_vec(coeffs)
    }

    /// Coroot of an arbitrary root (either sign), in simple coroots.
    pub fn coroot_of(&self, coeffs: &[i64]) -> Option<Vec<i64>> {
        if let Some(i) = self.root_index(coeffs) {
            return Some(self.positive_coroots[i].clone());
        }
        let neg: Vec<i64> = coeffs.iter().map(|c| -c).collect();
        self.root_index(&neg)
            .map(|i| self.positive_coroots[i].iter().map(|c| -c).collect())
    }

    pub fn form_scale(&self) -> &Rational {
        &self.form_scale
    }

    /// Gram matrix of the fundamental weights, `(ζ_i, ζ_j)`.
    pub fn gram_fund(&self) -> &QMatrix {
        &self.gram_fund
    }

    pub fn gram_simple(&self) -> &QMatrix {
        &self.gram_simple
    }

    /// Squared norm of a fundamental-weight coordinate vector.
    pub fn norm_sq_coords(&self, v: &[Rational]) -> Rational {
        self.gram_fund.bilinear(v, v)
    }

    pub fn norm_sq_ints(&self, v: &[i64]) -> Rational {
        let (m, d) = &self.gram_fund_scaled;
        scaled_quadratic(m, *d, v, v)
    }

    pub fn inner_coords(&self, u: &[Rational], v: &[Rational]) -> Rational {
        self.gram_fund.bilinear(u, v)
    }

    /// Height of a fundamental-weight coordinate vector (sum of its
    /// simple-root coordinates), as an exact rational.
    pub fn height_coords(&self, v: &[i64]) -> Rational {
        frac(idot(&self.height_functional.num, v), self.height_functional.den)
    }

    pub fn rho(&self) -> Weight {
        Weight::from_ints(&vec![1; self.rank], Basis::GFund)
    }

    pub fn check_len(&self, w: &Weight) -> Result<()> {
        let expected = match w.basis() {
            Basis::Ambient => self.ambient_dim(),
            _ => self.rank,
        };
        if w.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: w.len(),
            });
        }
        Ok(())
    }

    /// Converts between the bases this root system knows about
    /// (`GFund`, `SimpleRoot`, `Ambient`).
    pub fn to_basis(&self, w: &Weight, target: Basis) -> Result<Weight> {
        self.check_len(w)?;
        let fund = self.fund_coords(w)?;
        let coords = match target {
            Basis::GFund => fund,
            Basis::SimpleRoot => {
                let at_inv = self
                    .cartan
                    .transpose()
                    .to_q()
                    .inverse()
                    .expect("Cartan matrix is invertible");
                at_inv.mul_vec(&fund)
            }
            Basis::Ambient => (0..self.ambient_dim())
                .map(|d| fund.iter().zip(&self.fund_ambient).map(|(c, z)| c * &z[d]).sum())
                .collect(),
            Basis::KFund => return Err(Error::BasisUnavailable(Basis::KFund)),
        };
        Ok(Weight::new(coords, target))
    }

    /// Fundamental-weight coordinates of a weight in any of this system's bases.
    pub fn fund_coords(&self, w: &Weight) -> Result<Vec<Rational>> {
        self.check_len(w)?;
        Ok(match w.basis() {
            Basis::GFund => w.coords().to_vec(),
            Basis::SimpleRoot => {
                let at = self.cartan.transpose().to_q();
                at.mul_vec(w.coords())
            }
            Basis::Ambient => (0..self.rank)
                .map(|i| {
                    let a = &self.simple_ambient[i];
                    rat(2) * dot(w.coords(), a) / dot(a, a)
                })
                .collect(),
            Basis::KFund => return Err(Error::BasisUnavailable(Basis::KFund)),
        })
    }

    pub fn norm_sq(&self, w: &Weight) -> Result<Rational> {
        Ok(self.norm_sq_coords(&self.fund_coords(w)?))
    }

    pub fn inner(&self, u: &Weight, v: &Weight) -> Result<Rational> {
        Ok(self.inner_coords(&self.fund_coords(u)?, &self.fund_coords(v)?))
    }

    /// `⟨λ, α∨⟩` for `λ` in fundamental coordinates and `α∨` in simple coroots.
    pub fn pair_coroot(v: &[Rational], coroot: &[i64]) -> Rational {
        v.iter().zip(coroot).map(|(x, &c)| x * rat(c)).sum()
    }

    pub fn is_dominant_coords(v: &[Rational]) -> bool {
        v.iter().all(|q| !q.is_negative())
    }

    /// Applies the descent walk to an integer fundamental-coordinate vector,
    /// returning the sequence of reflections applied (first applied first).
    pub fn descend_ints(&self, v: &mut [i64]) -> Vec<usize> {
        descend_with(&self.cartan, v)
    }

    pub fn reflect_ints(&self, i: usize, v: &mut [i64]) {
        reflect_with(&self.cartan, i, v);
    }

    /// The Weyl element with the given word (leftmost factor first).
    pub fn element_from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let mut m = IMatrix::identity(self.rank);
        for &i in word {
            if i >= self.rank {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: self.rank,
                });
            }
            m = m.mul(&self.reflections[i]);
        }
        Ok(self.element_from_matrix(m))
    }

    /// Wraps a matrix known to lie in W, computing its canonical word.
    pub fn element_from_matrix(&self, matrix: IMatrix) -> WeylElement {
        // w ρ in fundamental coordinates is the vector of row sums.
        let mut v: Vec<i64> = (0..self.rank).map(|i| matrix.row(i).iter().sum()).collect();
        let mut word = Vec::new();
        while let Some(i) = v.iter().position(|&x| x < 0) {
            word.push(i);
            reflect_with(&self.cartan, i, &mut v);
        }
        WeylElement { word, matrix }
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            word: Vec::new(),
            matrix: IMatrix::identity(self.rank),
        }
    }

    pub fn compose(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        self.element_from_matrix(a.matrix.mul(&b.matrix))
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let rev: Vec<usize> = w.word.iter().rev().copied().collect();
        self.element_from_word(&rev).expect("indices already validated")
    }

    /// The element sending the dominant chamber to the antidominant one.
    pub fn longest_element(&self) -> WeylElement {
        let mut v = vec![-1i64; self.rank];
        let steps = self.descend_ints(&mut v);
        let word: Vec<usize> = steps.iter().rev().copied().collect();
        self.element_from_word(&word).expect("valid indices")
    }

    /// Number of positive roots sent to negative roots by `w`.
    pub fn inversion_count(&self, w: &WeylElement) -> usize {
        self.positive_roots
            .iter()
            .filter(|r| {
                let img = w.matrix.mul_vec(&self.root_to_fund(r));
                self.height_coords(&img).is_negative()
            })
            .count()
    }

    /// The dominant representative of `v` for the chosen positive system and
    /// an element `w` with `w·v` equal to it.
    pub fn dominant_rep(&self, v: &Weight, chamber: &Chamber) -> Result<(Weight, WeylElement)> {
        let fund = self.fund_coords(v)?;
        match chamber {
            Chamber::Fundamental => {
                let mut s = Scaled::from_rationals(&fund);
                let steps = self.descend_ints(&mut s.num);
                let word: Vec<usize> = steps.iter().rev().copied().collect();
                let w = self.element_from_word(&word)?;
                Ok((Weight::new(s.to_rationals(), Basis::GFund), w))
            }
            Chamber::Image(c) => {
                let c_inv = self.inverse(c);
                let pulled = Weight::new(c_inv.apply_coords(&fund), Basis::GFund);
                let (dom, y) = self.dominant_rep(&pulled, &Chamber::Fundamental)?;
                let out = Weight::new(c.apply_coords(dom.coords()), Basis::GFund);
                let x = self.compose(&self.compose(c, &y), &c_inv);
                Ok((out, x))
            }
        }
    }

    /// Weyl's dimension formula for a dominant integral highest weight.
    pub fn weyl_dim(&self, mu: &Weight) -> Result<BigInt> {
        let fund = self.fund_coords(mu)?;
        let ints = crate::exact::as_integers(&fund).ok_or_else(|| Error::NotIntegral {
            weight: mu.to_string(),
        })?;
        if ints.iter().any(|&x| x < 0) {
            return Err(Error::NotDominant {
                weight: mu.to_string(),
            });
        }
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for co in &self.positive_coroots {
            let rho_pair: i64 = co.iter().sum();
            num *= BigInt::from(idot(co, &ints) + rho_pair);
            den *= BigInt::from(rho_pair);
        }
        Ok(num / den)
    }

    /// The enumerated Weyl group (generated once, then cached).
    pub fn weyl_group(&self) -> Result<&WeylGroup> {
        self.weyl
            .get_or_init(|| self.generate_weyl_group())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn generate_weyl_group(&self) -> std::result::Result<WeylGroup, Error> {
        if let Some((fam, rank)) = self.family {
            if fam.weyl_order(rank) > MAX_CACHED_ORDER {
                return Err(Error::Config(format!(
                    "Weyl group of {}{} is too large to enumerate",
                    fam, rank
                )));
            }
        }
        let n = self.rank;
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut mats: Vec<(IMatrix, Vec<i64>)> = Vec::new();
        let mut queue = VecDeque::new();
        let rho = vec![1i64; n];
        index.insert(rho.clone(), 0);
        mats.push((IMatrix::identity(n), rho));
        queue.push_back(0usize);
        while let Some(k) = queue.pop_front() {
            for i in 0..n {
                let (m, v) = &mats[k];
                if v[i] <= 0 {
                    continue;
                }
                let mut nv = v.clone();
                reflect_with(&self.cartan, i, &mut nv);
                if index.contains_key(&nv) {
                    continue;
                }
                if mats.len() as u64 >= MAX_CACHED_ORDER * 4 {
                    return Err(Error::Config("Weyl group too large to enumerate".into()));
                }
                let nm = self.reflections[i].mul(m);
                index.insert(nv.clone(), mats.len());
                mats.push((nm, nv));
                queue.push_back(mats.len() - 1);
            }
        }
        let mut elements: Vec<WeylElement> = mats
            .into_iter()
            .map(|(m, _)| self.element_from_matrix(m))
            .collect();
        elements.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, w)| (w.apply_ints(&rho_vec(n)), k))
            .collect();
        if let Some((fam, rank)) = self.family {
            assert_eq!(
                elements.len() as u64,
                fam.weyl_order(rank),
                "generated Weyl group disagrees with the product formula"
            );
        }
        Ok(WeylGroup { elements, index })
    }

    /// Every `w` with `w² = e`, identity included, in canonical order.
    pub fn involutions(&self) -> Result<Vec<WeylElement>> {
        let id = IMatrix::identity(self.rank);
        Ok(self
            .weyl_group()?
            .elements()
            .iter()
            .filter(|w| w.matrix.mul(&w.matrix) == id)
            .cloned()
            .collect())
    }

    /// Set of simple reflections occurring in the (any) reduced word of `w`.
    pub fn support(&self, w: &WeylElement) -> Vec<usize> {
        let mut s: Vec<usize> = w.word.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Is `v` (fundamental coordinates) regular, i.e. off every wall?
    pub fn is_regular_coords(&self, v: &[Rational]) -> bool {
        self.positive_coroots
            .iter()
            .all(|co| !Self::pair_coroot(v, co).is_zero())
    }
}

fn rho_vec(n: usize) -> Vec<i64> {
    vec![1; n]
}

pub(crate) fn reflect_with(cartan: &IMatrix, i: usize, v: &mut [i64]) {
    let c = v[i];
    if c == 0 {
        return;
    }
    for (j, x) in v.iter_mut().enumerate() {
        let a = cartan.get(i, j);
        if a != 0 {
            *x = c
                .checked_mul(a)
                .and_then(|p| x.checked_sub(p))
                .expect("integer kernel overflow in reflection");
        }
    }
}

pub(crate) fn descend_with(cartan: &IMatrix, v: &mut [i64]) -> Vec<usize> {
    let mut steps = Vec::new();
    while let Some(i) = v.iter().position(|&x| x < 0) {
        reflect_with(cartan, i, v);
        steps.push(i);
    }
    steps
}

/// All positive roots, in simple-root coefficients, by closure of the simple
/// roots under simple reflections.
pub(crate) fn close_roots(cartan: &IMatrix) -> Result<Vec<Vec<i64>>> {
    let n = cartan.rows;
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(root) = queue.pop_front() {
        for i in 0..n {
            // ⟨β, α_i∨⟩ = Σ_j β_j A_ji
            let p: i64 = (0..n).map(|j| root[j] * cartan.get(j, i)).sum();
            if p == 0 {
                continue;
            }
            let mut img = root.clone();
            img[i] -= p;
            let positive = img.iter().all(|&c| c >= 0);
            let negative = img.iter().all(|&c| c <= 0);
            if !positive && !negative {
                return Err(Error::NotCrystallographic(
                    "reflection produced a mixed-sign vector".into(),
                ));
            }
            if positive && !seen.contains_key(&img) {
                if seen.len() > ROOT_LIMIT {
                    return Err(Error::NotCrystallographic("root closure does not terminate".into()));
                }
                seen.insert(img.clone(), ());
                queue.push_back(img);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_keys().collect();
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        (ha, a).cmp(&(hb, b))
    });
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e6() -> RootSystem {
        build_root_system(Family::E, 6, Realization::PaperE6).unwrap()
    }

    #[test]
    fn a1_basics() {
        let a1 = build_root_system(Family::A, 1, Realization::Bourbaki).unwrap();
        assert_eq!(a1.num_roots(), 2);
        assert_eq!(a1.weyl_group().unwrap().order(), 2);
        let adjoint = Weight::from_ints(&[2], Basis::GFund);
        assert_eq!(a1.weyl_dim(&adjoint).unwrap(), BigInt::from(3));
        assert_eq!(a1.involutions().unwrap().len(), 2);
    }

    #[test]
    fn invalid_types_are_rejected() {
        assert!(build_root_system(Family::E, 5, Realization::Bourbaki).is_err());
        assert!(build_root_system(Family::G, 3, Realization::Bourbaki).is_err());
        assert!(build_root_system(Family::A, 3, Realization::KnappF4).is_err());
        assert!(build_root_system(Family::D, 5, Realization::PaperE6).is_err());
    }

    #[test]
    fn e6_counts() {
        let g = e6();
        assert_eq!(g.num_roots(), 72);
        assert_eq!(g.num_roots() + g.rank(), 78);
        // Highest root α1+2α2+2α3+3α4+2α5+α6.
        assert_eq!(g.highest_root(), &[1, 2, 2, 3, 2, 1]);
        assert_eq!(g.norm_sq(&g.rho()).unwrap(), rat(78));
    }

    #[test]
    fn f4_root_lengths() {
        let f4 = build_root_system(Family::F, 4, Realization::KnappF4).unwrap();
        assert_eq!(f4.num_roots(), 48);
        let mut long = 0;
        let mut short = 0;
        for r in f4.roots() {
            let n = f4.gram_simple().bilinear(&rat_vec(&r), &rat_vec(&r));
            if n == rat(2) {
                long += 1;
            } else {
                assert_eq!(n, rat(1));
                short += 1;
            }
        }
        assert_eq!((long, short), (24, 24));
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for (fam, rank, real) in [
            (Family::E, 6, Realization::PaperE6),
            (Family::F, 4, Realization::KnappF4),
            (Family::G, 2, Realization::Bourbaki),
            (Family::C, 3, Realization::Bourbaki),
        ] {
            let g = build_root_system(fam, rank, real).unwrap();
            for (i, z) in g.fundamental_weights_ambient().iter().enumerate() {
                for (j, a) in g.simple_roots_ambient().iter().enumerate() {
                    let p = rat(2) * dot(z, a) / dot(a, a);
                    assert_eq!(p, if i == j { rat(1) } else { rat(0) });
                }
            }
        }
    }

    #[test]
    fn minus_rho_goes_to_rho_via_longest_element() {
        let g = e6();
        let (dom, w) = g.dominant_rep(&g.rho().neg(), &Chamber::Fundamental).unwrap();
        assert_eq!(dom, g.rho());
        assert_eq!(w, g.longest_element());
        assert_eq!(w.length(), 36);
    }

    #[test]
    fn dominant_input_is_fixed() {
        let g = e6();
        let v = Weight::from_ints(&[0, 2, 1, 0, 3, 1], Basis::GFund);
        let (dom, w) = g.dominant_rep(&v, &Chamber::Fundamental).unwrap();
        assert_eq!(dom, v);
        assert!(w.is_identity());
    }

    #[test]
    fn image_chamber_dominance() {
        let g = build_root_system(Family::A, 2, Realization::Bourbaki).unwrap();
        let c = g.element_from_word(&[0]).unwrap();
        let v = Weight::from_ints(&[3, -1], Basis::GFund);
        let (u, x) = g.dominant_rep(&v, &Chamber::Image(c.clone())).unwrap();
        // u is dominant for s1·Δ⁺ iff s1·u is dominant for Δ⁺.
        let back = c.apply_coords(u.coords());
        assert!(RootSystem::is_dominant_coords(&back));
        assert_eq!(x.apply_coords(v.coords()), u.coords().to_vec());
    }

    #[test]
    fn a2_involutions() {
        let a2 = build_root_system(Family::A, 2, Realization::Bourbaki).unwrap();
        assert_eq!(a2.weyl_group().unwrap().order(), 6);
        assert_eq!(a2.involutions().unwrap().len(), 4);
    }

    #[test]
    fn weyl_dim_rejects_bad_input() {
        let g = e6();
        let neg = Weight::from_ints(&[0, -1, 0, 0, 0, 0], Basis::GFund);
        assert!(matches!(g.weyl_dim(&neg), Err(Error::NotDominant { .. })));
        let half = Weight::new(vec![frac(1, 2); 6], Basis::GFund);
        assert!(matches!(g.weyl_dim(&half), Err(Error::NotIntegral { .. })));
        assert_eq!(g.weyl_dim(&Weight::zero(6, Basis::GFund)).unwrap(), BigInt::one());
        // Adjoint representation: highest root = ζ2 for E6.
        let adj = Weight::from_ints(&[0, 1, 0, 0, 0, 0], Basis::GFund);
        assert_eq!(g.weyl_dim(&adj).unwrap(), BigInt::from(78));
    }

    #[test]
    fn basis_round_trips() {
        let g = e6();
        let v = Weight::new(vec![frac(1, 2), rat(-3), rat(0), frac(7, 3), rat(1), rat(2)], Basis::GFund);
        for b in [Basis::SimpleRoot, Basis::Ambient] {
            let there = g.to_basis(&v, b).unwrap();
            assert_eq!(g.to_basis(&there, Basis::GFund).unwrap(), v);
        }
        assert!(matches!(
            g.to_basis(&v, Basis::KFund),
            Err(Error::BasisUnavailable(Basis::KFund))
        ));
    }

    #[test]
    fn word_round_trip_and_length() {
        let g = e6();
        let w = g.element_from_word(&[1, 3, 4, 5, 2, 3, 4, 0]).unwrap();
        assert_eq!(w.length(), 8);
        assert_eq!(g.inversion_count(&w), 8);
        let again = g.element_from_word(w.word()).unwrap();
        assert_eq!(again, w);
        assert_eq!(g.compose(&w, &g.inverse(&w)), g.identity());
    }

    #[test]
    fn non_crystallographic_input_is_rejected() {
        // Two vectors at 135° with a length ratio that is not crystallographic.
        let bad = vec![vec![rat(1), rat(0)], vec![rat(-3), rat(1)]];
        assert!(RootSystem::from_simple_roots("bad", bad).is_err());
    }
}
