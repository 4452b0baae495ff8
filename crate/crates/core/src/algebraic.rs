//! Manifestly positive representation `(τ, σ, {E_a})` of the observed
//! process, cylinder probabilities, and the simplex maps `Γ_a`.
//!
//! `σ` is the all-ones vector and is never stored: `⟨x, E_aσ⟩` is the dot
//! product of `x` with the row sums of `E_a`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::model::{TransitionMatrix, ValidatedModel};

/// Tolerance on the component sum of a [`SimplexPoint`].
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint(Vec<f64>);

impl SimplexPoint {
    /// Checks nonnegativity and unit sum (within [`SIMPLEX_TOL`]).
    pub fn new(w: Vec<f64>) -> Result<Self> {
        let sum: f64 = w.iter().sum();
        if w.is_empty() || w.iter().any(|x| x.is_nan() || *x < 0.0) || (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::ShapeMismatch(format!(
                "not a point of the simplex (sum {sum})"
            )));
        }
        Ok(SimplexPoint(w))
    }

    /// Rescales a nonnegative vector with positive sum onto the simplex.
    pub(crate) fn normalized(mut w: Vec<f64>) -> Self {
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        SimplexPoint(w)
    }

    pub fn uniform(q: usize) -> Self {
        SimplexPoint(vec![1.0 / q as f64; q])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn l1_distance(&self, other: &SimplexPoint) -> f64 {
        linalg::l1_distance(&self.0, &other.0)
    }
}

impl core::ops::Index<usize> for SimplexPoint {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Result of `Γ_a`: a simplex point, or the sentinel `0` of `W ∪ {0}` when
/// symbol `a` has zero probability from the given belief.
#[derive(Debug, Clone, PartialEq)]
pub enum GammaImage {
    Point(SimplexPoint),
    Zero,
}

impl GammaImage {
    pub fn point(self) -> Option<SimplexPoint> {
        match self {
            GammaImage::Point(p) => Some(p),
            GammaImage::Zero => None,
        }
    }
}

/// The family `{E_a}` for the unambiguous-symbol channel:
///
/// ```text
/// E_0 = F_0 + Σ_{a≥1} ε_a F_a,     E_a = (1 − ε_a) F_a  (a ≥ 1)
/// ```
///
/// where `F_a` keeps only row `a` of the transition matrix.
#[derive(Debug, Clone)]
pub struct SymbolMatrices {
    mats: Vec<Matrix>,
    rows: Vec<SimplexPoint>,
    emission: Vec<Vec<f64>>,
    eps: Vec<f64>,
    p_min: f64,
    p_max: f64,
    eps_max: f64,
}

impl SymbolMatrices {
    pub fn q(&self) -> usize {
        self.mats.len()
    }

    pub fn matrix(&self, a: usize) -> &Matrix {
        &self.mats[a]
    }

    /// `e_a`: row `a` of the transition matrix as a simplex point.
    pub fn row(&self, a: usize) -> &SimplexPoint {
        &self.rows[a]
    }

    /// `E_aσ`.
    pub fn emission(&self, a: usize) -> &[f64] {
        &self.emission[a]
    }

    /// `ε_a`, with `ε_0 = 1`.
    pub fn eps(&self, a: usize) -> f64 {
        self.eps[a]
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }

    /// `⟨x, E_aσ⟩`: probability that the next observed symbol is `a` when
    /// the hidden state is distributed as `x`.
    pub fn symbol_mass(&self, a: usize, x: &[f64]) -> f64 {
        linalg::dot(x, &self.emission[a])
    }

    /// `Γ₀ν = Σ_a α_a e_a` with `α_a ∝ ε_a ν_a`.
    pub fn gamma0(&self, nu: &[f64]) -> SimplexPoint {
        let q = self.q();
        let weights: Vec<f64> = (0..q).map(|a| self.eps[a] * nu[a]).collect();
        let total: f64 = weights.iter().sum();
        let mut out = vec![0.0; q];
        for (a, w) in weights.iter().enumerate() {
            let alpha = w / total;
            for (o, e) in out.iter_mut().zip(self.rows[a].as_slice()) {
                *o += alpha * e;
            }
        }
        SimplexPoint(out)
    }
}

pub fn build_symbol_matrices(model: &ValidatedModel) -> SymbolMatrices {
    let q = model.q();
    let e = model.transition().matrix();
    let eps: Vec<f64> = (0..q).map(|a| model.noise().eps(a)).collect();

    let mut mats = vec![Matrix::zeros(q, q); q];
    for a in 0..q {
        // Row a of E splits between E_0 (flipped) and E_a (passed through).
        let keep = if a == 0 { 0.0 } else { 1.0 - eps[a] };
        let flip = if a == 0 { 1.0 } else { eps[a] };
        for c in 0..q {
            mats[0][(a, c)] = flip * e[(a, c)];
            if a != 0 {
                mats[a][(a, c)] = keep * e[(a, c)];
            }
        }
    }
    let emission = mats.iter().map(Matrix::row_sums).collect();
    let rows = (0..q)
        .map(|a| SimplexPoint(e.row(a).to_vec()))
        .collect();

    SymbolMatrices {
        mats,
        rows,
        emission,
        eps,
        p_min: model.p_min(),
        p_max: model.p_max(),
        eps_max: model.eps_max(),
    }
}

/// Stationary law `τ` of the hidden chain: `Eᵀτ = τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pub tau: SimplexPoint,
}

const STATIONARY_STEP_TOL: f64 = 1e-14;
const STATIONARY_MAX_ITER: usize = 1_000_000;
const STATIONARY_RESIDUAL_TOL: f64 = 1e-12;

pub fn stationary_distribution(transition: &TransitionMatrix) -> Result<StationaryDistribution> {
    let e = transition.matrix();
    let tau = linalg::left_perron_vector(e, STATIONARY_STEP_TOL, STATIONARY_MAX_ITER)?;
    let residual = linalg::l1_distance(&e.tr_mul_vec(&tau), &tau);
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::NoConvergence {
            routine: "stationary distribution",
            iterations: STATIONARY_MAX_ITER,
        });
    }
    Ok(StationaryDistribution {
        tau: SimplexPoint(tau),
    })
}

/// `μ(w) = ⟨τ, E_{w₁}⋯E_{wₙ}σ⟩`, evaluated left to right as a row vector.
pub fn word_measure(
    sym: &SymbolMatrices,
    tau: &StationaryDistribution,
    word: &[usize],
) -> Result<f64> {
    let q = sym.q();
    if word.is_empty() {
        return Err(Error::ShapeMismatch("word must be nonempty".into()));
    }
    if let Some(&symbol) = word.iter().find(|&&a| a >= q) {
        return Err(Error::SymbolOutOfRange { symbol, q });
    }
    let (last, head) = word.split_last().expect("nonempty");
    let mut v = tau.tau.as_slice().to_vec();
    for &a in head {
        v = sym.matrix(a).tr_mul_vec(&v);
    }
    Ok(sym.symbol_mass(*last, &v))
}

/// `Γ_a(ν) = E_aᵀν / ⟨ν, E_aσ⟩`, or [`GammaImage::Zero`] when the
/// denominator vanishes. For `a ≠ 0` this is exactly `e_a` whenever
/// `ν_a ≠ 0`.
pub fn gamma_map(sym: &SymbolMatrices, a: usize, nu: &SimplexPoint) -> GammaImage {
    if a == 0 {
        return GammaImage::Point(sym.gamma0(nu.as_slice()));
    }
    if nu[a] != 0.0 {
        GammaImage::Point(sym.row(a).clone())
    } else {
        GammaImage::Zero
    }
}
