//! Support of the Blackwell measure for the unambiguous-symbol channel.
//!
//! The support is the closure of the orbits `Γ₀ᵐ e_j` (`j ≥ 1`), which all
//! accumulate at the fixed point `τ̄` of `Γ₀`. Mass propagates along an
//! orbit as `φ(Γ₀ᵐe_j) = c_{j,m} φ(e_j)` with
//! `c_{j,m} = ∏_{i<m} ⟨Γ₀ⁱe_j, E₀σ⟩`.
//!
//! When `E₀` is one-to-one every orbit point is distinct, so all `N + 1`
//! points of each chain are kept even after they agree with `τ̄` to machine
//! precision. Only for a singular `E₀`, where orbits can genuinely hit `τ̄`
//! or merge, are points compared against `dedup_tol`.

use alloc::vec::Vec;

use crate::algebraic::{SimplexPoint, SymbolMatrices};
use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_DEDUP_TOL: f64 = 1e-12;

/// `|det E₀| / ∏‖row‖₂` at or below this counts as singular.
pub const SINGULAR_E0_TOL: f64 = 1e-10;

const FIXED_POINT_MAX_ITER: usize = 1_000_000;
const FIXED_POINT_AGREEMENT: f64 = 1e-10;

/// One retained orbit point `Γ₀ᵐ e_j` with its coefficient `c_{j,m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitPoint {
    pub m: usize,
    pub w: SimplexPoint,
    pub coeff: f64,
}

/// The retained part of the orbit of `e_j`, i.e. `Δ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub j: usize,
    pub points: Vec<OrbitPoint>,
    /// Set when the chain reached `τ̄` (finite support). The orbit then
    /// stays at `τ̄` forever, so the last point stands for the geometric
    /// tail and carries this multiplier, `1 / (1 − ⟨τ̄, E₀σ⟩)`.
    pub tail_factor: Option<f64>,
}

impl Chain {
    /// `c_{j,m}` times the tail multiplier on the closing point: the total
    /// Blackwell weight (relative to `φ(e_j)`) sitting at each point.
    pub fn weights(&self) -> impl Iterator<Item = (&OrbitPoint, f64)> + '_ {
        let last = self.points.len().saturating_sub(1);
        self.points.iter().enumerate().map(move |(k, pt)| {
            let tail = match self.tail_factor {
                Some(f) if k == last => f,
                _ => 1.0,
            };
            (pt, pt.coeff * tail)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportAtlas {
    pub tau_bar: SimplexPoint,
    /// `chains[k]` holds `Δ_{k+1}`.
    pub chains: Vec<Chain>,
    pub depth: usize,
    pub finite_support: bool,
    pub dedup_tol: f64,
    /// Whether `E₀` was found one-to-one (orbit points provably distinct).
    pub e0_injective: bool,
}

impl SupportAtlas {
    pub fn chain(&self, j: usize) -> Option<&Chain> {
        self.chains.iter().find(|c| c.j == j)
    }

    /// All retained points as `(j, point)`, in chain order.
    pub fn points(&self) -> impl Iterator<Item = (usize, &OrbitPoint)> + '_ {
        self.chains
            .iter()
            .flat_map(|c| c.points.iter().map(move |p| (c.j, p)))
    }

    pub fn len(&self) -> usize {
        self.chains.iter().map(|c| c.points.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionRates {
    /// Largest `⟨w, E₀σ⟩` over the computed orbit points and `τ̄`.
    pub gamma_hat: f64,
    /// `1 − (q−1)(p − ε P)`, only when `ε_max < p`.
    pub r: Option<f64>,
}

/// The nontrivial fixed point of `Γ₀`.
///
/// Iterates `Γ₀` from the uniform point and cross-checks against the
/// Perron vector of `E₀ᵀ` obtained from a bordered linear solve with the
/// spectral radius of `E₀`. Either route may supply the answer if the
/// other fails, but when both succeed they must agree within `1e-10`.
pub fn fixed_point_tau_bar(sym: &SymbolMatrices, tol: f64) -> Result<SimplexPoint> {
    let iterated = iterate_gamma0(sym, tol);
    let direct = perron_vector_direct(sym);
    match (iterated, direct) {
        (Ok(a), Ok(b)) => {
            if a.l1_distance(&b) > FIXED_POINT_AGREEMENT.max(tol) {
                return Err(Error::NoConvergence {
                    routine: "fixed point cross-check",
                    iterations: FIXED_POINT_MAX_ITER,
                });
            }
            Ok(a)
        }
        (Ok(a), Err(_)) => Ok(a),
        (Err(e), Ok(b)) => {
            let residual = sym.gamma0(b.as_slice()).l1_distance(&b);
            if residual <= tol {
                Ok(b)
            } else {
                Err(e)
            }
        }
        (Err(e), Err(_)) => Err(e),
    }
}

fn iterate_gamma0(sym: &SymbolMatrices, tol: f64) -> Result<SimplexPoint> {
    let mut nu = SimplexPoint::uniform(sym.q());
    for _ in 0..FIXED_POINT_MAX_ITER {
        let next = sym.gamma0(nu.as_slice());
        let step = next.l1_distance(&nu);
        nu = next;
        if step <= tol {
            return Ok(nu);
        }
    }
    Err(Error::NoConvergence {
        routine: "Gamma_0 fixed-point iteration",
        iterations: FIXED_POINT_MAX_ITER,
    })
}

/// Solves `(E₀ᵀ − λI) x = 0`, `Σx = 1` in the least-squares sense with
/// `λ = ρ(E₀)`.
fn perron_vector_direct(sym: &SymbolMatrices) -> Result<SimplexPoint> {
    let q = sym.q();
    let e0 = sym.matrix(0);
    let lambda = linalg::spectral_radius(e0);
    let mut bordered = linalg::Matrix::zeros(q + 1, q);
    for i in 0..q {
        for j in 0..q {
            bordered[(i, j)] = e0[(j, i)] - if i == j { lambda } else { 0.0 };
        }
        bordered[(q, i)] = 1.0;
    }
    let mut rhs = alloc::vec![0.0; q + 1];
    rhs[q] = 1.0;
    let x = linalg::least_squares(&bordered, &rhs)?;
    if x.iter().any(|v| *v < -1e-12) {
        return Err(Error::NoConvergence {
            routine: "Perron vector solve",
            iterations: 0,
        });
    }
    Ok(SimplexPoint::normalized(
        x.into_iter().map(|v| v.max(0.0)).collect(),
    ))
}

/// Builds `Δ_1, …, Δ_{q−1}` up to orbit depth `depth`.
pub fn compute_support(sym: &SymbolMatrices, depth: usize, dedup_tol: f64) -> Result<SupportAtlas> {
    let q = sym.q();
    let tau_bar = fixed_point_tau_bar(sym, dedup_tol.min(1e-13))?;
    let e0_injective = linalg::hadamard_ratio(sym.matrix(0)) > SINGULAR_E0_TOL;
    let tail_factor = 1.0 / (1.0 - sym.symbol_mass(0, tau_bar.as_slice()));

    let mut chains: Vec<Chain> = Vec::with_capacity(q - 1);
    let mut finite_support = false;

    for j in 1..q {
        let mut chain = Chain {
            j,
            points: Vec::new(),
            tail_factor: None,
        };
        let mut w = sym.row(j).clone();
        let mut coeff = 1.0;
        for m in 0..=depth {
            let next_coeff = coeff * sym.symbol_mass(0, w.as_slice());
            let next_w = sym.gamma0(w.as_slice());

            if e0_injective {
                chain.points.push(OrbitPoint { m, w, coeff });
            } else {
                let seen_earlier = chains
                    .iter()
                    .flat_map(|c| c.points.iter())
                    .any(|p| p.w.l1_distance(&w) <= dedup_tol);
                let repeats = chain
                    .points
                    .iter()
                    .any(|p| p.w.l1_distance(&w) <= dedup_tol);
                if repeats {
                    // Stalled: the orbit sits at τ̄ up to dedup_tol.
                    finite_support = true;
                    if chain
                        .points
                        .last()
                        .is_some_and(|p| p.w.l1_distance(&w) <= dedup_tol)
                    {
                        chain.tail_factor = Some(tail_factor);
                    }
                    break;
                }
                let at_fixed_point = w.l1_distance(&tau_bar) <= dedup_tol;
                if !seen_earlier {
                    chain.points.push(OrbitPoint { m, w, coeff });
                }
                if at_fixed_point {
                    finite_support = true;
                    if !seen_earlier {
                        chain.tail_factor = Some(tail_factor);
                    }
                    break;
                }
            }

            w = next_w;
            coeff = next_coeff;
        }
        chains.push(chain);
    }

    Ok(SupportAtlas {
        tau_bar,
        chains,
        depth,
        finite_support,
        dedup_tol,
        e0_injective,
    })
}

pub fn contraction_rates(sym: &SymbolMatrices, atlas: &SupportAtlas) -> Result<ContractionRates> {
    let gamma_hat = atlas
        .points()
        .map(|(_, p)| sym.symbol_mass(0, p.w.as_slice()))
        .chain(core::iter::once(sym.symbol_mass(0, atlas.tau_bar.as_slice())))
        .fold(0.0, f64::max);
    if gamma_hat >= 1.0 {
        return Err(Error::GammaNotContractive { gamma: gamma_hat });
    }
    let (p, big_p, eps) = (sym.p_min(), sym.p_max(), sym.eps_max());
    let r = (eps < p).then(|| 1.0 - (sym.q() - 1) as f64 * (p - eps * big_p));
    Ok(ContractionRates { gamma_hat, r })
}
