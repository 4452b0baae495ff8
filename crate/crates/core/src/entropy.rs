//! Truncated entropy-rate series `H_N` and its error bound.
//!
//! The unknown weights `Φ_j = φ(e_j)` solve the `q×(q−1)` system `AΦ = b`:
//! rows `0..q−2` are the balance equations for `φ(e_{i+1})`, the last row
//! is total mass one. Truncating every orbit sum at depth `N` gives `Â`,
//! and `Φ̂ = Â†b`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebraic::{build_symbol_matrices, SimplexPoint, SymbolMatrices};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::model::ValidatedModel;
use crate::support::{compute_support, contraction_rates, SupportAtlas, DEFAULT_DEDUP_TOL};

/// Unit of the logarithm in every entropy this crate reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Bits.
    Two,
    /// Nats.
    E,
    /// Logarithm to the base `q`, the alphabet size; the entropy rate is
    /// then normalized to `[0, 1]`. Coincides with bits for `q = 2`.
    #[default]
    Alphabet,
}

impl LogBase {
    /// `ln(base)` for an alphabet of `q` symbols.
    pub fn ln_base(self, q: usize) -> f64 {
        match self {
            LogBase::Two => core::f64::consts::LN_2,
            LogBase::E => 1.0,
            LogBase::Alphabet => libm::log(q as f64),
        }
    }

    /// `−x log x` in this base, with `0 log 0 = 0`.
    pub fn neg_x_log_x(self, x: f64, q: usize) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -x * libm::log(x) / self.ln_base(q)
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::E => "e",
            LogBase::Alphabet => "q",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseLogBaseError;

impl fmt::Display for ParseLogBaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("log base must be one of 2, e, q")
    }
}

impl FromStr for LogBase {
    type Err = ParseLogBaseError;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            "q" => Ok(LogBase::Alphabet),
            _ => Err(ParseLogBaseError),
        }
    }
}

/// `Â Φ = b` at truncation depth `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub a_hat: Matrix,
    pub b: Vec<f64>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropySolution {
    pub q: usize,
    pub depth: usize,
    pub log_base: LogBase,
    /// `φ(e_1), …, φ(e_{q−1})`.
    pub phi_hat: Vec<f64>,
    pub h_n: f64,
    /// Rigorous truncation bound, present when `ε_max < p`.
    pub err_bound: Option<f64>,
    pub gamma_hat: f64,
    pub r: Option<f64>,
    /// Induced 1-norm of `Â†`.
    pub a_dagger_norm: f64,
    /// `Σ_j Σ_m c_{j,m} Φ̂_j`; one up to truncation.
    pub total_mass: f64,
    pub finite_support: bool,
}

pub fn assemble_system(sym: &SymbolMatrices, atlas: &SupportAtlas) -> LinearSystem {
    let q = sym.q();
    let mut a_hat = Matrix::zeros(q, q - 1);
    for chain in &atlas.chains {
        let col = chain.j - 1;
        for (pt, weight) in chain.weights() {
            a_hat[(q - 1, col)] += weight;
            if q > 2 {
                for row in 0..q - 1 {
                    a_hat[(row, col)] += sym.symbol_mass(row + 1, pt.w.as_slice()) * weight;
                }
            }
        }
        if q > 2 {
            a_hat[(col, col)] -= 1.0;
        }
    }
    let mut b = vec![0.0; q];
    b[q - 1] = 1.0;
    LinearSystem {
        a_hat,
        b,
        depth: atlas.depth,
    }
}

/// Least-squares weights `Φ̂ = Â†b`. For `q = 2` only the mass row is
/// nonzero and `Φ̂₁ = 1 / Σ_m c_{1,m}`.
pub fn solve_phi(system: &LinearSystem) -> Result<Vec<f64>> {
    let a = &system.a_hat;
    if a.cols() == 1 {
        let mass = a[(a.rows() - 1, 0)];
        if mass.is_nan() || mass <= 0.0 {
            return Err(Error::RankDeficient { column: 0 });
        }
        return Ok(vec![1.0 / mass]);
    }
    linalg::least_squares(a, &system.b)
}

/// `h_a(w) = −⟨w, E_aσ⟩ log ⟨w, E_aσ⟩`.
pub fn symbol_entropy_h(sym: &SymbolMatrices, a: usize, w: &SimplexPoint, base: LogBase) -> f64 {
    base.neg_x_log_x(sym.symbol_mass(a, w.as_slice()), sym.q())
}

/// Runs the whole pipeline at truncation depth `depth`.
pub fn entropy_rate(model: &ValidatedModel, depth: usize, base: LogBase) -> Result<EntropySolution> {
    let sym = build_symbol_matrices(model);
    let atlas = compute_support(&sym, depth, DEFAULT_DEDUP_TOL)?;
    let rates = contraction_rates(&sym, &atlas)?;
    let system = assemble_system(&sym, &atlas);
    let phi_hat = solve_phi(&system)?;
    let a_dagger_norm = linalg::pseudo_inverse(&system.a_hat)?.norm1();

    let q = sym.q();
    let mut h_n = 0.0;
    let mut total_mass = 0.0;
    for chain in &atlas.chains {
        let phi = phi_hat[chain.j - 1];
        for (pt, weight) in chain.weights() {
            let h: f64 = (0..q).map(|a| symbol_entropy_h(&sym, a, &pt.w, base)).sum();
            h_n += h * weight * phi;
            total_mass += weight * phi;
        }
    }

    let err_bound = rates.r.map(|r| {
        let qf = q as f64;
        qf * libm::pow(r, (depth + 1) as f64) / (1.0 - r) * (1.0 + qf * a_dagger_norm / (1.0 - r))
    });

    Ok(EntropySolution {
        q,
        depth,
        log_base: base,
        phi_hat,
        h_n,
        err_bound,
        gamma_hat: rates.gamma_hat,
        r: rates.r,
        a_dagger_norm,
        total_mass,
        finite_support: atlas.finite_support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_model;

    fn example_one() -> ValidatedModel {
        validate_model(&[[0.85, 0.15], [0.28, 0.72]], &[0.01]).unwrap()
    }

    #[test]
    fn h_a_values() {
        let base = LogBase::Two;
        assert_eq!(base.neg_x_log_x(1.0, 2), 0.0);
        assert_eq!(base.neg_x_log_x(0.0, 2), 0.0);
        assert!((base.neg_x_log_x(0.5, 2) - 0.5).abs() < 1e-16);

        let m = example_one();
        let sym = build_symbol_matrices(&m);
        let h = symbol_entropy_h(&sym, 1, sym.row(1), LogBase::Two);
        // x = 0.99 · 0.72
        let x: f64 = 0.7128;
        assert!((h - (-x * x.log2())).abs() < 1e-15);
        assert!((h - 0.348153).abs() < 1e-6);
    }

    #[test]
    fn depth_zero_system() {
        let m = example_one();
        let sym = build_symbol_matrices(&m);
        let atlas = compute_support(&sym, 0, DEFAULT_DEDUP_TOL).unwrap();
        let sys = assemble_system(&sym, &atlas);
        assert_eq!(sys.a_hat.to_rows(), vec![vec![0.0], vec![1.0]]);
        assert_eq!(sys.b, vec![0.0, 1.0]);
        assert_eq!(solve_phi(&sys).unwrap(), vec![1.0]);
    }

    #[test]
    fn two_symbol_closed_form_matches_qr() {
        let m = example_one();
        let sym = build_symbol_matrices(&m);
        let atlas = compute_support(&sym, 100, DEFAULT_DEDUP_TOL).unwrap();
        let sys = assemble_system(&sym, &atlas);
        let sum: f64 = atlas.chains[0].points.iter().map(|p| p.coeff).sum();
        assert_eq!(sys.a_hat[(0, 0)], 0.0);
        assert!((sys.a_hat[(1, 0)] - sum).abs() < 1e-13);
        let closed = solve_phi(&sys).unwrap();
        let qr = linalg::least_squares(&sys.a_hat, &sys.b).unwrap();
        assert!((closed[0] - qr[0]).abs() < 1e-14);
        assert!(closed[0] > 0.0 && closed[0] <= 1.0);
    }

    #[test]
    fn log_base_parse() {
        assert_eq!("2".parse::<LogBase>(), Ok(LogBase::Two));
        assert_eq!("e".parse::<LogBase>(), Ok(LogBase::E));
        assert_eq!("q".parse::<LogBase>(), Ok(LogBase::Alphabet));
        assert!("10".parse::<LogBase>().is_err());
        assert_eq!(LogBase::default(), LogBase::Alphabet);
    }

    #[test]
    fn table_one_endpoints() {
        let m = example_one();
        let s = entropy_rate(&m, 10, LogBase::Two).unwrap();
        assert!((s.h_n - 0.71399868740464).abs() < 1e-10);
        let s = entropy_rate(&m, 100, LogBase::Two).unwrap();
        assert!((s.h_n - 0.70036618077546).abs() < 1e-10);
        assert!((s.total_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_system_reported() {
        let sys = LinearSystem {
            a_hat: Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [1.0, 1.0]]).unwrap(),
            b: vec![0.0, 0.0, 1.0],
            depth: 0,
        };
        assert!(matches!(solve_phi(&sys), Err(Error::RankDeficient { .. })));
    }
}
