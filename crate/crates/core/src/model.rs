//! Problem instances: a strictly positive transition matrix plus the
//! per-symbol flip probabilities of the channel.

use alloc::format;
use alloc::vec::Vec;

use crate::algebraic::build_symbol_matrices;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Slack allowed on row sums of the transition matrix.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Row-stochastic `q×q` matrix with every entry strictly inside `(0, 1)`.
/// Entry `(i, j)` is `P(next = j | current = i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    entries: Matrix,
}

impl TransitionMatrix {
    pub fn q(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.entries.row(i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

/// Flip probabilities `ε_1..ε_{q−1}`. `ε_0 = 1` is implied and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    epsilon: Vec<f64>,
}

impl NoiseSpec {
    /// `ε_a`, with `ε_0 = 1`.
    pub fn eps(&self, a: usize) -> f64 {
        if a == 0 {
            1.0
        } else {
            self.epsilon[a - 1]
        }
    }

    pub fn stored(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn min(&self) -> f64 {
        self.epsilon.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.epsilon.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A problem instance satisfying `0 < p ≤ P < 1` and `0 < ε_a < 1`.
/// Only [`validate_model`] constructs one.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedModel {
    transition: TransitionMatrix,
    noise: NoiseSpec,
    p_min: f64,
    p_max: f64,
    eps_max: f64,
}

impl ValidatedModel {
    pub fn q(&self) -> usize {
        self.transition.q()
    }

    pub fn transition(&self) -> &TransitionMatrix {
        &self.transition
    }

    pub fn noise(&self) -> &NoiseSpec {
        &self.noise
    }

    /// Smallest transition probability, `p`.
    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    /// Largest transition probability, `P`.
    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn eps_max(&self) -> f64 {
        self.eps_max
    }
}

fn strictly_inside_unit(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

pub fn validate_model<R: AsRef<[f64]>>(transition: &[R], epsilon: &[f64]) -> Result<ValidatedModel> {
    let q = transition.len();
    if q < 2 {
        return Err(Error::ShapeMismatch(format!(
            "need at least 2 symbols, got {q}"
        )));
    }
    let entries = Matrix::from_rows(transition)?;
    if entries.cols() != q {
        return Err(Error::ShapeMismatch(format!(
            "transition matrix is {q}x{}, expected square",
            entries.cols()
        )));
    }
    if epsilon.len() != q - 1 {
        return Err(Error::ShapeMismatch(format!(
            "epsilon has {} entries, expected q-1 = {}",
            epsilon.len(),
            q - 1
        )));
    }
    for i in 0..q {
        for j in 0..q {
            let value = entries[(i, j)];
            if !strictly_inside_unit(value) {
                return Err(Error::EntryOutOfRange { row: i, col: j, value });
            }
        }
    }
    for i in 0..q {
        let sum: f64 = entries.row(i).iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::RowNotStochastic { row: i, sum });
        }
    }
    for (k, &value) in epsilon.iter().enumerate() {
        if !strictly_inside_unit(value) {
            return Err(Error::NoiseOutOfRange { symbol: k + 1, value });
        }
    }
    let noise = NoiseSpec {
        epsilon: epsilon.to_vec(),
    };
    Ok(ValidatedModel {
        p_min: entries.min_entry(),
        p_max: entries.max_entry(),
        eps_max: noise.max(),
        transition: TransitionMatrix { entries },
        noise,
    })
}

/// Outcome of checking the three irreducibility conditions on `{E_a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition1Report {
    /// The constant `c` used for `E_aE_b ≥ c·E_a`.
    pub c_witness: f64,
    /// Whether the closed form `ε_min·p^{q−1}` worked as the witness. When it
    /// does not, `c_witness` is the largest `c` for which the products hold.
    pub closed_form_witness: bool,
    pub product_check_passed: bool,
    pub perron_simple: bool,
    pub irreducible: bool,
    /// Symbol whose matrix is tested for a simple dominant eigenvalue.
    pub a0: usize,
    /// `|det E₀| / ∏‖row‖₂`; zero when `E₀` is singular.
    pub e0_hadamard_ratio: f64,
}

impl Condition1Report {
    pub fn all_passed(&self) -> bool {
        self.product_check_passed && self.perron_simple && self.irreducible
    }
}

const PRODUCT_TOL: f64 = 1e-12;
const PERRON_GAP_TOL: f64 = 1e-9;

pub fn check_condition1(model: &ValidatedModel) -> Condition1Report {
    let sym = build_symbol_matrices(model);
    let q = model.q();
    let products: Vec<(usize, Matrix)> = (0..q)
        .flat_map(|a| (0..q).map(move |b| (a, b)))
        .map(|(a, b)| (a, sym.matrix(a).mul(sym.matrix(b))))
        .collect();

    let passes = |c: f64| {
        products.iter().all(|(a, prod)| {
            let ea = sym.matrix(*a);
            prod.iter().zip(ea.iter()).all(|(x, e)| x - c * e >= -PRODUCT_TOL)
        })
    };

    let closed_form = model.noise().min() * libm::pow(model.p_min(), (q - 1) as f64);
    let closed_form_witness = passes(closed_form);
    let c_witness = if closed_form_witness {
        closed_form
    } else {
        // Largest c: the smallest ratio (E_aE_b)_{ik} / (E_a)_{ik} over the
        // support of E_a.
        products
            .iter()
            .flat_map(|(a, prod)| {
                let ea = sym.matrix(*a);
                prod.iter()
                    .zip(ea.iter())
                    .filter(|(_, e)| *e > 0.0)
                    .map(|(x, e)| x / e)
                    .collect::<Vec<_>>()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let product_check_passed = c_witness > 0.0 && passes(c_witness);

    let a0 = 0;
    let perron_simple = perron_root_is_simple(sym.matrix(a0));
    let irreducible = is_irreducible(model.transition().matrix());

    Condition1Report {
        c_witness,
        closed_form_witness,
        product_check_passed,
        perron_simple,
        irreducible,
        a0,
        e0_hadamard_ratio: linalg::hadamard_ratio(sym.matrix(0)),
    }
}

/// Dominant eigenvalue simple and strictly larger in modulus than the rest:
/// compares the spectral radius with the radius after deflating the Perron
/// pair.
fn perron_root_is_simple(m: &Matrix) -> bool {
    let left = match linalg::left_perron_vector(m, 1e-15, 1_000_000) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let right = match linalg::left_perron_vector(&m.transpose(), 1e-15, 1_000_000) {
        Ok(v) => v,
        Err(_) => return false,
    };
    if linalg::dot(&left, &right) <= 0.0 {
        return false;
    }
    let lead = linalg::spectral_radius(m);
    let sub = linalg::deflated_spectral_radius(m, &right, &left);
    lead - sub > PERRON_GAP_TOL * lead
}

/// Strong connectivity of the transition graph (edges where `e_ij > 0`).
fn is_irreducible(e: &Matrix) -> bool {
    let n = e.rows();
    let reach_all = |start: usize, forward: bool| {
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let w = if forward { e[(i, j)] } else { e[(j, i)] };
                if w > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach_all(0, true) && reach_all(0, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_bounds() {
        let m = validate_model(&[[0.85, 0.15], [0.28, 0.72]], &[0.01]).unwrap();
        assert_eq!(m.p_min(), 0.15);
        assert_eq!(m.p_max(), 0.85);
        assert_eq!(m.eps_max(), 0.01);
        assert_eq!(m.noise().eps(0), 1.0);
        assert_eq!(m.noise().eps(1), 0.01);
    }

    #[test]
    fn uniform_matrix() {
        let m = validate_model(&[[0.5, 0.5], [0.5, 0.5]], &[0.5]).unwrap();
        assert_eq!((m.p_min(), m.p_max(), m.eps_max()), (0.5, 0.5, 0.5));
    }

    #[test]
    fn boundary_entries_rejected() {
        let err = validate_model(&[[1.0, 0.0], [0.3, 0.7]], &[0.1]).unwrap_err();
        assert!(matches!(err, Error::EntryOutOfRange { row: 0, col: 0, .. }));
        let err = validate_model(&[[0.5, f64::NAN], [0.3, 0.7]], &[0.1]).unwrap_err();
        assert!(matches!(err, Error::EntryOutOfRange { row: 0, col: 1, .. }));
    }

    #[test]
    fn row_sum_slack() {
        assert!(validate_model(&[[0.6, 0.4 + 5e-13], [0.3, 0.7]], &[0.1]).is_ok());
        let err = validate_model(&[[0.6, 0.41], [0.3, 0.7]], &[0.1]).unwrap_err();
        assert!(matches!(err, Error::RowNotStochastic { row: 0, .. }));
    }

    #[test]
    fn noise_range() {
        for bad in [0.0, 1.0, -0.1, 1.5] {
            let err = validate_model(&[[0.6, 0.4], [0.3, 0.7]], &[bad]).unwrap_err();
            assert!(matches!(err, Error::NoiseOutOfRange { symbol: 1, .. }));
        }
    }

    #[test]
    fn shapes() {
        let one: [[f64; 1]; 1] = [[1.0]];
        assert!(matches!(validate_model(&one, &[]), Err(Error::ShapeMismatch(_))));
        let ragged: [&[f64]; 2] = [&[0.5, 0.5], &[1.0]];
        assert!(matches!(validate_model(&ragged, &[0.1]), Err(Error::ShapeMismatch(_))));
        assert!(matches!(
            validate_model(&[[0.5, 0.5], [0.5, 0.5]], &[0.1, 0.2]),
            Err(Error::ShapeMismatch(_))
        ));
        let wide: [&[f64]; 2] = [&[0.2, 0.4, 0.4], &[0.2, 0.4, 0.4]];
        assert!(matches!(validate_model(&wide, &[0.1]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn condition1_example_one() {
        let m = validate_model(&[[0.85, 0.15], [0.28, 0.72]], &[0.01]).unwrap();
        let r = check_condition1(&m);
        assert!(r.all_passed());
        assert!(r.closed_form_witness);
        assert!((r.c_witness - 0.01 * 0.15).abs() < 1e-18);
        assert_eq!(r.a0, 0);
    }

    #[test]
    fn condition1_uniform_witness() {
        let m = validate_model(&[[0.5, 0.5], [0.5, 0.5]], &[0.5]).unwrap();
        let r = check_condition1(&m);
        assert!(r.all_passed());
        assert_eq!(r.c_witness, 0.25);
        assert!(r.e0_hadamard_ratio < 1e-15);
    }

    #[test]
    fn closed_form_witness_can_fail() {
        // E_1E_1 ≥ cE_1 needs p(1−ε) ≥ εP, false here.
        let m = validate_model(&[[0.7, 0.3], [0.3, 0.7]], &[0.9]).unwrap();
        let r = check_condition1(&m);
        assert!(!r.closed_form_witness);
        assert!(r.c_witness > 0.0);
        // Binding ratio is (E_0E_1)_{00}/(E_0)_{00} = e_01·(1−ε)·e_10 / e_00.
        assert!((r.c_witness - 0.3 * 0.1 * 0.3 / 0.7).abs() < 1e-12, "{}", r.c_witness);
        assert!(r.all_passed());
    }

    #[test]
    fn reducible_graph_detected() {
        let e = Matrix::from_rows(&[[0.5, 0.5], [0.0, 1.0]]).unwrap();
        assert!(!is_irreducible(&e));
        let e = Matrix::from_rows(&[[0.5, 0.5], [0.1, 0.9]]).unwrap();
        assert!(is_irreducible(&e));
    }

    #[test]
    fn degenerate_spectrum_not_simple() {
        let id = Matrix::from_rows(&[[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert!(!perron_root_is_simple(&id));
    }
}
