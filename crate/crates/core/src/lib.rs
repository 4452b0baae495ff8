//! Entropy rate of a hidden Markov process observed through a channel with
//! one unambiguous symbol.
//!
//! Symbol `0` always passes the channel unchanged; every other symbol `a`
//! is flipped to `0` with probability `ε_a`. The output process is a
//! manifestly positive algebraic measure
//! `μ(w₁…wₙ) = ⟨τ, E_{w₁}⋯E_{wₙ}σ⟩`, and for this channel the Blackwell
//! measure is supported on the `Γ₀`-orbits of the transition-matrix rows.
//! That turns the entropy rate into a convergent series whose truncation
//! `H_N` comes with an explicit error bound.
//!
//! Pipeline:
//!
//! ```text
//! validate_model ─► build_symbol_matrices ─► compute_support ─► assemble_system ─► solve_phi ─► H_N
//! ```
//!
//! [`oracle`] holds the independent route: exact block entropies over all
//! words of a given length, plus a path simulator.
//!
//! The crate is `no_std` (it needs `alloc`); IO and the command line live in
//! the `entrate` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebraic;
pub mod entropy;
mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod support;

pub use algebraic::{
    build_symbol_matrices, gamma_map, stationary_distribution, word_measure, GammaImage,
    SimplexPoint, StationaryDistribution, SymbolMatrices,
};
pub use entropy::{
    assemble_system, entropy_rate, solve_phi, symbol_entropy_h, EntropySolution, LinearSystem,
    LogBase,
};
pub use error::{Error, Result};
pub use model::{
    check_condition1, validate_model, Condition1Report, NoiseSpec, TransitionMatrix,
    ValidatedModel,
};
pub use oracle::{
    block_entropies, block_entropy, entropy_estimates, markov_entropy_rate, simulate_path,
    simulate_with_hidden,
    BlockDistribution, EntropyEstimates,
};
pub use support::{
    compute_support, contraction_rates, fixed_point_tau_bar, Chain, ContractionRates, OrbitPoint,
    SupportAtlas, DEFAULT_DEDUP_TOL,
};
