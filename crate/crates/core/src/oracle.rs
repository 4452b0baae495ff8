//! Independent checks on the series: exact block entropies from cylinder
//! probabilities, the clean-chain closed form, and a path simulator.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebraic::stationary_distribution;
use crate::algebraic::{StationaryDistribution, SymbolMatrices};
use crate::entropy::LogBase;
use crate::error::{Error, Result};
use crate::model::{TransitionMatrix, ValidatedModel};

/// Upper limit on `q^n` for exhaustive enumeration.
pub const MAX_WORDS: u64 = 10_000_000;

/// All `q^n` cylinder probabilities of length-`n` words, enumerated depth
/// first. Nothing is materialized; memory is `O(n·q)`.
#[derive(Debug, Clone, Copy)]
pub struct BlockDistribution<'a> {
    sym: &'a SymbolMatrices,
    tau: &'a StationaryDistribution,
    n: usize,
}

impl<'a> BlockDistribution<'a> {
    pub fn new(sym: &'a SymbolMatrices, tau: &'a StationaryDistribution, n: usize) -> Result<Self> {
        let q = sym.q();
        if n == 0 {
            return Err(Error::ShapeMismatch("block length must be at least 1".into()));
        }
        let words = u32::try_from(n)
            .ok()
            .and_then(|n| (q as u64).checked_pow(n))
            .filter(|&w| w <= MAX_WORDS);
        if words.is_none() {
            return Err(Error::BlockTooLarge { q, n });
        }
        Ok(BlockDistribution { sym, tau, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Calls `f(word, μ(word))` for every word of length `n`, in
    /// lexicographic order.
    pub fn for_each(&self, mut f: impl FnMut(&[usize], f64)) {
        let mut word = Vec::with_capacity(self.n);
        self.walk(self.tau.tau.as_slice(), &mut word, &mut |w, _, p| {
            if w.len() == self.n {
                f(w, p);
            }
        });
    }

    pub fn total_mass(&self) -> f64 {
        let mut total = 0.0;
        self.for_each(|_, p| total += p);
        total
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        let q = self.sym.q();
        let mut s = 0.0;
        self.for_each(|_, p| s += base.neg_x_log_x(p, q));
        s
    }

    /// Visits every prefix of length `1..=n` with its probability. Subtrees
    /// of zero-probability prefixes are skipped; their extensions are zero.
    fn walk(&self, v: &[f64], word: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize], usize, f64)) {
        for a in 0..self.sym.q() {
            let next = self.sym.matrix(a).tr_mul_vec(v);
            let p: f64 = next.iter().sum();
            word.push(a);
            visit(word, a, p);
            if p > 0.0 && word.len() < self.n {
                self.walk(&next, word, visit);
            }
            word.pop();
        }
    }
}

/// `S_1, …, S_n` from a single enumeration of all words of length `n`.
pub fn block_entropies(
    sym: &SymbolMatrices,
    tau: &StationaryDistribution,
    n: usize,
    base: LogBase,
) -> Result<Vec<f64>> {
    let dist = BlockDistribution::new(sym, tau, n)?;
    let q = sym.q();
    let mut s = vec![0.0; n];
    let mut word = Vec::with_capacity(n);
    dist.walk(tau.tau.as_slice(), &mut word, &mut |w, _, p| {
        s[w.len() - 1] += base.neg_x_log_x(p, q);
    });
    Ok(s)
}

/// `S_n = −Σ_{|w|=n} μ(w) log μ(w)`.
pub fn block_entropy(
    sym: &SymbolMatrices,
    tau: &StationaryDistribution,
    n: usize,
    base: LogBase,
) -> Result<f64> {
    Ok(BlockDistribution::new(sym, tau, n)?.entropy(base))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimates {
    /// `S_n / n`
    pub rate_avg: f64,
    /// `S_n − S_{n−1}`, the conditional entropy of the next symbol.
    pub rate_cond: f64,
}

pub fn entropy_estimates(
    sym: &SymbolMatrices,
    tau: &StationaryDistribution,
    n: usize,
    base: LogBase,
) -> Result<EntropyEstimates> {
    if n < 2 {
        return Err(Error::ShapeMismatch("entropy estimates need n >= 2".into()));
    }
    let s = block_entropies(sym, tau, n, base)?;
    Ok(EntropyEstimates {
        rate_avg: s[n - 1] / n as f64,
        rate_cond: s[n - 1] - s[n - 2],
    })
}

/// Entropy rate of the noise-free chain, `−Σ_i τ_i Σ_j e_ij log e_ij`.
pub fn markov_entropy_rate(transition: &TransitionMatrix, base: LogBase) -> Result<f64> {
    let q = transition.q();
    let st = stationary_distribution(transition)?;
    Ok((0..q)
        .map(|i| {
            let row: f64 = transition.row(i).iter().map(|&e| base.neg_x_log_x(e, q)).sum();
            st.tau[i] * row
        })
        .sum())
}

fn sample(dist: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.len() - 1
}

/// Draws `length` observed symbols: `X₁ ~ τ`, `X_{k+1} ~ e_{X_k}`, and
/// `Y_k = 0` with probability `ε_{X_k}`, else `Y_k = X_k`. ChaCha8 seeded
/// from `seed`, so equal seeds give equal paths.
pub fn simulate_path(model: &ValidatedModel, length: usize, seed: u64) -> Result<Vec<usize>> {
    Ok(simulate_with_hidden(model, length, seed)?.1)
}

/// Same draw as [`simulate_path`], also returning the hidden chain.
pub fn simulate_with_hidden(
    model: &ValidatedModel,
    length: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let st = stationary_distribution(model.transition())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hidden = Vec::with_capacity(length);
    let mut observed = Vec::with_capacity(length);
    let mut x = sample(st.tau.as_slice(), rng.random::<f64>());
    for k in 0..length {
        if k > 0 {
            x = sample(model.transition().row(x), rng.random::<f64>());
        }
        let flip: f64 = rng.random();
        hidden.push(x);
        observed.push(if x != 0 && flip < model.noise().eps(x) { 0 } else { x });
    }
    Ok((hidden, observed))
}
