#![allow(dead_code)]

use entrate_core::{validate_model, ValidatedModel};
use proptest::prelude::*;

pub fn example_one() -> ValidatedModel {
    validate_model(&[[0.85, 0.15], [0.28, 0.72]], &[0.01]).unwrap()
}

pub fn example_two() -> ValidatedModel {
    validate_model(
        &[[0.4, 0.25, 0.35], [0.25, 0.45, 0.3], [0.2, 0.55, 0.25]],
        &[0.01, 0.02],
    )
    .unwrap()
}

fn normalize(w: Vec<f64>) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Strictly positive stochastic matrices with q ∈ {2, 3, 4} and noise in
/// `eps_range`.
pub fn model_strategy(eps_range: std::ops::Range<f64>) -> impl Strategy<Value = ValidatedModel> {
    (2usize..=4).prop_flat_map(move |q| {
        (
            prop::collection::vec(prop::collection::vec(0.2f64..1.0, q), q),
            prop::collection::vec(eps_range.clone(), q - 1),
        )
            .prop_map(|(rows, eps)| {
                let rows: Vec<Vec<f64>> = rows.into_iter().map(normalize).collect();
                validate_model(&rows, &eps).expect("generated model is valid")
            })
    })
}

pub fn simplex_strategy(q: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, q)
        .prop_filter("nonzero", |w| w.iter().sum::<f64>() > 1e-6)
        .prop_map(normalize)
}
