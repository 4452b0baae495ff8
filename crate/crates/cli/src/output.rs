//! Number formatting and record layouts for stdout.
//!
//! Tables and CSV carry 14 significant digits; JSON carries the shortest
//! representation that round-trips the `f64` exactly.

use entrate_core::{EntropySolution, SupportAtlas};
use serde::{Deserialize, Serialize};

pub const SIG_DIGITS: usize = 14;

/// `x` with `digits` significant digits. Positional notation for
/// magnitudes in `[1e-5, 1e15)`, scientific otherwise.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // Round first so the exponent reflects carries like 9.99…→10.
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .split_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn sig(x: f64) -> String {
    format_sig(x, SIG_DIGITS)
}

fn opt_sig(x: Option<f64>) -> String {
    x.map(sig).unwrap_or_default()
}

/// Machine-readable form of an [`EntropySolution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyRecord {
    pub q: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub log_base: String,
    #[serde(rename = "H_N")]
    pub h_n: f64,
    pub err_bound: Option<f64>,
    pub gamma_hat: f64,
    pub r: Option<f64>,
    pub phi_hat: Vec<f64>,
    #[serde(rename = "A_dagger_norm")]
    pub a_dagger_norm: f64,
}

impl From<&EntropySolution> for EntropyRecord {
    fn from(s: &EntropySolution) -> Self {
        EntropyRecord {
            q: s.q,
            n: s.depth,
            log_base: s.log_base.to_string(),
            h_n: s.h_n,
            err_bound: s.err_bound,
            gamma_hat: s.gamma_hat,
            r: s.r,
            phi_hat: s.phi_hat.clone(),
            a_dagger_norm: s.a_dagger_norm,
        }
    }
}

pub fn entropy_table(s: &EntropySolution) -> String {
    let phi = s.phi_hat.iter().map(|&x| sig(x)).collect::<Vec<_>>().join(", ");
    let rows = [
        ("q", s.q.to_string()),
        ("N", s.depth.to_string()),
        ("log_base", s.log_base.to_string()),
        ("H_N", sig(s.h_n)),
        ("err_bound", s.err_bound.map(sig).unwrap_or_else(|| "n/a".into())),
        ("gamma_hat", sig(s.gamma_hat)),
        ("r", s.r.map(sig).unwrap_or_else(|| "n/a".into())),
        ("phi_hat", format!("[{phi}]")),
        ("A_dagger_norm", sig(s.a_dagger_norm)),
    ];
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<14}{v}\n"));
    }
    out
}

pub fn entropy_json(s: &EntropySolution) -> String {
    let mut line = serde_json::to_string(&EntropyRecord::from(s)).expect("plain record");
    line.push('\n');
    line
}

pub fn sweep_header() -> &'static str {
    "N,H_N,err_bound\n"
}

pub fn sweep_row(s: &EntropySolution) -> String {
    format!("{},{},{}\n", s.depth, sig(s.h_n), opt_sig(s.err_bound))
}

pub fn support_csv(atlas: &SupportAtlas, q: usize) -> String {
    let mut out = String::from("j,m");
    for a in 0..q {
        out.push_str(&format!(",w_{a}"));
    }
    out.push_str(",c\n");
    for (j, p) in atlas.points() {
        out.push_str(&format!("{j},{}", p.m));
        for &x in p.w.as_slice() {
            out.push(',');
            out.push_str(&sig(x));
        }
        out.push(',');
        out.push_str(&sig(p.coeff));
        out.push('\n');
    }
    out
}

/// `k, S_k, S_k/k, S_k − S_{k−1}` with `S_0 = 0`.
pub fn oracle_csv(block: &[f64]) -> String {
    let mut out = String::from("k,S_k,rate_avg,rate_cond\n");
    let mut prev = 0.0;
    for (i, &s) in block.iter().enumerate() {
        let k = i + 1;
        out.push_str(&format!("{k},{},{},{}\n", sig(s), sig(s / k as f64), sig(s - prev)));
        prev = s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.70036618077546), "0.70036618077546");
        assert_eq!(sig(0.7139986874046351), "0.71399868740464");
        assert_eq!(sig(15.6656), "15.665600000000");
        assert_eq!(sig(1.6885498430957225e-05), "0.000016885498430957");
        assert_eq!(sig(2.01034224185306e-09), "2.0103422418531e-9");
        assert_eq!(sig(0.99999999999999995), "1.0000000000000");
        assert_eq!(sig(-0.25), "-0.25000000000000");
        assert_eq!(sig(0.0), "0");
        assert_eq!(format_sig(123.456, 4), "123.5");
    }

    #[test]
    fn oracle_rows() {
        let csv = oracle_csv(&[1.0, 1.5]);
        assert_eq!(
            csv,
            "k,S_k,rate_avg,rate_cond\n1,1.0000000000000,1.0000000000000,1.0000000000000\n\
             2,1.5000000000000,0.75000000000000,0.50000000000000\n"
        );
    }
}
