use serde::{Deserialize, Serialize};

use super::deletion::deletion_probability;

/// Tunable constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Leaf threshold multiplier of the division.
    pub c0: f64,
    /// Separator length ceiling, as a multiple of `sqrt(N)`.
    pub c1: f64,
    /// Overcount ceiling, as a multiple of `N / sqrt(r)`.
    pub c2: f64,
    /// Truncation ceiling constant.
    pub c3: f64,
    /// Coefficient of `ell`.
    pub c4: f64,
    /// Coefficient of `r` and `t`.
    pub c5: f64,
    /// Constant of the incidence bound.
    pub c6: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c0: 4.0, c1: 8.0 * std::f64::consts::SQRT_2, c2: 4.0, c3: 1.0, c4: 1.0, c5: 1.0, c6: 1.0 }
    }
}

/// Inputs `(n, k, s, eps)` and every quantity derived from them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub n: u64,
    pub k: usize,
    pub s: usize,
    pub eps: f64,
    pub seed: u64,
    pub constants: Constants,
    pub p_mult: f64,
    /// `n^(1/(2k+1))`.
    pub big_t: f64,
    /// `c4 eps^(-k/(k+1)) T^k`, rounded up, at least 2.
    pub ell: usize,
    /// `eps^((2k+1)/k) T^(2k+1) / ell`, rounded down, at least 1.
    pub w: usize,
    /// `c5 k^2 s^2 eps^-2 T^(2k+2)`, rounded up.
    pub r: u64,
    /// `c5 k s^2 eps^-2 T`, rounded up.
    pub t: u64,
    /// `(s-1) / (3 (s^2 - s - 1))`.
    pub p_exponent: f64,
    /// `min(1, p_mult n^-p_exponent)`.
    pub p: f64,
}

impl ExperimentParams {
    pub fn new(n: u64, k: usize, s: usize, eps: f64, seed: u64) -> Self {
        Self::with_constants(n, k, s, eps, seed, Constants::default(), 1.0)
    }

    pub fn with_constants(n: u64, k: usize, s: usize, eps: f64, seed: u64, constants: Constants, p_mult: f64) -> Self {
        assert!(k >= 1 && s >= 1 && eps > 0.0, "need k, s >= 1 and eps > 0");
        let (kf, sf) = (k as f64, s as f64);
        let big_t = (n as f64).powf(1.0 / (2.0 * kf + 1.0));
        let ell_raw = constants.c4 * eps.powf(-kf / (kf + 1.0)) * big_t.powf(kf);
        let ell = (ceil(ell_raw) as usize).max(2);
        let w_raw = eps.powf((2.0 * kf + 1.0) / kf) * big_t.powf(2.0 * kf + 1.0) / ell as f64;
        let w = (floor(w_raw) as usize).max(1);
        let r = ceil(constants.c5 * kf * kf * sf * sf / (eps * eps) * big_t.powf(2.0 * kf + 2.0)) as u64;
        let t = (ceil(constants.c5 * kf * sf * sf / (eps * eps) * big_t) as u64).max(1);
        let p_exponent = (sf - 1.0) / (3.0 * (sf * sf - sf - 1.0));
        let p = if s >= 2 { deletion_probability(n, s, p_mult) } else { 1.0 };
        ExperimentParams { n, k, s, eps, seed, constants, p_mult, big_t, ell, w, r, t, p_exponent, p }
    }
}

// roundings that ignore floating noise around integers
fn ceil(x: f64) -> f64 {
    (x - 1e-9 * x.abs().max(1.0)).ceil()
}

fn floor(x: f64) -> f64 {
    (x + 1e-9 * x.abs().max(1.0)).floor()
}
