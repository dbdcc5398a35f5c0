//! Brute-force numerical ground truth for `ξ_l` and the Zlobin integrals.
//!
//! Series route: expanding every `1/(1 - x_i x_{i+1})` geometrically and
//! integrating term by term gives
//!
//! ```text
//! ξ_l = Σ_{n₁,…,n_{l-1} ≥ 0} 1 / ((n₁+1)(n₁+n₂+1)⋯(n_{l-2}+n_{l-1}+1)(n_{l-1}+1)),
//! ```
//!
//! a chain of Hankel matrix-vector products over one index at a time.
//! The Zlobin integrand `x_l^{l-2} / Π_{j<l}(1 - x_j x_l)` integrates over
//! `x₁,…,x_{l-1}` in closed form to `(-log(1 - y))^{l-1} / y`, whose Taylor
//! coefficients are powers of `Σ tⁿ/(n+1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mzv::{zeta_numeric, MzvIndex};
use crate::numeric::{fit_constant, CompensatedSum, Estimate};

/// Identifier of the generator: ChaCha8, one stream per chunk, seed from the caller.
pub const RNG_ID: &str = "chacha8-stream";
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesConfig {
    /// Cutoff `N`; the largest truncation used is `2N`.
    pub cutoff: usize,
    /// Number of cutoffs `2N·2^{-k/4}`, `k < levels`. Two levels give plain Richardson.
    pub levels: usize,
    pub tol: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { cutoff: 20_000, levels: 17, tol: 1e-4 }
    }
}

impl SeriesConfig {
    pub fn check(&self) -> Result<()> {
        if self.cutoff < 16 || self.levels < 2 {
            return Err(Error::OutOfRange(format!("need cutoff >= 16 and levels >= 2, got {self:?}")));
        }
        Ok(())
    }

    fn ladder(&self) -> Vec<usize> {
        let top = 2 * self.cutoff;
        let mut ns: Vec<usize> = if self.levels == 2 {
            vec![self.cutoff, top]
        } else {
            (0..self.levels).map(|k| (top as f64 * 2f64.powf(-(k as f64) / 4.0)).round() as usize).collect()
        };
        ns.push(self.cutoff);
        ns.sort_unstable();
        ns.dedup();
        ns
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesResult {
    /// Tail-fit extrapolation when enough cutoffs are available, else Richardson.
    pub estimate: Estimate,
    /// `2 S(2N) - S(N)` with bound `|S(2N) - S(N)|`.
    pub richardson: Estimate,
    /// `(n, S(n))` for every cutoff used.
    pub partial: Vec<(usize, f64)>,
    pub within_tol: bool,
}

fn check_l(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::OutOfRange(format!("l = {l} must be at least 2")));
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

/// Truncated sum with every index below `n`.
pub fn xi_truncated(l: usize, n: usize) -> f64 {
    let recip: Vec<f64> = (0..2 * n).map(|m| 1.0 / (m as f64 + 1.0)).collect();
    let mut v: Vec<f64> = recip[..n].to_vec();
    for _ in 0..l.saturating_sub(2) {
        v = (0..n).map(|j| dot(&recip[j..j + n], &v)).collect();
    }
    let mut acc = CompensatedSum::default();
    for (x, r) in v.iter().zip(&recip) {
        acc.add(x * r);
    }
    acc.value()
}

/// Coefficients of `(-log(1-t)/t)^{k}` below `tⁿ`.
fn log_power_coeffs(k: usize, n: usize) -> Vec<f64> {
    let base: Vec<f64> = (0..n).map(|m| 1.0 / (m as f64 + 1.0)).collect();
    let rev: Vec<f64> = base.iter().rev().copied().collect();
    let mut c = base.clone();
    for _ in 1..k {
        // c'[s] = Σ_{i ≤ s} c[i] base[s - i]
        c = (0..n).map(|s| dot(&c[..=s], &rev[n - 1 - s..])).collect();
    }
    c
}

/// Truncated Zlobin series `Σ_s c_{l-1}(s) / (s + l - 1)`.
pub fn zlobin_truncated(l: usize, n: usize) -> f64 {
    let c = log_power_coeffs(l - 1, n);
    let mut acc = CompensatedSum::default();
    for (s, x) in c.iter().enumerate() {
        acc.add(x / (s + l - 1) as f64);
    }
    acc.value()
}

/// Constant term of a least-squares fit in `log^j n / n^i`, `i ≤ powers`, `j ≤ logs`.
fn tail_fit(ns: &[f64], sums: &[f64], powers: usize, logs: usize) -> f64 {
    let mut fns: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
    for i in 1..=powers {
        for j in 0..=logs {
            fns.push(Box::new(move |n: f64| n.ln().powi(j as i32) / n.powi(i as i32)));
        }
    }
    let refs: Vec<&dyn Fn(f64) -> f64> = fns.iter().map(|f| f.as_ref()).collect();
    fit_constant(ns, sums, &refs).0
}

/// Truncated sums on the cutoff ladder, Richardson on `(N, 2N)`, and a tail fit whose
/// log powers go up to `logs`.
fn extrapolate_series(cfg: &SeriesConfig, logs: usize, f: impl Fn(usize) -> f64) -> Result<SeriesResult> {
    cfg.check()?;
    let partial: Vec<(usize, f64)> = cfg.ladder().into_iter().map(|n| (n, f(n))).collect();
    let at = |n: usize| partial.iter().find(|p| p.0 == n).expect("cutoff on ladder").1;
    let (s1, s2) = (at(cfg.cutoff), at(2 * cfg.cutoff));
    let richardson = Estimate::new(2.0 * s2 - s1, (s2 - s1).abs());
    let unknowns = 2 * (logs + 2) + 1;
    let estimate = if partial.len() >= unknowns + 4 {
        let ns: Vec<f64> = partial.iter().map(|p| p.0 as f64).collect();
        let sums: Vec<f64> = partial.iter().map(|p| p.1).collect();
        let half = ns.len() / 2;
        let main = tail_fit(&ns, &sums, 2, logs);
        let spread = [
            tail_fit(&ns, &sums, 2, logs + 1),
            tail_fit(&ns, &sums, 1, logs + 1),
            tail_fit(&ns[half..], &sums[half..], 1, logs),
        ]
        .iter()
        .map(|v| (v - main).abs())
        .fold(0.0, f64::max);
        Estimate::new(main, 4.0 * spread + 1e-14 * main.abs())
    } else {
        richardson
    };
    Ok(SeriesResult { estimate, richardson, partial, within_tol: estimate.bound <= cfg.tol })
}

pub fn xi_series(l: usize, cfg: &SeriesConfig) -> Result<SeriesResult> {
    check_l(l)?;
    extrapolate_series(cfg, l - 2, |n| xi_truncated(l, n))
}

#[derive(Clone, Debug, Serialize)]
pub struct McResult {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub rng: &'static str,
}

impl McResult {
    pub fn estimate(&self) -> Estimate {
        Estimate::new(self.mean, self.stderr)
    }
}

/// Chunked sampling; chunk `c` draws from stream `c` of a generator seeded with `seed`,
/// and chunk sums are combined in chunk order so the result does not depend on threads.
fn sample_mean(samples: u64, seed: u64, dim: usize, f: impl Fn(&[f64]) -> f64 + Sync) -> McResult {
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0; dim];
            let (mut s1, mut s2) = (CompensatedSum::default(), CompensatedSum::default());
            for _ in 0..count {
                x.iter_mut().for_each(|xi| *xi = rng.gen::<f64>());
                let v = f(&x);
                s1.add(v);
                s2.add(v * v);
            }
            (s1.value(), s2.value())
        })
        .collect();
    let (mut s1, mut s2) = (CompensatedSum::default(), CompensatedSum::default());
    for (a, b) in sums {
        s1.add(a);
        s2.add(b);
    }
    let n = samples as f64;
    let mean = s1.value() / n;
    let var = ((s2.value() / n - mean * mean) * n / (n - 1.0)).max(0.0);
    McResult { mean, stderr: (var / n).sqrt(), samples, seed, rng: RNG_ID }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < 10_000 {
        return Err(Error::OutOfRange(format!("{samples} samples, need at least 10^4")));
    }
    Ok(())
}

/// Plain Monte Carlo of `1/Π(1 - xᵢx_{i+1})` over `[0,1]^l`.
pub fn xi_montecarlo(l: usize, samples: u64, seed: u64) -> Result<McResult> {
    check_l(l)?;
    check_samples(samples)?;
    Ok(sample_mean(samples, seed, l, |x| 1.0 / x.windows(2).map(|w| 1.0 - w[0] * w[1]).product::<f64>()))
}

/// `-log(1 - y) / y`, the integral over a variable with one neighbour `y`.
fn end_factor(y: f64) -> f64 {
    if y == 0.0 {
        1.0
    } else {
        -(-y).ln_1p() / y
    }
}

/// `∫₀¹ dt / ((1 - at)(1 - bt)) = log((1 - b)/(1 - a)) / (a - b)`.
fn middle_factor(a: f64, b: f64) -> f64 {
    let d = a - b;
    let t = d / (1.0 - a);
    if t.abs() < 1e-8 {
        (1.0 - 0.5 * t) / (1.0 - a)
    } else {
        t.ln_1p() / d
    }
}

/// Conditional Monte Carlo of `ξ_l`: the odd-position variables are integrated in closed
/// form and only `x₂, x₄, …` are sampled. Same expectation as `xi_montecarlo`.
pub fn xi_montecarlo_conditional(l: usize, samples: u64, seed: u64) -> Result<McResult> {
    check_l(l)?;
    check_samples(samples)?;
    Ok(sample_mean(samples, seed, l / 2, |even| {
        // even[k] is x_{2k+2}
        let mut v = end_factor(even[0]);
        for w in even.windows(2) {
            v *= middle_factor(w[0], w[1]);
        }
        if l % 2 == 1 {
            v *= end_factor(even[even.len() - 1]);
        }
        v
    }))
}

#[derive(Clone, Copy, Debug)]
pub enum ZlobinMethod {
    /// Plain sampling of the full `l`-dimensional integrand.
    MonteCarlo {
        samples: u64,
        seed: u64,
    },
    /// Sampling of `(-log(1-y))^{l-1}/y`, the integrand with `x₁,…,x_{l-1}` integrated out.
    Conditional {
        samples: u64,
        seed: u64,
    },
    Series(SeriesConfig),
}

impl ZlobinMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ZlobinMethod::MonteCarlo { .. } => "mc",
            ZlobinMethod::Conditional { .. } => "mc-conditional",
            ZlobinMethod::Series(_) => "series",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZlobinResult {
    pub l: usize,
    pub method: &'static str,
    pub estimate: Estimate,
    pub mc: Option<McResult>,
    pub series: Option<SeriesResult>,
}

/// `I_l = ∫_{[0,1]^l} x_l^{l-2} / Π_{j<l}(1 - x_j x_l)`.
pub fn zlobin_i(l: usize, method: ZlobinMethod) -> Result<ZlobinResult> {
    check_l(l)?;
    let name = method.name();
    match method {
        ZlobinMethod::MonteCarlo { samples, seed } => {
            check_samples(samples)?;
            let mc = sample_mean(samples, seed, l, |x| {
                let y = x[l - 1];
                y.powi(l as i32 - 2) / x[..l - 1].iter().map(|xj| 1.0 - xj * y).product::<f64>()
            });
            Ok(ZlobinResult { l, method: name, estimate: mc.estimate(), mc: Some(mc), series: None })
        }
        ZlobinMethod::Conditional { samples, seed } => {
            check_samples(samples)?;
            let mc = sample_mean(samples, seed, 1, |x| {
                let y = x[0];
                if y == 0.0 {
                    return if l == 2 { 1.0 } else { 0.0 };
                }
                (-(-y).ln_1p()).powi(l as i32 - 1) / y
            });
            Ok(ZlobinResult { l, method: name, estimate: mc.estimate(), mc: Some(mc), series: None })
        }
        ZlobinMethod::Series(cfg) => {
            let s = extrapolate_series(&cfg, l - 2, |n| zlobin_truncated(l, n))?;
            Ok(ZlobinResult { l, method: name, estimate: s.estimate, mc: None, series: Some(s) })
        }
    }
}

/// `(l-1)! ζ(l)`.
pub fn zlobin_target(l: usize, tol: f64) -> Result<Estimate> {
    check_l(l)?;
    let fact: f64 = (1..l).map(|k| k as f64).product();
    Ok(zeta_numeric(&MzvIndex::new(vec![l])?, tol / fact)?.scale(fact))
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub l: usize,
    pub method: String,
    pub estimate: f64,
    pub error: f64,
    pub budget: u64,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
}

impl OracleReport {
    pub fn from_series(l: usize, method: &str, cfg: &SeriesConfig, r: &SeriesResult) -> Self {
        OracleReport {
            l,
            method: method.into(),
            estimate: r.estimate.value,
            error: r.estimate.bound,
            budget: cfg.cutoff as u64,
            seed: None,
            rng: None,
        }
    }

    pub fn from_mc(l: usize, method: &str, r: &McResult) -> Self {
        OracleReport {
            l,
            method: method.into(),
            estimate: r.mean,
            error: r.stderr,
            budget: r.samples,
            seed: Some(r.seed),
            rng: Some(r.rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2: f64 = 1.644_934_066_848_226_4;
    const Z3: f64 = 1.202_056_903_159_594_3;

    fn cfg(cutoff: usize) -> SeriesConfig {
        SeriesConfig { cutoff, levels: 2, tol: 1.0 }
    }

    #[test]
    fn series_anchor() {
        let r = xi_series(2, &cfg(2000)).unwrap();
        assert!((r.estimate.value - Z2).abs() < 1e-6);
        let r = xi_series(3, &cfg(1000)).unwrap();
        assert!((r.estimate.value - 2.0 * Z2).abs() < 2e-3);
    }

    #[test]
    fn tail_fit_beats_richardson() {
        let r = xi_series(4, &SeriesConfig { cutoff: 1000, levels: 17, tol: 1e-4 }).unwrap();
        assert!((r.estimate.value - 7.305_681_827_5).abs() < 1e-6, "{r:?}");
        assert!(r.within_tol);
        assert!((r.richardson.value - r.estimate.value).abs() > 1e-4);
    }

    #[test]
    fn residual_shrinks() {
        for l in [2, 3] {
            let res: Vec<f64> = [250, 500, 1000]
                .iter()
                .map(|&n| (xi_truncated(l, 2 * n) - xi_truncated(l, n)).abs())
                .collect();
            assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
        }
    }

    #[test]
    fn mc_is_reproducible() {
        let a = xi_montecarlo(3, 100_000, 7).unwrap();
        let b = xi_montecarlo(3, 100_000, 7).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let c = xi_montecarlo(3, 100_000, 8).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
        assert!(xi_montecarlo(3, 100, 7).is_err());
    }

    #[test]
    fn mc_small() {
        let r = xi_montecarlo(2, 1_000_000, 1).unwrap();
        assert!((r.mean - Z2).abs() < 3.0 * r.stderr);
    }

    #[test]
    fn conditional_factors() {
        assert!((middle_factor(0.3, 0.3 + 1e-12) - 1.0 / 0.7).abs() < 1e-10);
        let direct = ((1.0f64 - 0.6).ln() - (1.0f64 - 0.2).ln()) / (0.2 - 0.6);
        assert!((middle_factor(0.2, 0.6) - direct).abs() < 1e-14);
        let r = xi_montecarlo_conditional(2, 100_000, 5).unwrap();
        assert!((r.mean - Z2).abs() < 3.0 * r.stderr);
        let r = xi_montecarlo_conditional(3, 100_000, 5).unwrap();
        assert!((r.mean - 2.0 * Z2).abs() < 3.0 * r.stderr);
    }

    #[test]
    fn zlobin_routes() {
        let s = zlobin_i(2, ZlobinMethod::Series(cfg(2000))).unwrap();
        assert!((s.estimate.value - Z2).abs() < 1e-5);
        let s = zlobin_i(3, ZlobinMethod::Series(cfg(4000))).unwrap();
        assert!((s.estimate.value - 2.0 * Z3).abs() < 1e-2);
        let m = zlobin_i(3, ZlobinMethod::Conditional { samples: 1_000_000, seed: 3 }).unwrap();
        assert!((m.estimate.value - 2.0 * Z3).abs() < 3.0 * m.estimate.bound);
        assert!((zlobin_target(3, 1e-9).unwrap().value - 2.0 * Z3).abs() < 1e-8);
    }
}
