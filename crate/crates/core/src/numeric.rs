//! Floating-point helpers shared by the evaluators: values with error bounds,
//! Gauss–Legendre rules, cumulative spectral integration on graded panels,
//! compensated summation and least-squares extrapolation.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// A real number together with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub bound: f64,
}

impl Estimate {
    pub fn new(value: f64, bound: f64) -> Self {
        Estimate { value, bound: bound.abs() }
    }

    pub fn exact(value: f64) -> Self {
        Estimate { value, bound: 0.0 }
    }

    pub fn scale(self, c: f64) -> Self {
        Estimate::new(self.value * c, self.bound * c.abs())
    }

    /// Whether `target` lies within `tol` plus the own bound.
    pub fn agrees_with(&self, target: f64, tol: f64) -> bool {
        (self.value - target).abs() <= tol + self.bound
    }
}

impl Add for Estimate {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Estimate::new(self.value + o.value, self.bound + o.bound)
    }
}

impl Sub for Estimate {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Estimate::new(self.value - o.value, self.bound + o.bound)
    }
}

impl Neg for Estimate {
    type Output = Self;
    fn neg(self) -> Self {
        Estimate::new(-self.value, self.bound)
    }
}

impl Mul for Estimate {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let bound = self.value.abs() * o.bound + o.value.abs() * self.bound + self.bound * o.bound;
        Estimate::new(self.value * o.value, bound)
    }
}

/// Neumaier's compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `P_0(x), …, P_n(x)` by the three-term recurrence.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0; n + 1];
    if n >= 1 {
        p[1] = x;
    }
    for k in 1..n {
        p[k + 1] = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
    }
    p
}

/// Gauss–Legendre nodes (ascending) and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let p = legendre_all(n, x);
            let dp = n as f64 * (x * p[n] - p[n - 1]) / (x * x - 1.0);
            let dx = p[n] / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let p = legendre_all(n, x);
        let dp = n as f64 * (x * p[n] - p[n - 1]) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `S[i][j]` with `∫_{-1}^{x_i} g ≈ Σ_j S[i][j] g(x_j)`, exact for polynomials of degree < n.
pub fn spectral_integration_matrix(nodes: &[f64], weights: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_all(n, x)).collect();
    let mut s = vec![vec![0.0; n]; n];
    for i in 0..n {
        let pi = &at_nodes[i];
        let integrals: Vec<f64> = (0..n)
            .map(|k| if k == 0 { nodes[i] + 1.0 } else { (pi[k + 1] - pi[k - 1]) / (2 * k + 1) as f64 })
            .collect();
        for j in 0..n {
            let pj = &at_nodes[j];
            let acc: f64 = (0..n).map(|k| (2 * k + 1) as f64 / 2.0 * pj[k] * integrals[k]).sum();
            s[i][j] = weights[j] * acc;
        }
    }
    s
}

/// Breakpoints of `[a, b]` refined geometrically toward `b`.
pub fn graded_breakpoints(a: f64, b: f64, levels: usize) -> Vec<f64> {
    let h = b - a;
    let mut pts = vec![a, a + 0.25 * h, a + 0.5 * h];
    for j in 2..=levels {
        let width = h * 0.5f64.powi(j as i32);
        // nodes of narrower panels would round onto b
        if width < 4096.0 * f64::EPSILON * b.abs().max(h) {
            break;
        }
        let p = b - width;
        pts.push(p);
    }
    pts.push(b);
    pts
}

/// Composite Gauss–Legendre grid with cumulative integration.
#[derive(Clone, Debug)]
pub struct PanelGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    order: usize,
    breakpoints: Vec<f64>,
    local: Vec<Vec<f64>>,
}

impl PanelGrid {
    pub fn new(breakpoints: Vec<f64>, order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let local = spectral_integration_matrix(&x, &w);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for pair in breakpoints.windows(2) {
            let (lo, hi) = (pair[0], pair[1]);
            let half = 0.5 * (hi - lo);
            for k in 0..order {
                nodes.push(lo + half * (x[k] + 1.0));
                weights.push(half * w[k]);
            }
        }
        PanelGrid { nodes, weights, order, breakpoints, local }
    }

    /// Grid on `[a, b]` graded toward `b`.
    pub fn graded(a: f64, b: f64, levels: usize, order: usize) -> Self {
        Self::new(graded_breakpoints(a, b, levels), order)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        let mut s = CompensatedSum::default();
        for (w, v) in self.weights.iter().zip(values) {
            s.add(w * v);
        }
        s.value()
    }

    /// `∫_a^{t_i} g` at every node `t_i`, given `g` at the nodes.
    pub fn cumulative(&self, values: &[f64]) -> Vec<f64> {
        let p = self.order;
        let mut out = vec![0.0; values.len()];
        let mut offset = 0.0;
        for (panel, pair) in self.breakpoints.windows(2).enumerate() {
            let half = 0.5 * (pair[1] - pair[0]);
            let base = panel * p;
            let g = &values[base..base + p];
            for i in 0..p {
                let row = &self.local[i];
                let acc: f64 = row.iter().zip(g).map(|(s, v)| s * v).sum();
                out[base + i] = offset + half * acc;
            }
            offset += (0..p).map(|k| self.weights[base + k] * g[k]).sum::<f64>();
        }
        out
    }
}

/// Least-squares fit `y ≈ c_0 + Σ c_k φ_k(x)`; returns `c_0` and the RMS residual.
pub fn fit_constant(xs: &[f64], ys: &[f64], basis: &[&dyn Fn(f64) -> f64]) -> (f64, f64) {
    let rows = xs.len();
    let cols = basis.len() + 1;
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    for (r, &x) in xs.iter().enumerate() {
        a[(r, 0)] = 1.0;
        for (c, f) in basis.iter().enumerate() {
            a[(r, c + 1)] = f(x);
        }
    }
    // column scaling keeps the normal system well conditioned
    let scales: Vec<f64> =
        (0..cols).map(|c| a.column(c).iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300)).collect();
    for c in 0..cols {
        let s = scales[c];
        a.column_mut(c).iter_mut().for_each(|v| *v /= s);
    }
    let b = DVector::from_column_slice(ys);
    let sol = a.clone().svd(true, true).solve(&b, 1e-14).expect("svd solve");
    let resid = &a * &sol - &b;
    let rms = (resid.norm_squared() / rows as f64).sqrt();
    (sol[0] / scales[0], rms)
}
