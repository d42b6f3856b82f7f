use serde::Serialize;

use crate::error::{domain, Result};

/// Warping function `f` of a rotationally invariant metric
/// `g = dr² + F(r)² dθ²` with `F(r) = ∫₀ʳ f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WarpingProfile {
    /// `f(s) = a + (1 - a) e^{-βs}`.
    ExponentialTail { a: f64, beta: f64 },
    /// Piecewise-linear `f` through the given nodes, constant past the last one.
    Sampled(SampledProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledProfile {
    s: Vec<f64>,
    f: Vec<f64>,
    // F at each node; F is piecewise quadratic.
    cum: Vec<f64>,
}

impl SampledProfile {
    fn segment(&self, r: f64) -> usize {
        // index i with s[i] <= r < s[i+1], clamped to the last node
        match self.s.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i.min(self.s.len() - 1),
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    fn slope(&self, i: usize) -> f64 {
        if i + 1 < self.s.len() {
            (self.f[i + 1] - self.f[i]) / (self.s[i + 1] - self.s[i])
        } else {
            0.0
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.s
    }
}

impl WarpingProfile {
    pub fn exponential_tail(a: f64, beta: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) {
            return domain(format!("warping tail a must lie in (0, 1], got {a}"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return domain(format!("warping rate beta must be positive, got {beta}"));
        }
        Ok(Self::ExponentialTail { a, beta })
    }

    /// Nodes must start at `s = 0` with `f = 1`, be strictly ascending, and
    /// carry positive finite values. Monotonicity and `f <= 1` are *not*
    /// enforced here so that negative controls can be built; use
    /// [`crate::spaces::curvature_check`] to audit them.
    pub fn sampled(s: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if s.len() != f.len() || s.len() < 2 {
            return domain("sampled profile needs at least two (s, f) nodes of equal length");
        }
        if s[0] != 0.0 || (f[0] - 1.0).abs() > 1e-12 {
            return domain("sampled profile must start at s = 0 with f = 1");
        }
        if s.windows(2).any(|w| !(w[1] > w[0])) || s.iter().any(|x| !x.is_finite()) {
            return domain("sampled profile nodes must be finite and strictly ascending");
        }
        if f.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return domain("sampled profile values must be finite and positive");
        }
        let mut cum = vec![0.0; s.len()];
        for i in 1..s.len() {
            cum[i] = cum[i - 1] + 0.5 * (f[i] + f[i - 1]) * (s[i] - s[i - 1]);
        }
        Ok(Self::Sampled(SampledProfile { s, f, cum }))
    }

    /// `f(s)`.
    pub fn f(&self, s: f64) -> f64 {
        match self {
            Self::ExponentialTail { a, beta } => a + (1.0 - a) * (-beta * s).exp(),
            Self::Sampled(p) => {
                let i = p.segment(s);
                p.f[i] + p.slope(i) * (s - p.s[i])
            }
        }
    }

    /// `f'(s) = F''(s)`; right derivative at sampled nodes.
    pub fn f_prime(&self, s: f64) -> f64 {
        match self {
            Self::ExponentialTail { a, beta } => -beta * (1.0 - a) * (-beta * s).exp(),
            Self::Sampled(p) => p.slope(p.segment(s)),
        }
    }

    /// `F(r) = ∫₀ʳ f`.
    pub fn big_f(&self, r: f64) -> f64 {
        match self {
            Self::ExponentialTail { a, beta } => a * r - (1.0 - a) * (-beta * r).exp_m1() / beta,
            Self::Sampled(p) => {
                let i = p.segment(r);
                let d = r - p.s[i];
                p.cum[i] + p.f[i] * d + 0.5 * p.slope(i) * d * d
            }
        }
    }

    /// `lim_{s→∞} f(s)`.
    pub fn tail_limit(&self) -> f64 {
        match self {
            Self::ExponentialTail { a, .. } => *a,
            Self::Sampled(p) => *p.f.last().expect("at least two nodes"),
        }
    }

    /// Kinks of `F^{n-1}` inside `(0, r)`, for quadrature.
    pub fn breakpoints(&self, r: f64) -> Vec<f64> {
        match self {
            Self::ExponentialTail { .. } => Vec::new(),
            Self::Sampled(p) => p.s.iter().copied().filter(|&x| x > 0.0 && x < r).collect(),
        }
    }
}
