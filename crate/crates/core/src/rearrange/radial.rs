use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::spaces::ModelSpace;
use crate::specfun::{bessel_first_zero, bessel_j_reduced_unchecked, omega_unchecked};

const MAX_BREAKPOINTS: usize = 64;

/// Shape of a radial profile on `[0, support)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Profile {
    /// Cubic Hermite interpolation through `(r_i, u_i)` with slopes `d_i`.
    Sampled {
        r: Vec<f64>,
        u: Vec<f64>,
        slopes: Vec<f64>,
    },
    /// `height` on `[0, inner]`, then linear down to zero at the support radius.
    /// `inner = support` is a plateau (indicator), `inner = 0` a tent.
    Ramp { height: f64, inner: f64 },
    /// `height · (exp(-(r/width)²) - exp(-(R/width)²))`, vanishing at the support radius `R`.
    Gaussian { height: f64, width: f64 },
    /// `height · (1 - (r/R)²)^power` with `R` the support radius.
    Bump { height: f64, power: f64 },
    /// `(λ + r^{p'})^{1/(1-α)}`, cut at the support radius. With `shifted`
    /// the value at the cut is subtracted so the function is Lipschitz.
    Extremal {
        alpha: f64,
        p: f64,
        lambda: f64,
        shifted: bool,
    },
    /// `r^{-ν} J_ν(j_ν r / R)` with `R` the support radius.
    BesselMode { nu: f64, zero: f64 },
    /// `u⋆(s) = u(ρ⁻¹(s))`, the Euclidean rearrangement of `source` living on `from`.
    Rearranged {
        source: Box<RadialFunction>,
        from: Box<ModelSpace>,
    },
}

/// A nonnegative, nonincreasing radial function `u(d(x₀, x))`, identically
/// zero from `support` on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    profile: Profile,
    support: f64,
}

fn positive(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("{what} must be positive and finite, got {x}"));
    }
    Ok(())
}

/// Fritsch–Carlson slopes: monotone data gives a monotone interpolant.
fn pchip_slopes(r: &[f64], u: &[f64]) -> Vec<f64> {
    let m = r.len();
    let h: Vec<f64> = r.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..m - 1).map(|i| (u[i + 1] - u[i]) / h[i]).collect();
    let mut d = vec![0.0; m];
    if m == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for i in 1..m - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            0.0
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[m - 1] = end(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
    d
}

impl RadialFunction {
    /// Monotone piecewise-cubic interpolant; the support is the last node.
    pub fn sampled(r: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        Self::check_nodes(&r, &u)?;
        let slopes = pchip_slopes(&r, &u);
        Self::from_parts(r, u, slopes)
    }

    /// Hermite interpolant with caller-provided slopes (e.g. from an ODE solve).
    pub fn sampled_with_slopes(r: Vec<f64>, u: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        Self::check_nodes(&r, &u)?;
        if slopes.len() != r.len() || slopes.iter().any(|d| !d.is_finite()) {
            return domain("slopes must be finite and match the node count");
        }
        Self::from_parts(r, u, slopes)
    }

    fn from_parts(r: Vec<f64>, u: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        let support = *r.last().expect("checked");
        Ok(Self {
            profile: Profile::Sampled { r, u, slopes },
            support,
        })
    }

    fn check_nodes(r: &[f64], u: &[f64]) -> Result<()> {
        if r.len() != u.len() || r.len() < 2 {
            return domain("need at least two (r, u) nodes of equal length");
        }
        if r[0] != 0.0 {
            return domain("first node must sit at r = 0");
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) || r.iter().any(|x| !x.is_finite()) {
            return domain("radii must be finite and strictly ascending");
        }
        if u.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::Invariant("values must be finite and nonnegative".into()));
        }
        if let Some(i) = u.windows(2).position(|w| w[1] > w[0]) {
            return Err(Error::Invariant(format!(
                "values must be nonincreasing; u({}) = {} < u({}) = {}",
                r[i], u[i], r[i + 1], u[i + 1]
            )));
        }
        if u[0] <= 0.0 {
            return Err(Error::Invariant("function vanishes identically".into()));
        }
        Ok(())
    }

    /// Indicator-like plateau: `height` on `[0, radius)`.
    pub fn plateau(height: f64, radius: f64) -> Result<Self> {
        Self::trapezoid(height, radius, radius)
    }

    /// `height · (1 - r/radius)₊`.
    pub fn tent(height: f64, radius: f64) -> Result<Self> {
        Self::trapezoid(height, 0.0, radius)
    }

    /// `height` up to `inner`, linear to zero at `outer`.
    pub fn trapezoid(height: f64, inner: f64, outer: f64) -> Result<Self> {
        positive(height, "height")?;
        positive(outer, "outer radius")?;
        if !(0.0..=outer).contains(&inner) {
            return domain(format!("inner radius must lie in [0, {outer}], got {inner}"));
        }
        Ok(Self {
            profile: Profile::Ramp { height, inner },
            support: outer,
        })
    }

    pub fn gaussian(height: f64, width: f64, cut: f64) -> Result<Self> {
        positive(height, "height")?;
        positive(width, "width")?;
        positive(cut, "cut radius")?;
        Ok(Self {
            profile: Profile::Gaussian { height, width },
            support: cut,
        })
    }

    pub fn bump(height: f64, radius: f64, power: f64) -> Result<Self> {
        positive(height, "height")?;
        positive(radius, "radius")?;
        if !(power >= 1.0 && power.is_finite()) {
            return domain(format!("bump power must be >= 1, got {power}"));
        }
        Ok(Self {
            profile: Profile::Bump { height, power },
            support: radius,
        })
    }

    /// Gagliardo–Nirenberg extremal `(λ + r^{p/(p-1)})^{1/(1-α)}`, hard-cut at `cut`.
    /// The jump at the cut is ignored by gradient norms, so quotients of this
    /// function are those of the untruncated extremal restricted to the ball.
    pub fn extremal(alpha: f64, p: f64, lambda: f64, cut: f64) -> Result<Self> {
        Self::extremal_impl(alpha, p, lambda, cut, false)
    }

    /// `(h - h(cut))₊` for the extremal `h`: a genuine Lipschitz test function.
    pub fn extremal_shifted(alpha: f64, p: f64, lambda: f64, cut: f64) -> Result<Self> {
        Self::extremal_impl(alpha, p, lambda, cut, true)
    }

    fn extremal_impl(alpha: f64, p: f64, lambda: f64, cut: f64, shifted: bool) -> Result<Self> {
        if !(alpha > 1.0 && alpha.is_finite()) {
            return domain(format!("extremal needs alpha > 1, got {alpha}"));
        }
        if !(p > 1.0 && p.is_finite()) {
            return domain(format!("extremal needs p > 1, got {p}"));
        }
        positive(lambda, "lambda")?;
        positive(cut, "cut radius")?;
        Ok(Self {
            profile: Profile::Extremal {
                alpha,
                p,
                lambda,
                shifted,
            },
            support: cut,
        })
    }

    /// `r^{-ν} J_ν(j_ν r / R)` on the ball of radius `R`, ν = n/2 - 1.
    pub fn bessel_mode(nu: f64, radius: f64) -> Result<Self> {
        positive(radius, "radius")?;
        let zero = bessel_first_zero(nu)?;
        Ok(Self {
            profile: Profile::BesselMode { nu, zero },
            support: radius,
        })
    }

    pub(crate) fn rearranged(source: RadialFunction, from: ModelSpace) -> Self {
        let support = from.rearrangement_radius(source.support);
        Self {
            profile: Profile::Rearranged {
                source: Box::new(source),
                from: Box::new(from),
            },
            support,
        }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    /// `L = sup u = u(0)`.
    pub fn sup(&self) -> f64 {
        self.raw_value(0.0)
    }

    /// `u(r)`; zero for `r >= support`.
    pub fn value(&self, r: f64) -> f64 {
        if r >= self.support {
            0.0
        } else {
            self.raw_value(r.max(0.0))
        }
    }

    /// `u'(r)` (right derivative at kinks); zero beyond the support.
    pub fn derivative(&self, r: f64) -> f64 {
        if r >= self.support {
            0.0
        } else {
            self.raw_derivative(r.max(0.0))
        }
    }

    /// Left limit of `u` at the support radius (nonzero for truncated profiles).
    pub fn edge_value(&self) -> f64 {
        self.raw_value(self.support)
    }

    /// Kinks and jumps inside `(0, support)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.profile {
            Profile::Sampled { r, .. } => {
                // The interpolant is C¹; dense node sets are thinned so quadrature
                // is not forced to split at every node.
                let inner = &r[1..r.len() - 1];
                let stride = inner.len().div_ceil(MAX_BREAKPOINTS).max(1);
                inner.iter().step_by(stride).copied().collect()
            }
            Profile::Ramp { inner, .. } if *inner > 0.0 && *inner < self.support => vec![*inner],
            Profile::Rearranged { source, from } => source
                .breakpoints()
                .into_iter()
                .map(|b| from.rearrangement_radius(b))
                .collect(),
            _ => Vec::new(),
        }
    }

    fn raw_value(&self, r: f64) -> f64 {
        let s = self.support;
        match &self.profile {
            Profile::Sampled { r: x, u, slopes } => {
                let i = segment(x, r);
                let h = x[i + 1] - x[i];
                let t = (r - x[i]) / h;
                let (t2, t3) = (t * t, t * t * t);
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                (h00 * u[i] + h10 * h * slopes[i] + h01 * u[i + 1] + h11 * h * slopes[i + 1]).max(0.0)
            }
            Profile::Ramp { height, inner } => {
                if r <= *inner {
                    *height
                } else {
                    height * ((s - r) / (s - inner)).max(0.0)
                }
            }
            Profile::Gaussian { height, width } => {
                height * ((-(r / width).powi(2)).exp() - (-(s / width).powi(2)).exp()).max(0.0)
            }
            Profile::Bump { height, power } => height * (1.0 - (r / s).powi(2)).max(0.0).powf(*power),
            Profile::Extremal {
                alpha,
                p,
                lambda,
                shifted,
            } => {
                let h = |x: f64| (lambda + x.powf(p / (p - 1.0))).powf(1.0 / (1.0 - alpha));
                if *shifted {
                    (h(r) - h(s)).max(0.0)
                } else {
                    h(r)
                }
            }
            Profile::BesselMode { nu, zero } => {
                let k = zero / s;
                k.powf(*nu) * bessel_j_reduced_unchecked(*nu, (k * r).min(*zero)).max(0.0)
            }
            Profile::Rearranged { source, from } => {
                let nf = from.dimension();
                let v = omega_unchecked(nf) * r.powf(nf);
                source.value(from.radius_for_volume_unchecked(v))
            }
        }
    }

    fn raw_derivative(&self, r: f64) -> f64 {
        let s = self.support;
        match &self.profile {
            Profile::Sampled { r: x, u, slopes } => {
                let i = segment(x, r);
                let h = x[i + 1] - x[i];
                let t = (r - x[i]) / h;
                let t2 = t * t;
                let d00 = (6.0 * t2 - 6.0 * t) / h;
                let d10 = 3.0 * t2 - 4.0 * t + 1.0;
                let d01 = (-6.0 * t2 + 6.0 * t) / h;
                let d11 = 3.0 * t2 - 2.0 * t;
                d00 * u[i] + d10 * slopes[i] + d01 * u[i + 1] + d11 * slopes[i + 1]
            }
            Profile::Ramp { height, inner } => {
                if r < *inner {
                    0.0
                } else {
                    -height / (s - inner)
                }
            }
            Profile::Gaussian { height, width } => {
                let z = r / width;
                -2.0 * height * z / width * (-z * z).exp()
            }
            Profile::Bump { height, power } => {
                let w = 1.0 - (r / s).powi(2);
                if w <= 0.0 {
                    0.0
                } else {
                    -height * power * w.powf(power - 1.0) * 2.0 * r / (s * s)
                }
            }
            Profile::Extremal { alpha, p, lambda, .. } => {
                let pp = p / (p - 1.0);
                let base = lambda + r.powf(pp);
                let e = 1.0 / (1.0 - alpha);
                e * base.powf(e - 1.0) * pp * r.powf(pp - 1.0)
            }
            Profile::BesselMode { nu, zero } => {
                // d/dr [r^{-ν} J_ν(kr)] = -k r^{-ν} J_{ν+1}(kr) = -k^{ν+2} r (kr)^{-(ν+1)} J_{ν+1}(kr)
                let k = zero / s;
                let x = k * r;
                -k.powf(nu + 2.0) * r * bessel_j_reduced_unchecked(nu + 1.0, x)
            }
            Profile::Rearranged { source, from } => {
                if r == 0.0 {
                    return source.derivative(0.0) / from.rearrangement_radius_derivative(0.0);
                }
                let nf = from.dimension();
                let v = omega_unchecked(nf) * r.powf(nf);
                let rr = from.radius_for_volume_unchecked(v);
                // ρ'(r) = m⁺(B(r)) / (N ω_N ρ^{N-1})
                let rho_prime = from.radial_density(rr) / (nf * omega_unchecked(nf) * r.powf(nf - 1.0));
                source.derivative(rr) / rho_prime
            }
        }
    }

    /// Nodes `(r, u)` as two-column CSV with a header row. Sampled profiles emit
    /// their nodes; analytic ones are sampled on `points` uniform radii.
    pub fn to_csv(&self, points: usize) -> String {
        let mut out = String::from("r,u\n");
        let nodes: Vec<f64> = match &self.profile {
            Profile::Sampled { r, .. } => r.clone(),
            _ => {
                let m = points.max(2);
                (0..m).map(|i| self.support * i as f64 / (m - 1) as f64).collect()
            }
        };
        let last = nodes.len() - 1;
        for (i, r) in nodes.iter().enumerate() {
            let u = if i == last { self.edge_value() } else { self.value(*r) };
            let _ = writeln!(out, "{r},{u}");
        }
        out
    }

    /// Parse two-column `(r, u)` CSV (header optional) into a sampled profile.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut u = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split(',');
            let (a, b) = (it.next(), it.next());
            let parsed = match (a, b, it.next()) {
                (Some(a), Some(b), None) => a.trim().parse::<f64>().ok().zip(b.trim().parse::<f64>().ok()),
                _ => None,
            };
            match parsed {
                Some((x, y)) => {
                    r.push(x);
                    u.push(y);
                }
                None if lineno == 0 => continue,
                None => return Err(Error::Parse(format!("line {}: expected r,u", lineno + 1))),
            }
        }
        Self::sampled(r, u)
    }
}

/// Segment index `i` with `x[i] <= r < x[i+1]`, clamped to the last segment.
fn segment(x: &[f64], r: f64) -> usize {
    let m = x.len();
    match x.binary_search_by(|v| v.total_cmp(&r)) {
        Ok(i) => i.min(m - 2),
        Err(0) => 0,
        Err(i) => (i - 1).min(m - 2),
    }
}

impl ModelSpace {
    pub(crate) fn rearrangement_radius_derivative(&self, r: f64) -> f64 {
        let nf = self.dimension();
        if r == 0.0 {
            // Warped products are Euclidean to first order at the pole; the other
            // radial models have ρ exactly linear.
            return match self {
                ModelSpace::WarpedProduct { .. } => 1.0,
                _ => self.rearrangement_radius(1.0),
            };
        }
        let rho = self.rearrangement_radius(r);
        self.radial_density(r) / (nf * omega_unchecked(nf) * rho.powf(nf - 1.0))
    }
}
