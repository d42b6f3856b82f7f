//! Model metric measure spaces with radial geometry: Euclidean space, warped
//! products, Euclidean cones, monomially weighted half-spaces and ALE
//! quotients. Ball volumes, sphere measures, asymptotic volume ratios and
//! the structural checks built on them.

mod descriptor;
mod profile;

pub use descriptor::SpaceDescriptor;
pub use profile::{SampledProfile, WarpingProfile};

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::isoperimetric_constant;
use crate::error::{domain, Error, Result};
use crate::quad::{breakpoints, integrate, integrate_pieces, QuadConfig};
use crate::specfun::omega_unchecked;

/// Relative slack for monotonicity tests on vol(B(r))/r^N.
pub const BISHOP_GROMOV_SLACK: f64 = 1e-10;
/// Relative slack below one accepted for the isoperimetric ratio.
pub const ISOPERIMETRIC_SLACK: f64 = 1e-9;

fn vol_quad() -> QuadConfig {
    QuadConfig::with_tol(0.0, 1e-13)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ModelSpace {
    Euclidean {
        n: f64,
    },
    WarpedProduct {
        n: u32,
        profile: WarpingProfile,
    },
    /// Cone over an `n`-dimensional link of total measure `link_measure`.
    EuclideanCone {
        n: u32,
        link_measure: f64,
    },
    /// `{x_n > 0}` in `R^n` with weight `x_n^{alpha_w}`; `lambda` caches the
    /// weighted measure of the unit half-ball.
    MonomialHalfSpace {
        n: u32,
        alpha_w: f64,
        lambda: f64,
    },
    /// `R^n / G` with `|G| = k`, acting freely at infinity.
    AleQuotient {
        n: u32,
        k: u32,
    },
}

impl ModelSpace {
    pub fn euclidean(n: f64) -> Result<Self> {
        if !n.is_finite() || n <= 1.0 {
            return domain(format!("Euclidean dimension must exceed 1, got {n}"));
        }
        Ok(Self::Euclidean { n })
    }

    pub fn warped(n: u32, profile: WarpingProfile) -> Result<Self> {
        if n < 2 {
            return domain(format!("warped products need n >= 2, got {n}"));
        }
        Ok(Self::WarpedProduct { n, profile })
    }

    /// Warped product with `f(s) = a + (1-a)e^{-βs}`.
    pub fn warped_exponential(n: u32, a: f64, beta: f64) -> Result<Self> {
        Self::warped(n, WarpingProfile::exponential_tail(a, beta)?)
    }

    pub fn cone(n: u32, link_measure: f64) -> Result<Self> {
        if n < 1 {
            return domain("cone link dimension must be >= 1");
        }
        let cap = Self::round_link_measure(n);
        if !(link_measure > 0.0) || link_measure > cap * (1.0 + 1e-12) {
            return domain(format!(
                "cone link measure must lie in (0, (n+1)ω_(n+1)] = (0, {cap}], got {link_measure}"
            ));
        }
        Ok(Self::EuclideanCone { n, link_measure })
    }

    /// Measure of the round unit sphere `S^n`, the largest admissible link measure.
    pub fn round_link_measure(n: u32) -> f64 {
        let m = f64::from(n) + 1.0;
        m * omega_unchecked(m)
    }

    pub fn monomial(n: u32, alpha_w: f64) -> Result<Self> {
        if n < 1 {
            return domain("half-space dimension must be >= 1");
        }
        if !(alpha_w >= 0.0 && alpha_w.is_finite()) {
            return domain(format!("weight exponent must be >= 0, got {alpha_w}"));
        }
        if f64::from(n) + alpha_w <= 1.0 {
            return domain("effective dimension n + alpha_w must exceed 1");
        }
        let lambda = monomial_unit_mass(n, alpha_w);
        Ok(Self::MonomialHalfSpace { n, alpha_w, lambda })
    }

    pub fn ale(n: u32, k: u32) -> Result<Self> {
        if n < 2 {
            return domain(format!("ALE quotients need n >= 2, got {n}"));
        }
        if k < 1 {
            return domain("group order must be >= 1");
        }
        Ok(Self::AleQuotient { n, k })
    }

    /// Effective dimension `N` entering the volume growth `r^N`.
    pub fn dimension(&self) -> f64 {
        match self {
            Self::Euclidean { n } => *n,
            Self::WarpedProduct { n, .. } | Self::AleQuotient { n, .. } => f64::from(*n),
            Self::EuclideanCone { n, .. } => f64::from(*n) + 1.0,
            Self::MonomialHalfSpace { n, alpha_w, .. } => f64::from(*n) + alpha_w,
        }
    }

    pub fn radial_supported(&self) -> bool {
        !matches!(self, Self::AleQuotient { .. })
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, Self::Euclidean { .. })
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self.descriptor() {
            Some(d) => d.to_string(),
            None => "variant=warped-sampled".to_string(),
        }
    }

    fn require_radial(&self, op: &str) -> Result<()> {
        if self.radial_supported() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{op} needs radial ball geometry, which ALE quotients do not model"
            )))
        }
    }

    fn check_radius(r: f64) -> Result<()> {
        if !(r > 0.0 && r.is_finite()) {
            return domain(format!("radius must be positive and finite, got {r}"));
        }
        Ok(())
    }

    /// Asymptotic volume ratio `lim m(B(r)) / (ω_N r^N)`.
    pub fn avr(&self) -> f64 {
        match self {
            Self::Euclidean { .. } => 1.0,
            Self::WarpedProduct { n, profile } => profile.tail_limit().powi(*n as i32 - 1),
            Self::EuclideanCone { link_measure, .. } => {
                (link_measure / Self::round_link_measure(self.cone_link_dim())).min(1.0)
            }
            Self::MonomialHalfSpace { lambda, .. } => lambda / omega_unchecked(self.dimension()),
            Self::AleQuotient { k, .. } => 1.0 / f64::from(*k),
        }
    }

    fn cone_link_dim(&self) -> u32 {
        match self {
            Self::EuclideanCone { n, .. } => *n,
            _ => unreachable!("not a cone"),
        }
    }

    /// Density of the measure in the radial variable, `d m(B(r)) / dr`.
    /// Equals the Minkowski content of the sphere of radius `r`.
    pub(crate) fn radial_density(&self, r: f64) -> f64 {
        match self {
            Self::Euclidean { n } => n * omega_unchecked(*n) * r.powf(n - 1.0),
            Self::WarpedProduct { n, profile } => {
                let nf = f64::from(*n);
                nf * omega_unchecked(nf) * profile.big_f(r).powi(*n as i32 - 1)
            }
            Self::EuclideanCone { n, link_measure } => link_measure * r.powi(*n as i32),
            Self::MonomialHalfSpace { lambda, .. } => {
                let big_n = self.dimension();
                big_n * lambda * r.powf(big_n - 1.0)
            }
            Self::AleQuotient { .. } => f64::NAN,
        }
    }

    /// `(d/dr) ln(density)`, the drift term of the radial Laplacian.
    pub(crate) fn log_density_derivative(&self, r: f64) -> f64 {
        match self {
            Self::WarpedProduct { n, profile } => {
                f64::from(*n - 1) * profile.f(r) / profile.big_f(r)
            }
            _ => (self.dimension() - 1.0) / r,
        }
    }

    /// Kinks of the radial density inside `(0, r)`.
    pub(crate) fn density_breakpoints(&self, r: f64) -> Vec<f64> {
        match self {
            Self::WarpedProduct { profile, .. } => profile.breakpoints(r),
            _ => Vec::new(),
        }
    }

    pub(crate) fn vol_ball_unchecked(&self, r: f64) -> f64 {
        match self {
            Self::Euclidean { n } => omega_unchecked(*n) * r.powf(*n),
            Self::WarpedProduct { n, profile } => {
                let nf = f64::from(*n);
                let k = *n as i32 - 1;
                let pts = breakpoints(0.0, r, profile.breakpoints(r));
                let q = integrate_pieces(|s| profile.big_f(s).powi(k), &pts, vol_quad());
                nf * omega_unchecked(nf) * q.value
            }
            Self::EuclideanCone { n, link_measure } => {
                let m = f64::from(*n) + 1.0;
                link_measure * r.powf(m) / m
            }
            Self::MonomialHalfSpace { lambda, .. } => lambda * r.powf(self.dimension()),
            Self::AleQuotient { .. } => f64::NAN,
        }
    }

    /// Measure of the ball of radius `r` about the pole.
    pub fn vol_ball(&self, r: f64) -> Result<f64> {
        self.require_radial("vol_ball")?;
        Self::check_radius(r)?;
        Ok(self.vol_ball_unchecked(r))
    }

    /// Minkowski content (outer boundary measure) of the ball of radius `r`.
    pub fn minkowski_content_ball(&self, r: f64) -> Result<f64> {
        self.require_radial("minkowski_content_ball")?;
        Self::check_radius(r)?;
        Ok(self.radial_density(r))
    }

    /// Radius whose ball has measure `v`; inverse of [`Self::vol_ball`].
    pub fn radius_for_volume(&self, v: f64) -> Result<f64> {
        self.require_radial("radius_for_volume")?;
        if !(v >= 0.0 && v.is_finite()) {
            return domain(format!("volume must be nonnegative, got {v}"));
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(self.radius_for_volume_unchecked(v))
    }

    pub(crate) fn radius_for_volume_unchecked(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        match self {
            Self::WarpedProduct { .. } => {
                // Safeguarded Newton on vol(r) = v, bracket from F(r) <= r and volume growth.
                let nf = self.dimension();
                let mut lo = (v / omega_unchecked(nf)).powf(1.0 / nf);
                let mut hi = lo.max(1.0);
                while self.vol_ball_unchecked(hi) < v {
                    lo = hi;
                    hi *= 2.0;
                }
                let mut r = 0.5 * (lo + hi);
                for _ in 0..200 {
                    let g = self.vol_ball_unchecked(r) - v;
                    if g > 0.0 {
                        hi = r;
                    } else {
                        lo = r;
                    }
                    let mut next = r - g / self.radial_density(r);
                    if !(next > lo && next < hi) {
                        next = 0.5 * (lo + hi);
                    }
                    if (next - r).abs() <= 1e-15 * r || hi - lo <= 1e-15 * hi {
                        return next;
                    }
                    r = next;
                }
                r
            }
            _ => {
                let nf = self.dimension();
                (v / self.vol_ball_unchecked(1.0)).powf(1.0 / nf)
            }
        }
    }

    /// Euclidean-rearrangement radius `ρ(r) = (vol(B(r))/ω_N)^{1/N}`.
    pub(crate) fn rearrangement_radius(&self, r: f64) -> f64 {
        let nf = self.dimension();
        if r <= 0.0 {
            return 0.0;
        }
        (self.vol_ball_unchecked(r) / omega_unchecked(nf)).powf(1.0 / nf)
    }

    /// Numerical AVR from volumes up to `r_max`, with a bracket.
    pub fn avr_numeric(&self, r_max: f64, samples: usize) -> Result<AvrEstimate> {
        self.require_radial("avr_numeric")?;
        Self::check_radius(r_max)?;
        if samples < 2 {
            return domain("avr_numeric needs at least two samples");
        }
        let nf = self.dimension();
        let w = omega_unchecked(nf);
        let r_min = r_max * 1e-3;
        let radii = geometric_grid(r_min, r_max, samples);
        let ratios: Vec<f64> = radii
            .iter()
            .map(|&r| self.vol_ball_unchecked(r) / (w * r.powf(nf)))
            .collect();
        let monotone = ratios
            .windows(2)
            .all(|p| p[1] <= p[0] * (1.0 + BISHOP_GROMOV_SLACK));
        let last = ratios[samples - 1];
        let prev = ratios[samples - 2];
        let (r_l, r_p) = (radii[samples - 1], radii[samples - 2]);
        // 1/r extrapolation of the remaining decay, doubled for the lower end.
        let tail = ((prev - last) * r_p / (r_l - r_p)).max(0.0);
        Ok(AvrEstimate {
            value: last,
            lower: (last - 2.0 * tail).max(0.0),
            upper: last,
            r_min,
            ratio_at_r_min: ratios[0],
            monotone,
        })
    }

    /// Audit of `r ↦ vol(B(r)) / r^N` on an ascending grid.
    pub fn bishop_gromov_check(&self, grid: &[f64]) -> Result<BishopGromovReport> {
        self.require_radial("bishop_gromov_check")?;
        check_grid(grid)?;
        let nf = self.dimension();
        let rows: Vec<(f64, f64)> = grid
            .par_iter()
            .map(|&r| (r, self.vol_ball_unchecked(r) / r.powf(nf)))
            .collect();
        let mut worst_increase = 0.0f64;
        let mut worst_at = None;
        for w in rows.windows(2) {
            let inc = (w[1].1 - w[0].1) / w[0].1;
            if inc > worst_increase {
                worst_increase = inc;
                worst_at = Some(w[1].0);
            }
        }
        Ok(BishopGromovReport {
            rows,
            pass: worst_increase <= BISHOP_GROMOV_SLACK,
            worst_relative_increase: worst_increase,
            worst_at,
        })
    }

    /// Ball instance of the sharp isoperimetric inequality.
    pub fn isoperimetric_deficit(&self, r: f64) -> Result<IsoperimetricDeficit> {
        let vol = self.vol_ball(r)?;
        let lhs = self.radial_density(r);
        let nf = self.dimension();
        let rhs = isoperimetric_constant(nf, self.avr())? * vol.powf((nf - 1.0) / nf);
        let ratio = lhs / rhs;
        Ok(IsoperimetricDeficit {
            r,
            lhs,
            rhs,
            ratio,
            holds: ratio >= 1.0 - ISOPERIMETRIC_SLACK,
        })
    }

    /// Table of `m⁺(B(r)) / m(B(r))^{(N-1)/N}` against the sharp constant.
    pub fn isoperimetric_sharpness_sweep(&self, radii: &[f64]) -> Result<IsoperimetricSweep> {
        self.require_radial("isoperimetric_sharpness_sweep")?;
        check_grid(radii)?;
        let nf = self.dimension();
        let bound = isoperimetric_constant(nf, self.avr())?;
        let rows: Vec<SweepRow> = radii
            .par_iter()
            .map(|&r| {
                let vol = self.vol_ball_unchecked(r);
                let mink = self.radial_density(r);
                let ratio = mink / vol.powf((nf - 1.0) / nf);
                SweepRow {
                    r,
                    vol,
                    mink_content: mink,
                    ratio,
                    sharp_bound: bound,
                    margin: ratio - bound,
                }
            })
            .collect();
        let tail_gap = rows.last().map(|row| row.margin / bound).unwrap_or(0.0);
        let min_rel = rows
            .iter()
            .map(|row| row.margin / bound)
            .fold(f64::INFINITY, f64::min);
        Ok(IsoperimetricSweep {
            rows,
            sharp_bound: bound,
            tail_gap,
            holds: min_rel >= -ISOPERIMETRIC_SLACK,
        })
    }

    /// `Λ_α = ∫_{B(1)∩Σ} x_n^{α}` and the AVR `Λ_α / ω_{n+α}` of a weighted half-space.
    pub fn weighted_avr_lambda(&self) -> Result<(f64, f64)> {
        match self {
            Self::MonomialHalfSpace { lambda, .. } => Ok((*lambda, self.avr())),
            _ => Err(Error::Unsupported(
                "weighted_avr_lambda applies to monomial half-spaces only".into(),
            )),
        }
    }

    /// Flat descriptor, or `None` for sampled warping profiles.
    pub fn descriptor(&self) -> Option<SpaceDescriptor> {
        SpaceDescriptor::from_space(self)
    }
}

/// `ω_{n-1} ∫₀^{π/2} sin^α φ cos^n φ dφ`: slices `x_n = sin φ` of the half-ball.
fn monomial_unit_mass(n: u32, alpha_w: f64) -> f64 {
    let nf = f64::from(n);
    let slice = if n == 1 { 1.0 } else { omega_unchecked(nf - 1.0) };
    let q = integrate(
        |phi: f64| phi.sin().powf(alpha_w) * phi.cos().powi(n as i32),
        0.0,
        std::f64::consts::FRAC_PI_2,
        QuadConfig::with_tol(1e-15, 1e-13),
    );
    slice * q.value
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("radius grid is empty");
    }
    if grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return domain("radius grid must contain positive finite values");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("radius grid must be strictly ascending");
    }
    Ok(())
}

/// `count` geometrically spaced points from `start` to `stop`, endpoints included.
pub fn geometric_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![stop];
    }
    let ratio = (stop / start).ln() / (count - 1) as f64;
    let mut v: Vec<f64> = (0..count).map(|i| start * (ratio * i as f64).exp()).collect();
    v[0] = start;
    v[count - 1] = stop;
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AvrEstimate {
    /// `vol(B(r_max)) / (ω_N r_max^N)`.
    pub value: f64,
    pub lower: f64,
    /// Upper end; Bishop–Gromov makes the ratio at `r_max` an upper bound.
    pub upper: f64,
    pub r_min: f64,
    pub ratio_at_r_min: f64,
    pub monotone: bool,
}

impl AvrEstimate {
    pub fn contains(&self, avr: f64) -> bool {
        let slack = 1e-12 * avr.abs().max(1.0);
        avr >= self.lower - slack && avr <= self.upper + slack
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BishopGromovReport {
    /// `(r, vol(B(r)) / r^N)`.
    pub rows: Vec<(f64, f64)>,
    pub pass: bool,
    pub worst_relative_increase: f64,
    pub worst_at: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureOffender {
    pub r: f64,
    /// `"F''"` or `"F'"`.
    pub quantity: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub pass: bool,
    pub max_f_second: f64,
    pub max_f_prime: f64,
    pub worst: Option<CurvatureOffender>,
}

/// Checks the sufficient conditions `F'' <= 0` and `F' <= 1` for nonnegative
/// sectional curvature of `dr² + F(r)² dθ²` on the grid.
pub fn curvature_check(profile: &WarpingProfile, grid: &[f64]) -> Result<CurvatureReport> {
    if grid.is_empty() || grid.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return domain("curvature grid must be nonempty with finite nonnegative entries");
    }
    let mut max_second = f64::NEG_INFINITY;
    let mut max_first = f64::NEG_INFINITY;
    let mut worst: Option<CurvatureOffender> = None;
    let mut worst_excess = 0.0;
    for &r in grid {
        let second = profile.f_prime(r);
        let first = profile.f(r);
        max_second = max_second.max(second);
        max_first = max_first.max(first);
        if second > 1e-12 && second - 1e-12 > worst_excess {
            worst_excess = second - 1e-12;
            worst = Some(CurvatureOffender {
                r,
                quantity: "F''",
                value: second,
            });
        }
        if first > 1.0 + 1e-12 && first - 1.0 - 1e-12 > worst_excess {
            worst_excess = first - 1.0 - 1e-12;
            worst = Some(CurvatureOffender {
                r,
                quantity: "F'",
                value: first,
            });
        }
    }
    Ok(CurvatureReport {
        pass: worst.is_none(),
        max_f_second: max_second,
        max_f_prime: max_first,
        worst,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoperimetricDeficit {
    pub r: f64,
    /// Minkowski content of the ball.
    pub lhs: f64,
    /// `N ω_N^{1/N} AVR^{1/N} vol^{(N-1)/N}`.
    pub rhs: f64,
    pub ratio: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub r: f64,
    pub vol: f64,
    pub mink_content: f64,
    pub ratio: f64,
    pub sharp_bound: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoperimetricSweep {
    pub rows: Vec<SweepRow>,
    pub sharp_bound: f64,
    /// Relative gap `(ratio - bound)/bound` at the largest radius.
    pub tail_gap: f64,
    pub holds: bool,
}
