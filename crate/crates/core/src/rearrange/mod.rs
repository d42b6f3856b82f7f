//! Euclidean rearrangement of radial functions on model spaces.
//!
//! A nonincreasing radial function `u` on a space with ball volumes `V(r)`
//! has superlevel sets that are balls, so its distribution function is
//! `t ↦ V(r(t))` with `r(t) = sup{r : u(r) > t}`. The rearrangement `u⋆` on
//! Euclidean space of the same effective dimension is `u ∘ ρ⁻¹`, where
//! `ρ(r) = (V(r)/ω_N)^{1/N}` matches ball volumes.

mod radial;

use std::fmt::Write as _;

use serde::Serialize;

pub use radial::{Profile, RadialFunction};

use crate::error::{domain, Error, Result};
use crate::quad::{breakpoints, integrate_pieces, QuadConfig};
use crate::spaces::ModelSpace;

/// Relative agreement required between direct and Cavalieri norms.
pub const CAVALIERI_TOLERANCE: f64 = 1e-7;
/// Slack below one accepted for the Pólya–Szegő ratio.
pub const POLYA_SZEGO_SLACK: f64 = 1e-6;
/// Relative tolerance of the co-area derivative check.
pub const COAREA_TOLERANCE: f64 = 1e-4;
/// Level sets with `|u'| <` this are treated as critical and skipped.
pub const CRITICAL_SLOPE: f64 = 1e-8;

fn norm_quad() -> QuadConfig {
    QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-11,
        max_intervals: 8000,
    }
}

fn require_radial(space: &ModelSpace) -> Result<()> {
    if space.radial_supported() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "radial rearrangement is not available on {}",
            space.label()
        )))
    }
}

/// Radii at which radial integrands over `[0, support]` should be split:
/// kinks of `u`, kinks of the density, and a dyadic ladder for long supports.
fn radial_points(space: &ModelSpace, u: &RadialFunction) -> Vec<f64> {
    let s = u.support();
    let mut interior = u.breakpoints();
    interior.extend(space.density_breakpoints(s));
    let mut x = s / 2.0;
    while x > 1.0 {
        interior.push(x);
        x /= 2.0;
    }
    breakpoints(0.0, s, interior)
}

impl RadialFunction {
    /// `r(t) = sup{r : u(r) > t}`, zero when `t >= sup u`.
    pub fn level_radius(&self, t: f64) -> f64 {
        if let Profile::Rearranged { source, from } = self.profile() {
            return from.rearrangement_radius(source.level_radius(t));
        }
        let s = self.support();
        if t >= self.sup() {
            return 0.0;
        }
        if self.edge_value() > t {
            return s;
        }
        let (mut lo, mut hi) = (0.0, s);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.value(mid) > t {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * s {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

/// `V(t) = m({u > t})` on a grid of thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionProfile {
    pub space: String,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
}

impl DistributionProfile {
    /// Two-column `(t, V)` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,V\n");
        for (t, v) in self.t.iter().zip(&self.v) {
            let _ = writeln!(out, "{t},{v}");
        }
        out
    }
}

fn distribution_value(space: &ModelSpace, u: &RadialFunction, t: f64) -> f64 {
    let r = u.level_radius(t);
    if r <= 0.0 {
        0.0
    } else {
        space.vol_ball_unchecked(r)
    }
}

/// Distribution function of `u` on `space` at each threshold of `t_grid`.
pub fn distribution(space: &ModelSpace, u: &RadialFunction, t_grid: &[f64]) -> Result<DistributionProfile> {
    require_radial(space)?;
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return domain("thresholds must be finite and nonnegative");
    }
    Ok(DistributionProfile {
        space: space.label(),
        t: t_grid.to_vec(),
        v: t_grid.iter().map(|&t| distribution_value(space, u, t)).collect(),
    })
}

/// Euclidean space whose dimension matches the effective dimension of `space`.
pub fn euclidean_model(space: &ModelSpace) -> Result<ModelSpace> {
    ModelSpace::euclidean(space.dimension())
}

/// `u⋆ = u ∘ ρ⁻¹` on [`euclidean_model`]`(space)`. On Euclidean space this is
/// the identity.
pub fn euclidean_rearrangement(space: &ModelSpace, u: &RadialFunction) -> Result<RadialFunction> {
    require_radial(space)?;
    if space.is_euclidean() {
        return Ok(u.clone());
    }
    Ok(RadialFunction::rearranged(u.clone(), space.clone()))
}

/// Both evaluations of `‖u‖_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormReport {
    /// `(∫ q t^{q-1} V(t) dt)^{1/q}`.
    pub cavalieri: f64,
    /// `(∫ u(r)^q m⁺(B(r)) dr)^{1/q}`.
    pub direct: f64,
    pub relative_gap: f64,
}

/// `∫ |u|^q dm` by radial quadrature.
pub fn lq_integral_direct(space: &ModelSpace, u: &RadialFunction, q: f64) -> Result<f64> {
    require_radial(space)?;
    check_exponent(q, 0.0, "q")?;
    let pts = radial_points(space, u);
    Ok(integrate_pieces(|r| u.value(r).powf(q) * space.radial_density(r), &pts, norm_quad()).value)
}

/// `∫ |u|^q dm = ∫₀^L q t^{q-1} V(t) dt`.
pub fn lq_integral_cavalieri(space: &ModelSpace, u: &RadialFunction, q: f64) -> Result<f64> {
    require_radial(space)?;
    check_exponent(q, 0.0, "q")?;
    let l = u.sup();
    let edge = u.edge_value();
    // Below the edge value the superlevel set is the whole support ball.
    let base = if edge > 0.0 {
        edge.powf(q) * space.vol_ball_unchecked(u.support())
    } else {
        0.0
    };
    let mut interior: Vec<f64> = radial_points(space, u).iter().map(|&r| u.value(r)).collect();
    let mut t = l / 4.0;
    while t > edge.max(l * 1e-12) {
        interior.push(t);
        t /= 4.0;
    }
    let pts = breakpoints(edge, l, interior);
    let body = integrate_pieces(
        |t| q * t.powf(q - 1.0) * distribution_value(space, u, t),
        &pts,
        norm_quad(),
    );
    Ok(base + body.value)
}

fn check_exponent(q: f64, min: f64, name: &str) -> Result<()> {
    if !(q > min && q.is_finite()) {
        return domain(format!("exponent {name} must exceed {min}, got {q}"));
    }
    Ok(())
}

/// Both evaluations of `‖u‖_q` and their relative gap.
pub fn lq_norm_report(space: &ModelSpace, u: &RadialFunction, q: f64) -> Result<NormReport> {
    let cav = lq_integral_cavalieri(space, u, q)?.powf(1.0 / q);
    let dir = lq_integral_direct(space, u, q)?.powf(1.0 / q);
    Ok(NormReport {
        cavalieri: cav,
        direct: dir,
        relative_gap: ((cav - dir) / cav).abs(),
    })
}

/// `‖u‖_{L^q(space)}` via the Cavalieri principle, cross-checked against
/// direct quadrature.
pub fn lq_norm(space: &ModelSpace, u: &RadialFunction, q: f64) -> Result<f64> {
    let rep = lq_norm_report(space, u, q)?;
    if !(rep.relative_gap <= CAVALIERI_TOLERANCE) {
        return Err(Error::Invariant(format!(
            "Cavalieri and direct L^{q} norms disagree: {} vs {} (gap {:e})",
            rep.cavalieri, rep.direct, rep.relative_gap
        )));
    }
    Ok(rep.cavalieri)
}

/// `∫ |∇u|^p dm = ∫ |u'(r)|^p m⁺(B(r)) dr`, using `|∇d| = 1`.
pub fn grad_lp_integral(space: &ModelSpace, u: &RadialFunction, p: f64) -> Result<f64> {
    require_radial(space)?;
    check_exponent(p, 1.0, "p")?;
    let pts = radial_points(space, u);
    Ok(integrate_pieces(
        |r| u.derivative(r).abs().powf(p) * space.radial_density(r),
        &pts,
        norm_quad(),
    )
    .value)
}

/// `‖∇u‖_{L^p(space)}`.
pub fn grad_lp_norm(space: &ModelSpace, u: &RadialFunction, p: f64) -> Result<f64> {
    Ok(grad_lp_integral(space, u, p)?.powf(1.0 / p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyaSzego {
    /// `‖∇u‖_{L^p(space)}`.
    pub lhs: f64,
    /// `AVR^{1/N} ‖∇u⋆‖_{L^p(R^N)}`.
    pub rhs: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// `‖∇u‖_p >= AVR^{1/N} ‖∇u⋆‖_p`.
pub fn polya_szego_check(space: &ModelSpace, u: &RadialFunction, p: f64) -> Result<PolyaSzego> {
    let star = euclidean_rearrangement(space, u)?;
    let lhs = grad_lp_norm(space, u, p)?;
    let rhs = space.avr().powf(1.0 / space.dimension()) * grad_lp_norm(&euclidean_model(space)?, &star, p)?;
    let ratio = lhs / rhs;
    Ok(PolyaSzego {
        lhs,
        rhs,
        ratio,
        holds: ratio >= 1.0 - POLYA_SZEGO_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoareaRow {
    pub t: f64,
    pub r: f64,
    /// `-V'(t)` by central difference.
    pub minus_dv: f64,
    /// `m⁺(B(r(t))) / |u'(r(t))|`.
    pub predicted: f64,
    pub relative_error: f64,
    /// Set when `t` is a critical or non-smooth level and was not compared.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoareaReport {
    pub rows: Vec<CoareaRow>,
    pub checked: usize,
    pub skipped: usize,
    pub worst_relative_error: f64,
    pub pass: bool,
    pub note: Option<String>,
}

/// Compares `-V'(t)` with the co-area prediction `m⁺(Π_t)/|∇u|` at each threshold.
pub fn coarea_derivative_check(space: &ModelSpace, u: &RadialFunction, t_grid: &[f64]) -> Result<CoareaReport> {
    require_radial(space)?;
    let l = u.sup();
    let delta = 1e-5 * l;
    // Values of u where V is not differentiable.
    let mut kinks: Vec<f64> = u.breakpoints().iter().map(|&r| u.value(r)).collect();
    kinks.push(u.edge_value());
    kinks.push(l);
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t.is_finite() && t > 0.0) {
            return domain("co-area thresholds must be positive and finite");
        }
        let r = u.level_radius(t);
        let slope = if r > 0.0 && r < u.support() {
            u.derivative(r).abs()
        } else {
            0.0
        };
        let near_kink = kinks.iter().any(|&k| (k - t).abs() <= 2.0 * delta);
        if slope < CRITICAL_SLOPE || near_kink || t - delta <= 0.0 {
            rows.push(CoareaRow {
                t,
                r,
                minus_dv: f64::NAN,
                predicted: f64::NAN,
                relative_error: f64::NAN,
                skipped: true,
            });
            continue;
        }
        let minus_dv =
            (distribution_value(space, u, t - delta) - distribution_value(space, u, t + delta)) / (2.0 * delta);
        let predicted = space.radial_density(r) / slope;
        rows.push(CoareaRow {
            t,
            r,
            minus_dv,
            predicted,
            relative_error: ((minus_dv - predicted) / predicted).abs(),
            skipped: false,
        });
    }
    let checked = rows.iter().filter(|r| !r.skipped).count();
    let worst = rows
        .iter()
        .filter(|r| !r.skipped)
        .map(|r| r.relative_error)
        .fold(0.0, f64::max);
    let skipped = rows.len() - checked;
    let note = (checked == 0 && !rows.is_empty())
        .then(|| "every level set is degenerate (|u'| = 0 or a kink); nothing to compare".to_string());
    Ok(CoareaReport {
        rows,
        checked,
        skipped,
        worst_relative_error: worst,
        pass: worst <= COAREA_TOLERANCE,
        note,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerCake {
    /// `f(R) V(R) - ∫₀ᴿ f'(r) V(r) dr`.
    pub layer_cake: f64,
    /// `∫_{B(R)} f(d(x₀, x)) dm` by radial quadrature.
    pub direct: f64,
    pub relative_gap: f64,
}

/// Both sides of `∫_{B(R)} f(d) dm = f(R)V(R) - ∫₀ᴿ f'(r)V(r) dr`.
pub fn layer_cake_report<F, D>(space: &ModelSpace, f: F, df: D, radius: f64) -> Result<LayerCake>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let vol_r = space.vol_ball(radius)?;
    let mut interior = space.density_breakpoints(radius);
    let mut x = radius / 2.0;
    while x > 1.0 {
        interior.push(x);
        x /= 2.0;
    }
    let pts = breakpoints(0.0, radius, interior);
    let tail = integrate_pieces(|r| df(r) * space.vol_ball_unchecked(r), &pts, norm_quad()).value;
    let layer_cake = f(radius) * vol_r - tail;
    let direct = integrate_pieces(|r| f(r) * space.radial_density(r), &pts, norm_quad()).value;
    let scale = layer_cake.abs().max(direct.abs());
    let relative_gap = if scale == 0.0 {
        0.0
    } else {
        (layer_cake - direct).abs() / scale
    };
    Ok(LayerCake {
        layer_cake,
        direct,
        relative_gap,
    })
}

/// `∫_{B(R)} f(d(x₀, x)) dm` via the layer-cake identity.
pub fn layer_cake_radial_integral<F, D>(space: &ModelSpace, f: F, df: D, radius: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    Ok(layer_cake_report(space, f, df, radius)?.layer_cake)
}
