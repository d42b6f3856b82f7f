use rayon::prelude::*;
use serde::Serialize;

use crate::constants::fk_constant;
use crate::error::{domain, Result};
use crate::quad::{integrate, QuadConfig};
use crate::rearrange::layer_cake_radial_integral;
use crate::spaces::ModelSpace;
use crate::specfun::{bessel_first_zero, bessel_j_reduced_unchecked, bessel_j_unchecked, omega_unchecked};

/// Relative distance to the limiting integrals accepted at the largest radius.
pub const LIMIT_TOLERANCE: f64 = 0.01;
/// Slack on the (reported, not enforced) monotonicity of `Q(R)`.
pub const MONOTONE_SLACK: f64 = 1e-6;

/// `∫₀¹ t J_ν(j_ν t)² dt` and its closed form `J_{ν+1}(j_ν)²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselOrthogonality {
    pub nu: f64,
    pub quadrature: f64,
    pub closed_form: f64,
}

pub fn bessel_orthogonality(nu: f64) -> Result<BesselOrthogonality> {
    let j = bessel_first_zero(nu)?;
    let q = integrate(
        |t| t * bessel_j_unchecked(nu, j * t).powi(2),
        0.0,
        1.0,
        QuadConfig::with_tol(1e-16, 1e-13),
    );
    Ok(BesselOrthogonality {
        nu,
        quadrature: q.value,
        closed_form: 0.5 * bessel_j_unchecked(nu + 1.0, j).powi(2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FkSweepRow {
    pub radius: f64,
    /// `∫ |∇u_R|² dm`.
    pub grad_integral: f64,
    /// `∫ u_R² dm`.
    pub l2_integral: f64,
    pub vol: f64,
    /// `Q(R) = (∫|∇u_R|² / ∫u_R²) Vol(B(R))^{2/N}`.
    pub q: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FkSweep {
    pub space: String,
    pub nu: f64,
    pub bound: f64,
    pub rows: Vec<FkSweepRow>,
    /// `j_ν² N ω_N AVR ∫₀¹ t J_{ν+1}(j_ν t)² dt`.
    pub grad_limit: f64,
    /// `N ω_N AVR ∫₀¹ t J_ν(j_ν t)² dt`, the limit of `∫u_R²/R²`.
    pub l2_limit: f64,
    /// Relative distance of the largest-radius integrals to the limits.
    pub grad_limit_error: f64,
    pub l2_limit_error: f64,
    pub limits_reproduced: bool,
    /// Every `Q(R) >= Λ_g` within the margin tolerance.
    pub holds: bool,
    /// `Q(R)` nonincreasing along the sweep; exploratory.
    pub monotone: bool,
}

/// Rayleigh quotients of `u_R = r^{-ν} J_ν(j_ν r/R)`, `ν = N/2 - 1`, over the
/// ball `B(R)` for each radius, via the layer-cake identity.
pub fn fk_sharpness_sweep(space: &ModelSpace, radii: &[f64]) -> Result<FkSweep> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return domain("sweep radii must be positive and finite");
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return domain("sweep radii must be strictly ascending");
    }
    let nf = space.dimension();
    let nu = nf / 2.0 - 1.0;
    let bound = fk_constant(nf, space.avr())?;
    let j = bessel_first_zero(nu)?;
    let rows: Vec<Result<FkSweepRow>> = radii
        .par_iter()
        .map(|&radius| {
            let k = j / radius;
            let kn = k.powf(nu);
            let u = move |r: f64| kn * bessel_j_reduced_unchecked(nu, k * r);
            let du = move |r: f64| -kn * k * k * r * bessel_j_reduced_unchecked(nu + 1.0, k * r);
            // u solves u'' + (N-1)u'/r + k²u = 0.
            let d2u = move |r: f64| {
                if r == 0.0 {
                    -k * k * u(0.0) / nf
                } else {
                    -k * k * u(r) - (nf - 1.0) * du(r) / r
                }
            };
            let l2 = layer_cake_radial_integral(space, |r| u(r).powi(2), |r| 2.0 * u(r) * du(r), radius)?;
            let grad = layer_cake_radial_integral(space, |r| du(r).powi(2), |r| 2.0 * du(r) * d2u(r), radius)?;
            let vol = space.vol_ball(radius)?;
            let q = grad / l2 * vol.powf(2.0 / nf);
            Ok(FkSweepRow {
                radius,
                grad_integral: grad,
                l2_integral: l2,
                vol,
                q,
                margin: q - bound,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let scale = nf * omega_unchecked(nf) * space.avr();
    let cfg = QuadConfig::with_tol(1e-16, 1e-13);
    let grad_limit = j * j * scale
        * integrate(|t| t * bessel_j_unchecked(nu + 1.0, j * t).powi(2), 0.0, 1.0, cfg).value;
    let l2_limit = scale * integrate(|t| t * bessel_j_unchecked(nu, j * t).powi(2), 0.0, 1.0, cfg).value;
    let last = rows.last().expect("nonempty");
    let grad_limit_error = ((last.grad_integral - grad_limit) / grad_limit).abs();
    let l2_limit_error = ((last.l2_integral / (last.radius * last.radius) - l2_limit) / l2_limit).abs();
    let holds = rows
        .iter()
        .all(|r| r.margin >= -super::MARGIN_TOLERANCE * bound);
    let monotone = rows
        .windows(2)
        .all(|w| w[1].q <= w[0].q * (1.0 + MONOTONE_SLACK));
    Ok(FkSweep {
        space: space.label(),
        nu,
        bound,
        rows,
        grad_limit,
        l2_limit,
        grad_limit_error,
        l2_limit_error,
        limits_reproduced: grad_limit_error <= LIMIT_TOLERANCE && l2_limit_error <= LIMIT_TOLERANCE,
        holds,
        monotone,
    })
}
