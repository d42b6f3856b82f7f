use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rearrange::RadialFunction;
use crate::spaces::ModelSpace;
use crate::specfun::{bessel_first_zero, Precision};

/// Steps of the geometric inner grid per e-fold of radius.
const INNER_STEPS_PER_EFOLD: f64 = 250.0;
const OUTER_STEPS: usize = 4000;
/// Shooting starts here (relative to `R`) from the regular series solution.
const START: f64 = 1e-6;
/// End of the geometric inner grid (relative to `R`).
const INNER_END: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub radius: f64,
    pub lambda_1: f64,
    /// Positive on `[0, R)`, normalized to `φ(0) = 1`, zero at `R`.
    #[serde(skip)]
    pub eigenfunction: RadialFunction,
    /// Bisection steps on λ after bracketing.
    pub iterations: usize,
    /// Geometric widenings needed to bracket λ₁.
    pub widenings: usize,
    /// `φ(R)` at the returned λ.
    pub mismatch: f64,
}

fn grid(radius: f64) -> Vec<f64> {
    let r0 = START * radius;
    let r1 = INNER_END * radius;
    let inner = ((r1 / r0).ln() * INNER_STEPS_PER_EFOLD).ceil() as usize;
    let mut g: Vec<f64> = (0..inner)
        .map(|i| r0 * ((r1 / r0).ln() * i as f64 / inner as f64).exp())
        .collect();
    g.extend((0..=OUTER_STEPS).map(|i| r1 + (radius - r1) * i as f64 / OUTER_STEPS as f64));
    *g.last_mut().expect("nonempty") = radius;
    g
}

struct Shot {
    phi: Vec<f64>,
    psi: Vec<f64>,
    crossed: bool,
}

/// RK4 for `φ' = ψ`, `ψ' = -c(r) ψ - λ φ` where `c = (ln density)'`.
fn shoot(space: &ModelSpace, lambda: f64, g: &[f64], keep: bool) -> Shot {
    let nf = space.dimension();
    let r0 = g[0];
    let mut phi = 1.0 - lambda * r0 * r0 / (2.0 * nf);
    let mut psi = -lambda * r0 / nf;
    let rhs = |r: f64, y: f64, z: f64| (z, -space.log_density_derivative(r) * z - lambda * y);
    let mut out = Shot {
        phi: Vec::new(),
        psi: Vec::new(),
        crossed: false,
    };
    if keep {
        out.phi.reserve(g.len());
        out.psi.reserve(g.len());
        out.phi.push(phi);
        out.psi.push(psi);
    }
    for w in g.windows(2) {
        let (r, h) = (w[0], w[1] - w[0]);
        let (k1y, k1z) = rhs(r, phi, psi);
        let (k2y, k2z) = rhs(r + 0.5 * h, phi + 0.5 * h * k1y, psi + 0.5 * h * k1z);
        let (k3y, k3z) = rhs(r + 0.5 * h, phi + 0.5 * h * k2y, psi + 0.5 * h * k2z);
        let (k4y, k4z) = rhs(r + h, phi + h * k3y, psi + h * k3z);
        phi += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        psi += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
        if keep {
            out.phi.push(phi);
            out.psi.push(psi);
        }
        if phi <= 0.0 {
            out.crossed = true;
            if !keep {
                return out;
            }
        }
    }
    if !keep {
        out.phi.push(phi);
    }
    out
}

/// First Dirichlet eigenvalue of the ball `B(R)` about the pole, from the
/// radial problem `-(D φ')' = λ D φ`, `φ'(0) = 0`, `φ(R) = 0`, where `D` is
/// the radial density. Bisection stops at relative width `precision.abs_tol`.
pub fn fk_eigenvalue(space: &ModelSpace, radius: f64, precision: &Precision) -> Result<EigenResult> {
    if !space.radial_supported() {
        return Err(Error::Unsupported(format!(
            "Dirichlet eigenvalues need radial ball geometry; {} has none",
            space.label()
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return domain(format!("radius must be positive and finite, got {radius}"));
    }
    let nf = space.dimension();
    let j = bessel_first_zero(nf / 2.0 - 1.0)?;
    let guess = j * j / (radius * radius);
    let g = grid(radius);
    let (mut lo, mut hi) = (0.5 * guess, 2.0 * guess);
    let mut widenings = 0;
    while shoot(space, lo, &g, false).crossed {
        lo *= 0.5;
        widenings += 1;
        if widenings > precision.max_iter {
            return Err(bracket_failure(lo, hi, widenings));
        }
    }
    while !shoot(space, hi, &g, false).crossed {
        lo = hi;
        hi *= 2.0;
        widenings += 1;
        if widenings > precision.max_iter {
            return Err(bracket_failure(lo, hi, widenings));
        }
    }
    let tol = precision.abs_tol.max(4.0 * f64::EPSILON);
    let mut iterations = 0;
    while hi - lo > tol * hi {
        if iterations >= precision.max_iter {
            return Err(Error::Convergence {
                what: "Dirichlet eigenvalue bisection",
                iterations,
                lo,
                hi,
            });
        }
        let mid = 0.5 * (lo + hi);
        if shoot(space, mid, &g, false).crossed {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let lambda = 0.5 * (lo + hi);
    let shot = shoot(space, lambda, &g, true);
    let mismatch = *shot.phi.last().expect("nonempty");
    let eigenfunction = eigenfunction_from(&g, &shot)?;
    Ok(EigenResult {
        radius,
        lambda_1: lambda,
        eigenfunction,
        iterations,
        widenings,
        mismatch,
    })
}

fn bracket_failure(lo: f64, hi: f64, iterations: usize) -> Error {
    Error::Convergence {
        what: "Dirichlet eigenvalue bracket",
        iterations,
        lo,
        hi,
    }
}

fn eigenfunction_from(g: &[f64], shot: &Shot) -> Result<RadialFunction> {
    let mut r = Vec::with_capacity(g.len() + 1);
    let mut u = Vec::with_capacity(g.len() + 1);
    let mut d = Vec::with_capacity(g.len() + 1);
    r.push(0.0);
    u.push(1.0);
    d.push(0.0);
    let mut running = 1.0f64;
    for (i, &x) in g.iter().enumerate() {
        running = running.min(shot.phi[i].max(0.0));
        r.push(x);
        u.push(running);
        d.push(shot.psi[i].min(0.0));
    }
    *u.last_mut().expect("nonempty") = 0.0;
    RadialFunction::sampled_with_slopes(r, u, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_disk() {
        let e = ModelSpace::euclidean(2.0).unwrap();
        let res = fk_eigenvalue(&e, 1.0, &Precision::default()).unwrap();
        let j0 = bessel_first_zero(0.0).unwrap();
        assert!(((res.lambda_1 - j0 * j0) / (j0 * j0)).abs() < 1e-9, "{}", res.lambda_1);
        assert!(res.mismatch.abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_input() {
        let e = ModelSpace::euclidean(2.0).unwrap();
        assert!(fk_eigenvalue(&e, 0.0, &Precision::default()).is_err());
        let a = ModelSpace::ale(2, 3).unwrap();
        assert!(matches!(
            fk_eigenvalue(&a, 1.0, &Precision::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
