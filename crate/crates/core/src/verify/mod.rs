//! End-to-end checks of the sharp inequalities on model spaces: Sobolev and
//! Gagliardo–Nirenberg quotients, Faber–Krahn eigenvalues, and the Bessel
//! test-function sweep that shows `Λ_g` cannot be improved.

mod eigen;
mod sweep;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

pub use eigen::{fk_eigenvalue, EigenResult};
pub use sweep::{bessel_orthogonality, fk_sharpness_sweep, BesselOrthogonality, FkSweep, FkSweepRow};

use crate::constants::{fk_constant, gn_constant, gn_sharp_constant, gn_theta, sobolev_constant, SobolevParams};
use crate::error::{domain, Result};
use crate::rearrange::{grad_lp_integral, grad_lp_norm, lq_integral_cavalieri, lq_integral_direct, lq_norm, RadialFunction};
use crate::spaces::ModelSpace;
use crate::specfun::{omega_unchecked, Precision};

/// Relative tolerance on margins: a report holds when `margin >= -MARGIN_TOLERANCE · rhs_constant`.
pub const MARGIN_TOLERANCE: f64 = 1e-6;

/// `h^λ_{α,p}(r) = (λ + r^{p/(p-1)})^{1/(1-α)}`.
pub fn extremal_h(alpha: f64, p: f64, lambda: f64, r: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return domain(format!("alpha > 1 violated: alpha={alpha}"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p > 1 violated: p={p}"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda > 0 violated: lambda={lambda}"));
    }
    if !(r >= 0.0) {
        return domain(format!("r >= 0 violated: r={r}"));
    }
    Ok((lambda + r.powf(p / (p - 1.0))).powf(1.0 / (1.0 - alpha)))
}

/// Which side of the sharp constant the quotient must stay on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `quotient <= rhs_constant` (Sobolev, Gagliardo–Nirenberg).
    Upper,
    /// `quotient >= rhs_constant` (Faber–Krahn).
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientReport {
    pub inequality: &'static str,
    pub space: String,
    pub function: String,
    pub n: f64,
    pub p: f64,
    pub alpha: f64,
    /// Ball radius for eigenvalue reports.
    pub radius: Option<f64>,
    /// Numerator of the quotient: `‖u‖_{p⋆}`, `‖u‖_{αp}`, or `λ₁ Vol^{2/N}`.
    pub lhs: f64,
    pub rhs_constant: f64,
    pub quotient: f64,
    /// Positive when the inequality holds: `rhs - quotient` for upper
    /// bounds, `quotient - rhs` for lower bounds.
    pub margin: f64,
    pub bound: Bound,
    pub holds: bool,
}

impl QuotientReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        inequality: &'static str,
        space: &ModelSpace,
        function: &str,
        params: (f64, f64, f64),
        radius: Option<f64>,
        lhs: f64,
        quotient: f64,
        rhs_constant: f64,
        bound: Bound,
    ) -> Self {
        let margin = match bound {
            Bound::Upper => rhs_constant - quotient,
            Bound::Lower => quotient - rhs_constant,
        };
        Self {
            inequality,
            space: space.label(),
            function: function.to_string(),
            n: params.0,
            p: params.1,
            alpha: params.2,
            radius,
            lhs,
            rhs_constant,
            quotient,
            margin,
            bound,
            holds: margin >= -MARGIN_TOLERANCE * rhs_constant,
        }
    }

    /// Relative margin `margin / rhs_constant`.
    pub fn relative_margin(&self) -> f64 {
        self.margin / self.rhs_constant
    }
}

/// `‖u‖_{p⋆} / ‖∇u‖_p` against `S_g = AT(N,p) AVR^{-1/N}`.
pub fn sobolev_quotient(space: &ModelSpace, u: &RadialFunction, p: f64) -> Result<QuotientReport> {
    sobolev_quotient_named(space, u, p, "u")
}

fn sobolev_quotient_named(space: &ModelSpace, u: &RadialFunction, p: f64, name: &str) -> Result<QuotientReport> {
    let params = SobolevParams::sobolev(space.dimension(), p)?;
    let num = lq_norm(space, u, params.p_star())?;
    let den = grad_lp_norm(space, u, p)?;
    Ok(QuotientReport::new(
        "sobolev",
        space,
        name,
        (params.n(), p, params.alpha()),
        None,
        num,
        num / den,
        sobolev_constant(&params, space.avr())?,
        Bound::Upper,
    ))
}

fn check_dimension(space: &ModelSpace, params: &SobolevParams) -> Result<()> {
    if (space.dimension() - params.n()).abs() > 1e-12 * params.n() {
        return domain(format!(
            "parameter dimension n={} does not match the space dimension N={}",
            params.n(),
            space.dimension()
        ));
    }
    Ok(())
}

/// `‖u‖_{αp} / (‖∇u‖_p^θ ‖u‖_{α(p-1)+1}^{1-θ})` against `K_g = G AVR^{-θ/N}`.
pub fn gn_quotient(space: &ModelSpace, u: &RadialFunction, params: &SobolevParams) -> Result<QuotientReport> {
    gn_quotient_named(space, u, params, "u")
}

fn gn_quotient_named(
    space: &ModelSpace,
    u: &RadialFunction,
    params: &SobolevParams,
    name: &str,
) -> Result<QuotientReport> {
    check_dimension(space, params)?;
    let (p, a) = (params.p(), params.alpha());
    let theta = gn_theta(params)?;
    let num = lq_norm(space, u, a * p)?;
    let grad = grad_lp_norm(space, u, p)?;
    let low = if theta < 1.0 {
        lq_norm(space, u, a * (p - 1.0) + 1.0)?
    } else {
        1.0
    };
    let quotient = num / (grad.powf(theta) * low.powf(1.0 - theta));
    Ok(QuotientReport::new(
        "gagliardo_nirenberg",
        space,
        name,
        (params.n(), p, a),
        None,
        num,
        quotient,
        gn_sharp_constant(params, space.avr())?,
        Bound::Upper,
    ))
}

/// Leading-order integrals of the extremal beyond the cut radius, on `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalTails {
    /// `∫_{|x|>R} |∇h|^p`.
    pub grad: f64,
    /// `∫_{|x|>R} h^{αp}`.
    pub upper: f64,
    /// `∫_{|x|>R} h^{α(p-1)+1}`.
    pub lower: f64,
}

/// Tails from `h ~ r^{-γ}`, `γ = p'/(α-1)`, which is exact up to a relative
/// `O(λ R^{-p'})` correction.
pub fn extremal_tails(params: &SobolevParams, cut: f64) -> Result<ExtremalTails> {
    let (n, p, a) = (params.n(), params.p(), params.alpha());
    let gamma = params.p_prime() / (a - 1.0);
    let area = n * omega_unchecked(n);
    let power_tail = |decay: f64| -> Result<f64> {
        if decay <= n {
            return domain(format!("extremal power r^-{decay} is not integrable in dimension {n}"));
        }
        Ok(area * cut.powf(n - decay) / (decay - n))
    };
    Ok(ExtremalTails {
        grad: gamma.powf(p) * power_tail(p * (gamma + 1.0))?,
        upper: power_tail(a * p * gamma)?,
        lower: power_tail((a * (p - 1.0) + 1.0) * gamma)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalCheck {
    pub lambda: f64,
    /// Actual cut radius `r1 · λ^{1/p'}`.
    pub cut: f64,
    /// Quotient of the extremal restricted to the ball.
    pub truncated: f64,
    /// Quotient with the analytic tails added back.
    pub corrected: f64,
    /// `G_{α,p,n}`.
    pub constant: f64,
    pub relative_error: f64,
    pub tails: ExtremalTails,
}

/// Gagliardo–Nirenberg quotient of `h^λ` on `R^n`, hard-cut at `r1 λ^{1/p'}`.
/// Cutting at a λ-dilated radius keeps the family exactly self-similar.
/// At the Sobolev endpoint the quotient is `‖h‖_{p⋆}/‖∇h‖_p`.
pub fn extremal_check(params: &SobolevParams, lambda: f64, r1: f64) -> Result<ExtremalCheck> {
    let (n, p, a) = (params.n(), params.p(), params.alpha());
    let cut = r1 * lambda.powf(1.0 / params.p_prime());
    let h = RadialFunction::extremal(a, p, lambda, cut)?;
    let space = ModelSpace::euclidean(n)?;
    let theta = gn_theta(params)?;
    let tails = extremal_tails(params, cut)?;
    let q_up = a * p;
    let q_low = a * (p - 1.0) + 1.0;
    let up = lq_integral_cavalieri(&space, &h, q_up)?;
    let grad = grad_lp_integral(&space, &h, p)?;
    let low = if theta < 1.0 {
        lq_integral_cavalieri(&space, &h, q_low)?
    } else {
        1.0
    };
    // Integrals over the ball; the tails supply the exterior.
    let quotient = |up: f64, grad: f64, low: f64| {
        up.powf(1.0 / q_up) / (grad.powf(theta / p) * low.powf((1.0 - theta) / q_low))
    };
    let truncated = quotient(up, grad, low);
    let corrected = if theta < 1.0 {
        quotient(up + tails.upper, grad + tails.grad, low + tails.lower)
    } else {
        quotient(up + tails.upper, grad + tails.grad, 1.0)
    };
    let constant = gn_constant(params)?;
    Ok(ExtremalCheck {
        lambda,
        cut,
        truncated,
        corrected,
        constant,
        relative_error: ((corrected - constant) / constant).abs(),
        tails,
    })
}

/// Named test function.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteFunction {
    pub name: String,
    pub function: RadialFunction,
}

/// Curated Lipschitz test functions: tents, plateaus with linear edges,
/// Gaussians, polynomial bumps, truncated extremals for `(α, p)`, a Bessel
/// mode for dimension `dim`, and a sampled profile.
pub fn function_suite(dim: f64, alpha: f64, p: f64) -> Result<Vec<SuiteFunction>> {
    let mut out = Vec::new();
    let mut push = |name: String, f: Result<RadialFunction>| -> Result<()> {
        out.push(SuiteFunction { name, function: f? });
        Ok(())
    };
    push("tent(R=1)".into(), RadialFunction::tent(1.0, 1.0))?;
    push("tent(R=4)".into(), RadialFunction::tent(1.0, 4.0))?;
    push("plateau(0.5;1.5)".into(), RadialFunction::trapezoid(1.0, 0.5, 1.5))?;
    push("plateau(2;3)".into(), RadialFunction::trapezoid(1.0, 2.0, 3.0))?;
    push("gaussian(w=0.7)".into(), RadialFunction::gaussian(1.0, 0.7, 5.0))?;
    push("gaussian(w=2)".into(), RadialFunction::gaussian(1.0, 2.0, 12.0))?;
    push("bump(R=2;k=2)".into(), RadialFunction::bump(1.0, 2.0, 2.0))?;
    push("bump(R=1;k=4)".into(), RadialFunction::bump(1.0, 1.0, 4.0))?;
    push(
        format!("extremal(alpha={alpha};lambda=1)"),
        RadialFunction::extremal_shifted(alpha, p, 1.0, 40.0),
    )?;
    push(
        format!("extremal(alpha={alpha};lambda=0.5)"),
        RadialFunction::extremal_shifted(alpha, p, 0.5, 20.0),
    )?;
    if dim >= 2.0 {
        push("bessel_mode(R=2)".into(), RadialFunction::bessel_mode(dim / 2.0 - 1.0, 2.0))?;
    }
    push(
        "sampled".into(),
        RadialFunction::sampled(vec![0.0, 0.5, 1.0, 2.0, 3.5], vec![2.0, 1.8, 1.0, 0.3, 0.0]),
    )?;
    Ok(out)
}

fn first_error<T>(rows: Vec<Result<T>>) -> Result<Vec<T>> {
    rows.into_iter().collect()
}

/// Sobolev quotients of [`function_suite`] on one space, in suite order.
pub fn sobolev_suite(space: &ModelSpace, p: f64) -> Result<Vec<QuotientReport>> {
    let params = SobolevParams::sobolev(space.dimension(), p)?;
    let suite = function_suite(space.dimension(), params.alpha(), p)?;
    first_error(
        suite
            .par_iter()
            .map(|f| sobolev_quotient_named(space, &f.function, p, &f.name))
            .collect(),
    )
}

/// Gagliardo–Nirenberg quotients of [`function_suite`] on one space.
pub fn gn_suite(space: &ModelSpace, params: &SobolevParams) -> Result<Vec<QuotientReport>> {
    let suite = function_suite(space.dimension(), params.alpha(), params.p())?;
    first_error(
        suite
            .par_iter()
            .map(|f| gn_quotient_named(space, &f.function, params, &f.name))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyaSzegoRow {
    pub space: String,
    pub function: String,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// Pólya–Szegő ratios of [`function_suite`] on one space.
pub fn polya_szego_suite(space: &ModelSpace, p: f64) -> Result<Vec<PolyaSzegoRow>> {
    let suite = function_suite(space.dimension(), 2.0, p)?;
    first_error(
        suite
            .par_iter()
            .map(|f| {
                let ps = crate::rearrange::polya_szego_check(space, &f.function, p)?;
                Ok(PolyaSzegoRow {
                    space: space.label(),
                    function: f.name.clone(),
                    p,
                    lhs: ps.lhs,
                    rhs: ps.rhs,
                    ratio: ps.ratio,
                    holds: ps.holds,
                })
            })
            .collect(),
    )
}

/// `λ₁(B(R)) Vol(B(R))^{2/N}` against `Λ_g`.
pub fn fk_check(space: &ModelSpace, radius: f64) -> Result<QuotientReport> {
    fk_check_with(space, radius, &Precision::default()).map(|(rep, _)| rep)
}

/// [`fk_check`] that also returns the eigen solve.
pub fn fk_check_with(space: &ModelSpace, radius: f64, precision: &Precision) -> Result<(QuotientReport, EigenResult)> {
    let eig = fk_eigenvalue(space, radius, precision)?;
    let nf = space.dimension();
    let lhs = eig.lambda_1 * space.vol_ball(radius)?.powf(2.0 / nf);
    let rep = QuotientReport::new(
        "faber_krahn",
        space,
        "first_eigenfunction",
        (nf, 2.0, f64::NAN),
        Some(radius),
        lhs,
        lhs,
        fk_constant(nf, space.avr())?,
        Bound::Lower,
    );
    Ok((rep, eig))
}

/// `∫|∇u|² / ∫u²`.
pub fn rayleigh_quotient(space: &ModelSpace, u: &RadialFunction) -> Result<f64> {
    Ok(grad_lp_integral(space, u, 2.0)? / lq_integral_direct(space, u, 2.0)?)
}

/// CSV with header
/// `inequality,space,function,n,p,alpha,R,lhs,rhs_constant,quotient,margin,holds`.
pub fn reports_to_csv(reports: &[QuotientReport]) -> String {
    let mut out = String::from("inequality,space,function,n,p,alpha,R,lhs,rhs_constant,quotient,margin,holds\n");
    for r in reports {
        let radius = r.radius.map(|x| x.to_string()).unwrap_or_default();
        let alpha = if r.alpha.is_nan() { String::new() } else { r.alpha.to_string() };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.inequality,
            r.space,
            r.function,
            r.n,
            r.p,
            alpha,
            radius,
            r.lhs,
            r.rhs_constant,
            r.quotient,
            r.margin,
            r.holds
        );
    }
    out
}
