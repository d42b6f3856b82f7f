//! Closed forms for the sharp constants: Aubin–Talenti, Gagliardo–Nirenberg,
//! their curved versions scaled by the asymptotic volume ratio, the
//! Faber–Krahn / Rayleigh pair and the isoperimetric constant.
//!
//! Gamma- and Beta-heavy expressions are assembled in log space.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::specfun::{bessel_first_zero, ln_beta, ln_gamma_pos, omega_unchecked};

/// Slack used when accepting values on a closed boundary (α at the Sobolev
/// endpoint, AVR equal to one) that were produced by floating-point arithmetic.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Dimension and exponents of a Sobolev / Gagliardo–Nirenberg problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevParams {
    n: f64,
    p: f64,
    alpha: f64,
}

impl SobolevParams {
    /// Validates `n > 1`, `1 < p < n` and `1 < alpha <= n/(n-p)`.
    pub fn new(n: f64, p: f64, alpha: f64) -> Result<Self> {
        if !n.is_finite() || n <= 1.0 {
            return domain(format!("n > 1 violated: n={n}"));
        }
        if !p.is_finite() || p <= 1.0 {
            return domain(format!("p > 1 violated: p={p}"));
        }
        if p >= n {
            return domain(format!("p < n violated: p={p} >= n={n}"));
        }
        let top = n / (n - p);
        if !alpha.is_finite() || alpha <= 1.0 {
            return domain(format!("alpha > 1 violated: alpha={alpha}"));
        }
        if alpha > top * (1.0 + BOUNDARY_SLACK) {
            return domain(format!("alpha <= n/(n-p) violated: alpha={alpha} > {top}"));
        }
        Ok(Self {
            n,
            p,
            alpha: alpha.min(top),
        })
    }

    /// The Sobolev endpoint `alpha = n/(n-p)`, where the GN inequality
    /// reduces to the Sobolev inequality.
    pub fn sobolev(n: f64, p: f64) -> Result<Self> {
        if p.is_finite() && n.is_finite() && p < n {
            Self::new(n, p, n / (n - p))
        } else {
            Self::new(n, p, 2.0)
        }
    }

    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Critical Sobolev exponent `np/(n-p)`.
    pub fn p_star(&self) -> f64 {
        self.n * self.p / (self.n - self.p)
    }

    /// Conjugate exponent `p/(p-1)`.
    pub fn p_prime(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn is_sobolev_endpoint(&self) -> bool {
        (self.alpha - self.n / (self.n - self.p)).abs() <= BOUNDARY_SLACK * self.alpha
    }
}

fn check_avr(avr: f64) -> Result<f64> {
    if !avr.is_finite() || avr <= 0.0 || avr > 1.0 + BOUNDARY_SLACK {
        return domain(format!("0 < avr <= 1 violated: avr={avr}"));
    }
    Ok(avr.min(1.0))
}

/// `AT(n,p)`, the best constant of the Euclidean L^p Sobolev inequality.
pub fn aubin_talenti(params: &SobolevParams) -> f64 {
    let (n, p) = (params.n, params.p);
    let ln_gamma_ratio = ln_gamma_pos(1.0 + n / 2.0) + ln_gamma_pos(n)
        - ln_gamma_pos(n / p)
        - ln_gamma_pos(1.0 + n - n / p);
    let ln_at = -0.5 * std::f64::consts::PI.ln() - n.ln() / p
        + (1.0 - 1.0 / p) * ((p - 1.0) / (n - p)).ln()
        + ln_gamma_ratio / n;
    ln_at.exp()
}

/// Interpolation exponent θ of the Gagliardo–Nirenberg inequality.
pub fn gn_theta(params: &SobolevParams) -> Result<f64> {
    let (p, a) = (params.p, params.alpha);
    let ps = params.p_star();
    let denom = a * p * (ps - a * p + a - 1.0);
    if denom <= 0.0 {
        return domain(format!("theta denominator must be positive, got {denom}"));
    }
    Ok((ps * (a - 1.0) / denom).min(1.0))
}

/// `G_{α,p,n}`, the best Euclidean Gagliardo–Nirenberg constant, attained by
/// `(λ + |x|^{p'})^{1/(1-α)}`.
pub fn gn_constant(params: &SobolevParams) -> Result<f64> {
    let (n, p, a) = (params.n, params.p, params.alpha);
    let theta = gn_theta(params)?;
    let pp = params.p_prime();
    let big_a = (a * (p - 1.0) + 1.0) / (a - 1.0);
    let first = big_a - n / pp;
    if first <= 0.0 {
        return domain(format!("beta argument must be positive, got {first}"));
    }
    let ln_b = ln_beta(first, n / pp)?;
    let ln_g = theta * ((a - 1.0) / pp).ln()
        + (theta / p + theta / n) * (pp / n).ln()
        + first.ln() / (a * p)
        + (theta / p - 1.0 / (a * p)) * big_a.ln()
        - (theta / n) * (omega_unchecked(n).ln() + ln_b);
    Ok(ln_g.exp())
}

/// `S_g = AT(n,p) · AVR^{-1/n}`.
pub fn sobolev_constant(params: &SobolevParams, avr: f64) -> Result<f64> {
    let avr = check_avr(avr)?;
    Ok(aubin_talenti(params) * avr.powf(-1.0 / params.n))
}

/// `K_g = G_{α,p,n} · AVR^{-θ/n}`.
pub fn gn_sharp_constant(params: &SobolevParams, avr: f64) -> Result<f64> {
    let avr = check_avr(avr)?;
    let theta = gn_theta(params)?;
    Ok(gn_constant(params)? * avr.powf(-theta / params.n))
}

fn check_fk_dim(n: f64) -> Result<()> {
    if !n.is_finite() || n < 2.0 {
        return domain(format!("n >= 2 violated: n={n}"));
    }
    Ok(())
}

/// `Λ_g = j²_{n/2-1} (ω_n AVR)^{2/n}`, the sharp Faber–Krahn constant.
pub fn fk_constant(n: f64, avr: f64) -> Result<f64> {
    check_fk_dim(n)?;
    let avr = check_avr(avr)?;
    let j = bessel_first_zero(n / 2.0 - 1.0)?;
    Ok(j * j * (omega_unchecked(n) * avr).powf(2.0 / n))
}

/// `R_g = 1/Λ_g`, the sharp constant of the Rayleigh-quotient form.
pub fn rayleigh_constant(n: f64, avr: f64) -> Result<f64> {
    check_fk_dim(n)?;
    let avr = check_avr(avr)?;
    let j = bessel_first_zero(n / 2.0 - 1.0)?;
    Ok((j * j).recip() * (omega_unchecked(n) * avr).powf(-2.0 / n))
}

/// Volume non-collapsing bound `AVR ≥ (AT(n,p)/C)^n` implied by a Sobolev
/// inequality with constant `c`.
pub fn noncollapse_lower_bound(params: &SobolevParams, c: f64) -> Result<f64> {
    let at = aubin_talenti(params);
    if !c.is_finite() || c < at * (1.0 - BOUNDARY_SLACK) {
        return domain(format!(
            "C >= AT(n,p) violated: C={c} < AT={at}; no space supports a smaller constant"
        ));
    }
    Ok((at / c).powf(params.n).min(1.0))
}

/// `N ω_N^{1/N} AVR^{1/N}`, the sharp isoperimetric constant; real `N > 1`.
pub fn isoperimetric_constant(n: f64, avr: f64) -> Result<f64> {
    if !n.is_finite() || n <= 1.0 {
        return domain(format!("N > 1 violated: N={n}"));
    }
    let avr = check_avr(avr)?;
    Ok(n * (omega_unchecked(n) * avr).powf(1.0 / n))
}

/// All sharp constants for one parameter set and volume ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpConstants {
    pub omega_n: f64,
    pub at: f64,
    pub theta: f64,
    pub gn: f64,
    pub sobolev: f64,
    pub gn_sharp: f64,
    pub fk: f64,
    pub rayleigh: f64,
    pub avr: f64,
}

impl SharpConstants {
    /// Requires `n >= 2` for the Faber–Krahn entries.
    pub fn compute(params: &SobolevParams, avr: f64) -> Result<Self> {
        let n = params.n;
        Ok(Self {
            omega_n: omega_unchecked(n),
            at: aubin_talenti(params),
            theta: gn_theta(params)?,
            gn: gn_constant(params)?,
            sobolev: sobolev_constant(params, avr)?,
            gn_sharp: gn_sharp_constant(params, avr)?,
            fk: fk_constant(n, avr)?,
            rayleigh: rayleigh_constant(n, avr)?,
            avr: check_avr(avr)?,
        })
    }
}
