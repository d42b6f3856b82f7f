use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{ModelSpace, WarpingProfile};
use crate::error::{Error, Result};

/// Flat `key=value` form of a [`ModelSpace`], e.g.
/// `variant=warped n=2 a=0.5 beta=1`.
///
/// Recognised keys: `variant`, `n`, `a`, `beta`, `m_M`, `alpha_w`, `k`.
/// Pairs may be separated by whitespace, commas or semicolons.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SpaceDescriptor {
    pub variant: String,
    pub n: Option<f64>,
    pub a: Option<f64>,
    pub beta: Option<f64>,
    pub m_m: Option<f64>,
    pub alpha_w: Option<f64>,
    pub k: Option<f64>,
}

fn require(v: Option<f64>, key: &str, variant: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Parse(format!("variant {variant} requires key {key}")))
}

fn as_count(v: f64, key: &str) -> Result<u32> {
    if v.fract() != 0.0 || !(0.0..=f64::from(u32::MAX)).contains(&v) {
        return Err(Error::Parse(format!("{key} must be a nonnegative integer, got {v}")));
    }
    Ok(v as u32)
}

impl SpaceDescriptor {
    pub(super) fn from_space(space: &ModelSpace) -> Option<Self> {
        let mut d = Self::default();
        match space {
            ModelSpace::Euclidean { n } => {
                d.variant = "euclidean".into();
                d.n = Some(*n);
            }
            ModelSpace::WarpedProduct { n, profile } => match profile {
                WarpingProfile::ExponentialTail { a, beta } => {
                    d.variant = "warped".into();
                    d.n = Some(f64::from(*n));
                    d.a = Some(*a);
                    d.beta = Some(*beta);
                }
                WarpingProfile::Sampled(_) => return None,
            },
            ModelSpace::EuclideanCone { n, link_measure } => {
                d.variant = "cone".into();
                d.n = Some(f64::from(*n));
                d.m_m = Some(*link_measure);
            }
            ModelSpace::MonomialHalfSpace { n, alpha_w, .. } => {
                d.variant = "monomial".into();
                d.n = Some(f64::from(*n));
                d.alpha_w = Some(*alpha_w);
            }
            ModelSpace::AleQuotient { n, k } => {
                d.variant = "ale".into();
                d.n = Some(f64::from(*n));
                d.k = Some(f64::from(*k));
            }
        }
        Some(d)
    }

    /// Build the space, applying the constructors' validation.
    pub fn to_space(&self) -> Result<ModelSpace> {
        let v = self.variant.as_str();
        let n = require(self.n, "n", v)?;
        match v {
            "euclidean" => ModelSpace::euclidean(n),
            "warped" => ModelSpace::warped_exponential(
                as_count(n, "n")?,
                require(self.a, "a", v)?,
                self.beta.unwrap_or(1.0),
            ),
            "cone" => ModelSpace::cone(as_count(n, "n")?, require(self.m_m, "m_M", v)?),
            "monomial" => ModelSpace::monomial(as_count(n, "n")?, require(self.alpha_w, "alpha_w", v)?),
            "ale" => ModelSpace::ale(as_count(n, "n")?, as_count(require(self.k, "k", v)?, "k")?),
            other => Err(Error::Parse(format!(
                "unknown variant {other:?}; expected euclidean, warped, cone, monomial or ale"
            ))),
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "variant={}", self.variant)?;
        let fields = [
            ("n", self.n),
            ("a", self.a),
            ("beta", self.beta),
            ("m_M", self.m_m),
            ("alpha_w", self.alpha_w),
            ("k", self.k),
        ];
        for (key, val) in fields {
            if let Some(x) = val {
                write!(f, " {key}={x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut d = Self::default();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',' || c == ';') {
            if tok.is_empty() {
                continue;
            }
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))?;
            if key == "variant" {
                d.variant = val.to_string();
                continue;
            }
            let x: f64 = val
                .parse()
                .map_err(|_| Error::Parse(format!("value for {key} is not a number: {val:?}")))?;
            let slot = match key {
                "n" => &mut d.n,
                "a" => &mut d.a,
                "beta" => &mut d.beta,
                "m_M" | "m" => &mut d.m_m,
                "alpha_w" => &mut d.alpha_w,
                "k" => &mut d.k,
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            };
            *slot = Some(x);
        }
        if d.variant.is_empty() {
            return Err(Error::Parse("descriptor is missing variant=".into()));
        }
        Ok(d)
    }
}
