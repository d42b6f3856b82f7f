use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Largest lattice `(m+1)^n` and pair count accepted by the brute force.
const MAX_SITES: usize = 50_000_000;
const MAX_PAIRS: u128 = 4_000_000_000;
/// Per-dimension constant of the `deficit >= -C h` contract for sets at least
/// `den(s)` sites wide in every direction: sampling moves each side of `A` and
/// `B` by under `h`, and the interpolant offset `(1-s)a + s b` need not be a
/// lattice site, which costs up to one more `h` on the side of `Z`.
pub const BM_CONTRACT_CONSTANT: f64 = 2.0;

/// Interpolation parameter `s = num/den` in lowest terms, kept rational so
/// lattice interpolants `((den-num) x + num y)/den` are decided exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: u32,
    pub den: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Fraction {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num > den {
            return domain(format!("s = {num}/{den} must lie in [0, 1]"));
        }
        let g = gcd(num, den).max(1);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// Closest fraction with denominator at most 4096; errors unless it
    /// reproduces `s` to 1e-12.
    pub fn from_f64(s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return domain(format!("s must lie in [0, 1], got {s}"));
        }
        // Continued-fraction convergents.
        let (mut h0, mut h1, mut k0, mut k1) = (0u64, 1u64, 1u64, 0u64);
        let mut x = s;
        for _ in 0..64 {
            let a = x.floor();
            let (h2, k2) = (a as u64 * h1 + h0, a as u64 * k1 + k0);
            if k2 > 4096 {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            let frac = x - a;
            if (h1 as f64 / k1 as f64 - s).abs() <= 1e-12 || frac < 1e-15 {
                break;
            }
            x = 1.0 / frac;
        }
        if k1 == 0 || (h1 as f64 / k1 as f64 - s).abs() > 1e-12 {
            return domain(format!("s = {s} has no fraction with denominator <= 4096"));
        }
        Self::new(h1 as u32, k1 as u32)
    }

    pub fn value(&self) -> f64 {
        f64::from(self.num) / f64::from(self.den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `num/den` or a decimal.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot read {text:?} as a fraction"));
        match text.split_once('/') {
            Some((a, b)) => Self::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Self::from_f64(text.trim().parse().map_err(|_| bad())?),
        }
    }
}

/// Subset of `[0, 1]^n`, sampled on the lattice `hℤ^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LatticeRegion {
    /// Closed axis-aligned box.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Closed Euclidean ball.
    Ball { center: Vec<f64>, radius: f64 },
}

impl LatticeRegion {
    pub fn cube(lo: f64, hi: f64, n: usize) -> Self {
        Self::Box {
            lo: vec![lo; n],
            hi: vec![hi; n],
        }
    }

    fn dim(&self) -> usize {
        match self {
            Self::Box { lo, .. } => lo.len(),
            Self::Ball { center, .. } => center.len(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let ok = match self {
            Self::Box { lo, hi } => lo.len() == n && hi.len() == n && lo.iter().zip(hi).all(|(a, b)| a <= b),
            Self::Ball { center, radius } => center.len() == n && *radius >= 0.0,
        };
        if !ok || self.dim() != n {
            return domain(format!("region {self:?} is not a valid subset of R^{n}"));
        }
        Ok(())
    }

    fn contains(&self, x: &[f64]) -> bool {
        const EPS: f64 = 1e-12;
        match self {
            Self::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| *v >= a - EPS && *v <= b + EPS),
            Self::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b).powi(2)).sum();
                d2.sqrt() <= radius + EPS
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BmReport {
    pub n: usize,
    pub cells: usize,
    /// Lattice spacing `h = 1/cells`.
    pub h: f64,
    pub s: Fraction,
    /// Exponent `N` in `m(Z)^{1/N} >= (1-s) m(A)^{1/N} + s m(B)^{1/N}`.
    pub big_n: f64,
    pub measure_a: f64,
    pub measure_b: f64,
    pub measure_z: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`; discretization makes small negative values possible.
    pub deficit: f64,
    /// `deficit / h`.
    pub deficit_over_h: f64,
    /// `C` in the discretization contract `deficit >= -C h`.
    pub contract_constant: f64,
    pub within_contract: bool,
}

fn lattice_points(region: &LatticeRegion, n: usize, cells: usize) -> Vec<i64> {
    let side = cells + 1;
    let total = side.pow(n as u32);
    let h = 1.0 / cells as f64;
    let mut out = Vec::new();
    let mut x = vec![0.0; n];
    let mut idx = vec![0i64; n];
    for flat in 0..total {
        let mut rem = flat;
        for k in 0..n {
            idx[k] = (rem % side) as i64;
            x[k] = idx[k] as f64 * h;
            rem /= side;
        }
        if region.contains(&x) {
            out.extend_from_slice(&idx);
        }
    }
    out
}

/// Both sides of the Brunn–Minkowski inequality for lattice samples of `A`
/// and `B` in `[0,1]^n` with spacing `1/cells`, counting measure `h^n` per
/// site, and `Z_s(A,B) = {((1-s)x + s y) : x∈A, y∈B} ∩ hℤ^n` computed exactly.
pub fn brunn_minkowski_report(
    n: usize,
    cells: usize,
    a: &LatticeRegion,
    b: &LatticeRegion,
    s: Fraction,
    big_n: f64,
) -> Result<BmReport> {
    if n == 0 || cells == 0 {
        return domain("lattice needs n >= 1 and at least one cell");
    }
    if !(big_n >= n as f64 && big_n.is_finite()) {
        return domain(format!("exponent N must be >= n = {n}, got {big_n}"));
    }
    a.validate(n)?;
    b.validate(n)?;
    let side = cells + 1;
    let sites = side
        .checked_pow(n as u32)
        .filter(|&t| t <= MAX_SITES)
        .ok_or_else(|| Error::Domain(format!("lattice with {side}^{n} sites is too large")))?;
    let pa = lattice_points(a, n, cells);
    let pb = lattice_points(b, n, cells);
    let (na, nb) = (pa.len() / n, pb.len() / n);
    if (na as u128) * (nb as u128) > MAX_PAIRS {
        return domain(format!("{na} x {nb} lattice pairs exceed the brute-force budget"));
    }
    let words = sites.div_ceil(64);
    let (wx, wy, den) = (
        i64::from(s.den - s.num),
        i64::from(s.num),
        i64::from(s.den),
    );
    let hits = pa
        .par_chunks(n)
        .fold(
            || vec![0u64; words],
            |mut bits, x| {
                'pairs: for y in pb.chunks(n) {
                    let mut flat = 0usize;
                    let mut stride = 1usize;
                    for k in 0..n {
                        let v = wx * x[k] + wy * y[k];
                        if v % den != 0 {
                            continue 'pairs;
                        }
                        flat += (v / den) as usize * stride;
                        stride *= side;
                    }
                    bits[flat / 64] |= 1 << (flat % 64);
                }
                bits
            },
        )
        .reduce(
            || vec![0u64; words],
            |mut acc, other| {
                for (w, o) in acc.iter_mut().zip(other) {
                    *w |= o;
                }
                acc
            },
        );
    let nz: usize = hits.iter().map(|w| w.count_ones() as usize).sum();
    let h = 1.0 / cells as f64;
    let cell = h.powi(n as i32);
    let (ma, mb, mz) = (na as f64 * cell, nb as f64 * cell, nz as f64 * cell);
    let sv = s.value();
    let lhs = mz.powf(1.0 / big_n);
    let rhs = (1.0 - sv) * ma.powf(1.0 / big_n) + sv * mb.powf(1.0 / big_n);
    Ok(BmReport {
        n,
        cells,
        h,
        s,
        big_n,
        measure_a: ma,
        measure_b: mb,
        measure_z: mz,
        lhs,
        rhs,
        deficit: lhs - rhs,
        deficit_over_h: (lhs - rhs) / h,
        contract_constant: BM_CONTRACT_CONSTANT * n as f64,
        within_contract: lhs - rhs >= -BM_CONTRACT_CONSTANT * n as f64 * h,
    })
}
