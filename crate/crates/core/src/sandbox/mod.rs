//! Brute-force laboratory for the metric facts behind the isoperimetric
//! inequality: `s`-interpolant sets, ε-neighborhoods, the inclusion
//! `Z_s(Ω, B_{x₀}(R)) ⊆ Ω_{s(d₀+R)}`, and a lattice Brunn–Minkowski report.

mod lattice;
mod metric;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use lattice::{brunn_minkowski_report, BmReport, Fraction, LatticeRegion, BM_CONTRACT_CONSTANT};
pub use metric::FiniteMetricMeasureSpace;

use crate::error::{domain, Result};

/// Sets `A`, `B` and the interpolation parameter `s` for [`interpolant_set`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolantQuery {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub s: f64,
    /// Tolerance on both defining distance equalities.
    pub slack: f64,
}

impl InterpolantQuery {
    pub fn new(a: Vec<usize>, b: Vec<usize>, s: f64, slack: f64) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return domain("interpolant sets A and B must be nonempty");
        }
        if !(0.0..=1.0).contains(&s) {
            return domain(format!("s must lie in [0, 1], got {s}"));
        }
        if !(slack >= 0.0 && slack.is_finite()) {
            return domain(format!("slack must be finite and nonnegative, got {slack}"));
        }
        Ok(Self { a, b, s, slack })
    }
}

fn check_points(space: &FiniteMetricMeasureSpace, set: &[usize], name: &str) -> Result<()> {
    if let Some(&bad) = set.iter().find(|&&i| i >= space.len()) {
        return domain(format!("{name} contains point {bad} outside 0..{}", space.len()));
    }
    Ok(())
}

fn is_interpolant(space: &FiniteMetricMeasureSpace, q: &InterpolantQuery, z: usize) -> bool {
    q.a.iter().any(|&x| {
        q.b.iter().any(|&y| {
            let dxy = space.d(x, y);
            (space.d(x, z) - q.s * dxy).abs() <= q.slack && (space.d(z, y) - (1.0 - q.s) * dxy).abs() <= q.slack
        })
    })
}

/// `Z_s(A, B) = {z : ∃x∈A, y∈B with d(x,z) = s d(x,y), d(z,y) = (1-s) d(x,y)}`,
/// both equalities up to `slack`; sorted.
pub fn interpolant_set(space: &FiniteMetricMeasureSpace, query: &InterpolantQuery) -> Result<Vec<usize>> {
    check_points(space, &query.a, "A")?;
    check_points(space, &query.b, "B")?;
    Ok((0..space.len())
        .into_par_iter()
        .filter(|&z| is_interpolant(space, query, z))
        .collect())
}

/// `A_ε = {x : ∃y∈A, d(x,y) < ε} ∪ A`; sorted.
pub fn eps_neighborhood(space: &FiniteMetricMeasureSpace, a: &[usize], eps: f64) -> Result<Vec<usize>> {
    check_points(space, a, "A")?;
    if eps.is_nan() {
        return domain("eps must be a number");
    }
    let mut member = vec![false; space.len()];
    for &x in a {
        member[x] = true;
    }
    Ok((0..space.len())
        .filter(|&x| member[x] || a.iter().any(|&y| space.d(x, y) < eps))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZInclusion {
    pub pass: bool,
    /// A point of `Z_s` outside the neighborhood, when the inclusion fails.
    pub witness: Option<usize>,
    /// `diam(Ω)`.
    pub d0: f64,
    /// Neighborhood radius `s(d₀+R) + neighborhood_slack`.
    pub radius: f64,
    /// Open ball `{y : d(x₀, y) < R}`.
    pub ball: Vec<usize>,
    pub interpolants: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

/// Checks `Z_s(Ω, B_{x₀}(R)) ⊆ Ω_{s(d₀+R)+slack}` with interpolant slack `slack`.
/// Since `d(x,z) <= s d(x,y) + slack < s(d₀+R) + slack`, this never fails.
pub fn z_inclusion_check(
    space: &FiniteMetricMeasureSpace,
    omega: &[usize],
    x0: usize,
    radius: f64,
    s: f64,
    slack: f64,
) -> Result<ZInclusion> {
    z_inclusion_check_with(space, omega, x0, radius, s, slack, slack)
}

/// [`z_inclusion_check`] with independent interpolant and neighborhood slacks,
/// for probing how tight the radius `s(d₀+R)` is.
pub fn z_inclusion_check_with(
    space: &FiniteMetricMeasureSpace,
    omega: &[usize],
    x0: usize,
    radius: f64,
    s: f64,
    interpolant_slack: f64,
    neighborhood_slack: f64,
) -> Result<ZInclusion> {
    check_points(space, omega, "Omega")?;
    if !omega.contains(&x0) {
        return domain(format!("x0 = {x0} must belong to Omega"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return domain(format!("R must be positive and finite, got {radius}"));
    }
    if !(neighborhood_slack >= 0.0 && neighborhood_slack.is_finite()) {
        return domain("neighborhood slack must be finite and nonnegative");
    }
    let ball: Vec<usize> = (0..space.len()).filter(|&y| space.d(x0, y) < radius).collect();
    let query = InterpolantQuery::new(omega.to_vec(), ball.clone(), s, interpolant_slack)?;
    let interpolants = interpolant_set(space, &query)?;
    let d0 = space.set_diameter(omega);
    let nbhd_radius = s * (d0 + radius) + neighborhood_slack;
    let neighborhood = eps_neighborhood(space, omega, nbhd_radius)?;
    let mut inside = vec![false; space.len()];
    for &x in &neighborhood {
        inside[x] = true;
    }
    let witness = interpolants.iter().copied().find(|&z| !inside[z]);
    Ok(ZInclusion {
        pass: witness.is_none(),
        witness,
        d0,
        radius: nbhd_radius,
        ball,
        interpolants,
        neighborhood,
    })
}

/// Interpolation parameters tried on each random instance.
pub const S_GRID: [f64; 6] = [0.0, 0.2, 0.4, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZTrial {
    pub seed: u64,
    pub nodes: usize,
    pub omega_size: usize,
    pub x0: usize,
    pub radius: f64,
    pub s: f64,
    pub interpolants: usize,
    pub pass: bool,
    pub witness: Option<usize>,
}

/// One random instance per seed: `G(n, p)` with `n ∈ [4, 60]`, a random `Ω`
/// containing `x₀`, a random radius, and every `s` in [`S_GRID`].
/// `interpolant_slack` of `None` uses the metric's default.
pub fn z_inclusion_trials(
    seeds: std::ops::Range<u64>,
    interpolant_slack: Option<f64>,
    neighborhood_slack: f64,
) -> Result<Vec<ZTrial>> {
    let per_seed: Vec<Result<Vec<ZTrial>>> = seeds
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a_0f0f_1234_abcd);
            let nodes = rng.gen_range(4..=60);
            let p = rng.gen_range(0.02..0.3);
            let space = FiniteMetricMeasureSpace::random_graph(seed, nodes, p)?;
            let x0 = rng.gen_range(0..nodes);
            let mut omega: Vec<usize> = (0..nodes).filter(|&i| i == x0 || rng.gen_bool(0.25)).collect();
            omega.sort_unstable();
            let radius = rng.gen_range(0.5..=space.diameter());
            let slack = interpolant_slack.unwrap_or_else(|| space.default_slack());
            S_GRID
                .iter()
                .map(|&s| {
                    let z = z_inclusion_check_with(&space, &omega, x0, radius, s, slack, neighborhood_slack)?;
                    Ok(ZTrial {
                        seed,
                        nodes,
                        omega_size: omega.len(),
                        x0,
                        radius,
                        s,
                        interpolants: z.interpolants.len(),
                        pass: z.pass,
                        witness: z.witness,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for r in per_seed {
        out.extend(r?);
    }
    Ok(out)
}
