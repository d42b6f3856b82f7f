use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Shortest-path relaxations must win by more than this many ulps, so a
/// metric that already satisfies the triangle inequality reloads bit for bit.
const RELAX_ULPS: f64 = 8.0;

/// Finite metric measure space `(M, d, m)` on points `0..len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricMeasureSpace {
    len: usize,
    /// Row-major `len × len` distance matrix.
    dist: Vec<f64>,
    weights: Vec<f64>,
}

impl FiniteMetricMeasureSpace {
    /// Validates symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality (relative slack 1e-12 of the diameter).
    pub fn new(dist: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let len = dist.len();
        if len == 0 {
            return domain("a metric space needs at least one point");
        }
        if dist.iter().any(|row| row.len() != len) {
            return domain("distance matrix must be square");
        }
        if weights.len() != len || weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return domain("need one positive finite weight per point");
        }
        let flat: Vec<f64> = dist.into_iter().flatten().collect();
        let space = Self {
            len,
            dist: flat,
            weights,
        };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len;
        for i in 0..n {
            if self.d(i, i) != 0.0 {
                return Err(Error::Invariant(format!("d({i},{i}) = {} is not zero", self.d(i, i))));
            }
            for j in 0..n {
                let v = self.d(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Invariant(format!("d({i},{j}) = {v} is not a finite nonnegative number")));
                }
                if v != self.d(j, i) {
                    return Err(Error::Invariant(format!("d({i},{j}) != d({j},{i})")));
                }
                if i != j && v == 0.0 {
                    return Err(Error::Invariant(format!("distinct points {i} and {j} at distance zero")));
                }
            }
        }
        let slack = 1e-12 * self.diameter();
        let bad = (0..n).into_par_iter().find_map_any(|i| {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, k) > self.d(i, j) + self.d(j, k) + slack {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        if let Some((i, j, k)) = bad {
            return Err(Error::Invariant(format!(
                "triangle inequality fails: d({i},{k}) = {} > d({i},{j}) + d({j},{k}) = {}",
                self.d(i, k),
                self.d(i, j) + self.d(j, k)
            )));
        }
        Ok(())
    }

    /// Shortest-path metric of a weighted undirected graph, unit point weights.
    pub fn from_edges(len: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if len == 0 {
            return domain("a graph needs at least one node");
        }
        let mut d = vec![f64::INFINITY; len * len];
        for i in 0..len {
            d[i * len + i] = 0.0;
        }
        for &(u, v, w) in edges {
            if u >= len || v >= len {
                return domain(format!("edge ({u},{v}) references a node outside 0..{len}"));
            }
            if !(w > 0.0 && w.is_finite()) {
                return domain(format!("edge ({u},{v}) has non-positive weight {w}"));
            }
            if u != v {
                d[u * len + v] = d[u * len + v].min(w);
                d[v * len + u] = d[v * len + u].min(w);
            }
        }
        for k in 0..len {
            for i in 0..len {
                let dik = d[i * len + k];
                if dik.is_infinite() {
                    continue;
                }
                for j in 0..len {
                    let via = dik + d[k * len + j];
                    if via < d[i * len + j] * (1.0 - RELAX_ULPS * f64::EPSILON) {
                        d[i * len + j] = via;
                    }
                }
            }
        }
        if d.iter().any(|x| x.is_infinite()) {
            return domain("graph is disconnected; shortest-path distances would be infinite");
        }
        let space = Self {
            len,
            dist: d,
            weights: vec![1.0; len],
        };
        space.validate()?;
        Ok(space)
    }

    /// Path `0 - 1 - ... - (len-1)` with unit edges.
    pub fn path_graph(len: usize) -> Result<Self> {
        let edges: Vec<_> = (1..len).map(|i| (i - 1, i, 1.0)).collect();
        Self::from_edges(len, &edges)
    }

    /// `rows × cols` grid graph with unit edges; node `(i, j)` is `i * cols + j`.
    pub fn grid_graph(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                let id = i * cols + j;
                if j + 1 < cols {
                    edges.push((id, id + 1, 1.0));
                }
                if i + 1 < rows {
                    edges.push((id, id + cols, 1.0));
                }
            }
        }
        Self::from_edges(rows * cols, &edges)
    }

    /// Erdős–Rényi graph `G(len, edge_prob)` with weights uniform in `[1, 2]`,
    /// plus a random spanning tree so the shortest-path metric is finite.
    pub fn random_graph(seed: u64, len: usize, edge_prob: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&edge_prob) {
            return domain(format!("edge probability must lie in [0, 1], got {edge_prob}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng);
        let mut edges = Vec::new();
        for i in 1..len {
            let j = rng.gen_range(0..i);
            edges.push((order[i], order[j], rng.gen_range(1.0..=2.0)));
        }
        for u in 0..len {
            for v in u + 1..len {
                if rng.gen_bool(edge_prob) {
                    edges.push((u, v, rng.gen_range(1.0..=2.0)));
                }
            }
        }
        Self::from_edges(len, &edges)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `m(A) = Σ_{x∈A} w(x)`.
    pub fn measure(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// `max_{x,y∈A} d(x, y)`.
    pub fn set_diameter(&self, set: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for &x in set {
            for &y in set {
                best = best.max(self.d(x, y));
            }
        }
        best
    }

    /// Smallest nonzero distance.
    pub fn min_distance(&self) -> f64 {
        self.dist.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min)
    }

    /// True when every distance is an integer (graph metrics with unit edges).
    pub fn is_integral(&self) -> bool {
        self.dist.iter().all(|x| x.fract() == 0.0)
    }

    /// Interpolant slack suited to the metric: zero for integral metrics,
    /// `1e-9 · diameter` otherwise.
    pub fn default_slack(&self) -> f64 {
        if self.is_integral() {
            0.0
        } else {
            1e-9 * self.diameter()
        }
    }

    /// Complete edge list `u,v,w` (all pairs `u < v`), which reloads to the
    /// same metric through [`Self::from_edge_csv`].
    pub fn to_edge_csv(&self) -> String {
        let mut out = String::from("u,v,w\n");
        for u in 0..self.len {
            for v in u + 1..self.len {
                let _ = writeln!(out, "{u},{v},{}", self.d(u, v));
            }
        }
        out
    }

    /// Parse `u,v,w` rows (header optional); the node count is `max id + 1`.
    pub fn from_edge_csv(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut len = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed = (cols.len() == 3)
                .then(|| {
                    Some((
                        cols[0].parse::<usize>().ok()?,
                        cols[1].parse::<usize>().ok()?,
                        cols[2].parse::<f64>().ok()?,
                    ))
                })
                .flatten();
            match parsed {
                Some((u, v, w)) => {
                    len = len.max(u + 1).max(v + 1);
                    edges.push((u, v, w));
                }
                None if lineno == 0 => continue,
                None => return Err(Error::Parse(format!("line {}: expected u,v,w", lineno + 1))),
            }
        }
        if len == 0 {
            return Err(Error::Parse("edge list is empty".into()));
        }
        Self::from_edges(len, &edges)
    }
}
