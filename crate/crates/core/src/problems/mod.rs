//! Problem encoders and the exhaustive ground-state oracle.

mod bitmap;
mod coloring;
mod oracle;

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{CouplingGraph, SpinArray};

pub use bitmap::{digit_glyph, digit_instance, Bitmap, DigitInstance, GLYPH_SIZE};
pub use coloring::{
    coloring_decode, coloring_encode, conflicting_edges, demo_instances, ColoringInstance, ColoringSpec, Decoded,
    DEFAULT_COLORING_LIMIT,
};
pub use oracle::{brute_force, GroundStates, DEFAULT_ORACLE_LIMIT, MAX_KEPT_STATES};

/// Undirected graph with integer edge weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    /// `(u, v, w)` with `u < v`, sorted, no repeated pair.
    edges: Vec<(usize, usize, i64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, i64)>) -> Result<Self> {
        let mut out: Vec<(usize, usize, i64)> = Vec::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::invalid("edge", format!("self-loop on vertex {u}")));
            }
            if u.max(v) >= n {
                return Err(Error::invalid("edge", format!("edge {u}-{v} outside {n} vertices")));
            }
            out.push((u.min(v), u.max(v), w));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::invalid("edge", format!("repeated edge {}-{}", w[0].0, w[0].1)));
        }
        Ok(Self { n, edges: out })
    }

    /// Erdős–Rényi graph with weights drawn uniformly from `weights`.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        edge_prob: f64,
        weights: std::ops::RangeInclusive<i64>,
        rng: &mut R,
    ) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < edge_prob {
                    edges.push((u, v, rng.random_range(weights.clone())));
                }
            }
        }
        Self { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    /// Edge list with `u v w` per line. An optional first line holding a
    /// single integer fixes the vertex count; otherwise it is one more than
    /// the largest vertex index.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        let mut first = true;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let int = |s: &str| -> Result<i64> {
                s.parse().map_err(|_| Error::parse(origin, k + 1, format!("not an integer: `{s}`")))
            };
            let idx = |s: &str| -> Result<usize> {
                s.parse().map_err(|_| Error::parse(origin, k + 1, format!("not a vertex index: `{s}`")))
            };
            match f.as_slice() {
                [count] if first => n = Some(idx(count)?),
                [u, v, w] => edges.push((idx(u)?, idx(v)?, int(w)?, k + 1)),
                _ => return Err(Error::parse(origin, k + 1, "expected `u v w`")),
            }
            first = false;
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0));
        let mut seen = std::collections::HashSet::new();
        for &(u, v, _, line) in &edges {
            if u == v || u.max(v) >= n || !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::parse(origin, line, format!("bad or repeated edge {u} {v}")));
            }
        }
        Self::new(n, edges.into_iter().map(|(u, v, w, _)| (u, v, w)))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v, w) in &self.edges {
            let _ = writeln!(out, "{u} {v} {w}");
        }
        out
    }
}

/// J_uv = −w_uv, h = 0, so H = Σw − 2·cut.
pub fn maxcut_encode(g: &WeightedGraph) -> CouplingGraph {
    let mut c = CouplingGraph::new(g.n);
    for &(u, v, w) in &g.edges {
        c.add_coupling(u, v, -w).expect("edges validated on construction");
    }
    c
}

/// Σ_edges w_uv·(1 − s_u s_v)/2.
pub fn cut_value(s: &SpinArray, g: &WeightedGraph) -> Result<i64> {
    if s.len() != g.n {
        return Err(Error::LengthMismatch {
            expected: g.n,
            actual: s.len(),
        });
    }
    Ok(g.edges.iter().filter(|e| s.get(e.0) != s.get(e.1)).map(|e| e.2).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::hamiltonian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge() {
        let g = WeightedGraph::new(2, [(0, 1, 1)]).unwrap();
        let s = SpinArray::new(vec![1, -1]).unwrap();
        assert_eq!(cut_value(&s, &g).unwrap(), 1);
        assert_eq!(cut_value(&SpinArray::uniform(2, 1), &g).unwrap(), 0);
    }

    #[test]
    fn energy_cut_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = WeightedGraph::random(9, 0.5, -2..=3, &mut rng);
            let c = maxcut_encode(&g);
            let s = SpinArray::random(9, &mut rng);
            let h = hamiltonian(&s, &c).unwrap();
            assert_eq!(h, g.total_weight() - 2 * cut_value(&s, &g).unwrap());
        }
    }

    #[test]
    fn rejects_loops_and_repeats() {
        assert!(WeightedGraph::new(3, [(1, 1, 1)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 1, 1), (1, 0, 2)]).is_err());
        assert!(WeightedGraph::new(2, [(0, 2, 1)]).is_err());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let g = WeightedGraph::new(5, [(0, 1, 2), (3, 1, -1)]).unwrap();
        assert_eq!(WeightedGraph::parse(&g.to_text(), "g").unwrap(), g);
        let inferred = WeightedGraph::parse("0 1 1\n1 2 1\n", "g").unwrap();
        assert_eq!(inferred.vertex_count(), 3);
        let err = WeightedGraph::parse("0 1 1\n1 2 x\n", "g").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = WeightedGraph::parse("0 1 1\n1 0 1\n", "g").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
