use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{hamiltonian, CouplingGraph, SpinArray};

pub const DEFAULT_COLORING_LIMIT: usize = 4096;

/// Graph k-coloring instance for the one-hot penalty encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringSpec {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(rename = "A", default = "one")]
    pub a: i64,
}

fn one() -> i64 {
    1
}

impl ColoringSpec {
    pub fn new(n: usize, k: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let spec = Self { n, k, edges, a: 1 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 {
            return Err(Error::invalid("coloring", "n and k must be >= 1"));
        }
        if self.a < 1 {
            return Err(Error::invalid("A", "penalty weight must be >= 1"));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            if u == v || u.max(v) >= self.n {
                return Err(Error::invalid("edges", format!("bad edge {u}-{v} for n = {}", self.n)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::invalid("edges", format!("repeated edge {u}-{v}")));
            }
        }
        Ok(())
    }

    pub fn spin_count(&self) -> usize {
        self.n * self.k
    }

    /// Spin index of (vertex, color).
    pub fn index(&self, v: usize, c: usize) -> usize {
        v * self.k + c
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec: Self = serde_json::from_str(&text).map_err(|e| {
            Error::parse(path.display().to_string(), e.line(), e.to_string())
        })?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Encoded coloring: `scale·P(x) = H(s) + offset` for the binary penalty P.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoringInstance {
    pub graph: CouplingGraph,
    pub offset: i64,
    pub scale: i64,
}

impl ColoringInstance {
    /// Binary penalty of a spin state.
    pub fn penalty(&self, s: &SpinArray) -> Result<i64> {
        Ok(self.penalty_of_energy(hamiltonian(s, &self.graph)?))
    }

    pub fn penalty_of_energy(&self, h: i64) -> i64 {
        (h + self.offset) / self.scale
    }

    /// Ising energy at which the penalty is zero.
    pub fn zero_penalty_energy(&self) -> i64 {
        -self.offset
    }
}

/// P = A·Σ_v (1 − Σ_c x_vc)² + A·Σ_(u,v) Σ_c x_uc x_vc with x = (1+s)/2,
/// multiplied by 4 so every coefficient is an integer.
pub fn coloring_encode(spec: &ColoringSpec, limit: usize) -> Result<ColoringInstance> {
    spec.validate()?;
    let n = spec.spin_count();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let a = spec.a;
    // QUBO: constant + Σ lin_i x_i + Σ_{i<j} quad_ij x_i x_j
    let mut constant = 0;
    let mut lin = vec![0i64; n];
    let mut quad: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for v in 0..spec.n {
        constant += a;
        for c in 0..spec.k {
            lin[spec.index(v, c)] -= a;
            for d in c + 1..spec.k {
                *quad.entry((spec.index(v, c), spec.index(v, d))).or_default() += 2 * a;
            }
        }
    }
    for &(u, v) in &spec.edges {
        for c in 0..spec.k {
            let (i, j) = (spec.index(u, c), spec.index(v, c));
            *quad.entry((i.min(j), i.max(j))).or_default() += a;
        }
    }
    // 4·q·x_i·x_j = q(1 + s_i + s_j + s_i s_j), 4·l·x_i = 2l(1 + s_i)
    let mut graph = CouplingGraph::new(n);
    let mut field = vec![0i64; n];
    let mut offset = 4 * constant;
    for (&(i, j), &q) in &quad {
        graph.add_coupling(i, j, -q)?;
        field[i] -= q;
        field[j] -= q;
        offset += q;
    }
    for (i, &l) in lin.iter().enumerate() {
        field[i] -= 2 * l;
        offset += 2 * l;
    }
    for (i, &h) in field.iter().enumerate() {
        graph.add_field(i, h)?;
    }
    Ok(ColoringInstance {
        graph,
        offset,
        scale: 4,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decoded {
    /// Color of every vertex.
    Assignment(Vec<usize>),
    /// `(vertex, number of colors switched on)` for each vertex that is not
    /// one-hot.
    Invalid(Vec<(usize, usize)>),
}

pub fn coloring_decode(s: &SpinArray, spec: &ColoringSpec) -> Result<Decoded> {
    if s.len() != spec.spin_count() {
        return Err(Error::LengthMismatch {
            expected: spec.spin_count(),
            actual: s.len(),
        });
    }
    let mut colors = Vec::with_capacity(spec.n);
    let mut bad = Vec::new();
    for v in 0..spec.n {
        let on: Vec<usize> = (0..spec.k).filter(|&c| s.get(spec.index(v, c)) > 0).collect();
        if on.len() == 1 {
            colors.push(on[0]);
        } else {
            bad.push((v, on.len()));
        }
    }
    Ok(if bad.is_empty() {
        Decoded::Assignment(colors)
    } else {
        Decoded::Invalid(bad)
    })
}

/// Edges whose endpoints share a color.
pub fn conflicting_edges(spec: &ColoringSpec, colors: &[usize]) -> Vec<(usize, usize)> {
    spec.edges.iter().copied().filter(|&(u, v)| colors[u] == colors[v]).collect()
}

/// Named demo instances: triangle/3, square/2, wheel5/3 and the
/// uncolorable triangle/2.
pub fn demo_instances() -> Vec<(&'static str, ColoringSpec)> {
    let triangle = vec![(0, 1), (1, 2), (0, 2)];
    let square = vec![(0, 1), (1, 2), (2, 3), (0, 3)];
    // hub 0, rim 1-2-3-4
    let wheel = vec![(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (1, 4)];
    vec![
        ("triangle-k3", ColoringSpec::new(3, 3, triangle.clone()).expect("valid")),
        ("square-k2", ColoringSpec::new(4, 2, square).expect("valid")),
        ("wheel5-k3", ColoringSpec::new(5, 3, wheel).expect("valid")),
        ("triangle-k2", ColoringSpec::new(3, 2, triangle).expect("valid")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::problems::brute_force;

    fn binary_penalty(spec: &ColoringSpec, s: &SpinArray) -> i64 {
        let x = |i: usize| i64::from(s.get(i) > 0);
        let mut p = 0;
        for v in 0..spec.n {
            let sum: i64 = (0..spec.k).map(|c| x(spec.index(v, c))).sum();
            p += spec.a * (1 - sum) * (1 - sum);
        }
        for &(u, v) in &spec.edges {
            p += spec.a * (0..spec.k).map(|c| x(spec.index(u, c)) * x(spec.index(v, c))).sum::<i64>();
        }
        p
    }

    #[test]
    fn expansion_is_exact_on_every_state() {
        for (_, spec) in demo_instances().into_iter().filter(|(_, s)| s.spin_count() <= 16) {
            let inst = coloring_encode(&spec, 64).unwrap();
            let n = spec.spin_count();
            for bits in 0..1u64 << n {
                let s = SpinArray::from_bits(n, bits);
                let h = hamiltonian(&s, &inst.graph).unwrap();
                assert_eq!(h + inst.offset, 4 * binary_penalty(&spec, &s));
            }
        }
    }

    #[test]
    fn single_vertex_single_color() {
        let spec = ColoringSpec::new(1, 1, vec![]).unwrap();
        let inst = coloring_encode(&spec, 64).unwrap();
        let gs = brute_force(&inst.graph, 24, Execution::Sequential).unwrap();
        assert_eq!(gs.count, 1);
        assert_eq!(gs.states[0].as_slice(), &[1]);
        assert_eq!(inst.penalty_of_energy(gs.energy), 0);
    }

    #[test]
    fn triangle_three_colors_has_six_zero_penalty_states() {
        let spec = ColoringSpec::new(3, 3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = coloring_encode(&spec, 64).unwrap();
        let gs = brute_force(&inst.graph, 24, Execution::Sequential).unwrap();
        assert_eq!(inst.penalty_of_energy(gs.energy), 0);
        assert_eq!(gs.count, 6);
        for s in &gs.states {
            let Decoded::Assignment(c) = coloring_decode(s, &spec).unwrap() else {
                panic!("ground state not one-hot");
            };
            assert!(conflicting_edges(&spec, &c).is_empty());
        }
    }

    #[test]
    fn triangle_two_colors_is_infeasible() {
        let spec = ColoringSpec::new(3, 2, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = coloring_encode(&spec, 64).unwrap();
        let gs = brute_force(&inst.graph, 24, Execution::Sequential).unwrap();
        assert!(inst.penalty_of_energy(gs.energy) > 0);
    }

    #[test]
    fn decode_flags_bad_vertices() {
        let spec = ColoringSpec::new(3, 2, vec![]).unwrap();
        let s = SpinArray::new(vec![1, -1, -1, -1, 1, 1]).unwrap();
        assert_eq!(coloring_decode(&s, &spec).unwrap(), Decoded::Invalid(vec![(1, 0), (2, 2)]));
        let s = SpinArray::new(vec![1, -1, -1, 1, 1, -1]).unwrap();
        assert_eq!(coloring_decode(&s, &spec).unwrap(), Decoded::Assignment(vec![0, 1, 0]));
    }

    #[test]
    fn size_limit_enforced() {
        let spec = ColoringSpec::new(10, 4, vec![]).unwrap();
        assert!(matches!(coloring_encode(&spec, 39), Err(Error::TooLarge { n: 40, limit: 39 })));
    }

    #[test]
    fn json_form() {
        let spec: ColoringSpec = serde_json::from_str(r#"{"n":3,"k":3,"edges":[[0,1],[1,2]],"A":2}"#).unwrap();
        assert_eq!(spec.a, 2);
        let spec: ColoringSpec = serde_json::from_str(r#"{"n":3,"k":3,"edges":[]}"#).unwrap();
        assert_eq!(spec.a, 1);
    }
}
