//! The Ising machine: spins, couplings, the Hamiltonian and the
//! majority-vote read of a cell's neighbourhood.

mod schedule;
mod solver;

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::device::Spin;
use crate::error::{Error, Result};

pub use schedule::{vote_to_current, AnnealSchedule, Phase, VoteCurrentMap};
pub use solver::{
    run, run_restarts, sweep, update_spin, CurveBackend, Initial, LlgBackend, MajorityBackend, OrderPolicy,
    Periphery, RunConfig, RunRngs, RunStats, SwitchBackend, SweepStats, UpdateContext, UpdateOutcome,
};

/// Spin configuration; every entry is +1 or −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Spin>", into = "Vec<Spin>")]
pub struct SpinArray(Vec<Spin>);

impl SpinArray {
    pub fn new(spins: Vec<Spin>) -> Result<Self> {
        if let Some(i) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid("spins", format!("entry {i} is {}, not ±1", spins[i])));
        }
        Ok(Self(spins))
    }

    pub fn uniform(n: usize, value: Spin) -> Self {
        assert!(value == 1 || value == -1, "spin must be ±1");
        Self(vec![value; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect())
    }

    /// Spin `i` of the integer `bits`: bit set → +1.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self((0..n).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Spin] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Spin {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn flipped_all(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// Number of positions where `self` and `other` agree.
    pub fn agreement(&self, other: &SpinArray) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a == b).count()
    }

    /// Fraction of agreeing positions, maximised over a global flip.
    pub fn agreement_mod_flip(&self, other: &SpinArray) -> f64 {
        let same = self.agreement(other);
        same.max(self.len() - same) as f64 / self.len().max(1) as f64
    }
}

impl TryFrom<Vec<Spin>> for SpinArray {
    type Error = Error;
    fn try_from(v: Vec<Spin>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SpinArray> for Vec<Spin> {
    fn from(s: SpinArray) -> Self {
        s.0
    }
}

/// Sparse symmetric integer couplings plus integer fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CouplingGraph {
    h: Vec<i64>,
    /// `adj[i]` holds `(j, J_ij)` sorted by `j`, never with `J_ij = 0`.
    adj: Vec<Vec<(usize, i64)>>,
}

impl CouplingGraph {
    pub fn new(n: usize) -> Self {
        Self {
            h: vec![0; n],
            adj: vec![Vec::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::invalid("index", format!("spin {i} out of range for n = {}", self.len())));
        }
        Ok(())
    }

    /// Adds `w` to `J_ij` (and `J_ji`).
    pub fn add_coupling(&mut self, i: usize, j: usize, w: i64) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::invalid("coupling", format!("self-coupling on spin {i}")));
        }
        for (a, b) in [(i, j), (j, i)] {
            let row = &mut self.adj[a];
            match row.binary_search_by_key(&b, |e| e.0) {
                Ok(k) => {
                    row[k].1 += w;
                    if row[k].1 == 0 {
                        row.remove(k);
                    }
                }
                Err(k) if w != 0 => row.insert(k, (b, w)),
                Err(_) => {}
            }
        }
        Ok(())
    }

    pub fn add_field(&mut self, i: usize, w: i64) -> Result<()> {
        self.check_index(i)?;
        self.h[i] += w;
        Ok(())
    }

    pub fn coupling(&self, i: usize, j: usize) -> i64 {
        self.adj[i]
            .binary_search_by_key(&j, |e| e.0)
            .map_or(0, |k| self.adj[i][k].1)
    }

    pub fn field(&self, i: usize) -> i64 {
        self.h[i]
    }

    pub fn fields(&self) -> &[i64] {
        &self.h
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, i64)] {
        &self.adj[i]
    }

    /// Couplings with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |e| e.0 > i).map(move |&(j, w)| (i, j, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Text form: `n`, then `i j J` lines and `i h` lines. `#` starts a
    /// comment. Repeating a pair or a field is an error.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut graph: Option<Self> = None;
        let mut seen_pairs = std::collections::HashSet::new();
        let mut seen_fields = std::collections::HashSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |f: &str| -> Result<i64> {
                f.parse().map_err(|_| Error::parse(origin, line_no, format!("not an integer: `{f}`")))
            };
            let index = |f: &str| -> Result<usize> {
                f.parse().map_err(|_| Error::parse(origin, line_no, format!("not a spin index: `{f}`")))
            };
            let Some(g) = graph.as_mut() else {
                if fields.len() != 1 {
                    return Err(Error::parse(origin, line_no, "expected the spin count `n`"));
                }
                graph = Some(Self::new(index(fields[0])?));
                continue;
            };
            let wrap = |e: Error| Error::parse(origin, line_no, e.to_string());
            match fields.as_slice() {
                [i, j, w] => {
                    let (i, j) = (index(i)?, index(j)?);
                    if !seen_pairs.insert((i.min(j), i.max(j))) {
                        return Err(Error::parse(origin, line_no, format!("duplicate coupling {i} {j}")));
                    }
                    g.add_coupling(i, j, num(w)?).map_err(wrap)?;
                }
                [i, h] => {
                    let i = index(i)?;
                    if !seen_fields.insert(i) {
                        return Err(Error::parse(origin, line_no, format!("duplicate field on spin {i}")));
                    }
                    g.add_field(i, num(h)?).map_err(wrap)?;
                }
                _ => return Err(Error::parse(origin, line_no, "expected `i j J` or `i h`")),
            }
        }
        graph.ok_or_else(|| Error::parse(origin, 1, "empty file: missing spin count"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.len());
        for (i, j, w) in self.edges() {
            let _ = writeln!(out, "{i} {j} {w}");
        }
        for (i, &h) in self.h.iter().enumerate().filter(|e| *e.1 != 0) {
            let _ = writeln!(out, "{i} {h}");
        }
        out
    }
}

fn check_len(s: &SpinArray, g: &CouplingGraph) -> Result<()> {
    if s.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: g.len(),
            actual: s.len(),
        });
    }
    Ok(())
}

/// H = −Σ_{i<j} J_ij s_i s_j − Σ_i h_i s_i.
pub fn hamiltonian(s: &SpinArray, g: &CouplingGraph) -> Result<i64> {
    check_len(s, g)?;
    let v = s.as_slice();
    let pair: i64 = g.edges().map(|(i, j, w)| w * i64::from(v[i] * v[j])).sum();
    let field: i64 = g.h.iter().zip(v).map(|(&h, &si)| h * i64::from(si)).sum();
    Ok(-pair - field)
}

/// Change of H if spin `i` were flipped.
pub fn flip_delta(i: usize, s: &SpinArray, g: &CouplingGraph) -> i64 {
    let v = s.as_slice();
    let local: i64 = g.adj[i].iter().map(|&(j, w)| w * i64::from(v[j])).sum::<i64>() + g.h[i];
    2 * i64::from(v[i]) * local
}

/// Weighted neighbourhood tally for one spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Votes {
    /// Weight preferring the opposite of the spin's present state.
    pub to_flip: u64,
    pub total: u64,
}

/// Each neighbour contributes |J_ij| votes for sign(J_ij·s_j); the field
/// contributes |h_i| votes for sign(h_i).
pub fn count_votes(i: usize, s: &SpinArray, g: &CouplingGraph) -> Votes {
    let v = s.as_slice();
    let si = i64::from(v[i]);
    let mut to_flip = 0;
    let mut total = 0;
    for &(j, w) in &g.adj[i] {
        total += w.unsigned_abs();
        if w * i64::from(v[j]) * si < 0 {
            to_flip += w.unsigned_abs();
        }
    }
    let h = g.h[i];
    total += h.unsigned_abs();
    if h * si < 0 {
        to_flip += h.unsigned_abs();
    }
    Votes { to_flip, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(j: i64) -> CouplingGraph {
        let mut g = CouplingGraph::new(2);
        g.add_coupling(0, 1, j).unwrap();
        g
    }

    #[test]
    fn empty_graph_has_zero_energy() {
        let g = CouplingGraph::new(5);
        assert_eq!(hamiltonian(&SpinArray::uniform(5, 1), &g).unwrap(), 0);
    }

    #[test]
    fn sign_convention() {
        let g = pair(1);
        assert_eq!(hamiltonian(&SpinArray::new(vec![1, 1]).unwrap(), &g).unwrap(), -1);
        assert_eq!(hamiltonian(&SpinArray::new(vec![1, -1]).unwrap(), &g).unwrap(), 1);
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = pair(1);
        assert!(matches!(
            hamiltonian(&SpinArray::uniform(3, 1), &g),
            Err(Error::LengthMismatch { expected: 2, actual: 3 })
        ));
    }

    #[test]
    fn spins_must_be_pm_one() {
        assert!(SpinArray::new(vec![1, 0]).is_err());
        assert!(serde_json::from_str::<SpinArray>("[1,2]").is_err());
        let s: SpinArray = serde_json::from_str("[1,-1]").unwrap();
        assert_eq!(s.as_slice(), &[1, -1]);
    }

    #[test]
    fn couplings_stay_symmetric_and_sparse() {
        let mut g = CouplingGraph::new(3);
        g.add_coupling(0, 2, 3).unwrap();
        assert_eq!(g.coupling(2, 0), 3);
        g.add_coupling(2, 0, -3).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(g.neighbors(0).is_empty());
        assert!(g.add_coupling(1, 1, 1).is_err());
        assert!(g.add_coupling(1, 3, 1).is_err());
    }

    fn star(js: &[i64], centre: Spin, leaves: &[Spin]) -> (SpinArray, CouplingGraph) {
        let mut g = CouplingGraph::new(js.len() + 1);
        for (k, &j) in js.iter().enumerate() {
            g.add_coupling(0, k + 1, j).unwrap();
        }
        let mut v = vec![centre];
        v.extend_from_slice(leaves);
        (SpinArray::new(v).unwrap(), g)
    }

    #[test]
    fn votes_all_aligned() {
        let (s, g) = star(&[1; 4], 1, &[1; 4]);
        assert_eq!(count_votes(0, &s, &g), Votes { to_flip: 0, total: 4 });
    }

    #[test]
    fn votes_all_opposed() {
        let (s, g) = star(&[1; 4], 1, &[-1; 4]);
        assert_eq!(count_votes(0, &s, &g), Votes { to_flip: 4, total: 4 });
    }

    #[test]
    fn antiparallel_coupling_votes_to_flip_when_aligned() {
        let (s, g) = star(&[-1], 1, &[1]);
        assert_eq!(count_votes(0, &s, &g), Votes { to_flip: 1, total: 1 });
    }

    #[test]
    fn field_and_weights_are_votes() {
        let (s, mut g) = star(&[2, -1], 1, &[-1, -1]);
        g.add_field(0, -3).unwrap();
        // J=2 with s=-1 votes flip (2), J=-1 with s=-1 votes stay (1), h=-3 votes flip (3)
        assert_eq!(count_votes(0, &s, &g), Votes { to_flip: 5, total: 6 });
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = CouplingGraph::new(8);
        for _ in 0..12 {
            let (i, j) = (rng.random_range(0..8), rng.random_range(0..8));
            if i != j {
                g.add_coupling(i, j, rng.random_range(-3..=3)).unwrap();
            }
        }
        g.add_field(4, -2).unwrap();
        let back = CouplingGraph::parse(&g.to_text(), "mem").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = CouplingGraph::parse("3\n0 1 1\n# note\n0 9 1\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = CouplingGraph::parse("3\n0 1 1\n1 0 2\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = CouplingGraph::parse("3\n0 x\n", "g.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(CouplingGraph::parse("", "g.txt").is_err());
    }

    #[test]
    fn flip_delta_matches_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut g = CouplingGraph::new(6);
        for i in 0..6 {
            for j in i + 1..6 {
                g.add_coupling(i, j, rng.random_range(-2..=2)).unwrap();
            }
            g.add_field(i, rng.random_range(-1..=1)).unwrap();
        }
        let s = SpinArray::random(6, &mut rng);
        for i in 0..6 {
            let mut t = s.clone();
            t.flip(i);
            let d = hamiltonian(&t, &g).unwrap() - hamiltonian(&s, &g).unwrap();
            assert_eq!(d, flip_delta(i, &s, &g));
        }
    }
}
