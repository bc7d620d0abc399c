use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ising::{flip_delta, hamiltonian, CouplingGraph, SpinArray};

pub const DEFAULT_ORACLE_LIMIT: usize = 24;
/// At most this many ground states are kept; `count` is always exact.
pub const MAX_KEPT_STATES: usize = 1024;

const CHUNK_BITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStates {
    pub energy: i64,
    pub count: u64,
    /// The first `MAX_KEPT_STATES` ground states in enumeration order.
    pub states: Vec<SpinArray>,
}

impl GroundStates {
    fn merge(mut self, other: Self) -> Self {
        match self.energy.cmp(&other.energy) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                self.count += other.count;
                let room = MAX_KEPT_STATES.saturating_sub(self.states.len());
                self.states.extend(other.states.into_iter().take(room));
                self
            }
        }
    }
}

/// Exhaustive minimum of H over all 2ⁿ states. The state space is cut into
/// chunks walked in Gray-code order, so each step costs one flip.
pub fn brute_force(g: &CouplingGraph, limit: usize, exec: Execution) -> Result<GroundStates> {
    let n = g.len();
    if n > limit || n >= 63 {
        return Err(Error::TooLarge { n, limit });
    }
    let chunk_bits = CHUNK_BITS.min(n);
    let chunks = 1usize << (n - chunk_bits);
    let per_chunk = 1u64 << chunk_bits;
    let parts = exec.try_map(chunks, |c| -> Result<GroundStates> {
        let start = c as u64 * per_chunk;
        let gray = |t: u64| t ^ (t >> 1);
        let mut s = SpinArray::from_bits(n, gray(start));
        let mut h = hamiltonian(&s, g)?;
        let mut best = GroundStates {
            energy: h,
            count: 1,
            states: vec![s.clone()],
        };
        for t in start + 1..start + per_chunk {
            let bit = t.trailing_zeros() as usize;
            h += flip_delta(bit, &s, g);
            s.flip(bit);
            if h < best.energy {
                best = GroundStates {
                    energy: h,
                    count: 1,
                    states: vec![s.clone()],
                };
            } else if h == best.energy {
                best.count += 1;
                if best.states.len() < MAX_KEPT_STATES {
                    best.states.push(s.clone());
                }
            }
        }
        Ok(best)
    })?;
    Ok(parts.into_iter().reduce(GroundStates::merge).expect("at least one chunk"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_spin_field() {
        let mut g = CouplingGraph::new(1);
        g.add_field(0, 1).unwrap();
        let gs = brute_force(&g, 24, Execution::Sequential).unwrap();
        assert_eq!(gs.energy, -1);
        assert_eq!(gs.count, 1);
        assert_eq!(gs.states[0].as_slice(), &[1]);
    }

    #[test]
    fn ferromagnetic_ring() {
        let mut g = CouplingGraph::new(6);
        for i in 0..6 {
            g.add_coupling(i, (i + 1) % 6, 1).unwrap();
        }
        let gs = brute_force(&g, 24, Execution::Sequential).unwrap();
        assert_eq!(gs.energy, -6);
        assert_eq!(gs.count, 2);
    }

    #[test]
    fn over_limit_rejected() {
        let g = CouplingGraph::new(25);
        assert!(matches!(
            brute_force(&g, DEFAULT_ORACLE_LIMIT, Execution::Sequential),
            Err(Error::TooLarge { n: 25, limit: 24 })
        ));
    }

    #[test]
    fn matches_direct_enumeration_across_chunks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 14;
        let mut g = CouplingGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < 0.4 {
                    g.add_coupling(i, j, rng.random_range(-3..=3)).unwrap();
                }
            }
        }
        let mut best = i64::MAX;
        let mut count = 0;
        for bits in 0..1u64 << n {
            let h = hamiltonian(&SpinArray::from_bits(n, bits), &g).unwrap();
            if h < best {
                best = h;
                count = 1;
            } else if h == best {
                count += 1;
            }
        }
        for exec in [Execution::Sequential, Execution::Parallel] {
            let gs = brute_force(&g, 24, exec).unwrap();
            assert_eq!((gs.energy, gs.count), (best, count));
            for s in &gs.states {
                assert_eq!(hamiltonian(s, &g).unwrap(), best);
            }
        }
    }
}
