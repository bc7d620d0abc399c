//! Execution strategy for embarrassingly parallel batches.
//!
//! With the `parallel` feature (default) batches run on the rayon pool;
//! without it, or with [`Execution::Sequential`], they run in index order.
//! Callers only use commutative reductions over the results, so both paths
//! produce identical output.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Map `f` over `0..n` and collect results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            Execution::Parallel => par_map(n, f),
        }
    }

    /// Map `f` over `0..n` and stop at the first error.
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Run `f` on a pool capped at `threads` workers. `threads == 1` forces the
/// sequential path.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce(Execution) -> R + Send) -> R {
    match threads {
        Some(1) => f(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| f(Execution::Parallel)),
            Err(_) => f(Execution::Parallel),
        },
        _ => f(Execution::Parallel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let seq = Execution::Sequential.map(100, |i| i * i);
        let par = Execution::Parallel.map(100, |i| i * i);
        assert_eq!(seq, par);
    }

    #[test]
    fn try_map_short_circuits_to_error() {
        let r: Result<Vec<usize>, String> =
            Execution::Parallel.try_map(10, |i| if i == 3 { Err("three".into()) } else { Ok(i) });
        assert_eq!(r.unwrap_err(), "three");
    }
}
