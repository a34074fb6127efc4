//! Data-parallel execution with a sequential fallback.
//!
//! All Monte-Carlo drivers go through [`Execution::map_range`], which maps a
//! pure function over trial indices and returns results in index order. The
//! parallel path needs the `parallel` feature; without it every request runs
//! sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run the parallel path.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn map_range<T, F>(self, n: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Map then fold with an associative, commutative merge. The result is
    /// independent of how work is split.
    pub fn map_reduce<T, F, R>(self, n: u64, identity: T, f: F, reduce: R) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(u64) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n)
                .into_par_iter()
                .map(f)
                .reduce(|| identity.clone(), &reduce),
            _ => (0..n).map(f).fold(identity, reduce),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_agree() {
        let seq = Execution::Sequential.map_range(1000, |i| i * i);
        let par = Execution::Parallel.map_range(1000, |i| i * i);
        assert_eq!(seq, par);
        let s = Execution::Sequential.map_reduce(500, 0u64, |i| i, |a, b| a + b);
        let p = Execution::Parallel.map_reduce(500, 0u64, |i| i, |a, b| a + b);
        assert_eq!(s, p);
        assert_eq!(s, 499 * 500 / 2);
    }
}
