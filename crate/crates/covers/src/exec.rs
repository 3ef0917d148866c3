//! Order-preserving execution kernel for the data-parallel inner loops.
//!
//! Work is sharded by the caller; shards run independently and their results
//! are concatenated in shard order, so output is deterministic regardless of
//! the mode. With the `parallel` feature disabled, `Parallel` silently falls
//! back to the sequential path.

/// How to run a batch of independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

/// Sizes the global worker pool; a no-op without the `parallel` feature or
/// after the pool has already started.
pub fn configure_threads(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
}

/// Maps `f` over `items`, preserving input order in the output.
pub fn map_collect<T, U, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        ExecMode::Parallel => par_map(items, f),
    }
}

/// Runs one job per shard and concatenates the per-shard results in shard
/// order.
pub fn run_sharded<S, R, F>(mode: ExecMode, shards: Vec<S>, run: F) -> Vec<R>
where
    S: Send,
    R: Send,
    F: Fn(S) -> Vec<R> + Sync + Send,
{
    map_collect(mode, shards, run).into_iter().flatten().collect()
}

#[cfg(feature = "parallel")]
fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let items: Vec<u64> = (0..500).collect();
        let seq = map_collect(ExecMode::Sequential, items.clone(), |x| x * x);
        let par = map_collect(ExecMode::Parallel, items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[3], 9);
    }

    #[test]
    fn sharded_concatenates_in_shard_order() {
        let shards = vec![0u64, 1, 2, 3];
        let out = run_sharded(ExecMode::Parallel, shards, |s| vec![s * 10, s * 10 + 1]);
        assert_eq!(out, vec![0, 1, 10, 11, 20, 21, 30, 31]);
    }
}
