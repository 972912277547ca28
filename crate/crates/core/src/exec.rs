//! Execution mode for the data-parallel inner loops.
//!
//! With the `parallel` feature (default) index-parallel maps run on the rayon
//! pool; without it, or after `set_mode(Mode::Sequential)`, they run on the
//! calling thread. Results are always collected in index order, so output
//! does not depend on the mode or on the number of threads.

use std::sync::atomic::{AtomicBool, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

static SEQUENTIAL: AtomicBool = AtomicBool::new(false);

pub fn set_mode(mode: Mode) {
    SEQUENTIAL.store(mode == Mode::Sequential, Ordering::Relaxed);
}

/// The mode actually in effect. Always `Sequential` when built without the
/// `parallel` feature.
pub fn mode() -> Mode {
    if cfg!(feature = "parallel") && !SEQUENTIAL.load(Ordering::Relaxed) {
        Mode::Parallel
    } else {
        Mode::Sequential
    }
}

/// Evaluate `f(0..n)` and collect the results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Mode::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Like [`map_indexed`] over a slice.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_indexed(items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_in_both_modes() {
        let seq: Vec<usize> = (0..1000).map(|i| i * i).collect();
        assert_eq!(map_indexed(1000, |i| i * i), seq);
        set_mode(Mode::Sequential);
        assert_eq!(mode(), Mode::Sequential);
        assert_eq!(map_indexed(1000, |i| i * i), seq);
        set_mode(Mode::Parallel);
    }
}
