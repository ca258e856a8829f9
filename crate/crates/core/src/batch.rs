//! Mapping independent work items (trials, instances, sweep points) either
//! sequentially or across a rayon pool.
//!
//! Without the `parallel` feature, [`Execution::Parallel`] runs sequentially.
//! Each item runs start to finish on one thread, so per-item field-operation
//! counters are the same in both modes.

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether items really run concurrently in this build.
    pub fn is_concurrent(self) -> bool {
        self == Execution::Parallel && cfg!(feature = "parallel")
    }
}

impl std::str::FromStr for Execution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "sequential" | "seq" => Ok(Execution::Sequential),
            "parallel" | "par" => Ok(Execution::Parallel),
            other => Err(Error::Format(format!("unknown execution mode `{other}`"))),
        }
    }
}

/// `f` applied to every item, results in input order.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => par_map(items, f),
    }
}

/// `f(0), …, f(n−1)`, in order.
pub fn map_range<R, F>(n: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(&idx, exec, |&i| f(i))
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let seq = map_range(100, Execution::Sequential, |i| i * i);
        let par = map_range(100, Execution::Parallel, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
        assert!(map::<u8, u8, _>(&[], Execution::Parallel, |&x| x).is_empty());
    }

    #[test]
    fn parses_modes() {
        assert_eq!("seq".parse::<Execution>(), Ok(Execution::Sequential));
        assert_eq!("parallel".parse::<Execution>(), Ok(Execution::Parallel));
        assert!("gpu".parse::<Execution>().is_err());
    }
}
