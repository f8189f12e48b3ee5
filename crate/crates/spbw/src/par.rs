//! Data-parallel helpers. With the `parallel` feature these dispatch to rayon;
//! without it they run the same closures sequentially. Results are always
//! merged in index order so output never depends on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..len` and collect the results in index order.
pub fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Map `f` over a slice, preserving order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Smallest index in `0..len` for which `f` returns `Some`, with its payload.
pub fn find_first<T, F>(len: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..len)
            .into_par_iter()
            .filter_map(|i| f(i).map(|t| (i, t)))
            .min_by_key(|(i, _)| *i)
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).find_map(|i| f(i).map(|t| (i, t)))
    }
}

/// True when the build runs the parallel backend.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_first_returns_least_index() {
        let hit = find_first(100, |i| (i % 7 == 3 && i > 20).then_some(i * 2));
        assert_eq!(hit, Some((24, 48)));
    }

    #[test]
    fn map_range_keeps_order() {
        assert_eq!(map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}
