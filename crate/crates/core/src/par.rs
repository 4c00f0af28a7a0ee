//! Order-preserving maps that run on the rayon pool when the `parallel`
//! feature is on and sequentially otherwise. Results come back in input
//! order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn flat_map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Vec<U> + Sync + Send,
{
    map_ordered(items, f).into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
pub fn flat_map_ordered<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> Vec<U>,
{
    items.into_iter().flat_map(f).collect()
}

/// Run `f` on a pool of `jobs` threads (the global pool when `jobs` is 0).
#[cfg(feature = "parallel")]
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    if jobs == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_jobs<R>(_jobs: usize, f: impl FnOnce() -> R) -> R {
    f()
}

#[cfg(test)]
mod tests {
    #[test]
    fn order_is_preserved() {
        let v: Vec<u32> = (0..1000).collect();
        let out = super::map_ordered(v.clone(), |x| x * 2);
        assert_eq!(out, v.iter().map(|x| x * 2).collect::<Vec<_>>());
        let flat = super::with_jobs(3, || {
            super::flat_map_ordered(vec![1u32, 2, 3], |x| vec![x; x as usize])
        });
        assert_eq!(flat, vec![1, 2, 2, 3, 3, 3]);
    }
}
