/// Maps `f` over `0..n` and returns the results in index order.
///
/// With the `parallel` feature the work is spread over a rayon pool of
/// `workers` threads (`None` uses rayon's default). `Some(1)`, or a build
/// without the feature, runs sequentially on the calling thread.
pub fn map_indexed<T, F>(n: usize, workers: Option<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if workers != Some(1) {
        use rayon::prelude::*;
        let run = || (0..n).into_par_iter().map(&f).collect();
        return match workers {
            Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
                Ok(pool) => pool.install(run),
                Err(_) => run(),
            },
            None => run(),
        };
    }
    let _ = workers;
    (0..n).map(f).collect()
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
