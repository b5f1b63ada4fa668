//! Data-parallel mapping over independent work items, such as seeds of a
//! random suite. With the `parallel` feature the items run on the rayon pool;
//! without it, or through `seq_map`, they run in order on the calling thread.
//! Results come back in input order either way.

pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// `par_map` when built with `parallel`, else `seq_map`.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        par_map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        seq_map(items, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let want: Vec<u64> = xs.iter().map(|x| x * x).collect();
        assert_eq!(seq_map(&xs, |x| x * x), want);
        assert_eq!(map(&xs, |x| x * x), want);
    }
}
