//! Thin data-parallel driver. With the `parallel` feature the heavy loops
//! fan out over rayon; without it they run inline, so the rest of the crate
//! never mentions threading.

#[cfg(feature = "parallel")]
pub(crate) fn flat_map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send + Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync,
{
    use rayon::prelude::*;
    items.par_iter().flat_map_iter(&f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn flat_map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(&T) -> Vec<U>,
{
    flat_map_collect_seq(items, f)
}

pub(crate) fn flat_map_collect_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(&T) -> Vec<U>,
{
    items.iter().flat_map(&f).collect()
}

#[cfg(feature = "parallel")]
pub(crate) fn filter_collect<T, F>(items: Vec<T>, keep: F) -> Vec<T>
where
    T: Send,
    F: Fn(&T) -> bool + Sync,
{
    use rayon::prelude::*;
    items.into_par_iter().filter(|t| keep(t)).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn filter_collect<T, F>(items: Vec<T>, keep: F) -> Vec<T>
where
    F: Fn(&T) -> bool,
{
    filter_collect_seq(items, keep)
}

pub(crate) fn filter_collect_seq<T, F>(items: Vec<T>, keep: F) -> Vec<T>
where
    F: Fn(&T) -> bool,
{
    items.into_iter().filter(|t| keep(t)).collect()
}
