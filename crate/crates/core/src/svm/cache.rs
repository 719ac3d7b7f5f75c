//! Kernel rows for the solver: the whole matrix for small problems, an LRU
//! of rows otherwise.

use std::num::NonZeroUsize;
use std::rc::Rc;

use lru::LruCache;

use super::KernelSpec;
use crate::Scalar;

/// Problems up to this size get a fully precomputed kernel matrix.
pub(crate) const FULL_CACHE_MAX_ROWS: usize = 4096;

pub(crate) struct KernelRows<'a, F> {
    x: &'a [&'a [F]],
    kernel: KernelSpec<F>,
    diag: Vec<F>,
    store: Store<F>,
}

enum Store<F> {
    Full(Vec<Rc<[F]>>),
    Lru(LruCache<usize, Rc<[F]>>),
}

impl<'a, F: Scalar> KernelRows<'a, F> {
    pub(crate) fn new(x: &'a [&'a [F]], kernel: KernelSpec<F>, cache_bytes: usize) -> Self {
        let n = x.len();
        let diag = x.iter().map(|xi| kernel.apply(xi, xi)).collect();
        let store = if n <= FULL_CACHE_MAX_ROWS {
            Store::Full((0..n).map(|i| compute_row(x, &kernel, i)).collect())
        } else {
            let row_bytes = n * std::mem::size_of::<F>();
            let cap = (cache_bytes / row_bytes).max(2);
            Store::Lru(LruCache::new(NonZeroUsize::new(cap).expect("cap >= 2")))
        };
        Self { x, kernel, diag, store }
    }

    #[inline]
    pub(crate) fn diag(&self, i: usize) -> F {
        self.diag[i]
    }

    pub(crate) fn row(&mut self, i: usize) -> Rc<[F]> {
        match &mut self.store {
            Store::Full(rows) => rows[i].clone(),
            Store::Lru(cache) => {
                if let Some(r) = cache.get(&i) {
                    return r.clone();
                }
                let r = compute_row(self.x, &self.kernel, i);
                cache.put(i, r.clone());
                r
            }
        }
    }
}

fn compute_row<F: Scalar>(x: &[&[F]], kernel: &KernelSpec<F>, i: usize) -> Rc<[F]> {
    let xi = x[i];
    x.iter().map(|xj| kernel.apply(xi, xj)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lru_rows_match_direct_evaluation() {
        let pts: Vec<Vec<f64>> = (0..(FULL_CACHE_MAX_ROWS + 3))
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()])
            .collect();
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let k = KernelSpec::Rbf { gamma: 0.7 };
        // room for 2 rows, forcing evictions
        let mut rows = KernelRows::new(&refs, k, 1);
        for &i in &[5usize, 4000, 5, 17, 4098, 5] {
            let r = rows.row(i);
            assert_eq!(r.len(), refs.len());
            for &j in &[0usize, i, 4097] {
                assert_eq!(r[j], k.apply(refs[i], refs[j]));
            }
            assert_eq!(r[i], rows.diag(i));
        }
    }
}
