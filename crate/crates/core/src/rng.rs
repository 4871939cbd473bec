//! Seeded generation of exact rational test points.

use num_traits::{One, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::plucker::MatrixPoint;
use crate::subsets::k_subsets;
use crate::Q;

/// Deterministic source of small rationals.
pub struct Rng {
    inner: ChaCha8Rng,
    seed: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng { inner: ChaCha8Rng::seed_from_u64(seed), seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// `p/q` with `|p| <= bound` and `1 <= q <= bound`.
    pub fn rational(&mut self, bound: i64) -> Q {
        let p = self.inner.gen_range(-bound..=bound);
        let q = self.inner.gen_range(1..=bound);
        Q::new(p.into(), q.into())
    }

    /// `p/q` with `1 <= p, q <= bound`.
    pub fn positive_rational(&mut self, bound: i64) -> Q {
        let p = self.inner.gen_range(1..=bound);
        let q = self.inner.gen_range(1..=bound);
        Q::new(p.into(), q.into())
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, bound: i64) -> Vec<Vec<Q>> {
        (0..rows).map(|_| (0..cols).map(|_| self.rational(bound)).collect()).collect()
    }

    /// A random `k x n` point all of whose maximal minors are non-zero.
    pub fn generic_point(&mut self, k: usize, n: usize, bound: i64) -> MatrixPoint {
        let sets = k_subsets(n, k);
        loop {
            let rows = self.matrix(k, n, bound);
            if let Ok(m) = MatrixPoint::new(rows) {
                if sets.iter().all(|&s| !m.minor(s).is_zero()) {
                    return m;
                }
            }
        }
    }

    /// A random element of `SL_k(Q)`: a product of elementary matrices.
    pub fn sl_matrix(&mut self, k: usize, bound: i64) -> Vec<Vec<Q>> {
        let mut g: Vec<Vec<Q>> =
            (0..k).map(|i| (0..k).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        for _ in 0..3 * k {
            let i = self.below(k);
            let j = self.below(k);
            if i == j {
                continue;
            }
            let c = self.rational(bound);
            for col in 0..k {
                let t = &c * &g[j][col];
                g[i][col] += t;
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a: Vec<Q> = {
            let mut r = Rng::new(42);
            (0..5).map(|_| r.rational(9)).collect()
        };
        let b: Vec<Q> = {
            let mut r = Rng::new(42);
            (0..5).map(|_| r.rational(9)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn sl_has_unit_determinant() {
        let mut r = Rng::new(1);
        for k in 2..5 {
            assert!(crate::linalg::det(&r.sl_matrix(k, 5)).is_one());
        }
    }
}
