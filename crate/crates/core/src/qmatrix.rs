//! Small dense matrices over the rationals: inversion and random invertible
//! matrices for coordinate transforms.

use num_traits::{One, Zero};
use rand::Rng;

use crate::polyring::{rat_int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub n: usize,
    /// Row-major entries.
    pub entries: Vec<Rational>,
}

impl QMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        QMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n));
        QMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.n)
    }

    /// Random matrix with integer entries in [-9, 9]; not necessarily
    /// invertible.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let entries = (0..n * n)
            .map(|_| rat_int(rng.gen_range(-9..=9)))
            .collect();
        QMatrix { n, entries }
    }

    /// Gauss-Jordan inverse; None when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = QMatrix::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] = &a[col * n + j] / &p;
                inv[col * n + j] = &inv[col * n + j] / &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    let t = &a[col * n + j] * &f;
                    a[r * n + j] = &a[r * n + j] - &t;
                    let t = &inv[col * n + j] * &f;
                    inv[r * n + j] = &inv[r * n + j] - &t;
                }
            }
        }
        Some(QMatrix { n, entries: inv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn inverse_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let m = QMatrix::random(3, &mut rng);
            if let Some(inv) = m.inverse() {
                // m * inv == I
                let n = 3;
                for i in 0..n {
                    for j in 0..n {
                        let mut s = Rational::zero();
                        for k in 0..n {
                            s += m.get(i, k) * inv.get(k, j);
                        }
                        let expect = if i == j { Rational::one() } else { Rational::zero() };
                        assert_eq!(s, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn singular_has_no_inverse() {
        let z = QMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert!(z.inverse().is_none());
    }
}
