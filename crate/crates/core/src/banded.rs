//! Symmetric banded matrices with an in-place Cholesky solve. The Newton
//! systems of the trajectory solver couple only neighbouring waypoints, so
//! their Hessians have a small fixed half-bandwidth.

#[derive(Debug, Clone)]
pub struct BandedSym {
    n: usize,
    bw: usize,
    /// Row `i` stores entries `(i, i - k)` for `k = 0..=bw`.
    lower: Vec<f64>,
}

impl BandedSym {
    pub fn zeros(n: usize, bw: usize) -> Self {
        BandedSym {
            n,
            bw,
            lower: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        debug_assert!(i - j <= self.bw, "entry ({i},{j}) outside band");
        i * (self.bw + 1) + (i - j)
    }

    /// Adds `v` to entry `(i, j)`; the symmetric entry is implied. Adding to
    /// an off-diagonal entry once accounts for both `(i, j)` and `(j, i)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j);
        self.lower[k] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i >= j { (i, j) } else { (j, i) };
        if a - b > self.bw {
            0.0
        } else {
            self.lower[self.slot(i, j)]
        }
    }

    pub fn add_diagonal(&mut self, v: f64) {
        for i in 0..self.n {
            let k = self.slot(i, i);
            self.lower[k] += v;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for k in 0..=self.bw.min(i) {
                let j = i - k;
                let a = self.lower[i * (self.bw + 1) + k];
                y[i] += a * x[j];
                if k > 0 {
                    y[j] += a * x[i];
                }
            }
        }
        y
    }

    /// Solves `A x = b` by banded Cholesky. Returns `None` if the matrix is
    /// not numerically positive definite.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = self.lower.clone();
        for j in 0..n {
            let mut diag = l[j * w];
            for k in 1..=bw.min(j) {
                let v = l[j * w + k];
                diag -= v * v;
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return None;
            }
            let ljj = diag.sqrt();
            l[j * w] = ljj;
            for i in j + 1..(j + w).min(n) {
                // L[i][j] = (A[i][j] - sum_k L[i][k] L[j][k]) / L[j][j]
                let mut v = l[i * w + (i - j)];
                let start = i.saturating_sub(bw);
                for k in start..j {
                    v -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                l[i * w + (i - j)] = v / ljj;
            }
        }
        let mut y = b.to_vec();
        for i in 0..n {
            let mut v = y[i];
            for k in i.saturating_sub(bw)..i {
                v -= l[i * w + (i - k)] * y[k];
            }
            y[i] = v / l[i * w];
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for r in i + 1..(i + w).min(n) {
                v -= l[r * w + (r - i)] * y[r];
            }
            y[i] = v / l[i * w];
        }
        Some(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solves_random_spd_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(n, bw) in &[(1, 0), (7, 2), (40, 4), (13, 12)] {
            let mut a = BandedSym::zeros(n, bw);
            for i in 0..n {
                for j in i.saturating_sub(bw)..i {
                    a.add(i, j, rng.gen_range(-1.0..1.0));
                }
                a.add(i, i, 2.0 * bw as f64 + 1.0 + rng.gen_range(0.0..1.0));
            }
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b = a.mul_vec(&x);
            let got = a.solve(&b).unwrap();
            for (g, e) in got.iter().zip(&x) {
                assert!((g - e).abs() < 1e-10, "n={n} bw={bw}");
            }
        }
    }

    #[test]
    fn detects_indefinite() {
        let mut a = BandedSym::zeros(2, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        a.add(1, 0, 2.0);
        assert!(a.solve(&[1.0, 1.0]).is_none());
        assert_eq!(a.get(0, 1), 2.0);
    }
}
