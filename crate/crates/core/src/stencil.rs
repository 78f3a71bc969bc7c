//! Finite-difference weights on arbitrary stencils.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

/// Fornberg's recursion: weights `w[k][j]` for the `k`-th derivative at `z`
/// from samples at `xs[j]`, for `k = 0..=m`.
pub fn fornberg(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Sparse derivative operator on a uniform grid: row `i` reads `len` samples from `start`.
#[derive(Clone, Debug)]
pub struct Operator {
    rows: Vec<(usize, Vec<f64>)>,
}

impl Operator {
    /// Fourth-order `order`-th derivative on `n + 1` nodes with spacing `h`:
    /// central stencils inside (five points up to second derivatives, seven
    /// beyond), one-sided ones of `max(order + 4, 6)` points at the ends.
    pub fn uniform(n: usize, h: f64, order: usize) -> Self {
        let half = (order + 3) / 2;
        let one_sided = (order + 4).max(6);
        assert!(n + 1 >= one_sided, "grid too small for the stencil");
        let offsets: Vec<f64> = (0..one_sided).map(|k| k as f64).collect();
        let scale = h.powi(order as i32);
        let mut rows = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let (start, len) = if i >= half && i + half <= n {
                (i - half, 2 * half + 1)
            } else if i < half {
                (0, one_sided)
            } else {
                (n + 1 - one_sided, one_sided)
            };
            let w = fornberg((i - start) as f64, &offsets[..len], order);
            rows.push((start, w[order].iter().map(|x| x / scale).collect()));
        }
        Operator { rows }
    }

    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(s, w)| w.iter().enumerate().map(|(k, wk)| wk * f[s + k]).sum())
            .collect()
    }

    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        (self.rows[i].0, &self.rows[i].1)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_second_derivative_weights() {
        let w = fornberg(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        let want = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w[2].iter().zip(want) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn operator_is_exact_on_quartics() {
        let n = 10;
        let h = 0.1;
        let f: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(4)).collect();
        let d2 = Operator::uniform(n, h, 2).apply(&f);
        for (i, v) in d2.iter().enumerate() {
            let x = i as f64 * h;
            assert!((v - 12.0 * x * x).abs() < 1e-9, "{} {}", i, v);
        }
    }

    #[test]
    fn higher_derivatives_are_exact_on_sextics() {
        let n = 16;
        let h = 0.0625;
        let f: Vec<f64> = (0..=n).map(|i| (i as f64 * h).powi(6)).collect();
        let d3 = Operator::uniform(n, h, 3).apply(&f);
        let d4 = Operator::uniform(n, h, 4).apply(&f);
        for i in 0..=n {
            let x = i as f64 * h;
            assert!((d3[i] - 120.0 * x.powi(3)).abs() < 1e-6, "{} {}", i, d3[i]);
            assert!((d4[i] - 360.0 * x * x).abs() < 1e-5, "{} {}", i, d4[i]);
        }
    }
}
