//! One-dimensional quadrature rules.

// Kronrod tables are kept as published
#![allow(clippy::excessive_precision)]

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * GK_WEIGHTS[7];
    let mut g = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x)? + f(c + x)?;
        k += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature with absolute tolerance `tol`.
pub fn adaptive<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    fn rec<F: FnMut(f64) -> Result<f64>>(
        f: &mut F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let (v, err) = kronrod(f, a, b)?;
        if !v.is_finite() {
            return Err(Error::Numeric("integrand is not finite".into()));
        }
        if err <= tol || depth == 0 {
            return Ok(v);
        }
        let m = 0.5 * (a + b);
        Ok(rec(f, a, m, 0.5 * tol, depth - 1)? + rec(f, m, b, 0.5 * tol, depth - 1)?)
    }
    if a == b {
        return Ok(0.0);
    }
    rec(&mut f, a, b, tol, 30)
}

/// Composite Simpson weights on `n + 1` equispaced nodes; `n` must be even.
pub fn simpson_weights(n: usize, h: f64) -> Result<alloc::vec::Vec<f64>> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Config("composite Simpson needs an even number of intervals".into()));
    }
    let mut w = alloc::vec![0.0; n + 1];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == n {
            h / 3.0
        } else if i % 2 == 1 {
            4.0 * h / 3.0
        } else {
            2.0 * h / 3.0
        };
    }
    Ok(w)
}

pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let w = simpson_weights(values.len().saturating_sub(1), h)?;
    Ok(w.iter().zip(values).map(|(a, b)| a * b).sum())
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
    let mut xs = alloc::vec![0.0; n];
    let mut ws = alloc::vec![0.0; n];
    for i in 0..n {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 0 { 0.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}
