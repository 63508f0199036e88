//! Real polynomials in ascending powers of `s`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Drops highest-power coefficients that are exactly zero.
pub fn trim(p: &[f64]) -> Vec<f64> {
    let mut v = p.to_vec();
    while v.len() > 1 && *v.last().unwrap() == 0.0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0.0);
    }
    v
}

pub fn degree(p: &[f64]) -> usize {
    trim(p).len() - 1
}

pub fn is_zero(p: &[f64]) -> bool {
    p.iter().all(|&c| c == 0.0)
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&out)
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(&out)
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    trim(&a.iter().map(|x| x * k).collect::<Vec<_>>())
}

/// Horner evaluation at a complex point.
pub fn eval(p: &[f64], s: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// Roots via the eigenvalues of the companion matrix.
pub fn roots(p: &[f64]) -> Vec<C64> {
    let p = trim(p);
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    // exact zeros first: they are common (integrators) and worth keeping exact
    let lead_zeros = p.iter().take_while(|&&c| c == 0.0).count();
    let mut out = vec![C64::new(0.0, 0.0); lead_zeros];
    let q = &p[lead_zeros..];
    let m = q.len() - 1;
    if m == 0 {
        return out;
    }
    if m == 1 {
        out.push(C64::new(-q[0] / q[1], 0.0));
        return out;
    }
    let lead = q[m];
    let mut comp = DMatrix::<f64>::zeros(m, m);
    for i in 1..m {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..m {
        comp[(i, m - 1)] = -q[i] / lead;
    }
    out.extend(comp.complex_eigenvalues().iter().copied());
    out
}

/// Monic real polynomial with the given roots (conjugate pairs assumed).
pub fn from_roots(rs: &[C64]) -> Vec<f64> {
    let mut acc = vec![C64::new(1.0, 0.0)];
    for &r in rs {
        let mut next = vec![C64::new(0.0, 0.0); acc.len() + 1];
        for (i, &c) in acc.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        acc = next;
    }
    trim(&acc.iter().map(|c| c.re).collect::<Vec<_>>())
}

/// Cancels numerically common roots of `num/den`, preserving the gain.
pub fn cancel(num: &[f64], den: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let num = trim(num);
    let den = trim(den);
    if is_zero(&num) {
        return (vec![0.0], vec![1.0]);
    }
    let mut zs = roots(&num);
    let mut ps = roots(&den);
    let mut cancelled = false;
    let mut i = 0;
    while i < zs.len() {
        let z = zs[i];
        let tol = 1e-7 * (1.0 + z.norm());
        if let Some(j) = ps.iter().position(|p| (p - z).norm() <= tol) {
            ps.remove(j);
            zs.remove(i);
            cancelled = true;
        } else {
            i += 1;
        }
    }
    if !cancelled {
        return (num, den);
    }
    let kn = *num.last().unwrap();
    let kd = *den.last().unwrap();
    (scale(&from_roots(&zs), kn), scale(&from_roots(&ps), kd))
}
