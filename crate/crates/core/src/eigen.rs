//! Floating-point symmetric eigensolver (cyclic Jacobi rotations) and the
//! reduction of a symmetric-definite generalized problem to standard form.

use crate::error::{Error, Result};

/// Maximum number of cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a dense symmetric `n×n` matrix (row-major), ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    // Symmetrize to remove round-off asymmetry from the reduction step.
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i]);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    let frob: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = f64::EPSILON * frob.max(f64::MIN_POSITIVE);
    let mut off = off_norm(&m, n);
    let mut sweeps = 0;
    while off > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
            }
        }
        sweeps += 1;
        off = off_norm(&m, n);
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

fn off_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j] * m[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(g: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = g[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite(j));
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let mut s = g[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(l)
}

/// Eigenvalues of `M` where `G·M` is symmetric and `G` positive definite.
///
/// With `G = L·Lᵀ` the matrix `L⁻¹·(G·M)·L⁻ᵀ` is symmetric and similar to `M`.
pub fn generalized_eigenvalues(m: &[f64], g: &[f64], n: usize) -> Result<Vec<f64>> {
    let l = cholesky(g, n)?;
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let gik = g[i * n + k];
            if gik == 0.0 {
                continue;
            }
            for j in 0..n {
                s[i * n + j] += gik * m[k * n + j];
            }
        }
    }
    // Y = L⁻¹ S (forward substitution on each column)
    let mut y = s;
    for col in 0..n {
        for i in 0..n {
            let mut v = y[i * n + col];
            for k in 0..i {
                v -= l[i * n + k] * y[k * n + col];
            }
            y[i * n + col] = v / l[i * n + i];
        }
    }
    // C = Y L⁻ᵀ, i.e. solve L Cᵀ = Yᵀ row by row.
    let mut c = vec![0.0; n * n];
    for row in 0..n {
        for j in 0..n {
            let mut v = y[row * n + j];
            for k in 0..j {
                v -= l[j * n + k] * c[row * n + k];
            }
            c[row * n + j] = v / l[j * n + j];
        }
    }
    symmetric_eigenvalues(&c, n)
}

/// A group of numerically equal eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
    pub spread: f64,
}

/// Clustering threshold for an eigenvalue of magnitude `x`: the absolute
/// tolerance `tol`, scaled up for magnitudes above one.
pub fn cluster_tolerance(tol: f64, x: f64) -> f64 {
    tol * x.abs().max(1.0)
}

/// Groups sorted values whose consecutive gaps are within tolerance.
pub fn cluster(sorted: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        let split = i == sorted.len()
            || sorted[i] - sorted[i - 1] > cluster_tolerance(tol, sorted[i]);
        if split && i > start {
            let group = &sorted[start..i];
            let mean = group.iter().sum::<f64>() / group.len() as f64;
            out.push(Cluster {
                value: mean,
                multiplicity: group.len(),
                spread: group[group.len() - 1] - group[0],
            });
            start = i;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_small_symmetric() {
        let a = [2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0];
        let ev = symmetric_eigenvalues(&a, 3).unwrap();
        for (x, y) in ev.iter().zip([1.0, 3.0, 5.0]) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn generalized_reduces_to_similarity() {
        // G = diag(2, 1/2), M = [[1, 1/4], [1, 3]] has G·M symmetric.
        let g = [2.0, 0.0, 0.0, 0.5];
        let m = [1.0, 0.25, 1.0, 3.0];
        let ev = generalized_eigenvalues(&m, &g, 2).unwrap();
        // trace 4, det 3 - 1/4 = 11/4
        let disc = (16.0f64 - 11.0).sqrt();
        assert!((ev[0] - (4.0 - disc) / 2.0).abs() < 1e-13);
        assert!((ev[1] - (4.0 + disc) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(matches!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2), Err(Error::NotPositiveDefinite(1))));
    }

    #[test]
    fn clusters_group_close_values() {
        let c = cluster(&[-0.5, -0.5 + 1e-12, 3.5, 3.5, 3.5], 1e-9);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].multiplicity, 2);
        assert_eq!(c[1].multiplicity, 3);
    }
}
