//! Small dense vector helpers for points in ℝ^d with d in the single digits.

use alloc::vec;
use alloc::vec::Vec;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Determinant of a row-major `n × n` matrix by Gaussian elimination with
/// partial pivoting. The input is consumed as scratch space.
pub fn det(mut m: Vec<f64>, n: usize) -> f64 {
    debug_assert_eq!(m.len(), n * n);
    let mut sign = 1.0;
    for col in 0..n {
        let mut piv = col;
        let mut best = libm::fabs(m[col * n + col]);
        for row in col + 1..n {
            let v = libm::fabs(m[row * n + col]);
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for k in 0..n {
                m.swap(col * n + k, piv * n + k);
            }
            sign = -sign;
        }
        let p = m[col * n + col];
        for row in col + 1..n {
            let factor = m[row * n + col] / p;
            if factor != 0.0 {
                for k in col..n {
                    m[row * n + k] -= factor * m[col * n + k];
                }
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * m[i * n + i])
}

/// Normal of the hyperplane spanned by `d - 1` edge vectors in ℝ^d, via
/// signed cofactors (the generalized cross product). Not normalized.
pub fn cross_normal(edges: &[Vec<f64>], d: usize) -> Vec<f64> {
    debug_assert_eq!(edges.len() + 1, d);
    if d == 1 {
        return vec![1.0];
    }
    let k = d - 1;
    let mut normal = vec![0.0; d];
    let mut minor = Vec::with_capacity(k * k);
    for (j, slot) in normal.iter_mut().enumerate() {
        minor.clear();
        for e in edges {
            minor.extend(e.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v));
        }
        let cof = det(minor.clone(), k);
        *slot = if j % 2 == 0 { cof } else { -cof };
    }
    normal
}

/// Orthonormal basis of the hyperplane `u^⊥` for a unit vector `u`, taken
/// from the rows of the Householder reflection that maps `u` to `±e_k`.
pub fn orthonormal_complement(u: &[f64]) -> Vec<Vec<f64>> {
    let d = u.len();
    let k = (0..d)
        .max_by(|&a, &b| libm::fabs(u[a]).total_cmp(&libm::fabs(u[b])))
        .unwrap_or(0);
    // v = u - s e_k with s = -sign(u_k) keeps |v| away from zero.
    let s = if u[k] >= 0.0 { -1.0 } else { 1.0 };
    let mut v = u.to_vec();
    v[k] -= s;
    let vv = dot(&v, &v);
    let mut basis = Vec::with_capacity(d.saturating_sub(1));
    for j in (0..d).filter(|&j| j != k) {
        // Column j of I - 2 v vᵀ / (vᵀv) is orthogonal to H e_k ∝ u.
        let col: Vec<f64> = (0..d)
            .map(|i| {
                let id = if i == j { 1.0 } else { 0.0 };
                id - 2.0 * v[i] * v[j] / vv
            })
            .collect();
        basis.push(col);
    }
    basis
}

/// Inverse of a row-major `n × n` matrix by Gauss–Jordan elimination, or
/// `None` when a pivot vanishes.
pub fn invert(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| {
            libm::fabs(a[r * n + col]).total_cmp(&libm::fabs(a[s * n + col]))
        })?;
        if a[piv * n + col] == 0.0 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row * n + col];
            if f != 0.0 {
                for k in 0..n {
                    a[row * n + k] -= f * a[col * n + k];
                    inv[row * n + k] -= f * inv[col * n + k];
                }
            }
        }
    }
    Some(inv)
}

/// Numerical rank of a list of vectors (as rows) with a relative pivot
/// tolerance.
pub fn rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, v| acc.max(libm::fabs(*v)));
    if scale == 0.0 {
        return 0;
    }
    let tol = rel_tol * scale;
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len())
            .max_by(|&a, &b| libm::fabs(m[a][c]).total_cmp(&libm::fabs(m[b][c])))
            .unwrap_or(r);
        if libm::fabs(m[piv][c]) <= tol {
            continue;
        }
        m.swap(r, piv);
        for i in r + 1..m.len() {
            let f = m[i][c] / m[r][c];
            for k in c..cols {
                m[i][k] -= f * m[r][k];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_permutation_and_scaling() {
        assert_eq!(det(vec![0.0, 1.0, 1.0, 0.0], 2), -1.0);
        let m = vec![2.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 4.0];
        assert!((det(m, 3) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn cross_normal_is_orthogonal_to_edges() {
        let edges = vec![vec![1.0, 2.0, 0.5], vec![-0.3, 0.2, 1.0]];
        let n = cross_normal(&edges, 3);
        for e in &edges {
            assert!(dot(e, &n).abs() < 1e-12);
        }
        assert!(norm(&n) > 0.1);
    }

    #[test]
    fn complement_basis_is_orthonormal() {
        let raw = [0.3, -0.5, 0.2, 0.7];
        let len = norm(&raw);
        let u: Vec<f64> = raw.iter().map(|x| x / len).collect();
        let basis = orthonormal_complement(&u);
        assert_eq!(basis.len(), 3);
        for (i, a) in basis.iter().enumerate() {
            assert!(dot(a, &u).abs() < 1e-14);
            for (j, b) in basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(a, b) - expect).abs() < 1e-14);
            }
        }
    }
}
