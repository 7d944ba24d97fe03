//! Small dense linear algebra: one-sided Jacobi SVD and least squares.

/// Singular values (descending) of an `m x n` row-major matrix by one-sided
/// Jacobi rotations on the columns.
pub fn singular_values(a: &[f64], m: usize, n: usize) -> Vec<f64> {
    assert_eq!(a.len(), m * n);
    // work on the matrix with more rows than columns
    let (rows, cols, mut w) = if m >= n {
        (m, n, a.to_vec())
    } else {
        let mut t = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                t[j * m + i] = a[i * n + j];
            }
        }
        (n, m, t)
    };
    let col = |w: &[f64], j: usize, k: usize| -> (f64, f64, f64) {
        let mut al = 0.0;
        let mut be = 0.0;
        let mut ga = 0.0;
        for i in 0..rows {
            let x = w[i * cols + j];
            let y = w[i * cols + k];
            al += x * x;
            be += y * y;
            ga += x * y;
        }
        (al, be, ga)
    };
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for j in 0..cols {
            for k in j + 1..cols {
                let (al, be, ga) = col(&w, j, k);
                if ga == 0.0 || al == 0.0 || be == 0.0 {
                    continue;
                }
                let c0 = ga.abs() / (al * be).sqrt();
                off = off.max(c0);
                if c0 < 1e-15 {
                    continue;
                }
                let zeta = (be - al) / (2.0 * ga);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = w[i * cols + j];
                    let y = w[i * cols + k];
                    w[i * cols + j] = c * x - s * y;
                    w[i * cols + k] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..cols)
        .map(|j| (0..rows).map(|i| w[i * cols + j].powi(2)).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Least-squares solution of `A c = b` for `A` with `k` columns given as
/// vectors, by Gram-Schmidt QR. Returns `None` for (numerically) dependent columns.
pub fn lstsq(columns: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let k = columns.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let n = b.len();
    if columns.iter().any(|c| c.len() != n) {
        return None;
    }
    // Modified Gram-Schmidt QR keeps the conditioning of A, not A^T A
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; k]; k];
    let scale = columns.iter().map(|c| norm(c)).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for j in 0..k {
        for i in 0..j {
            let d = dot(&q[i], &q[j]);
            r[i][j] = d;
            for t in 0..n {
                q[j][t] -= d * q[i][t];
            }
        }
        // second pass (reorthogonalisation)
        for i in 0..j {
            let d = dot(&q[i], &q[j]);
            r[i][j] += d;
            for t in 0..n {
                q[j][t] -= d * q[i][t];
            }
        }
        let nj = norm(&q[j]);
        if nj <= 1e-13 * norm(&columns[j]).max(1e-300) {
            return None;
        }
        r[j][j] = nj;
        for t in 0..n {
            q[j][t] /= nj;
        }
    }
    let qtb: Vec<f64> = (0..k).map(|j| dot(&q[j], b)).collect();
    let mut c = vec![0.0; k];
    for j in (0..k).rev() {
        let mut s = qtb[j];
        for i in j + 1..k {
            s -= r[j][i] * c[i];
        }
        c[j] = s / r[j][j];
    }
    Some(c)
}

/// Relative residual `|A c - b| / |b|` (absolute when `b = 0`).
pub fn relative_residual(columns: &[Vec<f64>], c: &[f64], b: &[f64]) -> f64 {
    let mut r = b.to_vec();
    for (col, ci) in columns.iter().zip(c) {
        for (ri, a) in r.iter_mut().zip(col) {
            *ri -= ci * a;
        }
    }
    let nb = norm(b);
    if nb == 0.0 { norm(&r) } else { norm(&r) / nb }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves a small dense square system by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = [3.0, 0.0, 0.0, 0.0, -5.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let s = singular_values(&a, 4, 3);
        assert_eq!(s.len(), 3);
        assert!((s[0] - 5.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14 && (s[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_one_outer_product() {
        let g = [1.0, -2.0, 0.5, 3.0, 1.0];
        let l = [0.3, 1.0, -1.0, 2.0];
        let a: Vec<f64> = g.iter().flat_map(|x| l.iter().map(move |y| x * y)).collect();
        let s = singular_values(&a, 5, 4);
        assert!((s[0] - norm(&g) * norm(&l)).abs() < 1e-12);
        assert!(s[1] < 1e-14 * s[0]);
    }

    #[test]
    fn wide_matrix_transposes() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let s = singular_values(&a, 2, 3);
        let st = singular_values(&[1.0, 4.0, 2.0, 5.0, 3.0, 6.0], 3, 2);
        assert!((s[0] - st[0]).abs() < 1e-13 && (s[1] - st[1]).abs() < 1e-13);
        // Frobenius norm identity
        assert!((s[0] * s[0] + s[1] * s[1] - 91.0).abs() < 1e-11);
    }

    #[test]
    fn least_squares_exact_fit() {
        let c1 = vec![1.0, 1.0, 1.0, 1.0];
        let c2 = vec![0.0, 1.0, 2.0, 3.0];
        let b: Vec<f64> = c2.iter().map(|x| 2.0 + 0.5 * x).collect();
        let c = lstsq(&[c1.clone(), c2.clone()], &b).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-14 && (c[1] - 0.5).abs() < 1e-14);
        assert!(relative_residual(&[c1, c2], &c, &b) < 1e-15);
    }

    #[test]
    fn dependent_columns_rejected() {
        let c1 = vec![1.0, 2.0, 3.0];
        let c2 = vec![2.0, 4.0, 6.0];
        assert!(lstsq(&[c1, c2], &[1.0, 1.0, 1.0]).is_none());
    }

    #[test]
    fn dense_solve() {
        let x = solve_dense(vec![vec![0.0, 2.0], vec![1.0, 1.0]], vec![4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn frobenius_norm_preserved(v in proptest::collection::vec(-10.0f64..10.0, 20)) {
            let s = singular_values(&v, 5, 4);
            let fro: f64 = v.iter().map(|x| x * x).sum();
            let ss: f64 = s.iter().map(|x| x * x).sum();
            proptest::prop_assert!((fro - ss).abs() <= 1e-12 * fro.max(1.0));
            for w in s.windows(2) {
                proptest::prop_assert!(w[0] >= w[1] && w[1] >= 0.0);
            }
        }
    }
}
