//! Non-negative least squares by the Lawson-Hanson active-set method, plus
//! the small dense QR pieces it needs. Sized for tall-thin systems (many
//! data points, at most a handful of columns).

/// Result of an NNLS solve: the non-negative solution, the Euclidean norm
/// of the residual `A x - b`, and the number of outer iterations taken.
#[derive(Debug, Clone, PartialEq)]
pub struct NnlsResult {
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
}

/// Minimize ‖A x − b‖₂ subject to x ≥ 0.
///
/// `columns` holds A column-major; every column must have `b.len()` rows.
/// The active-set loop stops when the largest dual component falls below
/// `dual_tol_factor` times its initial value (or nothing remains to add).
pub fn nnls(columns: &[Vec<f64>], b: &[f64], dual_tol_factor: f64) -> NnlsResult {
    let n = columns.len();
    let m = b.len();
    debug_assert!(columns.iter().all(|c| c.len() == m));

    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];
    let mut iterations = 0usize;

    // Dual at x = 0 fixes the termination scale.
    let initial_dual = dual_vector(columns, b, &x);
    let initial_max = initial_dual.iter().cloned().fold(f64::MIN, f64::max);
    if !(initial_max > 0.0) {
        return NnlsResult {
            x,
            residual_norm: norm(b),
            iterations,
        };
    }
    let tol = dual_tol_factor * initial_max;

    let max_outer = 10 * (n + 1);
    while iterations < max_outer {
        iterations += 1;
        let w = dual_vector(columns, b, &x);
        let mut best: Option<(usize, f64)> = None;
        for j in 0..n {
            if !passive[j] && w[j] > tol {
                if best.map_or(true, |(_, bw)| w[j] > bw) {
                    best = Some((j, w[j]));
                }
            }
        }
        let Some((enter, _)) = best else { break };
        passive[enter] = true;

        // Inner loop: solve on the passive set, walk back along the
        // feasible segment whenever the unconstrained solution leaves the
        // positive orthant.
        loop {
            let active_idx: Vec<usize> =
                (0..n).filter(|&j| passive[j]).collect();
            let sub: Vec<Vec<f64>> =
                active_idx.iter().map(|&j| columns[j].clone()).collect();
            let z_sub = match lstsq(&sub, b) {
                Some(solution) => solution,
                None => {
                    // Degenerate column; drop the entering variable and give
                    // up on it this round.
                    passive[enter] = false;
                    break;
                }
            };
            let mut z = vec![0.0; n];
            for (slot, &j) in active_idx.iter().enumerate() {
                z[j] = z_sub[slot];
            }

            if active_idx.iter().all(|&j| z[j] > 0.0) {
                x = z;
                break;
            }

            // Largest feasible step toward z.
            let mut alpha = f64::INFINITY;
            for &j in &active_idx {
                if z[j] <= 0.0 {
                    let denom = x[j] - z[j];
                    if denom > 0.0 {
                        alpha = alpha.min(x[j] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for j in 0..n {
                if passive[j] {
                    x[j] += alpha * (z[j] - x[j]);
                }
            }
            // The blocking variable lands at zero up to rounding; release
            // everything that reached the bound.
            let x_scale = x.iter().cloned().fold(0.0, f64::max);
            for j in 0..n {
                if passive[j] && x[j] <= 1e-14 * x_scale {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }

    let residual_norm = norm(&residual(columns, b, &x));
    NnlsResult {
        x,
        residual_norm,
        iterations,
    }
}

fn residual(columns: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut r = b.to_vec();
    for (j, col) in columns.iter().enumerate() {
        if x[j] != 0.0 {
            for (ri, &aij) in r.iter_mut().zip(col) {
                *ri -= aij * x[j];
            }
        }
    }
    r
}

fn dual_vector(columns: &[Vec<f64>], b: &[f64], x: &[f64]) -> Vec<f64> {
    let r = residual(columns, b, x);
    columns
        .iter()
        .map(|col| col.iter().zip(&r).map(|(a, ri)| a * ri).sum())
        .collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Dense least squares ‖A x − b‖ → x by Householder QR, A column-major and
/// tall (rows ≥ cols). Returns `None` when A is numerically rank-deficient.
pub fn lstsq(columns: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let (r, qtb) = householder_qr(columns, Some(b))?;
    let k = columns.len();
    let qtb = qtb.expect("rhs was provided");
    back_substitute(&r, &qtb[..k])
}

/// Householder QR of a column-major tall matrix. Returns the k×k upper
/// factor R (row-major) and, when a right-hand side is given, Qᵀb.
/// `None` signals a zero pivot (rank deficiency).
pub fn householder_qr(
    columns: &[Vec<f64>],
    b: Option<&[f64]>,
) -> Option<(Vec<f64>, Option<Vec<f64>>)> {
    let k = columns.len();
    if k == 0 {
        return Some((Vec::new(), b.map(|b| b.to_vec())));
    }
    let m = columns[0].len();
    if m < k {
        return None;
    }
    let mut a: Vec<Vec<f64>> = columns.to_vec();
    let mut y = b.map(|b| b.to_vec());
    let mut r = vec![0.0; k * k];
    let mut pivot_scale = 0.0f64;

    for j in 0..k {
        let norm_j = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        pivot_scale = pivot_scale.max(norm_j);
        // A pivot collapsing by ~machine precision against the largest one
        // seen marks a numerically dependent column.
        if norm_j <= 1e-13 * pivot_scale || norm_j == 0.0 {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm_j } else { norm_j };
        // Reflector v lives in a[j][j..]; v₀ = a_jj − α.
        a[j][j] -= alpha;
        let vv: f64 = a[j][j..].iter().map(|v| v * v).sum();
        if vv == 0.0 {
            return None;
        }
        for l in (j + 1)..k {
            let s: f64 = a[j][j..]
                .iter()
                .zip(&a[l][j..])
                .map(|(v, w)| v * w)
                .sum();
            let scale = 2.0 * s / vv;
            // Two-pass to satisfy the borrow checker: copy the reflector.
            let v: Vec<f64> = a[j][j..].to_vec();
            for (w, vi) in a[l][j..].iter_mut().zip(&v) {
                *w -= scale * vi;
            }
        }
        if let Some(y) = y.as_mut() {
            let s: f64 = a[j][j..].iter().zip(&y[j..]).map(|(v, w)| v * w).sum();
            let scale = 2.0 * s / vv;
            let v: Vec<f64> = a[j][j..].to_vec();
            for (w, vi) in y[j..].iter_mut().zip(&v) {
                *w -= scale * vi;
            }
        }
        r[j * k + j] = alpha;
        for l in (j + 1)..k {
            r[j * k + l] = a[l][j];
        }
    }
    Some((r, y))
}

fn back_substitute(r: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let k = rhs.len();
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = rhs[i];
        for l in (i + 1)..k {
            acc -= r[i * k + l] * x[l];
        }
        let diag = r[i * k + i];
        if diag == 0.0 {
            return None;
        }
        x[i] = acc / diag;
    }
    Some(x)
}

/// Diagonal of (AᵀA)⁻¹ via R from the QR factorization: with A = QR,
/// (AᵀA)⁻¹ = R⁻¹R⁻ᵀ, whose diagonal is the row-wise square-norm of R⁻¹.
/// `None` when A is rank-deficient.
pub fn normal_matrix_inverse_diagonal(columns: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = columns.len();
    let (r, _) = householder_qr(columns, None)?;
    // Invert the upper-triangular R column by column.
    let mut rinv = vec![0.0; k * k];
    for col in 0..k {
        let mut e = vec![0.0; k];
        e[col] = 1.0;
        let x = back_substitute(&r, &e)?;
        for row in 0..k {
            rinv[row * k + col] = x[row];
        }
    }
    Some(
        (0..k)
            .map(|row| (row..k).map(|col| rinv[row * k + col].powi(2)).sum())
            .collect(),
    )
}

/// Crude condition estimate of R from the QR factorization: ratio of the
/// largest to smallest |diagonal| entry. Infinite for rank-deficient input.
pub fn condition_estimate(columns: &[Vec<f64>]) -> f64 {
    match householder_qr(columns, None) {
        Some((r, _)) => {
            let k = columns.len();
            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for j in 0..k {
                let d = r[j * k + j].abs();
                lo = lo.min(d);
                hi = hi.max(d);
            }
            if lo == 0.0 {
                f64::INFINITY
            } else {
                hi / lo
            }
        }
        None => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matvec(columns: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        let m = columns[0].len();
        let mut out = vec![0.0; m];
        for (col, &xi) in columns.iter().zip(x) {
            for (o, &a) in out.iter_mut().zip(col) {
                *o += a * xi;
            }
        }
        out
    }

    #[test]
    fn lstsq_exact_system() {
        // Overdetermined but consistent.
        let cols = vec![vec![1.0, 1.0, 1.0, 1.0], vec![0.0, 1.0, 2.0, 3.0]];
        let x_true = [2.0, -0.5];
        let b = matvec(&cols, &x_true);
        let x = lstsq(&cols, &b).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn lstsq_rejects_rank_deficiency() {
        let cols = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        assert!(lstsq(&cols, &[1.0, 2.0, 3.0]).is_none());
    }

    #[test]
    fn nnls_recovers_nonnegative_truth() {
        // Mildly correlated Vandermonde-like columns.
        let grid: Vec<f64> = (0..40).map(|i| 0.1 + i as f64 * 0.05).collect();
        let cols: Vec<Vec<f64>> = (0..4)
            .map(|p| grid.iter().map(|x| x.powi(p)).collect())
            .collect();
        let x_true = [0.5, 0.0, 2.0, 1.0];
        let b = matvec(&cols, &x_true);
        let sol = nnls(&cols, &b, 1e-10);
        for (got, want) in sol.x.iter().zip(&x_true) {
            assert!((got - want).abs() < 1e-8, "{:?}", sol.x);
        }
        assert!(sol.residual_norm < 1e-8);
    }

    #[test]
    fn nnls_pins_negative_directions_to_zero() {
        // b opposes the second column; its coefficient must clamp at 0.
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let sol = nnls(&cols, &[3.0, -2.0], 1e-10);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
        assert_eq!(sol.x[1], 0.0);
        assert!((sol.residual_norm - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nnls_zero_rhs_is_zero() {
        let cols = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let sol = nnls(&cols, &[0.0, 0.0], 1e-10);
        assert_eq!(sol.x, vec![0.0, 0.0]);
        assert_eq!(sol.residual_norm, 0.0);
    }

    #[test]
    fn normal_inverse_diagonal_matches_direct_inverse() {
        // 2-column case invertible by hand: AᵀA = [[2, 3], [3, 5]].
        let cols = vec![vec![1.0, 1.0], vec![1.0, 2.0]];
        let d = normal_matrix_inverse_diagonal(&cols).unwrap();
        // inv([[2,3],[3,5]]) = [[5,-3],[-3,2]] (det = 1).
        assert!((d[0] - 5.0).abs() < 1e-10 && (d[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn condition_estimate_flags_collinearity() {
        let good = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(condition_estimate(&good) < 10.0);
        let bad = vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]];
        assert!(condition_estimate(&bad) > 1e10);
    }
}
