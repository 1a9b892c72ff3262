//! Singular-value based rank and null spaces for floating point matrices.

use nalgebra::DMatrix;

/// Singular values in decreasing order.
pub fn singular_values(rows: &[Vec<f64>], ncols: usize) -> Vec<f64> {
    if rows.is_empty() || ncols == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `eps · σ_max`.
pub fn rank_from_profile(sv: &[f64], eps: f64) -> usize {
    let Some(&smax) = sv.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > eps * smax).count()
}

pub fn rank(rows: &[Vec<f64>], ncols: usize, eps: f64) -> usize {
    rank_from_profile(&singular_values(rows, ncols), eps)
}

/// Orthonormal basis of the approximate right null space.
pub fn kernel(rows: &[Vec<f64>], ncols: usize, eps: f64) -> Vec<Vec<f64>> {
    // pad to a square matrix so that the full right singular basis is returned
    let n = ncols.max(rows.len());
    let m = DMatrix::from_fn(n, ncols, |i, j| if i < rows.len() { rows[i][j] } else { 0.0 });
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    (0..vt.nrows())
        .filter(|&i| smax == 0.0 || svd.singular_values[i] <= eps * smax)
        .map(|i| vt.row(i).iter().copied().collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_rank_one() {
        let rows = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        assert_eq!(rank(&rows, 3, 1e-10), 1);
        let k = kernel(&rows, 3, 1e-10);
        assert_eq!(k.len(), 2);
        for v in k {
            let dot: f64 = v.iter().zip(&rows[0]).map(|(a, b)| a * b).sum();
            assert!(dot.abs() < 1e-10);
        }
        assert_eq!(rank(&[vec![0.0, 0.0]], 2, 1e-8), 0);
    }
}
