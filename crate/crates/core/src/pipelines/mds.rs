//! Classical (Torgerson) multidimensional scaling.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Embeds a distance matrix in `dim` dimensions; rows are points.
///
/// Each axis is flipped so that its largest-magnitude coordinate is positive.
pub fn classical_mds(d: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    let n = d.len();
    if n == 0 || d.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("distances", "must be a nonempty square matrix"));
    }
    for i in 0..n {
        if d[i][i] != 0.0 {
            return Err(Error::invalid("distances", "diagonal must be zero"));
        }
        for j in 0..i {
            if (d[i][j] - d[j][i]).abs() > 1e-12 * d[i][j].abs().max(1.0) {
                return Err(Error::invalid("distances", "matrix is not symmetric"));
            }
        }
    }
    // B = -1/2 J D^2 J
    let sq = DMatrix::from_fn(n, n, |i, j| d[i][j] * d[i][j]);
    let row_mean: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let total = row_mean.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_mean[i] - row_mean[j] + total));

    let eig = SymmetricEigen::new(b);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let usable = order.iter().filter(|&&i| eig.eigenvalues[i] >= floor).count();
    if usable < dim {
        return Err(Error::InsufficientEigenvalues {
            found: usable,
            requested: dim,
        });
    }

    let mut coords = vec![vec![0.0; dim]; n];
    for (axis, &k) in order.iter().take(dim).enumerate() {
        let root = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        let mut big = 0;
        for i in 1..n {
            if v[i].abs() > v[big].abs() {
                big = i;
            }
        }
        let sign = if v[big] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            coords[i][axis] = sign * root * v[i];
        }
    }
    Ok(coords)
}
