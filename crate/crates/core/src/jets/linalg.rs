use crate::error::{Error, Result};
use crate::jets::Jet;

/// Square matrix of jets.
pub type JetMatrix = Vec<Vec<Jet>>;

/// Inverse and determinant of a jet matrix by Gauss-Jordan elimination with
/// partial pivoting on the values. Fails when `|det| <= min_det`.
pub fn invert(m: &JetMatrix, min_det: f64) -> Result<(JetMatrix, Jet)> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let dim = m[0][0].dim();
    let order = m.iter().flatten().map(Jet::order).min().unwrap_or(0);
    let mut a: JetMatrix = m
        .iter()
        .map(|row| row.iter().map(|j| j.truncate(order)).collect())
        .collect();
    let mut inv: JetMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Jet::constant(dim, order, if i == j { 1.0 } else { 0.0 }))
                .collect()
        })
        .collect();
    let mut det = Jet::constant(dim, order, 1.0);

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].value().abs().total_cmp(&a[s][col].value().abs()))
            .expect("non-empty range");
        if a[pivot][col].value() == 0.0 {
            return Err(Error::SingularMetric { det: 0.0 });
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        det = &det * &a[col][col];
        let r = a[col][col].recip()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &r;
            inv[col][j] = &inv[col][j] * &r;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col].clone();
            if factor.coefficients().iter().all(|&c| c == 0.0) {
                continue;
            }
            for j in 0..n {
                let da = &factor * &a[col][j];
                a[row][j] -= &da;
                let di = &factor * &inv[col][j];
                inv[row][j] -= &di;
            }
        }
    }
    if det.value().abs() <= min_det {
        return Err(Error::SingularMetric { det: det.value().abs() });
    }
    Ok((inv, det))
}

/// Values of a jet matrix.
pub fn values(m: &JetMatrix) -> Vec<Vec<f64>> {
    m.iter().map(|row| row.iter().map(Jet::value).collect()).collect()
}
