//! Central finite differences, used only as an independent cross-check of the
//! jet arithmetic.

use crate::error::Result;
use crate::jets::{ChartPoint, ScalarField};

/// Relative step for first and second derivatives.
pub const FD_STEP: f64 = 1e-4;
/// Relative step for third derivatives (second-order stencil).
pub const FD_STEP_THIRD: f64 = 1e-3;

/// One-dimensional stencil: `(offset in steps, weight)`, divided by `h^k` afterwards.
fn stencil(k: usize, high_accuracy: bool) -> &'static [(i32, f64)] {
    match (k, high_accuracy) {
        (1, true) => &[(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)],
        (2, true) => &[
            (-2, -1.0 / 12.0),
            (-1, 16.0 / 12.0),
            (0, -30.0 / 12.0),
            (1, 16.0 / 12.0),
            (2, -1.0 / 12.0),
        ],
        (1, false) => &[(-1, -0.5), (1, 0.5)],
        (2, false) => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        (3, _) => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => panic!("finite-difference stencil for order {k} not available"),
    }
}

/// Partial derivative of `f` at `x` along the listed coordinates (e.g. `&[0, 2]`
/// for ∂₀∂₂), as a tensor product of one-dimensional central stencils:
/// fourth-order accurate when the total order is at most two, second-order for
/// third derivatives.
pub fn fd_derivative<F>(mut f: F, x: &[f64], vars: &[usize]) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if vars.is_empty() {
        return f(x);
    }
    let total = vars.len();
    let high = total <= 2;
    let rel = if total <= 2 { FD_STEP } else { FD_STEP_THIRD };

    let mut counts = vec![0usize; x.len()];
    for &v in vars {
        counts[v] += 1;
    }
    let axes: Vec<(usize, usize, f64)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| (i, k, rel * x[i].abs().max(1.0)))
        .collect();

    let mut sum = 0.0;
    let mut idx = vec![0usize; axes.len()];
    let mut probe = x.to_vec();
    'outer: loop {
        let mut weight = 1.0;
        probe.copy_from_slice(x);
        for (a, &(axis, k, h)) in axes.iter().enumerate() {
            let (off, w) = stencil(k, high)[idx[a]];
            weight *= w / h.powi(k as i32);
            probe[axis] += off as f64 * h;
        }
        sum += weight * f(&probe)?;

        for a in 0..axes.len() {
            idx[a] += 1;
            if idx[a] < stencil(axes[a].1, high).len() {
                continue 'outer;
            }
            idx[a] = 0;
        }
        break;
    }
    Ok(sum)
}

/// Finite-difference estimate of a partial derivative of a jet-evaluable field.
pub fn fd_oracle(field: &ScalarField, point: &ChartPoint, vars: &[usize]) -> Result<f64> {
    fd_derivative(|c| field.value(&point.moved(c)), point.coords(), vars)
}
