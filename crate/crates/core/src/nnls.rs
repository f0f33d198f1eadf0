//! Lawson–Hanson active-set nonnegative least squares.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    /// `‖Ax − b‖₂`.
    pub residual: f64,
    pub iterations: usize,
}

fn solve_subset(a: &DMatrix<f64>, b: &DVector<f64>, cols: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(cols);
    let svd = sub.svd(true, true);
    let cutoff = 1e-15 * svd.singular_values.max();
    svd.solve(b, cutoff).expect("both factors computed")
}

/// `min ‖Ax − b‖₂` subject to `x ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> Result<NnlsSolution> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 || b.len() != m {
        return Err(Error::usage(format!("nnls: bad dimensions {m}x{n}, rhs {}", b.len())));
    }
    let tol = 0.1 * f64::EPSILON * a.norm() * b.norm().max(1.0);
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let mut blocked = vec![false; n];
    let mut iterations = 0;
    let progress = f64::EPSILON * b.norm();
    let mut residual = b.norm();

    loop {
        let grad = a.transpose() * (b - a * &x);
        let candidate = (0..n)
            .filter(|&j| !passive[j] && !blocked[j])
            .max_by(|&i, &j| grad[i].total_cmp(&grad[j]).then(j.cmp(&i)));
        let Some(t) = candidate.filter(|&j| grad[j] > tol) else { break };

        iterations += 1;
        if iterations > max_iter {
            return Err(Error::numerical(
                "nnls did not converge",
                vec![
                    ("iterations", iterations as f64),
                    ("max_gradient", grad[t]),
                    ("residual", (a * &x - b).norm()),
                    ("passive_set_size", passive.iter().filter(|p| **p).count() as f64),
                ],
            ));
        }
        let (x_prev, passive_prev) = (x.clone(), passive.clone());
        passive[t] = true;

        let mut first = true;
        loop {
            let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let z_sub = solve_subset(a, b, &cols);
            let mut z = DVector::zeros(n);
            for (k, &j) in cols.iter().enumerate() {
                z[j] = z_sub[k];
            }
            if cols.iter().all(|&j| z[j] > 0.0) {
                x = z;
                blocked.iter_mut().for_each(|bl| *bl = false);
                break;
            }
            if first && z[t] <= 0.0 {
                // the new column cannot enter with a positive coefficient
                passive[t] = false;
                blocked[t] = true;
                break;
            }
            first = false;
            // step from x toward z until the first passive coefficient hits zero
            let (mut alpha, mut hit) = (1.0f64, None);
            for &j in &cols {
                if z[j] <= 0.0 {
                    let ratio = x[j] / (x[j] - z[j]);
                    if ratio < alpha {
                        alpha = ratio;
                        hit = Some(j);
                    }
                }
            }
            x += (z - &x) * alpha;
            if let Some(j) = hit {
                x[j] = 0.0;
            }
            for &j in &cols {
                if x[j] <= 0.0 {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
        let r = (a * &x - b).norm();
        if r > residual - progress {
            // rounding-level changes only; keep the previous iterate
            x = x_prev;
            passive = passive_prev;
            if blocked[t] {
                continue;
            }
            break;
        }
        residual = r;
    }
    let residual = (a * &x - b).norm();
    Ok(NnlsSolution { x, residual, iterations })
}
