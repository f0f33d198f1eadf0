//! Finite pieces of Choquet theory: least concave majorants on grids,
//! Carathéodory decompositions in polytopes, and probability measures on the
//! kernel family fitted to samples.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::ScalarFunction;
use crate::nnls::nnls;
use crate::representation::{default_lambda_grid, fit_measure, RadonMeasure01};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::usage(format!(
                "grid function needs equal lengths ≥ 2 (got {} and {})",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::usage("grid function values must be finite"));
        }
        if let Some(i) = (1..xs.len()).find(|&i| xs[i] <= xs[i - 1]) {
            return Err(Error::usage(format!("xs must be strictly increasing (index {i})")));
        }
        Ok(GridFunction { xs, ys })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.xs.iter().copied().zip(self.ys.iter().copied()).collect()
    }

    /// Same grid, new values.
    pub fn with_values(&self, ys: Vec<f64>) -> Result<Self> {
        Self::new(self.xs.clone(), ys)
    }

    /// Slope-based second differences; all ≤ 0 for a concave sequence.
    pub fn second_differences(&self) -> Vec<f64> {
        let slope = |i: usize| (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i]);
        (1..self.len() - 1).map(|i| slope(i) - slope(i - 1)).collect()
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Least concave majorant, sampled back on the same grid.
pub fn concave_envelope(g: &GridFunction) -> GridFunction {
    // upper hull by monotone chain: pop while the turn is not clockwise
    let pts = g.pairs();
    let mut hull: Vec<usize> = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        while hull.len() >= 2 && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) >= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    let mut ys = Vec::with_capacity(pts.len());
    for seg in hull.windows(2) {
        let (i, j) = (seg[0], seg[1]);
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[j];
        for k in i..j {
            let t = (pts[k].0 - x0) / (x1 - x0);
            let v = y0 + t * (y1 - y0);
            ys.push(v.max(pts[k].1));
        }
    }
    ys.push(pts[pts.len() - 1].1);
    GridFunction { xs: g.xs.clone(), ys }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl Polytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vertices.first().map(|v| v.len()).unwrap_or(0);
        let p = Polytope { dim, vertices };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() || self.dim == 0 {
            return Err(Error::usage("polytope needs at least one vertex of positive dimension"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.len() != self.dim {
                return Err(Error::usage(format!("vertex {i} has {} coordinates, expected {}", v.len(), self.dim)));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::usage(format!("vertex {i} has a non-finite coordinate")));
            }
        }
        Ok(())
    }

    /// Columns `(vᵢ, 1)`.
    fn lifted(&self, idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim + 1, idx.len(), |r, c| {
            if r < self.dim {
                self.vertices[idx[c]][r]
            } else {
                1.0
            }
        })
    }

    pub fn combine(&self, weights: &[(usize, f64)]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, w) in weights {
            for (o, c) in out.iter_mut().zip(&self.vertices[i]) {
                *o += w * c;
            }
        }
        out
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Least-squares weights on `support` solving the lifted system exactly;
/// `None` if any comes out negative.
fn polish(p: &Polytope, x: &[f64], support: &[usize]) -> Option<Vec<f64>> {
    let l = p.lifted(support);
    let mut rhs = DVector::from_element(p.dim + 1, 1.0);
    for (r, v) in x.iter().enumerate() {
        rhs[r] = *v;
    }
    let svd = l.svd(true, true);
    let cutoff = 1e-13 * svd.singular_values.max();
    let w = svd.solve(&rhs, cutoff).ok()?;
    if w.iter().any(|&v| v < 0.0) {
        return None;
    }
    Some(w.iter().copied().collect())
}

/// Writes `x` as a convex combination of at most `d + 1` vertices.
///
/// Infeasible points yield [`Error::Infeasible`] carrying `(a, b)` with
/// `a·v ≤ b` for every vertex and `a·x > b`.
pub fn caratheodory_decompose(x: &[f64], p: &Polytope, tol: f64) -> Result<Vec<(usize, f64)>> {
    p.validate()?;
    if x.len() != p.dim {
        return Err(Error::usage(format!("point has {} coordinates, polytope has dimension {}", x.len(), p.dim)));
    }
    if x.iter().any(|c| !c.is_finite()) || !(tol > 0.0) {
        return Err(Error::usage("point must be finite and tol positive"));
    }
    let n = p.vertices.len();
    let all: Vec<usize> = (0..n).collect();
    let scale = p
        .vertices
        .iter()
        .flatten()
        .chain(x)
        .fold(1.0f64, |m, c| m.max(c.abs()));

    // projection onto the hull: NNLS with a heavily weighted Σw = 1 row
    let omega = 1e3 * scale;
    let mut a = p.lifted(&all);
    let mut b = DVector::from_element(p.dim + 1, omega);
    for c in 0..n {
        a[(p.dim, c)] = omega;
    }
    for (r, v) in x.iter().enumerate() {
        b[r] = *v;
    }
    let sol = nnls(&a, &b, 10 * n + 50)?;
    let total: f64 = sol.x.iter().sum();
    let mut w: Vec<f64> = sol.x.iter().map(|v| if total > 0.0 { v / total } else { *v }).collect();

    let weights: Vec<(usize, f64)> = (0..n).filter(|&i| w[i] > 0.0).map(|i| (i, w[i])).collect();
    let proj = p.combine(&weights);
    if distance(&proj, x) > tol {
        // the weighted row leaves Σw = 1 slightly loose; retry exactly on the support
        let support: Vec<usize> = weights.iter().map(|wi| wi.0).collect();
        let exact = polish(p, x, &support).filter(|ws| {
            let cand: Vec<(usize, f64)> = support.iter().copied().zip(ws.iter().copied()).collect();
            distance(&p.combine(&cand), x) <= tol
        });
        match exact {
            Some(ws) => {
                w.iter_mut().for_each(|v| *v = 0.0);
                for (&j, v) in support.iter().zip(ws) {
                    w[j] = v;
                }
            }
            None => {
                let normal: Vec<f64> = x.iter().zip(&proj).map(|(a, b)| a - b).collect();
                let dot = |v: &[f64]| normal.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
                let offset = p.vertices.iter().map(|v| dot(v)).fold(f64::NEG_INFINITY, f64::max);
                return Err(Error::Infeasible {
                    message: format!("point lies outside the convex hull (distance ≈ {:e})", distance(&proj, x)),
                    normal,
                    offset,
                });
            }
        }
    }

    let mut support: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
    while support.len() > p.dim + 1 {
        // d+2 lifted columns in d+1 rows always have a kernel; pad to square for a full SVD
        let active: Vec<usize> = support[..p.dim + 2].to_vec();
        let k = active.len();
        let l = p.lifted(&active).insert_row(p.dim + 1, 0.0);
        let svd = l.svd(false, true);
        let vt = svd.v_t.expect("right factor computed");
        let smallest = svd.singular_values.imin();
        let z: Vec<f64> = vt.row(smallest).iter().copied().collect();
        let ratio_test = |sign: f64| -> Option<(usize, f64)> {
            (0..k)
                .filter(|&i| sign * z[i] > 0.0)
                .map(|i| (i, w[active[i]] / (sign * z[i])))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        };
        let pick = match (ratio_test(1.0), ratio_test(-1.0)) {
            (Some(pos), Some(neg)) => {
                let (wp, wn) = (w[active[pos.0]], w[active[neg.0]]);
                if wp < wn || (wp == wn && active[pos.0] <= active[neg.0]) {
                    (1.0, pos)
                } else {
                    (-1.0, neg)
                }
            }
            (Some(pos), None) => (1.0, pos),
            (None, Some(neg)) => (-1.0, neg),
            (None, None) => {
                return Err(Error::numerical("null-space direction vanished", vec![("support", k as f64)]));
            }
        };
        let (sign, (hit, step)) = pick;
        for i in 0..k {
            let j = active[i];
            w[j] -= step * sign * z[i];
            if w[j] < 0.0 {
                w[j] = 0.0;
            }
        }
        w[active[hit]] = 0.0;
        support.retain(|&j| w[j] > 0.0);
    }

    if let Some(ws) = polish(p, x, &support) {
        let cand: Vec<(usize, f64)> = support.iter().copied().zip(ws).collect();
        let current: Vec<(usize, f64)> = support.iter().map(|&j| (j, w[j])).collect();
        if distance(&p.combine(&cand), x) <= distance(&p.combine(&current), x) {
            for (j, v) in cand {
                w[j] = v;
            }
        }
    }
    let total: f64 = support.iter().map(|&j| w[j]).sum();
    let out: Vec<(usize, f64)> = support.iter().map(|&j| (j, w[j] / total)).filter(|e| e.1 > 0.0).collect();
    let err = distance(&p.combine(&out), x);
    if err > tol {
        return Err(Error::numerical(
            "decomposition lost accuracy during support reduction",
            vec![("reconstruction_error", err), ("tol", tol)],
        ));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChoquetDecomposition {
    pub measure: RadonMeasure01,
    pub residual: f64,
}

/// Probability measure on the kernels `t/(λ + (1−λ)t)` reproducing samples
/// of a normalised `f` (`f(1) = 1`), on a 200-point grid.
pub fn discrete_choquet_demo(f: &ScalarFunction, ts: &[f64]) -> Result<ChoquetDecomposition> {
    discrete_choquet_demo_on(f, ts, &default_lambda_grid(200))
}

pub fn discrete_choquet_demo_on(f: &ScalarFunction, ts: &[f64], grid: &[f64]) -> Result<ChoquetDecomposition> {
    let at_one = f.eval(1.0);
    if (at_one - 1.0).abs() > 1e-10 {
        return Err(Error::usage(format!("{} is not normalised: f(1) = {at_one}", f.name())));
    }
    let samples: Vec<(f64, f64)> = ts.iter().map(|&t| (t, f.eval(t))).collect();
    let fit = fit_measure(&samples, grid, Some(1.0))?;
    Ok(ChoquetDecomposition { measure: fit.measure, residual: fit.residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func;
    use crate::hermitian::trial_rng;
    use crate::representation::log_spaced;
    use rand::Rng;

    fn grid(xs: &[f64], ys: &[f64]) -> GridFunction {
        GridFunction::new(xs.to_vec(), ys.to_vec()).unwrap()
    }

    fn random_grid<R: Rng>(rng: &mut R, n: usize) -> GridFunction {
        let mut x = 0.0;
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                x += rng.gen_range(0.05..1.0);
                x
            })
            .collect();
        let ys = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        GridFunction::new(xs, ys).unwrap()
    }

    #[test]
    fn envelope_examples() {
        let xs = [0.0, 0.5, 1.0];
        assert_eq!(concave_envelope(&grid(&xs, &[0.0, 1.0, 0.0])).ys(), &[0.0, 1.0, 0.0]);
        assert_eq!(concave_envelope(&grid(&xs, &[0.0, -1.0, 0.0])).ys(), &[0.0, 0.0, 0.0]);
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        assert_eq!(concave_envelope(&grid(&xs, &ys)).ys(), ys.as_slice());
    }

    #[test]
    fn grid_validation() {
        assert!(GridFunction::new(vec![0.0], vec![1.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn envelope_properties_on_random_grids() {
        let mut rng = trial_rng(50, 0);
        for _ in 0..100 {
            let n = rng.gen_range(2..40);
            let f = random_grid(&mut rng, n);
            let g = f.with_values((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let ef = concave_envelope(&f);
            let eg = concave_envelope(&g);
            assert!(ef.ys().iter().zip(f.ys()).all(|(e, y)| e >= y));
            assert!(ef.second_differences().iter().all(|d| *d <= 1e-12));
            let eef = concave_envelope(&ef);
            assert!(eef.ys().iter().zip(ef.ys()).all(|(a, b)| (a - b).abs() <= 1e-12));

            let sum = f.with_values(f.ys().iter().zip(g.ys()).map(|(a, b)| a + b).collect()).unwrap();
            let es = concave_envelope(&sum);
            for i in 0..n {
                assert!(es.ys()[i] <= ef.ys()[i] + eg.ys()[i] + 1e-12);
            }

            let alpha = rng.gen_range(0.0..3.0);
            let scaled = concave_envelope(&f.with_values(f.ys().iter().map(|y| alpha * y).collect()).unwrap());
            for i in 0..n {
                assert!((scaled.ys()[i] - alpha * ef.ys()[i]).abs() <= 1e-12);
            }

            let (c0, c1) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let aff = |x: f64| c0 + c1 * x;
            let shifted = concave_envelope(&f.with_values(f.xs().iter().zip(f.ys()).map(|(x, y)| y + aff(*x)).collect()).unwrap());
            for i in 0..n {
                assert!((shifted.ys()[i] - ef.ys()[i] - aff(f.xs()[i])).abs() <= 1e-12);
            }

            let upper = f.with_values(f.ys().iter().map(|y| y + rng.gen_range(0.0..0.5)).collect()).unwrap();
            let eu = concave_envelope(&upper);
            assert!(ef.ys().iter().zip(eu.ys()).all(|(a, b)| a <= b));
        }
    }

    fn check_contract(x: &[f64], p: &Polytope, w: &[(usize, f64)], tol: f64) {
        assert!(w.len() <= p.dim + 1, "support {} > d+1", w.len());
        assert!(w.iter().all(|e| e.1 >= 0.0));
        assert!((w.iter().map(|e| e.1).sum::<f64>() - 1.0).abs() <= 1e-12);
        assert!(distance(&p.combine(w), x) <= tol);
    }

    #[test]
    fn caratheodory_examples() {
        let tri = Polytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let w = caratheodory_decompose(&[1.0, 0.0], &tri, 1e-9).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0, 1);
        assert!((w[0].1 - 1.0).abs() < 1e-12);
        let w = caratheodory_decompose(&[1.0 / 3.0, 1.0 / 3.0], &tri, 1e-9).unwrap();
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(|e| (e.1 - 1.0 / 3.0).abs() < 1e-12));

        let square = Polytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let x = [0.3, 0.6];
        let w = caratheodory_decompose(&x, &square, 1e-9).unwrap();
        check_contract(&x, &square, &w, 1e-9);
    }

    #[test]
    fn infeasible_point_has_certificate() {
        let square = Polytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let x = [1.5, 0.5];
        match caratheodory_decompose(&x, &square, 1e-9) {
            Err(Error::Infeasible { normal, offset, .. }) => {
                let dot = |v: &[f64]| normal.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
                assert!(square.vertices.iter().all(|v| dot(v) <= offset + 1e-12));
                assert!(dot(&x) > offset);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn caratheodory_random_instances() {
        let mut rng = trial_rng(51, 0);
        for _ in 0..1000 {
            let d = rng.gen_range(1..=6);
            let m = rng.gen_range(1..=30);
            let verts: Vec<Vec<f64>> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let p = Polytope::new(verts).unwrap();
            // a random convex combination is an interior point (Minkowski check)
            let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0f64).powi(3)).collect();
            let s: f64 = raw.iter().sum();
            let comb: Vec<(usize, f64)> = raw.iter().enumerate().map(|(i, r)| (i, r / s)).collect();
            let x = p.combine(&comb);
            let w = caratheodory_decompose(&x, &p, 1e-9).unwrap();
            check_contract(&x, &p, &w, 1e-9);
        }
    }

    #[test]
    fn polytope_validation() {
        assert!(Polytope::new(vec![]).is_err());
        assert!(Polytope::new(vec![vec![0.0, 1.0], vec![1.0]]).is_err());
        let p = Polytope::new(vec![vec![0.0]]).unwrap();
        assert!(caratheodory_decompose(&[0.0, 0.0], &p, 1e-9).is_err());
    }

    #[test]
    fn choquet_demo_examples() {
        let ts = log_spaced(1e-3, 1e3, 100);
        let d = discrete_choquet_demo(&func::arithmetic(), &ts).unwrap();
        assert!((d.measure.atom_mass(0.0) - 0.5).abs() < 1e-8 && (d.measure.atom_mass(1.0) - 0.5).abs() < 1e-8);
        assert!((d.measure.total_mass() - 1.0).abs() < 1e-12);
        let d = discrete_choquet_demo(&func::identity(), &ts).unwrap();
        assert_eq!(d.measure.atoms.len(), 1);
        assert_eq!(d.measure.atoms[0].lambda, 1.0);
        let d = discrete_choquet_demo(&func::sqrt(), &ts).unwrap();
        assert!(d.residual <= 1e-6, "residual {}", d.residual);
        assert!((d.measure.total_mass() - 1.0).abs() < 1e-12);
        assert!(discrete_choquet_demo(&func::affine(2.0, 0.0), &ts).is_err());
    }
}
