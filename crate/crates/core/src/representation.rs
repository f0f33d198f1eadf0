//! Integral representations of positive operator monotone functions on the
//! half-line: measures on `[0, 1]` against the kernels `t/(λ + (1−λ)t)`, and
//! measures on `[0, ∞]` against `x(1+s)/(x+s)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{ClaimedClass, ScalarFunction};
use crate::hermitian::Interval;
use crate::nnls::nnls;

/// Atoms below this weight are dropped from fitted measures.
pub const W_FLOOR: f64 = 1e-10;

/// `t / (λ + (1−λ)t)`.
pub fn kernel01(lambda: f64, t: f64) -> f64 {
    t / (lambda + (1.0 - lambda) * t)
}

fn kernel01_deriv(lambda: f64, t: f64) -> f64 {
    let d = lambda + (1.0 - lambda) * t;
    lambda / (d * d)
}

fn kernel01_deriv2(lambda: f64, t: f64) -> f64 {
    let d = lambda + (1.0 - lambda) * t;
    -2.0 * lambda * (1.0 - lambda) / (d * d * d)
}

/// A point of `[0, ∞]`; the endpoint at infinity is tagged, never `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfLinePoint {
    Finite(f64),
    Infinity,
}

/// `x(1+s)/(x+s)`, with the limit `x` at `s = ∞`.
pub fn kernel_inf(s: HalfLinePoint, x: f64) -> f64 {
    match s {
        HalfLinePoint::Finite(s) => x * (1.0 + s) / (x + s),
        HalfLinePoint::Infinity => x,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom01 {
    pub lambda: f64,
    pub w: f64,
}

/// A finite positive measure on `[0, 1]`: atoms plus an optional discretised
/// continuous part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadonMeasure01 {
    pub atoms: Vec<Atom01>,
    #[serde(default)]
    pub quad: Vec<Atom01>,
}

impl RadonMeasure01 {
    pub fn new(atoms: Vec<Atom01>, quad: Vec<Atom01>) -> Result<Self> {
        let m = RadonMeasure01 { atoms, quad };
        m.validate()?;
        Ok(m)
    }

    pub fn from_atoms(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(atoms.iter().map(|&(lambda, w)| Atom01 { lambda, w }).collect(), Vec::new())
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !(0.0..=1.0).contains(&a.lambda) || !(a.w > 0.0) || !a.w.is_finite() {
                return Err(Error::usage(format!("invalid atom (λ={}, w={})", a.lambda, a.w)));
            }
        }
        for q in &self.quad {
            if !(q.lambda > 0.0 && q.lambda < 1.0) || !(q.w > 0.0) || !q.w.is_finite() {
                return Err(Error::usage(format!("invalid quadrature node (λ={}, w={})", q.lambda, q.w)));
            }
        }
        let mut lambdas: Vec<f64> = self.atoms.iter().map(|a| a.lambda).collect();
        lambdas.sort_by(f64::total_cmp);
        if lambdas.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::usage("atoms must have pairwise distinct λ"));
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.points().map(|a| a.w).sum()
    }

    /// Mass of the atom at exactly `λ`.
    pub fn atom_mass(&self, lambda: f64) -> f64 {
        self.atoms.iter().filter(|a| a.lambda == lambda).map(|a| a.w).sum()
    }

    fn points(&self) -> impl Iterator<Item = &Atom01> {
        self.atoms.iter().chain(self.quad.iter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomInf {
    pub s: f64,
    pub w: f64,
}

/// A finite positive measure on `[0, ∞]` split into its endpoint masses and interior part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureInf {
    pub mass0: f64,
    #[serde(rename = "massInf")]
    pub mass_inf: f64,
    #[serde(default)]
    pub interior: Vec<AtomInf>,
}

impl MeasureInf {
    pub fn new(mass0: f64, mass_inf: f64, interior: Vec<AtomInf>) -> Result<Self> {
        let m = MeasureInf { mass0, mass_inf, interior };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass0 >= 0.0 && self.mass0.is_finite()) || !(self.mass_inf >= 0.0 && self.mass_inf.is_finite()) {
            return Err(Error::usage("endpoint masses must be finite and nonnegative"));
        }
        for a in &self.interior {
            if !(a.s > 0.0 && a.s.is_finite()) || !(a.w > 0.0 && a.w.is_finite()) {
                return Err(Error::usage(format!("invalid interior atom (s={}, w={})", a.s, a.w)));
            }
        }
        Ok(())
    }

    /// `m({0}) + x·m({∞}) + Σ w·x(1+s)/(x+s)`.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.mass0 * kernel_inf(HalfLinePoint::Finite(0.0), x)
            + self.mass_inf * kernel_inf(HalfLinePoint::Infinity, x)
            + self
                .interior
                .iter()
                .map(|a| a.w * kernel_inf(HalfLinePoint::Finite(a.s), x))
                .sum::<f64>()
    }
}

/// `f(t) = ∫ t/(λ + (1−λ)t) dμ(λ)`.
pub fn synthesize(mu: &RadonMeasure01) -> ScalarFunction {
    let pts: Vec<(f64, f64)> = mu.points().map(|a| (a.lambda, a.w)).collect();
    let (p1, p2) = (pts.clone(), pts.clone());
    ScalarFunction::new("synth", Interval::positive(), move |t| {
        pts.iter().map(|&(l, w)| w * kernel01(l, t)).sum()
    })
    .with_derivative(move |t| p1.iter().map(|&(l, w)| w * kernel01_deriv(l, t)).sum())
    .with_second_derivative(move |t| p2.iter().map(|&(l, w)| w * kernel01_deriv2(l, t)).sum())
    .with_claim(ClaimedClass::OperatorMonotone)
}

/// Pushforward under `λ = s/(1+s)`; `m({0})` and `m({∞})` become atoms at 0 and 1.
pub fn convert_measure(m: &MeasureInf) -> Result<RadonMeasure01> {
    m.validate()?;
    let mut atoms: Vec<Atom01> = Vec::new();
    let mut push = |lambda: f64, w: f64| {
        if w <= 0.0 {
            return;
        }
        match atoms.iter_mut().find(|a| a.lambda == lambda) {
            Some(a) => a.w += w,
            None => atoms.push(Atom01 { lambda, w }),
        }
    };
    push(0.0, m.mass0);
    for a in &m.interior {
        push(a.s / (1.0 + a.s), a.w);
    }
    push(1.0, m.mass_inf);
    RadonMeasure01::new(atoms, Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointMasses {
    pub m0: f64,
    pub m_inf: f64,
    /// Set when a tiny negative estimate was clamped to zero.
    pub clamped: bool,
}

/// Two-level Richardson extrapolation to `h → 0` from samples at `h, h/10, h/100`.
fn richardson(v1: f64, v2: f64, v3: f64) -> f64 {
    let a = (10.0 * v2 - v1) / 9.0;
    let b = (10.0 * v3 - v2) / 9.0;
    (100.0 * b - a) / 99.0
}

/// Estimates `f(0+)` and `lim f(t)/t` at infinity.
pub fn endpoint_masses(f: &ScalarFunction) -> EndpointMasses {
    let m0 = richardson(f.eval(1e-4), f.eval(1e-5), f.eval(1e-6));
    let slope = |t: f64| f.eval(t) / t;
    let m_inf = richardson(slope(1e4), slope(1e5), slope(1e6));
    let clamped = m0 < 0.0 || m_inf < 0.0;
    EndpointMasses { m0: m0.max(0.0), m_inf: m_inf.max(0.0), clamped }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub measure: RadonMeasure01,
    pub residual: f64,
    pub iterations: usize,
}

/// `{0, 1}` plus `n − 2` interior points `λ = s/(1+s)` with `s` log-spaced on `[1e-6, 1e6]`.
pub fn default_lambda_grid(n: usize) -> Vec<f64> {
    assert!(n >= 3, "grid needs at least three points");
    let k = n - 2;
    let mut out = vec![0.0];
    for i in 0..k {
        let e = if k == 1 { 0.0 } else { -6.0 + 12.0 * i as f64 / (k - 1) as f64 };
        let s = 10f64.powf(e);
        out.push(s / (1.0 + s));
    }
    out.push(1.0);
    out
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `min ‖Kw − f‖₂` over `w ≥ 0` (and `Σw = mass` when given) with
/// `K[j][i] = kernel01(λᵢ, tⱼ)`.
pub fn fit_measure(
    samples: &[(f64, f64)],
    grid: &[f64],
    mass_constraint: Option<f64>,
) -> Result<FitResult> {
    if samples.is_empty() || grid.is_empty() {
        return Err(Error::usage("fit_measure needs nonempty samples and grid"));
    }
    if let Some(&(t, v)) = samples.iter().find(|(t, v)| !(*t > 0.0 && t.is_finite() && *v > 0.0 && v.is_finite())) {
        return Err(Error::usage(format!("sample ({t}, {v}) must have t > 0 and f(t) > 0")));
    }
    if let Some(l) = grid.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::usage(format!("grid point {l} outside [0, 1]")));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::usage("grid points must be distinct"));
    }
    if let Some(m) = mass_constraint {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::usage(format!("mass constraint {m} must be positive")));
        }
    }

    let rows = samples.len();
    let cols = grid.len();
    let k = DMatrix::from_fn(rows, cols, |j, i| kernel01(grid[i], samples[j].0));
    let f = DVector::from_iterator(rows, samples.iter().map(|s| s.1));

    let sol = nnls_scaled(&k, &f, 5 * cols + 50)?;
    let mut w = sol.x;
    let mut iterations = sol.iterations;
    if let Some(mass) = mass_constraint {
        let support: Vec<usize> = (0..cols).filter(|&i| w[i] > W_FLOOR).collect();
        match constrained_on_support(&k, &f, &support, mass) {
            Some(ws) => {
                w.fill(0.0);
                for (&i, &v) in support.iter().zip(ws.iter()) {
                    w[i] = v;
                }
            }
            None => {
                // weighted equality row, then exact rescaling
                let omega = k.norm().max(1.0);
                let a = k.clone().insert_row(rows, omega);
                let b = f.clone().insert_row(rows, omega * mass);
                let sol = nnls_scaled(&a, &b, 5 * cols + 50)?;
                iterations += sol.iterations;
                let total: f64 = sol.x.iter().sum();
                w = if total > 0.0 { sol.x * (mass / total) } else { sol.x };
            }
        }
    }
    for wi in w.iter_mut() {
        if *wi <= W_FLOOR {
            *wi = 0.0;
        }
    }
    let residual = (&k * &w - &f).norm();
    let mut atoms: Vec<Atom01> = grid
        .iter()
        .zip(w.iter())
        .filter(|(_, wi)| **wi > 0.0)
        .map(|(&lambda, &w)| Atom01 { lambda, w })
        .collect();
    atoms.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(FitResult { measure: RadonMeasure01::new(atoms, Vec::new())?, residual, iterations })
}

/// NNLS on unit-norm columns, which keeps the solver's gradient test
/// meaningful across a grid whose kernels differ widely in size.
fn nnls_scaled(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> Result<crate::nnls::NnlsSolution> {
    let scale: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    let mut scaled = a.clone();
    for (mut c, s) in scaled.column_iter_mut().zip(&scale) {
        c /= *s;
    }
    let mut sol = nnls(&scaled, b, max_iter)?;
    for (x, s) in sol.x.iter_mut().zip(&scale) {
        *x /= s;
    }
    Ok(sol)
}

/// `min ‖K_S w − f‖` subject to `Σw = mass` on the columns `S`, via the null
/// space of `1ᵀ`. `None` unless every weight comes out positive.
fn constrained_on_support(k: &DMatrix<f64>, f: &DVector<f64>, support: &[usize], mass: f64) -> Option<DVector<f64>> {
    let p = support.len();
    if p == 0 {
        return None;
    }
    let ks = k.select_columns(support);
    let w0 = DVector::from_element(p, mass / p as f64);
    if p == 1 {
        return Some(w0);
    }
    // orthonormal basis of {y : Σy = 0} from the full SVD of 1ᵀ
    let ones = DMatrix::from_element(p, p, 1.0 / p as f64);
    let proj = DMatrix::identity(p, p) - ones;
    let svd = proj.svd(true, false);
    let u = svd.u?;
    let mut idx: Vec<usize> = (0..p).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let z = u.select_columns(&idx[..p - 1]);
    let kz = &ks * &z;
    let rhs = f - &ks * &w0;
    let cutoff = 1e-15 * kz.norm();
    let y = kz.svd(true, true).solve(&rhs, cutoff).ok()?;
    let w = w0 + z * y;
    let total: f64 = w.iter().sum();
    if w.iter().all(|&v| v > 0.0) {
        Some(w * (mass / total))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func;
    use crate::hermitian::trial_rng;
    use crate::lab::check_monotone_order_n;
    use rand::Rng;

    fn samples(f: &ScalarFunction, ts: &[f64]) -> Vec<(f64, f64)> {
        ts.iter().map(|&t| (t, f.eval(t))).collect()
    }

    #[test]
    fn kernel_values() {
        for t in [0.1, 1.0, 5.0] {
            assert_eq!(kernel01(0.0, t), 1.0);
            assert_eq!(kernel01(1.0, t), t);
            assert_eq!(kernel_inf(HalfLinePoint::Finite(0.0), t), 1.0);
            assert_eq!(kernel_inf(HalfLinePoint::Infinity, t), t);
            assert!((kernel_inf(HalfLinePoint::Finite(1.0), t) - 2.0 * t / (t + 1.0)).abs() < 1e-15);
        }
        assert_eq!(kernel01(0.5, 3.0), 1.5);
        for l in [0.0, 0.2, 0.7, 1.0] {
            assert_eq!(kernel01(l, 1.0), 1.0);
        }
    }

    #[test]
    fn conversion_kernel_identity() {
        let s_grid = log_spaced(1e-2, 1e2, 50);
        let t_grid = log_spaced(1e-2, 1e2, 50);
        for &s in &s_grid {
            for &t in &t_grid {
                let lhs = kernel_inf(HalfLinePoint::Finite(s), t);
                let rhs = kernel01(s / (1.0 + s), t);
                assert!((lhs - rhs).abs() <= 1e-14 * lhs.max(1.0), "s={s} t={t}");
            }
        }
    }

    #[test]
    fn synthesize_examples() {
        let grid = log_spaced(1e-2, 1e2, 30);
        let f = synthesize(&RadonMeasure01::from_atoms(&[(1.0, 1.0)]).unwrap());
        assert!(grid.iter().all(|&t| (f.eval(t) - t).abs() < 1e-15 * t.max(1.0)));
        let f = synthesize(&RadonMeasure01::from_atoms(&[(0.0, 0.5), (1.0, 0.5)]).unwrap());
        assert!(grid.iter().all(|&t| (f.eval(t) - 0.5 * (1.0 + t)).abs() < 1e-14 * t.max(1.0)));
        let f = synthesize(&RadonMeasure01::from_atoms(&[(0.5, 1.0)]).unwrap());
        assert!(grid.iter().all(|&t| (f.eval(t) - 2.0 * t / (1.0 + t)).abs() < 1e-15));
    }

    #[test]
    fn measure_validation() {
        assert!(RadonMeasure01::from_atoms(&[(1.5, 1.0)]).is_err());
        assert!(RadonMeasure01::from_atoms(&[(0.5, 0.0)]).is_err());
        assert!(RadonMeasure01::from_atoms(&[(0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(MeasureInf::new(-1.0, 0.0, vec![]).is_err());
        assert!(MeasureInf::new(0.0, 0.0, vec![AtomInf { s: 0.0, w: 1.0 }]).is_err());
    }

    #[test]
    fn normalisation_is_total_mass() {
        let mut rng = trial_rng(21, 0);
        for _ in 0..50 {
            let k = rng.gen_range(1..=8);
            let atoms: Vec<(f64, f64)> = (0..k).map(|i| ((i as f64 + rng.gen_range(0.0..1.0)) / k as f64, rng.gen_range(0.1..2.0))).collect();
            let mu = RadonMeasure01::from_atoms(&atoms).unwrap();
            let f = synthesize(&mu);
            assert!((f.eval(1.0) - mu.total_mass()).abs() <= 4.0 * f64::EPSILON * mu.total_mass());
        }
    }

    #[test]
    fn synthesized_functions_are_monotone() {
        let mut rng = trial_rng(22, 0);
        for trial in 0..5 {
            let k = rng.gen_range(1..=8);
            let atoms: Vec<(f64, f64)> = (0..k).map(|i| ((i as f64 + rng.gen_range(0.0..1.0)) / k as f64, rng.gen_range(0.1..2.0))).collect();
            let f = synthesize(&RadonMeasure01::from_atoms(&atoms).unwrap());
            let v = check_monotone_order_n(&f, 4, Interval::new(0.1, 10.0).unwrap(), 100, trial).unwrap();
            assert!(v.passed());
        }
    }

    #[test]
    fn conversion_examples() {
        let m = MeasureInf::new(0.0, 0.0, vec![AtomInf { s: 1.0, w: 1.0 }]).unwrap();
        let mu = convert_measure(&m).unwrap();
        assert_eq!(mu.atoms, vec![Atom01 { lambda: 0.5, w: 1.0 }]);
        let f = synthesize(&mu);
        for t in log_spaced(1e-2, 1e2, 20) {
            assert!((f.eval(t) - m.evaluate(t)).abs() <= 1e-12 * t.max(1.0));
            assert!((f.eval(t) - 2.0 * t / (1.0 + t)).abs() <= 1e-12);
        }
        let mu = convert_measure(&MeasureInf::new(1.0, 0.0, vec![]).unwrap()).unwrap();
        assert_eq!(mu.atoms, vec![Atom01 { lambda: 0.0, w: 1.0 }]);
        let mu = convert_measure(&MeasureInf::new(0.0, 1.0, vec![]).unwrap()).unwrap();
        assert_eq!(mu.atoms, vec![Atom01 { lambda: 1.0, w: 1.0 }]);
    }

    #[test]
    fn endpoint_examples() {
        let e = endpoint_masses(&func::arithmetic());
        assert!((e.m0 - 0.5).abs() < 1e-10 && (e.m_inf - 0.5).abs() < 1e-10);
        let e = endpoint_masses(&func::identity());
        assert!(e.m0.abs() < 1e-12 && (e.m_inf - 1.0).abs() < 1e-12);
        let e = endpoint_masses(&func::harmonic_rep());
        assert!(e.m0.abs() < 1e-8 && e.m_inf.abs() < 1e-8);
    }

    #[test]
    fn endpoint_consistency_for_atom_measures() {
        let mut rng = trial_rng(23, 0);
        for _ in 0..20 {
            let mut atoms = vec![(0.0, rng.gen_range(0.1..1.0)), (1.0, rng.gen_range(0.1..1.0))];
            atoms.push((rng.gen_range(0.05..0.95), rng.gen_range(0.1..1.0)));
            let mu = RadonMeasure01::from_atoms(&atoms).unwrap();
            let e = endpoint_masses(&synthesize(&mu));
            assert!((e.m0 - mu.atom_mass(0.0)).abs() <= 1e-4);
            assert!((e.m_inf - mu.atom_mass(1.0)).abs() <= 1e-4);
        }
    }

    #[test]
    fn fit_round_trip_arithmetic() {
        let f = func::arithmetic();
        let ts = log_spaced(1e-3, 1e3, 50);
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let fit = fit_measure(&samples(&f, &ts), &grid, None).unwrap();
        assert!((fit.measure.atom_mass(0.0) - 0.5).abs() <= 1e-8);
        assert!((fit.measure.atom_mass(1.0) - 0.5).abs() <= 1e-8);
        assert!((fit.measure.total_mass() - 1.0).abs() <= 1e-8);
        assert!(fit.residual <= 1e-10);
    }

    #[test]
    fn fit_identity_single_atom() {
        let ts = log_spaced(1e-2, 1e2, 30);
        let fit = fit_measure(&samples(&func::identity(), &ts), &default_lambda_grid(40), None).unwrap();
        assert_eq!(fit.measure.atoms.len(), 1);
        assert_eq!(fit.measure.atoms[0].lambda, 1.0);
        assert!((fit.measure.atoms[0].w - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn fit_sqrt() {
        let f = func::sqrt();
        let ts = log_spaced(1e-3, 1e3, 100);
        let fit = fit_measure(&samples(&f, &ts), &default_lambda_grid(200), None).unwrap();
        assert!(fit.residual <= 1e-6, "residual {}", fit.residual);
        let g = synthesize(&fit.measure);
        let sup = log_spaced(1e-3, 1e3, 2000)
            .into_iter()
            .map(|t| (g.eval(t) - f.eval(t)).abs())
            .fold(0.0, f64::max);
        assert!(sup <= 1e-5, "sup {sup}");
    }

    #[test]
    fn fit_with_mass_constraint() {
        let f = func::power(0.75);
        let ts = log_spaced(1e-2, 1e2, 60);
        let fit = fit_measure(&samples(&f, &ts), &default_lambda_grid(80), Some(1.0)).unwrap();
        assert!((fit.measure.total_mass() - 1.0).abs() <= 1e-12);
        assert!(fit.residual <= 1e-6, "residual {}", fit.residual);
    }

    #[test]
    fn fit_idempotent_on_grid_measures() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let mut rng = trial_rng(24, 0);
        for _ in 0..10 {
            let picks: Vec<usize> = {
                let mut v: Vec<usize> = (0..4).map(|_| rng.gen_range(0..grid.len())).collect();
                v.sort();
                v.dedup();
                v
            };
            let atoms: Vec<(f64, f64)> = picks.iter().map(|&i| (grid[i], rng.gen_range(0.2..1.0))).collect();
            let mu = RadonMeasure01::from_atoms(&atoms).unwrap();
            let f = synthesize(&mu);
            let ts = log_spaced(1e-3, 1e3, 80);
            let fit = fit_measure(&samples(&f, &ts), &grid, None).unwrap();
            for &(l, w) in &atoms {
                assert!((fit.measure.atom_mass(l) - w).abs() <= 1e-8, "λ={l}: {} vs {w}", fit.measure.atom_mass(l));
            }
            assert!((fit.measure.total_mass() - mu.total_mass()).abs() <= 1e-8);
        }
    }

    #[test]
    fn fit_input_validation() {
        let s = vec![(1.0, 1.0)];
        assert!(fit_measure(&[], &[0.5], None).is_err());
        assert!(fit_measure(&s, &[], None).is_err());
        assert!(fit_measure(&[(-1.0, 1.0)], &[0.5], None).is_err());
        assert!(fit_measure(&s, &[0.5, 0.5], None).is_err());
        assert!(fit_measure(&s, &[1.5], None).is_err());
        assert!(fit_measure(&s, &[0.5], Some(-1.0)).is_err());
    }

    #[test]
    fn measure_json_shapes() {
        let m: RadonMeasure01 = serde_json::from_str(r#"{"atoms":[{"lambda":0.5,"w":1.0}]}"#).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert!(m.quad.is_empty());
        let m: MeasureInf = serde_json::from_str(r#"{"mass0":0.5,"massInf":0.25,"interior":[{"s":2.0,"w":1.0}]}"#).unwrap();
        assert_eq!(m.mass_inf, 0.25);
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"massInf\""));
    }
}
