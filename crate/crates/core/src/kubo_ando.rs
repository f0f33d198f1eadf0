//! Kubo–Ando connections built from positive measures on `[0, ∞]`:
//! `A σ B = αA + βB + Σ w·((1+s)/s)·(sA : B)`.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{ClaimedClass, ScalarFunction};
use crate::hermitian::{
    eigendecompose, is_psd, random_hermitian_with_spectrum, random_ordered_pair_with, random_unitary, trial_rng,
    HermitianMatrix, Interval,
};
use crate::quadrature::GaussLegendre;
use crate::representation::{fit_measure, AtomInf, MeasureInf};

/// Largest condition number accepted when inverting.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionSpec {
    /// Mass at `s = 0`: the coefficient of `A`.
    pub alpha: f64,
    /// Mass at `s = ∞`: the coefficient of `B`.
    pub beta: f64,
    #[serde(default)]
    pub interior: Vec<AtomInf>,
}

impl ConnectionSpec {
    pub fn new(alpha: f64, beta: f64, interior: Vec<AtomInf>) -> Result<Self> {
        MeasureInf::new(alpha, beta, interior.clone())?;
        Ok(ConnectionSpec { alpha, beta, interior })
    }

    pub fn arithmetic() -> Self {
        ConnectionSpec { alpha: 0.5, beta: 0.5, interior: Vec::new() }
    }

    pub fn harmonic() -> Self {
        ConnectionSpec { alpha: 0.0, beta: 0.0, interior: vec![AtomInf { s: 1.0, w: 1.0 }] }
    }

    /// `n`-node discretisation of the measure of `√x`: `s = tan²θ` with
    /// `θ` uniform on `(0, π/2)` at density `2/π`, Gauss–Legendre in `θ`.
    pub fn geometric_quadrature(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage("geometric quadrature needs at least one node"));
        }
        let rule = GaussLegendre::new(n);
        let interior = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| {
                let theta = FRAC_PI_2 * 0.5 * (x + 1.0);
                AtomInf { s: theta.tan().powi(2), w: 0.5 * w }
            })
            .collect();
        Ok(ConnectionSpec { alpha: 0.0, beta: 0.0, interior })
    }

    pub fn validate(&self) -> Result<()> {
        self.to_measure().map(|_| ())
    }

    pub fn to_measure(&self) -> Result<MeasureInf> {
        MeasureInf::new(self.alpha, self.beta, self.interior.clone())
    }

    pub fn total_mass(&self) -> f64 {
        self.alpha + self.beta + self.interior.iter().map(|a| a.w).sum::<f64>()
    }
}

impl TryFrom<MeasureInf> for ConnectionSpec {
    type Error = Error;

    fn try_from(m: MeasureInf) -> Result<Self> {
        ConnectionSpec::new(m.mass0, m.mass_inf, m.interior)
    }
}

/// Inverse through the spectrum, refusing non-PD or badly conditioned input.
fn pd_inverse(a: &HermitianMatrix, what: &str) -> Result<HermitianMatrix> {
    let dec = eigendecompose(a)?;
    let (lo, hi) = (dec.min_eigenvalue(), dec.max_eigenvalue());
    if !(lo > 0.0) {
        return Err(Error::usage(format!("{what} is not positive definite (λ_min = {lo:e})")));
    }
    if hi / lo > MAX_CONDITION {
        return Err(Error::numerical(
            format!("{what} is too ill-conditioned to invert"),
            vec![("lambda_min", lo), ("lambda_max", hi), ("condition", hi / lo)],
        ));
    }
    Ok(dec.map(|x| 1.0 / x))
}

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::usage(format!("dimension mismatch: {} vs {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// `(A⁻¹ + B⁻¹)⁻¹`.
pub fn parallel_sum(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    let ai = pd_inverse(a, "A")?;
    let bi = pd_inverse(b, "B")?;
    pd_inverse(&ai.add(&bi)?, "A⁻¹ + B⁻¹")
}

pub fn evaluate_connection(spec: &ConnectionSpec, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    spec.validate()?;
    same_dim(a, b)?;
    let ai = pd_inverse(a, "A")?;
    let bi = pd_inverse(b, "B")?;
    let mut out = a.scale(spec.alpha).add(&b.scale(spec.beta))?;
    for atom in &spec.interior {
        // ((1+s)/s)·(sA : B) = (1+s)·(A⁻¹ + s·B⁻¹)⁻¹
        let inner = pd_inverse(&ai.add(&bi.scale(atom.s))?, "A⁻¹ + sB⁻¹")?;
        out = out.add(&inner.scale(atom.w * (1.0 + atom.s)))?;
    }
    Ok(out)
}

/// `x ↦ α + βx + Σ w·x(1+s)/(x+s)`, the scalar trace of `1 σ x`.
pub fn representing_function(spec: &ConnectionSpec) -> Result<ScalarFunction> {
    spec.validate()?;
    let (alpha, beta) = (spec.alpha, spec.beta);
    let atoms: Vec<(f64, f64)> = spec.interior.iter().map(|a| (a.s, a.w)).collect();
    let (a1, a2) = (atoms.clone(), atoms.clone());
    Ok(ScalarFunction::new("connection", Interval::positive(), move |x| {
        alpha + beta * x + atoms.iter().map(|&(s, w)| w * x * (1.0 + s) / (x + s)).sum::<f64>()
    })
    .with_derivative(move |x| beta + a1.iter().map(|&(s, w)| w * s * (1.0 + s) / ((x + s) * (x + s))).sum::<f64>())
    .with_second_derivative(move |x| {
        a2.iter().map(|&(s, w)| -2.0 * w * s * (1.0 + s) / ((x + s) * (x + s) * (x + s))).sum::<f64>()
    })
    .with_claim(ClaimedClass::OperatorMonotone))
}

/// Checked pointwise evaluation of the representing function.
pub fn representing_value(spec: &ConnectionSpec, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::usage(format!("representing function needs x > 0, got {x}")));
    }
    Ok(representing_function(spec)?.eval(x))
}

#[derive(Debug, Clone)]
pub struct FittedConnection {
    pub spec: ConnectionSpec,
    /// Least-squares residual of the underlying measure fit.
    pub residual: f64,
}

/// Fits the measure of `f` on `grid ⊂ [0, 1]` from samples at `ts`, then
/// reads it as a connection: `λ = 0 → α`, `λ = 1 → β`, `λ → s = λ/(1−λ)`.
pub fn connection_from_function(f: &ScalarFunction, grid: &[f64], ts: &[f64]) -> Result<FittedConnection> {
    let samples: Vec<(f64, f64)> = ts.iter().map(|&t| (t, f.eval(t))).collect();
    let fit = fit_measure(&samples, grid, None)?;
    let (mut alpha, mut beta, mut interior) = (0.0, 0.0, Vec::new());
    for atom in &fit.measure.atoms {
        if atom.lambda == 0.0 {
            alpha += atom.w;
        } else if atom.lambda == 1.0 {
            beta += atom.w;
        } else {
            interior.push(AtomInf { s: atom.lambda / (1.0 - atom.lambda), w: atom.w });
        }
    }
    Ok(FittedConnection { spec: ConnectionSpec::new(alpha, beta, interior)?, residual: fit.residual })
}

fn pd_power(dec: &crate::hermitian::EigenDecomposition, p: f64, what: &str) -> Result<HermitianMatrix> {
    if !(dec.min_eigenvalue() > 0.0) {
        return Err(Error::usage(format!("{what} is not positive definite")));
    }
    Ok(dec.map(|x| x.powf(p)))
}

/// `A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`, used only as an oracle.
pub fn geometric_mean_closed_form(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    same_dim(a, b)?;
    let da = eigendecompose(a)?;
    let half = pd_power(&da, 0.5, "A")?;
    let neg_half = pd_power(&da, -0.5, "A")?;
    pd_power(&eigendecompose(b)?, 1.0, "B")?;
    let inner = b.congruence(neg_half.matrix())?;
    let root = pd_power(&eigendecompose(&inner)?, 0.5, "A^{-1/2} B A^{-1/2}")?;
    root.congruence(half.matrix())
}

/// Outcome of a randomized axiom check.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub trials: usize,
    /// Smallest relative eigenvalue of the residual that must be PSD.
    pub min_eig_seen: f64,
    /// Largest relative residual norm, where equality is expected.
    pub max_residual: f64,
    pub passed: bool,
}

fn relative_min_eig(m: &HermitianMatrix) -> Result<f64> {
    crate::hermitian::relative_min_eigenvalue(m)
}

/// `A ≤ C, B ≤ D ⇒ AσB ≤ CσD` on random ordered pairs with spectra in `(0.1, 10)`.
pub fn check_axiom_monotone(spec: &ConnectionSpec, n: usize, trials: usize, seed: u64, tol: f64) -> Result<AxiomCheck> {
    let iv = Interval::new(0.1, 10.0)?;
    let mut min_eig = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let dim = rng.gen_range(1..=n);
        let (a, c) = random_ordered_pair_with(&mut rng, dim, &iv)?;
        let (b, d) = random_ordered_pair_with(&mut rng, dim, &iv)?;
        let diff = evaluate_connection(spec, &c, &d)?.sub(&evaluate_connection(spec, &a, &b)?)?;
        min_eig = min_eig.min(relative_min_eig(&diff)?);
    }
    Ok(AxiomCheck { trials, min_eig_seen: min_eig, max_residual: 0.0, passed: min_eig >= -tol })
}

/// Random Hermitian invertible `C` with singular values in `[0.5, 2]` and mixed signs.
fn random_invertible_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianMatrix {
    let u = random_unitary(rng, n);
    let vals: Vec<f64> = (0..n)
        .map(|_| {
            let m = rng.gen_range(0.5..2.0);
            if rng.gen_bool(0.5) { m } else { -m }
        })
        .collect();
    HermitianMatrix::diag(&vals).congruence(&u).expect("square unitary")
}

/// Transformer inequality `C(AσB)C ≤ (CAC)σ(CBC)`; for invertible `C` the two
/// sides coincide, so the residual norm is reported as well.
pub fn check_axiom_transformer(spec: &ConnectionSpec, n: usize, trials: usize, seed: u64, tol: f64) -> Result<AxiomCheck> {
    let mut min_eig = f64::INFINITY;
    let mut max_res = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let dim = rng.gen_range(1..=n);
        let a = random_hermitian_with_spectrum(&mut rng, dim, 0.2, 5.0);
        let b = random_hermitian_with_spectrum(&mut rng, dim, 0.2, 5.0);
        let c = random_invertible_hermitian(&mut rng, dim);
        let cm = c.matrix();
        let lhs = evaluate_connection(spec, &a, &b)?.congruence(cm)?;
        let rhs = evaluate_connection(spec, &a.congruence(cm)?, &b.congruence(cm)?)?;
        let diff = rhs.sub(&lhs)?;
        min_eig = min_eig.min(relative_min_eig(&diff)?);
        max_res = max_res.max(diff.frobenius_norm() / lhs.frobenius_norm().max(1.0));
    }
    Ok(AxiomCheck { trials, min_eig_seen: min_eig, max_residual: max_res, passed: min_eig >= -tol })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityCheck {
    pub trials: usize,
    /// All consecutive differences `σ(Aₙ,Bₙ) − σ(Aₙ₊₁,Bₙ₊₁)` were PSD within tolerance.
    pub decreasing: bool,
    /// Largest `n·‖σ(Aₙ,Bₙ) − σ(A,B)‖ / C` over trials; at most 1 when the `C/n` bound holds.
    pub worst_bound_ratio: f64,
    pub passed: bool,
}

/// Downward continuity along `Aₙ = A + I/n`, `Bₙ = B + I/n` for `n = 1..=levels`.
///
/// The connection is jointly concave, so `ε ↦ ‖σ(A+εI, B+εI) − σ(A,B)‖` is
/// bounded by its slope at 0; `C` is 1.5 times a forward-difference estimate of it.
pub fn check_axiom_continuity(
    spec: &ConnectionSpec,
    n: usize,
    levels: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ContinuityCheck> {
    let mut decreasing = true;
    let mut worst = 0.0f64;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let dim = rng.gen_range(1..=n);
        let a = random_hermitian_with_spectrum(&mut rng, dim, 0.1, 5.0);
        let b = random_hermitian_with_spectrum(&mut rng, dim, 0.1, 5.0);
        let limit = evaluate_connection(spec, &a, &b)?;
        let at = |eps: f64| evaluate_connection(spec, &a.shift(eps), &b.shift(eps));
        let h = 1e-6;
        let slope = at(h)?.sub(&limit)?.frobenius_norm() / h;
        let bound = 1.5 * slope.max(f64::MIN_POSITIVE);
        let mut prev = at(1.0)?;
        for k in 1..=levels {
            let cur = if k == 1 { prev.clone() } else { at(1.0 / k as f64)? };
            if k > 1 && !is_psd(&prev.sub(&cur)?, tol)? {
                decreasing = false;
            }
            let err = cur.sub(&limit)?.frobenius_norm();
            worst = worst.max(k as f64 * err / bound);
            prev = cur;
        }
    }
    Ok(ContinuityCheck { trials, decreasing, worst_bound_ratio: worst, passed: decreasing && worst <= 1.0 })
}
