//! Functional calculus `f(A)` and derivatives of `t ↦ f(γ(t))` via divided
//! differences of the eigenvalues (Daleckii–Krein).

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::divided::{dd1, dd2};
use crate::error::{Error, Result};
use crate::func::ScalarFunction;
use crate::hermitian::{eigendecompose, EigenDecomposition, HermitianMatrix};

type PathFn = Arc<dyn Fn(f64) -> HermitianMatrix + Send + Sync>;

/// A path of Hermitian matrices with analytic first and second derivatives.
#[derive(Clone)]
pub struct MatrixPath {
    value: PathFn,
    first: PathFn,
    second: PathFn,
}

impl MatrixPath {
    pub fn new<V, D1, D2>(value: V, first: D1, second: D2) -> Self
    where
        V: Fn(f64) -> HermitianMatrix + Send + Sync + 'static,
        D1: Fn(f64) -> HermitianMatrix + Send + Sync + 'static,
        D2: Fn(f64) -> HermitianMatrix + Send + Sync + 'static,
    {
        MatrixPath { value: Arc::new(value), first: Arc::new(first), second: Arc::new(second) }
    }

    /// `A + tH`.
    pub fn affine(a: HermitianMatrix, h: HermitianMatrix) -> Result<Self> {
        if a.dim() != h.dim() {
            return Err(Error::usage("affine path: dimension mismatch"));
        }
        let n = a.dim();
        let h2 = h.clone();
        Ok(MatrixPath::new(
            move |t| a.add(&h.scale(t)).expect("same dimension"),
            move |_| h2.clone(),
            move |_| HermitianMatrix::zeros(n),
        ))
    }

    pub fn at(&self, t: f64) -> HermitianMatrix {
        (self.value)(t)
    }

    pub fn first_derivative(&self, t: f64) -> HermitianMatrix {
        (self.first)(t)
    }

    pub fn second_derivative(&self, t: f64) -> HermitianMatrix {
        (self.second)(t)
    }
}

fn decompose_in_domain(f: &ScalarFunction, a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let dec = eigendecompose(a)?;
    let dom = f.domain();
    if let Some(bad) = dec.eigenvalues.iter().find(|l| !dom.contains(**l)) {
        return Err(Error::usage(format!(
            "eigenvalue {bad} is outside the domain {dom} of {}",
            f.name()
        )));
    }
    Ok(dec)
}

fn divided_difference_matrix(f: &ScalarFunction, lambda: &[f64]) -> DMatrix<Complex64> {
    let n = lambda.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = Complex64::new(dd1(f, lambda[i], lambda[j]), 0.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `f(A) = U diag(f(λ)) U*`.
pub fn apply_function(f: &ScalarFunction, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = decompose_in_domain(f, a)?;
    Ok(dec.map(|x| f.eval(x)))
}

/// `d/dt f(γ(t)) = U ([Δf(λᵢ,λⱼ)] ∘ U*γ′U) U*`.
pub fn path_derivative(f: &ScalarFunction, path: &MatrixPath, t: f64) -> Result<HermitianMatrix> {
    let g = path.at(t);
    let dg = path.first_derivative(t);
    derivative_at(f, &g, &dg)
}

fn derivative_at(f: &ScalarFunction, a: &HermitianMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim() != h.dim() {
        return Err(Error::usage("direction has the wrong dimension"));
    }
    let dec = decompose_in_domain(f, a)?;
    let rotated = dec.rotate_in(h.matrix());
    let d1 = divided_difference_matrix(f, &dec.eigenvalues);
    Ok(HermitianMatrix::from_nearly_hermitian(dec.rotate_out(&d1.component_mul(&rotated))))
}

/// `d²/dt² f(γ(t)) = U (2 Σₖ [Δ²f(λᵢ,λⱼ,λₖ)] ∘ cₖcₖ* + [Δf] ∘ U*γ″U) U*`,
/// where `cₖ` is the k-th column of `M = U*γ′U`.
pub fn path_second_derivative(
    f: &ScalarFunction,
    path: &MatrixPath,
    t: f64,
) -> Result<HermitianMatrix> {
    let g = path.at(t);
    let dg = path.first_derivative(t);
    let ddg = path.second_derivative(t);
    if dg.dim() != g.dim() || ddg.dim() != g.dim() {
        return Err(Error::usage("path derivatives have the wrong dimension"));
    }
    let dec = decompose_in_domain(f, &g)?;
    let lam = &dec.eigenvalues;
    let n = lam.len();
    let m = dec.rotate_in(dg.matrix());
    let m2 = dec.rotate_in(ddg.matrix());
    let d1 = divided_difference_matrix(f, lam);

    let mut inner = d1.component_mul(&m2);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                // (cₖcₖ*)ᵢⱼ = M[i,k]·conj(M[j,k])
                acc += m[(i, k)] * m[(j, k)].conj() * dd2(f, lam[i], lam[j], lam[k]);
            }
            inner[(i, j)] += acc * 2.0;
        }
    }
    Ok(HermitianMatrix::from_nearly_hermitian(dec.rotate_out(&inner)))
}

/// Directional derivative of `f` at `A` along `H`.
pub fn frechet_derivative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    h: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    derivative_at(f, a, h)
}
