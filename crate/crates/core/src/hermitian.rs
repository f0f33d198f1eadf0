//! Hermitian matrices, their spectral decomposition, and the Löwner order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Default relative PSD tolerance.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Relative residual accepted from the eigensolver before it is reported as
/// a numerical failure.
const EIG_GUARD: f64 = 1e-8;

/// Open interval `(lo, hi)`; `hi` may be `f64::INFINITY` for a half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || !(lo < hi) {
            return Err(Error::usage(format!("invalid interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    /// The positive half-line `(0, ∞)`.
    pub fn positive() -> Self {
        Interval { lo: 0.0, hi: f64::INFINITY }
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Strict membership.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// True if `other` lies inside `self` (closure allowed to touch).
    pub fn covers(&self, other: &Interval) -> bool {
        other.lo >= self.lo && other.hi <= self.hi
    }

    /// Shrinks both ends by `margin`.
    pub fn shrink(&self, margin: f64) -> Result<Interval> {
        Interval::new(self.lo + margin, self.hi - margin)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// A finite Hermitian matrix with exactly conjugate-symmetric entries.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates squareness, finiteness and exact conjugate symmetry.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::usage(format!(
                "matrix must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for j in 0..n {
            for i in 0..n {
                let z = entries[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::usage(format!("non-finite entry at ({i}, {j})")));
                }
                if z != entries[(j, i)].conj() {
                    return Err(Error::usage(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(HermitianMatrix { entries })
    }

    /// Hermitian part `(M + M*)/2`, made exactly conjugate-symmetric.
    pub fn from_nearly_hermitian(m: DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        assert_eq!(n, m.ncols(), "square matrix required");
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            out[(j, j)] = Complex64::new(m[(j, j)].re, 0.0);
            for i in (j + 1)..n {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        HermitianMatrix { entries: out }
    }

    /// Real symmetric matrix from row-major data.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::usage("real matrix rows must all have length n"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(m)
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix { entries: DMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { entries: DMatrix::zeros(n, n) }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        HermitianMatrix { entries: m }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// True if every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    fn check_dim(&self, other: &HermitianMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::usage(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(HermitianMatrix { entries: &self.entries + &other.entries })
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(HermitianMatrix { entries: &self.entries - &other.entries })
    }

    pub fn scale(&self, c: f64) -> HermitianMatrix {
        HermitianMatrix { entries: &self.entries * Complex64::new(c, 0.0) }
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> HermitianMatrix {
        let mut m = self.entries.clone();
        for i in 0..self.dim() {
            m[(i, i)] += Complex64::new(c, 0.0);
        }
        HermitianMatrix { entries: m }
    }

    /// Entrywise (Schur) product.
    pub fn schur(&self, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(other)?;
        Ok(HermitianMatrix { entries: self.entries.component_mul(&other.entries) })
    }

    /// Congruence `C · self · C*`.
    pub fn congruence(&self, c: &DMatrix<Complex64>) -> Result<HermitianMatrix> {
        if c.ncols() != self.dim() {
            return Err(Error::usage("congruence: dimension mismatch"));
        }
        Ok(Self::from_nearly_hermitian(c * &self.entries * c.adjoint()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Spectral form `A = U diag(λ) U*` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub unitary: DMatrix<Complex64>,
    pub eigenvalues: Vec<f64>,
}

impl EigenDecomposition {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Spectral norm `max |λ|`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()))
    }

    /// `U diag(g(λ)) U*`.
    pub fn map<F: Fn(f64) -> f64>(&self, g: F) -> HermitianMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.unitary.clone();
        for (j, lam) in self.eigenvalues.iter().enumerate() {
            let v = Complex64::new(g(*lam), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        HermitianMatrix::from_nearly_hermitian(scaled * self.unitary.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.map(|x| x)
    }

    /// `U* M U`.
    pub fn rotate_in(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        self.unitary.adjoint() * m * &self.unitary
    }

    /// `U M U*`.
    pub fn rotate_out(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        &self.unitary * m * self.unitary.adjoint()
    }

    pub fn reconstruction_residual(&self, a: &HermitianMatrix) -> f64 {
        (self.reconstruct().entries - &a.entries)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn unitarity_residual(&self) -> f64 {
        let n = self.eigenvalues.len();
        let g = self.unitary.adjoint() * &self.unitary - DMatrix::<Complex64>::identity(n, n);
        g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Spectral decomposition with eigenvalues sorted ascending.
pub fn eigendecompose(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let norm = a.frobenius_norm();
    let m = faer::Mat::<Complex64>::from_fn(n, n, |i, j| a.entries[(i, j)]);
    let eig = m.self_adjoint_eigen(faer::Side::Lower).map_err(|e| {
        Error::numerical(
            format!("eigensolver did not converge: {e:?}"),
            vec![("dim", n as f64), ("frobenius_norm", norm)],
        )
    })?;
    // faer returns eigenvalues in nondecreasing order
    let values = eig.S().column_vector();
    let eigenvalues: Vec<f64> = (0..n).map(|i| values[i].re).collect();
    let u = eig.U();
    let unitary = DMatrix::from_fn(n, n, |i, j| u[(i, j)]);
    let dec = EigenDecomposition { unitary, eigenvalues };

    let recon = dec.reconstruction_residual(a);
    let unit = dec.unitarity_residual();
    if !(recon <= EIG_GUARD * norm.max(f64::MIN_POSITIVE)) || !(unit <= EIG_GUARD) {
        return Err(Error::numerical(
            "eigendecomposition residual too large",
            vec![
                ("reconstruction_residual", recon),
                ("unitarity_residual", unit),
                ("frobenius_norm", norm),
            ],
        ));
    }
    Ok(dec)
}

/// `λ_min(A) / max(1, ‖A‖)`: the quantity compared against `-tol` by [`is_psd`].
pub fn relative_min_eigenvalue(a: &HermitianMatrix) -> Result<f64> {
    let dec = eigendecompose(a)?;
    Ok(dec.min_eigenvalue() / dec.spectral_norm().max(1.0))
}

/// PSD test with relative tolerance: `λ_min ≥ −tol·max(1, ‖A‖)`.
pub fn is_psd(a: &HermitianMatrix, tol: f64) -> Result<bool> {
    Ok(relative_min_eigenvalue(a)? >= -tol)
}

/// `A ≤ B` in the Löwner order.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    is_psd(&b.sub(a)?, tol)
}

/// True iff every eigenvalue lies strictly inside `iv`.
pub fn spectrum_in(a: &HermitianMatrix, iv: &Interval) -> Result<bool> {
    let dec = eigendecompose(a)?;
    Ok(dec.eigenvalues.iter().all(|&l| iv.contains(l)))
}

/// Deterministic generator for trial `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // fix column phases so the distribution does not depend on the QR sign convention
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random Hermitian matrix with spectrum drawn uniformly from `[lo, hi]`.
pub fn random_hermitian_with_spectrum<R: Rng>(
    rng: &mut R,
    n: usize,
    lo: f64,
    hi: f64,
) -> HermitianMatrix {
    let u = random_unitary(rng, n);
    let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let d = HermitianMatrix::diag(&vals);
    d.congruence(&u).expect("square unitary")
}

/// Random Hermitian matrix with entries of unit scale (no spectral constraint).
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> HermitianMatrix {
    let g = gaussian_matrix(rng, n, n);
    HermitianMatrix::from_nearly_hermitian((&g + g.adjoint()) * Complex64::new(0.5, 0.0))
}

const ORDERED_PAIR_RETRIES: usize = 64;

/// Seeded pair `A ≤ B` with both spectra strictly inside the bounded interval `iv`.
///
/// `A` conjugates a random diagonal drawn from the inner 90% of `iv`; `B` adds
/// `c·RR*` for a random `R` of random rank, with `c` a random fraction of the
/// largest step (found by bisection) that keeps `λ_max(B)` inside `iv`.
pub fn random_ordered_pair(
    n: usize,
    iv: &Interval,
    seed: u64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let mut rng = trial_rng(seed, 0);
    random_ordered_pair_with(&mut rng, n, iv)
}

pub fn random_ordered_pair_with<R: Rng>(
    rng: &mut R,
    n: usize,
    iv: &Interval,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if n == 0 {
        return Err(Error::usage("dimension must be at least 1"));
    }
    if !iv.is_bounded() {
        return Err(Error::usage("random_ordered_pair needs a bounded interval"));
    }
    let margin = 0.05 * iv.width();
    let (lo, hi) = (iv.lo() + margin, iv.hi() - margin);
    let ceiling = iv.hi() - 0.5 * margin;

    for _ in 0..ORDERED_PAIR_RETRIES {
        let a = random_hermitian_with_spectrum(rng, n, lo, hi);
        let rank = rng.gen_range(1..=n);
        let r = gaussian_matrix(rng, n, rank);
        let rr = HermitianMatrix::from_nearly_hermitian(&r * r.adjoint());
        let rr = rr.scale(1.0 / eigendecompose(&rr)?.spectral_norm().max(f64::MIN_POSITIVE));

        // largest c with λ_max(A + c·RR*) ≤ ceiling; λ_max is increasing in c
        let top = |c: f64| -> Result<f64> {
            Ok(eigendecompose(&a.add(&rr.scale(c))?)?.max_eigenvalue())
        };
        if top(0.0)? >= ceiling {
            continue;
        }
        let (mut c_lo, mut c_hi) = (0.0, iv.width());
        for _ in 0..60 {
            let mid = 0.5 * (c_lo + c_hi);
            if top(mid)? <= ceiling {
                c_lo = mid;
            } else {
                c_hi = mid;
            }
        }
        if c_lo <= 0.0 {
            continue;
        }
        let c = c_lo * rng.gen_range(0.05..=1.0);
        let b = a.add(&rr.scale(c))?;
        return Ok((a, b));
    }
    Err(Error::numerical(
        "random_ordered_pair: no feasible step found",
        vec![("retries", ORDERED_PAIR_RETRIES as f64), ("dim", n as f64)],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m2(a: f64, b: f64, c: f64) -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![a, b], vec![b, c]]).unwrap()
    }

    #[test]
    fn eig_identity_and_diagonal() {
        let d = eigendecompose(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(d.eigenvalues.len(), 2);
        for l in &d.eigenvalues {
            assert!((l - 1.0).abs() < 1e-15);
        }
        let d = eigendecompose(&HermitianMatrix::diag(&[3.0, 1.0])).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eig_two_by_two_characteristic_polynomial() {
        // λ² − 8λ − 4 = 0
        let d = eigendecompose(&m2(2.0, 4.0, 6.0)).unwrap();
        let r = 20f64.sqrt();
        assert!((d.eigenvalues[0] - (4.0 - r)).abs() < 1e-13);
        assert!((d.eigenvalues[1] - (4.0 + r)).abs() < 1e-13);
        assert!((d.eigenvalues[0] + 0.4721).abs() < 1e-4);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(matches!(HermitianMatrix::new(m), Err(Error::Usage(_))));
        let nan = DMatrix::from_element(1, 1, Complex64::new(f64::NAN, 0.0));
        assert!(HermitianMatrix::new(nan).is_err());
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&HermitianMatrix::identity(3), DEFAULT_PSD_TOL).unwrap());
        assert!(is_psd(&HermitianMatrix::zeros(3), DEFAULT_PSD_TOL).unwrap());
        assert!(!is_psd(&m2(2.0, 4.0, 6.0), DEFAULT_PSD_TOL).unwrap());
    }

    #[test]
    fn loewner_order_examples() {
        let a = m2(1.0, 0.3, 2.0);
        assert!(loewner_leq(&a, &a, DEFAULT_PSD_TOL).unwrap());
        assert!(loewner_leq(&HermitianMatrix::zeros(2), &HermitianMatrix::identity(2), 0.0).unwrap());
        assert!(!loewner_leq(
            &HermitianMatrix::diag(&[0.0, 2.0]),
            &HermitianMatrix::diag(&[1.0, 1.0]),
            DEFAULT_PSD_TOL
        )
        .unwrap());
        assert!(matches!(
            loewner_leq(&HermitianMatrix::identity(2), &HermitianMatrix::identity(3), 0.0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn spectrum_membership() {
        let d = HermitianMatrix::diag(&[1.0, 2.0]);
        assert!(spectrum_in(&d, &Interval::new(0.0, 3.0).unwrap()).unwrap());
        assert!(!spectrum_in(&d, &Interval::new(0.0, 2.0).unwrap()).unwrap());
        assert!(!spectrum_in(&m2(2.0, 4.0, 6.0), &Interval::new(0.0, 10.0).unwrap()).unwrap());
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
        assert!(!Interval::positive().is_bounded());
    }

    #[test]
    fn ordered_pair_scalar_and_determinism() {
        let iv = Interval::new(0.0, 5.0).unwrap();
        let (a, b) = random_ordered_pair(1, &iv, 7).unwrap();
        assert!(a.get(0, 0).re <= b.get(0, 0).re);
        assert!(iv.contains(a.get(0, 0).re) && iv.contains(b.get(0, 0).re));
        let p1 = random_ordered_pair(3, &iv, 99).unwrap();
        let p2 = random_ordered_pair(3, &iv, 99).unwrap();
        assert_eq!(p1, p2);
        assert!(random_ordered_pair(2, &Interval::positive(), 1).is_err());
    }

    #[test]
    fn ordered_pairs_satisfy_contract() {
        let iv = Interval::new(0.0, 5.0).unwrap();
        let mut rng = trial_rng(2024, 1);
        for _ in 0..1000 {
            let (a, b) = random_ordered_pair_with(&mut rng, 4, &iv).unwrap();
            assert!(loewner_leq(&a, &b, DEFAULT_PSD_TOL).unwrap());
            assert!(spectrum_in(&a, &iv).unwrap());
            assert!(spectrum_in(&b, &iv).unwrap());
        }
    }

    #[test]
    fn degenerate_eigenvectors_do_not_matter() {
        // repeated eigenvalue: the reconstruction and any spectral map are unaffected
        let mut rng = trial_rng(5, 0);
        let u = random_unitary(&mut rng, 4);
        let a = HermitianMatrix::diag(&[1.0, 1.0, 2.0, 2.0]).congruence(&u).unwrap();
        let d = eigendecompose(&a).unwrap();
        let sq = d.map(|x| x * x);
        let direct = HermitianMatrix::from_nearly_hermitian(a.matrix() * a.matrix());
        assert!(sq.sub(&direct).unwrap().frobenius_norm() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn eigendecomposition_residuals(seed in any::<u64>(), n in 1usize..=24, scale in 1e-3f64..1e3) {
            let mut rng = trial_rng(seed, 0);
            let a = random_hermitian(&mut rng, n).scale(scale / n as f64);
            let d = eigendecompose(&a).unwrap();
            let norm = d.spectral_norm().max(f64::MIN_POSITIVE);
            prop_assert!(d.reconstruction_residual(&a) <= 1e-10 * norm * (n as f64).sqrt());
            prop_assert!(d.unitarity_residual() <= 1e-10);
            prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn loewner_order_is_transitive(seed in any::<u64>(), n in 1usize..=5) {
            let iv = Interval::new(-2.0, 2.0).unwrap();
            let mut rng = trial_rng(seed, 3);
            let (a, b) = random_ordered_pair_with(&mut rng, n, &iv).unwrap();
            let bump = random_hermitian_with_spectrum(&mut rng, n, 0.0, 1.0);
            let c2 = b.add(&bump).unwrap();
            prop_assert!(loewner_leq(&a, &b, DEFAULT_PSD_TOL).unwrap());
            prop_assert!(loewner_leq(&b, &c2, DEFAULT_PSD_TOL).unwrap());
            prop_assert!(loewner_leq(&a, &c2, 2.0 * DEFAULT_PSD_TOL).unwrap());
        }

        #[test]
        fn schur_product_preserves_psd(seed in any::<u64>(), n in 1usize..=6) {
            let mut rng = trial_rng(seed, 4);
            let a = random_hermitian_with_spectrum(&mut rng, n, 0.0, 3.0);
            let b = random_hermitian_with_spectrum(&mut rng, n, 0.0, 3.0);
            prop_assert!(is_psd(&a.schur(&b).unwrap(), DEFAULT_PSD_TOL).unwrap());
        }
    }
}
