//! Scalar functions, the built-in catalog, and mollifier regularisation.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::Interval;
use crate::quadrature::{cached_rule, GaussLegendre};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Classification attached to a function. Metadata only: verifiers never trust it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimedClass {
    OperatorMonotone,
    OperatorConvex,
    Neither,
    Unknown,
}

/// A real function on an open interval with optional closed-form derivatives.
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    domain: Interval,
    eval: RealFn,
    deriv: Option<RealFn>,
    deriv2: Option<RealFn>,
    claimed: ClaimedClass,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("closed_deriv", &self.deriv.is_some())
            .field("closed_deriv2", &self.deriv2.is_some())
            .field("claimed", &self.claimed)
            .finish()
    }
}

impl ScalarFunction {
    pub fn new<F>(name: impl Into<String>, domain: Interval, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFunction {
            name: name.into(),
            domain,
            eval: Arc::new(eval),
            deriv: None,
            deriv2: None,
            claimed: ClaimedClass::Unknown,
        }
    }

    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.deriv = Some(Arc::new(d));
        self
    }

    pub fn with_second_derivative<F>(mut self, d2: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.deriv2 = Some(Arc::new(d2));
        self
    }

    pub fn with_claim(mut self, claimed: ClaimedClass) -> Self {
        self.claimed = claimed;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn claimed_class(&self) -> ClaimedClass {
        self.claimed
    }

    pub fn has_closed_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn has_closed_second_derivative(&self) -> bool {
        self.deriv2.is_some()
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    /// Closed form when available, else a central difference.
    pub fn deriv(&self, x: f64) -> f64 {
        match &self.deriv {
            Some(d) => d(x),
            None => self.central_difference(x),
        }
    }

    /// Closed form when available; otherwise a central difference of the
    /// closed-form first derivative, or a second central difference of `eval`.
    pub fn deriv2(&self, x: f64) -> f64 {
        if let Some(d2) = &self.deriv2 {
            return d2(x);
        }
        if let Some(d) = &self.deriv {
            let h = self.step(x, f64::EPSILON.cbrt());
            return (d(x + h) - d(x - h)) / (2.0 * h);
        }
        let h = self.step(x, f64::EPSILON.powf(0.25));
        (self.eval(x + h) - 2.0 * self.eval(x) + self.eval(x - h)) / (h * h)
    }

    /// Central difference with step `ε^{1/3}·max(1, |x|)`, clipped to stay in the domain.
    pub fn central_difference(&self, x: f64) -> f64 {
        let h = self.step(x, f64::EPSILON.cbrt());
        (self.eval(x + h) - self.eval(x - h)) / (2.0 * h)
    }

    fn step(&self, x: f64, base: f64) -> f64 {
        let h = base * x.abs().max(1.0);
        let room = (x - self.domain.lo()).min(self.domain.hi() - x);
        if room.is_finite() && room > 0.0 {
            h.min(0.5 * room)
        } else {
            h
        }
    }
}

fn positive() -> Interval {
    Interval::positive()
}

pub fn identity() -> ScalarFunction {
    ScalarFunction::new("id", positive(), |t| t)
        .with_derivative(|_| 1.0)
        .with_second_derivative(|_| 0.0)
        .with_claim(ClaimedClass::OperatorMonotone)
}

pub fn constant_one() -> ScalarFunction {
    ScalarFunction::new("const1", positive(), |_| 1.0)
        .with_derivative(|_| 0.0)
        .with_second_derivative(|_| 0.0)
        .with_claim(ClaimedClass::OperatorMonotone)
}

pub fn sqrt() -> ScalarFunction {
    ScalarFunction::new("sqrt", positive(), f64::sqrt)
        .with_derivative(|t| 0.5 / t.sqrt())
        .with_second_derivative(|t| -0.25 / (t * t.sqrt()))
        .with_claim(ClaimedClass::OperatorMonotone)
}

/// `t^p`; claimed operator monotone for `0 ≤ p ≤ 1`.
pub fn power(p: f64) -> ScalarFunction {
    let claim = if (0.0..=1.0).contains(&p) {
        ClaimedClass::OperatorMonotone
    } else {
        ClaimedClass::Unknown
    };
    ScalarFunction::new(format!("power:{p}"), positive(), move |t| t.powf(p))
        .with_derivative(move |t| p * t.powf(p - 1.0))
        .with_second_derivative(move |t| p * (p - 1.0) * t.powf(p - 2.0))
        .with_claim(claim)
}

/// Extreme-point kernel `t ↦ t / (λ + (1−λ)t)`.
pub fn kernel(lambda: f64) -> Result<ScalarFunction> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::usage(format!("kernel parameter {lambda} outside [0, 1]")));
    }
    let mu = 1.0 - lambda;
    Ok(
        ScalarFunction::new(format!("kernel:{lambda}"), positive(), move |t| t / (lambda + mu * t))
            .with_derivative(move |t| {
                let d = lambda + mu * t;
                lambda / (d * d)
            })
            .with_second_derivative(move |t| {
                let d = lambda + mu * t;
                -2.0 * lambda * mu / (d * d * d)
            })
            .with_claim(ClaimedClass::OperatorMonotone),
    )
}

pub fn arithmetic() -> ScalarFunction {
    ScalarFunction::new("arithmetic", positive(), |t| 0.5 * (1.0 + t))
        .with_derivative(|_| 0.5)
        .with_second_derivative(|_| 0.0)
        .with_claim(ClaimedClass::OperatorMonotone)
}

/// `2t / (1 + t)`, the representing function of the harmonic mean.
pub fn harmonic_rep() -> ScalarFunction {
    ScalarFunction::new("harmonic_rep", positive(), |t| 2.0 * t / (1.0 + t))
        .with_derivative(|t| 2.0 / ((1.0 + t) * (1.0 + t)))
        .with_second_derivative(|t| -4.0 / ((1.0 + t) * (1.0 + t) * (1.0 + t)))
        .with_claim(ClaimedClass::OperatorMonotone)
}

pub fn square() -> ScalarFunction {
    ScalarFunction::new("square", Interval::real_line(), |t| t * t)
        .with_derivative(|t| 2.0 * t)
        .with_second_derivative(|_| 2.0)
        .with_claim(ClaimedClass::Neither)
}

pub fn cube() -> ScalarFunction {
    ScalarFunction::new("cube", Interval::real_line(), |t| t * t * t)
        .with_derivative(|t| 3.0 * t * t)
        .with_second_derivative(|t| 6.0 * t)
        .with_claim(ClaimedClass::Neither)
}

pub fn exp() -> ScalarFunction {
    ScalarFunction::new("exp", Interval::real_line(), f64::exp)
        .with_derivative(f64::exp)
        .with_second_derivative(f64::exp)
        .with_claim(ClaimedClass::Neither)
}

/// `a + b·t` on the real line.
pub fn affine(a: f64, b: f64) -> ScalarFunction {
    ScalarFunction::new(format!("affine:{a},{b}"), Interval::real_line(), move |t| a + b * t)
        .with_derivative(move |_| b)
        .with_second_derivative(|_| 0.0)
        .with_claim(if b >= 0.0 { ClaimedClass::OperatorMonotone } else { ClaimedClass::Neither })
}

pub const POWER_PARAMS: [f64; 3] = [0.25, 0.5, 0.75];
pub const KERNEL_PARAMS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// The built-in catalog.
pub fn catalog() -> Vec<ScalarFunction> {
    let mut out = vec![identity(), constant_one(), sqrt()];
    out.extend(POWER_PARAMS.iter().map(|&p| power(p)));
    out.extend(KERNEL_PARAMS.iter().map(|&l| kernel(l).expect("valid kernel parameter")));
    out.extend([arithmetic(), harmonic_rep(), square(), cube(), exp()]);
    out
}

/// Catalog members normalised at 1 and claimed operator monotone on the half-line.
pub fn p1_members() -> Vec<ScalarFunction> {
    catalog()
        .into_iter()
        .filter(|f| {
            f.claimed_class() == ClaimedClass::OperatorMonotone
                && f.domain() == Interval::positive()
                && (f.eval(1.0) - 1.0).abs() <= 1e-12
        })
        .collect()
}

/// Resolves a catalog name such as `sqrt`, `power:0.25` or `kernel:0.5`.
pub fn lookup(name: &str) -> Result<ScalarFunction> {
    if let Some((family, param)) = name.split_once(':') {
        let value: f64 = param
            .trim()
            .parse()
            .map_err(|_| Error::usage(format!("bad parameter in '{name}'")))?;
        if !value.is_finite() {
            return Err(Error::usage(format!("bad parameter in '{name}'")));
        }
        return match family {
            "power" => Ok(power(value)),
            "kernel" => kernel(value),
            _ => Err(unknown(name)),
        };
    }
    catalog()
        .into_iter()
        .find(|f| f.name() == name)
        .ok_or_else(|| unknown(name))
}

fn unknown(name: &str) -> Error {
    let names: Vec<String> = catalog().iter().map(|f| f.name().to_string()).collect();
    Error::usage(format!(
        "unknown function '{name}'; available: {} (families: power:<p>, kernel:<lambda>)",
        names.join(", ")
    ))
}

/// Unit-mass bump `c·exp(−1/(1−x²))` supported on `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    normalizer: f64,
}

impl Mollifier {
    pub fn standard() -> &'static Mollifier {
        static M: OnceLock<Mollifier> = OnceLock::new();
        M.get_or_init(|| {
            let rule = GaussLegendre::new(2048);
            let mass = rule.integrate(-1.0, 1.0, Self::profile);
            Mollifier { normalizer: 1.0 / mass }
        })
    }

    /// Unnormalised profile.
    pub fn profile(x: f64) -> f64 {
        let q = 1.0 - x * x;
        if q <= 0.0 {
            0.0
        } else {
            (-1.0 / q).exp()
        }
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Normalised density φ.
    pub fn density(&self, x: f64) -> f64 {
        self.normalizer * Self::profile(x)
    }

    /// φ′.
    pub fn density_derivative(&self, x: f64) -> f64 {
        let q = 1.0 - x * x;
        if q <= 0.0 {
            0.0
        } else {
            self.normalizer * (-1.0 / q).exp() * (-2.0 * x / (q * q))
        }
    }
}

const MOLLIFY_TOL: f64 = 1e-10;

fn adaptive_convolution<G: Fn(f64) -> f64>(g: G) -> f64 {
    let mut prev = cached_rule(0).integrate(-1.0, 1.0, &g);
    for level in 1..5 {
        let next = cached_rule(level).integrate(-1.0, 1.0, &g);
        if (next - prev).abs() < MOLLIFY_TOL {
            return next;
        }
        prev = next;
    }
    prev
}

fn check_window(f: &ScalarFunction, eps: f64, x: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::usage(format!("mollifier width must be positive, got {eps}")));
    }
    let d = f.domain();
    if !(d.contains(x - eps) && d.contains(x + eps)) {
        return Err(Error::usage(format!(
            "[{}, {}] is not inside the domain {} of {}",
            x - eps,
            x + eps,
            d,
            f.name()
        )));
    }
    Ok(())
}

/// `(f ∗ φ_ε)(x) = ∫_{-1}^{1} f(x − ε y) φ(y) dy`.
pub fn mollify(f: &ScalarFunction, eps: f64, x: f64) -> Result<f64> {
    check_window(f, eps, x)?;
    let m = Mollifier::standard();
    Ok(adaptive_convolution(|y| f.eval(x - eps * y) * m.density(y)))
}

/// `(f ∗ φ′_ε)(x) = ε⁻¹ ∫_{-1}^{1} f(x − ε y) φ′(y) dy`.
pub fn mollify_derivative(f: &ScalarFunction, eps: f64, x: f64) -> Result<f64> {
    check_window(f, eps, x)?;
    let m = Mollifier::standard();
    Ok(adaptive_convolution(|y| f.eval(x - eps * y) * m.density_derivative(y)) / eps)
}

/// The sequence `f_n = f ∗ φ_{1/n}`, `n ≥ n_start`, each on `(a + 1/n, b − 1/n)`.
#[derive(Debug, Clone)]
pub struct Regularization {
    base: ScalarFunction,
    interval: Interval,
    n_start: usize,
}

pub fn regularize_sequence(
    f: &ScalarFunction,
    interval: Interval,
    n_start: usize,
) -> Result<Regularization> {
    if n_start == 0 {
        return Err(Error::usage("n_start must be positive"));
    }
    if !interval.is_bounded() || !f.domain().covers(&interval) {
        return Err(Error::usage(format!(
            "interval {interval} must be bounded and inside {}",
            f.domain()
        )));
    }
    if !(0.5 * interval.width() > 1.0 / n_start as f64) {
        return Err(Error::usage(format!(
            "interval {interval} too small for n_start = {n_start}"
        )));
    }
    Ok(Regularization { base: f.clone(), interval, n_start })
}

impl Regularization {
    pub fn n_start(&self) -> usize {
        self.n_start
    }

    /// Member `n` (requires `n ≥ n_start`).
    pub fn member(&self, n: usize) -> Result<ScalarFunction> {
        if n < self.n_start {
            return Err(Error::usage(format!("member {n} precedes n_start {}", self.n_start)));
        }
        let eps = 1.0 / n as f64;
        let domain = self.interval.shrink(eps)?;
        let (f, g) = (self.base.clone(), self.base.clone());
        Ok(ScalarFunction::new(
            format!("{}~{}", self.base.name(), n),
            domain,
            move |x| mollify(&f, eps, x).unwrap_or(f64::NAN),
        )
        .with_derivative(move |x| mollify_derivative(&g, eps, x).unwrap_or(f64::NAN))
        .with_claim(self.base.claimed_class()))
    }

    pub fn iter(&self) -> impl Iterator<Item = ScalarFunction> + '_ {
        (self.n_start..).map(move |n| self.member(n).expect("n ≥ n_start"))
    }
}
