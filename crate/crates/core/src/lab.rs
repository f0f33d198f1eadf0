//! Randomised certification and refutation of operator monotonicity and
//! convexity, the standard transformations of positive monotone functions,
//! and the extreme-point decomposition of normalised monotone functions.
//!
//! Every check draws its trials from independent per-trial random streams
//! derived from the seed, so a verdict does not depend on evaluation order.
//! A `Fail` verdict is a certificate: its witness reproduces a negative
//! eigenvalue when re-evaluated with [`Witness::recheck`]. A `Pass` verdict is
//! evidence only.

use rand::Rng;
use serde::Serialize;

use crate::calculus::apply_function;
use crate::divided::{dd1, loewner_matrix, second_dd_matrix, NodeSet, TAU_NODE};
use crate::error::{Error, Result};
use crate::func::{self, ScalarFunction};
use crate::hermitian::{
    random_hermitian_with_spectrum, random_ordered_pair_with, relative_min_eigenvalue, trial_rng,
    HermitianMatrix, Interval, DEFAULT_PSD_TOL,
};

pub const DEFAULT_MAX_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    MonotoneOrderN,
    ConvexOrderN,
    MonotoneDirect,
    ConcaveMidpoint,
}

impl Property {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "monotone" | "monotone_order_n" => Ok(Property::MonotoneOrderN),
            "convex" | "convex_order_n" => Ok(Property::ConvexOrderN),
            "direct" | "monotone_direct" => Ok(Property::MonotoneDirect),
            "concave" | "concave_midpoint" => Ok(Property::ConcaveMidpoint),
            other => Err(Error::usage(format!(
                "unknown property '{other}'; expected monotone, convex, direct or concave"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
}

/// How node sets are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSampler {
    /// I.i.d. uniform nodes, resampling any node within `τ_node` of another.
    Uniform,
    /// Pairs of nodes `10·τ_node` apart, to exercise the coincident-node limits.
    NearCoincident,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Nodes { nodes: Vec<f64>, anchor: Option<f64> },
    Pair { a: HermitianMatrix, b: HermitianMatrix },
}

impl Witness {
    /// Relative minimum eigenvalue of the certificate matrix, recomputed from scratch.
    pub fn recheck(&self, f: &ScalarFunction, property: Property, domain: Interval) -> Result<f64> {
        let m = certificate_matrix(f, property, self, domain)?;
        relative_min_eigenvalue(&m)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    pub tol: f64,
    pub max_order: usize,
    pub sampler: NodeSampler,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { tol: DEFAULT_PSD_TOL, max_order: DEFAULT_MAX_ORDER, sampler: NodeSampler::Uniform }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub property: Property,
    pub order: usize,
    pub trials: usize,
    /// Smallest `λ_min / max(1, ‖M‖)` over all trials.
    pub min_eig_seen: f64,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub witness_trial: Option<usize>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

pub fn check_monotone_order_n(
    f: &ScalarFunction,
    n: usize,
    iv: Interval,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    check(Property::MonotoneOrderN, f, n, iv, trials, seed, &CheckOptions::default())
}

pub fn check_convex_order_n(
    f: &ScalarFunction,
    n: usize,
    iv: Interval,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    check(Property::ConvexOrderN, f, n, iv, trials, seed, &CheckOptions::default())
}

pub fn check_monotone_direct(
    f: &ScalarFunction,
    n: usize,
    iv: Interval,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    check(Property::MonotoneDirect, f, n, iv, trials, seed, &CheckOptions::default())
}

pub fn check_midpoint_concavity(
    f: &ScalarFunction,
    n: usize,
    iv: Interval,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    check(Property::ConcaveMidpoint, f, n, iv, trials, seed, &CheckOptions::default())
}

/// Runs `trials` independent trials of `property` at order `n` on `iv`.
pub fn check(
    property: Property,
    f: &ScalarFunction,
    n: usize,
    iv: Interval,
    trials: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<Verdict> {
    if n == 0 || n > opts.max_order {
        return Err(Error::usage(format!("order {n} outside 1..={}", opts.max_order)));
    }
    if !iv.is_bounded() || !f.domain().covers(&iv) {
        return Err(Error::usage(format!(
            "check interval {iv} must be bounded and inside the domain {} of {}",
            f.domain(),
            f.name()
        )));
    }
    let mut min_seen = f64::INFINITY;
    let mut witness = None;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let w = draw_witness(&mut rng, property, n, iv, opts.sampler)?;
        let m = certificate_matrix(f, property, &w, iv)?;
        let e = relative_min_eigenvalue(&m)?;
        min_seen = min_seen.min(e);
        if e < -opts.tol && witness.is_none() {
            witness = Some((trial, w));
        }
    }
    let outcome = if witness.is_some() { Outcome::Fail } else { Outcome::Pass };
    let (witness_trial, witness) = match witness {
        Some((t, w)) => (Some(t), Some(w)),
        None => (None, None),
    };
    Ok(Verdict { property, order: n, trials, min_eig_seen: min_seen, outcome, witness, witness_trial })
}

/// `n` uniform nodes in `iv`, no two within `τ_node` of each other.
pub fn sample_nodes<R: Rng>(rng: &mut R, n: usize, iv: Interval, sampler: NodeSampler) -> Vec<f64> {
    let draw = |rng: &mut R| loop {
        let x = rng.gen_range(iv.lo()..iv.hi());
        if iv.contains(x) {
            break x;
        }
    };
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    match sampler {
        NodeSampler::Uniform => {
            while nodes.len() < n {
                let x = draw(rng);
                if nodes.iter().all(|&y| (x - y).abs() > TAU_NODE * 1f64.max(x.abs()).max(y.abs())) {
                    nodes.push(x);
                }
            }
        }
        NodeSampler::NearCoincident => {
            while nodes.len() < n {
                let x = draw(rng);
                nodes.push(x);
                if nodes.len() < n {
                    let gap = 10.0 * TAU_NODE * x.abs().max(1.0);
                    let y = if iv.contains(x + gap) { x + gap } else { x - gap };
                    nodes.push(y);
                }
            }
        }
    }
    nodes
}

fn draw_witness<R: Rng>(
    rng: &mut R,
    property: Property,
    n: usize,
    iv: Interval,
    sampler: NodeSampler,
) -> Result<Witness> {
    Ok(match property {
        Property::MonotoneOrderN => Witness::Nodes { nodes: sample_nodes(rng, n, iv, sampler), anchor: None },
        Property::ConvexOrderN => {
            let nodes = sample_nodes(rng, n, iv, sampler);
            let anchor = Some(nodes[0]);
            Witness::Nodes { nodes, anchor }
        }
        Property::MonotoneDirect => {
            let (a, b) = random_ordered_pair_with(rng, n, &iv)?;
            Witness::Pair { a, b }
        }
        Property::ConcaveMidpoint => {
            let margin = 0.05 * iv.width();
            let (lo, hi) = (iv.lo() + margin, iv.hi() - margin);
            let a = random_hermitian_with_spectrum(rng, n, lo, hi);
            let b = random_hermitian_with_spectrum(rng, n, lo, hi);
            Witness::Pair { a, b }
        }
    })
}

/// The matrix whose positive semidefiniteness the property asserts.
fn certificate_matrix(
    f: &ScalarFunction,
    property: Property,
    w: &Witness,
    domain: Interval,
) -> Result<HermitianMatrix> {
    match (property, w) {
        (Property::MonotoneOrderN, Witness::Nodes { nodes, .. }) => {
            let ns = NodeSet::new(nodes.clone(), domain)?;
            Ok(loewner_matrix(f, &ns).to_hermitian())
        }
        (Property::ConvexOrderN, Witness::Nodes { nodes, anchor }) => {
            let ns = NodeSet::new(nodes.clone(), domain)?;
            let anchor = anchor.unwrap_or(nodes[0]);
            HermitianMatrix::from_real(&second_dd_matrix(f, &ns, anchor))
        }
        (Property::MonotoneDirect, Witness::Pair { a, b }) => {
            apply_function(f, b)?.sub(&apply_function(f, a)?)
        }
        (Property::ConcaveMidpoint, Witness::Pair { a, b }) => {
            let mid = a.add(b)?.scale(0.5);
            let avg = apply_function(f, a)?.add(&apply_function(f, b)?)?.scale(0.5);
            apply_function(f, &mid)?.sub(&avg)
        }
        _ => Err(Error::usage("witness kind does not match the property")),
    }
}

/// Grid of sample points inside `domain` used to validate transform preconditions.
fn probe_points(domain: Interval) -> Vec<f64> {
    if domain.is_bounded() {
        (1..64).map(|i| domain.lo() + domain.width() * i as f64 / 64.0).collect()
    } else if domain.lo() >= 0.0 {
        (0..=60).map(|i| 10f64.powf(-3.0 + 0.1 * i as f64)).filter(|t| domain.contains(*t)).collect()
    } else {
        (-30..=30).map(|i| i as f64 / 3.0).filter(|t| domain.contains(*t)).collect()
    }
}

fn require_positive_half_line(f: &ScalarFunction, what: &str) -> Result<()> {
    if f.domain().lo() < 0.0 {
        return Err(Error::usage(format!("{what}: domain of {} must lie in (0, ∞)", f.name())));
    }
    if let Some(t) = probe_points(f.domain()).into_iter().find(|&t| !(f.eval(t) > 0.0)) {
        return Err(Error::usage(format!("{what}: {} is not positive at {t}", f.name())));
    }
    Ok(())
}

/// `t ↦ −f(t)/t`.
pub fn transform_neg_reciprocal(f: &ScalarFunction) -> Result<ScalarFunction> {
    require_positive_half_line(f, "neg_reciprocal")?;
    let (g, h) = (f.clone(), f.clone());
    Ok(ScalarFunction::new(format!("negrecip({})", f.name()), f.domain(), move |t| -g.eval(t) / t)
        .with_derivative(move |t| (h.eval(t) - t * h.deriv(t)) / (t * t))
        .with_claim(f.claimed_class()))
}

/// `t ↦ t/f(t)`.
pub fn transform_quotient(f: &ScalarFunction) -> Result<ScalarFunction> {
    require_positive_half_line(f, "quotient")?;
    let (g, h) = (f.clone(), f.clone());
    Ok(ScalarFunction::new(format!("quotient({})", f.name()), f.domain(), move |t| t / g.eval(t))
        .with_derivative(move |t| {
            let v = h.eval(t);
            (v - t * h.deriv(t)) / (v * v)
        })
        .with_claim(f.claimed_class()))
}

/// `t ↦ t·f(1/t)`.
pub fn transform_involution(f: &ScalarFunction) -> Result<ScalarFunction> {
    require_positive_half_line(f, "involution")?;
    if f.domain() != Interval::positive() {
        return Err(Error::usage(format!(
            "involution: domain of {} must be (0, ∞), got {}",
            f.name(),
            f.domain()
        )));
    }
    let (g, h) = (f.clone(), f.clone());
    Ok(ScalarFunction::new(format!("involution({})", f.name()), f.domain(), move |t| t * g.eval(1.0 / t))
        .with_derivative(move |t| {
            let u = 1.0 / t;
            h.eval(u) - u * h.deriv(u)
        })
        .with_claim(f.claimed_class()))
}

const NORMALISATION_TOL: f64 = 1e-10;

fn require_normalised(f: &ScalarFunction) -> Result<()> {
    if !f.domain().contains(1.0) {
        return Err(Error::usage(format!("1 is not inside the domain of {}", f.name())));
    }
    let v = f.eval(1.0);
    if (v - 1.0).abs() > NORMALISATION_TOL {
        return Err(Error::usage(format!("{}(1) = {v}, expected 1", f.name())));
    }
    Ok(())
}

/// `f′(1)` for `f` normalised by `f(1) = 1`.
pub fn derivative_bound_at_one(f: &ScalarFunction) -> Result<f64> {
    require_normalised(f)?;
    Ok(f.deriv(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// `f′(1) = 0`, so `f ≡ 1`.
    Constant,
    /// `f′(1) = 1`, so `f(t) = t`.
    Identity,
}

#[derive(Debug, Clone)]
pub struct ExtremeDecomposition {
    pub f1: ScalarFunction,
    pub f2: ScalarFunction,
    pub weight: f64,
    pub degenerate: Option<Degeneracy>,
}

impl ExtremeDecomposition {
    /// `w·f₁(t) + (1−w)·f₂(t)`.
    pub fn recombine(&self, t: f64) -> f64 {
        self.weight * self.f1.eval(t) + (1.0 - self.weight) * self.f2.eval(t)
    }
}

const DEGENERACY_TOL: f64 = 1e-12;

/// Splits a normalised monotone `f` as `w·f₁ + (1−w)·f₂` with `w = f′(1)`,
/// `f₁(t) = (t/w)·Δf(t, 1)` and `f₂(t) = Δg(1/t, 1)/(1−w)` for `g(t) = t·f(1/t)`.
pub fn extreme_decomposition(f: &ScalarFunction) -> Result<ExtremeDecomposition> {
    let w = derivative_bound_at_one(f)?;
    if w.abs() <= DEGENERACY_TOL {
        let c = func::constant_one();
        return Ok(ExtremeDecomposition { f1: c.clone(), f2: c, weight: 0.0, degenerate: Some(Degeneracy::Constant) });
    }
    if (w - 1.0).abs() <= DEGENERACY_TOL {
        let id = func::identity();
        return Ok(ExtremeDecomposition { f1: id.clone(), f2: id, weight: 1.0, degenerate: Some(Degeneracy::Identity) });
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::usage(format!(
            "{}′(1) = {w} lies outside [0, 1]; not a normalised monotone function",
            f.name()
        )));
    }
    let g = transform_involution(f)?;
    let fa = f.clone();
    let f1 = ScalarFunction::new(format!("{}_1", f.name()), f.domain(), move |t| t / w * dd1(&fa, t, 1.0));
    let f2 = ScalarFunction::new(format!("{}_2", f.name()), f.domain(), move |t| {
        dd1(&g, 1.0 / t, 1.0) / (1.0 - w)
    });
    Ok(ExtremeDecomposition { f1, f2, weight: w, degenerate: None })
}
