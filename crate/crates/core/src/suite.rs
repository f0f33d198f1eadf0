//! The verification suite behind `loewner report`: every acceptance property,
//! run at fixed seeds, collected into a deterministic JSON report.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::calculus::{apply_function, path_derivative, path_second_derivative, MatrixPath};
use crate::choquet::{caratheodory_decompose, concave_envelope, GridFunction, Polytope};
use crate::divided::{loewner_matrix, loewner_transform, second_dd_matrix, NodeSet};
use crate::error::{Error, Result};
use crate::func::{self, mollify, mollify_derivative, Mollifier, ScalarFunction};
use crate::hermitian::{random_hermitian, random_hermitian_with_spectrum, trial_rng, HermitianMatrix, Interval};
use crate::kubo_ando::{
    check_axiom_continuity, check_axiom_monotone, check_axiom_transformer, evaluate_connection,
    geometric_mean_closed_form, representing_function, ConnectionSpec,
};
use crate::lab::{
    check_monotone_direct, check_monotone_order_n, derivative_bound_at_one, extreme_decomposition, sample_nodes,
    NodeSampler, Outcome,
};
use crate::quadrature::cached_rule;
use crate::representation::{
    convert_measure, default_lambda_grid, fit_measure, kernel01, kernel_inf, log_spaced, synthesize, HalfLinePoint,
    RadonMeasure01,
};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    /// PSD tolerance, relative to `max(1, ‖M‖)`.
    pub tol: f64,
    /// Replaces every per-check trial count when set.
    pub trials: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: DEFAULT_SEED, tol: crate::hermitian::DEFAULT_PSD_TOL, trials: None }
    }
}

impl RunConfig {
    fn count(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    /// Independent seed per check, derived from the run seed.
    fn sub_seed(&self, tag: u64) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub id: usize,
    pub name: String,
    pub anchor: String,
    pub outcome: Outcome,
    pub evidence: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub overall: Outcome,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.overall == Outcome::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation is infallible")
    }
}

/// Accumulates evidence for one check; the first failure's witness is kept.
struct Probe {
    ok: bool,
    evidence: BTreeMap<String, f64>,
    witness: Option<Value>,
}

impl Probe {
    fn new() -> Self {
        Probe { ok: true, evidence: BTreeMap::new(), witness: None }
    }

    fn note(&mut self, key: impl Into<String>, v: f64) {
        self.evidence.insert(key.into(), v);
    }

    /// Records `value` under `key`; fails when `!holds`.
    fn expect(&mut self, key: impl Into<String>, value: f64, holds: bool, witness: impl FnOnce() -> Value) {
        let key = key.into();
        self.note(key.clone(), value);
        if !holds {
            self.ok = false;
            if self.witness.is_none() {
                self.witness = Some(json!({ "check": key, "instance": witness() }));
            }
        }
    }

    /// Tracks the worst value under `key` (max), failing when any exceeds `limit`.
    fn worst(&mut self, key: &str, value: f64, limit: f64, witness: impl FnOnce() -> Value) {
        let cur = self.evidence.get(key).copied().unwrap_or(0.0);
        self.evidence.insert(key.to_string(), cur.max(value));
        if !(value <= limit) {
            self.ok = false;
            if self.witness.is_none() {
                self.witness = Some(json!({ "check": key, "value": value, "limit": limit, "instance": witness() }));
            }
        }
    }
}

type CheckFn = fn(&RunConfig, &mut Probe) -> Result<()>;

const CHECKS: [(&str, &str, CheckFn); 11] = [
    ("loewner_psd_certificate", "first-divided-difference-positive-implies-matrix-monotone", loewner_psd),
    ("refutation_witnesses", "first-divided-difference-positive-implies-matrix-monotone", refutations),
    ("chain_rule_vs_finite_differences", "Chain rule", chain_rule),
    ("negated_transform_monotone", "divided-difference-is-operator-monotone-decreasing", negated_transform),
    ("anchor_identity", "second-divided-difference-positivity-implies-first-derivative-positive", anchor_identity),
    ("extreme_point_machinery", "extreme-points-of-operator-monotone-functions-characterised", extreme_points),
    ("representation_round_trips", "lowner-theory-weak", representation),
    ("kubo_ando_axioms", "kubo-ando-integral-representation", kubo_ando),
    ("regularisation", "regularisation-is-infinitely-differentiable", regularisation),
    ("choquet_toolkit", "upper-envelope-properties", choquet),
    ("p1_bounds", "barry-simon", p1_bounds),
];

/// Runs all checks in declaration order.
pub fn run_report(cfg: &RunConfig) -> Report {
    let records: Vec<Record> = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, anchor, check))| {
            let mut probe = Probe::new();
            let res = check(cfg, &mut probe);
            let error = res.err().map(|e| e.to_string());
            let ok = probe.ok && error.is_none();
            Record {
                id: i + 1,
                name: name.to_string(),
                anchor: anchor.to_string(),
                outcome: if ok { Outcome::Pass } else { Outcome::Fail },
                evidence: probe.evidence,
                witness: if ok { None } else { probe.witness },
                error,
            }
        })
        .collect();
    let overall = if records.iter().all(|r| r.outcome == Outcome::Pass) { Outcome::Pass } else { Outcome::Fail };
    Report {
        tool: "loewner".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        records,
        overall,
    }
}

fn standard_interval() -> Interval {
    Interval::new(0.1, 10.0).expect("valid interval")
}

fn witness_value<T: Serialize>(w: &T) -> Value {
    serde_json::to_value(w).unwrap_or(Value::Null)
}

fn loewner_psd(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let mut fs = vec![func::sqrt(), func::power(0.25), func::power(0.75)];
    for l in [0.25, 0.5, 0.75] {
        fs.push(func::kernel(l)?);
    }
    for (k, f) in fs.iter().enumerate() {
        let v = check_monotone_order_n(f, 5, standard_interval(), cfg.count(100), cfg.sub_seed(100 + k as u64))?;
        let key = format!("min_eig/{}", f.name());
        p.expect(key, v.min_eig_seen, v.passed() && v.min_eig_seen >= -cfg.tol, || witness_value(&v));
    }
    Ok(())
}

fn refutations(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let ns = NodeSet::new(vec![1.0, 3.0], Interval::real_line())?;
    let lm = loewner_matrix(&func::square(), &ns);
    let want = [[2.0, 4.0], [4.0, 6.0]];
    let entry_err = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (lm.entries[(i, j)] - want[i][j]).abs())
        .fold(0.0, f64::max);
    p.expect("square/entry_error", entry_err, entry_err <= 1e-12, || json!({ "nodes": [1.0, 3.0] }));
    let det = lm.determinant();
    p.expect("square/determinant", det, (det + 4.0).abs() <= 1e-12, || json!({ "nodes": [1.0, 3.0] }));

    let v = check_monotone_direct(&func::cube(), 2, standard_interval(), cfg.count(200), cfg.sub_seed(200))?;
    let refuted = !v.passed() && v.witness.is_some();
    p.note("cube/witness_trial", v.witness_trial.map(|t| t as f64).unwrap_or(-1.0));
    let recheck = match &v.witness {
        Some(w) => w.recheck(&func::cube(), v.property, standard_interval())?,
        None => f64::NAN,
    };
    p.expect("cube/witness_min_eig", recheck, refuted && recheck < -cfg.tol, || witness_value(&v));
    Ok(())
}

fn fd_first(f: &ScalarFunction, path: &MatrixPath, h: f64) -> Result<HermitianMatrix> {
    // five-point stencil, O(h⁴)
    let at = |t: f64| apply_function(f, &path.at(t));
    let (p1, m1, p2, m2) = (at(h)?, at(-h)?, at(2.0 * h)?, at(-2.0 * h)?);
    Ok(p1.sub(&m1)?.scale(8.0).sub(&p2.sub(&m2)?)?.scale(1.0 / (12.0 * h)))
}

fn fd_second(f: &ScalarFunction, path: &MatrixPath, h: f64) -> Result<HermitianMatrix> {
    let at = |t: f64| apply_function(f, &path.at(t));
    let (c, p1, m1, p2, m2) = (at(0.0)?, at(h)?, at(-h)?, at(2.0 * h)?, at(-2.0 * h)?);
    let s = p1.add(&m1)?.scale(16.0).sub(&p2.add(&m2)?)?.sub(&c.scale(30.0))?;
    Ok(s.scale(1.0 / (12.0 * h * h)))
}

fn relative_error(got: &HermitianMatrix, want: &HermitianMatrix) -> Result<f64> {
    Ok(got.sub(want)?.frobenius_norm() / want.frobenius_norm().max(1e-8))
}

fn chain_rule(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let fs = [func::sqrt(), func::kernel(0.5)?, func::square()];
    for (k, f) in fs.iter().enumerate() {
        let (k1, k2) = (format!("first_rel_err/{}", f.name()), format!("second_rel_err/{}", f.name()));
        for trial in 0..cfg.count(50) {
            let mut rng = trial_rng(cfg.sub_seed(300 + k as u64), trial as u64);
            let n = rng.gen_range(1..=6);
            let a = random_hermitian_with_spectrum(&mut rng, n, 0.5, 4.0);
            let h = random_hermitian(&mut rng, n);
            let h = h.scale(1.0 / h.frobenius_norm().max(1e-300));
            let path = MatrixPath::affine(a.clone(), h.clone())?;
            let d1 = path_derivative(f, &path, 0.0)?;
            let d2 = path_second_derivative(f, &path, 0.0)?;
            let e1 = relative_error(&d1, &fd_first(f, &path, 1e-3)?)?;
            let e2 = relative_error(&d2, &fd_second(f, &path, 1e-2)?)?;
            let inst = || json!({ "function": f.name(), "trial": trial, "a": a, "h": h });
            p.worst(&k1, e1, 1e-6, inst);
            p.worst(&k2, e2, 1e-4, inst);
        }
    }
    Ok(())
}

fn negate(f: &ScalarFunction) -> ScalarFunction {
    let (g, h) = (f.clone(), f.clone());
    ScalarFunction::new(format!("-{}", f.name()), f.domain(), move |t| -g.eval(t)).with_derivative(move |t| -h.deriv(t))
}

fn negated_transform(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let fs = [func::sqrt(), func::kernel(0.5)?];
    for (k, f) in fs.iter().enumerate() {
        for (j, t1) in [0.5, 1.0, 2.0].into_iter().enumerate() {
            let g = negate(&loewner_transform(f, t1)?);
            let seed = cfg.sub_seed(400 + 10 * k as u64 + j as u64);
            let v = check_monotone_order_n(&g, 4, standard_interval(), cfg.count(100), seed)?;
            p.expect(format!("min_eig/{}/t1={t1}", f.name()), v.min_eig_seen, v.passed(), || witness_value(&v));
        }
    }
    Ok(())
}

fn anchor_identity(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let fs = [func::sqrt(), func::kernel(0.5)?, func::power(0.25)];
    let iv = standard_interval();
    for (k, f) in fs.iter().enumerate() {
        let key = format!("max_entry_diff/{}", f.name());
        for trial in 0..cfg.count(100) {
            let mut rng = trial_rng(cfg.sub_seed(500 + k as u64), trial as u64);
            let n = rng.gen_range(1..=6);
            let nodes = sample_nodes(&mut rng, n, iv, NodeSampler::Uniform);
            let anchor = rng.gen_range(iv.lo()..iv.hi());
            let ns = NodeSet::new(nodes.clone(), f.domain())?;
            let lhs = second_dd_matrix(f, &ns, anchor);
            let rhs = loewner_matrix(&loewner_transform(f, anchor)?, &ns).entries;
            let diff = (lhs - rhs).abs().max();
            p.worst(&key, diff, 1e-10, || json!({ "function": f.name(), "nodes": nodes, "anchor": anchor }));
        }
    }
    Ok(())
}

fn extreme_points(_cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let grid = log_spaced(0.1, 10.0, 100);
    for f in func::p1_members() {
        let w = derivative_bound_at_one(&f)?;
        let name = f.name().to_string();
        p.expect(format!("deriv_at_one/{name}"), w, (0.0..=1.0 + 1e-8).contains(&w), || json!({ "function": name }));
        let dec = extreme_decomposition(&f)?;
        for &t in &grid {
            let err = (dec.recombine(t) - f.eval(t)).abs();
            p.worst("max_decomposition_error", err, 1e-10, || json!({ "function": name, "t": t }));
        }
    }
    for l in func::KERNEL_PARAMS {
        let w = derivative_bound_at_one(&func::kernel(l)?)?;
        p.worst("max_kernel_slope_error", (w - l).abs(), 1e-12, || json!({ "lambda": l }));
    }
    Ok(())
}

fn representation(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let ts = log_spaced(1e-3, 1e3, 80);
    for trial in 0..cfg.count(20) {
        let mut rng = trial_rng(cfg.sub_seed(700), trial as u64);
        let mut picks: Vec<usize> = (0..4).map(|_| rng.gen_range(0..grid.len())).collect();
        picks.sort_unstable();
        picks.dedup();
        let atoms: Vec<(f64, f64)> = picks.iter().map(|&i| (grid[i], rng.gen_range(0.2..1.0))).collect();
        let mu = RadonMeasure01::from_atoms(&atoms)?;
        let f = synthesize(&mu);
        let exact = f.eval(1.0) == mu.total_mass();
        p.expect(
            "normalisation_exact",
            if exact { 1.0 } else { 0.0 },
            exact,
            || json!({ "atoms": atoms, "f1": f.eval(1.0), "mass": mu.total_mass() }),
        );
        let samples: Vec<(f64, f64)> = ts.iter().map(|&t| (t, f.eval(t))).collect();
        let fit = fit_measure(&samples, &grid, None)?;
        let err = atoms.iter().map(|&(l, w)| (fit.measure.atom_mass(l) - w).abs()).fold(0.0, f64::max);
        let extra = (fit.measure.total_mass() - mu.total_mass()).abs();
        p.worst("round_trip_weight_error", err.max(extra), 1e-8, || json!({ "atoms": atoms }));
    }

    let sq = func::sqrt();
    let samples: Vec<(f64, f64)> = log_spaced(1e-3, 1e3, 100).into_iter().map(|t| (t, sq.eval(t))).collect();
    let fit = fit_measure(&samples, &default_lambda_grid(200), None)?;
    p.expect("sqrt_fit_residual", fit.residual, fit.residual <= 1e-6, || json!({ "grid": "default_lambda_grid(200)" }));

    let axis = log_spaced(1e-2, 1e2, 50);
    for &s in &axis {
        for &t in &axis {
            let lhs = kernel_inf(HalfLinePoint::Finite(s), t);
            let rhs = kernel01(s / (1.0 + s), t);
            p.worst("kernel_conversion_rel_error", (lhs - rhs).abs() / lhs, 1e-14, || json!({ "s": s, "t": t }));
        }
    }
    Ok(())
}

fn kubo_ando(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let specs = [
        ("arithmetic", ConnectionSpec::arithmetic()),
        ("harmonic", ConnectionSpec::harmonic()),
        ("geometric:200", ConnectionSpec::geometric_quadrature(200)?),
    ];
    let trials = cfg.count(100);
    for (k, (name, spec)) in specs.iter().enumerate() {
        let seed = cfg.sub_seed(800 + 10 * k as u64);
        let m = check_axiom_monotone(spec, 4, trials, seed, cfg.tol)?;
        p.expect(format!("monotone_min_eig/{name}"), m.min_eig_seen, m.passed, || witness_value(&m));
        let t = check_axiom_transformer(spec, 4, trials, seed + 1, cfg.tol)?;
        p.expect(format!("transformer_min_eig/{name}"), t.min_eig_seen, t.passed, || witness_value(&t));
        p.expect(format!("transformer_residual/{name}"), t.max_residual, t.max_residual <= 1e-8, || witness_value(&t));
        let c = check_axiom_continuity(spec, 4, 16, trials, seed + 2, cfg.tol)?;
        p.expect(format!("continuity_bound_ratio/{name}"), c.worst_bound_ratio, c.passed, || witness_value(&c));

        let f = representing_function(spec)?;
        let g = synthesize(&convert_measure(&spec.to_measure()?)?);
        for x in log_spaced(1e-2, 1e2, 50) {
            let err = (f.eval(x) - g.eval(x)).abs() / f.eval(x).max(1.0);
            p.worst("representing_vs_synthesis", err, 1e-12, || json!({ "spec": name, "x": x }));
        }
    }

    let spec = &specs[2].1;
    let mut pairs = vec![(HermitianMatrix::diag(&[1.0, 4.0]), HermitianMatrix::diag(&[4.0, 1.0]))];
    for trial in 0..cfg.count(100) {
        let mut rng = trial_rng(cfg.sub_seed(850), trial as u64);
        let n = rng.gen_range(1..=4);
        pairs.push((
            random_hermitian_with_spectrum(&mut rng, n, 0.25, 4.0),
            random_hermitian_with_spectrum(&mut rng, n, 0.25, 4.0),
        ));
    }
    for (a, b) in &pairs {
        let got = evaluate_connection(spec, a, b)?;
        let want = geometric_mean_closed_form(a, b)?;
        let err = got.sub(&want)?.frobenius_norm() / want.frobenius_norm();
        p.worst("geometric_rel_error", err, 1e-6, || json!({ "a": a, "b": b }));
    }
    Ok(())
}

fn regularisation(_cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let m = Mollifier::standard();
    let mass = cached_rule(4).integrate(-1.0, 1.0, |x| m.density(x));
    p.expect("normalisation_error", (mass - 1.0).abs(), (mass - 1.0).abs() <= 1e-10, || json!({}));

    let aff = func::affine(0.7, -1.3);
    for x in [-2.0, 0.0, 1.5, 4.0] {
        for eps in [0.5, 0.1, 0.01] {
            let err = (mollify(&aff, eps, x)? - aff.eval(x)).abs();
            p.worst("affine_error", err, 1e-10, || json!({ "x": x, "eps": eps }));
        }
    }

    let sq = func::sqrt();
    let grid: Vec<f64> = (0..=200).map(|i| 1.0 + 2.0 * i as f64 / 200.0).collect();
    for eps in [0.1, 0.05, 0.01] {
        // Lipschitz constant of √t on [1 − ε, 3 + ε]
        let k = 0.5 / (1.0f64 - eps).sqrt();
        let mut sup = 0.0f64;
        for &x in &grid {
            sup = sup.max((mollify(&sq, eps, x)? - sq.eval(x)).abs());
        }
        p.expect(format!("lipschitz_ratio/eps={eps}"), sup / (k * eps), sup <= k * eps, || json!({ "eps": eps }));
    }

    for x in [1.0, 2.0, 3.0] {
        let eps = 0.1;
        let h = 1e-4;
        let fd = (mollify(&sq, eps, x + h)? - mollify(&sq, eps, x - h)?) / (2.0 * h);
        let err = (mollify_derivative(&sq, eps, x)? - fd).abs();
        p.worst("derivative_vs_fd", err, 1e-6, || json!({ "x": x, "eps": eps }));
    }
    Ok(())
}

fn choquet(cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    for trial in 0..cfg.count(100) {
        let mut rng = trial_rng(cfg.sub_seed(1000), trial as u64);
        let n = rng.gen_range(2..40);
        let mut x = 0.0;
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                x += rng.gen_range(0.05..1.0);
                x
            })
            .collect();
        let fy: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let gy: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = GridFunction::new(xs.clone(), fy.clone())?;
        let g = f.with_values(gy.clone())?;
        let inst = || json!({ "xs": xs, "f": fy, "g": gy });
        let ef = concave_envelope(&f);
        let eg = concave_envelope(&g);

        let below = f.ys().iter().zip(ef.ys()).map(|(y, e)| y - e).fold(f64::NEG_INFINITY, f64::max);
        p.worst("majorant_violation", below.max(0.0), 0.0, inst);
        let concav = ef.second_differences().into_iter().fold(0.0, f64::max);
        p.worst("max_second_difference", concav, 1e-12, inst);
        let idem = concave_envelope(&ef).ys().iter().zip(ef.ys()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        p.worst("idempotence_error", idem, 1e-12, inst);
        let sum = concave_envelope(&f.with_values(fy.iter().zip(&gy).map(|(a, b)| a + b).collect())?);
        let sub = (0..n).map(|i| sum.ys()[i] - ef.ys()[i] - eg.ys()[i]).fold(0.0, f64::max);
        p.worst("subadditivity_violation", sub, 1e-12, inst);
        let alpha = rng.gen_range(0.0..3.0);
        let scaled = concave_envelope(&f.with_values(fy.iter().map(|y| alpha * y).collect())?);
        let hom = (0..n).map(|i| (scaled.ys()[i] - alpha * ef.ys()[i]).abs()).fold(0.0, f64::max);
        p.worst("homogeneity_error", hom, 1e-12, inst);
        let (c0, c1) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let shifted = concave_envelope(&f.with_values(xs.iter().zip(&fy).map(|(x, y)| y + c0 + c1 * x).collect())?);
        let eq = (0..n).map(|i| (shifted.ys()[i] - ef.ys()[i] - c0 - c1 * xs[i]).abs()).fold(0.0, f64::max);
        p.worst("affine_equivariance_error", eq, 1e-12, inst);
    }

    let mut max_support_excess = 0.0f64;
    for trial in 0..cfg.count(1000) {
        let mut rng = trial_rng(cfg.sub_seed(1001), trial as u64);
        let d = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=30);
        let verts: Vec<Vec<f64>> = (0..m).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let poly = Polytope::new(verts)?;
        let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0f64).powi(3)).collect();
        let s: f64 = raw.iter().sum();
        let x = poly.combine(&raw.iter().enumerate().map(|(i, r)| (i, r / s)).collect::<Vec<_>>());
        let inst = || json!({ "polytope": poly, "x": x });
        match caratheodory_decompose(&x, &poly, 1e-9) {
            Ok(w) => {
                max_support_excess = max_support_excess.max(w.len() as f64 - (d + 1) as f64);
                let recon = poly.combine(&w).iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                p.worst("caratheodory_reconstruction", recon, 1e-9, inst);
                let neg = w.iter().map(|e| -e.1).fold(0.0, f64::max);
                let total = (w.iter().map(|e| e.1).sum::<f64>() - 1.0).abs();
                p.worst("caratheodory_simplex_error", neg.max(total), 1e-12, inst);
                p.worst("caratheodory_support_excess", (w.len() as f64 - (d + 1) as f64).max(0.0), 0.0, inst);
            }
            Err(e) => {
                p.expect("caratheodory_failure", 1.0, false, || json!({ "error": e.to_string(), "instance": inst() }));
            }
        }
    }
    p.note("caratheodory_support_minus_bound", max_support_excess);
    Ok(())
}

fn p1_bounds(_cfg: &RunConfig, p: &mut Probe) -> Result<()> {
    let grid = log_spaced(1e-3, 1e3, 60);
    for f in func::p1_members() {
        let name = f.name().to_string();
        for (i, &t) in grid.iter().enumerate() {
            let ft = f.eval(t);
            let over = (ft - (t + 1.0)) / (t + 1.0);
            p.worst("linear_bound_excess", over.max(0.0), 1e-14, || json!({ "function": name, "t": t }));
            for &s in &grid[i + 1..] {
                let inc = f.eval(s) - ft;
                let cap = (1.0 + 1.0 / t) * (s - t);
                let scale = f.eval(s).abs().max(1.0);
                let neg = (-inc / scale).max(0.0);
                let excess = ((inc - cap) / scale).max(0.0);
                p.worst("increment_negative", neg, 1e-14, || json!({ "function": name, "s": s, "t": t }));
                p.worst("increment_bound_excess", excess, 1e-14, || json!({ "function": name, "s": s, "t": t }));
            }
        }
    }
    Ok(())
}

/// Guard used by the CLI: a report is only meaningful with a positive tolerance.
pub fn validate_config(cfg: &RunConfig) -> Result<()> {
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(Error::usage(format!("tolerance must be positive, got {}", cfg.tol)));
    }
    if cfg.trials == Some(0) {
        return Err(Error::usage("--trials must be at least 1"));
    }
    Ok(())
}
