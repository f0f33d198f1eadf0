//! First and second divided differences, Löwner matrices and the
//! divided-difference transformation `f ↦ Δf(·, t₁)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::func::ScalarFunction;
use crate::hermitian::{HermitianMatrix, Interval};

/// Relative gap below which two nodes are treated as coincident.
pub const TAU_NODE: f64 = 1e-7;

fn coincident(s: f64, t: f64) -> bool {
    (t - s).abs() <= TAU_NODE * 1f64.max(s.abs()).max(t.abs())
}

/// Nonempty list of nodes strictly inside a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<f64>,
    domain: Interval,
}

impl NodeSet {
    pub fn new(nodes: Vec<f64>, domain: Interval) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::usage("node set must be nonempty"));
        }
        if let Some(bad) = nodes.iter().find(|t| !domain.contains(**t)) {
            return Err(Error::usage(format!("node {bad} is not inside {domain}")));
        }
        Ok(NodeSet { nodes, domain })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `[Δf(tᵢ, tⱼ)]` over a node set.
#[derive(Debug, Clone)]
pub struct LoewnerMatrix {
    pub nodes: NodeSet,
    pub entries: DMatrix<f64>,
}

impl LoewnerMatrix {
    pub fn to_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::from_real(&self.entries).expect("Löwner matrices are exactly symmetric")
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }
}

/// First divided difference; `f′` at the midpoint when the nodes coincide.
pub fn dd1(f: &ScalarFunction, s: f64, t: f64) -> f64 {
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    if coincident(s, t) {
        f.deriv(0.5 * (s + t))
    } else {
        (f.eval(t) - f.eval(s)) / (t - s)
    }
}

/// Second divided difference, symmetric in its three arguments.
///
/// Distinct nodes use `Σᵢ f(tᵢ)/Πⱼ≠ᵢ(tᵢ−tⱼ)` on the sorted triple; one
/// coincident pair uses `(Δf(m, c) − f′(m))/(c − m)` at the pair midpoint `m`;
/// a coincident triple gives `f″/2`.
pub fn dd2(f: &ScalarFunction, a: f64, b: f64, c: f64) -> f64 {
    let mut t = [a, b, c];
    t.sort_by(f64::total_cmp);
    let [x, y, z] = t;
    match (coincident(x, y), coincident(y, z)) {
        (true, true) => 0.5 * f.deriv2(y),
        (true, false) => pair_limit(f, 0.5 * (x + y), z),
        (false, true) => pair_limit(f, 0.5 * (y + z), x),
        (false, false) => {
            if coincident(x, z) {
                // relative threshold: the outer pair can be within τ when neither adjacent pair is
                0.5 * f.deriv2(y)
            } else {
                f.eval(x) / ((x - y) * (x - z))
                    + f.eval(y) / ((y - x) * (y - z))
                    + f.eval(z) / ((z - x) * (z - y))
            }
        }
    }
}

fn pair_limit(f: &ScalarFunction, m: f64, c: f64) -> f64 {
    ((f.eval(c) - f.eval(m)) / (c - m) - f.deriv(m)) / (c - m)
}

pub fn loewner_matrix(f: &ScalarFunction, ns: &NodeSet) -> LoewnerMatrix {
    let t = ns.nodes();
    let n = t.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = dd1(f, t[i], t[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    LoewnerMatrix { nodes: ns.clone(), entries: m }
}

/// `[Δ²f(tᵢ, tⱼ, anchor)]`.
pub fn second_dd_matrix(f: &ScalarFunction, ns: &NodeSet, anchor: f64) -> DMatrix<f64> {
    let t = ns.nodes();
    let n = t.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = dd2(f, t[i], t[j], anchor);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// `F(t) = Δf(t, t₁)`, with `F′(t) = Δ²f(t, t, t₁)`.
pub fn loewner_transform(f: &ScalarFunction, t1: f64) -> Result<ScalarFunction> {
    if !f.domain().contains(t1) {
        return Err(Error::usage(format!("anchor {t1} is not inside {}", f.domain())));
    }
    let (g, h) = (f.clone(), f.clone());
    Ok(ScalarFunction::new(
        format!("L[{t1}]{}", f.name()),
        f.domain(),
        move |t| dd1(&g, t, t1),
    )
    .with_derivative(move |t| dd2(&h, t, t, t1)))
}
