//! Assembly of the full quadrature rule: closest-node selection, surrogate
//! substitution at that node, the analytic moment terms, the naive baseline
//! rule for comparison, and the search for a good interpolation node count.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interpolation::{self, coefficient_table, layout_nodes, surrogate_divdiff};
use crate::moments::finite_part_moments;
use crate::orthogonal::{gauss_rule, WeightFamily};

type ValueFn = dyn Fn(f64) -> f64 + Send + Sync;
type DerivativesFn = dyn Fn(f64, usize) -> Vec<f64> + Send + Sync;
type ComplexFn = dyn Fn(Complex64) -> Complex64 + Send + Sync;

/// The integrand f together with its derivative values at the singularity
/// and an optional complex-plane evaluator for the error bounds.
///
/// Derivatives are caller-supplied, never estimated numerically: the rule
/// consumes f(xi), f'(xi), ..., f^(p)(xi) exactly as written.
#[derive(Clone)]
pub struct Integrand {
    label: String,
    value: Arc<ValueFn>,
    derivatives: Arc<DerivativesFn>,
    complex_value: Option<Arc<ComplexFn>>,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("label", &self.label)
            .field("complex_value", &self.complex_value.is_some())
            .finish()
    }
}

impl Integrand {
    /// `derivatives(xi, p)` must return the p + 1 values
    /// f(xi), f'(xi), ..., f^(p)(xi).
    pub fn new<V, D>(label: impl Into<String>, value: V, derivatives: D) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64, usize) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            value: Arc::new(value),
            derivatives: Arc::new(derivatives),
            complex_value: None,
        }
    }

    pub fn with_complex<C>(mut self, complex_value: C) -> Self
    where
        C: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.complex_value = Some(Arc::new(complex_value));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }

    /// f(xi), f'(xi), ..., f^(max_order)(xi).
    pub fn derivatives_at(&self, xi: f64, max_order: usize) -> Vec<f64> {
        (self.derivatives)(xi, max_order)
    }

    pub fn complex_value(&self, z: Complex64) -> Option<Complex64> {
        self.complex_value.as_ref().map(|f| f(z))
    }

    pub fn has_complex(&self) -> bool {
        self.complex_value.is_some()
    }
}

/// Parameters a quadrature result was produced with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleParameters {
    pub m: usize,
    pub n: usize,
    pub nu: usize,
    pub h: f64,
    pub p: usize,
    pub xi: f64,
}

/// The quadrature value together with its term breakdown.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    /// The full rule value (gauss_sum + moment_sum).
    pub value: f64,
    /// Gauss part, including the surrogate contributions.
    pub gauss_sum: f64,
    /// Per closest node: (Gauss node index, lambda_c * surrogate divided difference).
    pub surrogate_terms: Vec<(usize, f64)>,
    /// sum_j f^(j)(xi)/j! * mu_{p+1-j}(xi).
    pub moment_sum: f64,
    /// Indices of the Gauss node(s) routed through the surrogate (1 or 2).
    pub closest_indices: Vec<usize>,
    pub parameters: RuleParameters,
}

/// Indices of the Gauss node(s) closest to xi: a single index in general,
/// both neighbours when xi sits halfway between two adjacent nodes (within
/// 1e-14 of the node span).
pub fn select_closest(nodes: &[f64], xi: f64) -> Vec<usize> {
    assert!(!nodes.is_empty(), "empty node list");
    let mut best = 0usize;
    let mut best_dist = f64::INFINITY;
    for (idx, &x) in nodes.iter().enumerate() {
        let dist = (xi - x).abs();
        if dist < best_dist {
            best = idx;
            best_dist = dist;
        }
    }
    let span = nodes[nodes.len() - 1] - nodes[0];
    let tol = 1e-14 * span.max(f64::MIN_POSITIVE);
    let mut out = vec![best];
    if best_dist > 0.0 {
        if best > 0 && ((xi - nodes[best - 1]).abs() - best_dist).abs() <= tol {
            out.insert(0, best - 1);
        }
        if best + 1 < nodes.len() && ((xi - nodes[best + 1]).abs() - best_dist).abs() <= tol {
            out.push(best + 1);
        }
    }
    out
}

fn check_derivative_consistency(f: &Integrand, xi: f64, derivatives: &[f64]) -> Result<()> {
    let direct = f.value(xi);
    if (derivatives[0] - direct).abs() > 1e-12 * (1.0 + direct.abs()) {
        return Err(Error::InvalidParameter(format!(
            "integrand `{}` is inconsistent: derivatives_at({xi}, ..)[0] = {} but value({xi}) = {}",
            f.label(),
            derivatives[0],
            direct
        )));
    }
    Ok(())
}

/// The moment term sum_{j=0..p} f^(j)(xi)/j! * mu_{p+1-j}(xi).
fn moment_term(w: &WeightFamily, xi: f64, p: usize, derivatives: &[f64]) -> Result<f64> {
    let moments = finite_part_moments(w, xi, p)?;
    let mut factorial = 1.0;
    let mut sum = 0.0;
    for (j, &fj) in derivatives.iter().enumerate().take(p + 1) {
        if j > 0 {
            factorial *= j as f64;
        }
        sum += fj / factorial * moments.value(p + 1 - j);
    }
    Ok(sum)
}

/// Evaluates the full rule H*_{m,n,p}(w; f; xi): an m-point Gauss rule on
/// the subtracted integrand with the divided difference at the closest
/// node(s) replaced by the interpolant surrogate on an (n+1)-node layout,
/// plus the analytic moment term.
pub fn evaluate_hfp(
    f: &Integrand,
    w: &WeightFamily,
    xi: f64,
    p: usize,
    m: usize,
    n: usize,
) -> Result<QuadratureResult> {
    if n <= p {
        return Err(Error::InvalidParameter(format!(
            "need n > p, got n = {n}, p = {p}"
        )));
    }
    let rule = gauss_rule(w, m)?;
    let layout = layout_nodes(xi, w.interval(), n)?;
    let table = coefficient_table(&layout, p)?;
    let derivatives = f.derivatives_at(xi, p);
    if derivatives.len() < p + 1 {
        return Err(Error::InvalidParameter(format!(
            "integrand `{}` returned {} derivative values, need {}",
            f.label(),
            derivatives.len(),
            p + 1
        )));
    }
    check_derivative_consistency(f, xi, &derivatives)?;

    let closest = select_closest(rule.nodes(), xi);
    let f_at_layout: Vec<f64> = layout.nodes().iter().map(|&x| f.value(x)).collect();

    let mut gauss_sum = 0.0;
    let mut surrogate_terms = Vec::with_capacity(closest.len());
    for (k, (&x_k, &lambda_k)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        if closest.contains(&k) {
            let term = lambda_k * surrogate_divdiff(&table, &f_at_layout, x_k)?;
            surrogate_terms.push((k, term));
            gauss_sum += term;
        } else {
            gauss_sum += lambda_k
                * interpolation::confluent_divdiff_from_values(
                    f.value(x_k),
                    &derivatives,
                    xi,
                    p,
                    x_k,
                )?;
        }
    }

    let moment_sum = moment_term(w, xi, p, &derivatives)?;
    Ok(QuadratureResult {
        value: gauss_sum + moment_sum,
        gauss_sum,
        surrogate_terms,
        moment_sum,
        closest_indices: closest,
        parameters: RuleParameters {
            m,
            n,
            nu: layout.nu(),
            h: layout.h(),
            p,
            xi,
        },
    })
}

/// The plain subtracted rule: every Gauss node uses the direct divided
/// difference, cancellation included. A Gauss node equal to xi is an error,
/// not a silent skip.
pub fn evaluate_baseline(
    f: &Integrand,
    w: &WeightFamily,
    xi: f64,
    p: usize,
    m: usize,
) -> Result<f64> {
    let rule = gauss_rule(w, m)?;
    let derivatives = f.derivatives_at(xi, p);
    if derivatives.len() < p + 1 {
        return Err(Error::InvalidParameter(format!(
            "integrand `{}` returned {} derivative values, need {}",
            f.label(),
            derivatives.len(),
            p + 1
        )));
    }
    check_derivative_consistency(f, xi, &derivatives)?;
    let mut gauss_sum = 0.0;
    for (&x_k, &lambda_k) in rule.nodes().iter().zip(rule.weights()) {
        gauss_sum += lambda_k
            * interpolation::confluent_divdiff_from_values(f.value(x_k), &derivatives, xi, p, x_k)?;
    }
    Ok(gauss_sum + moment_term(w, xi, p, &derivatives)?)
}

/// How [`search_optimal_n`] scores candidate node counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchCriterion {
    /// Minimise |H*(n) - exact|; used when the true value is known.
    Reference(f64),
    /// No reference available: pick the onset of the plateau where the
    /// successive differences |H*(n) - H*(n+1)| stop decreasing for three
    /// consecutive increments. Ties break towards smaller n.
    Stabilization,
}

/// Diagnostics from a node-count search.
#[derive(Debug, Clone)]
pub struct SearchDiagnostics {
    /// (n, H*(n)) for every candidate that evaluated successfully.
    pub evaluations: Vec<(usize, f64)>,
    /// The score the winner minimised: |H - exact| for Reference, the
    /// successive difference at the plateau onset for Stabilization.
    pub score: f64,
}

/// Searches `n_range` (inclusive) for the node count n-hat that the given
/// criterion prefers. Candidates whose layout is infeasible are skipped.
pub fn search_optimal_n(
    f: &Integrand,
    w: &WeightFamily,
    xi: f64,
    p: usize,
    m: usize,
    n_range: (usize, usize),
    criterion: SearchCriterion,
) -> Result<(usize, SearchDiagnostics)> {
    let (lo, hi) = n_range;
    if lo > hi {
        return Err(Error::InvalidParameter(format!(
            "empty search range [{lo}, {hi}]"
        )));
    }
    if lo <= p {
        return Err(Error::InvalidParameter(format!(
            "search range must start above p = {p}, got lo = {lo}"
        )));
    }
    if hi > 200 {
        return Err(Error::InvalidParameter(format!(
            "search range upper limit {hi} exceeds 200"
        )));
    }
    let mut evaluations = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        match evaluate_hfp(f, w, xi, p, m, n) {
            Ok(result) => evaluations.push((n, result.value)),
            Err(Error::LayoutConstraint { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if evaluations.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no feasible n in [{lo}, {hi}] for xi = {xi}"
        )));
    }

    match criterion {
        SearchCriterion::Reference(exact) => {
            let mut best = evaluations[0].0;
            let mut best_err = (evaluations[0].1 - exact).abs();
            for &(n, value) in &evaluations[1..] {
                let err = (value - exact).abs();
                if err < best_err {
                    best = n;
                    best_err = err;
                }
            }
            Ok((
                best,
                SearchDiagnostics {
                    evaluations,
                    score: best_err,
                },
            ))
        }
        SearchCriterion::Stabilization => {
            if evaluations.len() == 1 {
                let (n, _) = evaluations[0];
                return Ok((
                    n,
                    SearchDiagnostics {
                        evaluations,
                        score: 0.0,
                    },
                ));
            }
            let diffs: Vec<f64> = evaluations
                .windows(2)
                .map(|w| (w[1].1 - w[0].1).abs())
                .collect();
            // plateau onset: three consecutive non-decreasing successive
            // differences starting here
            let mut pick = None;
            for i in 0..diffs.len() {
                if i + 3 < diffs.len()
                    && diffs[i + 1] >= diffs[i]
                    && diffs[i + 2] >= diffs[i + 1]
                    && diffs[i + 3] >= diffs[i + 2]
                {
                    pick = Some(i);
                    break;
                }
            }
            // no plateau: fall back to the smallest successive difference
            let idx = pick.unwrap_or_else(|| {
                let mut best = 0;
                for (i, &d) in diffs.iter().enumerate() {
                    if d < diffs[best] {
                        best = i;
                    }
                }
                best
            });
            Ok((
                evaluations[idx].0,
                SearchDiagnostics {
                    score: diffs[idx],
                    evaluations,
                },
            ))
        }
    }
}
