//! Gauss quadrature rules and weight masses for the supported weight families.
//!
//! Chebyshev (first kind) rules come from the cosine closed form. Legendre
//! and Gauss-Jacobi rules are computed by the Golub-Welsch procedure: the
//! symmetric tridiagonal Jacobi matrix of three-term recurrence
//! coefficients is diagonalised with an implicit-shift QL iteration that
//! accumulates only the first eigenvector components, giving the weights in
//! O(m^2) work.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// User-supplied weight: provides its own Gauss rules, total mass and
/// finite-part moments. Implementations must be pure and deterministic.
pub trait CustomWeight: Send + Sync {
    fn label(&self) -> &str;
    /// m-point Gauss rule on the weight's interval, nodes ascending.
    fn gauss_rule(&self, m: usize) -> Result<GaussRule>;
    /// Total mass of the weight over its interval.
    fn mass(&self) -> f64;
    /// Finite-part moment mu_q(xi) = =int w(x) (x - xi)^{-q} dx, q >= 1.
    fn moment(&self, xi: f64, q: usize) -> Result<f64>;
}

#[derive(Clone)]
pub enum WeightKind {
    /// w(x) = 1.
    Legendre,
    /// w(x) = (1 - x^2)^{-1/2} pulled back to the interval.
    Chebyshev1,
    /// w(x) = (1 - t)^alpha (1 + t)^beta in the mapped variable t on (-1, 1).
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    Custom(Arc<dyn CustomWeight>),
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Legendre => write!(f, "Legendre"),
            WeightKind::Chebyshev1 => write!(f, "Chebyshev1"),
            WeightKind::Jacobi { alpha, beta } => write!(f, "Jacobi({alpha}, {beta})"),
            WeightKind::Custom(w) => write!(f, "Custom({})", w.label()),
        }
    }
}

/// A weight function together with its interval (a, b).
#[derive(Debug, Clone)]
pub struct WeightFamily {
    kind: WeightKind,
    a: f64,
    b: f64,
}

impl WeightFamily {
    pub fn new(kind: WeightKind, a: f64, b: f64) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval ({a}, {b}) must satisfy a < b with finite endpoints"
            )));
        }
        if let WeightKind::Jacobi { alpha, beta } = kind {
            if !(alpha > -1.0) || !(beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "Jacobi parameters alpha = {alpha}, beta = {beta} must be finite and > -1"
                )));
            }
        }
        Ok(Self { kind, a, b })
    }

    pub fn legendre(a: f64, b: f64) -> Result<Self> {
        Self::new(WeightKind::Legendre, a, b)
    }

    pub fn chebyshev1(a: f64, b: f64) -> Result<Self> {
        Self::new(WeightKind::Chebyshev1, a, b)
    }

    pub fn jacobi(alpha: f64, beta: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(WeightKind::Jacobi { alpha, beta }, a, b)
    }

    pub fn custom(provider: Arc<dyn CustomWeight>, a: f64, b: f64) -> Result<Self> {
        Self::new(WeightKind::Custom(provider), a, b)
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// An m-point Gauss rule: strictly increasing interior nodes with positive
/// weights summing to the weight mass.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidParameter(
                "rule needs equally many (>= 1) nodes and weights".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter(
                "rule nodes must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidParameter(
                "rule weights must be positive".into(),
            ));
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to `f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// The m-point Gauss rule for the weight family, exact for polynomials of
/// degree <= 2m - 1 against the weight.
pub fn gauss_rule(w: &WeightFamily, m: usize) -> Result<GaussRule> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "Gauss rule needs at least one node".into(),
        ));
    }
    let (a, b) = w.interval();
    match w.kind() {
        WeightKind::Custom(provider) => provider.gauss_rule(m),
        WeightKind::Chebyshev1 => {
            // x_k = cos((2k-1) pi / (2m)), lambda_k = pi / m, mapped to (a, b).
            let mut nodes: Vec<f64> = (1..=m)
                .map(|k| ((2 * k - 1) as f64 * PI / (2.0 * m as f64)).cos())
                .collect();
            nodes.reverse();
            symmetrize(&mut nodes, &mut vec![PI / m as f64; m]);
            let jac = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let nodes = nodes.iter().map(|&t| mid + jac * t).collect();
            GaussRule::new(nodes, vec![jac * PI / m as f64; m])
        }
        WeightKind::Legendre => jacobi_rule(0.0, 0.0, a, b, m),
        WeightKind::Jacobi { alpha, beta } => jacobi_rule(*alpha, *beta, a, b, m),
    }
}

/// Integral of the weight over its interval.
pub fn weight_mass(w: &WeightFamily) -> f64 {
    let (a, b) = w.interval();
    let jac = 0.5 * (b - a);
    match w.kind() {
        WeightKind::Legendre => b - a,
        WeightKind::Chebyshev1 => jac * PI,
        WeightKind::Jacobi { alpha, beta } => jac * jacobi_mass(*alpha, *beta),
        WeightKind::Custom(provider) => provider.mass(),
    }
}

/// Mass of (1-t)^alpha (1+t)^beta on (-1, 1):
/// 2^{alpha+beta+1} Gamma(alpha+1) Gamma(beta+1) / Gamma(alpha+beta+2).
fn jacobi_mass(alpha: f64, beta: f64) -> f64 {
    2f64.powf(alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0)
        / gamma(alpha + beta + 2.0)
}

fn jacobi_rule(alpha: f64, beta: f64, a: f64, b: f64, m: usize) -> Result<GaussRule> {
    // Jacobi matrix of the monic three-term recurrence on (-1, 1).
    let mut diag = vec![0.0; m];
    let mut offdiag = vec![0.0; m];
    let ab = alpha + beta;
    diag[0] = (beta - alpha) / (ab + 2.0);
    for k in 1..m {
        let kf = k as f64;
        let denom = 2.0 * kf + ab;
        diag[k] = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
        let beta_k = if k == 1 {
            // reduced form: the (k + alpha + beta) factor cancels, avoiding
            // 0/0 at alpha + beta = -1 (e.g. the Chebyshev parameters)
            4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
        } else {
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                / (denom * denom * (denom + 1.0) * (denom - 1.0))
        };
        offdiag[k] = beta_k.sqrt();
    }

    let mut first_components = vec![0.0; m];
    first_components[0] = 1.0;
    tridiag_ql_implicit(&mut diag, &mut offdiag, &mut first_components)?;

    let mass = jacobi_mass(alpha, beta);
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first_components.iter().map(|&z| mass * z * z))
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    if alpha == beta {
        symmetrize(&mut nodes, &mut weights);
    }

    let jac = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = nodes.into_iter().map(|t| mid + jac * t).collect();
    let weights = weights.into_iter().map(|w| jac * w).collect();
    GaussRule::new(nodes, weights)
}

/// For an even weight the rule is symmetric; enforce it exactly so mirrored
/// nodes and weights match to the bit (the odd-m middle node becomes 0).
fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let m = nodes.len();
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
}

/// Implicit-shift QL iteration for a symmetric tridiagonal matrix.
///
/// `diag` holds the diagonal, `offdiag[1..]` the subdiagonal (offdiag[0]
/// unused). On return `diag` holds the eigenvalues (unsorted) and `z` has
/// been transformed by the accumulated plane rotations; starting z = e_1
/// yields the first component of each normalised eigenvector.
fn tridiag_ql_implicit(diag: &mut [f64], offdiag: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    // shift the subdiagonal so e[i] couples diag[i] and diag[i+1]
    for i in 1..n {
        offdiag[i - 1] = offdiag[i];
    }
    offdiag[n - 1] = 0.0;
    let e = offdiag;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 64 {
                return Err(Error::EigenNoConvergence);
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = diag[m] - diag[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflowed {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Gamma function by the Lanczos approximation (g = 7, 9 terms), accurate to
/// better than 1e-13 relative for the argument range used here.
pub(crate) fn gamma(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = COEFFS[0];
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}
