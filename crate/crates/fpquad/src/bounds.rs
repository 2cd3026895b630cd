//! A-priori error bounds for the full rule: Hunter's Gauss-remainder bound
//! on a confocal ellipse, Kambo's sharper Gauss-Legendre variant, the
//! interpolation-remainder term, and their combination, together with
//! sampling-based estimation of the integrand maximum on the ellipse.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orthogonal::gamma;

/// A confocal ellipse with foci -1, +1 and semi-axis sum rho:
/// z = (rho e^{i t} + rho^{-1} e^{-i t}) / 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseSpec {
    rho: f64,
    samples: usize,
}

impl EllipseSpec {
    pub fn new(rho: f64, samples: usize) -> Result<Self> {
        if !(rho > 1.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ellipse parameter rho = {rho} must be finite and > 1"
            )));
        }
        if samples < 64 {
            return Err(Error::InvalidParameter(format!(
                "need at least 64 boundary samples, got {samples}"
            )));
        }
        Ok(Self { rho, samples })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Boundary point at angle theta.
    pub fn point(&self, theta: f64) -> Complex64 {
        let fwd = Complex64::from_polar(self.rho, theta);
        let bwd = Complex64::from_polar(1.0 / self.rho, -theta);
        0.5 * (fwd + bwd)
    }
}

/// Which Gauss-remainder bound to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVariant {
    /// 4 M(eps_rho) * mass / (rho^{2m-1} (rho - 1)); any Jacobi weight.
    Hunter,
    /// pi M (rho^2 + 1) / (rho^{2m} (rho^2 - 2)); Gauss-Legendre only,
    /// requires rho > sqrt(2).
    Kambo,
}

/// Which form of the interpolation-remainder growth factor to evaluate;
/// the two differ in the base denominator. Statement is the default
/// contract; Proof is the slightly tighter base the derivation yields,
/// kept behind this switch for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpBoundForm {
    /// (1 + (p+2)/n)^{n-p}
    Statement,
    /// (1 + (p+2)/(n+1))^{n-p}
    Proof,
}

/// Inputs a bound report was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub rho: f64,
    pub m_max: f64,
    pub m1: f64,
    pub m2: f64,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub alpha: f64,
    pub beta: f64,
}

/// The combined error bound and its two parts.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub gauss_term: f64,
    pub interp_term: f64,
    pub total: f64,
    pub inputs: BoundInputs,
    pub variant: BoundVariant,
    /// True when `inputs.m_max` came from boundary sampling rather than a
    /// user-supplied certificate: sampling gives a lower estimate of the
    /// true maximum.
    pub m_estimated: bool,
}

/// Bound on the Gauss-rule remainder for an integrand analytic inside the
/// rho-ellipse with |g| <= M on its boundary. `mass` is the weight integral
/// (Hunter only); `alpha`, `beta` validate Kambo's Legendre-only domain.
pub fn gauss_remainder_bound(
    variant: BoundVariant,
    rho: f64,
    m_max: f64,
    mass: f64,
    m: usize,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    if !(m_max >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "boundary maximum must be non-negative, got {m_max}"
        )));
    }
    match variant {
        BoundVariant::Hunter => {
            if !(rho > 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "Hunter bound needs rho > 1, got {rho}"
                )));
            }
            Ok(4.0 * m_max * mass / (rho.powi(2 * m as i32 - 1) * (rho - 1.0)))
        }
        BoundVariant::Kambo => {
            if alpha != 0.0 || beta != 0.0 {
                return Err(Error::InvalidParameter(
                    "Kambo bound applies to the Legendre weight only".into(),
                ));
            }
            if !(rho > std::f64::consts::SQRT_2) {
                return Err(Error::InvalidParameter(format!(
                    "Kambo bound needs rho > sqrt(2), got {rho}"
                )));
            }
            Ok(std::f64::consts::PI * m_max * (rho * rho + 1.0)
                / (rho.powi(2 * m as i32) * (rho * rho - 2.0)))
        }
    }
}

/// Interpolation-remainder bound in the statement form
/// (M1 + M2)/p! * 1/(n-p)! * (1 + (p+2)/n)^{n-p}.
pub fn interp_remainder_bound(m1: f64, m2: f64, n: usize, p: usize) -> Result<f64> {
    interp_remainder_bound_with_form(m1, m2, n, p, InterpBoundForm::Statement)
}

pub fn interp_remainder_bound_with_form(
    m1: f64,
    m2: f64,
    n: usize,
    p: usize,
    form: InterpBoundForm,
) -> Result<f64> {
    if n <= p {
        return Err(Error::InvalidParameter(format!(
            "need n > p, got n = {n}, p = {p}"
        )));
    }
    if !(m1 >= 0.0 && m2 >= 0.0) {
        return Err(Error::InvalidParameter(
            "derivative bounds M1, M2 must be non-negative".into(),
        ));
    }
    let base_denom = match form {
        InterpBoundForm::Statement => n as f64,
        InterpBoundForm::Proof => (n + 1) as f64,
    };
    let growth = (1.0 + (p as f64 + 2.0) / base_denom).powi((n - p) as i32);
    // (M1+M2)/(p! (n-p)!): accumulate the reciprocal factorials to avoid
    // overflow at large n
    let mut factor = 1.0;
    for j in 1..=p {
        factor /= j as f64;
    }
    for j in 1..=(n - p) {
        factor /= j as f64;
    }
    Ok((m1 + m2) * factor * growth)
}

pub fn total_bound(gauss_term: f64, interp_term: f64) -> f64 {
    gauss_term + interp_term
}

/// The combined bound: Hunter's Gauss term in its Gauss-Jacobi form
/// 2^{alpha+beta+3} Gamma(alpha+1) Gamma(beta+1) M / (Gamma(alpha+beta+2)
/// rho^{2m-1} (rho-1)) plus the interpolation term.
#[allow(clippy::too_many_arguments)]
pub fn combined_bound(
    rho: f64,
    m_max: f64,
    m: usize,
    alpha: f64,
    beta: f64,
    m1: f64,
    m2: f64,
    n: usize,
    p: usize,
) -> Result<BoundReport> {
    let mass = 2f64.powf(alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0)
        / gamma(alpha + beta + 2.0);
    let gauss_term = gauss_remainder_bound(BoundVariant::Hunter, rho, m_max, mass, m, alpha, beta)?;
    let interp_term = interp_remainder_bound(m1, m2, n, p)?;
    Ok(BoundReport {
        gauss_term,
        interp_term,
        total: total_bound(gauss_term, interp_term),
        inputs: BoundInputs {
            rho,
            m_max,
            m1,
            m2,
            m,
            n,
            p,
            alpha,
            beta,
        },
        variant: BoundVariant::Hunter,
        m_estimated: false,
    })
}

/// Estimates max |f| on the ellipse boundary from a uniform angle grid,
/// refined by golden-section search around the grid maximum. A lower
/// estimate of the true maximum; report it as such.
pub fn max_on_ellipse<F>(f: F, spec: EllipseSpec) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let eval = |theta: f64| -> Result<f64> {
        let z = spec.point(theta);
        let v = f(z);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::ComplexEvaluation { re: z.re, im: z.im });
        }
        Ok(v.norm())
    };

    let samples = spec.samples();
    let step = 2.0 * std::f64::consts::PI / samples as f64;
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    for j in 0..samples {
        let theta = j as f64 * step;
        let v = eval(theta)?;
        if v > best {
            best = v;
            best_theta = theta;
        }
    }

    // golden-section refinement on the bracket around the grid maximum
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut lo = best_theta - step;
    let mut hi = best_theta + step;
    let mut t1 = hi - inv_phi * (hi - lo);
    let mut t2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(t1)?;
    let mut f2 = eval(t2)?;
    for _ in 0..80 {
        if f1 < f2 {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + inv_phi * (hi - lo);
            f2 = eval(t2)?;
        } else {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - inv_phi * (hi - lo);
            f1 = eval(t1)?;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(best.max(f1).max(f2))
}

/// The rho candidates used when no single rho is prescribed: a geometric
/// grid of 16 points from 1.05 up to 0.95 * rho_sing, with rho_sing the
/// ellipse parameter of the integrand's nearest complex singularity
/// (infinity, capped at 10, for entire functions).
pub fn rho_grid(rho_sing: Option<f64>) -> Result<Vec<f64>> {
    let cap = rho_sing.unwrap_or(f64::INFINITY).min(10.0);
    let hi = 0.95 * cap;
    let lo = 1.05;
    if !(hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "singularity ellipse rho = {cap} leaves no admissible rho above {lo}"
        )));
    }
    let count = 16;
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    let mut grid = Vec::with_capacity(count);
    let mut value = lo;
    for _ in 0..count {
        grid.push(value);
        value *= ratio;
    }
    Ok(grid)
}

/// Samples M(eps_rho) for every rho in the grid and returns the report with
/// the smallest total bound. `f` must be analytic inside the largest ellipse
/// of the grid.
#[allow(clippy::too_many_arguments)]
pub fn best_bound_over_grid<F>(
    f: F,
    rho_sing: Option<f64>,
    m: usize,
    alpha: f64,
    beta: f64,
    m1: f64,
    m2: f64,
    n: usize,
    p: usize,
) -> Result<BoundReport>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut best: Option<BoundReport> = None;
    for rho in rho_grid(rho_sing)? {
        let m_max = max_on_ellipse(&f, EllipseSpec::new(rho, 256)?)?;
        let mut report = combined_bound(rho, m_max, m, alpha, beta, m1, m2, n, p)?;
        report.m_estimated = true;
        if best.as_ref().is_none_or(|b| report.total < b.total) {
            best = Some(report);
        }
    }
    Ok(best.expect("rho grid is never empty"))
}
