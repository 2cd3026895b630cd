//! Shared oracles for the integration suites: adaptive quadrature,
//! Richardson extrapolation, the epsilon-excision finite-part oracle,
//! polynomial helpers, and an antiderivative-algebra reference for
//! finite parts of monomials. Everything here is independent of the
//! library's own evaluation paths.

#![allow(dead_code)]

/// Adaptive Simpson quadrature with the usual 1/15 Richardson error gauge.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), mid, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        mid: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lmid, flm) = simpson(f, a, fa, mid, fm);
        let (right, rmid, frm) = simpson(f, mid, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, mid, fm, left, lmid, flm, 0.5 * tol, depth - 1)
                + recurse(f, mid, fm, b, fb, right, rmid, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, mid, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, mid, fm, tol, 48)
}

/// Neville polynomial extrapolation of (x_i, y_i) samples to x = 0.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut table = ys.to_vec();
    let n = table.len();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = table[i] + (table[i] - table[i - 1]) * xs[i] / (xs[i - level] - xs[i]);
        }
    }
    table[n - 1]
}

/// 16-point Gauss-Legendre rule on (-1, 1); values as in the standard
/// tables.
#[allow(clippy::excessive_precision)]
const GL16: [(f64, f64); 16] = [
    (-9.8940093499164994e-1, 2.7152459411754440e-2),
    (-9.4457502307323249e-1, 6.2253523938647373e-2),
    (-8.6563120238783187e-1, 9.5158511682492619e-2),
    (-7.5540440835500333e-1, 1.2462897125553431e-1),
    (-6.1787624440264377e-1, 1.4959598881657654e-1),
    (-4.5801677765722748e-1, 1.6915651939500284e-1),
    (-2.8160355077925892e-1, 1.8260341504492375e-1),
    (-9.5012509837637371e-2, 1.8945061045506828e-1),
    (9.5012509837637371e-2, 1.8945061045506828e-1),
    (2.8160355077925892e-1, 1.8260341504492375e-1),
    (4.5801677765722748e-1, 1.6915651939500284e-1),
    (6.1787624440264377e-1, 1.4959598881657654e-1),
    (7.5540440835500333e-1, 1.2462897125553431e-1),
    (8.6563120238783187e-1, 9.5158511682492619e-2),
    (9.4457502307323249e-1, 6.2253523938647373e-2),
    (9.8940093499164994e-1, 2.7152459411754440e-2),
];

/// Composite 16-point Gauss-Legendre quadrature over equal panels.
pub fn composite_gl16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut acc = 0.0;
        for &(x, w) in &GL16 {
            acc += w * f(mid + 0.5 * h * x);
        }
        total += 0.5 * h * acc;
    }
    total
}

/// Integral of f over [lo, hi] (0 < lo < hi) in the log-stretched variable
/// u = ln t, which regularises the power singularity at t = 0.
fn log_stretched<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, panels: usize) -> f64 {
    composite_gl16(
        &|u: f64| {
            let t = u.exp();
            t * f(t)
        },
        lo.ln(),
        hi.ln(),
        panels,
    )
}

/// Weight functions the excision oracle understands.
#[derive(Clone, Copy)]
pub enum OracleWeight {
    /// w = 1 on (a, b)
    Flat { a: f64, b: f64 },
    /// w = (1 - x^2)^{-1/2} on (-1, 1)
    InverseSquareRoot,
}

impl OracleWeight {
    fn interval(&self) -> (f64, f64) {
        match *self {
            OracleWeight::Flat { a, b } => (a, b),
            OracleWeight::InverseSquareRoot => (-1.0, 1.0),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            OracleWeight::Flat { .. } => 1.0,
            OracleWeight::InverseSquareRoot => (1.0 - x * x).powf(-0.5),
        }
    }

    /// w^(t)(xi) for t = 0, 1 (all the divergent-term bookkeeping needs
    /// for q <= 3).
    fn derivatives(&self, xi: f64) -> [f64; 2] {
        match self {
            OracleWeight::Flat { .. } => [1.0, 0.0],
            OracleWeight::InverseSquareRoot => {
                let u = 1.0 - xi * xi;
                [u.powf(-0.5), xi * u.powf(-1.5)]
            }
        }
    }

    /// Excised integral int_{|x-xi|>eps} w(x)(x-xi)^{-q} dx.
    ///
    /// The two sides are paired over t = |x - xi| in [eps, delta], which
    /// cancels the huge one-sided contributions analytically; the log
    /// stretch then resolves the remaining power growth towards t = eps.
    /// The smooth remainders beyond delta are integrated in x (flat
    /// weight) or, for the inverse-square-root weight, in a log-stretched
    /// angle around acos(xi) after the x = cos(theta) substitution, which
    /// also absorbs the endpoint singularities.
    fn excised(&self, xi: f64, q: usize, eps: f64, delta: f64) -> f64 {
        let (a, b) = self.interval();
        let qi = q as i32;
        let sign = if q.is_multiple_of(2) { 1.0 } else { -1.0 };
        let near = log_stretched(
            &|t: f64| (self.eval(xi + t) + sign * self.eval(xi - t)) / t.powi(qi),
            eps,
            delta,
            20,
        );

        let far = match *self {
            OracleWeight::Flat { .. } => {
                // right tail t = x - xi in [delta, b - xi], left tail
                // t = xi - x in [delta, xi - a] picking up (-1)^q
                log_stretched(&|t: f64| t.powi(-qi), delta, b - xi, 16)
                    + sign * log_stretched(&|t: f64| t.powi(-qi), delta, xi - a, 16)
            }
            OracleWeight::InverseSquareRoot => {
                let theta_c = xi.acos();
                let g = |theta: f64| (theta.cos() - xi).powi(-qi);
                // stretch theta - theta_c (right of theta_c <=> x < xi)
                // and theta_c - theta separately
                log_stretched(
                    &|s: f64| g(theta_c + s),
                    (xi - delta).acos() - theta_c,
                    std::f64::consts::PI - theta_c,
                    16,
                ) + log_stretched(
                    &|s: f64| g(theta_c - s),
                    theta_c - (xi + delta).acos(),
                    theta_c,
                    16,
                )
            }
        };
        near + far
    }
}

/// Divergent part of the symmetric excision:
/// D(eps) = sum_{t=0..q-2} w^(t)(xi)/t! * eps^{t-q+1} ((-1)^{t-q+1} - 1)/(t-q+1).
/// Odd-power divergences cancel between the two sides, so only exponents
/// with (t - q + 1) odd survive.
fn divergent_part(w: OracleWeight, xi: f64, q: usize, eps: f64) -> f64 {
    assert!(q <= 3, "oracle handles q <= 3");
    let derivs = w.derivatives(xi);
    let mut total = 0.0;
    let mut factorial = 1.0;
    for (t, &wt) in derivs.iter().enumerate().take(q.saturating_sub(1)) {
        if t > 0 {
            factorial *= t as f64;
        }
        let s = t as i32 - q as i32 + 1;
        if s.rem_euclid(2) == 1 {
            total += wt / factorial * eps.powi(s) * (-2.0) / s as f64;
        }
    }
    total
}

/// The epsilon-excision oracle for the finite-part moment
/// =int w(x) (x - xi)^{-q} dx: excised integral minus divergent terms,
/// Richardson-extrapolated in eps.
pub fn excision_moment_oracle(w: OracleWeight, xi: f64, q: usize) -> f64 {
    let (a, b) = w.interval();
    let delta = 0.5 * (b - xi).min(xi - a);
    let levels = 6;
    let mut eps_values = Vec::with_capacity(levels);
    let mut samples = Vec::with_capacity(levels);
    let mut eps = 0.25 * delta;
    for _ in 0..levels {
        eps_values.push(eps);
        samples.push(w.excised(xi, q, eps, delta) - divergent_part(w, xi, q, eps));
        eps *= 0.5;
    }
    extrapolate_to_zero(&eps_values, &samples)
}

/// Antiderivative-algebra reference for =int_a^b x^d (x - xi)^{-(p+1)} dx
/// (flat weight): expand x^d about xi, then integrate each power of
/// (x - xi); the finite part of the s = -1 term is the log moment, and the
/// s <= -2 terms keep the same antiderivative expression with the
/// divergent inner limits discarded.
pub fn monomial_finite_part(a: f64, b: f64, xi: f64, d: u32, p: usize) -> f64 {
    let mut total = 0.0;
    let mut binom = 1.0;
    for t in 0..=d {
        if t > 0 {
            binom *= (d - t + 1) as f64 / t as f64;
        }
        let coeff = binom * xi.powi((d - t) as i32);
        let s = t as i32 - p as i32 - 1;
        let piece = if s == -1 {
            ((b - xi) / (xi - a)).ln()
        } else {
            ((b - xi).powi(s + 1) - (a - xi).powi(s + 1)) / (s + 1) as f64
        };
        total += coeff * piece;
    }
    total
}

/// Brute-force reference for =int_{-1}^{1} e^x/(x - xi) dx: subtract the
/// singular part analytically and integrate the smooth remainder.
pub fn i1_subtracted_oracle(xi: f64) -> f64 {
    let g = |x: f64| {
        let d = x - xi;
        if d.abs() < 1e-6 {
            // (e^x - e^xi)/(x - xi) = e^xi (1 + d/2 + d^2/6 + d^3/24)
            xi.exp() * (1.0 + d / 2.0 + d * d / 6.0 + d * d * d / 24.0)
        } else {
            (x.exp() - xi.exp()) / d
        }
    };
    adaptive_simpson(&g, -1.0, 1.0, 1e-13) + xi.exp() * ((1.0 - xi) / (1.0 + xi)).ln()
}

/// Extended-precision series oracle for Ei(x) at small integer-friendly x:
/// gamma + ln|x| + sum x^k/(k k!), with every denominator k * k! formed
/// exactly in u128 and the sum Neumaier-compensated. Independent of the
/// library's double-double path.
pub fn ei_series_oracle(x: f64) -> f64 {
    #[allow(clippy::excessive_precision)]
    const GAMMA_20_DIGITS: f64 = 0.57721566490153286061;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut factorial: u128 = 1;
    let mut power = 1.0f64;
    for k in 1..=33u128 {
        factorial *= k;
        power *= x;
        let term = power / (k * factorial) as f64;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    GAMMA_20_DIGITS + x.abs().ln() + (sum + comp)
}

/// Expands prod_i (x - roots[i]) into ascending monomial coefficients.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; coeffs.len() + 1];
        for (m, &c) in coeffs.iter().enumerate() {
            next[m + 1] += c;
            next[m] -= r * c;
        }
        coeffs = next;
    }
    coeffs
}

/// p^(k)(x) / k! for ascending coefficients, via binomials.
pub fn poly_derivative_scaled(coeffs: &[f64], k: usize, x: f64) -> f64 {
    if k >= coeffs.len() {
        return 0.0;
    }
    let binom = |n: usize, k: usize| -> f64 {
        let k = k.min(n - k);
        let mut acc = 1.0;
        for j in 1..=k {
            acc = acc * (n - k + j) as f64 / j as f64;
        }
        acc
    };
    let mut value = 0.0;
    for s in (k..coeffs.len()).rev() {
        value = value * x + coeffs[s] * binom(s, k);
    }
    value
}

/// Analytic monomial moments int w x^d for the exactness checks.
pub mod monomial_moments {
    use std::f64::consts::PI;

    /// int_{-1}^{1} x^d dx
    pub fn legendre(d: u32) -> f64 {
        if d.is_multiple_of(2) {
            2.0 / (d + 1) as f64
        } else {
            0.0
        }
    }

    /// int_{-1}^{1} x^d (1 - x^2)^{-1/2} dx = pi (d-1)!!/d!! for even d
    pub fn chebyshev1(d: u32) -> f64 {
        if !d.is_multiple_of(2) {
            return 0.0;
        }
        let mut acc = PI;
        let mut k = d;
        while k >= 2 {
            acc *= (k - 1) as f64 / k as f64;
            k -= 2;
        }
        acc
    }

    /// int_{-1}^{1} x^d (1 - x) dx
    pub fn jacobi_1_0(d: u32) -> f64 {
        legendre(d) - legendre(d + 1)
    }

    /// int_{-1}^{1} x^d (1 - x)^2 (1 + x) dx; (1-x)^2(1+x) = 1 - x - x^2 + x^3
    pub fn jacobi_2_1(d: u32) -> f64 {
        legendre(d) - legendre(d + 1) - legendre(d + 2) + legendre(d + 3)
    }

    /// int_{-1}^{1} x^d (1-x)^{-1/2} (1+x)^{1/2} dx
    /// = int_0^pi cos^d(t) (1 + cos t) dt (via x = cos t)
    pub fn jacobi_m05_05(d: u32) -> f64 {
        wallis(d) + wallis(d + 1)
    }

    /// int_0^pi cos^k t dt
    fn wallis(k: u32) -> f64 {
        if !k.is_multiple_of(2) {
            return 0.0;
        }
        let mut acc = PI;
        let mut j = k;
        while j >= 2 {
            acc *= (j - 1) as f64 / j as f64;
            j -= 2;
        }
        acc
    }
}
