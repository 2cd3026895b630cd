//! Closed-form Hadamard finite-part moments
//! mu_q(xi) = =int w(x) (x - xi)^{-q} dx, the analytically-known second sum
//! of the singularity-subtracted identity.
//!
//! Legendre (w = 1) on any (a, b):
//!   mu_1 = ln((b - xi)/(xi - a)),
//!   mu_q = ((b - xi)^{1-q} - (a - xi)^{1-q}) / (1 - q)   for q >= 2
//! (the finite part of the antiderivative). Chebyshev first kind: the
//! Glauert principal-value integral vanishes identically in xi, and the
//! higher finite parts are its xi-derivatives, so every moment is 0. Other
//! weights must come with a user-supplied moment provider.

use crate::error::{Error, Result};
use crate::orthogonal::{WeightFamily, WeightKind};

/// The moments mu_1(xi), ..., mu_{p+1}(xi) for one weight and singularity.
#[derive(Debug, Clone)]
pub struct MomentVector {
    xi: f64,
    values: Vec<f64>,
}

impl MomentVector {
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// mu_q for q = 1..=p+1.
    pub fn value(&self, q: usize) -> f64 {
        self.values[q - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Finite-part moments mu_1..mu_{p+1} of the weight about xi.
pub fn finite_part_moments(w: &WeightFamily, xi: f64, p: usize) -> Result<MomentVector> {
    let (a, b) = w.interval();
    if !(a < xi && xi < b) {
        return Err(Error::SingularityOutsideInterval { xi, a, b });
    }
    let values = match w.kind() {
        WeightKind::Legendre => (1..=p + 1).map(|q| legendre_moment(a, b, xi, q)).collect(),
        WeightKind::Chebyshev1 => vec![0.0; p + 1],
        WeightKind::Jacobi { alpha, beta } => {
            return Err(Error::UnsupportedWeight(format!("Jacobi({alpha}, {beta})")));
        }
        WeightKind::Custom(provider) => {
            let mut vals = Vec::with_capacity(p + 1);
            for q in 1..=p + 1 {
                vals.push(provider.moment(xi, q)?);
            }
            vals
        }
    };
    Ok(MomentVector { xi, values })
}

fn legendre_moment(a: f64, b: f64, xi: f64, q: usize) -> f64 {
    if q == 1 {
        ((b - xi) / (xi - a)).ln()
    } else {
        let e = 1 - q as i32;
        ((b - xi).powi(e) - (a - xi).powi(e)) / e as f64
    }
}
