//! Builtin integrands for the harness. Each ships analytic derivative
//! formulas (to order 2 for the pole families, any order for `exp`) and a
//! complex-plane evaluator for the bound subcommand.

use std::collections::BTreeMap;

use fpquad::Integrand;
use num_complex::Complex64;

use crate::CliError;

pub const BUILTIN_NAMES: [&str; 4] = ["exp", "inv-sqrt-pole", "rational-pole", "one"];

/// Looks up a builtin integrand by name with its parameter map.
///
/// `inv-sqrt-pole` takes `c` (default 1.21); `rational-pole` takes
/// `lambda` (default 5). Unknown names and unknown parameter keys are
/// rejected.
pub fn builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<Integrand, CliError> {
    let reject_params = |allowed: &[&str]| -> Result<(), CliError> {
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Validation(format!(
                    "integrand `{name}` does not take parameter `{key}` (allowed: {allowed:?})"
                )));
            }
        }
        Ok(())
    };
    match name {
        "exp" => {
            reject_params(&[])?;
            Ok(
                Integrand::new("exp", |x| x.exp(), |xi, p| vec![xi.exp(); p + 1])
                    .with_complex(|z| z.exp()),
            )
        }
        "inv-sqrt-pole" => {
            reject_params(&["c"])?;
            let c = params.get("c").copied().unwrap_or(1.21);
            if c <= 0.0 {
                return Err(CliError::Validation(format!(
                    "inv-sqrt-pole needs c > 0, got c = {c}"
                )));
            }
            Ok(Integrand::new(
                format!("inv-sqrt-pole(c={c})"),
                move |x| (c - x * x).powf(-0.5),
                move |xi, p| {
                    // derivatives available to order 2
                    let u = c - xi * xi;
                    let mut d = vec![
                        u.powf(-0.5),
                        xi * u.powf(-1.5),
                        (c + 2.0 * xi * xi) * u.powf(-2.5),
                    ];
                    d.truncate(p + 1);
                    d
                },
            )
            .with_complex(move |z| (Complex64::new(c, 0.0) - z * z).sqrt().inv()))
        }
        "rational-pole" => {
            reject_params(&["lambda"])?;
            let lambda = params.get("lambda").copied().unwrap_or(5.0);
            if lambda == 0.0 {
                return Err(CliError::Validation(
                    "rational-pole needs lambda != 0".into(),
                ));
            }
            Ok(Integrand::new(
                format!("rational-pole(lambda={lambda})"),
                move |x| 1.0 / (x * x + lambda * lambda),
                move |xi, p| {
                    let u = xi * xi + lambda * lambda;
                    let mut d = vec![
                        1.0 / u,
                        -2.0 * xi / (u * u),
                        (6.0 * xi * xi - 2.0 * lambda * lambda) / (u * u * u),
                    ];
                    d.truncate(p + 1);
                    d
                },
            )
            .with_complex(move |z| (z * z + Complex64::new(lambda * lambda, 0.0)).inv()))
        }
        "one" => {
            reject_params(&[])?;
            Ok(Integrand::new(
                "one",
                |_| 1.0,
                |_, p| {
                    let mut d = vec![0.0; p + 1];
                    d[0] = 1.0;
                    d
                },
            )
            .with_complex(|_| Complex64::new(1.0, 0.0)))
        }
        other => Err(CliError::Validation(format!(
            "unknown integrand `{other}`; builtins: {BUILTIN_NAMES:?}"
        ))),
    }
}
