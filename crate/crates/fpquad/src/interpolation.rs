//! Equidistant interpolation layout around the singularity, the derivative
//! coefficients A_i^(k) = l_i^(k)(xi)/k! of its Lagrange basis, and the two
//! divided-difference evaluators (direct subtracted form and interpolant
//! surrogate).
//!
//! The coefficients come out of the cycle index: with eta_r the negated
//! power sums of the reciprocal node offsets,
//!
//! ```text
//! A_0^(k)    = Z_k(eta_r),
//! A_i^(k)    = l_i'(xi) * Z_{k-1}(eta_r + (a_i - xi)^{-r}),   i >= 1,
//! ```
//!
//! where l_i'(xi) reduces to a factorial ratio of the layout counts. One
//! cycle-index prefix pass per node supplies the whole k-column.

use crate::combinatorics::cycle_index_prefix;
use crate::engine::Integrand;
use crate::error::{Error, Result};

/// Which side of the singularity carries the nu-node (shorter) half of the
/// layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// b - xi <= xi - a: the short side points towards b.
    RightShort,
    /// b - xi > xi - a: mirrored construction.
    LeftShort,
}

/// The interpolation nodes a_0..a_n in interleaved order: a_0 = xi, then
/// alternating steps of +-h on the short/long sides, then the tail of the
/// long side.
#[derive(Debug, Clone)]
pub struct NodeLayout {
    xi: f64,
    h: f64,
    nu: usize,
    n: usize,
    nodes: Vec<f64>,
    orientation: Orientation,
}

impl NodeLayout {
    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Equidistant step; also the minimum gap of the rearranged node set.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nodes in the layout's interleaved order; index 0 is the singularity.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// Builds the equidistant layout for a singularity `xi` inside `(a, b)` with
/// n + 1 nodes.
///
/// The short side of xi is split into nu + 1 parts (nu = floor(n/2)), giving
/// the step h; the remaining n - nu nodes continue into the long side. All
/// nodes must stay strictly inside (a, b), which requires
/// (a - xi + n(b - xi))/(b - a) < nu (mirrored in the LeftShort case); when
/// the check fails the returned error asks for a larger n.
pub fn layout_nodes(xi: f64, interval: (f64, f64), n: usize) -> Result<NodeLayout> {
    let (a, b) = interval;
    if !(a < xi && xi < b) {
        return Err(Error::SingularityOutsideInterval { xi, a, b });
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "layout needs n >= 2 nodes besides the singularity, got n = {n}"
        )));
    }
    let orientation = if b - xi <= xi - a {
        Orientation::RightShort
    } else {
        Orientation::LeftShort
    };
    let nu = n / 2;
    let (short, lower_bound) = match orientation {
        Orientation::RightShort => (b - xi, (a - xi + n as f64 * (b - xi)) / (b - a)),
        Orientation::LeftShort => (xi - a, (xi - b + n as f64 * (xi - a)) / (b - a)),
    };
    if !(lower_bound < nu as f64) {
        return Err(Error::LayoutConstraint {
            xi,
            n,
            nu,
            lower_bound,
        });
    }
    let h = short / (nu + 1) as f64;
    let s = match orientation {
        Orientation::RightShort => h,
        Orientation::LeftShort => -h,
    };
    let mut nodes = vec![0.0; n + 1];
    nodes[0] = xi;
    for j in 1..=nu {
        nodes[2 * j - 1] = xi + j as f64 * s;
        nodes[2 * j] = xi - j as f64 * s;
    }
    for j in nu + 1..=n - nu {
        nodes[nu + j] = xi - j as f64 * s;
    }
    Ok(NodeLayout {
        xi,
        h,
        nu,
        n,
        nodes,
        orientation,
    })
}

/// The power sums eta_r = -sum_{i != 0} (a_i - xi)^{-r} for r = 1..=r_max,
/// evaluated from the layout's structural parameters.
///
/// Grows like h^{-r}; callers needing large r should work with the scaled
/// sums eta_r * h^r instead (as [`coefficient_table`] does internally).
pub fn eta_values(layout: &NodeLayout, r_max: usize) -> Vec<f64> {
    let scaled = scaled_eta(layout.nu, layout.n - layout.nu, layout.orientation, r_max);
    scaled
        .iter()
        .enumerate()
        .map(|(idx, &c)| c / layout.h.powi(idx as i32 + 1))
        .collect()
}

/// eta_r * h^r: the offset reciprocals with the step scaled out. The two
/// sides are paired termwise so that for odd r the j and -j contributions
/// cancel exactly; a balanced layout then has eta_odd = 0 to the bit, and
/// the odd-order coefficients that vanish analytically vanish numerically
/// too. Small terms are accumulated first.
fn scaled_eta(nu: usize, long: usize, orientation: Orientation, r_max: usize) -> Vec<f64> {
    let sign = match orientation {
        Orientation::RightShort => 1.0,
        Orientation::LeftShort => -1.0,
    };
    debug_assert!(nu <= long);
    (1..=r_max as i32)
        .map(|r| {
            let mut sum = 0.0;
            for j in (nu as i32 + 1..=long as i32).rev() {
                sum += (-sign * j as f64).powi(-r);
            }
            for j in (1..=nu as i32).rev() {
                let j = j as f64;
                sum += (sign * j).powi(-r) + (-sign * j).powi(-r);
            }
            -sum
        })
        .collect()
}

/// The table of derivative coefficients A_i^(k) = l_i^(k)(xi)/k! for
/// i = 0..=n and k = p+1..=n.
///
/// Entries are held scaled by h^k; [`Self::coefficient`] restores the raw
/// value, which can overflow f64 for very large n at small h even though
/// every surrogate evaluation stays finite.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    layout: NodeLayout,
    p: usize,
    /// scaled[i][j] = A_i^{(p+1+j)} * h^{p+1+j}
    scaled: Vec<Vec<f64>>,
}

impl CoefficientTable {
    pub fn layout(&self) -> &NodeLayout {
        &self.layout
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// A_i^(k) for i in 0..=n, k in p+1..=n.
    pub fn coefficient(&self, i: usize, k: usize) -> f64 {
        assert!(i <= self.layout.n, "node index {i} out of range");
        assert!(
            k > self.p && k <= self.layout.n,
            "derivative order {k} outside p+1..=n"
        );
        self.scaled[i][k - self.p - 1] * self.layout.h.powi(-(k as i32))
    }

    pub(crate) fn scaled_rows(&self) -> &[Vec<f64>] {
        &self.scaled
    }
}

/// Builds the coefficient table for the layout. Requires p < n.
///
/// The mirrored (LeftShort) case is handled by applying the formulas to the
/// reflected layout and restoring signs via l_i^(k)(xi) = (-1)^k
/// l~_i^(k)(-xi), reflection being an exact symmetry of Lagrange bases.
pub fn coefficient_table(layout: &NodeLayout, p: usize) -> Result<CoefficientTable> {
    let n = layout.n;
    if p >= n {
        return Err(Error::InvalidParameter(format!(
            "derivative order p = {p} must be smaller than the node count n = {n}"
        )));
    }
    let mut scaled = scaled_table_right_short(layout.nu, n, p);
    if layout.orientation == Orientation::LeftShort {
        for row in scaled.iter_mut() {
            for (j, value) in row.iter_mut().enumerate() {
                if (p + 1 + j) % 2 == 1 {
                    *value = -*value;
                }
            }
        }
    }
    Ok(CoefficientTable {
        layout: layout.clone(),
        p,
        scaled,
    })
}

/// Scaled coefficient rows for a RightShort layout with split nu out of n.
fn scaled_table_right_short(nu: usize, n: usize, p: usize) -> Vec<Vec<f64>> {
    let long = n - nu;
    let cols = n - p;
    let c = scaled_eta(nu, long, Orientation::RightShort, n);
    let mut scaled = vec![vec![0.0; cols]; n + 1];

    // A_0^(k) = Z_k(eta_r)
    let z0 = cycle_index_prefix(&c);
    for j in 0..cols {
        scaled[0][j] = z0[p + 1 + j];
    }

    let mut args = vec![0.0; n.saturating_sub(1)];

    // short side: node 2i-1 at offset +i h,
    // prefactor (-1)^{i-1} nu! long! / (h i (nu-i)! (long+i)!)
    let mut ratio = 1.0;
    for i in 1..=nu {
        ratio *= (nu - i + 1) as f64 / (long + i) as f64;
        let sign = if (i - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let factor = sign * ratio / i as f64;
        for (r_idx, slot) in args.iter_mut().enumerate() {
            *slot = c[r_idx] + (i as f64).powi(-(r_idx as i32 + 1));
        }
        let z = cycle_index_prefix(&args);
        for j in 0..cols {
            scaled[2 * i - 1][j] = factor * z[p + j];
        }
    }

    // long side: offset -i h maps to node 2i (i <= nu) or nu + i (i > nu),
    // prefactor (-1)^i nu! long! / (h i (nu+i)! (long-i)!)
    let mut ratio = 1.0;
    for i in 1..=long {
        ratio *= (long - i + 1) as f64 / (nu + i) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let factor = sign * ratio / i as f64;
        for (r_idx, slot) in args.iter_mut().enumerate() {
            *slot = c[r_idx] + (-(i as f64)).powi(-(r_idx as i32 + 1));
        }
        let z = cycle_index_prefix(&args);
        let row = if i <= nu { 2 * i } else { nu + i };
        for j in 0..cols {
            scaled[row][j] = factor * z[p + j];
        }
    }

    scaled
}

/// Confluent divided difference f[x, xi^{p+1}] by direct singularity
/// subtraction:
/// (f(x) - sum_{j<=p} f^(j)(xi) (x-xi)^j / j!) / (x-xi)^{p+1}.
///
/// Cancellation-prone when |x - xi| is small; the engine routes the closest
/// node through [`surrogate_divdiff`] instead.
pub fn confluent_divdiff_direct(f: &Integrand, xi: f64, p: usize, x: f64) -> Result<f64> {
    let derivatives = f.derivatives_at(xi, p);
    confluent_divdiff_from_values(f.value(x), &derivatives, xi, p, x)
}

/// Value-level form of [`confluent_divdiff_direct`] for callers that already
/// hold f(x) and the derivative list at xi.
pub fn confluent_divdiff_from_values(
    f_x: f64,
    derivatives_at_xi: &[f64],
    xi: f64,
    p: usize,
    x: f64,
) -> Result<f64> {
    if x == xi {
        return Err(Error::NodeAtSingularity { xi });
    }
    if derivatives_at_xi.len() < p + 1 {
        return Err(Error::InvalidParameter(format!(
            "need {} derivative values at xi, got {}",
            p + 1,
            derivatives_at_xi.len()
        )));
    }
    let d = x - xi;
    // Taylor prefix via Horner
    let mut factorial = 1.0;
    let coeffs: Vec<f64> = derivatives_at_xi[..=p]
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            if j > 0 {
                factorial *= j as f64;
            }
            v / factorial
        })
        .collect();
    let mut taylor = 0.0;
    for &coef in coeffs.iter().rev() {
        taylor = taylor * d + coef;
    }
    Ok((f_x - taylor) / d.powi(p as i32 + 1))
}

/// Divided difference of the Lagrange interpolant,
/// L_n[x_c, xi^{p+1}] = sum_i f(a_i) sum_{k=p+1..n} A_i^(k) (x_c - xi)^{k-p-1},
/// with the inner sum evaluated by Horner. The k = p+1 term uses
/// (x_c - xi)^0 = 1, so x_c = xi is legal and yields sum_i f(a_i) A_i^{(p+1)}.
pub fn surrogate_divdiff(table: &CoefficientTable, f_values: &[f64], x_c: f64) -> Result<f64> {
    let layout = table.layout();
    if f_values.len() != layout.n() + 1 {
        return Err(Error::InvalidParameter(format!(
            "expected {} integrand values in layout order, got {}",
            layout.n() + 1,
            f_values.len()
        )));
    }
    let u = (x_c - layout.xi()) / layout.h();
    let mut acc = 0.0;
    for (row, &fi) in table.scaled_rows().iter().zip(f_values) {
        let mut horner = 0.0;
        for &coef in row.iter().rev() {
            horner = horner * u + coef;
        }
        acc += fi * horner;
    }
    Ok(acc * layout.h().powi(-(table.p() as i32 + 1)))
}

/// Test oracle: l_i^(k)(x)/k! by exact polynomial arithmetic. The basis
/// numerator prod_{j != i} (t - a_j) is expanded in powers of y = t - x,
/// where the k-th derivative at x divided by k! is the y^k coefficient
/// outright; this keeps the expansion centered on the evaluation point
/// instead of shifting through the monomial basis. Guarded to at most 20
/// nodes, where the expanded coefficients stay well conditioned.
pub fn basis_derivative_oracle(nodes: &[f64], i: usize, k: usize, x: f64) -> Result<f64> {
    if nodes.len() > 20 {
        return Err(Error::InvalidParameter(format!(
            "oracle limited to 20 nodes, got {}",
            nodes.len()
        )));
    }
    if i >= nodes.len() {
        return Err(Error::InvalidParameter(format!(
            "basis index {i} out of range for {} nodes",
            nodes.len()
        )));
    }
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            if nodes[a] == nodes[b] {
                return Err(Error::DuplicateNodes(nodes[a]));
            }
        }
    }

    // prod_{j != i} (y - (a_j - x)), ascending in y
    let mut coeffs = vec![1.0];
    let mut denom = 1.0;
    for (j, &aj) in nodes.iter().enumerate() {
        if j == i {
            continue;
        }
        denom *= nodes[i] - aj;
        let root = aj - x;
        let mut next = vec![0.0; coeffs.len() + 1];
        for (m, &cm) in coeffs.iter().enumerate() {
            next[m + 1] += cm;
            next[m] -= root * cm;
        }
        coeffs = next;
    }

    Ok(coeffs.get(k).copied().unwrap_or(0.0) / denom)
}
