//! Cycle index of the symmetric group and integer-partition enumeration.
//!
//! The cycle index Z_n(x_1, ..., x_n) is evaluated two ways: a recursion
//! that produces all prefix values Z_0..Z_n in O(n^2) multiply-adds, and
//! the explicit sum over integer partitions of n, which grows factorially
//! and is kept only as a small-n cross-check oracle.

use crate::error::{Error, Result};

/// Largest n accepted by the partition-based routines. The partition count
/// p(12) = 77 is cheap; beyond that the explicit sum serves no purpose.
pub const PARTITION_LIMIT: usize = 12;

/// A solution of 1*a_1 + 2*a_2 + ... + n*a_n = n, stored as the
/// multiplicity vector (a_1, ..., a_n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    multiplicities: Vec<usize>,
}

impl Partition {
    /// Builds a partition from its multiplicity vector, checking the
    /// defining constraint sum(i * a_i) = n where n = len(a).
    pub fn new(multiplicities: Vec<usize>) -> Result<Self> {
        let n = multiplicities.len();
        let total: usize = multiplicities
            .iter()
            .enumerate()
            .map(|(idx, &a)| (idx + 1) * a)
            .sum();
        if total != n {
            return Err(Error::InvalidParameter(format!(
                "multiplicity vector sums to {total}, expected {n}"
            )));
        }
        Ok(Self { multiplicities })
    }

    /// The multiplicity a_i of part size i (1-based), zero when out of range.
    pub fn multiplicity(&self, part: usize) -> usize {
        if part == 0 || part > self.multiplicities.len() {
            0
        } else {
            self.multiplicities[part - 1]
        }
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.multiplicities.len()
    }
}

/// Sums `terms` by pairwise (cascade) summation.
///
/// The recursion terms x_j * Z_{n-j} alternate in sign in the quadrature
/// application, so plain left-to-right accumulation loses digits for large n.
fn pairwise_sum(terms: &[f64]) -> f64 {
    match terms.len() {
        0 => 0.0,
        1 => terms[0],
        2 => terms[0] + terms[1],
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// All prefix values Z_0, Z_1, ..., Z_n of the cycle index at the argument
/// vector `x` (length n), via the recursion n Z_n = sum_{j=1..n} x_j Z_{n-j}
/// with Z_0 = 1.
///
/// The empty argument vector yields `[1]`.
pub fn cycle_index_prefix(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut z = Vec::with_capacity(n + 1);
    z.push(1.0);
    let mut terms = vec![0.0; n];
    for k in 1..=n {
        for j in 1..=k {
            terms[j - 1] = x[j - 1] * z[k - j];
        }
        z.push(pairwise_sum(&terms[..k]) / k as f64);
    }
    z
}

/// Z_n evaluated through the explicit partition sum
/// sum_{a in pi_n} prod_i x_i^{a_i} / (i^{a_i} a_i!).
///
/// Restricted to n <= [`PARTITION_LIMIT`]; intended as a cross-check oracle
/// for [`cycle_index_prefix`].
pub fn cycle_index_explicit(x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n > PARTITION_LIMIT {
        return Err(Error::EnumerationGuard {
            n,
            max: PARTITION_LIMIT,
        });
    }
    let mut sum = 0.0;
    let mut comp = 0.0; // Neumaier compensation
    for partition in partitions_of(n)? {
        let mut term = 1.0;
        for (idx, &a) in partition.multiplicities().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let i = (idx + 1) as f64;
            let mut denom = 1.0;
            for s in 1..=a {
                denom *= i * s as f64;
            }
            term *= x[idx].powi(a as i32) / denom;
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

/// Enumerates every multiplicity vector (a_1, ..., a_n) with
/// sum(i * a_i) = n exactly once.
///
/// The order is deterministic: a_n varies slowest, a_2 fastest, and a_1 is
/// the forced remainder, so for n = 4 the sequence starts at (4,0,0,0) and
/// ends at (0,0,0,1). Restricted to n <= [`PARTITION_LIMIT`].
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    if n > PARTITION_LIMIT {
        return Err(Error::EnumerationGuard {
            n,
            max: PARTITION_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn recurse(part: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if part == 1 {
            current[0] = remaining;
            out.push(Partition {
                multiplicities: current.clone(),
            });
            current[0] = 0;
            return;
        }
        for a in 0..=remaining / part {
            current[part - 1] = a;
            recurse(part - 1, remaining - part * a, current, out);
        }
        current[part - 1] = 0;
    }
    if n == 0 {
        out.push(Partition {
            multiplicities: Vec::new(),
        });
    } else {
        recurse(n, n, &mut current, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prefix_of_empty_input_is_unity() {
        assert_eq!(cycle_index_prefix(&[]), vec![1.0]);
    }

    #[test]
    fn prefix_matches_printed_low_order_formulas() {
        // Z_1 = x1, Z_2 = (x1^2+x2)/2, Z_3 = (x1^3+3x1x2+2x3)/6,
        // Z_4 = (x1^4+6x1^2x2+3x2^2+8x1x3+6x4)/24, at x = (1,2,3,4).
        let z = cycle_index_prefix(&[1.0, 2.0, 3.0, 4.0]);
        let expected = [1.0, 1.0, 1.5, 13.0 / 6.0, 73.0 / 24.0];
        for (got, want) in z.iter().zip(expected.iter()) {
            assert!((got - want).abs() <= 1e-15 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn prefix_at_all_ones_is_all_ones() {
        for n in 0..=20 {
            let x = vec![1.0; n];
            let z = cycle_index_prefix(&x);
            for (k, zk) in z.iter().enumerate() {
                assert!(
                    (zk - 1.0).abs() <= 1e-14,
                    "Z_{k} at ones = {zk} for n = {n}"
                );
            }
        }
    }

    #[test]
    fn explicit_matches_hand_values() {
        // Z_2(3, 5) = (9 + 5)/2 = 7.
        assert_eq!(cycle_index_explicit(&[3.0, 5.0]).unwrap(), 7.0);
        let z4 = cycle_index_explicit(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((z4 - 73.0 / 24.0).abs() <= 1e-15);
    }

    #[test]
    fn explicit_vanishes_at_zero_arguments() {
        for n in 1..=8 {
            assert_eq!(cycle_index_explicit(&vec![0.0; n]).unwrap(), 0.0);
        }
    }

    #[test]
    fn explicit_at_all_ones_is_exactly_one() {
        for n in 0..=PARTITION_LIMIT {
            let z = cycle_index_explicit(&vec![1.0; n]).unwrap();
            assert_eq!(z, 1.0, "Z_{n}(1,...,1) must be exactly 1");
        }
    }

    #[test]
    fn explicit_rejects_large_n() {
        assert!(matches!(
            cycle_index_explicit(&[1.0; 13]),
            Err(Error::EnumerationGuard { n: 13, .. })
        ));
    }

    #[test]
    fn partitions_of_zero_is_the_empty_partition() {
        let parts = partitions_of(0).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].multiplicities().is_empty());
    }

    #[test]
    fn partitions_of_four_enumerates_in_declared_order() {
        let parts = partitions_of(4).unwrap();
        let expected: Vec<Vec<usize>> = vec![
            vec![4, 0, 0, 0],
            vec![2, 1, 0, 0],
            vec![0, 2, 0, 0],
            vec![1, 0, 1, 0],
            vec![0, 0, 0, 1],
        ];
        let got: Vec<Vec<usize>> = parts.iter().map(|p| p.multiplicities().to_vec()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn partition_counts_match_brute_force() {
        // p(n) for n = 0..12.
        let known = [1usize, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        for (n, &count) in known.iter().enumerate() {
            assert_eq!(partitions_of(n).unwrap().len(), count, "p({n})");
        }
        assert!(partitions_of(13).is_err());
    }

    #[test]
    fn partition_constructor_checks_invariant() {
        assert!(Partition::new(vec![1, 0, 1, 0]).is_ok());
        assert!(Partition::new(vec![2, 0, 1, 0]).is_err());
        let p = Partition::new(vec![0, 2, 0, 0]).unwrap();
        assert_eq!(p.multiplicity(2), 2);
        assert_eq!(p.multiplicity(5), 0);
        assert_eq!(p.n(), 4);
    }

    proptest! {
        #[test]
        fn recursion_agrees_with_partition_sum(
            x in proptest::collection::vec(-2.0f64..2.0, 0..=10)
        ) {
            let z = cycle_index_prefix(&x);
            let explicit = cycle_index_explicit(&x).unwrap();
            let last = *z.last().unwrap();
            prop_assert!((last - explicit).abs() <= 1e-12 * (1.0 + last.abs()));
        }

        #[test]
        fn grading_homogeneity(
            x in proptest::collection::vec(-2.0f64..2.0, 1..=8)
        ) {
            // deg(x_i) = i: substituting x_i -> t^i x_i scales Z_n by t^n.
            let t = 2.0f64;
            let scaled: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(idx, v)| t.powi(idx as i32 + 1) * v)
                .collect();
            let n = x.len();
            let zn = cycle_index_prefix(&x)[n];
            let zn_scaled = cycle_index_prefix(&scaled)[n];
            let want = t.powi(n as i32) * zn;
            prop_assert!((zn_scaled - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }
}
