//! Sums over pairwise-distinct index tuples, factorized by
//! inclusion–exclusion over the partition lattice.
//!
//! The naive evaluation of Σ_{i₁≠i₂≠…≠i_m} ∏_j u⁽ʲ⁾_{i_j} costs O(n^m); the
//! identity used here rewrites it over set partitions P of the m slots,
//!
//!   Σ_distinct = Σ_P ∏_{B ∈ P} (−1)^{|B|−1} (|B|−1)! · S_B,
//!
//! where S_B = Σ_i ∏_{j ∈ B} u⁽ʲ⁾_i is an elementwise power sum. Each
//! partition term costs O(n), and for m ≤ 4 there are at most 15 partitions.

use num_complex::Complex64;

use crate::error::{Error, Result};

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Validated input: m ∈ {1..4} per-emitter factor sequences of equal length
/// n ≥ m.
pub struct DistinctSumInput<'a> {
    seqs: Vec<&'a [Complex64]>,
}

impl<'a> DistinctSumInput<'a> {
    pub fn new(seqs: Vec<&'a [Complex64]>) -> Result<Self> {
        let m = seqs.len();
        if m == 0 || m > 4 {
            return Err(Error::UnsupportedOrder(m));
        }
        let n = seqs[0].len();
        if seqs.iter().any(|s| s.len() != n) {
            return Err(Error::InvalidParameter(
                "distinct-sum sequences must share one length".into(),
            ));
        }
        if n < m {
            return Err(Error::InvalidParameter(format!(
                "distinct sum of order {m} needs at least {m} emitters, got {n}"
            )));
        }
        Ok(Self { seqs })
    }

    pub fn order(&self) -> usize {
        self.seqs.len()
    }
}

/// Σ over all order-m tuples of pairwise-distinct indices of the slot-wise
/// factor product. Agrees exactly with the naive O(n^m) loop.
pub fn distinct_product_sum(input: &DistinctSumInput) -> Complex64 {
    distinct_sum_raw(&input.seqs)
}

/// Unvalidated core, shared with the moment formulas. The partition identity
/// holds for every n, returning 0 when n < m (no distinct tuple exists).
pub(crate) fn distinct_sum_raw(seqs: &[&[Complex64]]) -> Complex64 {
    let m = seqs.len();
    debug_assert!((1..=4).contains(&m));
    let n = seqs[0].len();
    let mut total = C_ZERO;
    for partition in partitions(m) {
        let mut coeff = 1.0f64;
        let mut value = C_ONE;
        for block in &partition {
            let size = block.len();
            coeff *= if size % 2 == 0 { -1.0 } else { 1.0 } * factorial(size - 1);
            let power_sum: Complex64 = (0..n)
                .map(|i| block.iter().map(|&j| seqs[j][i]).product::<Complex64>())
                .sum();
            value *= power_sum;
        }
        total += coeff * value;
    }
    total
}

pub(crate) fn d1(a: &[Complex64]) -> Complex64 {
    a.iter().sum()
}

pub(crate) fn d2(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    distinct_sum_raw(&[a, b])
}

pub(crate) fn d3(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Complex64 {
    distinct_sum_raw(&[a, b, c])
}

pub(crate) fn d4(a: &[Complex64], b: &[Complex64], c: &[Complex64], d: &[Complex64]) -> Complex64 {
    distinct_sum_raw(&[a, b, c, d])
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// All set partitions of {0..m−1}, built by assigning each element to an
/// existing block or a fresh one.
fn partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn recurse(k: usize, m: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k == m {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(k);
            recurse(k + 1, m, cur, out);
            cur[b].pop();
        }
        cur.push(vec![k]);
        recurse(k + 1, m, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    recurse(0, m, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Brute-force reference: iterate every index tuple, skip collisions.
    fn naive(seqs: &[&[Complex64]]) -> Complex64 {
        let m = seqs.len();
        let n = seqs[0].len();
        let mut total = C_ZERO;
        let mut idx = vec![0usize; m];
        'outer: loop {
            let distinct = (0..m).all(|a| (0..a).all(|b| idx[a] != idx[b]));
            if distinct {
                let mut prod = C_ONE;
                for (j, &i) in idx.iter().enumerate() {
                    prod *= seqs[j][i];
                }
                total += prod;
            }
            for v in idx.iter_mut() {
                *v += 1;
                if *v < n {
                    continue 'outer;
                }
                *v = 0;
            }
            break;
        }
        total
    }

    fn seeded_seq(n: usize, seed: u64) -> Vec<Complex64> {
        // Small deterministic generator, good enough for test fixtures.
        let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        (0..n)
            .map(|_| {
                let mut next = || {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                };
                Complex64::new(next(), next())
            })
            .collect()
    }

    #[test]
    fn counts_ordered_pairs() {
        let ones = vec![C_ONE; 3];
        let input = DistinctSumInput::new(vec![&ones, &ones]).unwrap();
        assert_eq!(distinct_product_sum(&input), Complex64::new(6.0, 0.0));
    }

    #[test]
    fn order_two_identity() {
        let a = seeded_seq(9, 1);
        let b = seeded_seq(9, 2);
        let direct = d2(&a, &b);
        let expected = d1(&a) * d1(&b) - a.iter().zip(&b).map(|(x, y)| x * y).sum::<Complex64>();
        assert_relative_eq!((direct - expected).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn matches_naive_loops_at_every_order() {
        for seed in 0..20u64 {
            for n in 4..=8usize {
                let seqs: Vec<Vec<Complex64>> =
                    (0..4).map(|j| seeded_seq(n, seed * 16 + j)).collect();
                for m in 1..=4usize {
                    let refs: Vec<&[Complex64]> = seqs[..m].iter().map(|s| s.as_slice()).collect();
                    let fast = distinct_sum_raw(&refs);
                    let slow = naive(&refs);
                    let scale = slow.norm().max(1.0);
                    assert!(
                        (fast - slow).norm() / scale < 1e-12,
                        "m={m} n={n} seed={seed}: {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_when_fewer_elements_than_slots() {
        let a = seeded_seq(2, 7);
        let refs: Vec<&[Complex64]> = vec![&a, &a, &a];
        assert_relative_eq!(distinct_sum_raw(&refs).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn input_validation() {
        let a = seeded_seq(3, 1);
        let b = seeded_seq(4, 2);
        assert!(matches!(
            DistinctSumInput::new(vec![&a, &b]),
            Err(Error::InvalidParameter(_))
        ));
        let short = seeded_seq(2, 3);
        assert!(DistinctSumInput::new(vec![&short, &short, &short]).is_err());
        let five: Vec<&[Complex64]> = vec![&a; 5];
        assert!(matches!(
            DistinctSumInput::new(five),
            Err(Error::UnsupportedOrder(5))
        ));
    }
}
