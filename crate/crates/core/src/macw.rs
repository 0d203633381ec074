//! Maximum average cycle weight of a complete digraph.
//!
//! [`macw_karp`] runs Karp's walk-length dynamic program in the maximizing
//! orientation. Rational weights are first scaled by the least common
//! multiple of their denominators so the table holds integers; `i128` is used
//! when the magnitudes allow it and `BigInt` otherwise.
//!
//! [`macw_bruteforce`] enumerates every simple cycle and serves as the oracle.
//!
//! Both report the same witness among equal-average cycles: the shortest one,
//! then the lexicographically smallest node sequence starting from its
//! minimum node.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::{Cycle, WeightGraph};
use crate::rational::{common_denominator, scaled_integer, Rational};

pub const DEFAULT_BRUTEFORCE_CAP: usize = 8;
pub const DEFAULT_TABLE_CAP: usize = 5;

/// Integer arc weights for the DP. Implemented for `i128` and `BigInt`.
pub(crate) trait IntWeight: Clone + Ord + Signed + From<i64> {}
impl IntWeight for i128 {}
impl IntWeight for BigInt {}

/// The maximum mean `numer / len` with `len` in `1..=n`.
#[derive(Debug, Clone)]
pub(crate) struct KarpValue<T> {
    pub numer: T,
    pub len: usize,
}

impl<T: IntWeight> KarpValue<T> {
    pub(crate) fn to_rational(&self, scale: &BigInt) -> Rational
    where
        T: Into<BigInt>,
    {
        Rational::new(self.numer.clone().into(), scale * BigInt::from(self.len))
    }
}

fn cmp_fractions<T: IntWeight>(a: &T, p: usize, b: &T, q: usize) -> Ordering {
    let lhs = a.clone() * T::from(q as i64);
    let rhs = b.clone() * T::from(p as i64);
    lhs.cmp(&rhs)
}

struct KarpTable<T> {
    /// `best[k][v]`: heaviest walk of exactly `k` arcs from node 0 to `v`.
    best: Vec<Vec<Option<T>>>,
    /// `parent[k][v]`: predecessor of `v` on that walk.
    parent: Vec<Vec<usize>>,
}

fn karp_table<T: IntWeight>(n: usize, w: &[T]) -> KarpTable<T> {
    let mut best: Vec<Vec<Option<T>>> = vec![vec![None; n]; n + 1];
    let mut parent = vec![vec![usize::MAX; n]; n + 1];
    best[0][0] = Some(T::zero());
    for k in 1..=n {
        let (done, rest) = best.split_at_mut(k);
        let prev = &done[k - 1];
        let cur = &mut rest[0];
        for (u, du) in prev.iter().enumerate() {
            let Some(du) = du else { continue };
            for v in 0..n {
                if u == v {
                    continue;
                }
                let cand = du.clone() + w[u * n + v].clone();
                if cur[v].as_ref().is_none_or(|b| cand > *b) {
                    cur[v] = Some(cand);
                    parent[k][v] = u;
                }
            }
        }
    }
    KarpTable { best, parent }
}

/// Karp's characterization: `max_v min_k (D_n(v) - D_k(v)) / (n - k)`.
fn karp_optimum<T: IntWeight>(n: usize, table: &KarpTable<T>) -> (KarpValue<T>, usize) {
    let mut result: Option<(KarpValue<T>, usize)> = None;
    for v in 0..n {
        let Some(dn) = &table.best[n][v] else { continue };
        let mut worst: Option<KarpValue<T>> = None;
        for k in 0..n {
            let Some(dk) = &table.best[k][v] else { continue };
            let cand = KarpValue {
                numer: dn.clone() - dk.clone(),
                len: n - k,
            };
            if worst
                .as_ref()
                .is_none_or(|m| cmp_fractions(&cand.numer, cand.len, &m.numer, m.len).is_lt())
            {
                worst = Some(cand);
            }
        }
        let worst = worst.expect("D_n(v) finite implies some finite D_k(v) on a complete digraph");
        if result
            .as_ref()
            .is_none_or(|(m, _)| cmp_fractions(&worst.numer, worst.len, &m.numer, m.len).is_gt())
        {
            result = Some((worst, v));
        }
    }
    result.expect("a complete digraph on >= 2 nodes has an n-arc walk from node 0")
}

/// Maximum cycle mean over scaled integer weights (`w` is row-major, `n >= 2`).
pub(crate) fn karp_value<T: IntWeight>(n: usize, w: &[T]) -> KarpValue<T> {
    debug_assert!(n >= 2 && w.len() == n * n);
    karp_optimum(n, &karp_table(n, w)).0
}

/// Follows parent pointers back from the optimal `(n, v)` state and returns
/// the first loop on that walk. Every loop on it attains the optimum.
fn karp_walk_cycle<T: IntWeight>(n: usize, table: &KarpTable<T>, end: usize) -> Vec<usize> {
    let mut walk = vec![0; n + 1];
    walk[n] = end;
    for k in (1..=n).rev() {
        walk[k - 1] = table.parent[k][walk[k]];
    }
    let mut seen_at = vec![usize::MAX; n];
    for (pos, &v) in walk.iter().enumerate() {
        if seen_at[v] != usize::MAX {
            return walk[seen_at[v]..pos].to_vec();
        }
        seen_at[v] = pos;
    }
    unreachable!("a walk of n arcs over n nodes repeats a node")
}

/// Shortest, then lexicographically smallest, cycle whose mean equals
/// `value`. Requires `value` to be the maximum cycle mean.
///
/// With arc weights shifted to `w * len - numer`, no cycle is positive and
/// the optimal cycles are exactly the zero ones. A zero closed walk of
/// minimum length is a simple cycle, so a walk-length DP followed by a greedy
/// smallest-successor reconstruction finds the canonical witness.
fn canonical_cycle<T: IntWeight>(n: usize, w: &[T], value: &KarpValue<T>) -> Vec<usize> {
    let len = T::from(value.len as i64);
    let shifted: Vec<T> = w.iter().map(|x| x.clone() * len.clone() - value.numer.clone()).collect();
    let arc = |u: usize, v: usize| &shifted[u * n + v];

    // tail[s][r][u]: heaviest r-arc walk u -> s with every node before s above s.
    let mut tail: Vec<Vec<Vec<Option<T>>>> = (0..n)
        .map(|s| {
            let first = (0..n).map(|u| (u > s).then(|| arc(u, s).clone())).collect();
            vec![vec![None; n], first]
        })
        .collect();

    for length in 2..=n {
        for (s, tail_s) in tail.iter_mut().enumerate().take(n + 1 - length) {
            let prev = &tail_s[length - 1];
            let next: Vec<Option<T>> = (0..n)
                .map(|u| {
                    if u <= s {
                        return None;
                    }
                    (s + 1..n)
                        .filter(|&v| v != u)
                        .filter_map(|v| prev[v].as_ref().map(|t| arc(u, v).clone() + t.clone()))
                        .max()
                })
                .collect();
            tail_s.push(next);

            let closes = (s + 1..n).any(|u| {
                tail_s[length - 1][u]
                    .as_ref()
                    .is_some_and(|t| (arc(s, u).clone() + t.clone()).is_zero())
            });
            if closes {
                return greedy_cycle(s, length, tail_s, arc);
            }
        }
    }
    unreachable!("the maximum cycle mean is attained by some simple cycle")
}

fn greedy_cycle<'a, T: IntWeight + 'a>(
    start: usize,
    length: usize,
    tail: &[Vec<Option<T>>],
    arc: impl Fn(usize, usize) -> &'a T,
) -> Vec<usize> {
    let n = tail[1].len();
    let mut nodes = vec![start];
    let mut acc = T::zero();
    let mut cur = start;
    for remaining in (1..length).rev() {
        let next = (start + 1..n)
            .filter(|&u| u != cur)
            .find(|&u| {
                tail[remaining][u]
                    .as_ref()
                    .is_some_and(|t| (acc.clone() + arc(cur, u).clone() + t.clone()).is_zero())
            })
            .expect("a zero completion exists at every greedy step");
        acc = acc + arc(cur, next).clone();
        nodes.push(next);
        cur = next;
    }
    debug_assert!((acc + arc(cur, start).clone()).is_zero());
    nodes
}

/// A weight graph scaled to integer arc weights.
pub(crate) enum ScaledWeights {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl ScaledWeights {
    /// Chooses `i128` when every product formed by the DP stays far below its range.
    pub(crate) fn from_integers(n: usize, w: Vec<BigInt>) -> Self {
        const LIMIT_BITS: u64 = 60;
        let fits = n < (1 << 20) && w.iter().all(|x| x.bits() <= LIMIT_BITS);
        if fits {
            Self::Small(w.iter().map(|x| x.to_i128().expect("checked bit width")).collect())
        } else {
            Self::Big(w)
        }
    }
}

fn scale_graph(g: &WeightGraph) -> (BigInt, ScaledWeights) {
    let scale = common_denominator(g.rows().flatten());
    let ints = g.rows().flatten().map(|r| scaled_integer(r, &scale)).collect();
    (scale, ScaledWeights::from_integers(g.n(), ints))
}

fn require_cycles(g: &WeightGraph) -> Result<()> {
    if g.n() < 2 {
        Err(Error::NoCycles { n: g.n() })
    } else {
        Ok(())
    }
}

/// The maximum average cycle weight of `g`, without a witness.
pub fn macw_value(g: &WeightGraph) -> Result<Rational> {
    require_cycles(g)?;
    let (scale, w) = scale_graph(g);
    Ok(match w {
        ScaledWeights::Small(w) => {
            let v = karp_value(g.n(), &w);
            Rational::new(BigInt::from(v.numer), scale * BigInt::from(v.len))
        }
        ScaledWeights::Big(w) => karp_value(g.n(), &w).to_rational(&scale),
    })
}

/// Result of the Karp DP, including the cycle read off the parent pointers
/// before canonicalization.
#[derive(Debug, Clone)]
pub struct KarpOutcome {
    pub value: Rational,
    /// First loop on the optimal walk of the DP.
    pub walk_cycle: Cycle,
    /// Canonical witness (shortest, then lexicographically smallest).
    pub witness: Cycle,
}

/// Runs the Karp DP and both witness extractions.
pub fn karp(g: &WeightGraph) -> Result<KarpOutcome> {
    require_cycles(g)?;
    let n = g.n();
    let (scale, w) = scale_graph(g);
    let (value, walk, canon) = match w {
        ScaledWeights::Small(w) => karp_parts(n, &w, |v| Rational::new(BigInt::from(v.numer), &scale * BigInt::from(v.len))),
        ScaledWeights::Big(w) => karp_parts(n, &w, |v| v.to_rational(&scale)),
    };
    let walk_cycle = g.cycle(&walk)?;
    let witness = g.cycle(&canon)?;
    assert_eq!(walk_cycle.average_weight(), &value, "Karp walk cycle must attain the optimum");
    assert_eq!(witness.average_weight(), &value, "canonical witness must attain the optimum");
    Ok(KarpOutcome {
        value,
        walk_cycle,
        witness,
    })
}

fn karp_parts<T: IntWeight>(
    n: usize,
    w: &[T],
    to_rational: impl Fn(&KarpValue<T>) -> Rational,
) -> (Rational, Vec<usize>, Vec<usize>) {
    let table = karp_table(n, w);
    let (value, end) = karp_optimum(n, &table);
    let walk = karp_walk_cycle(n, &table, end);
    let canon = canonical_cycle(n, w, &value);
    (to_rational(&value), walk, canon)
}

/// Maximum average cycle weight with its canonical witness, in `O(n^3)`
/// arithmetic operations for the value.
pub fn macw_karp(g: &WeightGraph) -> Result<(Rational, Cycle)> {
    let outcome = karp(g)?;
    Ok((outcome.value, outcome.witness))
}

/// Every simple cycle with its average weight, ordered by length and then by
/// node sequence (each cycle starts at its minimum node).
pub fn all_cycle_averages(g: &WeightGraph) -> Result<Vec<(Cycle, Rational)>> {
    all_cycle_averages_capped(g, DEFAULT_TABLE_CAP)
}

pub fn all_cycle_averages_capped(g: &WeightGraph, cap: usize) -> Result<Vec<(Cycle, Rational)>> {
    require_cycles(g)?;
    check_cap("cycle table", g.n(), cap)?;
    simple_cycles(g.n())
        .into_iter()
        .map(|nodes| {
            let c = g.cycle(&nodes)?;
            let avg = c.average_weight().clone();
            Ok((c, avg))
        })
        .collect()
}

/// Brute-force maximum over all simple cycles; the witness follows the same
/// tie-break as [`macw_karp`].
pub fn macw_bruteforce(g: &WeightGraph) -> Result<(Rational, Cycle)> {
    macw_bruteforce_capped(g, DEFAULT_BRUTEFORCE_CAP)
}

pub fn macw_bruteforce_capped(g: &WeightGraph, cap: usize) -> Result<(Rational, Cycle)> {
    require_cycles(g)?;
    check_cap("brute-force MACW", g.n(), cap)?;
    let mut best: Option<Cycle> = None;
    // simple_cycles is already in tie-break order, so only a strictly larger
    // average replaces the incumbent.
    for nodes in simple_cycles(g.n()) {
        let c = g.cycle(&nodes)?;
        if best.as_ref().is_none_or(|b| c.average_weight() > b.average_weight()) {
            best = Some(c);
        }
    }
    let best = best.expect("n >= 2 has a 2-cycle");
    Ok((best.average_weight().clone(), best))
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::AboveCap { what, n, cap })
    } else {
        Ok(())
    }
}

/// All simple cycles of the complete digraph on `n` nodes, each starting at
/// its minimum node, sorted by length then lexicographically.
pub fn simple_cycles(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, path: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if path.len() >= 2 {
            out.push(path.clone());
        }
        let start = path[0];
        for v in start + 1..n {
            if !used[v] {
                used[v] = true;
                path.push(v);
                extend(n, path, used, out);
                path.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    for s in 0..n {
        used[s] = true;
        extend(n, &mut vec![s], &mut used, &mut out);
        used[s] = false;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envy::{envy_graph, offset_envy_graph};
    use crate::model::{Allocation, Instance};
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn example1() -> Instance {
        Instance::from_integers(&[vec![3, 2, 1], vec![3, 5, 7], vec![7, 8, 9]]).unwrap()
    }

    fn example2_offset() -> WeightGraph {
        let mut rows = vec![vec![0i64; 3]; 3];
        rows[1][2] = -2;
        WeightGraph::from_integers(&rows).unwrap()
    }

    fn g_a(perm: &[usize]) -> WeightGraph {
        envy_graph(&example1(), &Allocation::new(perm.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn example1_rows() {
        let (mu, c) = macw_karp(&g_a(&[0, 1, 2])).unwrap();
        assert_eq!(mu, ratio(1, 2));
        assert_eq!(c.nodes(), &[1, 2]);
        assert_eq!(macw_karp(&g_a(&[0, 2, 1])).unwrap().0, ratio(-1, 2));
    }

    #[test]
    fn zero_graph() {
        let (mu, c) = macw_karp(&WeightGraph::zero(4)).unwrap();
        assert_eq!(mu, int(0));
        assert_eq!(c.nodes(), &[0, 1]);
    }

    #[test]
    fn two_node_graph() {
        let g = WeightGraph::from_integers(&[vec![0, 3], vec![-8, 0]]).unwrap();
        assert_eq!(macw_bruteforce(&g).unwrap().0, ratio(-5, 2));
        assert_eq!(macw_karp(&g).unwrap().0, ratio(-5, 2));
    }

    #[test]
    fn bruteforce_examples() {
        let g = offset_envy_graph(&example1(), &Allocation::new(vec![1, 2, 0]).unwrap(), &example2_offset()).unwrap();
        let (mu, c) = macw_bruteforce(&g).unwrap();
        assert_eq!(mu, int(1));
        assert_eq!(c.nodes(), &[0, 2]);

        // (o3,o1,o2): averages 3, 1, 1/2, 5/3, 4/3.
        let (mu, c) = macw_bruteforce(&g_a(&[2, 0, 1])).unwrap();
        assert_eq!(mu, int(3));
        assert_eq!(c.nodes(), &[0, 1]);

        // (i1,i2) and (i1,i2,i3) both average 1; the shorter cycle wins.
        let g = WeightGraph::from_integers(&[vec![0, 1, -5], vec![1, 0, 1], vec![1, -5, 0]]).unwrap();
        let (mu, c) = macw_bruteforce(&g).unwrap();
        assert_eq!(mu, int(1));
        assert_eq!(c.nodes(), &[0, 1]);
        assert_eq!(macw_karp(&g).unwrap(), (mu, c));
    }

    #[test]
    fn cycle_table_rows() {
        let rows = all_cycle_averages(&g_a(&[0, 1, 2])).unwrap();
        let nodes: Vec<&[usize]> = rows.iter().map(|(c, _)| c.nodes()).collect();
        assert_eq!(nodes, vec![&[0, 1][..], &[0, 2], &[1, 2], &[0, 1, 2], &[0, 2, 1]]);
        let avgs: Vec<Rational> = rows.into_iter().map(|(_, a)| a).collect();
        assert_eq!(avgs, vec![ratio(-3, 2), ratio(-4, 2), ratio(1, 2), ratio(-1, 3), ratio(-5, 3)]);

        let g = offset_envy_graph(&example1(), &Allocation::new(vec![1, 0, 2]).unwrap(), &example2_offset()).unwrap();
        let avgs: Vec<Rational> = all_cycle_averages(&g).unwrap().into_iter().map(|(_, a)| a).collect();
        assert_eq!(avgs, vec![ratio(3, 2), int(-1), int(2), int(2), ratio(-1, 3)]);

        let rows = all_cycle_averages(&WeightGraph::zero(2)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].1, int(0));
    }

    #[test]
    fn errors_and_caps() {
        let one = WeightGraph::zero(1);
        assert_eq!(macw_karp(&one).unwrap_err(), Error::NoCycles { n: 1 });
        assert_eq!(macw_bruteforce(&one).unwrap_err(), Error::NoCycles { n: 1 });
        assert!(matches!(macw_bruteforce(&WeightGraph::zero(9)), Err(Error::AboveCap { cap: 8, .. })));
        assert!(matches!(all_cycle_averages(&WeightGraph::zero(6)), Err(Error::AboveCap { cap: 5, .. })));
        assert!(all_cycle_averages_capped(&WeightGraph::zero(6), 6).is_ok());
    }

    #[test]
    fn simple_cycle_counts() {
        // sum over k >= 2 of C(n, k) (k - 1)!
        assert_eq!(simple_cycles(2).len(), 1);
        assert_eq!(simple_cycles(3).len(), 5);
        assert_eq!(simple_cycles(4).len(), 20);
        assert_eq!(simple_cycles(5).len(), 84);
    }

    #[test]
    fn big_integer_path_matches_small() {
        let huge = BigInt::from(1u64 << 62);
        let base = WeightGraph::from_integers(&[vec![0, 3, -1], vec![2, 0, 5], vec![-4, 1, 0]]).unwrap();
        let scaled = base.map(|w| w * Rational::from_integer(huge.clone()));
        let (mu_small, c_small) = macw_karp(&base).unwrap();
        let (mu_big, c_big) = macw_karp(&scaled).unwrap();
        assert_eq!(mu_big, mu_small * Rational::from_integer(huge));
        assert_eq!(c_small.nodes(), c_big.nodes());
    }

    #[test]
    fn fractional_weights() {
        let g = WeightGraph::new(vec![
            vec![int(0), ratio(1, 3), ratio(-1, 7)],
            vec![ratio(2, 5), int(0), ratio(1, 2)],
            vec![ratio(3, 4), ratio(-9, 8), int(0)],
        ])
        .unwrap();
        assert_eq!(macw_karp(&g).unwrap(), macw_bruteforce(&g).unwrap());
    }

    fn graph_strategy() -> impl Strategy<Value = WeightGraph> {
        (2usize..=7).prop_flat_map(|n| {
            prop::collection::vec(-9i64..=9, n * n).prop_map(move |w| {
                WeightGraph::from_fn(n, |i, j| int(w[i * n + j]))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn karp_matches_bruteforce(g in graph_strategy()) {
            let outcome = karp(&g).unwrap();
            let (mu, witness) = macw_bruteforce(&g).unwrap();
            prop_assert_eq!(&outcome.value, &mu);
            prop_assert_eq!(&outcome.witness, &witness);
            prop_assert_eq!(outcome.walk_cycle.average_weight(), &mu);
        }

        #[test]
        fn scale_and_shift(g in graph_strategy(), num in 1i64..20, den in 1i64..20, shift in -10i64..10) {
            let (mu, witness) = macw_karp(&g).unwrap();
            let lambda = ratio(num, den);
            let scaled = g.map(|w| w * &lambda);
            let (mu_scaled, w_scaled) = macw_karp(&scaled).unwrap();
            prop_assert_eq!(mu_scaled, &mu * &lambda);
            prop_assert_eq!(w_scaled.nodes(), witness.nodes());

            let shifted = g.map(|w| w + int(shift));
            prop_assert_eq!(macw_karp(&shifted).unwrap().0, mu + int(shift));
        }
    }
}
