//! Envy graphs, arcwise differences, and the cycle decomposition of an
//! allocation change.

use crate::error::Result;
use crate::model::{canonical_rotation, check_dims, Allocation, Instance, WeightGraph};

/// The envy graph of `allocation`: arc `i -> j` weighs `v_i(A_j) - v_i(A_i)`.
pub fn envy_graph(inst: &Instance, allocation: &Allocation) -> Result<WeightGraph> {
    check_dims(inst.n(), allocation.n())?;
    Ok(WeightGraph::from_fn(inst.n(), |i, j| {
        inst.value(i, allocation.object_of(j)) - inst.value(i, allocation.object_of(i))
    }))
}

/// Arcwise difference `g_a - g_o`.
pub fn difference_graph(g_a: &WeightGraph, g_o: &WeightGraph) -> Result<WeightGraph> {
    check_dims(g_a.n(), g_o.n())?;
    Ok(WeightGraph::from_fn(g_a.n(), |i, j| g_a.weight(i, j) - g_o.weight(i, j)))
}

/// Envy graph of `allocation` minus the offset graph.
pub fn offset_envy_graph(inst: &Instance, allocation: &Allocation, offset: &WeightGraph) -> Result<WeightGraph> {
    difference_graph(&envy_graph(inst, allocation)?, offset)
}

/// Splits the change from `a` to `b` into disjoint cycles of agents.
///
/// On each returned cycle, agent `i`'s successor is the agent that holds
/// `B_i` under `a`, so switching objects along every cycle (each agent takes
/// its successor's object, as in [`Allocation::switch_along`]) turns `a` into
/// `b`. Agents whose object is unchanged appear in no cycle. Each cycle starts
/// at its smallest agent and the list is sorted by that agent.
pub fn cycle_decomposition(a: &Allocation, b: &Allocation) -> Result<Vec<Vec<usize>>> {
    check_dims(a.n(), b.n())?;
    let holder_in_a = a.owners();
    let succ: Vec<usize> = (0..a.n()).map(|i| holder_in_a[b.object_of(i)]).collect();

    let mut visited = vec![false; a.n()];
    let mut cycles = Vec::new();
    for start in 0..a.n() {
        if visited[start] || succ[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        while !visited[v] {
            visited[v] = true;
            cycle.push(v);
            v = succ[v];
        }
        cycles.push(canonical_rotation(cycle));
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, Rational};
    use itertools::Itertools;
    use proptest::prelude::*;

    fn example1() -> Instance {
        Instance::from_integers(&[vec![3, 2, 1], vec![3, 5, 7], vec![7, 8, 9]]).unwrap()
    }

    fn alloc(v: &[usize]) -> Allocation {
        Allocation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn example_envy_arcs() {
        let g = envy_graph(&example1(), &alloc(&[0, 1, 2])).unwrap();
        assert_eq!(g.weight(0, 2), &int(-2));
        assert_eq!(g.weight(2, 0), &int(-2));
        assert_eq!(g.weight(1, 2), &int(2));
        assert_eq!(g.weight(2, 1), &int(-1));
        assert_eq!(g.cycle(&[1, 2]).unwrap().average_weight(), &crate::rational::ratio(1, 2));
    }

    #[test]
    fn constant_rows_give_zero_envy() {
        let inst = Instance::from_integers(&[vec![4, 4, 4], vec![1, 1, 1], vec![9, 9, 9]]).unwrap();
        for perm in (0..3).permutations(3) {
            assert!(envy_graph(&inst, &alloc(&perm)).unwrap().is_zero());
        }
    }

    #[test]
    fn difference_with_example2_offset() {
        let g_a = envy_graph(&example1(), &alloc(&[0, 1, 2])).unwrap();
        let mut rows = vec![vec![0i64; 3]; 3];
        rows[1][2] = -2;
        let g_o = WeightGraph::from_integers(&rows).unwrap();
        let d = difference_graph(&g_a, &g_o).unwrap();
        assert_eq!(d.weight(1, 2), &int(4));
        assert_eq!(d.cycle(&[1, 2]).unwrap().average_weight(), &crate::rational::ratio(3, 2));

        assert_eq!(difference_graph(&g_a, &WeightGraph::zero(3)).unwrap(), g_a);
        assert!(difference_graph(&g_a, &g_a).unwrap().is_zero());
        assert!(difference_graph(&g_a, &WeightGraph::zero(2)).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let id = alloc(&[0, 1, 2]);
        assert_eq!(cycle_decomposition(&id, &alloc(&[0, 2, 1])).unwrap(), vec![vec![1, 2]]);
        assert!(cycle_decomposition(&id, &id).unwrap().is_empty());
        assert_eq!(cycle_decomposition(&id, &alloc(&[1, 2, 0])).unwrap(), vec![vec![0, 1, 2]]);
        assert!(cycle_decomposition(&id, &Allocation::identity(2)).is_err());
    }

    fn apply(a: &Allocation, cycles: &[Vec<usize>]) -> Allocation {
        cycles.iter().fold(a.clone(), |acc, c| acc.switch_along(c))
    }

    #[test]
    fn decomposition_reconstructs_exhaustively() {
        for n in 1..=6 {
            let perms: Vec<Allocation> = (0..n).permutations(n).map(Allocation::from_vec_unchecked).collect();
            for a in &perms {
                for b in &perms {
                    let cycles = cycle_decomposition(a, b).unwrap();
                    assert_eq!(&apply(a, &cycles), b);
                    let moved: usize = cycles.iter().map(Vec::len).sum();
                    let changed = (0..n).filter(|&i| a.object_of(i) != b.object_of(i)).count();
                    assert_eq!(moved, changed);
                    assert!(cycles.iter().all(|c| c.len() >= 2 && c[0] == *c.iter().min().unwrap()));
                    assert!(cycles.windows(2).all(|w| w[0][0] < w[1][0]));
                }
            }
        }
    }

    fn perm_strategy(max_n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
        (2..=max_n).prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
    }

    fn instance_strategy(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(1i64..50, n), n)
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs_large((a, b) in perm_strategy(40)) {
            let (a, b) = (alloc(&a), alloc(&b));
            prop_assert_eq!(apply(&a, &cycle_decomposition(&a, &b).unwrap()), b);
        }

        #[test]
        fn cycle_weight_is_value_exchange(
            rows in instance_strategy(6),
            (a, b) in (Just((0..6).collect::<Vec<_>>()).prop_shuffle(), Just((0..6).collect::<Vec<_>>()).prop_shuffle()),
        ) {
            let inst = Instance::from_integers(&rows).unwrap();
            let (a, b) = (alloc(&a), alloc(&b));
            let g = envy_graph(&inst, &a).unwrap();
            for cycle in cycle_decomposition(&a, &b).unwrap() {
                let k = cycle.len();
                let gained: Rational = (0..k).map(|t| inst.value(cycle[t], a.object_of(cycle[(t + 1) % k]))).sum();
                let held: Rational = cycle.iter().map(|&i| inst.value(i, a.object_of(i))).sum();
                prop_assert_eq!(g.cycle_weight(&cycle), gained - held);
            }
        }

        #[test]
        fn agentwise_shift_leaves_envy_unchanged(
            rows in instance_strategy(5),
            perm in Just((0..5).collect::<Vec<_>>()).prop_shuffle(),
            agent in 0usize..5,
            shift in 0i64..100,
        ) {
            let inst = Instance::from_integers(&rows).unwrap();
            let mut shifted_rows = rows.clone();
            shifted_rows[agent].iter_mut().for_each(|v| *v += shift);
            let shifted = Instance::from_integers(&shifted_rows).unwrap();
            let a = alloc(&perm);
            let g = envy_graph(&inst, &a).unwrap();
            prop_assert_eq!(&envy_graph(&shifted, &a).unwrap(), &g);
            prop_assert!((0..5).all(|i| g.weight(i, i) == &int(0)));
            prop_assert_eq!(shifted.total_value(&a).unwrap() - inst.total_value(&a).unwrap(), int(shift));
        }
    }
}
