//! Maximum-value perfect matching between agents and objects.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance};
use crate::perm;
use crate::rational::Rational;

pub const DEFAULT_BRUTEFORCE_CAP: usize = 9;

/// Hungarian algorithm over exact rationals, minimizing negated value. Among
/// optimal matchings returns the lexicographically smallest assignment.
pub fn max_value_matching(inst: &Instance) -> Allocation {
    let duals = hungarian(inst);
    lexicographic_optimum(inst, &duals)
}

/// Optimal dual potentials for the assignment problem with cost `-v_i(o)`:
/// `cost(i, o) - agent[i] - object[o] >= 0`, with equality exactly where an
/// edge can belong to an optimal matching's support.
struct Duals {
    agent: Vec<Rational>,
    object: Vec<Rational>,
}

impl Duals {
    fn is_tight(&self, inst: &Instance, i: usize, o: usize) -> bool {
        (-inst.value(i, o) - &self.agent[i] - &self.object[o]).is_zero()
    }
}

/// Shortest augmenting path formulation, `O(n^3)`. Index 0 is the virtual
/// column used to root each augmentation.
fn hungarian(inst: &Instance) -> Duals {
    let n = inst.n();
    let cost = |i: usize, j: usize| -inst.value(i - 1, j - 1);
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut min_slack: Vec<Option<Rational>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta: Option<Rational> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - &u[i0] - &v[j];
                if min_slack[j].as_ref().is_none_or(|m| cur < *m) {
                    min_slack[j] = Some(cur);
                    way[j] = j0;
                }
                let slack = min_slack[j].as_ref().expect("just set");
                if delta.as_ref().is_none_or(|d| slack < d) {
                    delta = Some(slack.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains while augmenting");
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(m) = min_slack[j].as_mut() {
                    *m -= &delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    Duals {
        agent: u.split_off(1),
        object: v.split_off(1),
    }
}

/// Fixes agents in order to the smallest object that still leaves a perfect
/// matching on tight edges. With optimal duals, the perfect matchings of the
/// tight subgraph are exactly the maximum-value allocations.
fn lexicographic_optimum(inst: &Instance, duals: &Duals) -> Allocation {
    let n = inst.n();
    let tight: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|o| duals.is_tight(inst, i, o)).collect())
        .collect();
    let mut taken = vec![false; n];
    let mut assignment = Vec::with_capacity(n);
    for agent in 0..n {
        let object = (0..n)
            .find(|&o| {
                if !tight[agent][o] || taken[o] {
                    return false;
                }
                taken[o] = true;
                let ok = has_perfect_matching(&tight, agent + 1, &taken);
                taken[o] = false;
                ok
            })
            .expect("optimal duals admit a tight perfect matching");
        taken[object] = true;
        assignment.push(object);
    }
    Allocation::from_vec_unchecked(assignment)
}

/// Kuhn's augmenting-path check that agents `first..n` can be matched to the
/// objects not yet `taken`, using only allowed edges.
fn has_perfect_matching(allowed: &[Vec<bool>], first: usize, taken: &[bool]) -> bool {
    fn augment(agent: usize, allowed: &[Vec<bool>], taken: &[bool], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for o in 0..taken.len() {
            if allowed[agent][o] && !taken[o] && !seen[o] {
                seen[o] = true;
                if owner[o].is_none_or(|other| augment(other, allowed, taken, seen, owner)) {
                    owner[o] = Some(agent);
                    return true;
                }
            }
        }
        false
    }
    let n = taken.len();
    let mut owner = vec![None; n];
    (first..n).all(|agent| augment(agent, allowed, taken, &mut vec![false; n], &mut owner))
}

/// Enumerates all `n!` allocations; the lexicographically smallest maximizer.
pub fn max_value_matching_bruteforce(inst: &Instance) -> Result<Allocation> {
    max_value_matching_bruteforce_capped(inst, DEFAULT_BRUTEFORCE_CAP)
}

pub fn max_value_matching_bruteforce_capped(inst: &Instance, cap: usize) -> Result<Allocation> {
    let (_, all) = all_max_value_matchings_capped(inst, cap)?;
    Ok(all.into_iter().next().expect("at least one allocation exists"))
}

/// The maximum total value and every allocation attaining it, in
/// lexicographic order, by enumeration.
pub fn all_max_value_matchings(inst: &Instance) -> Result<(Rational, Vec<Allocation>)> {
    all_max_value_matchings_capped(inst, DEFAULT_BRUTEFORCE_CAP)
}

pub fn all_max_value_matchings_capped(inst: &Instance, cap: usize) -> Result<(Rational, Vec<Allocation>)> {
    let n = inst.n();
    if n > cap {
        return Err(Error::AboveCap {
            what: "brute-force matching",
            n,
            cap,
        });
    }
    let mut best: Option<Rational> = None;
    let mut winners = Vec::new();
    perm::for_each(n, |p| {
        let total: Rational = p.iter().enumerate().map(|(i, &o)| inst.value(i, o)).sum();
        match best.as_ref().map(|b| total.cmp(b)) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => winners.push(Allocation::from_vec_unchecked(p.to_vec())),
            _ => {
                best = Some(total);
                winners.clear();
                winners.push(Allocation::from_vec_unchecked(p.to_vec()));
            }
        }
    });
    Ok((best.expect("n >= 1"), winners))
}
