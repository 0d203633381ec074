//! MACW-minimizing allocation solvers.
//!
//! - [`solve_zero_offset`]: maximum-value matching, optimal when there is no offset.
//! - [`solve_exact`]: enumerates all `n!` allocations against any offset.
//! - [`solve_local_search`]: best-improvement descent over 2- and 3-cycle switches.
//!
//! Ties between equal objectives go to the lexicographically smallest
//! assignment everywhere.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::envy::envy_graph;
use crate::error::{Error, Result};
use crate::macw::{macw_karp, IntWeight};
use crate::matching::max_value_matching;
use crate::model::{check_dims, Allocation, Instance, Method, Solution, WeightGraph};
use crate::objective::{cmp_scores, evaluate, with_objective, Objective, Scaled, Score};
use crate::perm;
use crate::rational::Rational;

pub const DEFAULT_EXACT_CAP: usize = 9;

fn require_cycles(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::NoCycles { n })
    } else {
        Ok(())
    }
}

fn solution(inst: &Instance, allocation: Allocation, offset: Option<&WeightGraph>, method: Method, optimal: bool) -> Result<Solution> {
    let (macw, witness) = match offset {
        Some(g_o) => evaluate(inst, &allocation, g_o)?,
        None => macw_karp(&envy_graph(inst, &allocation)?)?,
    };
    let total_value = inst.total_value(&allocation)?;
    Ok(Solution {
        allocation,
        macw,
        witness,
        total_value,
        method,
        optimal,
    })
}

/// Without an offset, the MACW minimizers are exactly the maximum-value
/// matchings, so the Hungarian result is optimal.
pub fn solve_zero_offset(inst: &Instance) -> Result<Solution> {
    require_cycles(inst.n())?;
    let allocation = max_value_matching(inst);
    solution(inst, allocation, None, Method::ZeroOffsetMatching, true)
}

pub fn solve_exact(inst: &Instance, offset: &WeightGraph) -> Result<Solution> {
    solve_exact_capped(inst, offset, DEFAULT_EXACT_CAP)
}

/// Minimizes `MACW(G_A - G_O)` over every allocation. The permutation space
/// is split by the first agent's object across worker threads.
pub fn solve_exact_capped(inst: &Instance, offset: &WeightGraph, cap: usize) -> Result<Solution> {
    require_cycles(inst.n())?;
    check_dims(inst.n(), offset.n())?;
    if inst.n() > cap {
        return Err(Error::AboveCap {
            what: "exact solver",
            n: inst.n(),
            cap,
        });
    }
    let scaled = Scaled::new(inst, offset)?;
    let assignment = with_objective!(scaled, obj => exact_argmin(obj));
    solution(inst, Allocation::from_vec_unchecked(assignment), Some(offset), Method::ExactEnumeration, true)
}

fn exact_argmin<T: IntWeight + Send + Sync>(obj: &Objective<T>) -> Vec<usize> {
    let n = obj.n;
    let per_first: Vec<(Vec<usize>, Score<T>)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut buf = Vec::with_capacity(n * n);
            let mut best: Option<(Vec<usize>, Score<T>)> = None;
            perm::for_each_with_first(n, first, |p| {
                let s = obj.score(p, &mut buf);
                if best.as_ref().is_none_or(|(_, b)| cmp_scores(&s, b).is_lt()) {
                    best = Some((p.to_vec(), s));
                }
            });
            best.expect("at least one permutation per first element")
        })
        .collect();
    // Chunks are in lexicographic order, so the first strict minimum wins ties.
    per_first
        .into_iter()
        .reduce(|best, cand| if cmp_scores(&cand.1, &best.1).is_lt() { cand } else { best })
        .expect("n >= 1")
        .0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearchParams {
    /// Cap on accepted moves per run.
    pub max_iters: usize,
    /// Extra runs from seeded random permutations after the matching start.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for LocalSearchParams {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            restarts: 4,
            seed: 0,
        }
    }
}

/// One descent: the start allocation and the objective after each accepted move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRun {
    pub start: Allocation,
    /// `scores[0]` is the start's MACW; each later entry is strictly smaller.
    pub scores: Vec<Rational>,
    pub end: Allocation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSearchOutcome {
    pub solution: Solution,
    pub runs: Vec<SearchRun>,
}

pub fn solve_local_search(inst: &Instance, offset: &WeightGraph, params: LocalSearchParams) -> Result<Solution> {
    Ok(local_search(inst, offset, params)?.solution)
}

/// Local search with the per-run trajectories.
///
/// Run 0 starts from the maximum-value matching; run `r >= 1` starts from a
/// permutation shuffled by ChaCha8 seeded with `params.seed` on stream `r`.
pub fn local_search(inst: &Instance, offset: &WeightGraph, params: LocalSearchParams) -> Result<LocalSearchOutcome> {
    require_cycles(inst.n())?;
    check_dims(inst.n(), offset.n())?;
    let n = inst.n();
    let starts: Vec<Vec<usize>> = std::iter::once(max_value_matching(inst).as_slice().to_vec())
        .chain((1..=params.restarts).map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(r as u64);
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            p
        }))
        .collect();

    let scaled = Scaled::new(inst, offset)?;
    let runs: Vec<(SearchRun, Rational)> = with_objective!(scaled, obj => {
        starts
            .into_par_iter()
            .map(|start| {
                let (end, scores) = descend(obj, start.clone(), params.max_iters);
                let scores: Vec<Rational> = scores.iter().map(|s| scaled.to_rational(s)).collect();
                let last = scores.last().expect("start is scored").clone();
                let run = SearchRun {
                    start: Allocation::from_vec_unchecked(start),
                    scores,
                    end: Allocation::from_vec_unchecked(end),
                };
                (run, last)
            })
            .collect()
    });

    let (best_end, _) = runs
        .iter()
        .map(|(run, score)| (&run.end, score))
        .min_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)))
        .expect("at least the matching run");
    let solution = solution(inst, best_end.clone(), Some(offset), Method::LocalSearch, false)?;
    Ok(LocalSearchOutcome {
        solution,
        runs: runs.into_iter().map(|(run, _)| run).collect(),
    })
}

/// Agent cycles whose switch defines a neighbor: every pair, and both
/// orientations of every triple.
fn neighborhood(n: usize) -> Vec<Vec<usize>> {
    let mut moves = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            moves.push(vec![i, j]);
            for k in j + 1..n {
                moves.push(vec![i, j, k]);
                moves.push(vec![i, k, j]);
            }
        }
    }
    moves
}

fn switched(current: &[usize], cycle: &[usize]) -> Vec<usize> {
    let mut next = current.to_vec();
    for (t, &agent) in cycle.iter().enumerate() {
        next[agent] = current[cycle[(t + 1) % cycle.len()]];
    }
    next
}

fn descend<T: IntWeight>(obj: &Objective<T>, start: Vec<usize>, max_iters: usize) -> (Vec<usize>, Vec<Score<T>>) {
    let moves = neighborhood(obj.n);
    let mut buf = Vec::with_capacity(obj.n * obj.n);
    let mut current = start;
    let mut scores = vec![obj.score(&current, &mut buf)];
    for _ in 0..max_iters {
        let here = scores.last().expect("non-empty");
        let mut best: Option<(Vec<usize>, Score<T>)> = None;
        for cycle in &moves {
            let cand = switched(&current, cycle);
            let s = obj.score(&cand, &mut buf);
            if !cmp_scores(&s, here).is_lt() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, bs)) => cmp_scores(&s, bs).then_with(|| cand.cmp(b)).is_lt(),
            };
            if better {
                best = Some((cand, s));
            }
        }
        match best {
            Some((next, s)) => {
                current = next;
                scores.push(s);
            }
            None => break,
        }
    }
    (current, scores)
}
