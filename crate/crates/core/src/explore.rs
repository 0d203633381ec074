//! Random instances and the search for offsets whose optimum is not a
//! maximum-value matching.
//!
//! Generators use ChaCha8 (`rand_chacha` 0.3) seeded with
//! `seed_from_u64(seed)`, on stream 0 for valuations and stream 1 for offset
//! weights. Entries are drawn row-major with `rand` 0.8 `gen_range(lo..=hi)`.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matching::all_max_value_matchings;
use crate::model::{Allocation, Instance, WeightGraph};
use crate::objective::{cmp_scores, with_objective, Scaled};
use crate::rational::{int, Rational};
use crate::solve::solve_exact;

const VALUE_STREAM: u64 = 0;
const OFFSET_STREAM: u64 = 1;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::NoCycles { n })
    } else {
        Ok(())
    }
}

/// Valuations drawn uniformly from the integers in `[lo, hi]`, `0 < lo <= hi`.
pub fn generate_instance(n: usize, seed: u64, (lo, hi): (i64, i64)) -> Result<Instance> {
    check_n(n)?;
    if lo <= 0 {
        return Err(Error::InvalidRange { lo, hi, reason: "values must be positive" });
    }
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi, reason: "lo exceeds hi" });
    }
    let mut rng = rng(seed, VALUE_STREAM);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect()).collect();
    Instance::from_integers(&rows)
}

/// Off-diagonal offset weights drawn uniformly from the integers in `[lo, hi]`.
pub fn generate_offset(n: usize, seed: u64, (lo, hi): (i64, i64)) -> Result<WeightGraph> {
    check_n(n)?;
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi, reason: "lo exceeds hi" });
    }
    let mut rng = rng(seed, OFFSET_STREAM);
    Ok(WeightGraph::from_fn(n, |_, _| int(rng.gen_range(lo..=hi))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    /// Position of the pair in the generated batch (`None` for injected cases).
    pub pair: Option<usize>,
    pub seed: Option<u64>,
    pub instance: Instance,
    pub offset: WeightGraph,
    pub exact_macw: Rational,
    pub exact_allocation: Allocation,
    /// Smallest offset MACW over every maximum-value matching.
    pub best_matching_macw: Rational,
    pub best_matching: Allocation,
    /// `best_matching_macw - exact_macw`; never negative.
    pub gap: Rational,
}

/// Compares the exact offset optimum with the best maximum-value matching.
pub fn gap_report(inst: &Instance, offset: &WeightGraph) -> Result<GapReport> {
    let exact = solve_exact(inst, offset)?;
    let (_, matchings) = all_max_value_matchings(inst)?;
    let scaled = Scaled::new(inst, offset)?;
    let (best_matching, best_matching_macw) = with_objective!(scaled, obj => {
        let mut buf = Vec::new();
        let (alloc, score) = matchings
            .iter()
            .map(|a| (a, obj.score(a.as_slice(), &mut buf)))
            .reduce(|best, cand| if cmp_scores(&cand.1, &best.1) == Ordering::Less { cand } else { best })
            .expect("at least one maximum-value matching");
        (alloc.clone(), scaled.to_rational(&score))
    });
    let gap = &best_matching_macw - &exact.macw;
    debug_assert!(gap >= int(0));
    Ok(GapReport {
        pair: None,
        seed: None,
        instance: inst.clone(),
        offset: offset.clone(),
        exact_macw: exact.macw,
        exact_allocation: exact.allocation,
        best_matching_macw,
        best_matching,
        gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapSearchConfig {
    pub n: usize,
    pub count: usize,
    /// Pair `p` uses seed `seed + p` for both its instance and its offset.
    pub seed: u64,
    pub value_range: (i64, i64),
    pub weight_range: (i64, i64),
}

impl Default for GapSearchConfig {
    fn default() -> Self {
        Self {
            n: 4,
            count: 100,
            seed: 0,
            value_range: (1, 9),
            weight_range: (-3, 3),
        }
    }
}

/// Evaluates `count` random pairs; reports are sorted by descending gap,
/// then by pair index.
pub fn search_gap(config: &GapSearchConfig) -> Result<Vec<GapReport>> {
    let mut reports = (0..config.count)
        .into_par_iter()
        .map(|pair| {
            let seed = config.seed.wrapping_add(pair as u64);
            let inst = generate_instance(config.n, seed, config.value_range)?;
            let offset = generate_offset(config.n, seed, config.weight_range)?;
            let mut report = gap_report(&inst, &offset)?;
            report.pair = Some(pair);
            report.seed = Some(seed);
            Ok(report)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| b.gap.cmp(&a.gap).then_with(|| a.pair.cmp(&b.pair)));
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapSummary {
    pub count: usize,
    pub positive: usize,
    pub max_gap: Rational,
    pub mean_gap: Rational,
}

pub fn summarize(reports: &[GapReport]) -> GapSummary {
    let count = reports.len();
    let total: Rational = reports.iter().map(|r| &r.gap).sum();
    GapSummary {
        count,
        positive: reports.iter().filter(|r| r.gap > int(0)).count(),
        max_gap: reports.iter().map(|r| r.gap.clone()).max().unwrap_or_else(|| int(0)),
        mean_gap: if count == 0 { int(0) } else { total / int(count as i64) },
    }
}
