//! The offset-MACW objective evaluated on integer-scaled inputs.
//!
//! Valuations and offsets are multiplied by the least common multiple of
//! all their denominators once, so scoring an allocation only needs integer
//! arithmetic. Scores of different allocations share that scale and compare
//! as plain fractions.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::envy::offset_envy_graph;
use crate::error::Result;
use crate::macw::{karp_value, macw_karp, IntWeight, KarpValue};
use crate::model::{check_dims, Allocation, Cycle, Instance, WeightGraph};
use crate::rational::{common_denominator, scaled_integer, Rational};

/// Runs `$body` with `$obj` bound to whichever integer objective `$scaled` holds.
macro_rules! with_objective {
    ($scaled:expr, $obj:ident => $body:expr) => {
        match &$scaled.objective {
            $crate::objective::ScaledObjective::Small($obj) => $body,
            $crate::objective::ScaledObjective::Big($obj) => $body,
        }
    };
}
pub(crate) use with_objective;

pub(crate) struct Objective<T> {
    pub n: usize,
    values: Vec<T>,
    offset: Vec<T>,
}

/// Score of one allocation: its MACW is `numer / (len * scale)`.
pub(crate) type Score<T> = KarpValue<T>;

pub(crate) fn cmp_scores<T: IntWeight>(a: &Score<T>, b: &Score<T>) -> Ordering {
    (a.numer.clone() * T::from(b.len as i64)).cmp(&(b.numer.clone() * T::from(a.len as i64)))
}

impl<T: IntWeight> Objective<T> {
    /// Writes the offset envy graph of `assignment` into `buf`.
    pub fn graph_into(&self, assignment: &[usize], buf: &mut Vec<T>) {
        let n = self.n;
        buf.clear();
        for i in 0..n {
            let own = &self.values[i * n + assignment[i]];
            for (j, &object) in assignment.iter().enumerate() {
                if i == j {
                    buf.push(T::zero());
                } else {
                    buf.push(self.values[i * n + object].clone() - own.clone() - self.offset[i * n + j].clone());
                }
            }
        }
    }

    pub fn score(&self, assignment: &[usize], buf: &mut Vec<T>) -> Score<T> {
        self.graph_into(assignment, buf);
        karp_value(self.n, buf)
    }
}

pub(crate) enum ScaledObjective {
    Small(Objective<i128>),
    Big(Objective<BigInt>),
}

pub(crate) struct Scaled {
    pub scale: BigInt,
    pub objective: ScaledObjective,
}

impl Scaled {
    pub fn new(inst: &Instance, offset: &WeightGraph) -> Result<Self> {
        check_dims(inst.n(), offset.n())?;
        let n = inst.n();
        let all = inst.rows().flatten().chain(offset.rows().flatten());
        let scale = common_denominator(all);
        let values: Vec<BigInt> = inst.rows().flatten().map(|r| scaled_integer(r, &scale)).collect();
        let offsets: Vec<BigInt> = offset.rows().flatten().map(|r| scaled_integer(r, &scale)).collect();
        // Arc weights are sums of three scaled inputs; keep them within 60 bits.
        const INPUT_BITS: u64 = 58;
        let small = values.iter().chain(&offsets).all(|x| x.bits() <= INPUT_BITS);
        let objective = if small {
            let to_small = |v: Vec<BigInt>| v.into_iter().map(|x| i128::try_from(x).expect("checked bit width")).collect();
            ScaledObjective::Small(Objective {
                n,
                values: to_small(values),
                offset: to_small(offsets),
            })
        } else {
            ScaledObjective::Big(Objective {
                n,
                values,
                offset: offsets,
            })
        };
        Ok(Self { scale, objective })
    }

    pub fn to_rational<T: IntWeight + Into<BigInt>>(&self, score: &Score<T>) -> Rational {
        score.to_rational(&self.scale)
    }
}

/// Exact MACW and canonical witness of `allocation` under `offset`.
pub(crate) fn evaluate(inst: &Instance, allocation: &Allocation, offset: &WeightGraph) -> Result<(Rational, Cycle)> {
    macw_karp(&offset_envy_graph(inst, allocation, offset)?)
}
