//! Domain types: instances, allocations, weighted digraphs, cycles and solutions.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{is_positive, Rational};

/// Agents' valuations of objects: `value(i, o)` is how much agent `i` values object `o`.
///
/// Square, non-empty, and strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    values: Vec<Rational>,
}

impl Instance {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = check_square("values", &rows)?;
        for (i, row) in rows.iter().enumerate() {
            for (o, v) in row.iter().enumerate() {
                if !is_positive(v) {
                    return Err(Error::NonPositiveValue { row: i, col: o });
                }
            }
        }
        Ok(Self {
            n,
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(int_rows(rows))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, agent: usize, object: usize) -> &Rational {
        &self.values[agent * self.n + object]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.values[agent * self.n..(agent + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.values.chunks(self.n)
    }

    /// Sum of each agent's value for its own object.
    pub fn total_value(&self, allocation: &Allocation) -> Result<Rational> {
        check_dims(self.n, allocation.n())?;
        Ok(allocation
            .iter()
            .map(|(agent, object)| self.value(agent, object))
            .sum())
    }
}

/// One object per agent: `object_of(i)` is the object given to agent `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Allocation(Vec<usize>);

impl Allocation {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        if n == 0 {
            return Err(Error::Empty { what: "allocation" });
        }
        let mut seen = vec![false; n];
        for &o in &assignment {
            if o >= n || std::mem::replace(&mut seen[o], true) {
                return Err(Error::NotPermutation(format!("{assignment:?}")));
            }
        }
        Ok(Self(assignment))
    }

    pub(crate) fn from_vec_unchecked(assignment: Vec<usize>) -> Self {
        debug_assert!(Self::new(assignment.clone()).is_ok());
        Self(assignment)
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn object_of(&self, agent: usize) -> usize {
        self.0[agent]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `(agent, object)` pairs in agent order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied().enumerate()
    }

    /// Inverse permutation: `owners[o]` is the agent holding object `o`.
    pub fn owners(&self) -> Vec<usize> {
        let mut owners = vec![0; self.n()];
        for (agent, object) in self.iter() {
            owners[object] = agent;
        }
        owners
    }

    /// Each agent on `cycle` takes the object of its successor.
    pub fn switch_along(&self, cycle: &[usize]) -> Self {
        let mut next = self.0.clone();
        for (k, &agent) in cycle.iter().enumerate() {
            let succ = cycle[(k + 1) % cycle.len()];
            next[agent] = self.0[succ];
        }
        Self(next)
    }
}

/// Objects are printed 1-based, e.g. `(o1,o3,o2)`.
impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|o| format!("o{}", o + 1)).collect();
        write!(f, "({})", names.join(","))
    }
}

/// Complete directed graph with rational arc weights; the diagonal is zero and
/// never read as an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGraph {
    n: usize,
    weights: Vec<Rational>,
}

impl WeightGraph {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = check_square("graph", &rows)?;
        for (i, row) in rows.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(Error::NonZeroDiagonal {
                    what: "graph",
                    index: i,
                });
            }
        }
        Ok(Self {
            n,
            weights: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(int_rows(rows))
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            weights: vec![Rational::zero(); n * n],
        }
    }

    /// Builds a graph from an arc-weight function; `f` is only called for `i != j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                weights.push(if i == j { Rational::zero() } else { f(i, j) });
            }
        }
        Self { n, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, from: usize, to: usize) -> &Rational {
        &self.weights[from * self.n + to]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.weights.chunks(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    pub fn map(&self, mut f: impl FnMut(&Rational) -> Rational) -> Self {
        Self::from_fn(self.n, |i, j| f(self.weight(i, j)))
    }

    pub fn cycle_weight(&self, nodes: &[usize]) -> Rational {
        (0..nodes.len())
            .map(|k| self.weight(nodes[k], nodes[(k + 1) % nodes.len()]))
            .sum()
    }

    /// Evaluates a cycle given as a node sequence, rotated to start at its minimum node.
    pub fn cycle(&self, nodes: &[usize]) -> Result<Cycle> {
        Cycle::new(nodes.to_vec(), self)
    }
}

/// A simple directed cycle of agents; each node has an arc to its successor
/// and the last wraps to the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    nodes: Vec<usize>,
    total_weight: Rational,
    average_weight: Rational,
}

impl Cycle {
    pub fn new(nodes: Vec<usize>, graph: &WeightGraph) -> Result<Self> {
        let nodes = canonical_rotation(nodes);
        let k = nodes.len();
        if k < 2 {
            return Err(Error::Invalid(format!("cycle needs at least 2 nodes, got {k}")));
        }
        let mut seen = vec![false; graph.n()];
        for &v in &nodes {
            if v >= graph.n() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::Invalid(format!("cycle {nodes:?} is not simple in a graph of {} nodes", graph.n())));
            }
        }
        let total_weight = graph.cycle_weight(&nodes);
        let average_weight = &total_weight / Rational::from_integer(k.into());
        Ok(Self {
            nodes,
            total_weight,
            average_weight,
        })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> &Rational {
        &self.total_weight
    }

    pub fn average_weight(&self) -> &Rational {
        &self.average_weight
    }
}

/// Agents are printed 1-based, e.g. `(i1,i3,i2)`.
impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_agents(&self.nodes))
    }
}

pub fn format_agents(nodes: &[usize]) -> String {
    let names: Vec<String> = nodes.iter().map(|v| format!("i{}", v + 1)).collect();
    format!("({})", names.join(","))
}

/// Rotates a node sequence so it starts at its minimum element.
pub fn canonical_rotation(mut nodes: Vec<usize>) -> Vec<usize> {
    if let Some(pos) = nodes.iter().enumerate().min_by_key(|&(_, v)| *v).map(|(p, _)| p) {
        nodes.rotate_left(pos);
    }
    nodes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ZeroOffsetMatching,
    ExactEnumeration,
    LocalSearch,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ZeroOffsetMatching => "zero-offset-matching",
            Method::ExactEnumeration => "exact-enumeration",
            Method::LocalSearch => "local-search",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An allocation together with the MACW of the graph it was scored on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub allocation: Allocation,
    pub macw: Rational,
    /// A cycle of the minimized graph whose average weight equals `macw`.
    pub witness: Cycle,
    pub total_value: Rational,
    pub method: Method,
    /// Set only when the method guarantees a global optimum.
    pub optimal: bool,
}

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

fn check_square<T>(what: &'static str, rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Empty { what });
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                what,
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    Ok(n)
}

fn int_rows(rows: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| crate::rational::int(v)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn example1() -> Instance {
        Instance::from_integers(&[vec![3, 2, 1], vec![3, 5, 7], vec![7, 8, 9]]).unwrap()
    }

    #[test]
    fn total_value_of_example_allocations() {
        let inst = example1();
        let a = Allocation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(inst.total_value(&a).unwrap(), int(18));
        let b = Allocation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(inst.total_value(&b).unwrap(), int(16));
        let single = Instance::from_integers(&[vec![5]]).unwrap();
        assert_eq!(single.total_value(&Allocation::identity(1)).unwrap(), int(5));
    }

    #[test]
    fn total_value_dimension_mismatch() {
        let err = example1().total_value(&Allocation::identity(2)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, actual: 2 });
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            Instance::from_integers(&[vec![1, 2], vec![3]]),
            Err(Error::NotSquare { row: 1, .. })
        ));
        assert_eq!(
            Instance::from_integers(&[vec![1, 2], vec![0, 1]]).unwrap_err(),
            Error::NonPositiveValue { row: 1, col: 0 }
        );
        assert!(Instance::from_integers(&[vec![-1]]).is_err());
        assert!(matches!(Instance::new(vec![]), Err(Error::Empty { .. })));
    }

    #[test]
    fn allocation_must_be_permutation() {
        assert!(Allocation::new(vec![0, 0, 1]).is_err());
        assert!(Allocation::new(vec![0, 3, 1]).is_err());
        assert!(Allocation::new(vec![]).is_err());
        assert_eq!(Allocation::new(vec![0, 2, 1]).unwrap().to_string(), "(o1,o3,o2)");
    }

    #[test]
    fn graph_rejects_nonzero_diagonal() {
        assert_eq!(
            WeightGraph::from_integers(&[vec![0, 1], vec![1, 2]]).unwrap_err(),
            Error::NonZeroDiagonal { what: "graph", index: 1 }
        );
    }

    #[test]
    fn cycle_is_rotated_and_averaged() {
        let g = WeightGraph::from_integers(&[vec![0, 1, 2], vec![3, 0, 4], vec![5, 6, 0]]).unwrap();
        let c = g.cycle(&[2, 0, 1]).unwrap();
        assert_eq!(c.nodes(), &[0, 1, 2]);
        assert_eq!(c.total_weight(), &int(1 + 4 + 5));
        assert_eq!(c.average_weight(), &crate::rational::ratio(10, 3));
        assert_eq!(c.to_string(), "(i1,i2,i3)");
        assert!(g.cycle(&[1]).is_err());
        assert!(g.cycle(&[0, 1, 0]).is_err());
    }

    #[test]
    fn switching_along_a_cycle() {
        let a = Allocation::new(vec![0, 1, 2]).unwrap();
        assert_eq!(a.switch_along(&[0, 1, 2]).as_slice(), &[1, 2, 0]);
        assert_eq!(a.switch_along(&[1, 2]).as_slice(), &[0, 2, 1]);
    }
}
