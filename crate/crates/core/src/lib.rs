//! Solvers for the min-max average cycle weight allocation problem.
//!
//! `n` agents each receive one of `n` objects. An allocation induces an envy
//! graph whose arc `i -> j` weighs how much more agent `i` values `j`'s object
//! than its own; optionally a fixed offset graph is subtracted arcwise. The
//! goal is an allocation minimizing the maximum average weight over directed
//! cycles (MACW) of that graph.
//!
//! All arithmetic is exact over [`Rational`].

pub mod envy;
pub mod error;
pub mod explore;
pub mod io;
pub mod macw;
pub mod matching;
pub mod model;
mod objective;
pub mod perm;
pub mod rational;
pub mod solve;
pub mod table;

pub use envy::{cycle_decomposition, difference_graph, envy_graph, offset_envy_graph};
pub use error::{Error, Result};
pub use explore::{gap_report, generate_instance, generate_offset, search_gap, GapReport, GapSearchConfig};
pub use io::{parse_graph, parse_instance, parse_instance_file, InstanceFile};
pub use macw::{all_cycle_averages, macw_bruteforce, macw_karp, macw_value};
pub use matching::{max_value_matching, max_value_matching_bruteforce};
pub use model::{Allocation, Cycle, Instance, Method, Solution, WeightGraph};
pub use rational::{parse_rational, render, Rational};
pub use solve::{solve_exact, solve_local_search, solve_zero_offset, LocalSearchParams};
pub use table::{reproduce_table, CycleTable};
