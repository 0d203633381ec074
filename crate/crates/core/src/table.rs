//! Average weight of every simple cycle under every allocation.

use crate::envy::offset_envy_graph;
use crate::error::Result;
use crate::macw::{all_cycle_averages_capped, simple_cycles, DEFAULT_TABLE_CAP};
use crate::model::{format_agents, Allocation, Instance, WeightGraph};
use crate::perm;
use crate::rational::{render, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub allocation: Allocation,
    /// One entry per column of [`CycleTable::cycles`].
    pub averages: Vec<Rational>,
    /// Marks every entry equal to the row maximum.
    pub is_max: Vec<bool>,
}

impl TableRow {
    pub fn max(&self) -> &Rational {
        self.averages.iter().max().expect("at least one cycle")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTable {
    /// Column order: by length, then lexicographically.
    pub cycles: Vec<Vec<usize>>,
    /// One row per allocation, in lexicographic order.
    pub rows: Vec<TableRow>,
}

pub fn reproduce_table(inst: &Instance, offset: Option<&WeightGraph>) -> Result<CycleTable> {
    reproduce_table_capped(inst, offset, DEFAULT_TABLE_CAP)
}

pub fn reproduce_table_capped(inst: &Instance, offset: Option<&WeightGraph>, cap: usize) -> Result<CycleTable> {
    let n = inst.n();
    let zero = WeightGraph::zero(n);
    let offset = offset.unwrap_or(&zero);
    let mut allocations = Vec::new();
    perm::for_each(n, |p| allocations.push(Allocation::from_vec_unchecked(p.to_vec())));
    let rows = allocations
        .into_iter()
        .map(|allocation| {
            let g = offset_envy_graph(inst, &allocation, offset)?;
            let averages: Vec<Rational> = all_cycle_averages_capped(&g, cap)?.into_iter().map(|(_, a)| a).collect();
            let max = averages.iter().max().expect("n >= 2").clone();
            let is_max = averages.iter().map(|a| *a == max).collect();
            Ok(TableRow {
                allocation,
                averages,
                is_max,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycleTable {
        cycles: simple_cycles(n),
        rows,
    })
}

impl CycleTable {
    /// Markdown grid with row maxima in bold.
    pub fn to_markdown(&self) -> String {
        let n = self.rows.first().map_or(0, |r| r.allocation.n());
        let mut header: Vec<String> = (1..=n).map(|i| format!("A_{i}")).collect();
        header.extend(self.cycles.iter().map(|c| format!("Cycle {}", format_agents(c))));
        let mut out = format!("| {} |\n", header.join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
        for row in &self.rows {
            let mut cells: Vec<String> = row.allocation.as_slice().iter().map(|o| format!("o{}", o + 1)).collect();
            cells.extend(row.averages.iter().zip(&row.is_max).map(|(a, &m)| {
                if m {
                    format!("**{}**", render(a))
                } else {
                    render(a)
                }
            }));
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }

    /// One line per cell: `row,allocation,cycle,average,is_max`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "allocation", "cycle", "average", "is_max"])?;
        for (r, row) in self.rows.iter().enumerate() {
            for ((cycle, avg), is_max) in self.cycles.iter().zip(&row.averages).zip(&row.is_max) {
                w.write_record([
                    (r + 1).to_string(),
                    row.allocation.to_string(),
                    format_agents(cycle),
                    render(avg),
                    is_max.to_string(),
                ])?;
            }
        }
        w.flush()
    }
}
