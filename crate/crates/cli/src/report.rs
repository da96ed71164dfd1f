//! The machine-readable result document. JSON output is byte-stable for a
//! given input (field order fixed, plans pre-sorted); only `wall_time_ms`
//! varies between runs. Mass strings are exact: they parse back to the same
//! rational.

use clap::ValueEnum;
use otinf::{format_rational, CostMatrix, Plan, RelaxedSolution, SolveReport};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub problem: &'static str,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_edge: Option<[usize; 2]>,
    pub plan: Vec<(usize, usize, String)>,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub wall_time_ms: f64,
}

pub fn from_solve(
    problem: &'static str,
    report: &SolveReport,
    wall_time_ms: f64,
) -> ReportDocument {
    let plan = match &report.plan {
        Plan::Permutation(p) => p.pairs().map(|(i, j)| (i, j, "1".to_string())).collect(),
        Plan::Coupling(c) => c
            .entries()
            .iter()
            .map(|(i, j, mass)| (*i, *j, format_rational(mass)))
            .collect(),
    };
    ReportDocument {
        problem,
        value: report.value,
        witness_edge: Some([report.witness_edge.0, report.witness_edge.1]),
        plan,
        iterations: report.iterations,
        tolerance: None,
        wall_time_ms,
    }
}

pub fn from_relaxed(cost: &CostMatrix, sol: &RelaxedSolution, wall_time_ms: f64) -> ReportDocument {
    let mut witness = (0, 0);
    let mut heaviest = f64::NEG_INFINITY;
    let mut plan = Vec::new();
    for i in 0..sol.n {
        for j in 0..sol.n {
            let mass = sol.plan_entry(i, j);
            if mass > 0.0 {
                plan.push((i, j, format!("{mass}")));
            }
            let weighted = mass * cost.get(i, j);
            if weighted > heaviest {
                heaviest = weighted;
                witness = (i, j);
            }
        }
    }
    ReportDocument {
        problem: "relaxed",
        value: sol.value,
        witness_edge: Some([witness.0, witness.1]),
        plan,
        iterations: sol.probes,
        tolerance: Some(sol.tolerance),
        wall_time_ms,
    }
}

pub fn from_oracle(value: f64, wall_time_ms: f64) -> ReportDocument {
    ReportDocument {
        problem: "oracle",
        value,
        witness_edge: None,
        plan: Vec::new(),
        iterations: 0,
        tolerance: None,
        wall_time_ms,
    }
}

impl ReportDocument {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("report serializes"),
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("problem: {}\nvalue: {}\n", self.problem, self.value);
        if let Some([i, j]) = self.witness_edge {
            out.push_str(&format!("witness edge: ({i}, {j})\n"));
        }
        out.push_str(&format!("iterations: {}\n", self.iterations));
        if let Some(tol) = self.tolerance {
            out.push_str(&format!("tolerance: {tol}\n"));
        }
        if !self.plan.is_empty() {
            out.push_str("plan:\n");
            for (i, j, mass) in &self.plan {
                out.push_str(&format!("  {i} -> {j}  mass {mass}\n"));
            }
        }
        out.push_str(&format!("time: {:.3} ms", self.wall_time_ms));
        out
    }
}
