use std::panic::{catch_unwind, AssertUnwindSafe};

use highs::{HighsModelStatus, RowProblem, Sense as HighsSense};

use super::{LpModel, LpSolution, LpSolver, LpStatus};

/// HiGHS dual simplex, single-threaded so repeated solves are reproducible.
#[derive(Debug, Clone)]
pub struct HighsSolver {
    pub time_limit_s: Option<f64>,
    pub primal_feasibility_tolerance: f64,
}

impl Default for HighsSolver {
    fn default() -> Self {
        Self {
            time_limit_s: None,
            primal_feasibility_tolerance: 1e-9,
        }
    }
}

enum Outcome {
    Optimal(Vec<f64>),
    Infeasible,
    Unbounded,
    Ambiguous,
    Failure,
}

impl HighsSolver {
    fn run(&self, model: &LpModel, with_objective: bool) -> Outcome {
        let mut pb = RowProblem::default();
        let cols: Vec<_> = model
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let cost = if with_objective {
                    model.objective().coefficient(super::VarId(i))
                } else {
                    0.0
                };
                pb.add_column(cost, v.lower..=v.upper)
            })
            .collect();
        for c in model.constraints() {
            let (lo, hi) = c.bounds();
            let row: Vec<_> = c.expr.terms().map(|(v, coef)| (cols[v.index()], coef)).collect();
            pb.add_row(lo..=hi, &row);
        }

        let mut hm = match pb.try_optimise(HighsSense::Minimise) {
            Ok(m) => m,
            Err(_) => return Outcome::Failure,
        };
        hm.make_quiet();
        hm.set_option("threads", 1);
        hm.set_option("solver", "simplex");
        hm.set_option("random_seed", 0);
        hm.set_option("primal_feasibility_tolerance", self.primal_feasibility_tolerance);
        if let Some(limit) = self.time_limit_s {
            hm.set_option("time_limit", limit);
        }
        let solved = match hm.try_solve() {
            Ok(s) => s,
            Err(_) => return Outcome::Failure,
        };
        match solved.status() {
            HighsModelStatus::Optimal => Outcome::Optimal(solved.get_solution().columns().to_vec()),
            // An empty model has the trivial solution at the column lower bounds (or 0).
            HighsModelStatus::ModelEmpty => Outcome::Optimal(
                model
                    .variables()
                    .iter()
                    .map(|v| {
                        if v.lower.is_finite() {
                            v.lower
                        } else {
                            0.0f64.min(v.upper)
                        }
                    })
                    .collect(),
            ),
            HighsModelStatus::Infeasible => Outcome::Infeasible,
            HighsModelStatus::Unbounded => Outcome::Unbounded,
            HighsModelStatus::UnboundedOrInfeasible => Outcome::Ambiguous,
            _ => Outcome::Failure,
        }
    }
}

impl LpSolver for HighsSolver {
    fn name(&self) -> &'static str {
        "highs"
    }

    fn solve(&self, model: &LpModel) -> LpSolution {
        let outcome = catch_unwind(AssertUnwindSafe(|| match self.run(model, true) {
            // Resolve with a zero objective: feasible means the original was unbounded.
            Outcome::Ambiguous => match self.run(model, false) {
                Outcome::Optimal(_) => Outcome::Unbounded,
                Outcome::Infeasible | Outcome::Ambiguous => Outcome::Infeasible,
                other => other,
            },
            other => other,
        }))
        .unwrap_or(Outcome::Failure);

        match outcome {
            Outcome::Optimal(values) => {
                let objective_value = model.objective().evaluate(&values);
                LpSolution {
                    status: LpStatus::Optimal,
                    values,
                    objective_value,
                }
            }
            Outcome::Infeasible => LpSolution::failed(LpStatus::Infeasible),
            Outcome::Unbounded => LpSolution::failed(LpStatus::Unbounded),
            Outcome::Ambiguous | Outcome::Failure => LpSolution::failed(LpStatus::SolverFailure),
        }
    }
}
