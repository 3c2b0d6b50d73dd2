use super::{LpModel, LpSolution, LpSolver, LpStatus, FEASIBILITY_TOL};

/// Brute-force reference solver: enumerates every intersection of `n` active
/// hyperplanes (rows and column bounds) and keeps the best feasible one.
///
/// Only meant for tiny test problems. Requires `n <= 3` and finite column
/// bounds (so the feasible region is a polytope); anything else is reported as
/// [`LpStatus::SolverFailure`].
#[derive(Debug, Clone, Copy, Default)]
pub struct VertexEnumeration;

pub const MAX_VARIABLES: usize = 3;

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f != 0.0 {
                    for k in col..n {
                        a[row][k] -= f * a[col][k];
                    }
                    b[row] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

impl LpSolver for VertexEnumeration {
    fn name(&self) -> &'static str {
        "vertex-enumeration"
    }

    fn solve(&self, model: &LpModel) -> LpSolution {
        let n = model.num_variables();
        if n > MAX_VARIABLES
            || model
                .variables()
                .iter()
                .any(|v| !v.lower.is_finite() || !v.upper.is_finite())
        {
            return LpSolution::failed(LpStatus::SolverFailure);
        }

        // Hyperplanes a·x = b from every row and every column bound.
        let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
        for c in model.constraints() {
            let mut a = vec![0.0; n];
            for (v, coef) in c.expr.terms() {
                a[v.index()] = coef;
            }
            planes.push((a, c.rhs - c.expr.constant_term()));
        }
        for (i, v) in model.variables().iter().enumerate() {
            for bound in [v.lower, v.upper] {
                let mut a = vec![0.0; n];
                a[i] = 1.0;
                planes.push((a, bound));
            }
        }

        let mut best: Option<(f64, Vec<f64>)> = None;
        for subset in combinations(planes.len(), n) {
            let a = subset.iter().map(|&i| planes[i].0.clone()).collect();
            let b = subset.iter().map(|&i| planes[i].1).collect();
            let Some(x) = solve_dense(a, b) else { continue };
            if model.max_violation(&x) > FEASIBILITY_TOL {
                continue;
            }
            let obj = model.objective().evaluate(&x);
            if best.as_ref().is_none_or(|(b, _)| obj < *b - 1e-12) {
                best = Some((obj, x));
            }
        }
        match best {
            Some((objective_value, values)) => LpSolution {
                status: LpStatus::Optimal,
                values,
                objective_value,
            },
            None => LpSolution::failed(LpStatus::Infeasible),
        }
    }
}
