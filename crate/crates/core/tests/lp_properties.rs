use hydrogrid_core::lp::{HighsSolver, LinearExpr, LpModel, LpSolver, LpStatus, Sense, VertexEnumeration};
use proptest::prelude::*;

fn sense(k: u8) -> Sense {
    match k % 3 {
        0 => Sense::Le,
        1 => Sense::Ge,
        _ => Sense::Eq,
    }
}

/// Random bounded LP with up to three columns and four rows.
fn small_lp() -> impl Strategy<Value = LpModel> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((-10.0..0.0f64, 0.0..10.0f64), n),
                prop::collection::vec(-5.0..5.0f64, n),
                prop::collection::vec(
                    (prop::collection::vec(-3.0..3.0f64, n), any::<u8>(), -8.0..8.0f64),
                    0..=4,
                ),
            )
        })
        .prop_map(|(bounds, cost, rows)| {
            let mut m = LpModel::new();
            let vars: Vec<_> = bounds
                .iter()
                .map(|&(lo, hi)| m.add_variable(lo, hi).unwrap())
                .collect();
            let mut obj = LinearExpr::constant(1.5);
            for (&v, &c) in vars.iter().zip(&cost) {
                obj.add_term(v, c);
            }
            m.set_objective(obj).unwrap();
            for (k, (coefs, s, rhs)) in rows.into_iter().enumerate() {
                let mut e = LinearExpr::new();
                for (&v, &c) in vars.iter().zip(&coefs) {
                    e.add_term(v, c);
                }
                m.add_constraint(format!("r{k}"), e, sense(s), rhs).unwrap();
            }
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn highs_agrees_with_vertex_enumeration(model in small_lp()) {
        let reference = VertexEnumeration.solve(&model);
        let highs = HighsSolver::default().solve(&model);
        // A bounded model is never unbounded, so both see the same feasibility.
        prop_assert_eq!(highs.status, reference.status);
        if reference.status == LpStatus::Optimal {
            let scale = 1.0 + reference.objective_value.abs();
            prop_assert!((highs.objective_value - reference.objective_value).abs() <= 1e-6 * scale);
            prop_assert!(model.max_violation(&highs.values) <= 1e-6);
        }
    }

    #[test]
    fn scaling_the_objective_scales_the_optimum(model in small_lp(), k in 0.01..100.0f64) {
        let base = HighsSolver::default().solve(&model);
        prop_assume!(base.is_optimal());
        let mut scaled = model.clone();
        scaled.set_objective(model.objective().clone() * k).unwrap();
        let s = HighsSolver::default().solve(&scaled);
        prop_assert!(s.is_optimal());
        let tol = 1e-6 * (1.0 + (k * base.objective_value).abs());
        prop_assert!((s.objective_value - k * base.objective_value).abs() <= tol);
    }
}

#[test]
fn reported_statuses() {
    let mut m = LpModel::new();
    let x = m.add_variable(0.0, 1.0).unwrap();
    m.add_constraint("c", LinearExpr::term(x, 1.0), Sense::Ge, 2.0)
        .unwrap();
    assert_eq!(HighsSolver::default().solve(&m).status, LpStatus::Infeasible);
    assert_eq!(VertexEnumeration.solve(&m).status, LpStatus::Infeasible);

    let mut m = LpModel::new();
    let x = m.add_variable(0.0, f64::INFINITY).unwrap();
    m.set_objective(LinearExpr::term(x, -1.0)).unwrap();
    assert_eq!(HighsSolver::default().solve(&m).status, LpStatus::Unbounded);
}
