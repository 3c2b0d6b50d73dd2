//! Solver-agnostic linear programs.
//!
//! [`LpModel`] is a plain container of bounded columns, linear rows and a
//! minimisation objective. Backends implement [`LpSolver`]; the crate ships
//! [`HighsSolver`] for real models and [`VertexEnumeration`] as a brute-force
//! reference for problems with at most three variables.

mod export;
mod highs_backend;
mod vertex;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use export::write_lp;
pub use highs_backend::HighsSolver;
pub use vertex::VertexEnumeration;

/// Absolute primal feasibility tolerance (after row scaling).
pub const FEASIBILITY_TOL: f64 = 1e-6;
/// Relative tolerance for comparing objective values.
pub const OBJECTIVE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintId(usize);

impl ConstraintId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("variable bounds inverted: lower {lower} > upper {upper}")]
    InvertedBounds { lower: f64, upper: f64 },
    #[error("NaN variable bound")]
    NanBound,
    #[error("variable {0:?} is not registered in this model")]
    UnknownVariable(VarId),
    #[error("constraint {0:?} is not registered in this model")]
    UnknownConstraint(ConstraintId),
    #[error("non-finite coefficient {0}")]
    NonFinite(f64),
}

/// Sum of `coefficient * variable` terms plus a constant. Duplicate variables
/// are merged on insertion.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearExpr {
    terms: BTreeMap<VarId, f64>,
    constant: f64,
}

impl LinearExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(value: f64) -> Self {
        Self {
            terms: BTreeMap::new(),
            constant: value,
        }
    }

    pub fn term(var: VarId, coef: f64) -> Self {
        let mut e = Self::new();
        e.add_term(var, coef);
        e
    }

    pub fn add_term(&mut self, var: VarId, coef: f64) -> &mut Self {
        *self.terms.entry(var).or_insert(0.0) += coef;
        self
    }

    pub fn add_constant(&mut self, value: f64) -> &mut Self {
        self.constant += value;
        self
    }

    pub fn with(mut self, var: VarId, coef: f64) -> Self {
        self.add_term(var, coef);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, f64)> + '_ {
        self.terms.iter().map(|(&v, &c)| (v, c))
    }

    pub fn coefficient(&self, var: VarId) -> f64 {
        self.terms.get(&var).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|(v, c)| c * values[v.0]).sum::<f64>()
    }

    fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn check_finite(&self) -> Result<(), LpError> {
        match self
            .terms
            .values()
            .chain(std::iter::once(&self.constant))
            .find(|c| !c.is_finite())
        {
            Some(&c) => Err(LpError::NonFinite(c)),
            None => Ok(()),
        }
    }
}

impl From<VarId> for LinearExpr {
    fn from(var: VarId) -> Self {
        LinearExpr::term(var, 1.0)
    }
}

impl AddAssign<&LinearExpr> for LinearExpr {
    fn add_assign(&mut self, rhs: &LinearExpr) {
        for (v, c) in rhs.terms() {
            self.add_term(v, c);
        }
        self.constant += rhs.constant;
    }
}

impl Add for LinearExpr {
    type Output = LinearExpr;
    fn add(mut self, rhs: LinearExpr) -> LinearExpr {
        self += &rhs;
        self
    }
}

impl Sub for LinearExpr {
    type Output = LinearExpr;
    fn sub(self, rhs: LinearExpr) -> LinearExpr {
        self + (-rhs)
    }
}

impl Neg for LinearExpr {
    type Output = LinearExpr;
    fn neg(self) -> LinearExpr {
        self * -1.0
    }
}

impl Mul<f64> for LinearExpr {
    type Output = LinearExpr;
    fn mul(mut self, k: f64) -> LinearExpr {
        for c in self.terms.values_mut() {
            *c *= k;
        }
        self.constant *= k;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

/// `expr sense rhs`; the expression's constant is moved to the right-hand side
/// by [`Constraint::bounds`].
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub expr: LinearExpr,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    /// Row activity bounds for `expr` without its constant.
    pub fn bounds(&self) -> (f64, f64) {
        let rhs = self.rhs - self.expr.constant_term();
        match self.sense {
            Sense::Le => (f64::NEG_INFINITY, rhs),
            Sense::Eq => (rhs, rhs),
            Sense::Ge => (rhs, f64::INFINITY),
        }
    }

    /// Violation of this row at `values`, divided by the row's largest
    /// absolute coefficient (at least 1).
    pub fn scaled_violation(&self, values: &[f64]) -> f64 {
        let lhs = self.expr.evaluate(values);
        let raw = match self.sense {
            Sense::Le => lhs - self.rhs,
            Sense::Eq => (lhs - self.rhs).abs(),
            Sense::Ge => self.rhs - lhs,
        };
        raw.max(0.0) / self.expr.max_abs_coefficient().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpModel {
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: LinearExpr,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, lower: f64, upper: f64) -> Result<VarId, LpError> {
        let name = format!("x{}", self.variables.len());
        self.add_named_variable(name, lower, upper)
    }

    pub fn add_named_variable(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
    ) -> Result<VarId, LpError> {
        if lower.is_nan() || upper.is_nan() {
            return Err(LpError::NanBound);
        }
        if lower > upper {
            return Err(LpError::InvertedBounds { lower, upper });
        }
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        Ok(VarId(self.variables.len() - 1))
    }

    pub fn set_bounds(&mut self, var: VarId, lower: f64, upper: f64) -> Result<(), LpError> {
        if lower.is_nan() || upper.is_nan() {
            return Err(LpError::NanBound);
        }
        if lower > upper {
            return Err(LpError::InvertedBounds { lower, upper });
        }
        let v = self
            .variables
            .get_mut(var.0)
            .ok_or(LpError::UnknownVariable(var))?;
        v.lower = lower;
        v.upper = upper;
        Ok(())
    }

    fn check_expr(&self, expr: &LinearExpr) -> Result<(), LpError> {
        expr.check_finite()?;
        match expr.terms().find(|(v, _)| v.0 >= self.variables.len()) {
            Some((v, _)) => Err(LpError::UnknownVariable(v)),
            None => Ok(()),
        }
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        expr: LinearExpr,
        sense: Sense,
        rhs: f64,
    ) -> Result<ConstraintId, LpError> {
        self.check_expr(&expr)?;
        if !rhs.is_finite() {
            return Err(LpError::NonFinite(rhs));
        }
        self.constraints.push(Constraint {
            name: name.into(),
            expr,
            sense,
            rhs,
        });
        Ok(ConstraintId(self.constraints.len() - 1))
    }

    /// Overwrites an existing row in place, keeping its id.
    pub fn replace_constraint(
        &mut self,
        id: ConstraintId,
        expr: LinearExpr,
        sense: Sense,
        rhs: f64,
    ) -> Result<(), LpError> {
        self.check_expr(&expr)?;
        if !rhs.is_finite() {
            return Err(LpError::NonFinite(rhs));
        }
        let c = self
            .constraints
            .get_mut(id.0)
            .ok_or(LpError::UnknownConstraint(id))?;
        c.expr = expr;
        c.sense = sense;
        c.rhs = rhs;
        Ok(())
    }

    pub fn set_objective(&mut self, objective: LinearExpr) -> Result<(), LpError> {
        self.check_expr(&objective)?;
        self.objective = objective;
        Ok(())
    }

    pub fn objective(&self) -> &LinearExpr {
        &self.objective
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, var: VarId) -> &Variable {
        &self.variables[var.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, id: ConstraintId) -> &Constraint {
        &self.constraints[id.0]
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Largest scaled violation over all rows and column bounds at `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let rows = self.constraints.iter().map(|c| c.scaled_violation(values));
        let cols = self
            .variables
            .iter()
            .zip(values)
            .map(|(v, &x)| (v.lower - x).max(x - v.upper).max(0.0) / x.abs().max(1.0));
        rows.chain(cols).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    SolverFailure,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::SolverFailure => "solver_failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Column values, indexed by [`VarId::index`]. Empty unless optimal.
    pub values: Vec<f64>,
    /// Objective including its constant term; NaN unless optimal.
    pub objective_value: f64,
}

impl LpSolution {
    pub fn failed(status: LpStatus) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn value(&self, var: VarId) -> f64 {
        self.values[var.0]
    }

    pub fn values_of(&self, vars: &[VarId]) -> Vec<f64> {
        vars.iter().map(|&v| self.value(v)).collect()
    }
}

pub trait LpSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, model: &LpModel) -> LpSolution;
}
