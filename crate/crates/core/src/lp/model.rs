use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::{LinExpr, VarId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Continuous,
    Binary,
}

/// Decomposition block a variable belongs to. Block 0 is the investment block,
/// dispatch blocks follow in (year, period) order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId(pub u32);

impl BlockId {
    pub const INVESTMENT: BlockId = BlockId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Constraint family tags, used by infeasibility probes and audits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    ThermalLimits,
    ThermalTransitions,
    MinUpDown,
    ThermalRamp,
    Commitment,
    Renewable,
    StorageLimits,
    StorageSoc,
    StorageDuration,
    HydroLimits,
    HydroBudget,
    LineFlow,
    EvPower,
    EvSoc,
    Investment,
    Emissions,
    Rps,
    Prm,
    Balance,
    Penalty,
}

impl Family {
    pub const ALL: [Family; 20] = [
        Family::ThermalLimits,
        Family::ThermalTransitions,
        Family::MinUpDown,
        Family::ThermalRamp,
        Family::Commitment,
        Family::Renewable,
        Family::StorageLimits,
        Family::StorageSoc,
        Family::StorageDuration,
        Family::HydroLimits,
        Family::HydroBudget,
        Family::LineFlow,
        Family::EvPower,
        Family::EvSoc,
        Family::Investment,
        Family::Emissions,
        Family::Rps,
        Family::Prm,
        Family::Balance,
        Family::Penalty,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::ThermalLimits => "thermal output limits",
            Family::ThermalTransitions => "thermal startup/shutdown logic",
            Family::MinUpDown => "thermal minimum up/down time",
            Family::ThermalRamp => "thermal ramping",
            Family::Commitment => "commitment/operational status link",
            Family::Renewable => "renewable production",
            Family::StorageLimits => "storage power limits",
            Family::StorageSoc => "storage state of charge",
            Family::StorageDuration => "storage minimum mode duration",
            Family::HydroLimits => "hydro output/ramp limits",
            Family::HydroBudget => "hydro energy budget",
            Family::LineFlow => "line flow",
            Family::EvPower => "EV charge/discharge limits",
            Family::EvSoc => "EV state of charge",
            Family::Investment => "investment stock accounting",
            Family::Emissions => "emissions cap",
            Family::Rps => "renewable portfolio standard",
            Family::Prm => "planning reserve margin",
            Family::Balance => "zonal power balance",
            Family::Penalty => "residual penalty split",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
    pub block: BlockId,
}

/// `lower ≤ Σ coef·var ≤ upper`. Constants are folded into the bounds on insertion.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub expr: LinExpr,
    pub lower: f64,
    pub upper: f64,
}

impl Constraint {
    /// Positive amount by which `values` violate the constraint.
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.expr.eval(values);
        (self.lower - lhs).max(lhs - self.upper).max(0.0)
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub what: String,
    pub family: Option<Family>,
    pub amount: f64,
}

/// Minimisation problem with linear constraints and continuous or binary columns.
#[derive(Clone, Debug, Default)]
pub struct LinearModel {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: LinExpr,
}

impl LinearModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        kind: VarKind,
        block: BlockId,
    ) -> VarId {
        let id = VarId::from_index(self.vars.len());
        self.vars.push(Variable {
            name: name.into(),
            lower,
            upper,
            kind,
            block,
        });
        id
    }

    pub fn add_continuous(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        block: BlockId,
    ) -> VarId {
        self.add_var(name, lower, upper, VarKind::Continuous, block)
    }

    pub fn add_binary(&mut self, name: impl Into<String>, block: BlockId) -> VarId {
        self.add_var(name, 0.0, 1.0, VarKind::Binary, block)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        family: Family,
        expr: LinExpr,
        lower: f64,
        upper: f64,
    ) -> usize {
        let mut expr = expr.compacted();
        let c = expr.constant_part();
        expr.add_constant(-c);
        self.constraints.push(Constraint {
            name: name.into(),
            family,
            expr,
            lower: lower - c,
            upper: upper - c,
        });
        self.constraints.len() - 1
    }

    pub fn add_le(
        &mut self,
        name: impl Into<String>,
        family: Family,
        expr: LinExpr,
        rhs: f64,
    ) -> usize {
        self.add_constraint(name, family, expr, f64::NEG_INFINITY, rhs)
    }

    pub fn add_ge(
        &mut self,
        name: impl Into<String>,
        family: Family,
        expr: LinExpr,
        rhs: f64,
    ) -> usize {
        self.add_constraint(name, family, expr, rhs, f64::INFINITY)
    }

    pub fn add_eq(
        &mut self,
        name: impl Into<String>,
        family: Family,
        expr: LinExpr,
        rhs: f64,
    ) -> usize {
        self.add_constraint(name, family, expr, rhs, rhs)
    }

    pub fn set_objective(&mut self, objective: LinExpr) {
        self.objective = objective.compacted();
    }

    pub fn objective(&self) -> &LinExpr {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.index()]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_bounds(&mut self, id: VarId, lower: f64, upper: f64) {
        let v = &mut self.vars[id.index()];
        v.lower = lower;
        v.upper = upper;
    }

    pub fn fix(&mut self, id: VarId, value: f64) {
        self.set_bounds(id, value, value);
    }

    pub fn binaries(&self) -> impl Iterator<Item = VarId> + '_ {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == VarKind::Binary)
            .map(|(i, _)| VarId::from_index(i))
    }

    pub fn num_binaries(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    /// Copy of the model without the constraints of `families`.
    pub fn without_families(&self, families: &[Family]) -> LinearModel {
        LinearModel {
            vars: self.vars.clone(),
            constraints: self
                .constraints
                .iter()
                .filter(|c| !families.contains(&c.family))
                .cloned()
                .collect(),
            objective: self.objective.clone(),
        }
    }

    /// Checks bounds, integrality and every constraint at `values`.
    pub fn audit(&self, values: &[f64], tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        if values.len() != self.vars.len() {
            out.push(Violation {
                what: format!(
                    "assignment has {} values for {} variables",
                    values.len(),
                    self.vars.len()
                ),
                family: None,
                amount: f64::INFINITY,
            });
            return out;
        }
        for (v, &x) in self.vars.iter().zip(values) {
            let amount = (v.lower - x).max(x - v.upper).max(0.0);
            if amount > tol || !x.is_finite() {
                out.push(Violation {
                    what: format!("bound of {}", v.name),
                    family: None,
                    amount,
                });
            }
            if v.kind == VarKind::Binary && (x - x.round()).abs() > tol {
                out.push(Violation {
                    what: format!("integrality of {}", v.name),
                    family: None,
                    amount: (x - x.round()).abs(),
                });
            }
        }
        for c in &self.constraints {
            let amount = c.violation(values);
            let scale = 1.0f64.max(c.lower.abs().min(c.upper.abs()));
            if amount > tol * scale {
                out.push(Violation {
                    what: c.name.clone(),
                    family: Some(c.family),
                    amount,
                });
            }
        }
        out
    }

    /// Sub-problem over the variables flagged in `free`; all others are
    /// substituted by their entry in `values`. Constraints that no longer
    /// contain a free variable are dropped.
    pub fn restrict(&self, free: &[bool], values: &[f64]) -> Restricted {
        assert_eq!(free.len(), self.vars.len());
        let mut sub = LinearModel::new();
        let mut new_index = vec![None; self.vars.len()];
        let mut columns = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            if free[i] {
                let id = sub.add_var(v.name.clone(), v.lower, v.upper, v.kind, v.block);
                new_index[i] = Some(id);
                columns.push(VarId::from_index(i));
            }
        }
        let map_expr = |e: &LinExpr| -> LinExpr {
            let mut out = LinExpr::constant(e.constant_part());
            for &(v, c) in e.terms() {
                match new_index[v.index()] {
                    Some(nv) => {
                        out.add_term(nv, c);
                    }
                    None => {
                        out.add_constant(c * values[v.index()]);
                    }
                }
            }
            out
        };
        for c in &self.constraints {
            if !c.expr.terms().iter().any(|(v, _)| free[v.index()]) {
                continue;
            }
            let e = map_expr(&c.expr);
            sub.add_constraint(c.name.clone(), c.family, e, c.lower, c.upper);
        }
        sub.objective = map_expr(&self.objective).compacted();
        Restricted {
            model: sub,
            columns,
        }
    }
}

/// Result of [`LinearModel::restrict`]; `columns[i]` is the original id of sub-model column `i`.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub model: LinearModel,
    pub columns: Vec<VarId>,
}

impl Restricted {
    /// Writes sub-model values back into a full assignment.
    pub fn scatter(&self, sub_values: &[f64], full: &mut [f64]) {
        for (i, &orig) in self.columns.iter().enumerate() {
            full[orig.index()] = sub_values[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_folded_into_bounds() {
        let mut m = LinearModel::new();
        let x = m.add_continuous("x", 0.0, 10.0, BlockId(1));
        let mut e = LinExpr::var(x);
        e.add_constant(3.0);
        m.add_le("c", Family::Balance, e, 5.0);
        let c = &m.constraints()[0];
        assert_eq!(c.upper, 2.0);
        assert_eq!(c.violation(&[2.5]), 0.5);
    }

    #[test]
    fn restrict_substitutes_fixed_values() {
        let mut m = LinearModel::new();
        let x = m.add_continuous("x", 0.0, 10.0, BlockId(1));
        let y = m.add_continuous("y", 0.0, 10.0, BlockId(2));
        m.add_le("sum", Family::LineFlow, LinExpr::var(x) + LinExpr::var(y), 8.0);
        m.add_le("only_y", Family::LineFlow, LinExpr::var(y), 9.0);
        m.set_objective(LinExpr::term(x, 2.0) + LinExpr::term(y, 3.0));
        let r = m.restrict(&[true, false], &[0.0, 5.0]);
        assert_eq!(r.model.num_vars(), 1);
        assert_eq!(r.model.num_constraints(), 1);
        assert_eq!(r.model.constraints()[0].upper, 3.0);
        assert_eq!(r.model.objective().constant_part(), 15.0);
        let mut full = vec![0.0, 5.0];
        r.scatter(&[3.0], &mut full);
        assert_eq!(full, vec![3.0, 5.0]);
    }

    #[test]
    fn audit_flags_fractional_binary() {
        let mut m = LinearModel::new();
        m.add_binary("b", BlockId(0));
        let v = m.audit(&[0.4], 1e-6);
        assert_eq!(v.len(), 1);
        assert!(v[0].what.contains("integrality"));
    }
}
