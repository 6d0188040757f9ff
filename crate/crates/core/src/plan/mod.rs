//! Multi-year planning model: investment stock, dispatch blocks, policy rows
//! and the cost objective.

pub mod investment;
pub mod policy;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ev::{ChargingRegime, EvFleet};
use crate::lp::{LinExpr, LinearModel};
use crate::model::{validate_system, SystemData};
use crate::uc::{build_block, BalanceRow, BlockVars};

pub use crate::uc::BalanceMode;
pub use investment::{link_investment, CapacityInvestment, InvestmentVars, ThermalInvestment};
pub use policy::{add_emissions, add_prm, add_rps, ElccVars};

use investment::status_expr;

/// Cost expressions of one investment year.
///
/// The weighted fields enter the objective; the `annual_*` fields are the
/// same quantities for a single calendar year, used for per-vehicle savings.
#[derive(Clone, Debug)]
pub struct YearCostExprs {
    pub generation: LinExpr,
    pub maintenance: LinExpr,
    pub investment: LinExpr,
    /// Policy-zone share of `generation` including wheeling on its import lines.
    pub policy_zone_generation: LinExpr,
    /// Wheeling on lines touching the policy zone.
    pub imports: LinExpr,
    pub policy_zone_maintenance: LinExpr,
    pub annual_generation: LinExpr,
    pub annual_maintenance: LinExpr,
    /// Annualized capital of everything built up to and including the year.
    pub annual_capital: LinExpr,
}

/// Numeric cost ledger of one year.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct YearCosts {
    pub year: u32,
    pub generation: f64,
    pub maintenance: f64,
    pub investment: f64,
    pub policy_zone_generation: f64,
    pub imports: f64,
    pub policy_zone_maintenance: f64,
    pub annual_generation: f64,
    pub annual_maintenance: f64,
    pub annual_capital: f64,
}

impl YearCosts {
    pub fn total(&self) -> f64 {
        self.generation + self.maintenance + self.investment
    }

    /// Undiscounted cost of operating the system in this single year.
    pub fn annual_total(&self) -> f64 {
        self.annual_generation + self.annual_maintenance + self.annual_capital
    }
}

impl YearCostExprs {
    pub fn eval(&self, year: u32, values: &[f64]) -> YearCosts {
        YearCosts {
            year,
            generation: self.generation.eval(values),
            maintenance: self.maintenance.eval(values),
            investment: self.investment.eval(values),
            policy_zone_generation: self.policy_zone_generation.eval(values),
            imports: self.imports.eval(values),
            policy_zone_maintenance: self.policy_zone_maintenance.eval(values),
            annual_generation: self.annual_generation.eval(values),
            annual_maintenance: self.annual_maintenance.eval(values),
            annual_capital: self.annual_capital.eval(values),
        }
    }
}

/// Row indices of the yearly policy constraints.
#[derive(Clone, Debug, Default)]
pub struct PolicyRows {
    pub emissions: Option<usize>,
    pub rps: Option<usize>,
    pub prm: Option<usize>,
}

/// Assembled planning problem.
#[derive(Clone, Debug)]
pub struct PlanningModel {
    pub model: LinearModel,
    pub regime: ChargingRegime,
    pub mode: BalanceMode,
    pub blocks: Vec<BlockVars>,
    pub investment: InvestmentVars,
    pub elcc: Vec<ElccVars>,
    pub policy_rows: Vec<PolicyRows>,
    pub costs: Vec<YearCostExprs>,
    /// Objective as assembled, also stored in `model`.
    pub objective: LinExpr,
}

impl PlanningModel {
    /// Zonal balance rows in block order, zone-major within a block.
    pub fn balance_rows(&self) -> impl Iterator<Item = &BalanceRow> {
        self.blocks.iter().flat_map(|b| b.balance.iter())
    }

    pub fn num_balance_rows(&self) -> usize {
        self.blocks.iter().map(|b| b.balance.len()).sum()
    }

    /// Supply minus demand of every balance row at `values`.
    pub fn residuals(&self, values: &[f64]) -> Vec<f64> {
        self.balance_rows().map(|r| r.expr.eval(values)).collect()
    }

    pub fn cost_ledger(&self, years: &[u32], values: &[f64]) -> Vec<YearCosts> {
        self.costs.iter().zip(years).map(|(c, &y)| c.eval(y, values)).collect()
    }
}

/// Builds the full planning model for one charging regime.
pub fn build_plan(sys: &SystemData, fleet: &EvFleet, regime: ChargingRegime, mode: BalanceMode) -> Result<PlanningModel> {
    let issues = validate_system(sys);
    if !issues.is_empty() {
        return Err(Error::Invalid(issues));
    }
    let g = &sys.grid;
    if fleet.years.len() != g.num_years() {
        return Err(Error::Mismatch(format!(
            "fleet covers {} years, grid has {}",
            fleet.years.len(),
            g.num_years()
        )));
    }
    let convention = sys.ev.discharge_convention;
    let mut model = LinearModel::new();
    let investment = link_investment(&mut model, sys);

    let mut blocks = Vec::with_capacity(g.num_blocks());
    for key in g.blocks() {
        let cap = investment.year_capacity(key.year);
        blocks.push(build_block(&mut model, sys, fleet, key, &cap, regime, convention, mode)?);
    }

    let mut elcc = Vec::with_capacity(g.num_years());
    let mut policy_rows = Vec::with_capacity(g.num_years());
    for y in 0..g.num_years() {
        let emissions = add_emissions(&mut model, sys, y, &blocks);
        let rps = add_rps(&mut model, sys, y, &blocks);
        let (credit, prm) = add_prm(&mut model, sys, &investment, y);
        elcc.push(credit);
        policy_rows.push(PolicyRows { emissions, rps, prm });
    }

    let costs = assemble_costs(sys, &investment, &blocks);
    let mut objective = LinExpr::new();
    for c in &costs {
        objective
            .add_scaled(&c.generation, 1.0)
            .add_scaled(&c.maintenance, 1.0)
            .add_scaled(&c.investment, 1.0);
    }
    let objective = objective.compacted();
    model.set_objective(objective.clone());
    log::debug!(
        "planning model {regime}: {} columns ({} binary), {} rows",
        model.num_vars(),
        model.num_binaries(),
        model.num_constraints()
    );
    Ok(PlanningModel {
        model,
        regime,
        mode,
        blocks,
        investment,
        elcc,
        policy_rows,
        costs,
        objective,
    })
}

/// Generation, maintenance and investment cost expressions of every year.
pub fn assemble_costs(sys: &SystemData, inv: &InvestmentVars, blocks: &[BlockVars]) -> Vec<YearCostExprs> {
    let g = &sys.grid;
    let pz = sys.policy_zone();
    let rate = sys.discount_rate;
    let mut out = Vec::with_capacity(g.num_years());
    let mut capital_stock = LinExpr::new();
    for y in 0..g.num_years() {
        let wy = g.year_weights[y];
        let mut annual_generation = LinExpr::new();
        let mut annual_pz = LinExpr::new();
        let mut annual_imports = LinExpr::new();
        for b in blocks.iter().filter(|b| b.key.year == y) {
            let ww = g.periods[b.key.period].weight;
            annual_generation.add_scaled(&b.gen_cost, ww);
            annual_pz.add_scaled(&b.policy_zone_cost, ww);
            for (l, lv) in sys.lines.iter().zip(&b.lines) {
                if l.lambda(pz) != 0.0 {
                    annual_imports.add_scaled(&lv.cost, ww);
                }
            }
        }

        let mut annual_maintenance = LinExpr::new();
        let mut pz_maintenance = LinExpr::new();
        let mut builds = LinExpr::new();
        let mut add_maint = |zone: usize, e: &LinExpr, rate_per_unit: f64| {
            annual_maintenance.add_scaled(e, rate_per_unit);
            if zone == pz {
                pz_maintenance.add_scaled(e, rate_per_unit);
            }
        };
        for (u, ti) in sys.thermal.iter().zip(&inv.thermal) {
            add_maint(u.zone, &status_expr(ti.status[y]), u.economics.maintenance);
            if let Some(b) = ti.build[y] {
                builds.add_term(b, u.economics.annualized_capital(rate));
            }
        }
        for (r, c) in sys.renewables.iter().zip(&inv.renewable) {
            add_maint(r.zone, &c.installed[y], r.economics.maintenance);
            if let Some(b) = c.build[y] {
                builds.add_term(b, r.economics.annualized_capital(rate));
            }
        }
        for (i, s) in sys.storage.iter().enumerate() {
            let (p, e) = (&inv.storage_power[i], &inv.storage_energy[i]);
            add_maint(s.zone, &p.installed[y], s.power_economics.maintenance);
            add_maint(s.zone, &e.installed[y], s.energy_economics.maintenance);
            if let Some(b) = p.build[y] {
                builds.add_term(b, s.power_economics.annualized_capital(rate));
            }
            if let Some(b) = e.build[y] {
                builds.add_term(b, s.energy_economics.annualized_capital(rate));
            }
        }
        for h in &sys.hydro {
            add_maint(h.zone, &LinExpr::constant(h.p_max), h.maintenance);
        }
        capital_stock.add_scaled(&builds, 1.0);

        let mut investment = LinExpr::new();
        investment.add_scaled(&builds, g.remaining_weight(y));
        let scaled = |e: &LinExpr| {
            let mut s = LinExpr::new();
            s.add_scaled(e, wy);
            s.compacted()
        };
        out.push(YearCostExprs {
            generation: scaled(&annual_generation),
            maintenance: scaled(&annual_maintenance),
            investment: investment.compacted(),
            policy_zone_generation: scaled(&annual_pz),
            imports: scaled(&annual_imports),
            policy_zone_maintenance: scaled(&pz_maintenance),
            annual_generation: annual_generation.compacted(),
            annual_maintenance: annual_maintenance.compacted(),
            annual_capital: capital_stock.clone().compacted(),
        });
    }
    out
}
