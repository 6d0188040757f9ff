//! Yearly emissions cap, renewable portfolio standard and reserve margin.

use crate::lp::{BlockId, Family, LinExpr, LinearModel, VarId};
use crate::model::{ElccSurface, RenewableKind, SystemData};
use crate::uc::BlockVars;

use super::investment::{status_expr, InvestmentVars};

/// `Σ_w ω_w emissions(y,w) ≤ E_y`.
pub fn add_emissions(model: &mut LinearModel, sys: &SystemData, year: usize, blocks: &[BlockVars]) -> Option<usize> {
    let cap = sys.policy[year].emissions_cap;
    if !cap.is_finite() {
        return None;
    }
    let mut e = LinExpr::new();
    for b in blocks.iter().filter(|b| b.key.year == year) {
        e.add_scaled(&b.emissions, sys.grid.periods[b.key.period].weight);
    }
    e.compact();
    if e.terms().is_empty() {
        return None;
    }
    Some(model.add_le(format!("emissions[{}]", sys.grid.years[year]), Family::Emissions, e, cap))
}

/// Weighted eligible policy-zone renewable energy covers `RPS_y` of the
/// weighted policy-zone load.
pub fn add_rps(model: &mut LinearModel, sys: &SystemData, year: usize, blocks: &[BlockVars]) -> Option<usize> {
    let share = sys.policy[year].rps;
    if share <= 0.0 {
        return None;
    }
    let mut e = LinExpr::new();
    for b in blocks.iter().filter(|b| b.key.year == year) {
        e.add_scaled(&b.rps_energy, sys.grid.periods[b.key.period].weight);
    }
    let target = share * sys.annual_load(sys.policy_zone(), year);
    Some(model.add_ge(format!("rps[{}]", sys.grid.years[year]), Family::Rps, e, target))
}

/// Capacity-credit columns of one year.
#[derive(Clone, Debug, Default)]
pub struct ElccVars {
    pub vre: Option<VarId>,
    pub storage: Option<VarId>,
}

/// Installed policy-zone wind, solar and storage power of a year.
fn penetration(sys: &SystemData, inv: &InvestmentVars, year: usize) -> [LinExpr; 3] {
    let pz = sys.policy_zone();
    let mut wind = LinExpr::new();
    let mut solar = LinExpr::new();
    let mut storage = LinExpr::new();
    for (r, c) in sys.renewables.iter().zip(&inv.renewable) {
        if r.zone != pz {
            continue;
        }
        let target = match r.kind {
            RenewableKind::Wind => &mut wind,
            RenewableKind::Solar => &mut solar,
            _ => continue,
        };
        target.add_scaled(&c.installed[year], 1.0);
    }
    for (s, c) in sys.storage.iter().zip(&inv.storage_power) {
        if s.zone == pz {
            storage.add_scaled(&c.installed[year], 1.0);
        }
    }
    [wind, solar, storage]
}

/// Credit column bounded above by every plane and by the capacity it credits.
fn credit_column(
    model: &mut LinearModel,
    name: String,
    surface: &ElccSurface,
    [wind, solar, storage]: &[LinExpr; 3],
    ceiling: &LinExpr,
) -> Option<VarId> {
    if surface.planes.is_empty() {
        return None;
    }
    let x = model.add_continuous(name.clone(), 0.0, f64::INFINITY, BlockId::INVESTMENT);
    for (i, p) in surface.planes.iter().enumerate() {
        let mut e = LinExpr::var(x);
        e.add_scaled(wind, -p.wind_slope)
            .add_scaled(solar, -p.solar_slope)
            .add_scaled(storage, -p.storage_slope);
        model.add_le(format!("{name}_plane[{i}]"), Family::Prm, e, p.intercept);
    }
    let mut e = LinExpr::var(x);
    e.add_scaled(ceiling, -1.0);
    model.add_le(format!("{name}_ceiling"), Family::Prm, e, 0.0);
    Some(x)
}

/// Qualifying capacity of policy-zone thermal, hydro and credited
/// renewables/storage meets `PRM_y`.
pub fn add_prm(
    model: &mut LinearModel,
    sys: &SystemData,
    inv: &InvestmentVars,
    year: usize,
) -> (ElccVars, Option<usize>) {
    let policy = &sys.policy[year];
    if policy.prm <= 0.0 {
        return (ElccVars::default(), None);
    }
    let label = sys.grid.years[year];
    let pz = sys.policy_zone();
    let pen = penetration(sys, inv, year);
    let mut vre_cap = pen[0].clone();
    vre_cap.add_scaled(&pen[1], 1.0);
    let elcc = ElccVars {
        vre: credit_column(model, format!("elcc_vre[{label}]"), &policy.vre_elcc, &pen, &vre_cap),
        storage: credit_column(model, format!("elcc_st[{label}]"), &policy.storage_elcc, &pen, &pen[2]),
    };
    let mut e = LinExpr::new();
    for (u, ti) in sys.thermal.iter().zip(&inv.thermal) {
        if u.zone == pz {
            e.add_scaled(&status_expr(ti.status[year]), u.p_max * u.nqc);
        }
    }
    for h in sys.hydro.iter().filter(|h| h.zone == pz) {
        e.add_constant(h.p_max * h.nqc);
    }
    for x in [elcc.vre, elcc.storage].into_iter().flatten() {
        e.add_term(x, 1.0);
    }
    let row = model.add_ge(format!("prm[{label}]"), Family::Prm, e, policy.prm);
    (elcc, Some(row))
}
