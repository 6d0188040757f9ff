//! Dispatch block: thermal commitment, renewables, storage, hydro, line
//! flows, truck clusters and the zonal balance for one (year, period).

use crate::error::{Error, Result};
use crate::ev::{add_ev_constraints, ChargingRegime, DischargeConvention, EvBlockVars, EvFleet};
use crate::lp::{BlockId, Family, LinExpr, LinearModel, VarId};
use crate::model::{tau, BlockKey, HydroUnit, Line, RenewableResource, StorageResource, SystemData, ThermalUnit};

/// Identifies the block under construction.
#[derive(Clone, Debug)]
pub struct BlockCtx {
    pub key: BlockKey,
    pub id: BlockId,
    pub hours: usize,
    /// Short label used in column names.
    pub tag: String,
}

impl BlockCtx {
    pub fn new(sys: &SystemData, key: BlockKey) -> Self {
        BlockCtx {
            key,
            id: sys.grid.block_id(key),
            hours: sys.grid.hours(),
            tag: format!("{}.{}", sys.grid.years[key.year], sys.grid.periods[key.period].id),
        }
    }

    fn prev(&self, t: usize) -> usize {
        tau(t as i64 - 1, self.hours)
    }
}

/// Operational status of a thermal unit in the block's year.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum StatusLink {
    Fixed(bool),
    Var(VarId),
}

/// Installed capacities seen by the dispatch blocks of one year.
#[derive(Clone, Debug)]
pub struct YearCapacity {
    pub thermal: Vec<StatusLink>,
    pub renewable: Vec<LinExpr>,
    pub storage_power: Vec<LinExpr>,
    pub storage_energy: Vec<LinExpr>,
    /// Largest power capacity a storage resource can reach (mode big-M).
    pub storage_power_max: Vec<f64>,
}

impl YearCapacity {
    /// Planned capacities only, for dispatch without investment.
    pub fn planned(sys: &SystemData, year: usize) -> Self {
        let y = sys.grid.years[year];
        YearCapacity {
            thermal: sys.thermal.iter().map(|u| StatusLink::Fixed(u.planned_status(y))).collect(),
            renewable: sys.renewables.iter().map(|r| LinExpr::constant(r.planned_mw[year])).collect(),
            storage_power: sys.storage.iter().map(|s| LinExpr::constant(s.planned_mw[year])).collect(),
            storage_energy: sys.storage.iter().map(|s| LinExpr::constant(s.planned_mwh[year])).collect(),
            storage_power_max: sys.storage.iter().map(|s| s.planned_mw[year]).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThermalVars {
    pub commit: Vec<VarId>,
    pub startup: Vec<VarId>,
    pub shutdown: Vec<VarId>,
    pub gen: Vec<VarId>,
    pub cost: LinExpr,
    pub emissions: LinExpr,
}

/// Emits output limits, transitions, minimum up/down times, ramps and the
/// operational-status link of one thermal unit.
pub fn add_thermal(model: &mut LinearModel, ctx: &BlockCtx, unit: &ThermalUnit, link: StatusLink) -> ThermalVars {
    let n = ctx.hours;
    let id = &unit.id;
    let tag = &ctx.tag;
    let ub = match link {
        StatusLink::Fixed(false) => 0.0,
        _ => 1.0,
    };
    let mut vars = ThermalVars {
        commit: Vec::with_capacity(n),
        startup: Vec::with_capacity(n),
        shutdown: Vec::with_capacity(n),
        gen: Vec::with_capacity(n),
        cost: LinExpr::new(),
        emissions: LinExpr::new(),
    };
    for t in 0..n {
        let v = model.add_var(format!("commit[{id},{tag},{t}]"), 0.0, ub, crate::lp::VarKind::Binary, ctx.id);
        vars.commit.push(v);
        vars.startup.push(model.add_continuous(format!("startup[{id},{tag},{t}]"), 0.0, ub, ctx.id));
        vars.shutdown.push(model.add_continuous(format!("shutdown[{id},{tag},{t}]"), 0.0, ub, ctx.id));
        vars.gen.push(model.add_continuous(format!("gen[{id},{tag},{t}]"), 0.0, unit.p_max * ub, ctx.id));
    }
    for t in 0..n {
        let (v, p, su, sd) = (vars.commit[t], vars.gen[t], vars.startup[t], vars.shutdown[t]);
        let tp = ctx.prev(t);
        let mut e = LinExpr::var(p);
        e.add_term(v, -unit.p_max);
        model.add_le(format!("pmax[{id},{tag},{t}]"), Family::ThermalLimits, e, 0.0);
        if unit.p_min > 0.0 {
            let mut e = LinExpr::var(p);
            e.add_term(v, -unit.p_min);
            model.add_ge(format!("pmin[{id},{tag},{t}]"), Family::ThermalLimits, e, 0.0);
        }
        let mut e = LinExpr::var(v);
        e.add_term(vars.commit[tp], -1.0).add_term(su, -1.0).add_term(sd, 1.0);
        model.add_eq(format!("transition[{id},{tag},{t}]"), Family::ThermalTransitions, e, 0.0);

        let up = unit.min_up_hours.clamp(1, n);
        let mut e = LinExpr::term(v, -1.0);
        for i in 0..up {
            e.add_term(vars.startup[tau(t as i64 - i as i64, n)], 1.0);
        }
        model.add_le(format!("min_up[{id},{tag},{t}]"), Family::MinUpDown, e, 0.0);
        let down = unit.min_down_hours.clamp(1, n);
        let mut e = LinExpr::var(v);
        for i in 0..down {
            e.add_term(vars.shutdown[tau(t as i64 - i as i64, n)], 1.0);
        }
        model.add_le(format!("min_down[{id},{tag},{t}]"), Family::MinUpDown, e, 1.0);

        if unit.ramp_up < unit.p_max {
            let mut e = LinExpr::var(p);
            e.add_term(vars.gen[tp], -1.0)
                .add_term(vars.commit[tp], -unit.ramp_up)
                .add_term(su, -unit.ramp_up.max(unit.p_min));
            model.add_le(format!("ramp_up[{id},{tag},{t}]"), Family::ThermalRamp, e, 0.0);
        }
        if unit.ramp_down < unit.p_max {
            let mut e = LinExpr::var(vars.gen[tp]);
            e.add_term(p, -1.0)
                .add_term(v, -unit.ramp_down)
                .add_term(sd, -unit.ramp_down.max(unit.p_min));
            model.add_le(format!("ramp_down[{id},{tag},{t}]"), Family::ThermalRamp, e, 0.0);
        }
        if let StatusLink::Var(iu) = link {
            let mut e = LinExpr::var(v);
            e.add_term(iu, -1.0);
            model.add_le(format!("operational[{id},{tag},{t}]"), Family::Commitment, e, 0.0);
        }
        vars.cost
            .add_term(su, unit.startup_cost)
            .add_term(sd, unit.shutdown_cost)
            .add_term(v, unit.cost_intercept)
            .add_term(p, unit.cost_slope);
        vars.emissions
            .add_term(p, unit.emission_slope)
            .add_term(v, unit.emission_intercept);
    }
    vars
}

#[derive(Clone, Debug)]
pub struct RenewableVars {
    /// Delivered output `IC·PF − curtailment` per hour.
    pub output: Vec<LinExpr>,
    pub curtail: Vec<Option<VarId>>,
    pub cost: LinExpr,
}

/// Output of a renewable or firm resource; only curtailable resources get a
/// curtailment column.
pub fn add_renewable(
    model: &mut LinearModel,
    ctx: &BlockCtx,
    res: &RenewableResource,
    capacity: &LinExpr,
) -> RenewableVars {
    let n = ctx.hours;
    let tag = &ctx.tag;
    let mut out = RenewableVars {
        output: Vec::with_capacity(n),
        curtail: vec![None; n],
        cost: LinExpr::new(),
    };
    for t in 0..n {
        let pf = res.production[ctx.key.period * n + t];
        let mut available = LinExpr::new();
        available.add_scaled(capacity, pf);
        let mut output = available.clone();
        if res.curtailable && pf > 0.0 {
            let name = format!("curtail[{},{tag},{t}]", res.id);
            let c = if capacity.is_constant() {
                model.add_continuous(name, 0.0, pf * capacity.constant_part(), ctx.id)
            } else {
                let c = model.add_continuous(name, 0.0, f64::INFINITY, ctx.id);
                let mut e = LinExpr::var(c);
                e.add_scaled(&available, -1.0);
                model.add_le(format!("curtail_cap[{},{tag},{t}]", res.id), Family::Renewable, e, 0.0);
                c
            };
            output.add_term(c, -1.0);
            out.curtail[t] = Some(c);
            out.cost.add_term(c, res.curtail_cost);
        }
        out.output.push(output);
    }
    out
}

#[derive(Clone, Debug)]
pub struct StorageVars {
    pub mode: Vec<VarId>,
    pub charge: Vec<VarId>,
    pub discharge: Vec<VarId>,
    pub soc: Vec<VarId>,
}

/// Charge/discharge limits with a mode binary (1 = discharging), cyclic SoC
/// tracking, SoC window and minimum mode durations.
pub fn add_storage(
    model: &mut LinearModel,
    ctx: &BlockCtx,
    s: &StorageResource,
    power: &LinExpr,
    energy: &LinExpr,
    power_max: f64,
) -> StorageVars {
    let n = ctx.hours;
    let id = &s.id;
    let tag = &ctx.tag;
    let big_m = power_max.max(0.0);
    let mut vars = StorageVars {
        mode: Vec::with_capacity(n),
        charge: Vec::with_capacity(n),
        discharge: Vec::with_capacity(n),
        soc: Vec::with_capacity(n),
    };
    for t in 0..n {
        vars.mode.push(model.add_binary(format!("st_mode[{id},{tag},{t}]"), ctx.id));
        vars.charge.push(model.add_continuous(format!("st_charge[{id},{tag},{t}]"), 0.0, big_m, ctx.id));
        vars.discharge.push(model.add_continuous(format!("st_discharge[{id},{tag},{t}]"), 0.0, big_m, ctx.id));
        vars.soc.push(model.add_continuous(format!("st_soc[{id},{tag},{t}]"), 0.0, f64::INFINITY, ctx.id));
    }
    for t in 0..n {
        let (v, pc, pd, c) = (vars.mode[t], vars.charge[t], vars.discharge[t], vars.soc[t]);
        let mut e = LinExpr::var(pc);
        e.add_term(v, big_m);
        model.add_le(format!("st_charge_mode[{id},{tag},{t}]"), Family::StorageLimits, e, big_m);
        let mut e = LinExpr::var(pd);
        e.add_term(v, -big_m);
        model.add_le(format!("st_discharge_mode[{id},{tag},{t}]"), Family::StorageLimits, e, 0.0);
        if !power.is_constant() {
            for (x, label) in [(pc, "charge"), (pd, "discharge")] {
                let mut e = LinExpr::var(x);
                e.add_scaled(power, -1.0);
                model.add_le(format!("st_{label}_cap[{id},{tag},{t}]"), Family::StorageLimits, e, 0.0);
            }
        }
        let mut e = LinExpr::var(c);
        e.add_term(vars.soc[ctx.prev(t)], -(1.0 - s.self_discharge))
            .add_term(pc, -s.eta_charge)
            .add_term(pd, 1.0 / s.eta_discharge);
        model.add_eq(format!("st_soc_track[{id},{tag},{t}]"), Family::StorageSoc, e, 0.0);
        let mut e = LinExpr::var(c);
        e.add_scaled(energy, -s.soc_max_fraction);
        model.add_le(format!("st_soc_max[{id},{tag},{t}]"), Family::StorageSoc, e, 0.0);
        if s.soc_min_fraction > 0.0 {
            let mut e = LinExpr::var(c);
            e.add_scaled(energy, -s.soc_min_fraction);
            model.add_ge(format!("st_soc_min[{id},{tag},{t}]"), Family::StorageSoc, e, 0.0);
        }
        let tp = vars.mode[ctx.prev(t)];
        for k in 1..s.min_discharge_hours.min(n) {
            // a switch into discharge at t keeps discharging through t+k
            let mut e = LinExpr::var(v);
            e.add_term(tp, -1.0).add_term(vars.mode[(t + k) % n], -1.0);
            model.add_le(format!("st_min_discharge[{id},{tag},{t},{k}]"), Family::StorageDuration, e, 0.0);
        }
        for k in 1..s.min_charge_hours.min(n) {
            let mut e = LinExpr::var(tp);
            e.add_term(v, -1.0).add_term(vars.mode[(t + k) % n], 1.0);
            model.add_le(format!("st_min_charge[{id},{tag},{t},{k}]"), Family::StorageDuration, e, 1.0);
        }
    }
    vars
}

/// Output limits, ramps and the per-period energy budget of a hydro unit.
pub fn add_hydro(model: &mut LinearModel, ctx: &BlockCtx, h: &HydroUnit) -> Vec<VarId> {
    let n = ctx.hours;
    let tag = &ctx.tag;
    let p: Vec<VarId> = (0..n)
        .map(|t| model.add_continuous(format!("hydro[{},{tag},{t}]", h.id), h.p_min, h.p_max, ctx.id))
        .collect();
    for t in 0..n {
        let tp = ctx.prev(t);
        if h.ramp_up < h.p_max - h.p_min {
            let mut e = LinExpr::var(p[t]);
            e.add_term(p[tp], -1.0);
            model.add_le(format!("hydro_ramp_up[{},{tag},{t}]", h.id), Family::HydroLimits, e, h.ramp_up);
        }
        if h.ramp_down < h.p_max - h.p_min {
            let mut e = LinExpr::var(p[tp]);
            e.add_term(p[t], -1.0);
            model.add_le(format!("hydro_ramp_down[{},{tag},{t}]", h.id), Family::HydroLimits, e, h.ramp_down);
        }
    }
    let mut e = LinExpr::new();
    for &x in &p {
        e.add_term(x, 1.0);
    }
    model.add_le(format!("hydro_budget[{},{tag}]", h.id), Family::HydroBudget, e, h.budget_mwh);
    p
}

#[derive(Clone, Debug)]
pub struct LineVars {
    /// Flow in the reference direction.
    pub pos: Vec<VarId>,
    /// Flow against the reference direction.
    pub neg: Vec<VarId>,
    /// `max(0, λ·f)` into the policy zone, present when imports carry emissions.
    pub import: Option<Vec<VarId>>,
    pub cost: LinExpr,
}

impl LineVars {
    pub fn flow(&self, t: usize) -> LinExpr {
        let mut e = LinExpr::var(self.pos[t]);
        e.add_term(self.neg[t], -1.0);
        e
    }
}

/// Transport-model flow split into two directions so wheeling is charged on |f|.
pub fn add_line(model: &mut LinearModel, ctx: &BlockCtx, line: &Line, policy_zone: usize) -> LineVars {
    let n = ctx.hours;
    let tag = &ctx.tag;
    let mut lv = LineVars {
        pos: Vec::with_capacity(n),
        neg: Vec::with_capacity(n),
        import: None,
        cost: LinExpr::new(),
    };
    for t in 0..n {
        lv.pos.push(model.add_continuous(format!("flow_pos[{},{tag},{t}]", line.id), 0.0, line.limit_mw, ctx.id));
        lv.neg.push(model.add_continuous(format!("flow_neg[{},{tag},{t}]", line.id), 0.0, line.limit_mw, ctx.id));
        lv.cost.add_term(lv.pos[t], line.wheeling_cost).add_term(lv.neg[t], line.wheeling_cost);
    }
    let lambda = line.lambda(policy_zone);
    if lambda != 0.0 && line.import_emission_rate > 0.0 {
        let mut imports = Vec::with_capacity(n);
        for t in 0..n {
            let m = model.add_continuous(format!("import[{},{tag},{t}]", line.id), 0.0, line.limit_mw, ctx.id);
            let mut e = LinExpr::var(m);
            e.add_scaled(&lv.flow(t), -lambda);
            model.add_ge(format!("import_def[{},{tag},{t}]", line.id), Family::LineFlow, e, 0.0);
            imports.push(m);
        }
        lv.import = Some(imports);
    }
    lv
}

/// How the zonal balance enters the model.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BalanceMode {
    /// Equality rows (monolithic solve and primal recovery).
    Hard,
    /// Expressions kept aside for dualization.
    Residual,
}

/// Supply minus demand of one zone in one hour.
#[derive(Clone, Debug)]
pub struct BalanceRow {
    pub zone: usize,
    pub key: BlockKey,
    pub hour: usize,
    pub block: BlockId,
    pub expr: LinExpr,
}

/// Every column and expression of one dispatch block.
#[derive(Clone, Debug)]
pub struct BlockVars {
    pub key: BlockKey,
    pub id: BlockId,
    pub thermal: Vec<ThermalVars>,
    pub renewable: Vec<RenewableVars>,
    pub storage: Vec<Option<StorageVars>>,
    pub hydro: Vec<Vec<VarId>>,
    pub lines: Vec<LineVars>,
    pub ev: Vec<Option<EvBlockVars>>,
    /// Unweighted generation cost of the block.
    pub gen_cost: LinExpr,
    /// Policy-zone thermal and import emissions of the block (ton).
    pub emissions: LinExpr,
    /// Policy-zone eligible renewable energy of the block (MWh).
    pub rps_energy: LinExpr,
    /// Part of `gen_cost` incurred in the policy zone or on its import lines.
    pub policy_zone_cost: LinExpr,
    pub balance: Vec<BalanceRow>,
}

/// Builds one dispatch block against the capacities of its year.
#[allow(clippy::too_many_arguments)]
pub fn build_block(
    model: &mut LinearModel,
    sys: &SystemData,
    fleet: &EvFleet,
    key: BlockKey,
    cap: &YearCapacity,
    regime: ChargingRegime,
    convention: DischargeConvention,
    mode: BalanceMode,
) -> Result<BlockVars> {
    let ctx = BlockCtx::new(sys, key);
    let n = ctx.hours;
    let pz = sys.policy_zone();
    let nz = sys.zones.len();
    let mut supply: Vec<Vec<LinExpr>> = vec![vec![LinExpr::new(); n]; nz];
    let mut gen_cost = LinExpr::new();
    let mut emissions = LinExpr::new();
    let mut rps_energy = LinExpr::new();
    let mut pz_cost = LinExpr::new();

    let mut thermal = Vec::with_capacity(sys.thermal.len());
    for (u, link) in sys.thermal.iter().zip(&cap.thermal) {
        let tv = add_thermal(model, &ctx, u, *link);
        for t in 0..n {
            supply[u.zone][t].add_term(tv.gen[t], 1.0);
        }
        gen_cost.add_scaled(&tv.cost, 1.0);
        if u.zone == pz {
            emissions.add_scaled(&tv.emissions, 1.0);
            pz_cost.add_scaled(&tv.cost, 1.0);
        }
        thermal.push(tv);
    }

    let mut renewable = Vec::with_capacity(sys.renewables.len());
    for (r, c) in sys.renewables.iter().zip(&cap.renewable) {
        let rv = add_renewable(model, &ctx, r, c);
        for t in 0..n {
            supply[r.zone][t].add_scaled(&rv.output[t], 1.0);
            if r.zone == pz && r.rps_eligible {
                rps_energy.add_scaled(&rv.output[t], 1.0);
            }
        }
        gen_cost.add_scaled(&rv.cost, 1.0);
        if r.zone == pz {
            pz_cost.add_scaled(&rv.cost, 1.0);
        }
        renewable.push(rv);
    }

    let mut storage = Vec::with_capacity(sys.storage.len());
    for (i, s) in sys.storage.iter().enumerate() {
        if cap.storage_power_max[i] <= 0.0 {
            storage.push(None);
            continue;
        }
        let sv = add_storage(
            model,
            &ctx,
            s,
            &cap.storage_power[i],
            &cap.storage_energy[i],
            cap.storage_power_max[i],
        );
        for t in 0..n {
            supply[s.zone][t].add_term(sv.discharge[t], 1.0).add_term(sv.charge[t], -1.0);
        }
        storage.push(Some(sv));
    }

    let mut hydro = Vec::with_capacity(sys.hydro.len());
    for h in &sys.hydro {
        let p = add_hydro(model, &ctx, h);
        for t in 0..n {
            supply[h.zone][t].add_term(p[t], 1.0);
        }
        hydro.push(p);
    }

    let mut lines = Vec::with_capacity(sys.lines.len());
    for l in &sys.lines {
        let lv = add_line(model, &ctx, l, pz);
        for &(z, sign) in &l.incidence {
            for t in 0..n {
                supply[z][t].add_scaled(&lv.flow(t), f64::from(sign));
            }
        }
        if let Some(imports) = &lv.import {
            for &m in imports {
                emissions.add_term(m, l.import_emission_rate);
            }
        }
        gen_cost.add_scaled(&lv.cost, 1.0);
        if l.lambda(pz) != 0.0 {
            pz_cost.add_scaled(&lv.cost, 1.0);
        }
        lines.push(lv);
    }

    let mut ev = Vec::with_capacity(fleet.clusters.len());
    for (i, c) in fleet.clusters.iter().enumerate() {
        let vars = add_ev_constraints(model, ctx.id, &ctx.tag, n, i, c, key.year, regime, convention)?;
        if let Some(v) = &vars {
            for t in 0..n {
                supply[c.zone][t].add_scaled(&v.net_charge(t), -1.0);
            }
        }
        ev.push(vars);
    }
    if let Some(u) = fleet.unmodeled.get(key.year) {
        for t in 0..n {
            supply[fleet.zone][t].add_constant(-u.profile[t % 24]);
        }
    }

    let mut balance = Vec::with_capacity(nz * n);
    for (z, zone_supply) in supply.into_iter().enumerate() {
        for (t, mut expr) in zone_supply.into_iter().enumerate() {
            expr.add_constant(-sys.load(z, key.year, key.period, t));
            expr.compact();
            if expr.terms().is_empty() {
                return Err(Error::Structure(format!(
                    "zone {} has no resource, line or flexible load in block {} hour {t}",
                    sys.zones[z].id, ctx.tag
                )));
            }
            if mode == BalanceMode::Hard {
                model.add_eq(
                    format!("balance[{},{},{t}]", sys.zones[z].id, ctx.tag),
                    Family::Balance,
                    expr.clone(),
                    0.0,
                );
            }
            balance.push(BalanceRow {
                zone: z,
                key,
                hour: t,
                block: ctx.id,
                expr,
            });
        }
    }

    Ok(BlockVars {
        key,
        id: ctx.id,
        thermal,
        renewable,
        storage,
        hydro,
        lines,
        ev,
        gen_cost: gen_cost.compacted(),
        emissions: emissions.compacted(),
        rps_energy: rps_energy.compacted(),
        policy_zone_cost: pz_cost.compacted(),
        balance,
    })
}
