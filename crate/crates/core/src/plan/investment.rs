use crate::lp::{BlockId, Family, LinExpr, LinearModel, VarId};
use crate::model::{SystemData, UnitStatus};
use crate::uc::{StatusLink, YearCapacity};

/// Build/retire decisions of one thermal unit.
#[derive(Clone, Debug)]
pub struct ThermalInvestment {
    /// IU(y), fixed or a binary column.
    pub status: Vec<StatusLink>,
    pub build: Vec<Option<VarId>>,
    pub retire: Vec<Option<VarId>>,
}

/// Continuous capacity stock with yearly additions.
#[derive(Clone, Debug)]
pub struct CapacityInvestment {
    /// Installed capacity per year (constant when nothing can change).
    pub installed: Vec<LinExpr>,
    pub build: Vec<Option<VarId>>,
    pub retire: Vec<Option<VarId>>,
    /// Upper bound on installed capacity over the horizon.
    pub max_installed: f64,
}

impl CapacityInvestment {
    fn fixed(values: &[f64]) -> Self {
        CapacityInvestment {
            installed: values.iter().map(|&x| LinExpr::constant(x)).collect(),
            build: vec![None; values.len()],
            retire: vec![None; values.len()],
            max_installed: values.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InvestmentVars {
    pub thermal: Vec<ThermalInvestment>,
    pub renewable: Vec<CapacityInvestment>,
    pub storage_power: Vec<CapacityInvestment>,
    pub storage_energy: Vec<CapacityInvestment>,
}

impl InvestmentVars {
    pub fn year_capacity(&self, year: usize) -> YearCapacity {
        YearCapacity {
            thermal: self.thermal.iter().map(|t| t.status[year]).collect(),
            renewable: self.renewable.iter().map(|c| c.installed[year].clone()).collect(),
            storage_power: self.storage_power.iter().map(|c| c.installed[year].clone()).collect(),
            storage_energy: self.storage_energy.iter().map(|c| c.installed[year].clone()).collect(),
            storage_power_max: self.storage_power.iter().map(|c| c.max_installed).collect(),
        }
    }
}

pub(crate) fn status_expr(link: StatusLink) -> LinExpr {
    match link {
        StatusLink::Fixed(b) => LinExpr::constant(if b { 1.0 } else { 0.0 }),
        StatusLink::Var(v) => LinExpr::var(v),
    }
}

/// Telescoping capacity stock `X(y) = X^p(y) + Σ_{γ≤y} (build − retire)`.
#[allow(clippy::too_many_arguments)]
fn capacity_stock(
    model: &mut LinearModel,
    prefix: &str,
    id: &str,
    years: &[u32],
    planned: &[f64],
    can_build: bool,
    max_build: f64,
    can_retire: bool,
) -> CapacityInvestment {
    if !can_build && !can_retire {
        return CapacityInvestment::fixed(planned);
    }
    let inv = BlockId::INVESTMENT;
    let ny = years.len();
    let mut out = CapacityInvestment {
        installed: Vec::with_capacity(ny),
        build: vec![None; ny],
        retire: vec![None; ny],
        max_installed: planned.iter().copied().fold(0.0, f64::max) + if can_build { max_build } else { 0.0 },
    };
    let mut total_build = LinExpr::new();
    let mut cumulative = LinExpr::new();
    for (y, year) in years.iter().enumerate() {
        if can_build {
            let b = model.add_continuous(format!("{prefix}_build[{id},{year}]"), 0.0, max_build, inv);
            cumulative.add_term(b, 1.0);
            total_build.add_term(b, 1.0);
            out.build[y] = Some(b);
        }
        if can_retire {
            let r = model.add_continuous(format!("{prefix}_retire[{id},{year}]"), 0.0, f64::INFINITY, inv);
            cumulative.add_term(r, -1.0);
            out.retire[y] = Some(r);
        }
        let x = model.add_continuous(format!("{prefix}[{id},{year}]"), 0.0, out.max_installed, inv);
        let mut e = LinExpr::var(x);
        e.add_scaled(&cumulative, -1.0);
        model.add_eq(format!("{prefix}_stock[{id},{year}]"), Family::Investment, e, planned[y]);
        out.installed.push(LinExpr::var(x));
    }
    if can_build && ny > 1 {
        model.add_le(format!("{prefix}_build_limit[{id}]"), Family::Investment, total_build, max_build);
    }
    out
}

/// Declares investment columns and their stock equations. Only the policy
/// zone may build or retire; other zones follow their planned trajectories.
pub fn link_investment(model: &mut LinearModel, sys: &SystemData) -> InvestmentVars {
    let g = &sys.grid;
    let pz = sys.policy_zone();
    let inv = BlockId::INVESTMENT;

    let mut thermal = Vec::with_capacity(sys.thermal.len());
    for u in &sys.thermal {
        let ny = g.num_years();
        let candidate = u.status == UnitStatus::Candidate && u.zone == pz;
        let retirable = u.retirable && u.status == UnitStatus::Existing && u.zone == pz;
        if !candidate && !retirable {
            thermal.push(ThermalInvestment {
                status: g.years.iter().map(|&y| StatusLink::Fixed(u.planned_status(y))).collect(),
                build: vec![None; ny],
                retire: vec![None; ny],
            });
            continue;
        }
        let mut ti = ThermalInvestment {
            status: Vec::with_capacity(ny),
            build: vec![None; ny],
            retire: vec![None; ny],
        };
        let mut flows = LinExpr::new();
        let mut once = LinExpr::new();
        for (y, &year) in g.years.iter().enumerate() {
            if candidate {
                let allowed = u.planned_from.map_or(true, |f| year >= f);
                let b = model.add_var(
                    format!("iu_build[{},{year}]", u.id),
                    0.0,
                    if allowed { 1.0 } else { 0.0 },
                    crate::lp::VarKind::Binary,
                    inv,
                );
                flows.add_term(b, 1.0);
                once.add_term(b, 1.0);
                ti.build[y] = Some(b);
            } else {
                let r = model.add_binary(format!("iu_retire[{},{year}]", u.id), inv);
                flows.add_term(r, -1.0);
                once.add_term(r, 1.0);
                ti.retire[y] = Some(r);
            }
            let iu = model.add_binary(format!("iu[{},{year}]", u.id), inv);
            let planned = if u.planned_status(year) { 1.0 } else { 0.0 };
            let mut e = LinExpr::var(iu);
            e.add_scaled(&flows, -1.0);
            model.add_eq(format!("iu_stock[{},{year}]", u.id), Family::Investment, e, planned);
            ti.status.push(StatusLink::Var(iu));
        }
        model.add_le(format!("iu_once[{}]", u.id), Family::Investment, once, 1.0);
        thermal.push(ti);
    }

    let renewable = sys
        .renewables
        .iter()
        .map(|r| {
            capacity_stock(
                model,
                "ic_ren",
                &r.id,
                &g.years,
                &r.planned_mw,
                r.candidate && r.zone == pz && r.max_build_mw > 0.0,
                r.max_build_mw,
                false,
            )
        })
        .collect();
    let mut storage_power = Vec::with_capacity(sys.storage.len());
    let mut storage_energy = Vec::with_capacity(sys.storage.len());
    for s in &sys.storage {
        let build = s.candidate && s.zone == pz;
        storage_power.push(capacity_stock(
            model,
            "ic_st",
            &s.id,
            &g.years,
            &s.planned_mw,
            build && s.max_build_mw > 0.0,
            s.max_build_mw,
            false,
        ));
        storage_energy.push(capacity_stock(
            model,
            "ice_st",
            &s.id,
            &g.years,
            &s.planned_mwh,
            build && s.max_build_mwh > 0.0,
            s.max_build_mwh,
            s.energy_retirement && s.zone == pz,
        ));
    }
    InvestmentVars {
        thermal,
        renewable,
        storage_power,
        storage_energy,
    }
}
