use crate::lp::{BlockId, Family, LinExpr, LinearModel, VarId};
use crate::model::time::tau;

use super::cluster::EvCluster;
use super::{ChargingRegime, DischargeConvention, EvError};

/// Columns of one cluster inside one dispatch block.
#[derive(Clone, Debug)]
pub struct EvBlockVars {
    pub cluster: usize,
    /// Per block hour; `None` while the trucks are away or charging is fixed.
    pub charge: Vec<Option<VarId>>,
    pub discharge: Vec<Option<VarId>>,
    pub mode: Vec<Option<VarId>>,
    /// `soc[d][k]`: SoC after `k` window hours on day `d` (k = 0 is depot arrival).
    pub soc: Vec<Vec<VarId>>,
    /// Block hour of window step `k` on day `d`.
    pub soc_hours: Vec<Vec<usize>>,
    /// Constant charging load per block hour (fixed regime).
    pub fixed_load: Vec<f64>,
}

impl EvBlockVars {
    /// Grid draw minus grid injection at block hour `t`.
    pub fn net_charge(&self, t: usize) -> LinExpr {
        let mut e = LinExpr::constant(self.fixed_load[t]);
        if let Some(c) = self.charge[t] {
            e.add_term(c, 1.0);
        }
        if let Some(d) = self.discharge[t] {
            e.add_term(d, -1.0);
        }
        e
    }
}

/// Emits the pins, power limits, SoC bounds and recursion of `cluster` for
/// every day of a block with `hours` hours. Returns `None` when the cluster
/// has no vehicles in the year.
#[allow(clippy::too_many_arguments)]
pub fn add_ev_constraints(
    model: &mut LinearModel,
    block: BlockId,
    tag: &str,
    hours: usize,
    cluster_index: usize,
    cluster: &EvCluster,
    year_idx: usize,
    regime: ChargingRegime,
    convention: DischargeConvention,
) -> Result<Option<EvBlockVars>, EvError> {
    if hours == 0 || hours % 24 != 0 {
        return Err(EvError::PartialDays(hours));
    }
    let cy = &cluster.years[year_idx];
    if cy.vehicles == 0 && cy.p_max_mw == 0.0 {
        return Ok(None);
    }
    let days = hours / 24;
    let w = cluster.window;
    let mut vars = EvBlockVars {
        cluster: cluster_index,
        charge: vec![None; hours],
        discharge: vec![None; hours],
        mode: vec![None; hours],
        soc: Vec::new(),
        soc_hours: Vec::new(),
        fixed_load: vec![0.0; hours],
    };

    if regime == ChargingRegime::Fixed {
        for t in 0..hours {
            vars.fixed_load[t] = cy.fixed_profile[t % 24];
        }
        return Ok(Some(vars));
    }

    for value in [cy.c_depot_mwh, cy.c_drive_mwh] {
        if value < cy.c_min_mwh - 1e-9 || value > cy.c_max_mwh + 1e-9 {
            return Err(EvError::PinOutOfBounds {
                cluster: cluster.id.clone(),
                year: cy.year,
                value,
                min: cy.c_min_mwh,
                max: cy.c_max_mwh,
            });
        }
    }

    let p_max = cy.p_max_mw;
    let eta_d = convention.discharge_factor(cluster.eta_discharge);
    for d in 0..days {
        let mut soc = Vec::with_capacity(w.length + 1);
        let mut soc_hours = Vec::with_capacity(w.length + 1);
        for k in 0..=w.length {
            let t = tau((d * 24 + w.start + k) as i64, hours);
            soc.push(model.add_continuous(
                format!("ev_soc[{tag},{},{d},{k}]", cluster.id),
                cy.c_min_mwh,
                cy.c_max_mwh,
                block,
            ));
            soc_hours.push(t);
        }
        model.add_eq(
            format!("ev_pin_depot[{tag},{},{d}]", cluster.id),
            Family::EvSoc,
            LinExpr::var(soc[0]),
            cy.c_depot_mwh,
        );
        model.add_eq(
            format!("ev_pin_drive[{tag},{},{d}]", cluster.id),
            Family::EvSoc,
            LinExpr::var(soc[w.length]),
            cy.c_drive_mwh,
        );
        for k in 0..w.length {
            let t = soc_hours[k];
            let pc = model.add_continuous(format!("ev_pc[{tag},{},{t}]", cluster.id), 0.0, p_max, block);
            vars.charge[t] = Some(pc);
            let mut rec = LinExpr::var(soc[k + 1]);
            rec.add_term(soc[k], -1.0).add_term(pc, -cluster.eta_charge);
            if regime == ChargingRegime::V2g {
                let pd = model.add_continuous(format!("ev_pd[{tag},{},{t}]", cluster.id), 0.0, p_max, block);
                let v = model.add_binary(format!("ev_mode[{tag},{},{t}]", cluster.id), block);
                let mut up = LinExpr::var(pc);
                up.add_term(v, p_max);
                model.add_le(format!("ev_charge_mode[{tag},{},{t}]", cluster.id), Family::EvPower, up, p_max);
                let mut down = LinExpr::var(pd);
                down.add_term(v, -p_max);
                model.add_le(format!("ev_discharge_mode[{tag},{},{t}]", cluster.id), Family::EvPower, down, 0.0);
                rec.add_term(pd, eta_d);
                vars.discharge[t] = Some(pd);
                vars.mode[t] = Some(v);
            }
            model.add_eq(
                format!("ev_soc_track[{tag},{},{d},{k}]", cluster.id),
                Family::EvSoc,
                rec,
                0.0,
            );
        }
        vars.soc.push(soc);
        vars.soc_hours.push(soc_hours);
    }
    Ok(Some(vars))
}
