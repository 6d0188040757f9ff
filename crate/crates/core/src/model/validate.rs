use super::system::{ElccSurface, SystemData, UnitStatus};
use super::time::HOURS_PER_YEAR;

fn in_unit(x: f64) -> bool {
    (0.0..=1.0).contains(&x)
}

fn check_surface(out: &mut Vec<String>, year: u32, label: &str, s: &ElccSurface) {
    for (i, p) in s.planes.iter().enumerate() {
        let slopes = [p.wind_slope, p.solar_slope, p.storage_slope];
        if p.intercept < 0.0 || !p.intercept.is_finite() {
            out.push(format!("policy {year}: {label} ELCC plane {i} has a negative intercept"));
        }
        // non-negative slopes make the minimum of the planes non-decreasing and
        // concave; slopes above one would credit more than nameplate
        if slopes.iter().any(|s| !in_unit(*s)) {
            out.push(format!("policy {year}: {label} ELCC plane {i} slopes must lie in [0, 1]"));
        }
    }
}

/// Every broken invariant of `data`; empty when the system is well formed.
pub fn validate_system(data: &SystemData) -> Vec<String> {
    let mut out = Vec::new();
    let g = &data.grid;
    let nz = data.zones.len();
    let ny = g.num_years();

    if g.hours_per_period == 0 || g.hours_per_period % 24 != 0 {
        out.push(format!(
            "time grid: hours_per_period {} is not a positive multiple of 24",
            g.hours_per_period
        ));
    }
    if g.periods.is_empty() {
        out.push("time grid: no representative periods".into());
    }
    if ny == 0 {
        out.push("time grid: no investment years".into());
    }
    if g.years.windows(2).any(|w| w[0] >= w[1]) {
        out.push("time grid: years must be strictly increasing".into());
    }
    let wh = g.weighted_hours();
    if (wh - HOURS_PER_YEAR).abs() > 1e-6 * HOURS_PER_YEAR {
        out.push(format!(
            "time grid: period weights cover {wh} hours per year instead of {HOURS_PER_YEAR}"
        ));
    }
    if g.periods.iter().any(|p| !(p.weight > 0.0)) {
        out.push("time grid: period weights must be positive".into());
    }
    if g.year_weights.len() != ny {
        out.push(format!(
            "time grid: {} year weights for {ny} years",
            g.year_weights.len()
        ));
    }
    if g.year_weights.iter().any(|w| !(*w > 0.0)) {
        out.push("time grid: year weights must be strictly positive".into());
    }
    if !(data.discount_rate > -1.0) || !data.discount_rate.is_finite() {
        out.push(format!("discount rate {} is not usable", data.discount_rate));
    }

    let policy_zones = data.zones.iter().filter(|z| z.policy_zone).count();
    if policy_zones != 1 {
        out.push(format!("zones: {policy_zones} policy zones, exactly one required"));
    }
    let pz = data.policy_zone();
    for z in &data.zones {
        if z.load.len() != g.num_slots() {
            out.push(format!(
                "zone {}: {} load values for {} slots",
                z.id,
                z.load.len(),
                g.num_slots()
            ));
        }
        if z.load.iter().any(|x| !(*x >= 0.0)) {
            out.push(format!("zone {}: load must be non-negative", z.id));
        }
    }

    for l in &data.lines {
        let plus = l.incidence.iter().filter(|(_, s)| *s == 1).count();
        let minus = l.incidence.iter().filter(|(_, s)| *s == -1).count();
        let nonzero = l.incidence.iter().filter(|(_, s)| *s != 0).count();
        if plus != 1 || minus != 1 || nonzero != 2 {
            out.push(format!(
                "line {}: incidence needs exactly one +1 and one -1 entry",
                l.id
            ));
        }
        if l.incidence.iter().any(|(z, _)| *z >= nz) {
            out.push(format!("line {}: unknown zone", l.id));
        }
        if plus == 1 && minus == 1 {
            let a = l.incidence.iter().find(|(_, s)| *s == 1).map(|x| x.0);
            let b = l.incidence.iter().find(|(_, s)| *s == -1).map(|x| x.0);
            if a == b {
                out.push(format!("line {}: both ends in the same zone", l.id));
            }
        }
        if !(l.limit_mw > 0.0) {
            out.push(format!("line {}: limit must be positive", l.id));
        }
        if l.import_emission_rate < 0.0 {
            out.push(format!("line {}: import emission rate must be non-negative", l.id));
        }
        if l.wheeling_cost < 0.0 {
            out.push(format!("line {}: wheeling cost must be non-negative", l.id));
        }
    }

    for u in &data.thermal {
        if u.zone >= nz {
            out.push(format!("thermal {}: unknown zone", u.id));
        }
        if !(0.0 <= u.p_min && u.p_min <= u.p_max) {
            out.push(format!("thermal {}: requires 0 ≤ p_min ≤ p_max", u.id));
        }
        if !in_unit(u.nqc) {
            out.push(format!("thermal {}: NQC must lie in [0, 1]", u.id));
        }
        if u.ramp_up < 0.0 || u.ramp_down < 0.0 {
            out.push(format!("thermal {}: ramp limits must be non-negative", u.id));
        }
        if u.status == UnitStatus::Candidate && u.zone != pz {
            out.push(format!("thermal {}: candidates are only allowed in the policy zone", u.id));
        }
        if u.retirable && u.planned_until.is_some() {
            out.push(format!(
                "thermal {}: a retirable unit cannot also have a planned retirement year",
                u.id
            ));
        }
        if u.retirable && u.zone != pz {
            out.push(format!("thermal {}: retirement decisions are only allowed in the policy zone", u.id));
        }
    }

    let nprod = g.num_periods() * g.hours();
    for r in &data.renewables {
        if r.zone >= nz {
            out.push(format!("renewable {}: unknown zone", r.id));
        }
        if r.production.len() != nprod {
            out.push(format!(
                "renewable {}: {} production factors for {nprod} period hours",
                r.id,
                r.production.len()
            ));
        }
        if r.production.iter().any(|x| !in_unit(*x)) {
            out.push(format!("renewable {}: production factors must lie in [0, 1]", r.id));
        }
        if r.planned_mw.len() != ny || r.planned_mw.iter().any(|x| !(*x >= 0.0)) {
            out.push(format!("renewable {}: planned capacity needs one non-negative value per year", r.id));
        }
        if r.candidate && r.zone != pz {
            out.push(format!("renewable {}: candidates are only allowed in the policy zone", r.id));
        }
        if r.max_build_mw < 0.0 || r.curtail_cost < 0.0 {
            out.push(format!("renewable {}: build limit and curtailment cost must be non-negative", r.id));
        }
    }

    for s in &data.storage {
        if s.zone >= nz {
            out.push(format!("storage {}: unknown zone", s.id));
        }
        if !(s.eta_charge > 0.0 && s.eta_charge <= 1.0 && s.eta_discharge > 0.0 && s.eta_discharge <= 1.0) {
            out.push(format!("storage {}: efficiencies must lie in (0, 1]", s.id));
        }
        if !(s.soc_max_fraction > 0.0 && s.soc_max_fraction <= 1.0) {
            out.push(format!("storage {}: headroom fraction must lie in (0, 1]", s.id));
        }
        if !(s.soc_min_fraction >= 0.0 && s.soc_min_fraction <= s.soc_max_fraction) {
            out.push(format!("storage {}: footroom fraction must lie in [0, headroom]", s.id));
        }
        if !(0.0..1.0).contains(&s.self_discharge) {
            out.push(format!("storage {}: self-discharge must lie in [0, 1)", s.id));
        }
        if s.planned_mw.len() != ny || s.planned_mwh.len() != ny {
            out.push(format!("storage {}: planned capacity needs one value per year", s.id));
        }
        if s.planned_mw.iter().chain(&s.planned_mwh).any(|x| !(*x >= 0.0)) {
            out.push(format!("storage {}: planned capacity must be non-negative", s.id));
        }
        if s.candidate && s.zone != pz {
            out.push(format!("storage {}: candidates are only allowed in the policy zone", s.id));
        }
        if s.max_build_mw < 0.0 || s.max_build_mwh < 0.0 {
            out.push(format!("storage {}: build limits must be non-negative", s.id));
        }
    }

    for h in &data.hydro {
        if h.zone >= nz {
            out.push(format!("hydro {}: unknown zone", h.id));
        }
        if !(0.0 <= h.p_min && h.p_min <= h.p_max) {
            out.push(format!("hydro {}: requires 0 ≤ p_min ≤ p_max", h.id));
        }
        if h.budget_mwh < h.p_min * g.hours() as f64 {
            out.push(format!("hydro {}: energy budget below minimum output over a period", h.id));
        }
        if !in_unit(h.nqc) {
            out.push(format!("hydro {}: NQC must lie in [0, 1]", h.id));
        }
    }

    if data.policy.len() != ny {
        out.push(format!("policy: {} rows for {ny} years", data.policy.len()));
    }
    for (y, p) in data.policy.iter().enumerate() {
        let year = g.years.get(y).copied().unwrap_or(0);
        if p.emissions_cap < 0.0 || p.prm < 0.0 {
            out.push(format!("policy {year}: caps must be non-negative"));
        }
        if !in_unit(p.rps) {
            out.push(format!("policy {year}: RPS must lie in [0, 1]"));
        }
        check_surface(&mut out, year, "renewable", &p.vre_elcc);
        check_surface(&mut out, year, "storage", &p.storage_elcc);
    }

    let ev = &data.ev;
    if !(ev.eta_charge > 0.0 && ev.eta_charge <= 1.0 && ev.eta_discharge > 0.0 && ev.eta_discharge <= 1.0) {
        out.push("ev: efficiencies must lie in (0, 1]".into());
    }
    if !(in_unit(ev.soc_min_fraction) && in_unit(ev.soc_drive_fraction) && ev.soc_min_fraction <= ev.soc_drive_fraction) {
        out.push("ev: SoC fractions must satisfy 0 ≤ min ≤ drive ≤ 1".into());
    }
    if !in_unit(ev.cluster_threshold) {
        out.push("ev: cluster threshold must lie in [0, 1]".into());
    }
    if !(ev.charger_kw > 0.0) {
        out.push("ev: charger rating must be positive".into());
    }
    if !ev.zone.is_empty() && data.zone_index(&ev.zone).is_none() {
        out.push(format!("ev: unknown zone `{}`", ev.zone));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::toy_system;

    #[test]
    fn toy_is_clean() {
        assert_eq!(validate_system(&toy_system()), Vec::<String>::new());
    }

    #[test]
    fn double_plus_incidence() {
        let mut s = toy_system();
        s.lines[0].incidence = vec![(0, 1), (1, 1)];
        let r = validate_system(&s);
        assert!(r.iter().any(|m| m.contains("incidence")), "{r:?}");
    }

    #[test]
    fn weights_must_cover_a_year() {
        let mut s = toy_system();
        let scale = 8000.0 / s.grid.weighted_hours();
        for p in &mut s.grid.periods {
            p.weight *= scale;
        }
        let r = validate_system(&s);
        assert!(r.iter().any(|m| m.contains("8000")), "{r:?}");
    }

    #[test]
    fn validation_is_idempotent() {
        let mut s = toy_system();
        s.thermal[0].p_min = s.thermal[0].p_max + 1.0;
        let before = s.clone();
        let a = validate_system(&s);
        let b = validate_system(&s);
        assert_eq!(a, b);
        assert_eq!(s, before);
        assert_eq!(a.len(), 1);
    }
}
