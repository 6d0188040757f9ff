//! Mapping from the mathematical symbols of the planning formulation to the
//! fields and model columns that carry them.

/// Where a symbol lives.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Owner {
    /// Serialized field `field` of data type `ty`.
    Data { ty: &'static str, field: &'static str },
    /// Decision column whose name starts with this prefix followed by `[`.
    Column(&'static str),
    /// Index set or cost aggregate computed from other entries.
    Derived(&'static str),
}

pub const SYMBOLS: &[(&str, Owner)] = &[
    ("T", Owner::Data { ty: "TimeGrid", field: "hours_per_period" }),
    ("W", Owner::Data { ty: "TimeGrid", field: "periods" }),
    ("Y", Owner::Data { ty: "TimeGrid", field: "years" }),
    ("ω_w", Owner::Data { ty: "Period", field: "weight" }),
    ("ω_y", Owner::Data { ty: "TimeGrid", field: "year_weights" }),
    ("Z", Owner::Data { ty: "SystemData", field: "zones" }),
    ("L", Owner::Data { ty: "SystemData", field: "lines" }),
    ("U", Owner::Data { ty: "SystemData", field: "thermal" }),
    ("R", Owner::Data { ty: "SystemData", field: "renewables" }),
    ("S", Owner::Data { ty: "SystemData", field: "storage" }),
    ("H", Owner::Data { ty: "SystemData", field: "hydro" }),
    ("E", Owner::Derived("EvFleet::clusters")),
    ("U_z", Owner::Data { ty: "ThermalUnit", field: "zone" }),
    ("R_z", Owner::Data { ty: "RenewableResource", field: "zone" }),
    ("S_z", Owner::Data { ty: "StorageResource", field: "zone" }),
    ("H_z", Owner::Data { ty: "HydroUnit", field: "zone" }),
    ("ℒ_z", Owner::Data { ty: "Zone", field: "load" }),
    ("z0", Owner::Data { ty: "Zone", field: "policy_zone" }),
    ("λ_lz", Owner::Data { ty: "Line", field: "incidence" }),
    ("f̄_l", Owner::Data { ty: "Line", field: "limit_mw" }),
    ("c^tx_l", Owner::Data { ty: "Line", field: "wheeling_cost" }),
    ("e_l", Owner::Data { ty: "Line", field: "import_emission_rate" }),
    ("P̄_u", Owner::Data { ty: "ThermalUnit", field: "p_max" }),
    ("P̲_u", Owner::Data { ty: "ThermalUnit", field: "p_min" }),
    ("RU_u", Owner::Data { ty: "ThermalUnit", field: "ramp_up" }),
    ("RD_u", Owner::Data { ty: "ThermalUnit", field: "ramp_down" }),
    ("MU_u", Owner::Data { ty: "ThermalUnit", field: "min_up_hours" }),
    ("MD_u", Owner::Data { ty: "ThermalUnit", field: "min_down_hours" }),
    ("SUC_u", Owner::Data { ty: "ThermalUnit", field: "startup_cost" }),
    ("SDC_u", Owner::Data { ty: "ThermalUnit", field: "shutdown_cost" }),
    ("GCS_u", Owner::Data { ty: "ThermalUnit", field: "cost_slope" }),
    ("GCI_u", Owner::Data { ty: "ThermalUnit", field: "cost_intercept" }),
    ("e^s_u", Owner::Data { ty: "ThermalUnit", field: "emission_slope" }),
    ("e^i_u", Owner::Data { ty: "ThermalUnit", field: "emission_intercept" }),
    ("NQC_u", Owner::Data { ty: "ThermalUnit", field: "nqc" }),
    ("IU^p_u", Owner::Data { ty: "ThermalUnit", field: "planned_from" }),
    ("c^cap_u", Owner::Data { ty: "Economics", field: "capital" }),
    ("c^m_u", Owner::Data { ty: "Economics", field: "maintenance" }),
    ("PF_r", Owner::Data { ty: "RenewableResource", field: "production" }),
    ("c^curt_r", Owner::Data { ty: "RenewableResource", field: "curtail_cost" }),
    ("RPS_eligible_r", Owner::Data { ty: "RenewableResource", field: "rps_eligible" }),
    ("IC^p_r", Owner::Data { ty: "RenewableResource", field: "planned_mw" }),
    ("IC^p_s", Owner::Data { ty: "StorageResource", field: "planned_mw" }),
    ("ICE^p_s", Owner::Data { ty: "StorageResource", field: "planned_mwh" }),
    ("η^c_s", Owner::Data { ty: "StorageResource", field: "eta_charge" }),
    ("η^d_s", Owner::Data { ty: "StorageResource", field: "eta_discharge" }),
    ("δ_s", Owner::Data { ty: "StorageResource", field: "self_discharge" }),
    ("ε^max_s", Owner::Data { ty: "StorageResource", field: "soc_max_fraction" }),
    ("ε^min_s", Owner::Data { ty: "StorageResource", field: "soc_min_fraction" }),
    ("P̄_h", Owner::Data { ty: "HydroUnit", field: "p_max" }),
    ("P̲_h", Owner::Data { ty: "HydroUnit", field: "p_min" }),
    ("B_h", Owner::Data { ty: "HydroUnit", field: "budget_mwh" }),
    ("NQC_h", Owner::Data { ty: "HydroUnit", field: "nqc" }),
    ("E_y", Owner::Data { ty: "PolicyYear", field: "emissions_cap" }),
    ("RPS_y", Owner::Data { ty: "PolicyYear", field: "rps" }),
    ("PRM_y", Owner::Data { ty: "PolicyYear", field: "prm" }),
    ("ELCC_y", Owner::Data { ty: "PolicyYear", field: "vre_elcc" }),
    ("ELCC_ys", Owner::Data { ty: "PolicyYear", field: "storage_elcc" }),
    ("t^depot_e", Owner::Data { ty: "ChargeWindow", field: "start" }),
    ("t^drive_e", Owner::Data { ty: "ChargeWindow", field: "end" }),
    ("P̄_e", Owner::Data { ty: "ClusterYear", field: "p_max_mw" }),
    ("C̄_e", Owner::Data { ty: "ClusterYear", field: "c_max_mwh" }),
    ("C̲_e", Owner::Data { ty: "ClusterYear", field: "c_min_mwh" }),
    ("C^depot_e", Owner::Data { ty: "ClusterYear", field: "c_depot_mwh" }),
    ("C^drive_e", Owner::Data { ty: "ClusterYear", field: "c_drive_mwh" }),
    ("η^c_e", Owner::Data { ty: "EvCluster", field: "eta_charge" }),
    ("η^d_e", Owner::Data { ty: "EvCluster", field: "eta_discharge" }),
    ("t^Δ_e", Owner::Derived("ChargeWindow::time_wrap")),
    ("τ", Owner::Derived("model::time::tau")),
    ("D", Owner::Derived("TimeGrid::days_per_period")),
    ("v_u", Owner::Column("commit")),
    ("p_u", Owner::Column("gen")),
    ("su_u", Owner::Column("startup")),
    ("sd_u", Owner::Column("shutdown")),
    ("p^curt_r", Owner::Column("curtail")),
    ("p_r", Owner::Derived("RenewableVars::output")),
    ("p_h", Owner::Column("hydro")),
    ("v_s", Owner::Column("st_mode")),
    ("p^c_s", Owner::Column("st_charge")),
    ("p^d_s", Owner::Column("st_discharge")),
    ("C_s", Owner::Column("st_soc")),
    ("f_l", Owner::Column("flow_pos")),
    ("import_l", Owner::Column("import")),
    ("v_e", Owner::Column("ev_mode")),
    ("p^c_e", Owner::Column("ev_pc")),
    ("p^d_e", Owner::Column("ev_pd")),
    ("C_e", Owner::Column("ev_soc")),
    ("IU_u", Owner::Column("iu")),
    ("IU^b_u", Owner::Column("iu_build")),
    ("IU^r_u", Owner::Column("iu_retire")),
    ("IC_r", Owner::Column("ic_ren")),
    ("IC^b_r", Owner::Column("ic_ren_build")),
    ("IC_s", Owner::Column("ic_st")),
    ("IC^b_s", Owner::Column("ic_st_build")),
    ("ICE_s", Owner::Column("ice_st")),
    ("ICE^b_s", Owner::Column("ice_st_build")),
    ("ELCC credit", Owner::Column("elcc_vre")),
    ("ELCC storage credit", Owner::Column("elcc_st")),
    ("𝒞^gen_y", Owner::Derived("CostLedger::years[].generation")),
    ("𝒞^m_y", Owner::Derived("CostLedger::years[].maintenance")),
    ("𝒞^inv_y", Owner::Derived("CostLedger::years[].investment")),
    ("𝕆", Owner::Derived("CostLedger::objective")),
];
