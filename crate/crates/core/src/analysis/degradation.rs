//! Battery degradation proxy: linear calendar aging plus depth-weighted
//! cycle aging from a rainflow count of the fleet SoC traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ev::EvFleet;
use crate::solution::PlanSolution;

/// One closed cycle (count 1) or half cycle (count 0.5).
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Cycle {
    pub range: f64,
    pub count: f64,
}

/// Turning points of a series, endpoints included.
fn reversals(series: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(series.len());
    for &x in series {
        if out.last() == Some(&x) {
            continue;
        }
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if (b - a) * (x - b) > 0.0 {
                // still moving in the same direction
                out.pop();
            }
        }
        out.push(x);
    }
    out
}

/// Three-point rainflow count of an open series.
pub fn rainflow(series: &[f64]) -> Vec<Cycle> {
    let mut cycles = Vec::new();
    let mut stack: Vec<f64> = Vec::new();
    for p in reversals(series) {
        stack.push(p);
        while stack.len() >= 3 {
            let n = stack.len();
            let x = (stack[n - 1] - stack[n - 2]).abs();
            let y = (stack[n - 2] - stack[n - 3]).abs();
            if x < y {
                break;
            }
            if n == 3 {
                cycles.push(Cycle { range: y, count: 0.5 });
                stack.remove(0);
            } else {
                cycles.push(Cycle { range: y, count: 1.0 });
                let last = stack.pop().unwrap();
                stack.truncate(n - 3);
                stack.push(last);
            }
        }
    }
    for w in stack.windows(2) {
        let range = (w[1] - w[0]).abs();
        if range > 0.0 {
            cycles.push(Cycle { range, count: 0.5 });
        }
    }
    cycles
}

/// Rainflow count of a periodic trace: the trace is rotated to start and
/// end at its maximum so every excursion closes.
pub fn rainflow_cyclic(trace: &[f64]) -> Vec<Cycle> {
    if trace.len() < 2 {
        return Vec::new();
    }
    let start = trace
        .iter()
        .enumerate()
        .fold(0, |best, (i, &x)| if x > trace[best] { i } else { best });
    let mut rotated: Vec<f64> = trace[start..].iter().chain(&trace[..start]).copied().collect();
    rotated.push(trace[start]);
    rainflow(&rotated)
}

/// Equivalent full cycles with each cycle weighted by `depth^exponent`.
pub fn depth_weighted_cycles(trace: &[f64], exponent: f64) -> f64 {
    rainflow_cyclic(trace)
        .iter()
        .map(|c| c.count * c.range.powf(exponent))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chemistry {
    pub name: String,
    /// Capacity lost per year at rest (percentage points).
    pub calendar_pct_per_year: f64,
    /// Capacity lost per equivalent full cycle (percentage points).
    pub cycle_pct_per_efc: f64,
    pub depth_exponent: f64,
}

/// LFP, NCA and NMC stand-ins, averaged with equal weights.
pub fn default_chemistries() -> Vec<Chemistry> {
    let c = |name: &str, cal: f64, cyc: f64, exp: f64| Chemistry {
        name: name.into(),
        calendar_pct_per_year: cal,
        cycle_pct_per_efc: cyc,
        depth_exponent: exp,
    };
    vec![c("lfp", 0.5, 0.004, 1.2), c("nca", 0.9, 0.010, 1.6), c("nmc", 0.7, 0.007, 1.4)]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DayTrace {
    /// Days per year this trace stands for.
    pub weight: f64,
    /// Per-vehicle SoC as a fraction of battery capacity over one day.
    pub soc: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterTrace {
    pub cluster: String,
    pub vehicles: u64,
    pub battery_kwh: f64,
    pub days: Vec<DayTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YearTrace {
    pub year: u32,
    pub clusters: Vec<ClusterTrace>,
}

/// SoC traces of the planning years; each applies until the next one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegradationInput {
    pub start_year: u32,
    /// Exclusive.
    pub end_year: u32,
    pub years: Vec<YearTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegradationParams {
    pub chemistries: Vec<Chemistry>,
    /// Scale on both aging terms.
    pub calibration: f64,
    pub price_per_kwh: f64,
}

impl Default for DegradationParams {
    fn default() -> Self {
        DegradationParams {
            chemistries: default_chemistries(),
            calibration: 1.0,
            price_per_kwh: 100.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegradationResult {
    /// Vehicle-weighted mean remaining capacity at the end of the interval (%).
    pub residual_pct: f64,
    pub calendar_pct: f64,
    pub cycling_pct: f64,
    pub degraded_kwh: f64,
    pub cost: f64,
}

/// Residual baseline capacity anchor for 2025–2045.
pub const BASELINE_RESIDUAL_PCT: f64 = 81.9;

impl DegradationInput {
    /// Builds traces from the cluster SoC series of a solution over
    /// `[start_year, end_year)`.
    pub fn from_solution(sol: &PlanSolution, fleet: &EvFleet, start_year: u32, end_year: u32) -> Result<Self> {
        let mut years = Vec::with_capacity(sol.years.len());
        for (yi, &year) in sol.years.iter().enumerate() {
            let mut clusters = Vec::new();
            for c in &fleet.clusters {
                let cy = &c.years[yi];
                if cy.vehicles == 0 || cy.c_max_mwh <= 0.0 {
                    continue;
                }
                let days: Vec<DayTrace> = sol
                    .ev_soc
                    .iter()
                    .filter(|s| s.cluster == c.id && s.year == year)
                    .flat_map(|s| {
                        s.soc.iter().map(move |d| DayTrace {
                            weight: s.period_weight,
                            soc: d.iter().map(|x| x / cy.c_max_mwh).collect(),
                        })
                    })
                    .collect();
                clusters.push(ClusterTrace {
                    cluster: c.id.clone(),
                    vehicles: cy.vehicles as u64,
                    battery_kwh: cy.c_max_mwh * 1000.0 / cy.vehicles as f64,
                    days,
                });
            }
            years.push(YearTrace { year, clusters });
        }
        Ok(DegradationInput {
            start_year,
            end_year,
            years,
        })
    }

    fn trace_for(&self, year: u32) -> Result<&YearTrace> {
        self.years
            .iter()
            .filter(|y| y.year <= year)
            .max_by_key(|y| y.year)
            .ok_or_else(|| Error::Mismatch(format!("no SoC series covers year {year}")))
    }
}

/// Unscaled fade per chemistry-averaged year of one cluster (percentage points).
fn cluster_fade(c: &ClusterTrace, chem: &[Chemistry]) -> Result<(f64, f64)> {
    let mut cal = 0.0;
    let mut cyc = 0.0;
    for ch in chem {
        let mut efc = 0.0;
        for d in &c.days {
            if d.soc.len() < 2 {
                return Err(Error::Mismatch(format!("cluster {}: SoC trace shorter than a day window", c.cluster)));
            }
            efc += d.weight * depth_weighted_cycles(&d.soc, ch.depth_exponent);
        }
        cal += ch.calendar_pct_per_year;
        cyc += ch.cycle_pct_per_efc * efc;
    }
    let n = chem.len().max(1) as f64;
    Ok((cal / n, cyc / n))
}

pub fn degradation_proxy(input: &DegradationInput, params: &DegradationParams) -> Result<DegradationResult> {
    if input.end_year < input.start_year {
        return Err(Error::Mismatch("degradation interval ends before it starts".into()));
    }
    let k = params.calibration;
    let mut cal_total = 0.0;
    let mut cyc_total = 0.0;
    let mut degraded_kwh = 0.0;
    for year in input.start_year..input.end_year {
        let trace = input.trace_for(year)?;
        let mut vehicles = 0.0;
        let mut cal = 0.0;
        let mut cyc = 0.0;
        for c in &trace.clusters {
            let (fc, fy) = cluster_fade(c, &params.chemistries)?;
            let n = c.vehicles as f64;
            vehicles += n;
            cal += n * fc;
            cyc += n * fy;
            degraded_kwh += n * c.battery_kwh * k * (fc + fy) / 100.0;
        }
        if vehicles > 0.0 {
            cal_total += k * cal / vehicles;
            cyc_total += k * cyc / vehicles;
        }
    }
    Ok(DegradationResult {
        residual_pct: 100.0 - cal_total - cyc_total,
        calendar_pct: cal_total,
        cycling_pct: cyc_total,
        degraded_kwh,
        cost: degraded_kwh * params.price_per_kwh,
    })
}

/// Calibration factor placing `baseline` at `target_residual_pct`.
pub fn calibrate(baseline: &DegradationInput, params: &DegradationParams, target_residual_pct: f64) -> Result<f64> {
    let unit = DegradationParams {
        calibration: 1.0,
        ..params.clone()
    };
    let r = degradation_proxy(baseline, &unit)?;
    let fade = 100.0 - r.residual_pct;
    if fade <= 0.0 {
        return Err(Error::Mismatch("baseline shows no aging to calibrate against".into()));
    }
    Ok((100.0 - target_residual_pct) / fade)
}
