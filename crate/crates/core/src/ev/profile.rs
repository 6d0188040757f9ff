use super::cluster::ChargeWindow;
use super::EvError;

/// Power drawn hour by hour when charging flat out from `start_hour` until
/// `energy` is delivered, folded onto a 24-hour day.
pub fn immediate_profile(start_hour: usize, p_max: f64, energy: f64) -> Vec<f64> {
    let mut out = vec![0.0; 24];
    if energy <= 0.0 || p_max <= 0.0 {
        return out;
    }
    let mut left = energy;
    let mut h = start_hour % 24;
    while left > 0.0 {
        let p = p_max.min(left);
        out[h] += p;
        left -= p;
        h = (h + 1) % 24;
    }
    out
}

/// Baseline charging: half the fleet charges at full power from the window
/// start until done, the other half spreads its energy evenly over the window.
/// `p_max` is the aggregate charger rating (MW), `energy` the grid-side need (MWh/day).
pub fn fixed_profile(window: &ChargeWindow, p_max: f64, energy: f64) -> Result<Vec<f64>, EvError> {
    let limit = p_max * window.length as f64;
    if energy > limit * (1.0 + 1e-12) + 1e-12 {
        return Err(EvError::InfeasibleCharge {
            cluster: format!("ev_{:02}_{:02}", window.start, window.end),
            energy_mwh: energy,
            limit_mwh: limit,
        });
    }
    let mut out = vec![0.0; 24];
    if energy <= 0.0 {
        return Ok(out);
    }
    let fast = immediate_profile(window.start, p_max, energy.min(limit));
    let slow = energy / window.length as f64;
    for h in 0..24 {
        out[h] = 0.5 * fast[h];
    }
    for h in window.hours() {
        out[h] += 0.5 * slow;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_vehicle_ten_hour_window() {
        let w = ChargeWindow::new(19, 5).unwrap();
        let p = fixed_profile(&w, 0.150, 0.150).unwrap();
        // fast half: 150 kW for one hour; slow half: 15 kW for ten hours
        assert!((p[19] - (0.5 * 0.150 + 0.5 * 0.015)).abs() < 1e-12);
        for h in [20, 21, 22, 23, 0, 1, 2, 3, 4] {
            assert!((p[h] - 0.5 * 0.015).abs() < 1e-12, "hour {h}");
        }
        for h in 5..19 {
            assert_eq!(p[h], 0.0);
        }
        assert!((p.iter().sum::<f64>() - 0.150).abs() < 1e-12);
    }

    #[test]
    fn zero_need_is_all_zero() {
        let w = ChargeWindow::new(8, 12).unwrap();
        assert_eq!(fixed_profile(&w, 1.0, 0.0).unwrap(), vec![0.0; 24]);
    }

    #[test]
    fn fractional_last_hour() {
        let w = ChargeWindow::new(22, 4).unwrap();
        let p = immediate_profile(w.start, 2.0, 5.0);
        assert_eq!((p[22], p[23], p[0], p[1]), (2.0, 2.0, 1.0, 0.0));
    }

    #[test]
    fn over_demand_is_rejected() {
        let w = ChargeWindow::new(1, 3).unwrap();
        let err = fixed_profile(&w, 0.15, 0.31).unwrap_err();
        assert!(err.to_string().contains("ev_01_03"));
    }
}
