use serde::{Deserialize, Serialize};

use crate::lp::BlockId;

/// Hours in a year, the target of the representative-period weights.
pub const HOURS_PER_YEAR: f64 = 8760.0;

/// Cyclic hour index within a period of `period_len` hours (0-based):
/// the hour before 0 is `period_len - 1` and the hour after the last is 0.
pub fn tau(t: i64, period_len: usize) -> usize {
    debug_assert!(period_len > 0);
    t.rem_euclid(period_len as i64) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Period {
    pub id: String,
    /// Number of times the period repeats in a year.
    pub weight: f64,
}

/// Investment years × representative periods × hours.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub years: Vec<u32>,
    /// Discount-and-span weight of each investment year.
    pub year_weights: Vec<f64>,
    pub hours_per_period: usize,
    pub periods: Vec<Period>,
}

/// One (year, period) dispatch block.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockKey {
    pub year: usize,
    pub period: usize,
}

impl TimeGrid {
    pub fn num_years(&self) -> usize {
        self.years.len()
    }

    pub fn num_periods(&self) -> usize {
        self.periods.len()
    }

    pub fn hours(&self) -> usize {
        self.hours_per_period
    }

    pub fn days_per_period(&self) -> usize {
        self.hours_per_period / 24
    }

    pub fn tau(&self, t: i64) -> usize {
        tau(t, self.hours_per_period)
    }

    /// Σ_w ω_w·|T|, which must equal one year of hours.
    pub fn weighted_hours(&self) -> f64 {
        self.periods
            .iter()
            .map(|p| p.weight * self.hours_per_period as f64)
            .sum()
    }

    pub fn year_index(&self, year: u32) -> Option<usize> {
        self.years.iter().position(|&y| y == year)
    }

    pub fn period_index(&self, id: &str) -> Option<usize> {
        self.periods.iter().position(|p| p.id == id)
    }

    pub fn blocks(&self) -> impl Iterator<Item = BlockKey> + '_ {
        (0..self.num_years()).flat_map(move |year| {
            (0..self.num_periods()).map(move |period| BlockKey { year, period })
        })
    }

    pub fn num_blocks(&self) -> usize {
        self.num_years() * self.num_periods()
    }

    pub fn block_id(&self, key: BlockKey) -> BlockId {
        BlockId((1 + key.year * self.num_periods() + key.period) as u32)
    }

    pub fn block_key(&self, id: BlockId) -> Option<BlockKey> {
        if id == BlockId::INVESTMENT || id.index() > self.num_blocks() {
            return None;
        }
        let i = id.index() - 1;
        Some(BlockKey {
            year: i / self.num_periods(),
            period: i % self.num_periods(),
        })
    }

    /// Flat index of (year, period, hour) into per-slot series.
    pub fn slot(&self, year: usize, period: usize, hour: usize) -> usize {
        (year * self.num_periods() + period) * self.hours_per_period + hour
    }

    pub fn num_slots(&self) -> usize {
        self.num_blocks() * self.hours_per_period
    }

    /// Σ_{γ ≥ year} ω_γ, the horizon weight applied to annualised capital.
    pub fn remaining_weight(&self, year: usize) -> f64 {
        self.year_weights[year..].iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tau_examples() {
        assert_eq!(tau(71, 72), 71);
        assert_eq!(tau(72, 72), 0);
        assert_eq!(tau(-1, 72), 71);
    }

    fn grid() -> TimeGrid {
        TimeGrid {
            years: vec![2025, 2030],
            year_weights: vec![5.0, 5.0],
            hours_per_period: 24,
            periods: vec![
                Period { id: "a".into(), weight: 182.5 },
                Period { id: "b".into(), weight: 182.5 },
            ],
        }
    }

    #[test]
    fn block_ids_round_trip() {
        let g = grid();
        for key in g.blocks() {
            assert_eq!(g.block_key(g.block_id(key)), Some(key));
        }
        assert_eq!(g.block_key(BlockId::INVESTMENT), None);
        assert_eq!(g.weighted_hours(), 8760.0);
        assert_eq!(g.remaining_weight(0), 10.0);
    }

    proptest! {
        #[test]
        fn tau_is_periodic(t in -10_000i64..10_000, k in -50i64..50, len in 1usize..200) {
            prop_assert_eq!(tau(t + k * len as i64, len), tau(t, len));
            prop_assert!(tau(t, len) < len);
        }
    }
}
