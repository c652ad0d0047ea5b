//! Battery bookkeeping.
//!
//! Energy is proportional to distance travelled. Advance and retreat legs are
//! charged at the travel rate; motion during coverage costs the coverage
//! rate, nominally twice the travel rate.

use thiserror::Error;

/// The three legs of one charge cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SegmentKind {
    Advance,
    Coverage,
    Retreat,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Advance => "advance",
            SegmentKind::Coverage => "coverage",
            SegmentKind::Retreat => "retreat",
        }
    }
}

impl core::str::FromStr for SegmentKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "advance" => Ok(SegmentKind::Advance),
            "coverage" => Ok(SegmentKind::Coverage),
            "retreat" => Ok(SegmentKind::Retreat),
            _ => Err(()),
        }
    }
}

/// Slack allowed when a consumption lands a hair below zero through
/// floating-point accumulation.
pub const ENERGY_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("{name} must be positive and finite (got {value})")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("energy exhausted: {required} units needed, {remaining} left")]
    Exhausted { required: f64, remaining: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyState {
    capacity: f64,
    remaining: f64,
    travel_rate: f64,
    coverage_rate: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64, EnergyError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(EnergyError::InvalidParameter { name, value })
    }
}

impl EnergyState {
    /// Fully charged battery with explicit rates (units per metre).
    pub fn new(capacity: f64, travel_rate: f64, coverage_rate: f64) -> Result<Self, EnergyError> {
        let capacity = positive("capacity", capacity)?;
        Ok(EnergyState {
            capacity,
            remaining: capacity,
            travel_rate: positive("travel rate", travel_rate)?,
            coverage_rate: positive("coverage rate", coverage_rate)?,
        })
    }

    /// Coverage rate fixed at twice the travel rate.
    pub fn with_travel_rate(capacity: f64, travel_rate: f64) -> Result<Self, EnergyError> {
        Self::new(capacity, travel_rate, 2.0 * travel_rate)
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn remaining(&self) -> f64 {
        self.remaining
    }

    pub fn travel_rate(&self) -> f64 {
        self.travel_rate
    }

    pub fn coverage_rate(&self) -> f64 {
        self.coverage_rate
    }

    pub fn rate(&self, kind: SegmentKind) -> f64 {
        match kind {
            SegmentKind::Coverage => self.coverage_rate,
            SegmentKind::Advance | SegmentKind::Retreat => self.travel_rate,
        }
    }

    /// Price of `distance` metres of the given kind.
    pub fn cost(&self, distance: f64, kind: SegmentKind) -> f64 {
        distance * self.rate(kind)
    }

    pub fn charge_full(&mut self) {
        self.remaining = self.capacity;
    }

    /// Deducts the price of a move and returns it.
    pub fn consume(&mut self, distance: f64, kind: SegmentKind) -> Result<f64, EnergyError> {
        let required = self.cost(distance, kind);
        if required > self.remaining + ENERGY_EPSILON {
            return Err(EnergyError::Exhausted {
                required,
                remaining: self.remaining,
            });
        }
        self.remaining = (self.remaining - required).max(0.0);
        Ok(required)
    }

    /// Whether the next step plus the retreat from its end is affordable.
    /// Equality is enough to proceed.
    pub fn can_continue(&self, step_cost: f64, retreat_cost: f64) -> bool {
        self.remaining >= step_cost + retreat_cost
    }
}
