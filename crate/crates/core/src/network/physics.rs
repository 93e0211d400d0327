//! Closed-form physics used to parameterize the model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Coefficient of the BPR latency term.
pub const BPR_FACTOR: f64 = 0.15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("{0} must be positive, got {1}")]
    Nonpositive(&'static str, f64),
    #[error("trip profile has zero total")]
    ZeroTripProfile,
}

/// Pipeline geometry and gas state. The closed forms are evaluated in
/// whatever consistent unit system the values are given in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipeGeometry {
    /// D, inner diameter.
    pub diameter: f64,
    /// L, length.
    pub length: f64,
    /// η, pipeline efficiency.
    pub efficiency: f64,
    /// ρ, gas density.
    pub density: f64,
    /// Z, compressibility factor.
    pub compressibility: f64,
    /// R, gas constant.
    pub gas_constant: f64,
    /// T, gas temperature.
    pub temperature: f64,
}

impl PipeGeometry {
    fn check(&self) -> Result<(), PhysicsError> {
        for (name, x) in [
            ("diameter", self.diameter),
            ("length", self.length),
            ("efficiency", self.efficiency),
            ("density", self.density),
            ("compressibility", self.compressibility),
            ("gas_constant", self.gas_constant),
            ("temperature", self.temperature),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(PhysicsError::Nonpositive(name, x));
            }
        }
        Ok(())
    }
}

/// Weymouth friction factor f = 4 (20.621 D^{1/6})^{-2}.
pub fn weymouth_friction(diameter: f64) -> f64 {
    4.0 * (20.621 * diameter.powf(1.0 / 6.0)).powi(-2)
}

/// Weymouth constant φ = η π² D⁵ / (16 ρ² Z R T L f).
pub fn weymouth_constant(g: &PipeGeometry) -> Result<f64, PhysicsError> {
    g.check()?;
    let pi2 = std::f64::consts::PI.powi(2);
    let f = weymouth_friction(g.diameter);
    Ok(g.efficiency * pi2 * g.diameter.powi(5)
        / (16.0
            * g.density.powi(2)
            * g.compressibility
            * g.gas_constant
            * g.temperature
            * g.length
            * f))
}

/// Linepack constant Ψ = π D² L / (4 ρ Z R T).
pub fn linepack_constant(g: &PipeGeometry) -> Result<f64, PhysicsError> {
    g.check()?;
    Ok(std::f64::consts::PI * g.diameter.powi(2) * g.length
        / (4.0 * g.density * g.compressibility * g.gas_constant * g.temperature))
}

/// Hourly refueling demand from node shares of a daily total:
/// g_{i,t} = (G / Da) · share_i · f_t / Σ f.
pub fn demand_profile(
    shares: &[f64],
    annual_demand: f64,
    days_per_year: f64,
    trip: &[f64],
) -> Result<Vec<Vec<f64>>, PhysicsError> {
    let total: f64 = trip.iter().sum();
    if total <= 0.0 {
        return Err(PhysicsError::ZeroTripProfile);
    }
    if days_per_year <= 0.0 {
        return Err(PhysicsError::Nonpositive("days_per_year", days_per_year));
    }
    let daily = annual_demand / days_per_year;
    Ok(shares
        .iter()
        .map(|s| trip.iter().map(|f| daily * s * f / total).collect())
        .collect())
}

/// Splits one daily level over the periods in proportion to the trip profile.
pub fn hourly_realization(level: f64, trip: &[f64]) -> Vec<f64> {
    let total: f64 = trip.iter().sum();
    trip.iter().map(|f| level * f / total).collect()
}

/// Exact BPR congestion term 0.15 t⁰ x⁵ / C⁴ (vehicle-minutes per hour).
pub fn bpr_delay(free_flow_time: f64, capacity: f64, x: f64) -> f64 {
    BPR_FACTOR * free_flow_time * capacity * (x / capacity).powi(5)
}

/// Secant slopes of x ↦ x^p on `segments` equal pieces of [0, range].
/// For p = 2 this is (2k − 1)·range/segments.
pub fn power_secant_slopes(exponent: i32, range: f64, segments: usize) -> Vec<f64> {
    let w = range / segments as f64;
    (1..=segments)
        .map(|k| {
            let hi = (k as f64 * w).powi(exponent);
            let lo = ((k - 1) as f64 * w).powi(exponent);
            (hi - lo) / w
        })
        .collect()
}

/// Value of the incremental piecewise-linear model at `x` with segments
/// filled in order.
pub fn piecewise_value(slopes: &[f64], width: f64, x: f64) -> f64 {
    let mut left = x.max(0.0);
    let mut v = 0.0;
    for &s in slopes {
        let d = left.min(width);
        v += s * d;
        left -= d;
        if left <= 0.0 {
            break;
        }
    }
    v
}
