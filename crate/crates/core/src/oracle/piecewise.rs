use crate::network::{piecewise_value, power_secant_slopes, CoupledNetwork, BPR_FACTOR};

/// A convex power map x ↦ scale·x^p on [0, range] approximated with
/// `segments` equal secant pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Instrument {
    pub name: String,
    pub exponent: i32,
    pub scale: f64,
    pub range: f64,
    pub segments: usize,
}

impl Instrument {
    pub fn exact(&self, x: f64) -> f64 {
        self.scale * x.powi(self.exponent)
    }

    /// Value of the model's piecewise-linear approximation.
    pub fn approximate(&self, x: f64) -> f64 {
        let slopes = power_secant_slopes(self.exponent, self.range, self.segments);
        self.scale * piecewise_value(&slopes, self.range / self.segments as f64, x)
    }

    /// Largest secant-over-curve gap, located at the tangency point of each
    /// segment.
    pub fn analytic_bound(&self) -> f64 {
        let p = self.exponent as f64;
        let w = self.range / self.segments as f64;
        let f = |x: f64| x.powf(p);
        let mut worst: f64 = 0.0;
        for k in 0..self.segments {
            let a = k as f64 * w;
            let b = a + w;
            let s = (f(b) - f(a)) / w;
            let x = if p > 1.0 {
                (s / p).powf(1.0 / (p - 1.0)).clamp(a, b)
            } else {
                a
            };
            worst = worst.max(f(a) + s * (x - a) - f(x));
        }
        self.scale * worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseError {
    /// max |approximation − exact| over the evaluation grid.
    pub grid_max: f64,
    pub analytic_bound: f64,
    /// max |approximation − exact| at the segment ends.
    pub knot_max: f64,
}

/// Evaluates the approximation on `per_segment` equal steps of every
/// segment.
pub fn finite_diff_piecewise(instr: &Instrument, per_segment: usize) -> PiecewiseError {
    let w = instr.range / instr.segments as f64;
    let steps = per_segment.max(1);
    let mut grid_max: f64 = 0.0;
    let mut knot_max: f64 = 0.0;
    for k in 0..instr.segments {
        for s in 0..=steps {
            let x = (k as f64 + s as f64 / steps as f64) * w;
            let err = (instr.approximate(x) - instr.exact(x)).abs();
            grid_max = grid_max.max(err);
            if s == 0 || s == steps {
                knot_max = knot_max.max(err);
            }
        }
    }
    PiecewiseError {
        grid_max,
        analytic_bound: instr.analytic_bound(),
        knot_max,
    }
}

/// The g² map of every pipeline and the x⁵ delay of every traffic link.
pub fn network_instruments(
    net: &CoupledNetwork,
    pipeline_segments: usize,
    traffic_segments: usize,
) -> Vec<Instrument> {
    let mut out = Vec::new();
    for p in &net.hydrogen.pipelines {
        out.push(Instrument {
            name: format!("pipeline {} g^2", p.id),
            exponent: 2,
            scale: 1.0,
            range: p.flow_cap,
            segments: pipeline_segments,
        });
    }
    for l in &net.traffic.links {
        out.push(Instrument {
            name: format!("link {} delay", l.id),
            exponent: 5,
            scale: BPR_FACTOR * l.free_flow_time / l.capacity.powi(4),
            range: l.flow_cap,
            segments: traffic_segments,
        });
    }
    out
}
