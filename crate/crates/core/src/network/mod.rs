//! Instance data for the coupled power, traffic and hydrogen networks.
//!
//! An instance is one TOML document (schema in `instances/SCHEMA.md`).
//! [`load_config`] parses it and runs every validation rule, returning all
//! violations at once.

mod physics;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use physics::{
    bpr_delay, demand_profile, hourly_realization, linepack_constant, piecewise_value,
    power_secant_slopes, weymouth_constant, weymouth_friction, PhysicsError, PipeGeometry,
    BPR_FACTOR,
};

/// Units the model works in. A `[units]` table may restate them; anything
/// else is rejected.
pub const FIXED_UNITS: [(&str, &str); 7] = [
    ("mass", "kg"),
    ("power", "MW"),
    ("pressure", "MPa"),
    ("travel_time", "min"),
    ("period", "h"),
    ("traffic_flow", "veh/h"),
    ("money", "$"),
];

/// Smallest admissible baseline level probability.
pub const MIN_BASELINE_PROBABILITY: f64 = 1e-6;

const PROB_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema violation: {0}")]
    Parse(String),
    #[error("{} validation error(s):\n  {}", .0.len(), .0.join("\n  "))]
    Invalid(Vec<String>),
}

fn default_hours() -> usize {
    24
}

fn default_segments() -> usize {
    20
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segments {
    /// K, segments of the squared pipeline flow.
    #[serde(default = "default_segments")]
    pub pipeline: usize,
    /// H, segments of the fifth-power link delay.
    #[serde(default = "default_segments")]
    pub traffic: usize,
}

impl Default for Segments {
    fn default() -> Self {
        Self {
            pipeline: default_segments(),
            traffic: default_segments(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbiguitySpec {
    /// Wasserstein radius r in kg (1-norm over nodal daily totals).
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EconomicData {
    /// λ^MP, $/MWh per period.
    pub electricity_price: Vec<f64>,
    /// λ^MH, $/kg per period.
    pub hydrogen_price: Vec<f64>,
    /// λ^PVc, $/MW.
    pub pv_curtailment_penalty: f64,
    /// λ^TN, $/min.
    pub congestion_price: f64,
    /// λ^epe, $/MW.
    pub unserved_power_penalty: f64,
    /// λ^hpe, $/kg.
    pub unserved_hydrogen_penalty: f64,
    /// c^hy, $/kg of HRS capacity per year.
    pub hrs_cost: f64,
    /// c^P2G, $/MW of electrolyser capacity per year.
    pub p2g_cost: f64,
    /// c^HS, $/kg of storage capacity per year.
    pub hs_cost: f64,
    /// G^HFCV, kg per year across the system.
    pub annual_hfcv_demand: f64,
    /// f^trip, one weight per period.
    pub trip_profile: Vec<f64>,
    /// β, minimum share of each scenario's demand that must be served.
    pub fulfillment_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HydrogenNode {
    pub id: String,
    /// Power bus hosting the node's electrolyser.
    pub bus: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub source: bool,
    /// HRS capacity window [min, max], kg.
    pub hrs: [f64; 2],
    /// P2G capacity window [min, max], MW.
    pub p2g: [f64; 2],
    /// Storage capacity window [min, max], kg.
    pub hs: [f64; 2],
    /// H̄^HS, charge and discharge cap when storage is built, kg/h.
    pub storage_rate: f64,
    /// Daily demand levels, kg/day, strictly increasing.
    pub levels: Vec<f64>,
    /// Level probabilities without an HRS at the node.
    pub p0: Vec<f64>,
    /// Level probabilities with an HRS at the node.
    pub p1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pipeline {
    pub id: String,
    pub from: String,
    pub to: String,
    /// φ, (kg/h)²/MPa². Required unless `geometry` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weymouth: Option<f64>,
    /// Ψ, kg/MPa. Required unless `geometry` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linepack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<PipeGeometry>,
    /// F̄, kg/h.
    pub flow_cap: f64,
    /// Ē, kg.
    pub linepack_cap: f64,
    /// c^PIP, $/yr.
    pub annual_cost: f64,
}

impl Pipeline {
    pub fn phi(&self) -> f64 {
        match (&self.weymouth, &self.geometry) {
            (Some(p), _) => *p,
            (None, Some(g)) => weymouth_constant(g).unwrap_or(f64::NAN),
            (None, None) => f64::NAN,
        }
    }

    pub fn psi(&self) -> f64 {
        match (&self.linepack, &self.geometry) {
            (Some(p), _) => *p,
            (None, Some(g)) => linepack_constant(g).unwrap_or(f64::NAN),
            (None, None) => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HydrogenNetwork {
    /// pr_lower, MPa.
    pub pressure_min: f64,
    /// pr_upper, MPa.
    pub pressure_max: f64,
    /// η_P2G.
    pub p2g_efficiency: f64,
    /// χ_P2G, kg/MW.
    pub p2g_conversion: f64,
    /// η_HC.
    pub charge_efficiency: f64,
    /// η_HD.
    pub discharge_efficiency: f64,
    /// H̄^M, kg/h.
    pub source_purchase_cap: f64,
    pub nodes: Vec<HydrogenNode>,
    #[serde(default)]
    pub pipelines: Vec<Pipeline>,
}

impl HydrogenNetwork {
    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn num_sources(&self) -> usize {
        self.nodes.iter().filter(|n| n.source).count()
    }

    /// kg of hydrogen per MWh of electrolyser input.
    pub fn p2g_yield(&self) -> f64 {
        self.p2g_efficiency * self.p2g_conversion
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficLink {
    pub id: String,
    pub from: String,
    pub to: String,
    /// t⁰, minutes.
    pub free_flow_time: f64,
    /// C^max, veh/h.
    pub capacity: f64,
    /// x^max, veh/h.
    pub flow_cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficPath {
    pub id: String,
    /// Links in travel order.
    pub links: Vec<String>,
    /// Hydrogen nodes whose station the path passes.
    #[serde(default)]
    pub stations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdPair {
    pub id: String,
    pub origin: String,
    pub destination: String,
    /// HFCV trips per period, veh/h.
    pub hfcv: Vec<f64>,
    /// Other-vehicle trips per period, veh/h.
    pub otv: Vec<f64>,
    pub paths: Vec<TrafficPath>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficNetwork {
    /// When set, the node-capture cap counts every vehicle class passing the
    /// node instead of HFCV flow only.
    #[serde(default, skip_serializing_if = "is_false")]
    pub capture_all_classes: bool,
    pub links: Vec<TrafficLink>,
    pub od: Vec<OdPair>,
}

impl TrafficNetwork {
    pub fn link_index(&self, id: &str) -> Option<usize> {
        self.links.iter().position(|l| l.id == id)
    }

    /// Total HFCV trips in period `t`.
    pub fn hfcv_total(&self, t: usize) -> f64 {
        self.od.iter().map(|o| o.hfcv[t]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bus {
    pub id: String,
    /// p^L per period, MW.
    pub load: Vec<f64>,
    /// H̄^EM, MW. Zero for buses without a grid connection.
    #[serde(default)]
    pub grid_cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PvUnit {
    pub id: String,
    pub bus: String,
    /// p^PV forecast per period, MW.
    pub forecast: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLine {
    pub id: String,
    /// F^max, MW.
    pub cap: f64,
    /// PTDF factor of every bus, in bus order.
    pub ptdf: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerNetwork {
    pub buses: Vec<Bus>,
    #[serde(default)]
    pub pv: Vec<PvUnit>,
    #[serde(default)]
    pub lines: Vec<PowerLine>,
}

impl PowerNetwork {
    pub fn bus_index(&self, id: &str) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledNetwork {
    pub name: String,
    /// T, periods per representative day (Δt = 1 h).
    #[serde(default = "default_hours")]
    pub hours: usize,
    /// Da.
    pub days_per_year: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub units: BTreeMap<String, String>,
    #[serde(default)]
    pub segments: Segments,
    pub ambiguity: AmbiguitySpec,
    pub economics: EconomicData,
    pub hydrogen: HydrogenNetwork,
    pub traffic: TrafficNetwork,
    pub power: PowerNetwork,
}

impl CoupledNetwork {
    /// System HFCV demand per representative day, kg.
    pub fn daily_hfcv_demand(&self) -> f64 {
        self.economics.annual_hfcv_demand / self.days_per_year
    }

    pub fn num_nodes(&self) -> usize {
        self.hydrogen.nodes.len()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("instance serializes to TOML")
    }
}

/// Parses and validates one instance document.
pub fn load_config(document: &str) -> Result<CoupledNetwork, ConfigError> {
    let net: CoupledNetwork =
        toml::from_str(document).map_err(|e| ConfigError::Parse(e.message().to_string()))?;
    let errors = validate(&net);
    if errors.is_empty() {
        Ok(net)
    } else {
        Err(ConfigError::Invalid(errors))
    }
}

pub fn load_config_file(path: &Path) -> Result<CoupledNetwork, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_config(&text)
}

struct Checker {
    errors: Vec<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.errors.push(msg());
        }
    }

    fn nonneg(&mut self, path: &str, x: f64) {
        self.check(x.is_finite() && x >= 0.0, || {
            format!("{path}: must be a finite nonnegative number, got {x}")
        });
    }

    fn positive(&mut self, path: &str, x: f64) {
        self.check(x.is_finite() && x > 0.0, || {
            format!("{path}: must be positive, got {x}")
        });
    }

    fn series(&mut self, path: &str, v: &[f64], t: usize) {
        self.check(v.len() == t, || {
            format!("{path}: expected {t} entries, got {}", v.len())
        });
        for (k, &x) in v.iter().enumerate() {
            self.nonneg(&format!("{path}[{k}]"), x);
        }
    }

    fn window(&mut self, path: &str, w: [f64; 2]) {
        self.nonneg(path, w[0]);
        self.check(w[0] < w[1], || {
            format!(
                "{path}: device minimum {} must be below maximum {}",
                w[0], w[1]
            )
        });
    }

    fn unique<'a>(&mut self, what: &str, ids: impl Iterator<Item = &'a str>) {
        let mut seen = HashSet::new();
        for id in ids {
            self.check(seen.insert(id), || format!("{what}: duplicate id `{id}`"));
        }
    }
}

fn probability_vector(c: &mut Checker, path: &str, p: &[f64], n: usize) {
    c.check(p.len() == n, || {
        format!("{path}: expected {n} probabilities, got {}", p.len())
    });
    for (k, &x) in p.iter().enumerate() {
        c.check((0.0..=1.0).contains(&x), || {
            format!("{path}[{k}]: probability {x} outside [0, 1]")
        });
    }
    let s: f64 = p.iter().sum();
    c.check((s - 1.0).abs() <= PROB_SUM_TOL, || {
        format!("{path}: probabilities sum to {s}, not 1")
    });
}

/// Every violated rule, in document order.
pub fn validate(net: &CoupledNetwork) -> Vec<String> {
    let mut c = Checker { errors: Vec::new() };
    let t = net.hours;
    c.check(t >= 1, || "hours: must be at least 1".into());
    c.positive("days_per_year", net.days_per_year);
    for (k, v) in &net.units {
        let expected = FIXED_UNITS.iter().find(|(q, _)| q == k).map(|(_, u)| *u);
        match expected {
            None => c
                .errors
                .push(format!("units.{k}: unrecognized unit annotation")),
            Some(u) => c.check(u == v, || {
                format!("units.{k}: expected `{u}`, got `{v}` (no unit conversion is performed)")
            }),
        }
    }
    c.check(net.segments.pipeline >= 1, || {
        "segments.pipeline: K must be at least 1".into()
    });
    c.check(net.segments.traffic >= 1, || {
        "segments.traffic: H must be at least 1".into()
    });
    c.nonneg("ambiguity.radius", net.ambiguity.radius);

    let e = &net.economics;
    c.series("economics.electricity_price", &e.electricity_price, t);
    c.series("economics.hydrogen_price", &e.hydrogen_price, t);
    c.series("economics.trip_profile", &e.trip_profile, t);
    c.check(e.trip_profile.iter().sum::<f64>() > 0.0, || {
        "economics.trip_profile: must have a positive sum".into()
    });
    for (path, x) in [
        ("economics.pv_curtailment_penalty", e.pv_curtailment_penalty),
        ("economics.congestion_price", e.congestion_price),
        ("economics.unserved_power_penalty", e.unserved_power_penalty),
        (
            "economics.unserved_hydrogen_penalty",
            e.unserved_hydrogen_penalty,
        ),
        ("economics.hrs_cost", e.hrs_cost),
        ("economics.p2g_cost", e.p2g_cost),
        ("economics.hs_cost", e.hs_cost),
        ("economics.annual_hfcv_demand", e.annual_hfcv_demand),
    ] {
        c.nonneg(path, x);
    }
    c.check((0.0..=1.0).contains(&e.fulfillment_rate), || {
        format!(
            "economics.fulfillment_rate: β = {} outside [0, 1]",
            e.fulfillment_rate
        )
    });

    let h = &net.hydrogen;
    c.nonneg("hydrogen.pressure_min", h.pressure_min);
    c.check(h.pressure_min < h.pressure_max, || {
        format!(
            "hydrogen: pressure bounds inverted (pressure_min {} >= pressure_max {})",
            h.pressure_min, h.pressure_max
        )
    });
    for (path, x) in [
        ("hydrogen.p2g_efficiency", h.p2g_efficiency),
        ("hydrogen.charge_efficiency", h.charge_efficiency),
        ("hydrogen.discharge_efficiency", h.discharge_efficiency),
    ] {
        c.check(x > 0.0 && x <= 1.0, || {
            format!("{path}: efficiency {x} outside (0, 1]")
        });
    }
    c.positive("hydrogen.p2g_conversion", h.p2g_conversion);
    c.nonneg("hydrogen.source_purchase_cap", h.source_purchase_cap);
    c.check(!h.nodes.is_empty(), || {
        "hydrogen.nodes: at least one node required".into()
    });
    c.unique("hydrogen.nodes", h.nodes.iter().map(|n| n.id.as_str()));
    for (i, n) in h.nodes.iter().enumerate() {
        let p = format!("hydrogen.nodes[{i}] ({})", n.id);
        c.check(net.power.bus_index(&n.bus).is_some(), || {
            format!("{p}: unknown bus `{}`", n.bus)
        });
        c.window(&format!("{p}.hrs"), n.hrs);
        c.window(&format!("{p}.p2g"), n.p2g);
        c.window(&format!("{p}.hs"), n.hs);
        c.nonneg(&format!("{p}.storage_rate"), n.storage_rate);
        c.check(!n.levels.is_empty(), || {
            format!("{p}.levels: at least one level required")
        });
        for (k, &x) in n.levels.iter().enumerate() {
            c.nonneg(&format!("{p}.levels[{k}]"), x);
        }
        c.check(n.levels.windows(2).all(|w| w[0] < w[1]), || {
            format!("{p}.levels: demand levels must be strictly increasing")
        });
        let ns = n.levels.len();
        probability_vector(&mut c, &format!("{p}.p0"), &n.p0, ns);
        probability_vector(&mut c, &format!("{p}.p1"), &n.p1, ns);
        for (k, &x) in n.p0.iter().enumerate() {
            c.check(x >= MIN_BASELINE_PROBABILITY, || {
                format!("{p}.p0[{k}]: baseline probability {x} below {MIN_BASELINE_PROBABILITY}; remove zero-probability levels from the support")
            });
        }
        if n.p0.len() == ns && n.p1.len() == ns && ns > 0 {
            c.check(n.p1[0] <= n.p0[0] + PROB_SUM_TOL, || {
                format!("{p}.p1[0]: must not exceed p0[0] = {}", n.p0[0])
            });
            c.check(n.p1[ns - 1] >= n.p0[ns - 1] - PROB_SUM_TOL, || {
                format!(
                    "{p}.p1[{}]: must not be below p0[{}] = {}",
                    ns - 1,
                    ns - 1,
                    n.p0[ns - 1]
                )
            });
        }
    }
    c.unique(
        "hydrogen.pipelines",
        h.pipelines.iter().map(|l| l.id.as_str()),
    );
    for (i, l) in h.pipelines.iter().enumerate() {
        let p = format!("hydrogen.pipelines[{i}] ({})", l.id);
        let s = h.node_index(&l.from);
        let d = h.node_index(&l.to);
        c.check(s.is_some(), || {
            format!("{p}: unknown start node `{}`", l.from)
        });
        c.check(d.is_some(), || format!("{p}: unknown end node `{}`", l.to));
        c.check(l.from != l.to, || {
            format!("{p}: start and end node coincide")
        });
        if let Some(d) = d {
            c.check(!h.nodes[d].source, || {
                format!(
                    "{p}: flows into hydrogen source `{}`; pipelines run away from sources",
                    l.to
                )
            });
        }
        c.check(
            l.geometry.is_some() || (l.weymouth.is_some() && l.linepack.is_some()),
            || format!("{p}: give either `geometry` or both `weymouth` and `linepack`"),
        );
        if let Some(g) = &l.geometry {
            if let Err(err) = weymouth_constant(g) {
                c.errors.push(format!("{p}.geometry: {err}"));
            }
        }
        let phi = l.phi();
        let psi = l.psi();
        c.check(phi.is_finite() && phi > 0.0, || {
            format!("{p}: Weymouth constant must be positive, got {phi}")
        });
        c.check(psi.is_finite() && psi > 0.0, || {
            format!("{p}: linepack constant must be positive, got {psi}")
        });
        c.positive(&format!("{p}.flow_cap"), l.flow_cap);
        c.nonneg(&format!("{p}.linepack_cap"), l.linepack_cap);
        c.nonneg(&format!("{p}.annual_cost"), l.annual_cost);
        c.check(psi * h.pressure_min <= l.linepack_cap, || {
            format!(
                "{p}: initial linepack Ψ·pressure_min = {} exceeds linepack_cap {}",
                psi * h.pressure_min,
                l.linepack_cap
            )
        });
    }
    // Every node has at most one feeding pipeline, so any built subset is a
    // forest rooted at sources or stand-alone nodes.
    let mut feeders = vec![0usize; h.nodes.len()];
    for l in &h.pipelines {
        if let Some(d) = h.node_index(&l.to) {
            feeders[d] += 1;
        }
    }
    for (i, &f) in feeders.iter().enumerate() {
        c.check(f <= 1, || {
            format!(
                "hydrogen.nodes[{i}] ({}): fed by {f} candidate pipelines; the candidate set must be radial",
                h.nodes[i].id
            )
        });
    }

    let tr = &net.traffic;
    c.unique("traffic.links", tr.links.iter().map(|l| l.id.as_str()));
    for (i, l) in tr.links.iter().enumerate() {
        let p = format!("traffic.links[{i}] ({})", l.id);
        c.nonneg(&format!("{p}.free_flow_time"), l.free_flow_time);
        c.positive(&format!("{p}.capacity"), l.capacity);
        c.positive(&format!("{p}.flow_cap"), l.flow_cap);
    }
    c.unique("traffic.od", tr.od.iter().map(|o| o.id.as_str()));
    for (i, od) in tr.od.iter().enumerate() {
        let p = format!("traffic.od[{i}] ({})", od.id);
        c.series(&format!("{p}.hfcv"), &od.hfcv, t);
        c.series(&format!("{p}.otv"), &od.otv, t);
        c.check(!od.paths.is_empty(), || {
            format!("{p}: OD pair has no paths")
        });
        for path in &od.paths {
            let pp = format!("{p} path `{}`", path.id);
            c.check(!path.links.is_empty(), || format!("{pp}: no links"));
            let mut at = od.origin.as_str();
            let mut walk_ok = true;
            for lid in &path.links {
                match tr.link_index(lid) {
                    None => {
                        c.errors
                            .push(format!("{pp}: references unknown link `{lid}`"));
                        walk_ok = false;
                    }
                    Some(li) => {
                        let link = &tr.links[li];
                        if walk_ok && link.from != at {
                            c.errors.push(format!(
                                "{pp}: link `{lid}` starts at `{}` but the walk is at `{at}`",
                                link.from
                            ));
                            walk_ok = false;
                        }
                        at = &link.to;
                    }
                }
            }
            if walk_ok && !path.links.is_empty() {
                c.check(at == od.destination, || {
                    format!(
                        "{pp}: walk ends at `{at}`, not at destination `{}`",
                        od.destination
                    )
                });
            }
            for s in &path.stations {
                c.check(h.node_index(s).is_some(), || {
                    format!("{pp}: references unknown hydrogen node `{s}`")
                });
            }
        }
    }
    let daily = net.daily_hfcv_demand();
    let any_demand = h.nodes.iter().any(|n| n.levels.iter().any(|&x| x > 0.0));
    c.check(!any_demand || daily > 0.0, || {
        "economics.annual_hfcv_demand: must be positive when any demand level is positive".into()
    });

    let pw = &net.power;
    c.check(!pw.buses.is_empty(), || {
        "power.buses: at least one bus required".into()
    });
    c.unique("power.buses", pw.buses.iter().map(|b| b.id.as_str()));
    for (i, b) in pw.buses.iter().enumerate() {
        let p = format!("power.buses[{i}] ({})", b.id);
        c.series(&format!("{p}.load"), &b.load, t);
        c.nonneg(&format!("{p}.grid_cap"), b.grid_cap);
    }
    c.unique("power.pv", pw.pv.iter().map(|g| g.id.as_str()));
    for (i, g) in pw.pv.iter().enumerate() {
        let p = format!("power.pv[{i}] ({})", g.id);
        c.check(pw.bus_index(&g.bus).is_some(), || {
            format!("{p}: unknown bus `{}`", g.bus)
        });
        c.series(&format!("{p}.forecast"), &g.forecast, t);
    }
    c.unique("power.lines", pw.lines.iter().map(|l| l.id.as_str()));
    for (i, l) in pw.lines.iter().enumerate() {
        let p = format!("power.lines[{i}] ({})", l.id);
        c.nonneg(&format!("{p}.cap"), l.cap);
        c.check(l.ptdf.len() == pw.buses.len(), || {
            format!(
                "{p}.ptdf: expected one factor per bus ({}), got {}",
                pw.buses.len(),
                l.ptdf.len()
            )
        });
        c.check(l.ptdf.iter().all(|x| x.is_finite()), || {
            format!("{p}.ptdf: non-finite factor")
        });
    }
    c.errors
}
