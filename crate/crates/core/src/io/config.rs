//! Flat `key = value` run configuration.
//!
//! ```text
//! # clustering on the ring
//! payoff.a11 = -8
//! payoff.a12 = 3
//! payoff.a21 = 4
//! payoff.a22 = -8
//! lattice.d = 1
//! lattice.M = 1
//! lattice.L = 600
//! sim.T = 2000
//! sim.seed = 7
//! sample.dt = 20
//! output.pgm = ring.pgm
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Every key may appear
//! at most once; unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::analysis::Thresholds;
use crate::dynamics::{uniform_schedule, InitialCondition, Method, SnapshotPolicy};
use crate::lattice::{LatticeSpec, Strategy};
use crate::meanfield::DEFAULT_STEP;
use crate::payoff::PayoffMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    Unknown(String),
    #[error("key `{0}` appears more than once")]
    Duplicate(String),
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: cannot read `{value}` as {expected}")]
    Type {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("key `{key}`: {reason}")]
    Constraint { key: &'static str, reason: String },
}

const KEYS: &[&str] = &[
    "payoff.a11",
    "payoff.a12",
    "payoff.a21",
    "payoff.a22",
    "lattice.d",
    "lattice.M",
    "lattice.L",
    "sim.T",
    "sim.seed",
    "sim.replicates",
    "sim.method",
    "init.kind",
    "init.p",
    "init.strategy",
    "init.position",
    "init.sites",
    "sample.dt",
    "sample.times",
    "sample.snapshots",
    "output.csv",
    "output.pgm",
    "replicator.u0",
    "replicator.dt",
    "replicator.T",
    "sweep.a11.min",
    "sweep.a11.max",
    "sweep.a11.steps",
    "sweep.a22.min",
    "sweep.a22.max",
    "sweep.a22.steps",
    "sweep.m",
    "thresholds.fixation",
    "thresholds.coexistence",
    "thresholds.clustering",
    "ctable.M_max",
    "ctable.d_max",
];

/// When observables are recorded.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleSpec {
    Step(f64),
    Times(Vec<f64>),
}

impl SampleSpec {
    pub fn times(&self, horizon: f64) -> Vec<f64> {
        match self {
            SampleSpec::Step(dt) => uniform_schedule(horizon, *dt),
            SampleSpec::Times(t) => t.clone(),
        }
    }
}

/// An evenly spaced axis of a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.max } else { self.min + k as f64 * h })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub a11: GridAxis,
    pub a22: GridAxis,
    /// Depth of the coexistence triangle.
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub payoff: PayoffMatrix,
    pub dim: usize,
    pub range: usize,
    /// One side per axis.
    pub sides: Vec<usize>,
    pub horizon: f64,
    pub seed: u64,
    pub replicates: usize,
    pub method: Method,
    pub init: InitialCondition,
    pub samples: SampleSpec,
    pub snapshots: SnapshotPolicy,
    pub csv: Option<String>,
    pub pgm: Option<String>,
    pub u0: f64,
    pub ode_step: f64,
    pub ode_horizon: Option<f64>,
    pub sweep: Option<SweepOptions>,
    pub thresholds: Thresholds,
    pub ctable_range: usize,
    pub ctable_dim: usize,
}

impl RunConfig {
    pub fn lattice(&self) -> LatticeSpec {
        LatticeSpec::new(self.dim, self.range, self.sides.clone()).expect("validated lattice")
    }

    pub fn sample_times(&self) -> Vec<f64> {
        self.samples.times(self.horizon)
    }

    /// Snapshot policy actually used: full snapshots whenever a space-time
    /// image is requested.
    pub fn effective_snapshots(&self) -> SnapshotPolicy {
        if self.pgm.is_some() {
            SnapshotPolicy::Full
        } else {
            self.snapshots
        }
    }
}

struct Table {
    entries: BTreeMap<String, String>,
}

impl Table {
    fn take(&mut self, key: &'static str) -> Option<(&'static str, String)> {
        self.entries.remove(key).map(|v| (key, v))
    }

    fn required(&mut self, key: &'static str) -> Result<(&'static str, String), ConfigError> {
        self.take(key).ok_or(ConfigError::Missing(key))
    }
}

fn type_error(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::Type {
        key: key.to_string(),
        value: value.to_string(),
        expected,
    }
}

fn real((key, value): (&str, String)) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| type_error(key, &value, "a finite real number"))
}

fn integer<T: std::str::FromStr>((key, value): (&str, String)) -> Result<T, ConfigError> {
    value
        .parse::<T>()
        .map_err(|_| type_error(key, &value, "a non-negative integer"))
}

fn list<T>(
    (key, value): (&str, String),
    item: impl Fn((&str, String)) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(|part| item((key, part.trim().to_string())))
        .collect()
}

fn constraint(key: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Constraint {
        key,
        reason: reason.into(),
    }
}

fn parse_strategy((key, value): (&str, String)) -> Result<Strategy, ConfigError> {
    match value.as_str() {
        "1" => Ok(Strategy::One),
        "2" => Ok(Strategy::Two),
        _ => Err(type_error(key, &value, "a strategy (1 or 2)")),
    }
}

fn parse_method((key, value): (&str, String)) -> Result<Method, ConfigError> {
    match value.as_str() {
        "direct" => Ok(Method::Direct),
        "graphical" => Ok(Method::Graphical),
        "graphical-negative" => Ok(Method::GraphicalNegative),
        _ => Err(type_error(key, &value, "direct, graphical or graphical-negative")),
    }
}

fn parse_policy((key, value): (&str, String)) -> Result<SnapshotPolicy, ConfigError> {
    match value.as_str() {
        "none" => Ok(SnapshotPolicy::None),
        "observables" => Ok(SnapshotPolicy::ObservablesOnly),
        "full" => Ok(SnapshotPolicy::Full),
        _ => Err(type_error(key, &value, "none, observables or full")),
    }
}

fn split_lines(text: &str) -> Result<Table, ConfigError> {
    let mut entries = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigError::Syntax { line: k + 1 })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line: k + 1 });
        }
        if !KEYS.contains(&key) {
            return Err(ConfigError::Unknown(key.to_string()));
        }
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ConfigError::Duplicate(key.to_string()));
        }
    }
    Ok(Table { entries })
}

fn parse_axis(t: &mut Table, which: usize) -> Result<Option<GridAxis>, ConfigError> {
    let [min, max, steps] = if which == 0 {
        ["sweep.a11.min", "sweep.a11.max", "sweep.a11.steps"]
    } else {
        ["sweep.a22.min", "sweep.a22.max", "sweep.a22.steps"]
    };
    let (lo, hi, n) = (t.take(min), t.take(max), t.take(steps));
    if lo.is_none() && hi.is_none() && n.is_none() {
        return Ok(None);
    }
    let lo = real(lo.ok_or(ConfigError::Missing(min))?)?;
    let hi = real(hi.ok_or(ConfigError::Missing(max))?)?;
    let n: usize = integer(n.ok_or(ConfigError::Missing(steps))?)?;
    if n == 0 {
        return Err(constraint(steps, "needs at least one grid point"));
    }
    if hi < lo {
        return Err(constraint(max, format!("must not be below {min}")));
    }
    Ok(Some(GridAxis {
        min: lo,
        max: hi,
        steps: n,
    }))
}

/// Reads and validates a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut t = split_lines(text)?;

    let entries = [
        real(t.required("payoff.a11")?)?,
        real(t.required("payoff.a12")?)?,
        real(t.required("payoff.a21")?)?,
        real(t.required("payoff.a22")?)?,
    ];
    let payoff = PayoffMatrix::new(entries[0], entries[1], entries[2], entries[3])
        .expect("finite entries");

    let dim: usize = integer(t.required("lattice.d")?)?;
    let range: usize = integer(t.required("lattice.M")?)?;
    if dim == 0 {
        return Err(constraint("lattice.d", "dimension must be at least 1"));
    }
    if range == 0 {
        return Err(constraint("lattice.M", "range must be at least 1"));
    }
    let mut sides: Vec<usize> = list(t.required("lattice.L")?, integer)?;
    if sides.len() == 1 {
        sides = vec![sides[0]; dim];
    }
    if sides.len() != dim {
        return Err(constraint(
            "lattice.L",
            format!("expected 1 or {dim} side lengths, got {}", sides.len()),
        ));
    }
    let lattice = LatticeSpec::new(dim, range, sides.clone())
        .map_err(|e| constraint("lattice.L", e.to_string()))?;

    let horizon = real(t.required("sim.T")?)?;
    if horizon <= 0.0 {
        return Err(constraint("sim.T", "time horizon must be positive"));
    }
    let seed: u64 = integer(t.required("sim.seed")?)?;
    let replicates = match t.take("sim.replicates") {
        Some(v) => integer(v)?,
        None => 1,
    };
    let method = match t.take("sim.method") {
        Some(v) => parse_method(v)?,
        None => Method::Direct,
    };
    if method == Method::GraphicalNegative && !payoff.all_negative() {
        return Err(constraint(
            "sim.method",
            "graphical-negative needs all four payoffs strictly negative",
        ));
    }

    let kind = t.take("init.kind");
    let p = t.take("init.p");
    let strategy = t.take("init.strategy");
    let position = t.take("init.position");
    let sites_value = t.take("init.sites");
    let kind_name = kind.as_ref().map(|(_, v)| v.clone()).unwrap_or("bernoulli".into());
    let used: &[&str] = match kind_name.as_str() {
        "bernoulli" => &["init.p"],
        "single" => &["init.strategy", "init.position"],
        "explicit" => &["init.sites"],
        _ => &[],
    };
    for (key, present) in [
        ("init.p", p.is_some()),
        ("init.strategy", strategy.is_some()),
        ("init.position", position.is_some()),
        ("init.sites", sites_value.is_some()),
    ] {
        if present && !used.contains(&key) {
            return Err(ConfigError::Constraint {
                key: "init.kind",
                reason: format!("`{key}` is not used by init.kind = {kind_name}"),
            });
        }
    }
    let init = match kind_name.as_str() {
        "bernoulli" => {
            let p = match p {
                Some(v) => real(v)?,
                None => 0.5,
            };
            if !(0.0..=1.0).contains(&p) {
                return Err(constraint("init.p", "density must lie in [0, 1]"));
            }
            InitialCondition::Bernoulli(p)
        }
        "halfspace" => InitialCondition::HalfSpace,
        "single" => {
            let strategy = parse_strategy(strategy.ok_or(ConfigError::Missing("init.strategy"))?)?;
            let position: Vec<usize> =
                list(position.ok_or(ConfigError::Missing("init.position"))?, integer)?;
            if position.len() != dim || position.iter().zip(&sides).any(|(&c, &s)| c >= s) {
                return Err(constraint("init.position", "position must be a site of the lattice"));
            }
            InitialCondition::SingleSite { strategy, position }
        }
        "explicit" => {
            let (key, value) = sites_value.ok_or(ConfigError::Missing("init.sites"))?;
            let values: Vec<u8> = value
                .chars()
                .filter(|c| !c.is_whitespace() && *c != ',')
                .map(|c| match c {
                    '1' => Ok(1),
                    '2' => Ok(2),
                    _ => Err(type_error(key, &value, "a string of strategies 1 and 2")),
                })
                .collect::<Result<_, _>>()?;
            if values.len() != lattice.sites() {
                return Err(constraint(
                    "init.sites",
                    format!("expected {} strategies, got {}", lattice.sites(), values.len()),
                ));
            }
            InitialCondition::Explicit(values)
        }
        other => {
            return Err(type_error(
                "init.kind",
                other,
                "bernoulli, halfspace, single or explicit",
            ))
        }
    };

    let samples = match (t.take("sample.dt"), t.take("sample.times")) {
        (Some(_), Some(_)) => {
            return Err(constraint("sample.times", "give either sample.dt or sample.times"))
        }
        (Some(v), None) => {
            let dt = real(v)?;
            if dt <= 0.0 {
                return Err(constraint("sample.dt", "sampling step must be positive"));
            }
            SampleSpec::Step(dt)
        }
        (None, Some(v)) => {
            let times = list(v, real)?;
            if times.iter().any(|&s| !(0.0..=horizon).contains(&s)) {
                return Err(constraint("sample.times", "sample times must lie in [0, sim.T]"));
            }
            if times.windows(2).any(|w| w[1] < w[0]) {
                return Err(constraint("sample.times", "sample times must be sorted"));
            }
            SampleSpec::Times(times)
        }
        (None, None) => SampleSpec::Step(horizon / 100.0),
    };
    let snapshots = match t.take("sample.snapshots") {
        Some(v) => parse_policy(v)?,
        None => SnapshotPolicy::ObservablesOnly,
    };

    let csv = t.take("output.csv").map(|(_, v)| v);
    let pgm = t.take("output.pgm").map(|(_, v)| v);
    if pgm.is_some() && dim != 1 {
        return Err(constraint("output.pgm", "space-time images need d = 1"));
    }
    if let Some(pgm) = &pgm {
        let rows = samples.times(horizon).len();
        if rows > super::MAX_PGM_SIDE || sides[0] > super::MAX_PGM_SIDE {
            return Err(constraint(
                "output.pgm",
                format!("image of {} x {rows} exceeds {} pixels per side ({pgm})", sides[0], super::MAX_PGM_SIDE),
            ));
        }
    }

    let u0 = match t.take("replicator.u0") {
        Some(v) => real(v)?,
        None => 0.5,
    };
    if !(0.0..=1.0).contains(&u0) {
        return Err(constraint("replicator.u0", "frequency must lie in [0, 1]"));
    }
    let ode_step = match t.take("replicator.dt") {
        Some(v) => real(v)?,
        None => DEFAULT_STEP,
    };
    let ode_horizon = t.take("replicator.T").map(real).transpose()?;
    if ode_step <= 0.0 || ode_step >= ode_horizon.unwrap_or(horizon) {
        return Err(constraint("replicator.dt", "step must be positive and below the horizon"));
    }

    let a11_axis = parse_axis(&mut t, 0)?;
    let a22_axis = parse_axis(&mut t, 1)?;
    let m = match t.take("sweep.m") {
        Some(v) => real(v)?,
        None => 1.0,
    };
    if m <= 0.0 {
        return Err(constraint("sweep.m", "triangle depth must be positive"));
    }
    let sweep = match (a11_axis, a22_axis) {
        (Some(a11), Some(a22)) => Some(SweepOptions { a11, a22, m }),
        (None, None) => None,
        (None, Some(_)) => return Err(ConfigError::Missing("sweep.a11.min")),
        (Some(_), None) => return Err(ConfigError::Missing("sweep.a22.min")),
    };

    let defaults = Thresholds::default();
    let thresholds = Thresholds {
        fixation: t.take("thresholds.fixation").map(real).transpose()?.unwrap_or(defaults.fixation),
        coexistence: t
            .take("thresholds.coexistence")
            .map(real)
            .transpose()?
            .unwrap_or(defaults.coexistence),
        clustering: t
            .take("thresholds.clustering")
            .map(real)
            .transpose()?
            .unwrap_or(defaults.clustering),
    };
    if !(thresholds.fixation > 0.0 && thresholds.fixation <= 1.0) {
        return Err(constraint("thresholds.fixation", "fraction must lie in (0, 1]"));
    }
    if !(0.0..=1.0).contains(&thresholds.coexistence) {
        return Err(constraint("thresholds.coexistence", "heterozygosity must lie in [0, 1]"));
    }
    if thresholds.clustering < 1.0 {
        return Err(constraint("thresholds.clustering", "decay factor must be at least 1"));
    }

    let ctable_range = match t.take("ctable.M_max") {
        Some(v) => integer(v)?,
        None => 9,
    };
    let ctable_dim = match t.take("ctable.d_max") {
        Some(v) => integer(v)?,
        None => 9,
    };
    if ctable_range == 0 {
        return Err(constraint("ctable.M_max", "must be at least 1"));
    }
    if ctable_dim == 0 {
        return Err(constraint("ctable.d_max", "must be at least 1"));
    }

    debug_assert!(t.entries.is_empty(), "unconsumed keys: {:?}", t.entries);
    Ok(RunConfig {
        payoff,
        dim,
        range,
        sides,
        horizon,
        seed,
        replicates,
        method,
        init,
        samples,
        snapshots,
        csv,
        pgm,
        u0,
        ode_step,
        ode_horizon,
        sweep,
        thresholds,
        ctable_range,
        ctable_dim,
    })
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders `cfg` so that [`parse_config`] reads it back unchanged.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let mut put = |key: &str, value: String| {
        let _ = writeln!(out, "{key} = {value}");
    };
    let a = &cfg.payoff;
    put("payoff.a11", a.a11().to_string());
    put("payoff.a12", a.a12().to_string());
    put("payoff.a21", a.a21().to_string());
    put("payoff.a22", a.a22().to_string());
    put("lattice.d", cfg.dim.to_string());
    put("lattice.M", cfg.range.to_string());
    put("lattice.L", join(&cfg.sides));
    put("sim.T", cfg.horizon.to_string());
    put("sim.seed", cfg.seed.to_string());
    put("sim.replicates", cfg.replicates.to_string());
    put("sim.method", cfg.method.as_str().to_string());
    match &cfg.init {
        InitialCondition::Bernoulli(p) => {
            put("init.kind", "bernoulli".into());
            put("init.p", p.to_string());
        }
        InitialCondition::HalfSpace => put("init.kind", "halfspace".into()),
        InitialCondition::SingleSite { strategy, position } => {
            put("init.kind", "single".into());
            put("init.strategy", strategy.to_string());
            put("init.position", join(position));
        }
        InitialCondition::Explicit(values) => {
            put("init.kind", "explicit".into());
            put("init.sites", values.iter().map(|v| v.to_string()).collect());
        }
    }
    match &cfg.samples {
        SampleSpec::Step(dt) => put("sample.dt", dt.to_string()),
        SampleSpec::Times(times) => put("sample.times", join(times)),
    }
    put("sample.snapshots", cfg.snapshots.as_str().to_string());
    if let Some(csv) = &cfg.csv {
        put("output.csv", csv.clone());
    }
    if let Some(pgm) = &cfg.pgm {
        put("output.pgm", pgm.clone());
    }
    put("replicator.u0", cfg.u0.to_string());
    put("replicator.dt", cfg.ode_step.to_string());
    if let Some(t) = cfg.ode_horizon {
        put("replicator.T", t.to_string());
    }
    if let Some(s) = &cfg.sweep {
        put("sweep.a11.min", s.a11.min.to_string());
        put("sweep.a11.max", s.a11.max.to_string());
        put("sweep.a11.steps", s.a11.steps.to_string());
        put("sweep.a22.min", s.a22.min.to_string());
        put("sweep.a22.max", s.a22.max.to_string());
        put("sweep.a22.steps", s.a22.steps.to_string());
        put("sweep.m", s.m.to_string());
    }
    put("thresholds.fixation", cfg.thresholds.fixation.to_string());
    put("thresholds.coexistence", cfg.thresholds.coexistence.to_string());
    put("thresholds.clustering", cfg.thresholds.clustering.to_string());
    put("ctable.M_max", cfg.ctable_range.to_string());
    put("ctable.d_max", cfg.ctable_dim.to_string());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
payoff.a11 = -8
payoff.a12 = 3
payoff.a21 = 4
payoff.a22 = -8
lattice.d = 1
lattice.M = 1
lattice.L = 600
sim.T = 10000
sim.seed = 1
";

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.payoff, PayoffMatrix::new(-8.0, 3.0, 4.0, -8.0).unwrap());
        assert_eq!(cfg.sides, vec![600]);
        assert_eq!(cfg.replicates, 1);
        assert_eq!(cfg.method, Method::Direct);
        assert_eq!(cfg.init, InitialCondition::Bernoulli(0.5));
        assert_eq!(cfg.samples, SampleSpec::Step(100.0));
        assert_eq!(cfg.thresholds, Thresholds::default());
        assert_eq!((cfg.ctable_range, cfg.ctable_dim), (9, 9));
        assert!(cfg.sweep.is_none() && cfg.pgm.is_none());
    }

    #[test]
    fn short_side_names_the_constraint() {
        let text = MINIMAL.replace("lattice.L = 600", "lattice.L = 5");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Constraint { key: "lattice.L", .. }));
        assert!(err.to_string().contains("L >= 2(2M+1)"), "{err}");
    }

    #[test]
    fn errors_name_the_key() {
        let missing = MINIMAL.replace("sim.seed = 1\n", "");
        assert_eq!(parse_config(&missing).unwrap_err(), ConfigError::Missing("sim.seed"));
        let unknown = format!("{MINIMAL}sim.colour = red\n");
        assert_eq!(
            parse_config(&unknown).unwrap_err(),
            ConfigError::Unknown("sim.colour".into())
        );
        let bad = MINIMAL.replace("sim.T = 10000", "sim.T = soon");
        assert!(parse_config(&bad).unwrap_err().to_string().contains("sim.T"));
        let twice = format!("{MINIMAL}sim.seed = 2\n");
        assert_eq!(parse_config(&twice).unwrap_err(), ConfigError::Duplicate("sim.seed".into()));
        let negative = format!("{MINIMAL}sim.method = graphical-negative\n");
        assert!(matches!(
            parse_config(&negative).unwrap_err(),
            ConfigError::Constraint { key: "sim.method", .. }
        ));
        assert_eq!(
            parse_config("no equals sign\n").unwrap_err(),
            ConfigError::Syntax { line: 1 }
        );
    }

    #[test]
    fn every_option_round_trips() {
        let text = "\
# full document
payoff.a11 = -3
payoff.a12 = 0.25
payoff.a21 = 0
payoff.a22 = -3
lattice.d = 2
lattice.M = 1
lattice.L = 12, 18
sim.T = 7.5
sim.seed = 18446744073709551615
sim.replicates = 4
sim.method = graphical
init.kind = single
init.strategy = 2
init.position = 3,4
sample.times = 0, 0.1, 7.5
sample.snapshots = full
output.csv = a.csv
replicator.u0 = 0.3
replicator.dt = 0.001
replicator.T = 50
sweep.a11.min = -4
sweep.a11.max = -1
sweep.a11.steps = 4
sweep.a22.min = -4
sweep.a22.max = -1
sweep.a22.steps = 7
sweep.m = 0.5
thresholds.fixation = 0.9
thresholds.coexistence = 0.1
thresholds.clustering = 3
ctable.M_max = 4
ctable.d_max = 3
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.seed, u64::MAX);
        assert_eq!(cfg.sides, vec![12, 18]);
        let again = parse_config(&serialize_config(&cfg)).unwrap();
        assert_eq!(again, cfg);

        let explicit = MINIMAL.replace("lattice.L = 600", "lattice.L = 6")
            + "init.kind = explicit\ninit.sites = 121122\noutput.pgm = x.pgm\n";
        let cfg = parse_config(&explicit).unwrap();
        assert_eq!(cfg.init, InitialCondition::Explicit(vec![1, 2, 1, 1, 2, 2]));
        assert_eq!(cfg.effective_snapshots(), SnapshotPolicy::Full);
        assert_eq!(parse_config(&serialize_config(&cfg)).unwrap(), cfg);
    }

    #[test]
    fn grid_axis_hits_both_ends() {
        let axis = GridAxis {
            min: -1.0,
            max: 1.0,
            steps: 3,
        };
        assert_eq!(axis.values(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(GridAxis { steps: 1, ..axis }.values(), vec![-1.0]);
    }
}
