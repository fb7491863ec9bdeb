//! TOML run configuration.

use std::path::{Path, PathBuf};

use extmfs::exact::{boundary_trace, CircleFourier, Constant, ExactSolution, ExpInverse};
use extmfs::geometry::BoundaryCurve;
use extmfs::solvers::{BoundaryData, MethodKind};
use serde::{Deserialize, Serialize};

/// A configuration problem, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{field}: {message}")]
    Invalid { field: &'static str, message: String },
}

fn invalid(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Epitrochoid { a: f64, b: f64 },
    Custom { samples: Vec<f64> },
}

impl CurveSpec {
    pub fn build(&self) -> Result<BoundaryCurve, ConfigError> {
        let curve = match self {
            Self::Circle { radius } => BoundaryCurve::circle(*radius),
            Self::Ellipse { a, b } => BoundaryCurve::ellipse(*a, *b),
            Self::Epitrochoid { a, b } => BoundaryCurve::epitrochoid(*a, *b),
            Self::Custom { samples } => BoundaryCurve::custom(samples.clone()),
        };
        curve.map_err(|e| invalid("curve", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSection {
    /// A method name such as `MTM` or `MMFS-MBF`, or `all`.
    pub kind: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_length: Option<f64>,
}

/// Boundary data; `far_field` is the constant `c` removed before solving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataSection {
    /// Trace of `exp(x/(x²+y²)) cos(y/(x²+y²))` on the boundary.
    #[serde(alias = "paper-exterior")]
    ExpInverse {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        far_field: Option<f64>,
    },
    Constant {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        far_field: Option<f64>,
    },
    /// `a0 + Σ a[k-1] cos kθ + b[k-1] sin kθ`.
    Fourier {
        a0: f64,
        #[serde(default)]
        a: Vec<f64>,
        #[serde(default)]
        b: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        far_field: Option<f64>,
    },
}

impl DataSection {
    pub fn far_field(&self) -> f64 {
        match self {
            Self::ExpInverse { far_field } | Self::Constant { far_field, .. } | Self::Fourier { far_field, .. } => {
                far_field.unwrap_or(0.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SweepSpec {
    /// `cond₂(S)` against `R₀`.
    #[serde(rename = "s-vs-r0")]
    SVsR0 {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stop: Option<f64>,
    },
    /// `cond₂(K₁)` and `cond₂(K₂)` against `R`.
    #[serde(rename = "k-vs-r")]
    KVsR {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stop: Option<f64>,
    },
    /// `cond₂(A)` and `cond₂(SK)` against `N`, with growth fits.
    #[serde(rename = "a-vs-sk")]
    AVsSk { source_radius: f64, n_list: Vec<usize> },
    /// Grid-search optimal `R₀` for each `N`.
    #[serde(rename = "r0-opt-vs-n")]
    R0OptVsN {
        n_list: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stop: Option<f64>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Evaluation radii; defaults to `10, 100, …, 1e10`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    /// Angles per radius in single-method output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<usize>,
    /// θ samples for `max_θ` errors in `method = "all"` output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_samples: Option<usize>,
}

pub const DEFAULT_ANGLES: usize = 8;

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text).map_err(|message| ConfigError::Parse {
            path: path.to_owned(),
            message,
        })
    }

    /// Parses TOML text; the error message carries line and column.
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn output(&self) -> OutputSection {
        self.output.clone().unwrap_or_default()
    }

    pub fn curve(&self) -> Result<BoundaryCurve, ConfigError> {
        self.curve
            .as_ref()
            .ok_or_else(|| invalid("curve", "section is required"))?
            .build()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    All,
    One(MethodKind),
}

impl MethodChoice {
    pub fn methods(self) -> Vec<MethodKind> {
        match self {
            Self::All => MethodKind::ALL.to_vec(),
            Self::One(m) => vec![m],
        }
    }
}

/// Everything `solve` needs, checked against the curve.
pub struct SolvePlan {
    pub curve: BoundaryCurve,
    pub choice: MethodChoice,
    pub n: usize,
    pub m: usize,
    pub source_radius: Option<f64>,
    pub char_length: Option<f64>,
    pub data: BoundaryData,
    pub exact: Option<Box<dyn ExactSolution + Send>>,
    pub far_field: f64,
    pub radii: Vec<f64>,
    pub angles: usize,
    pub theta_samples: usize,
}

impl SolvePlan {
    pub fn from_config(cfg: &RunConfig) -> Result<Self, ConfigError> {
        let curve = cfg.curve()?;
        let method = cfg
            .method
            .as_ref()
            .ok_or_else(|| invalid("method", "section is required for solve"))?;
        let choice = if method.kind.eq_ignore_ascii_case("all") {
            MethodChoice::All
        } else {
            MethodChoice::One(
                method
                    .kind
                    .parse()
                    .map_err(|e: extmfs::solvers::UnknownMethod| invalid("method.kind", e.to_string()))?,
            )
        };
        let methods = choice.methods();
        let n = method.n;
        if n < 3 {
            return Err(invalid("method.n", format!("N must be at least 3, got {n}")));
        }
        let m = method.m.unwrap_or((n - 1) / 2);
        if methods.iter().any(|k| k.needs_square_trefftz()) {
            if n.is_multiple_of(2) {
                return Err(invalid(
                    "method.n",
                    format!("N must be odd for {}, got {n}", methods[0]),
                ));
            }
            if 2 * m + 1 != n {
                return Err(invalid(
                    "method.m",
                    format!("N = 2M + 1 required, got N = {n}, M = {m}"),
                ));
            }
        }
        if methods.iter().any(|k| k.uses_sources()) {
            let r = method
                .source_radius
                .ok_or_else(|| invalid("method.source_radius", "required for MFS-type methods"))?;
            let rho_min = curve.rho_min();
            if !(r > 0.0 && r < rho_min) {
                return Err(invalid(
                    "method.source_radius",
                    format!("R must satisfy 0 < R < rho_min = {rho_min}, got {r}"),
                ));
            }
        }
        if methods.contains(&MethodKind::Mtm) && method.char_length.or(method.source_radius).is_none() {
            return Err(invalid("method.char_length", "required for MTM"));
        }
        if let Some(r0) = method.char_length {
            if !(r0 > 0.0 && r0.is_finite()) {
                return Err(invalid("method.char_length", format!("must be positive, got {r0}")));
            }
        }

        let data_section = cfg
            .data
            .as_ref()
            .ok_or_else(|| invalid("data", "section is required for solve"))?;
        let (data, exact) = boundary_data(data_section, &curve);
        let far_field = data_section.far_field();
        if choice == MethodChoice::All && exact.is_none() {
            return Err(invalid(
                "data.kind",
                "method = \"all\" reports errors and needs data with a known exterior solution",
            ));
        }

        let out = cfg.output();
        let radii = out.radii.unwrap_or_else(|| extmfs::analysis::decade_ladder(1, 10));
        let rho_max = curve.rho_max();
        if let Some(bad) = radii.iter().find(|&&r| !(r >= rho_max && r.is_finite())) {
            return Err(invalid(
                "output.radii",
                format!("radius {bad} is not outside the obstacle (rho_max = {rho_max})"),
            ));
        }
        let angles = out.angles.unwrap_or(DEFAULT_ANGLES);
        if angles == 0 {
            return Err(invalid("output.angles", "must be positive"));
        }
        let theta_samples = out.theta_samples.unwrap_or(extmfs::analysis::DEFAULT_THETA_SAMPLES);
        if theta_samples < extmfs::analysis::MIN_THETA_SAMPLES {
            return Err(invalid(
                "output.theta_samples",
                format!("at least {} required", extmfs::analysis::MIN_THETA_SAMPLES),
            ));
        }
        Ok(Self {
            curve,
            choice,
            n,
            m,
            source_radius: method.source_radius,
            char_length: method.char_length,
            data,
            exact,
            far_field,
            radii,
            angles,
            theta_samples,
        })
    }
}

fn boundary_data(spec: &DataSection, curve: &BoundaryCurve) -> (BoundaryData, Option<Box<dyn ExactSolution + Send>>) {
    match spec {
        DataSection::ExpInverse { .. } => (boundary_trace(curve, ExpInverse), Some(Box::new(ExpInverse))),
        DataSection::Constant { value, .. } => (BoundaryData::constant(*value), Some(Box::new(Constant(*value)))),
        DataSection::Fourier { a0, a, b, .. } => {
            let (a0, a, b) = (*a0, a.clone(), b.clone());
            let exact: Option<Box<dyn ExactSolution + Send>> = match curve {
                BoundaryCurve::Circle { radius } => Some(Box::new(CircleFourier {
                    rho: *radius,
                    a0,
                    a: a.clone(),
                    b: b.clone(),
                })),
                _ => None,
            };
            let f = move |t: f64| {
                let cos: f64 = a.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * t).cos()).sum();
                let sin: f64 = b.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * t).sin()).sum();
                a0 + cos + sin
            };
            (BoundaryData::function(f), exact)
        }
    }
}

/// Validated sweep grid `step, 2·step, …, stop`.
pub fn sweep_grid(step: Option<f64>, stop: Option<f64>, default_stop: f64) -> Result<Vec<f64>, ConfigError> {
    let step = step.unwrap_or(extmfs::analysis::DEFAULT_R0_STEP);
    let stop = stop.unwrap_or(default_stop);
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid("sweep.step", format!("must be positive, got {step}")));
    }
    if !(stop >= step && stop.is_finite()) {
        return Err(invalid("sweep.stop", format!("must be at least the step, got {stop}")));
    }
    Ok(extmfs::analysis::uniform_grid(step, stop))
}

pub fn check_odd(field: &'static str, n: usize) -> Result<(), ConfigError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(invalid(field, format!("N must be odd and at least 3, got {n}")));
    }
    Ok(())
}

pub fn check_n_list(field: &'static str, ns: &[usize], min: usize) -> Result<(), ConfigError> {
    if ns.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    if let Some(bad) = ns.iter().find(|&&n| n < min || n.is_multiple_of(2)) {
        return Err(invalid(
            field,
            format!("values must be odd and at least {min}, got {bad}"),
        ));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(field, "values must be increasing"));
    }
    Ok(())
}

pub fn config_error(field: &'static str, message: impl Into<String>) -> ConfigError {
    invalid(field, message)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[curve]
kind = "epitrochoid"
a = 3.0
b = 1.0

[method]
kind = "all"
n = 19
m = 9
source_radius = 1.0

[data]
kind = "exp-inverse"
far_field = 1.0

[output]
path = "errors.csv"
radii = [10.0, 100.0]
"#;

    #[test]
    fn round_trip() {
        let cfg = RunConfig::parse(FULL).unwrap();
        let again = RunConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);

        let sweep = RunConfig::parse(
            "[curve]\nkind = \"circle\"\nradius = 1.0\n[sweep]\nkind = \"s-vs-r0\"\nn = 21\nstep = 0.005\n",
        )
        .unwrap();
        assert_eq!(RunConfig::parse(&sweep.to_toml()).unwrap(), sweep);

        let fourier =
            RunConfig::parse("[data]\nkind = \"fourier\"\na0 = 2.0\na = [0.0, 3.0]\nb = [-1.0]\nfar_field = 0.5\n")
                .unwrap();
        assert_eq!(RunConfig::parse(&fourier.to_toml()).unwrap(), fourier);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = RunConfig::parse("[method]\nkind = \"MTM\"\nn = \"x\"\n").unwrap_err();
        assert!(err.contains("line 3"), "{err}");
        let err = RunConfig::parse("[curve]\nkind = \"square\"\n").unwrap_err();
        assert!(err.contains("square"), "{err}");
        assert!(RunConfig::parse("[method]\nkind = \"MTM\"\nn = 5\nbogus = 1\n").is_err());
        assert!(RunConfig::parse("[data]\nkind = \"constant\"\nvalue = 1.0\nfarfield = 1.0\n").is_err());
    }

    #[test]
    fn plan_validation() {
        let cfg = RunConfig::parse(FULL).unwrap();
        let plan = SolvePlan::from_config(&cfg).unwrap();
        assert_eq!((plan.n, plan.m, plan.far_field), (19, 9, 1.0));

        let mut even = cfg.clone();
        let method = even.method.as_mut().unwrap();
        method.kind = "MMFS_MBF".into();
        method.n = 10;
        method.m = None;
        let err = SolvePlan::from_config(&even).err().unwrap();
        assert!(matches!(err, ConfigError::Invalid { field: "method.n", .. }), "{err}");

        let mut outside = cfg.clone();
        outside.method.as_mut().unwrap().source_radius = Some(3.0);
        let err = SolvePlan::from_config(&outside).err().unwrap();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                field: "method.source_radius",
                ..
            }
        ));

        let mut inside = cfg;
        inside.output.as_mut().unwrap().radii = Some(vec![4.0]);
        assert!(SolvePlan::from_config(&inside).is_err());
    }

    #[test]
    fn cmfs_accepts_even_n() {
        let cfg = RunConfig::parse(
            "[curve]\nkind = \"circle\"\nradius = 2.0\n[method]\nkind = \"CMFS-MBF\"\nn = 10\nsource_radius = 1.0\n[data]\nkind = \"constant\"\nvalue = 3.0\n",
        )
        .unwrap();
        assert!(SolvePlan::from_config(&cfg).is_ok());
    }
}
