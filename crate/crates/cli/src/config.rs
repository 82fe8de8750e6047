//! Experiment configuration files.
//!
//! A config is a TOML document. It is first read into span-carrying raw
//! tables, then validated into a plain [`ExperimentConfig`] (echoed into every
//! report) and an [`Experiment`] holding the constructed runtime objects.
//! The grammar is documented in `CONFIG.md` next to this crate's manifest.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use orbhull::group_structure::LieSubalgebraPair;
use orbhull::haar_numeric::{CompactMatrixGroup, GroupKind, Representation, DEFAULT_WORD_LENGTH};
use orbhull::kempf_ness::{Backtracking, FlowOptions, NamedInvariant};
use orbhull::lattice_cone::{Rational, WeightVector};
use orbhull::measure_mult::{EstimationConfig, Polynomial, DEFAULT_MONOMIAL_CAP};
use orbhull::serde_util::rational_from_str;
use orbhull::torus_orbit::{GaussianRational, OrbitPoint, TorusAction};
use orbhull::{CMatrix, Complex64};
use serde::{Deserialize, Serialize};
use toml::Spanned;

/// A validation failure pinned to a position in a named source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.source_name, self.line, self.column, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Text of a config together with its name, for locating errors.
struct Source<'a> {
    name: &'a str,
    text: &'a str,
}

impl Source<'_> {
    fn error(&self, span: Range<usize>, message: impl Into<String>) -> ConfigError {
        let start = span.start.min(self.text.len());
        let before = &self.text[..start];
        let line = before.matches('\n').count() + 1;
        let column = start - before.rfind('\n').map_or(0, |p| p + 1) + 1;
        ConfigError {
            source_name: self.name.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn top(&self, message: impl Into<String>) -> ConfigError {
        self.error(0..0, message)
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, ConfigError> {
        toml::from_str(self.text).map_err(|e| {
            let span = e.span().unwrap_or(0..0);
            self.error(span, e.message().to_string())
        })
    }
}

/// Scalars accepted where a number is expected. Strings hold exact rationals
/// such as `"3/4"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Scalar::Int(k) => Ok(Rational::from_integer((*k).into())),
            Scalar::Float(x) => Rational::from_float(*x).ok_or_else(|| format!("{x} is not finite")),
            Scalar::Text(s) => rational_from_str(s),
        }
    }

    fn to_f64(&self) -> Result<f64, String> {
        match self {
            Scalar::Int(k) => Ok(*k as f64),
            Scalar::Float(x) if x.is_finite() => Ok(*x),
            Scalar::Float(x) => Err(format!("{x} is not finite")),
            Scalar::Text(s) => {
                let r = rational_from_str(s)?;
                Ok(num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN))
            }
        }
    }
}

type RawMatrix = Vec<Vec<[Scalar; 2]>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    group: Option<RawGroup>,
    action: Option<RawAction>,
    vector: Option<RawVector>,
    estimation: Option<RawEstimation>,
    flow: Option<RawFlow>,
    #[serde(default)]
    invariant: Vec<RawInvariant>,
    lie_pair: Option<RawLiePair>,
    gelfand: Option<RawGelfand>,
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    kind: Spanned<String>,
    n: Option<Spanned<i64>>,
    representation: Option<Spanned<String>>,
    lie_basis_file: Option<Spanned<String>>,
    word_length: Option<Spanned<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    weights: Spanned<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVector {
    v: Spanned<Vec<[Scalar; 2]>>,
    exact: Option<Spanned<bool>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEstimation {
    samples: Option<Spanned<i64>>,
    seed: Option<Spanned<i64>>,
    degree_bound: Option<Spanned<i64>>,
    monomial_cap: Option<Spanned<i64>>,
    force_monte_carlo: Option<bool>,
    nilcone_tolerance: Option<Spanned<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlow {
    max_iter: Option<Spanned<i64>>,
    zero_tol: Option<Spanned<f64>>,
    grad_tol: Option<Spanned<f64>>,
    armijo: Option<Spanned<f64>>,
    shrink: Option<Spanned<f64>>,
    initial_step: Option<Spanned<f64>>,
    min_step: Option<Spanned<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariant {
    label: Spanned<String>,
    trace_of_square: Option<Spanned<i64>>,
    terms: Option<Spanned<Vec<RawTerm>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    exponent: Vec<i64>,
    coeff: [Scalar; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLiePair {
    preset: Option<Spanned<String>>,
    n: Option<Spanned<i64>>,
    basis_file: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGelfand {
    family: Spanned<String>,
    max_label: Spanned<i64>,
    subgroup: Option<Spanned<String>>,
    threshold: Option<Spanned<f64>>,
    samples: Option<Spanned<i64>>,
    check_irreducibility: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    json: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasisFile {
    basis: Spanned<Vec<RawMatrix>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPairFile {
    g: Spanned<Vec<RawMatrix>>,
    h: Spanned<Vec<RawMatrix>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKindName {
    Torus,
    Unitary,
    SpecialUnitary,
    SpecialOrthogonal,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub kind: GroupKindName,
    pub n: Option<usize>,
    pub representation: Representation,
    pub lie_basis_file: Option<String>,
    pub word_length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorSpec {
    pub v: Vec<[Scalar; 2]>,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationSpec {
    pub samples: usize,
    pub seed: u64,
    pub degree_bound: u32,
    pub monomial_cap: usize,
    pub force_monte_carlo: bool,
    pub nilcone_tolerance: f64,
}

impl Default for EstimationSpec {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            degree_bound: 2,
            monomial_cap: DEFAULT_MONOMIAL_CAP,
            force_monte_carlo: false,
            nilcone_tolerance: 0.02,
        }
    }
}

impl EstimationSpec {
    pub fn estimation_config(&self) -> EstimationConfig {
        EstimationConfig {
            monomial_cap: self.monomial_cap,
            force_monte_carlo: self.force_monte_carlo,
            ..EstimationConfig::new(self.samples, self.seed)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSpec {
    pub max_iter: usize,
    pub zero_tol: f64,
    pub grad_tol: f64,
    pub armijo: f64,
    pub shrink: f64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for FlowSpec {
    fn default() -> Self {
        let o = FlowOptions::default();
        Self {
            max_iter: o.max_iter,
            zero_tol: o.zero_tol,
            grad_tol: o.grad_tol,
            armijo: o.step_rule.armijo,
            shrink: o.step_rule.shrink,
            initial_step: o.step_rule.initial_step,
            min_step: o.step_rule.min_step,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub exponent: Vec<u32>,
    pub coeff: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantSpec {
    pub label: String,
    pub trace_of_square: Option<usize>,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiePreset {
    So3So2,
    Su2Su2,
    TorusTrivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiePairSpec {
    pub preset: Option<LiePreset>,
    pub n: Option<usize>,
    pub basis_file: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GelfandFamily {
    So3,
    Su2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GelfandSubgroup {
    So2InSo3,
    CenterOfSu2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GelfandSpec {
    pub family: GelfandFamily,
    /// Largest `ℓ` for SO(3), largest `2j` for SU(2).
    pub max_label: u32,
    pub subgroup: GelfandSubgroup,
    pub threshold: f64,
    pub samples: Option<usize>,
    pub check_irreducibility: bool,
}

/// The validated configuration, echoed verbatim into every report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub group: Option<GroupSpec>,
    pub action: Option<Vec<Vec<i64>>>,
    pub vector: Option<VectorSpec>,
    pub estimation: EstimationSpec,
    pub flow: FlowSpec,
    pub invariants: Vec<InvariantSpec>,
    pub lie_pair: Option<LiePairSpec>,
    pub gelfand: Option<GelfandSpec>,
    pub json: Option<String>,
}

/// A config together with the objects it describes.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub torus: Option<TorusAction>,
    pub group: Option<CompactMatrixGroup>,
    /// Float coordinates of `v`.
    pub v: Option<Vec<Complex64>>,
    /// Exact coordinates of `v`, when every entry is an integer or a rational string.
    pub v_exact: Option<OrbitPoint>,
    pub invariants: Vec<NamedInvariant>,
    pub lie_pair: Option<LieSubalgebraPair>,
}

impl Experiment {
    pub fn flow_options(&self) -> FlowOptions {
        let f = &self.config.flow;
        FlowOptions {
            step_rule: Backtracking {
                armijo: f.armijo,
                shrink: f.shrink,
                initial_step: f.initial_step,
                min_step: f.min_step,
            },
            max_iter: f.max_iter,
            zero_tol: f.zero_tol,
            grad_tol: f.grad_tol,
            invariants: self.invariants.clone(),
        }
    }
}

fn count<T: TryFrom<i64>>(src: &Source, s: &Spanned<i64>, name: &str, min: i64) -> Result<T, ConfigError> {
    let v = *s.get_ref();
    if v < min {
        return Err(src.error(s.span(), format!("{name} must be at least {min}, got {v}")));
    }
    T::try_from(v).map_err(|_| src.error(s.span(), format!("{name} is out of range")))
}

fn positive(src: &Source, s: &Spanned<f64>, name: &str) -> Result<f64, ConfigError> {
    let v = *s.get_ref();
    if !(v.is_finite() && v > 0.0) {
        return Err(src.error(s.span(), format!("{name} must be a positive finite number, got {v}")));
    }
    Ok(v)
}

fn unit_interval(src: &Source, s: &Spanned<f64>, name: &str) -> Result<f64, ConfigError> {
    let v = positive(src, s, name)?;
    if v >= 1.0 {
        return Err(src.error(s.span(), format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(v)
}

fn choice<T: for<'de> Deserialize<'de>>(src: &Source, s: &Spanned<String>, what: &str, options: &str) -> Result<T, ConfigError> {
    serde_json::from_value(serde_json::Value::String(s.get_ref().clone()))
        .map_err(|_| src.error(s.span(), format!("unknown {what} {:?}; expected one of {options}", s.get_ref())))
}

fn matrices(src: &Source, raw: &Spanned<Vec<RawMatrix>>, what: &str) -> Result<Vec<CMatrix>, ConfigError> {
    let mut out = Vec::with_capacity(raw.get_ref().len());
    for (k, rows) in raw.get_ref().iter().enumerate() {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(src.error(raw.span(), format!("{what}[{k}] is not a non-empty square matrix")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            for [re, im] in row {
                let re = re.to_f64().map_err(|e| src.error(raw.span(), format!("{what}[{k}]: {e}")))?;
                let im = im.to_f64().map_err(|e| src.error(raw.span(), format!("{what}[{k}]: {e}")))?;
                entries.push(Complex64::new(re, im));
            }
        }
        out.push(CMatrix::from_row_slice(n, n, &entries));
    }
    if let Some(first) = out.first() {
        if out.iter().any(|m| m.nrows() != first.nrows()) {
            return Err(src.error(raw.span(), format!("{what} matrices differ in size")));
        }
    }
    Ok(out)
}

fn read_file(base: &Path, rel: &str) -> Result<(String, String), String> {
    let path = base.join(rel);
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Ok((path.display().to_string(), text))
}

/// Reads and validates a config file; relative file references resolve
/// against the file's directory.
pub fn load(path: &Path) -> Result<Experiment, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        source_name: path.display().to_string(),
        line: 0,
        column: 0,
        message: format!("cannot read config: {e}"),
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse(&path.display().to_string(), &text, &base)
}

/// Validates config text. `base` resolves `lie_basis_file` and `basis_file`.
pub fn parse(name: &str, text: &str, base: &Path) -> Result<Experiment, ConfigError> {
    let src = Source { name, text };
    let raw: RawConfig = src.parse()?;
    let mut config = ExperimentConfig::default();

    if let Some(e) = &raw.estimation {
        let est = &mut config.estimation;
        if let Some(s) = &e.samples {
            est.samples = count(&src, s, "samples", orbhull::measure_mult::MIN_SAMPLES as i64)?;
        }
        if let Some(s) = &e.seed {
            est.seed = count(&src, s, "seed", 0)?;
        }
        if let Some(s) = &e.degree_bound {
            est.degree_bound = count(&src, s, "degree_bound", 1)?;
        }
        if let Some(s) = &e.monomial_cap {
            est.monomial_cap = count(&src, s, "monomial_cap", 1)?;
        }
        if let Some(b) = e.force_monte_carlo {
            est.force_monte_carlo = b;
        }
        if let Some(s) = &e.nilcone_tolerance {
            est.nilcone_tolerance = positive(&src, s, "nilcone_tolerance")?;
        }
    }

    if let Some(f) = &raw.flow {
        let flow = &mut config.flow;
        if let Some(s) = &f.max_iter {
            flow.max_iter = count(&src, s, "max_iter", 1)?;
        }
        for (field, slot, name) in [
            (&f.zero_tol, &mut flow.zero_tol, "zero_tol"),
            (&f.grad_tol, &mut flow.grad_tol, "grad_tol"),
            (&f.initial_step, &mut flow.initial_step, "initial_step"),
            (&f.min_step, &mut flow.min_step, "min_step"),
        ] {
            if let Some(s) = field {
                *slot = positive(&src, s, name)?;
            }
        }
        for (field, slot, name) in [(&f.armijo, &mut flow.armijo, "armijo"), (&f.shrink, &mut flow.shrink, "shrink")] {
            if let Some(s) = field {
                *slot = unit_interval(&src, s, name)?;
            }
        }
    }

    let torus = match &raw.action {
        Some(a) => {
            let rows = a.weights.get_ref();
            if rows.is_empty() {
                return Err(src.error(a.weights.span(), "weight matrix is empty"));
            }
            let n = rows[0].len();
            if n == 0 || rows.iter().any(|r| r.len() != n) {
                return Err(src.error(a.weights.span(), "weight rows must be non-empty and of equal length"));
            }
            config.action = Some(rows.clone());
            let weights = rows.iter().cloned().map(WeightVector::new).collect();
            Some(TorusAction::new(n, weights).map_err(|e| src.error(a.weights.span(), e.to_string()))?)
        }
        None => None,
    };

    let group = match &raw.group {
        Some(g) => {
            let kind: GroupKindName = choice(
                &src,
                &g.kind,
                "group kind",
                "torus, unitary, special_unitary, special_orthogonal, custom",
            )?;
            let representation = match &g.representation {
                Some(r) => choice(&src, r, "representation", "defining, adjoint")?,
                None => Representation::Defining,
            };
            let n: Option<usize> = g.n.as_ref().map(|s| count(&src, s, "n", 1)).transpose()?;
            let word_length = match &g.word_length {
                Some(s) => count(&src, s, "word_length", 1)?,
                None => DEFAULT_WORD_LENGTH,
            };
            let need_n = || n.ok_or_else(|| src.error(g.kind.span(), format!("group kind {:?} requires n", g.kind.get_ref())));
            let built = match kind {
                GroupKindName::Torus => {
                    let t = torus
                        .clone()
                        .ok_or_else(|| src.error(g.kind.span(), "a torus group needs an [action] weights table"))?;
                    if representation != Representation::Defining {
                        return Err(src.error(g.kind.span(), "a torus acts through its weights; representation must be defining"));
                    }
                    CompactMatrixGroup::torus(t)
                }
                GroupKindName::Custom => {
                    let file = g
                        .lie_basis_file
                        .as_ref()
                        .ok_or_else(|| src.error(g.kind.span(), "a custom group needs lie_basis_file"))?;
                    let (fname, ftext) = read_file(base, file.get_ref()).map_err(|e| src.error(file.span(), e))?;
                    let fsrc = Source { name: &fname, text: &ftext };
                    let rb: RawBasisFile = fsrc.parse()?;
                    let basis = matrices(&fsrc, &rb.basis, "basis")?;
                    if basis.is_empty() {
                        return Err(fsrc.error(rb.basis.span(), "basis is empty"));
                    }
                    let kind = GroupKind::Custom {
                        lie_basis: basis,
                        word_length,
                    };
                    CompactMatrixGroup::new(kind, representation).map_err(|e| fsrc.error(rb.basis.span(), e.to_string()))?
                }
                GroupKindName::Unitary => build(&src, &g.kind, GroupKind::Unitary(need_n()?), representation)?,
                GroupKindName::SpecialUnitary => build(&src, &g.kind, GroupKind::SpecialUnitary(need_n()?), representation)?,
                GroupKindName::SpecialOrthogonal => {
                    build(&src, &g.kind, GroupKind::SpecialOrthogonal(need_n()?), representation)?
                }
            };
            config.group = Some(GroupSpec {
                kind,
                n,
                representation,
                lie_basis_file: g.lie_basis_file.as_ref().map(|s| s.get_ref().clone()),
                word_length,
            });
            Some(built)
        }
        None => torus.clone().map(CompactMatrixGroup::torus),
    };

    let (v, v_exact) = match &raw.vector {
        Some(rv) => {
            let entries = rv.v.get_ref();
            if entries.is_empty() {
                return Err(src.error(rv.v.span(), "vector v is empty"));
            }
            let mut float = Vec::with_capacity(entries.len());
            for [re, im] in entries {
                let re = re.to_f64().map_err(|e| src.error(rv.v.span(), e))?;
                let im = im.to_f64().map_err(|e| src.error(rv.v.span(), e))?;
                float.push(Complex64::new(re, im));
            }
            let all_exact = entries.iter().flatten().all(|s| !matches!(s, Scalar::Float(_)));
            let exact = rv.exact.as_ref().map_or(all_exact, |s| *s.get_ref());
            let exact_point = if exact {
                let mut coords = Vec::with_capacity(entries.len());
                for [re, im] in entries {
                    let re = re.to_rational().map_err(|e| src.error(rv.v.span(), e))?;
                    let im = im.to_rational().map_err(|e| src.error(rv.v.span(), e))?;
                    coords.push(GaussianRational::new(re, im));
                }
                Some(OrbitPoint::Exact(coords))
            } else {
                None
            };
            if let Some(g) = &group {
                if g.rep_dim() != float.len() {
                    return Err(src.error(
                        rv.v.span(),
                        format!("v has {} coordinates but the representation has dimension {}", float.len(), g.rep_dim()),
                    ));
                }
            }
            config.vector = Some(VectorSpec {
                v: entries.clone(),
                exact,
            });
            (Some(float), exact_point)
        }
        None => (None, None),
    };

    let mut invariants = Vec::with_capacity(raw.invariant.len());
    for inv in &raw.invariant {
        let label = inv.label.get_ref().clone();
        let (poly, spec) = match (&inv.trace_of_square, &inv.terms) {
            (Some(n), None) => {
                let n: usize = count(&src, n, "trace_of_square", 1)?;
                (
                    Polynomial::trace_of_square(n),
                    InvariantSpec {
                        label: label.clone(),
                        trace_of_square: Some(n),
                        terms: Vec::new(),
                    },
                )
            }
            (None, Some(terms)) => {
                let m = v.as_ref().map(Vec::len).or_else(|| terms.get_ref().first().map(|t| t.exponent.len()));
                let mut poly = Polynomial::zero(m.unwrap_or(0));
                let mut specs = Vec::new();
                for t in terms.get_ref() {
                    let exponent: Vec<u32> = t
                        .exponent
                        .iter()
                        .map(|&e| u32::try_from(e))
                        .collect::<Result<_, _>>()
                        .map_err(|_| src.error(terms.span(), "exponents must be non-negative"))?;
                    let re = t.coeff[0].to_f64().map_err(|e| src.error(terms.span(), e))?;
                    let im = t.coeff[1].to_f64().map_err(|e| src.error(terms.span(), e))?;
                    poly.add_term(exponent.clone(), Complex64::new(re, im))
                        .map_err(|e| src.error(terms.span(), e.to_string()))?;
                    specs.push(TermSpec {
                        exponent,
                        coeff: [re, im],
                    });
                }
                (
                    poly,
                    InvariantSpec {
                        label: label.clone(),
                        trace_of_square: None,
                        terms: specs,
                    },
                )
            }
            _ => {
                return Err(src.error(inv.label.span(), "an invariant needs exactly one of trace_of_square or terms"));
            }
        };
        if let Some(v) = &v {
            if poly.num_vars() != v.len() {
                return Err(src.error(
                    inv.label.span(),
                    format!("invariant {label:?} has {} variables but v has {}", poly.num_vars(), v.len()),
                ));
            }
        }
        config.invariants.push(spec);
        invariants.push(NamedInvariant { label, polynomial: poly });
    }

    let lie_pair = match &raw.lie_pair {
        Some(lp) => {
            let n: Option<usize> = lp.n.as_ref().map(|s| count(&src, s, "n", 1)).transpose()?;
            let (pair, preset) = match (&lp.preset, &lp.basis_file) {
                (Some(p), None) => {
                    let preset: LiePreset = choice(&src, p, "lie_pair preset", "so3_so2, su2_su2, torus_trivial")?;
                    let pair = match preset {
                        LiePreset::So3So2 => LieSubalgebraPair::so3_so2(),
                        LiePreset::Su2Su2 => LieSubalgebraPair::su2_su2(),
                        LiePreset::TorusTrivial => LieSubalgebraPair::torus_trivial(n.unwrap_or(1))
                            .map_err(|e| src.error(p.span(), e.to_string()))?,
                    };
                    (pair, Some(preset))
                }
                (None, Some(file)) => {
                    let (fname, ftext) = read_file(base, file.get_ref()).map_err(|e| src.error(file.span(), e))?;
                    let fsrc = Source { name: &fname, text: &ftext };
                    let rp: RawPairFile = fsrc.parse()?;
                    let g = matrices(&fsrc, &rp.g, "g")?;
                    let h = matrices(&fsrc, &rp.h, "h")?;
                    let pair = LieSubalgebraPair::new(g, h).map_err(|e| fsrc.error(rp.g.span(), e.to_string()))?;
                    (pair, None)
                }
                _ => return Err(src.top("[lie_pair] needs exactly one of preset or basis_file")),
            };
            config.lie_pair = Some(LiePairSpec {
                preset,
                n,
                basis_file: lp.basis_file.as_ref().map(|s| s.get_ref().clone()),
            });
            Some(pair)
        }
        None => None,
    };

    if let Some(gf) = &raw.gelfand {
        let family: GelfandFamily = choice(&src, &gf.family, "gelfand family", "so3, su2")?;
        let max_label: u32 = count(&src, &gf.max_label, "max_label", 0)?;
        let subgroup = match &gf.subgroup {
            Some(s) => choice(&src, s, "gelfand subgroup", "so2_in_so3, center_of_su2")?,
            None => match family {
                GelfandFamily::So3 => GelfandSubgroup::So2InSo3,
                GelfandFamily::Su2 => GelfandSubgroup::CenterOfSu2,
            },
        };
        let compatible = matches!(
            (family, subgroup),
            (GelfandFamily::So3, GelfandSubgroup::So2InSo3) | (GelfandFamily::Su2, GelfandSubgroup::CenterOfSu2)
        );
        if !compatible {
            return Err(src.error(gf.family.span(), "subgroup does not lie in the family's group"));
        }
        let threshold = match &gf.threshold {
            Some(s) => positive(&src, s, "threshold")?,
            None => 0.05,
        };
        let samples = gf
            .samples
            .as_ref()
            .map(|s| count(&src, s, "samples", orbhull::measure_mult::MIN_SAMPLES as i64))
            .transpose()?;
        config.gelfand = Some(GelfandSpec {
            family,
            max_label,
            subgroup,
            threshold,
            samples,
            check_irreducibility: gf.check_irreducibility.unwrap_or(false),
        });
    }

    config.json = raw.output.and_then(|o| o.json);
    Ok(Experiment {
        config,
        torus,
        group,
        v,
        v_exact,
        invariants,
        lie_pair,
    })
}

fn build(src: &Source, at: &Spanned<String>, kind: GroupKind, rep: Representation) -> Result<CompactMatrixGroup, ConfigError> {
    CompactMatrixGroup::new(kind, rep).map_err(|e| src.error(at.span(), e.to_string()))
}
