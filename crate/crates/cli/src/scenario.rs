//! Scenario files: JSON with every real number written as a decimal string,
//! so inputs are parsed at the working precision rather than through `f64`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use nikishin::measures::MeasureSpec;
use nikishin::nikishin::{validate_system, MultiIndex, NikishinSystem};
use nikishin::numkernel::{parse_real, set_precision, Cplx, Poly, Real, DEFAULT_PRECISION};
use nikishin::perturbation::{validate_perturbation, PerturbedSystem, Pole, RationalFunction};

use crate::error::{CliError, CliResult};

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

fn zero_str() -> String {
    "0".into()
}

fn one_str() -> String {
    "1".into()
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_precision")]
    pub precision: u32,
    pub measures: Vec<MeasureConfig>,
    #[serde(default)]
    pub touching: bool,
    /// One entry per generator; `null` or an empty list means `r_j = 0`.
    #[serde(default)]
    pub perturbations: Vec<Option<PerturbationConfig>>,
    #[serde(default)]
    pub indices: Option<IndexConfig>,
    /// Forced factors `t_0..t_m` of the type I forms.
    #[serde(default)]
    pub t: Vec<FactoredPoly>,
    /// Interpolation nodes of the type I forms (zeros of `w`).
    #[serde(default)]
    pub nodes: Vec<NodeConfig>,
    #[serde(default)]
    pub grid: Vec<PointConfig>,
    #[serde(default)]
    pub test_points: Vec<PointConfig>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Checks to run; empty selects every check of the subcommand.
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub sampler: Option<SamplerConfig>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    /// `lebesgue`, `arcsine` or `jacobi`.
    pub kind: String,
    pub alpha: String,
    pub beta: String,
    #[serde(default)]
    pub a_exp: Option<String>,
    #[serde(default)]
    pub b_exp: Option<String>,
    #[serde(default)]
    pub normalized: Option<bool>,
    #[serde(default)]
    pub sign: Option<i8>,
    #[serde(default)]
    pub scale: Option<String>,
    #[serde(default)]
    pub nq: Option<usize>,
    /// Ascending coefficients of a polynomial factor of the weight.
    #[serde(default)]
    pub factor: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationConfig {
    /// Ascending coefficients of the numerator.
    pub numerator: Vec<String>,
    pub poles: Vec<RootConfig>,
}

/// A point of the complex plane with a multiplicity (pole order, root
/// multiplicity). A non-real entry stands for itself only; its conjugate must
/// be listed as well where real coefficients are required.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RootConfig {
    pub re: String,
    #[serde(default = "zero_str")]
    pub im: String,
    #[serde(default = "one")]
    pub order: usize,
}

/// `leading * prod (z - root)^order`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FactoredPoly {
    #[serde(default = "one_str")]
    pub leading: String,
    #[serde(default)]
    pub roots: Vec<RootConfig>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub x: String,
    #[serde(default = "one")]
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    pub re: String,
    #[serde(default = "zero_str")]
    pub im: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IndexConfig {
    #[serde(default)]
    pub explicit: Vec<Vec<usize>>,
    #[serde(default)]
    pub diagonal: Option<DiagonalConfig>,
    /// Upper bound on `max n_j - min n_j` along the sequence.
    #[serde(default)]
    pub max_spread: Option<usize>,
}

/// Indices `(k + o_0, ..., k + o_l)` for `k = from..=to`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DiagonalConfig {
    pub from: usize,
    pub to: usize,
    #[serde(default)]
    pub offsets: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub index: Vec<usize>,
    pub interval: [String; 2],
    pub trials: usize,
    #[serde(default = "default_sign_grid")]
    pub grid: usize,
}

fn default_sign_grid() -> usize {
    400
}

/// Thresholds, as decimal strings like every other real input.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub orthogonality: String,
    /// Floor for the first unimposed moment (relative).
    pub unimposed: String,
    pub remainder: String,
    pub identity: String,
    /// Optional bound on the last sup-error of a convergence or ratio table.
    pub final_error: Option<String>,
    pub zero_eps: String,
    pub c1: Option<String>,
    pub inverse: String,
    pub inverse_order: usize,
    pub carleman_terms: usize,
    pub carleman_min_sum: Option<String>,
    pub sign_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orthogonality: "1e-20".into(),
            unimposed: "0".into(),
            remainder: "1e-10".into(),
            identity: "1e-10".into(),
            final_error: None,
            zero_eps: "0.1".into(),
            c1: None,
            inverse: "1e-25".into(),
            inverse_order: 20,
            carleman_terms: 50,
            carleman_min_sum: None,
            sign_grid: default_sign_grid(),
        }
    }
}

/// Thresholds parsed to `f64`; they only ever meet `f64` measurements.
#[derive(Clone, Debug)]
pub struct ParsedTolerances {
    pub orthogonality: f64,
    pub unimposed: f64,
    pub remainder: f64,
    pub identity: f64,
    pub final_error: Option<f64>,
    pub zero_eps: f64,
    pub c1: Option<f64>,
    pub inverse: f64,
    pub inverse_order: usize,
    pub carleman_terms: usize,
    pub carleman_min_sum: Option<f64>,
    pub sign_grid: usize,
}

fn parse_f64(field: &str, text: &str) -> CliResult<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|e| CliError::config(field, format!("cannot parse {text:?}: {e}")))
}

fn parse_dec(field: &str, text: &str) -> CliResult<Real> {
    parse_real(text).map_err(|e| CliError::config(field, e))
}

impl Tolerances {
    pub fn parse(&self) -> CliResult<ParsedTolerances> {
        let opt = |field: &str, v: &Option<String>| v.as_deref().map(|s| parse_f64(field, s)).transpose();
        Ok(ParsedTolerances {
            orthogonality: parse_f64("tolerances.orthogonality", &self.orthogonality)?,
            unimposed: parse_f64("tolerances.unimposed", &self.unimposed)?,
            remainder: parse_f64("tolerances.remainder", &self.remainder)?,
            identity: parse_f64("tolerances.identity", &self.identity)?,
            final_error: opt("tolerances.final_error", &self.final_error)?,
            zero_eps: parse_f64("tolerances.zero_eps", &self.zero_eps)?,
            c1: opt("tolerances.c1", &self.c1)?,
            inverse: parse_f64("tolerances.inverse", &self.inverse)?,
            inverse_order: self.inverse_order,
            carleman_terms: self.carleman_terms,
            carleman_min_sum: opt("tolerances.carleman_min_sum", &self.carleman_min_sum)?,
            sign_grid: self.sign_grid,
        })
    }
}

impl Scenario {
    pub fn load(path: &Path) -> CliResult<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Scenario::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Scenario> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("line {} column {}", e.line(), e.column()), e))
    }

    /// Sets the working precision and builds every numerical object.
    pub fn prepare(&self) -> CliResult<Prepared> {
        set_precision(self.precision).map_err(|e| CliError::config("precision", e))?;
        if self.measures.is_empty() {
            return Err(CliError::config("measures", "at least one measure is required"));
        }
        let specs = self
            .measures
            .iter()
            .enumerate()
            .map(|(i, m)| m.build(&format!("measures[{i}]")))
            .collect::<CliResult<Vec<_>>>()?;
        let system = validate_system(specs, self.touching).map_err(|e| CliError::config("measures", e))?;
        let m = system.m();
        let ps = self.perturbed(system)?;
        let t = if self.t.is_empty() {
            vec![Poly::one(); m + 1]
        } else {
            if self.t.len() != m + 1 {
                return Err(CliError::config("t", format!("needs {} factors, got {}", m + 1, self.t.len())));
            }
            self.t
                .iter()
                .enumerate()
                .map(|(i, f)| f.build(&format!("t[{i}]")))
                .collect::<CliResult<Vec<_>>>()?
        };
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| Ok((parse_dec(&format!("nodes[{i}].x"), &n.x)?, n.multiplicity)))
            .collect::<CliResult<Vec<_>>>()?;
        let points = |field: &str, pts: &[PointConfig]| {
            pts.iter()
                .enumerate()
                .map(|(i, p)| p.build(&format!("{field}[{i}]")))
                .collect::<CliResult<Vec<_>>>()
        };
        Ok(Prepared {
            grid: points("grid", &self.grid)?,
            test_points: points("test_points", &self.test_points)?,
            tol: self.tolerances.parse()?,
            ps,
            t,
            nodes,
        })
    }

    fn perturbed(&self, system: NikishinSystem) -> CliResult<PerturbedSystem> {
        let m = system.m();
        if self.perturbations.is_empty() {
            return Ok(PerturbedSystem::unperturbed(system));
        }
        if self.perturbations.len() != m {
            return Err(CliError::config(
                "perturbations",
                format!("needs {m} entries (one per generator), got {}", self.perturbations.len()),
            ));
        }
        let r = self
            .perturbations
            .iter()
            .enumerate()
            .map(|(i, p)| match p {
                None => Ok(RationalFunction::zero()),
                Some(cfg) => cfg.build(&format!("perturbations[{i}]")),
            })
            .collect::<CliResult<Vec<_>>>()?;
        let ps = PerturbedSystem::new(system, r).map_err(|e| CliError::config("perturbations", e))?;
        validate_perturbation(&ps, false).map_err(|e| CliError::config("perturbations", e))?;
        Ok(ps)
    }

    /// The index sequence with `len` components per index.
    pub fn lambda(&self, len: usize) -> CliResult<Vec<MultiIndex>> {
        let cfg = self
            .indices
            .as_ref()
            .ok_or_else(|| CliError::config("indices", "an index sequence is required"))?;
        let mut raw: Vec<Vec<usize>> = cfg.explicit.clone();
        if let Some(d) = &cfg.diagonal {
            let offsets = if d.offsets.is_empty() { vec![0; len] } else { d.offsets.clone() };
            if d.from > d.to {
                return Err(CliError::config("indices.diagonal", "`from` exceeds `to`"));
            }
            raw.extend((d.from..=d.to).map(|k| offsets.iter().map(|o| k + o).collect::<Vec<_>>()));
        }
        if raw.is_empty() {
            return Err(CliError::config("indices", "the index sequence is empty"));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(raw.len());
        for (i, comps) in raw.into_iter().enumerate() {
            let field = format!("indices[{i}]");
            if comps.len() != len {
                return Err(CliError::config(field, format!("needs {len} components, got {}", comps.len())));
            }
            if !seen.insert(comps.clone()) {
                return Err(CliError::config(field, format!("repeats {comps:?}")));
            }
            let n = MultiIndex::new(comps).map_err(|e| CliError::config(&field, e))?;
            if let Some(c) = cfg.max_spread {
                if n.spread() > c {
                    return Err(CliError::config(field, format!("spread of {n} exceeds max_spread {c}")));
                }
            }
            out.push(n);
        }
        Ok(out)
    }
}

impl MeasureConfig {
    fn build(&self, field: &str) -> CliResult<MeasureSpec> {
        let f = |name: &str| format!("{field}.{name}");
        let alpha = parse_dec(&f("alpha"), &self.alpha)?;
        let beta = parse_dec(&f("beta"), &self.beta)?;
        let exp = |name: &str, v: &Option<String>, default: &str| parse_dec(&f(name), v.as_deref().unwrap_or(default));
        let (default_exp, default_norm) = match self.kind.as_str() {
            "lebesgue" => ("0", false),
            "arcsine" => ("-0.5", true),
            "jacobi" => {
                if self.a_exp.is_none() || self.b_exp.is_none() {
                    return Err(CliError::config(f("kind"), "jacobi weights need a_exp and b_exp"));
                }
                ("0", false)
            }
            other => {
                return Err(CliError::config(f("kind"), format!("unknown kind {other:?} (lebesgue, arcsine, jacobi)")));
            }
        };
        if self.kind != "jacobi" && (self.a_exp.is_some() || self.b_exp.is_some()) {
            return Err(CliError::config(f("kind"), "exponents are only accepted for jacobi weights"));
        }
        let mut spec = MeasureSpec::jacobi(
            alpha,
            beta,
            exp("a_exp", &self.a_exp, default_exp)?,
            exp("b_exp", &self.b_exp, default_exp)?,
        )
        .normalized(self.normalized.unwrap_or(default_norm));
        if let Some(s) = self.sign {
            spec = spec.with_sign(s);
        }
        if let Some(s) = &self.scale {
            spec = spec.with_scale(parse_dec(&f("scale"), s)?);
        }
        if let Some(nq) = self.nq {
            spec = spec.with_nq(nq);
        }
        if let Some(c) = &self.factor {
            let coeffs = c.iter().map(|s| parse_dec(&f("factor"), s)).collect::<CliResult<Vec<_>>>()?;
            spec = spec.with_factor(Poly::new(coeffs));
        }
        spec.validate().map_err(|e| CliError::config(field, e))?;
        Ok(spec)
    }
}

impl RootConfig {
    fn build(&self, field: &str) -> CliResult<Pole> {
        if self.order == 0 {
            return Err(CliError::config(format!("{field}.order"), "must be at least 1"));
        }
        let re = parse_dec(&format!("{field}.re"), &self.re)?;
        let im = parse_dec(&format!("{field}.im"), &self.im)?;
        Ok(Pole {
            root: Cplx::with_val(nikishin::numkernel::precision(), (re, im)),
            order: self.order,
        })
    }
}

impl PerturbationConfig {
    fn build(&self, field: &str) -> CliResult<RationalFunction> {
        if self.poles.is_empty() && self.numerator.iter().all(|c| c.trim() == "0") {
            return Ok(RationalFunction::zero());
        }
        let v = self
            .numerator
            .iter()
            .map(|c| parse_dec(&format!("{field}.numerator"), c))
            .collect::<CliResult<Vec<_>>>()?;
        let poles = self
            .poles
            .iter()
            .enumerate()
            .map(|(i, p)| p.build(&format!("{field}.poles[{i}]")))
            .collect::<CliResult<Vec<_>>>()?;
        RationalFunction::from_factored(Poly::new(v), poles).map_err(|e| CliError::config(field, e))
    }
}

impl FactoredPoly {
    fn build(&self, field: &str) -> CliResult<Poly> {
        let lead = parse_dec(&format!("{field}.leading"), &self.leading)?;
        if lead.is_zero() {
            return Err(CliError::config(format!("{field}.leading"), "must be nonzero"));
        }
        let mut p = Poly::constant(lead);
        for (i, r) in self.roots.iter().enumerate() {
            let pole = r.build(&format!("{field}.roots[{i}]"))?;
            if !pole.is_real() {
                return Err(CliError::config(
                    format!("{field}.roots[{i}]"),
                    "forced factors must have real roots",
                ));
            }
            let lin = Poly::from_real_roots(&[pole.root.real().clone()]);
            for _ in 0..pole.order {
                p = &p * &lin;
            }
        }
        Ok(p)
    }
}

impl PointConfig {
    fn build(&self, field: &str) -> CliResult<Cplx> {
        let re = parse_dec(&format!("{field}.re"), &self.re)?;
        let im = parse_dec(&format!("{field}.im"), &self.im)?;
        Ok(Cplx::with_val(nikishin::numkernel::precision(), (re, im)))
    }
}

/// Numerical objects built from a scenario.
pub struct Prepared {
    pub ps: PerturbedSystem,
    pub t: Vec<Poly>,
    pub nodes: Vec<(Real, usize)>,
    pub grid: Vec<Cplx>,
    pub test_points: Vec<Cplx>,
    pub tol: ParsedTolerances,
}
