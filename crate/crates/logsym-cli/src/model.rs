//! Model file: the JSON description of an arrangement plus optional symbolic
//! data (ω, π, abstract decomposition, cosymplectic block, stratum query,
//! oracle settings). `ModelFile` is the raw serde shape; `Model` is the
//! validated, parsed result the commands run on.

use std::collections::BTreeMap;

use logsym_core::arrangement::{Hypersurface, StratumEntry};
use logsym_core::graded::BettiVector;
use logsym_core::oracle::DEFAULT_COLUMN_CAP;
use logsym_core::symcalc::{LogForm, Multivector, Rat};
use logsym_core::{Arrangement, ClassDecomposition, Parity, Role};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::expr;

/// Anything wrong with the invocation or the model file (exit code 1).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

fn bad(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Torus,
    Product,
    Custom,
}

/// Raw JSON shape of a model file. Unknown fields are rejected so typos
/// surface as input errors instead of silently ignored settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divisors: Vec<DivisorDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<ModelFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold_betti: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cosymplectic: Option<CosymplecticDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratum: Option<StratumQueryDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleDecl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumDecl {
    pub subset: Vec<String>,
    /// Total Betti numbers of the stratum, all components together.
    pub betti: Vec<u64>,
    #[serde(default = "one")]
    pub components: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDecl {
    /// Whether the pole-free class is nonzero.
    #[serde(default)]
    pub a: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Vec<BDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c: Vec<CDecl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BDecl {
    pub hypersurface: String,
    #[serde(default = "tru")]
    pub nonzero: bool,
    /// Per-partner flag: does b restrict to zero on Z ∩ Z_other?
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub restriction_vanishes: BTreeMap<String, bool>,
}

fn tru() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CDecl {
    pub pair: (String, String),
    /// One rational per intersection component, as strings like "1" or "-1/2".
    pub scalars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosymplecticDecl {
    pub alphas: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Dimension the structure is checked against; defaults to the model's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumQueryDecl {
    pub subset: Vec<String>,
    /// One of "0" / "pi" per subset member, picking the component.
    pub parities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_columns: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub de_rham_cutoff: Option<i64>,
}

/// Validated model: arrangement built, expressions parsed and degree-checked.
#[derive(Debug)]
pub struct Model {
    pub label: String,
    pub file: ModelFile,
    pub names: Vec<String>,
    pub arrangement: Arrangement,
    pub omega: Option<LogForm>,
    pub pi: Option<Multivector>,
    pub decomposition: Option<ClassDecomposition>,
    pub cosymplectic: Option<CosymSpec>,
    pub stratum_query: Option<StratumSpec>,
    pub oracle: OracleSettings,
}

#[derive(Debug)]
pub struct CosymSpec {
    pub alphas: Vec<LogForm>,
    pub beta: LogForm,
    pub dim: usize,
}

#[derive(Debug)]
pub struct StratumSpec {
    pub subset: Vec<String>,
    pub parities: Vec<Parity>,
}

#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub cutoffs: Vec<i64>,
    pub degrees: Vec<usize>,
    pub max_columns: usize,
    pub de_rham_cutoff: i64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            cutoffs: vec![2, 3],
            degrees: vec![0, 1],
            max_columns: DEFAULT_COLUMN_CAP,
            de_rham_cutoff: 1,
        }
    }
}

/// Parse a rational written as `p` or `p/q` (optional leading minus).
pub fn parse_rat(s: &str) -> Result<Rat, InputError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| bad(format!("invalid rational `{s}`")))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| bad(format!("invalid rational `{s}`")))?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(bad(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(num, den))
}

fn parse_parity(s: &str) -> Result<Parity, InputError> {
    match s {
        "0" => Ok(Parity::Zero),
        "pi" | "π" => Ok(Parity::Pi),
        other => Err(bad(format!(
            "parity must be \"0\" or \"pi\", got `{other}`"
        ))),
    }
}

fn check_names(names: &[String]) -> Result<(), InputError> {
    for m in names {
        let mut cs = m.chars();
        let head_ok = cs.next().is_some_and(|c| c.is_alphabetic() || c == '_');
        if !head_ok || !m.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad(format!("invalid coordinate name `{m}`")));
        }
        if m == "sin" || m == "cos" {
            return Err(bad(format!("coordinate name `{m}` is reserved")));
        }
    }
    for m in names {
        if let Some(rest) = m.strip_prefix('d') {
            if names.iter().any(|o| o == rest) {
                return Err(bad(format!(
                    "coordinate name `{m}` collides with the differential of `{rest}`"
                )));
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for m in names {
        if !seen.insert(m) {
            return Err(bad(format!("duplicate coordinate name `{m}`")));
        }
    }
    Ok(())
}

fn core(e: logsym_core::Error) -> InputError {
    bad(e.to_string())
}

/// Build just the arrangement (recursive for products).
fn build_arrangement(mf: &ModelFile, names: &[String]) -> Result<Arrangement, InputError> {
    match mf.model {
        ModelKind::Torus => {
            let n = mf
                .dimension
                .ok_or_else(|| bad("torus models need a dimension"))?;
            let mut divisors = Vec::new();
            for d in &mf.divisors {
                let c = d
                    .coordinate
                    .ok_or_else(|| bad("torus divisors need a coordinate"))?;
                if c >= n {
                    return Err(bad(format!(
                        "divisor coordinate {c} out of range for dimension {n}"
                    )));
                }
                let id = d.id.clone().unwrap_or_else(|| format!("Z{}", names[c]));
                let role = match &d.role {
                    None => None,
                    Some(r) => Some(
                        Role::parse(r).ok_or_else(|| bad(format!("unknown role label `{r}`")))?,
                    ),
                };
                divisors.push((id, c, role));
            }
            Arrangement::torus_model_named(n, &divisors, logsym_core::arrangement::MAX_DIVISORS)
                .map_err(core)
        }
        ModelKind::Product => {
            if mf.factors.len() < 2 {
                return Err(bad("product models need at least two factors"));
            }
            let mut acc: Option<Arrangement> = None;
            for f in &mf.factors {
                if f.omega.is_some()
                    || f.pi.is_some()
                    || f.decomposition.is_some()
                    || f.cosymplectic.is_some()
                    || f.stratum.is_some()
                    || f.oracle.is_some()
                {
                    return Err(bad("product factors are arrangement-only"));
                }
                let fnames = factor_names(f)?;
                let farr = build_arrangement(f, &fnames)?;
                acc = Some(match acc {
                    None => farr,
                    Some(a) => Arrangement::product(&a, &farr).map_err(core)?,
                });
            }
            Ok(acc.unwrap())
        }
        ModelKind::Custom => {
            let n = mf
                .dimension
                .ok_or_else(|| bad("custom models need a dimension"))?;
            let betti = mf
                .manifold_betti
                .as_ref()
                .ok_or_else(|| bad("custom models need manifold_betti"))?;
            let hypersurfaces = mf
                .divisors
                .iter()
                .map(|d| {
                    let id =
                        d.id.clone()
                            .ok_or_else(|| bad("custom divisors need an id"))?;
                    let role = match &d.role {
                        None => None,
                        Some(r) => Some(
                            Role::parse(r)
                                .ok_or_else(|| bad(format!("unknown role label `{r}`")))?,
                        ),
                    };
                    Ok(Hypersurface {
                        id,
                        role,
                        coordinate: d.coordinate,
                    })
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            let table = mf
                .strata
                .iter()
                .map(|s| StratumEntry {
                    subset: s.subset.clone(),
                    betti: BettiVector::from_u64s(&s.betti),
                    components: s.components,
                })
                .collect();
            Arrangement::custom_arrangement(BettiVector::from_u64s(betti), n, hypersurfaces, table)
                .map_err(core)
        }
    }
}

fn factor_names(mf: &ModelFile) -> Result<Vec<String>, InputError> {
    let n = match mf.model {
        ModelKind::Product => 0, // nested products name nothing themselves
        _ => mf.dimension.unwrap_or(0),
    };
    Ok(default_names(mf.coordinates.clone(), n))
}

fn default_names(coords: Option<Vec<String>>, n: usize) -> Vec<String> {
    coords.unwrap_or_else(|| (0..n).map(|i| format!("θ{i}")).collect())
}

impl Model {
    pub fn build(file: ModelFile, label: String) -> Result<Model, InputError> {
        if file.model != ModelKind::Product && !file.factors.is_empty() {
            return Err(bad("factors are only valid on product models"));
        }
        if file.model != ModelKind::Custom
            && (file.manifold_betti.is_some() || !file.strata.is_empty())
        {
            return Err(bad("manifold_betti/strata are only valid on custom models"));
        }
        if file.model == ModelKind::Product {
            if file.dimension.is_some() || file.coordinates.is_some() || !file.divisors.is_empty() {
                return Err(bad(
                    "product models take their shape from factors; drop dimension/coordinates/divisors",
                ));
            }
            if file.omega.is_some()
                || file.pi.is_some()
                || file.cosymplectic.is_some()
                || file.stratum.is_some()
            {
                return Err(bad(
                    "symbolic blocks are not supported on product models; use a torus or custom model",
                ));
            }
        }
        if file.omega.is_some() && file.decomposition.is_some() {
            return Err(bad(
                "provide either omega or an abstract decomposition, not both",
            ));
        }

        let names = match file.model {
            ModelKind::Product => Vec::new(),
            _ => {
                let n = file.dimension.ok_or_else(|| match file.model {
                    ModelKind::Torus => bad("torus models need a dimension"),
                    _ => bad("custom models need a dimension"),
                })?;
                let names = default_names(file.coordinates.clone(), n);
                if names.len() != n {
                    return Err(bad(format!(
                        "{} coordinate names for dimension {n}",
                        names.len()
                    )));
                }
                check_names(&names)?;
                names
            }
        };

        let arrangement = build_arrangement(&file, &names)?;
        let n = arrangement.dim();

        let parse_form_field = |field: &str, src: &str| {
            expr::parse_form(src, &names).map_err(|e| bad(format!("{field}: {e}")))
        };
        let want_degree = |field: &str, f: LogForm, want: usize| {
            if f.degree() == want {
                Ok(f)
            } else if f.is_zero() && f.degree() == 0 {
                Ok(LogForm::zero(n, want))
            } else {
                Err(bad(format!(
                    "{field} must be a {want}-form, got degree {}",
                    f.degree()
                )))
            }
        };

        let omega = match &file.omega {
            None => None,
            Some(src) => Some(want_degree("omega", parse_form_field("omega", src)?, 2)?),
        };
        let pi = match &file.pi {
            None => None,
            Some(src) => {
                let m =
                    expr::parse_multivector(src, &names).map_err(|e| bad(format!("pi: {e}")))?;
                if m.degree() == 2 {
                    Some(m)
                } else if m.is_zero() && m.degree() == 0 {
                    Some(Multivector::zero(n, 2))
                } else {
                    return Err(bad(format!(
                        "pi must be a bivector, got degree {}",
                        m.degree()
                    )));
                }
            }
        };

        let decomposition = match &file.decomposition {
            None => None,
            Some(decl) => {
                let mut dec = ClassDecomposition::new();
                dec.a.nonzero = decl.a;
                for b in &decl.b {
                    dec = dec.with_b(&b.hypersurface, b.nonzero);
                    for (other, vanishes) in &b.restriction_vanishes {
                        dec = dec.with_restriction(&b.hypersurface, other, *vanishes);
                    }
                }
                for c in &decl.c {
                    let scalars = c
                        .scalars
                        .iter()
                        .map(|s| parse_rat(s))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| bad(format!("decomposition.c scalars: {e}")))?;
                    dec = dec.with_c(&c.pair.0, &c.pair.1, scalars);
                }
                dec.validate(&arrangement).map_err(core)?;
                Some(dec)
            }
        };

        let cosymplectic = match &file.cosymplectic {
            None => None,
            Some(decl) => {
                if decl.alphas.is_empty() {
                    return Err(bad("cosymplectic.alphas must not be empty"));
                }
                let mut alphas = Vec::new();
                for (i, src) in decl.alphas.iter().enumerate() {
                    let field = format!("cosymplectic.alphas[{i}]");
                    alphas.push(want_degree(&field, parse_form_field(&field, src)?, 1)?);
                }
                let beta = match &decl.beta {
                    None => LogForm::zero(n, 2),
                    Some(src) => want_degree(
                        "cosymplectic.beta",
                        parse_form_field("cosymplectic.beta", src)?,
                        2,
                    )?,
                };
                CosymSpec {
                    alphas,
                    beta,
                    dim: decl.dimension.unwrap_or(n),
                }
                .into()
            }
        };

        let stratum_query = match &file.stratum {
            None => None,
            Some(decl) => {
                let parities = decl
                    .parities
                    .iter()
                    .map(|s| parse_parity(s))
                    .collect::<Result<Vec<_>, _>>()?;
                if parities.len() != decl.subset.len() {
                    return Err(bad(format!(
                        "stratum needs one parity per subset member ({} vs {})",
                        decl.parities.len(),
                        decl.subset.len()
                    )));
                }
                Some(StratumSpec {
                    subset: decl.subset.clone(),
                    parities,
                })
            }
        };

        let mut oracle = OracleSettings::default();
        if let Some(decl) = &file.oracle {
            if let Some(c) = &decl.cutoffs {
                if c.is_empty() {
                    return Err(bad("oracle.cutoffs must not be empty"));
                }
                oracle.cutoffs = c.clone();
            }
            if let Some(d) = &decl.degrees {
                oracle.degrees = d.clone();
            }
            if let Some(m) = decl.max_columns {
                oracle.max_columns = m;
            }
            if let Some(c) = decl.de_rham_cutoff {
                oracle.de_rham_cutoff = c;
            }
        }

        Ok(Model {
            label,
            file,
            names,
            arrangement,
            omega,
            pi,
            decomposition,
            cosymplectic,
            stratum_query,
            oracle,
        })
    }
}

/// Read and validate a model file from disk.
pub fn load(path: &std::path::Path) -> Result<Model, InputError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let file: ModelFile =
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".into());
    Model::build(file, label).map_err(|e| bad(format!("{}: {e}", path.display())))
}
