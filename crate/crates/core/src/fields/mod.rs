//! Real 1-forms and real vector fields, their Chern derivatives and the
//! residuals of the analytic, harmonic, Killing and Hermitian conditions.
//!
//! A real 1-form `ω = ω_α dz^α + conj(ω_α) dz̄^α` is stored through its (1,0)
//! components `ω_α`, a real vector field `ξ = ξ^α ∂_α + conj(ξ^α) ∂_{ᾱ}`
//! through `ξ^α`. The musical isomorphisms are `ξ_β = g_{βγ̄} conj(ξ^γ)` and
//! `ω^α = g^{αβ̄} conj(ω_β)`, so each field is carried with both index
//! positions and either can be read as "the form" or "the vector".

mod point;
mod residual;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ExprError, ModelError};
use crate::expr::{parse_expr, DerivativeTable, Expr};
use crate::jet::Jet;
use crate::manifold::{DerivativeMode, ManifoldModel};

pub use point::{frame_norm2_bilinear, frame_norm2_vector, norm2_11, norm2_20, FieldPoint};
pub use residual::{
    analytic_residual, analyze_field, field_grid, field_points, harmonic_residual,
    killing_residual, lie_connection_residual, residual_set, FieldAnalysis, HarmonicResidual,
    KillingResidual, LieResidual, PointResiduals, Residual, ResidualSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Form,
    Vector,
}

/// Seeded random trigonometric polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigSpec {
    #[serde(default = "default_degree")]
    pub degree: u32,
    pub seed: u64,
    #[serde(default = "default_modes")]
    pub modes: usize,
}

fn default_degree() -> u32 {
    2
}

fn default_modes() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BuiltinField {
    Named(String),
    RandomTrig { random_trig: TrigSpec },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinField>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

/// A field as written in a run config: exactly one of `form` / `vector`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FieldSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<FieldSource>,
}

impl FieldSpec {
    pub fn builtin(kind: FieldKind, name: &str) -> FieldSpec {
        FieldSpec::from_source(
            kind,
            FieldSource {
                components: None,
                builtin: Some(BuiltinField::Named(name.to_string())),
                params: BTreeMap::new(),
            },
        )
    }

    pub fn random(kind: FieldKind, degree: u32, seed: u64) -> FieldSpec {
        FieldSpec::from_source(
            kind,
            FieldSource {
                components: None,
                builtin: Some(BuiltinField::RandomTrig {
                    random_trig: TrigSpec {
                        degree,
                        seed,
                        modes: default_modes(),
                    },
                }),
                params: BTreeMap::new(),
            },
        )
    }

    pub fn components(kind: FieldKind, components: &[&str]) -> FieldSpec {
        FieldSpec::from_source(
            kind,
            FieldSource {
                components: Some(components.iter().map(|s| s.to_string()).collect()),
                builtin: None,
                params: BTreeMap::new(),
            },
        )
    }

    fn from_source(kind: FieldKind, source: FieldSource) -> FieldSpec {
        let (form, vector) = match kind {
            FieldKind::Form => (Some(source), None),
            FieldKind::Vector => (None, Some(source)),
        };
        FieldSpec {
            name: None,
            form,
            vector,
        }
    }

    pub fn named(mut self, name: &str) -> FieldSpec {
        self.name = Some(name.to_string());
        self
    }

    pub fn kind(&self) -> Result<(FieldKind, &FieldSource), ModelError> {
        match (&self.form, &self.vector) {
            (Some(s), None) => Ok((FieldKind::Form, s)),
            (None, Some(s)) => Ok((FieldKind::Vector, s)),
            _ => Err(ModelError::Config(
                "a field needs exactly one of 'form' or 'vector'".into(),
            )),
        }
    }

    /// Short label used when the spec carries no name.
    pub fn label(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        let Ok((kind, source)) = self.kind() else {
            return "field".into();
        };
        let k = match kind {
            FieldKind::Form => "form",
            FieldKind::Vector => "vector",
        };
        match &source.builtin {
            Some(BuiltinField::Named(name)) => format!("{k}:{name}"),
            Some(BuiltinField::RandomTrig { random_trig }) => format!(
                "{k}:random_trig(degree={}, seed={})",
                random_trig.degree, random_trig.seed
            ),
            None => format!("{k}:components"),
        }
    }
}

/// A real 1-form or vector field ready for evaluation.
#[derive(Clone, Debug)]
pub struct Field {
    pub name: String,
    pub kind: FieldKind,
    pub spec: FieldSpec,
    table: DerivativeTable,
}

impl Field {
    pub fn new(
        name: &str,
        kind: FieldKind,
        n: usize,
        components: Vec<Expr>,
    ) -> Result<Field, ModelError> {
        if components.len() != n {
            return Err(ModelError::Config(format!(
                "field '{name}' needs {n} components, got {}",
                components.len()
            )));
        }
        for (index, e) in components.iter().enumerate() {
            if let Some(p) = e.parameters().into_iter().next() {
                return Err(ModelError::FieldComponent {
                    index,
                    source: ExprError::UnboundParameter(p),
                });
            }
        }
        let texts: Vec<String> = components.iter().map(|e| e.to_string()).collect();
        let texts: Vec<&str> = texts.iter().map(String::as_str).collect();
        let spec = FieldSpec::components(kind, &texts).named(name);
        Ok(Field {
            name: name.to_string(),
            kind,
            spec,
            table: DerivativeTable::new(n, components),
        })
    }

    pub fn from_spec(spec: &FieldSpec, model: &ManifoldModel) -> Result<Field, ModelError> {
        let n = model.dimension();
        let (kind, source) = spec.kind()?;
        let components = match (&source.components, &source.builtin) {
            (Some(texts), None) => {
                if texts.len() != n {
                    return Err(ModelError::Config(format!(
                        "field needs {n} components, got {}",
                        texts.len()
                    )));
                }
                texts
                    .iter()
                    .enumerate()
                    .map(|(index, t)| {
                        parse_expr(t, n)
                            .and_then(|e| e.bind(&source.params))
                            .map_err(|source| ModelError::FieldComponent { index, source })
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            (None, Some(BuiltinField::Named(name))) => named_field(model, kind, name)?,
            (None, Some(BuiltinField::RandomTrig { random_trig })) => {
                random_trig_field(model, kind, random_trig)
            }
            _ => {
                return Err(ModelError::Config(
                    "a field source needs exactly one of 'components' or 'builtin'".into(),
                ))
            }
        };
        let mut field = Field::new(&spec.label(), kind, n, components)?;
        field.spec = spec.clone();
        Ok(field)
    }

    pub fn dimension(&self) -> usize {
        self.table.dimension()
    }

    pub fn components(&self) -> &[Expr] {
        self.table.exprs()
    }

    /// Complex coordinates the components depend on.
    pub fn active(&self) -> &[bool] {
        self.table.active()
    }

    /// Second-order jets of the stored components.
    pub fn jets(&self, p: &[Complex64], mode: DerivativeMode) -> Result<Vec<Jet>, ModelError> {
        match mode.fd_options() {
            None => Ok(self.table.jets(p)?),
            Some(opts) => self.table.fd_jets(p, &opts),
        }
    }
}

fn frame_row(rows: &[Expr], n: usize, i: usize, scale: Complex64) -> Vec<Expr> {
    (0..n).map(|a| rows[i * n + a].mul(&Expr::constant(scale))).collect()
}

fn named_field(model: &ManifoldModel, kind: FieldKind, name: &str) -> Result<Vec<Expr>, ModelError> {
    let n = model.dimension();
    let one = Complex64::new(1.0, 0.0);
    let (frame_prefix, coframe_prefix) = &model.frame.names;
    let index = |prefix: &str| -> Option<usize> {
        let k: usize = name.strip_prefix(prefix)?.parse().ok()?;
        (1..=n).contains(&k).then_some(k - 1)
    };
    let known = || match kind {
        FieldKind::Form => format!("{coframe_prefix}1..{coframe_prefix}{n}, dx1..dx{n}, dy1..dy{n}"),
        FieldKind::Vector => format!("{frame_prefix}1..{frame_prefix}{n}"),
    };
    let comps = match kind {
        FieldKind::Form => {
            if let Some(i) = index(coframe_prefix) {
                frame_row(&model.frame.coframe, n, i, one)
            } else if let Some(i) = index("dx") {
                unit(n, i, Complex64::new(0.5, 0.0))
            } else if let Some(i) = index("dy") {
                unit(n, i, Complex64::new(0.0, -0.5))
            } else {
                return Err(ModelError::Config(format!(
                    "unknown built-in form '{name}' (known: {})",
                    known()
                )));
            }
        }
        FieldKind::Vector => match index(frame_prefix) {
            Some(i) => frame_row(&model.frame.frame, n, i, one),
            None => {
                return Err(ModelError::Config(format!(
                    "unknown built-in vector field '{name}' (known: {})",
                    known()
                )))
            }
        },
    };
    Ok(comps)
}

fn unit(n: usize, i: usize, value: Complex64) -> Vec<Expr> {
    (0..n)
        .map(|a| if a == i { Expr::constant(value) } else { Expr::zero() })
        .collect()
}

/// `c₀ + Σ_m c_m exp(2πi k_m·x)` for seeded complex `c` and integer wave
/// vectors `k_m` over the real axes of the model's field coordinates.
fn random_trig_function<R: Rng>(
    rng: &mut R,
    axes: &[Expr],
    degree: u32,
    modes: usize,
) -> Expr {
    let coeff = |rng: &mut R| Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let mut f = Expr::constant(coeff(rng));
    let d = degree as i64;
    for _ in 0..modes {
        let k: Vec<i64> = loop {
            let k: Vec<i64> = axes.iter().map(|_| rng.gen_range(-d..=d)).collect();
            if d == 0 || k.iter().any(|&x| x != 0) {
                break k;
            }
        };
        let mut phase = Expr::zero();
        for (x, &kx) in axes.iter().zip(&k) {
            if kx != 0 {
                phase = phase.add(&x.mul(&Expr::real(kx as f64)));
            }
        }
        let wave = phase
            .mul(&Expr::constant(Complex64::new(0.0, 2.0 * std::f64::consts::PI)))
            .exp();
        f = f.add(&wave.mul(&Expr::constant(coeff(rng))));
    }
    f
}

fn random_trig_field(model: &ManifoldModel, kind: FieldKind, spec: &TrigSpec) -> Vec<Expr> {
    let n = model.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut axes = Vec::new();
    for k in 0..n {
        if model.field_coordinates[k] {
            axes.push(Expr::coord(k).re_part());
            axes.push(Expr::coord(k).im_part());
        }
    }
    let frame_coeffs: Vec<Expr> = (0..n)
        .map(|_| random_trig_function(&mut rng, &axes, spec.degree, spec.modes))
        .collect();
    let rows = match kind {
        FieldKind::Form => &model.frame.coframe,
        FieldKind::Vector => &model.frame.frame,
    };
    (0..n)
        .map(|a| {
            let mut acc = Expr::zero();
            for (i, f) in frame_coeffs.iter().enumerate() {
                acc = acc.add(&f.mul(&rows[i * n + a]));
            }
            acc
        })
        .collect()
}
