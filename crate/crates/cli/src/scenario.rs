//! Scenario schema: JSON descriptions of a generator or a lattice model plus
//! run parameters, validated with diagnostics that name the failing field.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use qds_core::generators::{
    commutator_derivation, lindblad_generator, squared_min_length_weights, weyl_damping_generator,
};
use qds_core::json::{matrix_from_data, MatrixData};
use qds_core::lattice::Interaction;
use qds_core::{Algebra, AlgebraElement, C64, Element, Map, StateF64};

use crate::CliError;

/// A complete run description. Exactly one of `generator` and `lattice` is
/// present; the seed is always materialized so reruns are reproducible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default)]
    pub run: RunParams,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    /// "commutator", "lindblad", "weyl", or "matrix" (a raw superoperator in
    /// the column-stacked element basis, for maps outside the structured
    /// families, e.g. transpose − identity).
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<MatrixData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jump_ops: Option<Vec<MatrixData>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixData>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylSpec {
    pub d: usize,
    /// Sparse damping entries (p, q, c); omitted means the squared
    /// minimal-length family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<(usize, usize, f64)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub q: usize,
    pub terms: Vec<TermSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit_terms: Option<Vec<ExplicitTermSpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub offsets: Vec<i64>,
    pub matrix: MatrixData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitTermSpec {
    pub sites: Vec<i64>,
    pub matrix: MatrixData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    /// "trace" (also the default when the whole state spec is omitted).
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<MatrixData>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunParams {
    pub seed: u64,
    pub tol: f64,
    pub n_max: usize,
    pub sample_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_grid: Option<Vec<f64>>,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            seed: 0,
            tol: 1e-8,
            n_max: 4,
            sample_count: 10,
            t_grid: None,
            alpha_grid: None,
        }
    }
}

/// Reads and validates a scenario file. Schema errors carry the JSON path of
/// the offending field; semantic errors name field and constraint.
pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read scenario {}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let scenario: Scenario = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        CliError::invalid(format!("scenario {}: {}: {}", path.display(), e.path(), e.inner()))
    })?;
    validate(&scenario)?;
    Ok(scenario)
}

fn validate(sc: &Scenario) -> Result<(), CliError> {
    match (&sc.generator, &sc.lattice) {
        (Some(_), Some(_)) => {
            return Err(CliError::invalid(
                "scenario: exactly one of `generator` and `lattice` must be present; found both",
            ))
        }
        (None, None) => {
            return Err(CliError::invalid(
                "scenario: exactly one of `generator` and `lattice` must be present; found neither",
            ))
        }
        _ => {}
    }
    if !sc.run.tol.is_finite() || sc.run.tol <= 0.0 {
        return Err(CliError::invalid("run.tol: must be a positive finite number"));
    }
    if sc.run.n_max < 1 {
        return Err(CliError::invalid("run.n_max: must be at least 1"));
    }
    if let Some(grid) = &sc.run.t_grid {
        if grid.iter().any(|t| !t.is_finite()) {
            return Err(CliError::invalid("run.t_grid: entries must be finite"));
        }
    }
    if let Some(grid) = &sc.run.alpha_grid {
        if grid.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(CliError::invalid("run.alpha_grid: entries must be positive and finite"));
        }
    }

    if let Some(gen) = &sc.generator {
        let algebra = sc
            .algebra
            .as_ref()
            .ok_or_else(|| CliError::invalid("algebra: required for generator scenarios"))?;
        validate_generator(gen, algebra)?;
        if let Some(state) = &sc.state {
            validate_state(state, algebra)?;
        }
    }
    if let Some(lat) = &sc.lattice {
        if sc.algebra.is_some() {
            return Err(CliError::invalid(
                "algebra: not used with a lattice scenario (the volume fixes it); remove it",
            ));
        }
        if sc.state.is_some() {
            return Err(CliError::invalid("state: not supported for lattice scenarios"));
        }
        validate_lattice(lat)?;
    }
    Ok(())
}

fn validate_generator(gen: &GeneratorSpec, algebra: &AlgebraSpec) -> Result<(), CliError> {
    if algebra.blocks.is_empty() {
        return Err(CliError::invalid("algebra.blocks: must be nonempty"));
    }
    if algebra.blocks.contains(&0) {
        return Err(CliError::invalid("algebra.blocks: block dimensions must be at least 1"));
    }
    let forbid = |field: &str, present: bool| {
        if present {
            Err(CliError::invalid(format!(
                "generator.{field}: not allowed for type {:?}",
                gen.kind
            )))
        } else {
            Ok(())
        }
    };
    match gen.kind.as_str() {
        "commutator" => {
            forbid("jump_ops", gen.jump_ops.is_some())?;
            forbid("weyl", gen.weyl.is_some())?;
            forbid("matrix", gen.matrix.is_some())?;
            let h = gen
                .hamiltonian
                .as_ref()
                .ok_or_else(|| CliError::invalid("generator.hamiltonian: required for type \"commutator\""))?;
            check_element_shape("generator.hamiltonian", h, algebra)?;
        }
        "lindblad" => {
            forbid("weyl", gen.weyl.is_some())?;
            forbid("matrix", gen.matrix.is_some())?;
            let h = gen
                .hamiltonian
                .as_ref()
                .ok_or_else(|| CliError::invalid("generator.hamiltonian: required for type \"lindblad\""))?;
            check_element_shape("generator.hamiltonian", h, algebra)?;
            let jumps = gen
                .jump_ops
                .as_ref()
                .ok_or_else(|| CliError::invalid("generator.jump_ops: required for type \"lindblad\""))?;
            for (i, j) in jumps.iter().enumerate() {
                check_element_shape(&format!("generator.jump_ops[{i}]"), j, algebra)?;
            }
        }
        "weyl" => {
            forbid("hamiltonian", gen.hamiltonian.is_some())?;
            forbid("jump_ops", gen.jump_ops.is_some())?;
            forbid("matrix", gen.matrix.is_some())?;
            let weyl = gen
                .weyl
                .as_ref()
                .ok_or_else(|| CliError::invalid("generator.weyl: required for type \"weyl\""))?;
            if weyl.d < 2 {
                return Err(CliError::invalid("generator.weyl.d: must be at least 2"));
            }
            if algebra.blocks != [weyl.d] {
                return Err(CliError::invalid(format!(
                    "algebra.blocks: Weyl generators need a single block of dimension d = {}; got {:?}",
                    weyl.d, algebra.blocks
                )));
            }
            if let Some(weights) = &weyl.weights {
                let mut seen = std::collections::BTreeSet::new();
                for (i, &(p, q, c)) in weights.iter().enumerate() {
                    if p >= weyl.d || q >= weyl.d {
                        return Err(CliError::invalid(format!(
                            "generator.weyl.weights[{i}]: index ({p}, {q}) out of range for d = {}",
                            weyl.d
                        )));
                    }
                    if !c.is_finite() {
                        return Err(CliError::invalid(format!(
                            "generator.weyl.weights[{i}]: damping rate must be finite"
                        )));
                    }
                    if !seen.insert((p, q)) {
                        return Err(CliError::invalid(format!(
                            "generator.weyl.weights[{i}]: duplicate entry for ({p}, {q})"
                        )));
                    }
                }
            }
        }
        "matrix" => {
            forbid("hamiltonian", gen.hamiltonian.is_some())?;
            forbid("jump_ops", gen.jump_ops.is_some())?;
            forbid("weyl", gen.weyl.is_some())?;
            let m = gen
                .matrix
                .as_ref()
                .ok_or_else(|| CliError::invalid("generator.matrix: required for type \"matrix\""))?;
            let dim: usize = algebra.blocks.iter().map(|d| d * d).sum();
            let rows = m.len();
            if rows != dim || m.iter().any(|r| r.len() != dim) {
                let cols = m.first().map_or(0, |r| r.len());
                return Err(CliError::invalid(format!(
                    "generator.matrix: expected {dim}×{dim} (element dimension of blocks {:?}), got {rows}×{cols}",
                    algebra.blocks
                )));
            }
        }
        other => {
            return Err(CliError::invalid(format!(
                "generator.type: unknown type {other:?}; expected \"commutator\", \"lindblad\", \"weyl\", or \"matrix\""
            )))
        }
    }
    Ok(())
}

/// A matrix field must be D×D for total embedding dimension D = Σ dₖ, with
/// support on the diagonal blocks only.
fn check_element_shape(field: &str, data: &MatrixData, algebra: &AlgebraSpec) -> Result<(), CliError> {
    let total: usize = algebra.blocks.iter().sum();
    let rows = data.len();
    if rows != total || data.iter().any(|r| r.len() != total) {
        let cols = data.first().map_or(0, |r| r.len());
        return Err(CliError::invalid(format!(
            "{field}: expected a {total}×{total} matrix matching algebra blocks {:?}, got {rows}×{cols}",
            algebra.blocks
        )));
    }
    let mut lo = 0usize;
    let spans: Vec<(usize, usize)> = algebra
        .blocks
        .iter()
        .map(|&d| {
            let s = (lo, lo + d);
            lo += d;
            s
        })
        .collect();
    for (r, row) in data.iter().enumerate() {
        for (c, entry) in row.iter().enumerate() {
            let same_block = spans.iter().any(|&(a, b)| r >= a && r < b && c >= a && c < b);
            if !same_block && (entry[0] != 0.0 || entry[1] != 0.0) {
                return Err(CliError::invalid(format!(
                    "{field}[{r}][{c}]: entries outside the diagonal blocks {:?} must be zero",
                    algebra.blocks
                )));
            }
        }
    }
    Ok(())
}

fn validate_state(state: &StateSpec, algebra: &AlgebraSpec) -> Result<(), CliError> {
    if let Some(kind) = &state.kind {
        if kind != "trace" {
            return Err(CliError::invalid(format!(
                "state.type: unknown type {kind:?}; expected \"trace\""
            )));
        }
        if state.weights.is_some() || state.densities.is_some() {
            return Err(CliError::invalid(
                "state: type \"trace\" takes no weights or densities",
            ));
        }
        return Ok(());
    }
    let weights = state
        .weights
        .as_ref()
        .ok_or_else(|| CliError::invalid("state.weights: required unless type is \"trace\""))?;
    let densities = state
        .densities
        .as_ref()
        .ok_or_else(|| CliError::invalid("state.densities: required unless type is \"trace\""))?;
    let n = algebra.blocks.len();
    if weights.len() != n {
        return Err(CliError::invalid(format!(
            "state.weights: expected one weight per block ({n}), got {}",
            weights.len()
        )));
    }
    if densities.len() != n {
        return Err(CliError::invalid(format!(
            "state.densities: expected one density per block ({n}), got {}",
            densities.len()
        )));
    }
    for (k, (rho, &d)) in densities.iter().zip(&algebra.blocks).enumerate() {
        if rho.len() != d || rho.iter().any(|r| r.len() != d) {
            return Err(CliError::invalid(format!(
                "state.densities[{k}]: expected a {d}×{d} matrix for block {k}"
            )));
        }
    }
    Ok(())
}

fn validate_lattice(lat: &LatticeSpec) -> Result<(), CliError> {
    if lat.q < 2 {
        return Err(CliError::invalid("lattice.q: site dimension must be at least 2"));
    }
    for (i, term) in lat.terms.iter().enumerate() {
        check_term_shape(&format!("lattice.terms[{i}]"), &term.offsets, &term.matrix, lat.q)?;
    }
    for (i, term) in lat.explicit_terms.iter().flatten().enumerate() {
        check_term_shape(
            &format!("lattice.explicit_terms[{i}]"),
            &term.sites,
            &term.matrix,
            lat.q,
        )?;
    }
    Ok(())
}

fn check_term_shape(field: &str, sites: &[i64], matrix: &MatrixData, q: usize) -> Result<(), CliError> {
    if sites.is_empty() {
        return Err(CliError::invalid(format!("{field}: needs at least one site")));
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::invalid(format!(
            "{field}: sites must be strictly increasing, got {sites:?}"
        )));
    }
    let dim = q
        .checked_pow(sites.len() as u32)
        .ok_or_else(|| CliError::invalid(format!("{field}: q^arity overflows")))?;
    let rows = matrix.len();
    if rows != dim || matrix.iter().any(|r| r.len() != dim) {
        let cols = matrix.first().map_or(0, |r| r.len());
        return Err(CliError::invalid(format!(
            "{field}.matrix: expected {dim}×{dim} (q = {q} on {} sites), got {rows}×{cols}",
            sites.len()
        )));
    }
    Ok(())
}

/// The declared algebra, constructed. Only valid for generator scenarios.
pub fn build_algebra(sc: &Scenario) -> Result<Algebra, CliError> {
    let spec = sc
        .algebra
        .as_ref()
        .ok_or_else(|| CliError::invalid("algebra: required for generator scenarios"))?;
    Algebra::new(spec.blocks.clone())
        .map_err(|e| CliError::invalid(format!("algebra.blocks: {e}")))
}

fn element_from_full(field: &str, data: &MatrixData, algebra: &Algebra) -> Result<Element, CliError> {
    let full = matrix_from_data(data).map_err(|e| CliError::invalid(format!("{field}: {e}")))?;
    let mut blocks = Vec::with_capacity(algebra.num_blocks());
    let mut lo = 0usize;
    for &d in algebra.blocks() {
        blocks.push(full.view((lo, lo), (d, d)).into_owned());
        lo += d;
    }
    AlgebraElement::new(algebra.clone(), blocks).map_err(|e| CliError::invalid(format!("{field}: {e}")))
}

/// The scenario's generator as a superoperator on its algebra.
pub fn build_generator(sc: &Scenario) -> Result<Map, CliError> {
    let gen = sc
        .generator
        .as_ref()
        .ok_or_else(|| CliError::invalid("generator: this command needs a generator scenario"))?;
    let algebra = build_algebra(sc)?;
    match gen.kind.as_str() {
        "commutator" => {
            let h = element_from_full("generator.hamiltonian", gen.hamiltonian.as_ref().unwrap(), &algebra)?;
            commutator_derivation(&h).map_err(|e| CliError::invalid(format!("generator.hamiltonian: {e}")))
        }
        "lindblad" => {
            let h = element_from_full("generator.hamiltonian", gen.hamiltonian.as_ref().unwrap(), &algebra)?;
            let jumps = gen
                .jump_ops
                .as_ref()
                .unwrap()
                .iter()
                .enumerate()
                .map(|(i, j)| element_from_full(&format!("generator.jump_ops[{i}]"), j, &algebra))
                .collect::<Result<Vec<_>, _>>()?;
            lindblad_generator(&h, &jumps).map_err(|e| CliError::invalid(format!("generator: {e}")))
        }
        "weyl" => {
            let weyl = gen.weyl.as_ref().unwrap();
            let weights = match &weyl.weights {
                None => squared_min_length_weights::<f64>(weyl.d),
                Some(entries) => {
                    let mut w = DMatrix::<f64>::zeros(weyl.d, weyl.d);
                    for &(p, q, c) in entries {
                        w[(p, q)] = c;
                    }
                    w
                }
            };
            weyl_damping_generator(weyl.d, &weights).map_err(|e| CliError::invalid(format!("generator.weyl: {e}")))
        }
        "matrix" => {
            let m = matrix_from_data(gen.matrix.as_ref().unwrap())
                .map_err(|e| CliError::invalid(format!("generator.matrix: {e}")))?;
            Map::from_matrix(algebra, m, "scenario matrix".to_string())
                .map_err(|e| CliError::invalid(format!("generator.matrix: {e}")))
        }
        other => Err(CliError::invalid(format!("generator.type: unknown type {other:?}"))),
    }
}

/// The scenario's state (trace state when omitted).
pub fn build_state(sc: &Scenario, algebra: &Algebra) -> Result<StateF64, CliError> {
    let Some(spec) = &sc.state else {
        return Ok(StateF64::trace_state(algebra));
    };
    if spec.kind.as_deref() == Some("trace") {
        return Ok(StateF64::trace_state(algebra));
    }
    let weights = spec.weights.clone().unwrap_or_default();
    let rhos = spec
        .densities
        .as_ref()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(k, m)| matrix_from_data(m).map_err(|e| CliError::invalid(format!("state.densities[{k}]: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    StateF64::new(algebra.clone(), weights, rhos).map_err(|e| CliError::invalid(format!("state: {e}")))
}

/// The scenario's interaction. Only valid for lattice scenarios.
pub fn build_interaction(sc: &Scenario) -> Result<Interaction<f64>, CliError> {
    let lat = sc
        .lattice
        .as_ref()
        .ok_or_else(|| CliError::invalid("lattice: this command needs a lattice scenario"))?;
    let terms = lat
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            matrix_from_data(&t.matrix)
                .map(|m| (t.offsets.clone(), m))
                .map_err(|e| CliError::invalid(format!("lattice.terms[{i}].matrix: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let explicit = lat
        .explicit_terms
        .iter()
        .flatten()
        .enumerate()
        .map(|(i, t)| {
            matrix_from_data(&t.matrix)
                .map(|m| (t.sites.clone(), m))
                .map_err(|e| CliError::invalid(format!("lattice.explicit_terms[{i}].matrix: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Interaction::with_explicit(lat.q, terms, explicit).map_err(|e| CliError::invalid(format!("lattice: {e}")))
}

fn pauli(which: char) -> DMatrix<C64> {
    let e = |re: f64, im: f64| C64::new(re, im);
    match which {
        'x' => DMatrix::from_row_slice(2, 2, &[e(0.0, 0.0), e(1.0, 0.0), e(1.0, 0.0), e(0.0, 0.0)]),
        'y' => DMatrix::from_row_slice(2, 2, &[e(0.0, 0.0), e(0.0, -1.0), e(0.0, 1.0), e(0.0, 0.0)]),
        _ => DMatrix::from_row_slice(2, 2, &[e(1.0, 0.0), e(0.0, 0.0), e(0.0, 0.0), e(-1.0, 0.0)]),
    }
}

/// Resolves an observable label to a d×d matrix: "identity", "sigma_x" /
/// "sigma_y" / "sigma_z" (d = 2 only), or "basis:r:c".
pub fn site_observable(label: &str, d: usize) -> Result<DMatrix<C64>, CliError> {
    match label {
        "identity" => Ok(DMatrix::identity(d, d)),
        "sigma_x" | "sigma_y" | "sigma_z" => {
            if d != 2 {
                return Err(CliError::invalid(format!(
                    "observable {label:?} needs dimension 2, got {d}"
                )));
            }
            Ok(pauli(label.chars().last().unwrap()))
        }
        _ => {
            let parts: Vec<&str> = label.split(':').collect();
            if parts.len() == 3 && parts[0] == "basis" {
                let r: usize = parts[1]
                    .parse()
                    .map_err(|_| CliError::invalid(format!("observable {label:?}: row is not a number")))?;
                let c: usize = parts[2]
                    .parse()
                    .map_err(|_| CliError::invalid(format!("observable {label:?}: column is not a number")))?;
                if r >= d || c >= d {
                    return Err(CliError::invalid(format!(
                        "observable {label:?}: indices out of range for dimension {d}"
                    )));
                }
                let mut m = DMatrix::zeros(d, d);
                m[(r, c)] = C64::new(1.0, 0.0);
                return Ok(m);
            }
            Err(CliError::invalid(format!(
                "unknown observable label {label:?}; expected \"identity\", \"sigma_x\"/\"sigma_y\"/\"sigma_z\", or \"basis:r:c\""
            )))
        }
    }
}

/// Resolves an observable label to an algebra element: the labels of
/// [`site_observable`] on single-block algebras, plus "basis:g:r:c" naming a
/// block explicitly.
pub fn algebra_observable(label: &str, algebra: &Algebra) -> Result<Element, CliError> {
    if label == "identity" {
        return Ok(AlgebraElement::identity(algebra.clone()));
    }
    let parts: Vec<&str> = label.split(':').collect();
    if parts.len() == 4 && parts[0] == "basis" {
        let idx: Vec<usize> = parts[1..]
            .iter()
            .map(|p| {
                p.parse()
                    .map_err(|_| CliError::invalid(format!("observable {label:?}: indices must be numbers")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let (g, r, c) = (idx[0], idx[1], idx[2]);
        if g >= algebra.num_blocks() || r >= algebra.blocks()[g] || c >= algebra.blocks()[g] {
            return Err(CliError::invalid(format!(
                "observable {label:?}: indices out of range for blocks {:?}",
                algebra.blocks()
            )));
        }
        let mut x = AlgebraElement::zero(algebra.clone());
        x.block_mut(g)[(r, c)] = C64::new(1.0, 0.0);
        return Ok(x);
    }
    if algebra.num_blocks() != 1 {
        return Err(CliError::invalid(format!(
            "observable {label:?} needs a single-block algebra (blocks {:?}); use \"basis:g:r:c\"",
            algebra.blocks()
        )));
    }
    let m = site_observable(label, algebra.blocks()[0])?;
    AlgebraElement::from_matrix(m).map_err(|e| CliError::invalid(format!("observable {label:?}: {e}")))
}
