//! Spin-chain interactions, local Hamiltonians, finite-volume Heisenberg
//! dynamics, and diagnostics for approximate innerness of the generator.
//!
//! Sites live on a one-dimensional integer chain; each carries a copy of C^q.
//! The basis order of tensor products puts the leftmost site on the most
//! significant digit.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::Error;
use crate::linalg;
use crate::scalar::{Cpx, Scalar};

/// Largest allowed Hilbert-space dimension q^(number of sites).
pub const DEFAULT_STATE_DIM_CAP: usize = 4096;

/// Hermiticity tolerance for interaction matrices.
const TERM_HERMITICITY_TOL: f64 = 1e-12;

/// Contiguous interval [lo, hi] of chain sites, each of local dimension q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRegion {
    lo: i64,
    hi: i64,
    q: usize,
    state_dim: usize,
}

impl LatticeRegion {
    pub fn new(lo: i64, hi: i64, q: usize) -> Result<Self, Error> {
        Self::with_cap(lo, hi, q, DEFAULT_STATE_DIM_CAP)
    }

    pub fn with_cap(lo: i64, hi: i64, q: usize, cap: usize) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("region [{lo}, {hi}] is empty")));
        }
        if q < 2 {
            return Err(Error::InvalidInput(format!("site dimension q = {q} must be ≥ 2")));
        }
        let len = (hi - lo + 1) as usize;
        let mut state_dim = 1usize;
        for _ in 0..len {
            state_dim = state_dim.saturating_mul(q);
            if state_dim > cap {
                return Err(Error::DimensionCap { requested: state_dim, cap });
            }
        }
        Ok(LatticeRegion { lo, hi, q, state_dim })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn contains(&self, site: i64) -> bool {
        self.lo <= site && site <= self.hi
    }

    pub fn contains_region(&self, other: &LatticeRegion) -> bool {
        self.q == other.q && self.lo <= other.lo && other.hi <= self.hi
    }

    /// Full matrix algebra on the region's Hilbert space. The element
    /// dimension grows as q^(2|Λ|), so the usual element cap is replaced by
    /// the state-dimension cap enforced at construction.
    pub fn algebra(&self) -> Algebra {
        Algebra::with_cap(vec![self.state_dim], self.state_dim * self.state_dim)
            .expect("state dimension was validated at construction")
    }

    /// Centered region of the given radius: [−r, r].
    pub fn centered(radius: i64, q: usize) -> Result<Self, Error> {
        if radius < 0 {
            return Err(Error::InvalidInput("radius must be ≥ 0".into()));
        }
        Self::new(-radius, radius, q)
    }
}

/// One translation-invariant term: a Hermitian matrix on the sites
/// `shift + offsets` for every placement shift.
#[derive(Clone, Debug)]
pub struct InteractionTerm<T: Scalar> {
    /// Strictly increasing, normalized so the first offset is 0.
    pub offsets: Vec<i64>,
    /// Hermitian matrix on q^(number of offsets), leftmost site most
    /// significant.
    pub matrix: DMatrix<Cpx<T>>,
}

/// One pinned term on an explicit set of absolute sites.
#[derive(Clone, Debug)]
pub struct ExplicitTerm<T: Scalar> {
    /// Strictly increasing absolute sites.
    pub sites: Vec<i64>,
    pub matrix: DMatrix<Cpx<T>>,
}

/// An interaction: translation-invariant terms plus optional pinned terms.
#[derive(Clone, Debug)]
pub struct Interaction<T: Scalar> {
    q: usize,
    terms: Vec<InteractionTerm<T>>,
    explicit: Vec<ExplicitTerm<T>>,
}

fn validate_term_matrix<T: Scalar>(q: usize, arity: usize, m: &DMatrix<Cpx<T>>) -> Result<(), Error> {
    let dim = q.checked_pow(arity as u32).ok_or_else(|| Error::InvalidInput("term support too large".into()))?;
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::ShapeMismatch(format!(
            "expected a {dim}×{dim} matrix for a {arity}-site term at q = {q}, found {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = T::one() + linalg::spectral_norm(m);
    let defect = linalg::hermiticity_defect(m);
    if defect > T::of(TERM_HERMITICITY_TOL) * scale {
        return Err(Error::InvalidInput(format!(
            "interaction matrix is not Hermitian: defect {:?}",
            defect.to_f64()
        )));
    }
    Ok(())
}

fn validate_strictly_increasing(sites: &[i64], what: &str) -> Result<(), Error> {
    if sites.is_empty() {
        return Err(Error::InvalidInput(format!("{what} must be nonempty")));
    }
    if sites.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

impl<T: Scalar> Interaction<T> {
    /// Builds an interaction from translation-invariant terms. Offsets are
    /// normalized to start at 0; terms with identical normalized offsets are
    /// merged by summing their matrices.
    pub fn new(q: usize, terms: Vec<(Vec<i64>, DMatrix<Cpx<T>>)>) -> Result<Self, Error> {
        Self::with_explicit(q, terms, Vec::new())
    }

    pub fn with_explicit(
        q: usize,
        terms: Vec<(Vec<i64>, DMatrix<Cpx<T>>)>,
        explicit: Vec<(Vec<i64>, DMatrix<Cpx<T>>)>,
    ) -> Result<Self, Error> {
        if q < 2 {
            return Err(Error::InvalidInput(format!("site dimension q = {q} must be ≥ 2")));
        }
        let mut normalized: Vec<InteractionTerm<T>> = Vec::new();
        for (offsets, matrix) in terms {
            validate_strictly_increasing(&offsets, "term offsets")?;
            validate_term_matrix(q, offsets.len(), &matrix)?;
            let base = offsets[0];
            let offsets: Vec<i64> = offsets.iter().map(|o| o - base).collect();
            match normalized.iter_mut().find(|t| t.offsets == offsets) {
                Some(existing) => existing.matrix += matrix,
                None => normalized.push(InteractionTerm { offsets, matrix }),
            }
        }
        let mut pinned = Vec::new();
        for (sites, matrix) in explicit {
            validate_strictly_increasing(&sites, "explicit term sites")?;
            validate_term_matrix(q, sites.len(), &matrix)?;
            pinned.push(ExplicitTerm { sites, matrix });
        }
        Ok(Interaction { q, terms: normalized, explicit: pinned })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> &[InteractionTerm<T>] {
        &self.terms
    }

    pub fn explicit_terms(&self) -> &[ExplicitTerm<T>] {
        &self.explicit
    }

    pub fn is_translation_invariant(&self) -> bool {
        self.explicit.is_empty()
    }
}

/// One placed term: matrix on an explicit site set inside some region.
#[derive(Clone, Debug)]
pub struct Placement<T: Scalar> {
    pub sites: Vec<i64>,
    pub matrix: DMatrix<Cpx<T>>,
}

/// All placements of Φ whose support lies inside Λ.
pub fn placements<T: Scalar>(phi: &Interaction<T>, region: &LatticeRegion) -> Result<Vec<Placement<T>>, Error> {
    if phi.q != region.q() {
        return Err(Error::InvalidInput(format!(
            "interaction has q = {} but region has q = {}",
            phi.q,
            region.q()
        )));
    }
    let mut out = Vec::new();
    for term in &phi.terms {
        let span = *term.offsets.last().expect("validated nonempty");
        let mut shift = region.lo();
        while shift + span <= region.hi() {
            out.push(Placement {
                sites: term.offsets.iter().map(|o| o + shift).collect(),
                matrix: term.matrix.clone(),
            });
            shift += 1;
        }
    }
    for term in &phi.explicit {
        if term.sites.iter().all(|&s| region.contains(s)) {
            out.push(Placement {
                sites: term.sites.clone(),
                matrix: term.matrix.clone(),
            });
        }
    }
    Ok(out)
}

/// Embeds a matrix living on the given (strictly increasing, not necessarily
/// adjacent) sites into the full region, tensoring identity on the rest.
fn embed_on_sites<T: Scalar>(
    region: &LatticeRegion,
    sites: &[i64],
    m: &DMatrix<Cpx<T>>,
) -> DMatrix<Cpx<T>> {
    let q = region.q();
    let len = region.len();
    let dim = region.state_dim();
    let support: Vec<usize> = sites.iter().map(|&s| (s - region.lo()) as usize).collect();
    let k = support.len();
    let dk = m.nrows();

    // digit weight of chain position p, leftmost site most significant
    let weight = |p: usize| q.pow((len - 1 - p) as u32);
    let env_pos: Vec<usize> = (0..len).filter(|p| !support.contains(p)).collect();

    // basis offset of each sub-index of the support factor
    let sub_offset: Vec<usize> = (0..dk)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let digit = (i / q.pow((k - 1 - j) as u32)) % q;
                    digit * weight(support[j])
                })
                .sum()
        })
        .collect();
    let env_count = dim / dk;
    let env_offset: Vec<usize> = (0..env_count)
        .map(|e| {
            (0..env_pos.len())
                .map(|j| {
                    let digit = (e / q.pow((env_pos.len() - 1 - j) as u32)) % q;
                    digit * weight(env_pos[j])
                })
                .sum()
        })
        .collect();

    let mut out = DMatrix::<Cpx<T>>::zeros(dim, dim);
    for &e in &env_offset {
        for i in 0..dk {
            for j in 0..dk {
                let v = m[(i, j)];
                if v != Cpx::new(T::zero(), T::zero()) {
                    out[(e + sub_offset[i], e + sub_offset[j])] = v;
                }
            }
        }
    }
    out
}

/// Local Hamiltonian: the sum of all placements of Φ inside Λ.
pub fn local_hamiltonian<T: Scalar>(
    phi: &Interaction<T>,
    region: &LatticeRegion,
) -> Result<AlgebraElement<T>, Error> {
    let algebra = region.algebra();
    let mut h = DMatrix::<Cpx<T>>::zeros(region.state_dim(), region.state_dim());
    for p in placements(phi, region)? {
        h += embed_on_sites(region, &p.sites, &p.matrix);
    }
    AlgebraElement::new(algebra, vec![h])
}

/// Truncated exponentially weighted interaction norm
/// Σ_{n ≤ n_max} e^{nλ} sup_s Σ_{X ∋ s, |X| = n+1} ‖Φ(X)‖ with per-n
/// contributions. Since a size-(n+1) pattern admits exactly n+1 placements
/// containing a fixed site, the inner sum is Σ_patterns (n+1)·‖matrix‖,
/// independent of s.
#[derive(Clone, Debug)]
pub struct InteractionNormBound<T: Scalar> {
    pub lambda: T,
    /// contributions[n] is the weighted size-(n+1) term.
    pub contributions: Vec<T>,
    pub total: T,
    /// All patterns have size ≤ n_max + 1, so the truncation is exact.
    pub finite_range_exact: bool,
}

pub fn ruelle_bound<T: Scalar>(
    phi: &Interaction<T>,
    lambda: T,
    n_max: usize,
) -> Result<InteractionNormBound<T>, Error> {
    if !phi.is_translation_invariant() {
        return Err(Error::InvalidInput(
            "the weighted interaction norm needs a translation-invariant interaction; remove explicit terms".into(),
        ));
    }
    if lambda <= T::zero() {
        return Err(Error::InvalidInput("weight λ must be positive".into()));
    }
    let mut contributions = vec![T::zero(); n_max + 1];
    let mut max_size = 0usize;
    for term in phi.terms() {
        let size = term.offsets.len();
        max_size = max_size.max(size);
        let n = size - 1;
        if n <= n_max {
            let weight = (T::of(n as f64) * lambda).exp();
            contributions[n] += weight * T::of(size as f64) * linalg::spectral_norm(&term.matrix);
        }
    }
    let total = contributions.iter().fold(T::zero(), |acc, &c| acc + c);
    Ok(InteractionNormBound {
        lambda,
        contributions,
        total,
        finite_range_exact: max_size <= n_max + 1,
    })
}

/// Embeds an observable on Λ1 into a larger region Λ2 ⊇ Λ1 by tensoring
/// identity on Λ2 ∖ Λ1. Unital and isometric.
pub fn embed_observable<T: Scalar>(
    a: &AlgebraElement<T>,
    from: &LatticeRegion,
    into: &LatticeRegion,
) -> Result<AlgebraElement<T>, Error> {
    if !into.contains_region(from) {
        return Err(Error::InvalidInput(format!(
            "region [{}, {}] does not contain [{}, {}] at equal q",
            into.lo(),
            into.hi(),
            from.lo(),
            from.hi()
        )));
    }
    if a.algebra() != &from.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if from == into {
        return Ok(a.clone());
    }
    let sites: Vec<i64> = (from.lo()..=from.hi()).collect();
    let m = embed_on_sites(into, &sites, a.block(0));
    AlgebraElement::new(into.algebra(), vec![m])
}

/// Heisenberg evolution a ↦ e^{itH(Λ)} a e^{−itH(Λ)} via the Hermitian
/// eigendecomposition of the local Hamiltonian.
pub fn finite_volume_dynamics<T: Scalar>(
    phi: &Interaction<T>,
    region: &LatticeRegion,
    t: T,
    a: &AlgebraElement<T>,
) -> Result<AlgebraElement<T>, Error> {
    if a.algebra() != &region.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let h = local_hamiltonian(phi, region)?;
    let (values, vectors) = linalg::hermitian_eigen(h.block(0));
    let phases = DVector::<Cpx<T>>::from_iterator(
        values.len(),
        values.iter().map(|&lambda| Cpx::new(T::zero(), t * lambda).exp()),
    );
    let u_t = &vectors * DMatrix::from_diagonal(&phases) * vectors.adjoint();
    let moved = &u_t * a.block(0) * u_t.adjoint();
    AlgebraElement::new(region.algebra(), vec![moved])
}

/// Gap sequence of [`convergence_diagnostic`].
#[derive(Clone, Debug)]
pub struct ConvergenceDiagnostic<T: Scalar> {
    /// d_k = ‖α_t^{Λ_{k+1}}(ā) − α_t^{Λ_k}(ā)‖, compared inside Λ_{k+1}.
    pub gaps: Vec<T>,
    /// Whether the gaps decrease strictly: evidence that the dynamics is
    /// approximately inner at the tested scale.
    pub strictly_decreasing: bool,
}

/// Evolves the same observable in each volume and measures successive gaps.
pub fn convergence_diagnostic<T: Scalar>(
    phi: &Interaction<T>,
    a: &AlgebraElement<T>,
    support: &LatticeRegion,
    t: T,
    volumes: &[LatticeRegion],
) -> Result<ConvergenceDiagnostic<T>, Error> {
    if volumes.len() < 2 {
        return Err(Error::InvalidInput("need at least two volumes to measure gaps".into()));
    }
    for w in volumes.windows(2) {
        if !w[1].contains_region(&w[0]) {
            return Err(Error::InvalidInput("volumes must be nested increasing".into()));
        }
    }
    if !volumes[0].contains_region(support) {
        return Err(Error::InvalidInput("smallest volume must contain the observable support".into()));
    }

    let evolved: Vec<AlgebraElement<T>> = volumes
        .iter()
        .map(|vol| {
            let embedded = embed_observable(a, support, vol)?;
            finite_volume_dynamics(phi, vol, t, &embedded)
        })
        .collect::<Result<_, _>>()?;

    let mut gaps = Vec::with_capacity(volumes.len() - 1);
    for k in 0..volumes.len() - 1 {
        let smaller = embed_observable(&evolved[k], &volumes[k], &volumes[k + 1])?;
        gaps.push((&evolved[k + 1] - &smaller).operator_norm());
    }
    let strictly_decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(ConvergenceDiagnostic { gaps, strictly_decreasing })
}

/// Residual ‖t⁻¹(α_t^Λ(a) − a) − i[H(Λ), a]‖; O(t) in exact arithmetic.
pub fn derivative_check<T: Scalar>(
    phi: &Interaction<T>,
    region: &LatticeRegion,
    a: &AlgebraElement<T>,
    t_small: T,
) -> Result<T, Error> {
    if t_small <= T::zero() {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    let moved = finite_volume_dynamics(phi, region, t_small, a)?;
    let h = local_hamiltonian(phi, region)?;
    let hb = h.block(0);
    let commutator = (hb * a.block(0) - a.block(0) * hb) * Cpx::new(T::zero(), T::one());
    let difference =
        (moved.block(0) - a.block(0)).unscale(t_small) - commutator;
    Ok(linalg::spectral_norm(&difference))
}
