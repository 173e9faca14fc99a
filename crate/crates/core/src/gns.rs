//! GNS construction from a state, implementation of generators by
//! Hilbert-space operators (one-sided, two-sided, skew forms), and the
//! two-sided amplification report linking operator dissipativity to the
//! complete-dissipativity certificate.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement, State};
use crate::dissipativity::{certify_completely_dissipative, CertifyOptions};
use crate::error::Error;
use crate::generators::{apply_amplified, derivation_defect, hermitian_map_defect, Superoperator};
use crate::linalg;
use crate::random::{random_element, SampleKind};
use crate::scalar::{Cpx, Scalar};

/// Default rank tolerance relative to the largest Gram eigenvalue.
pub const GRAM_RANK_REL_TOL: f64 = 1e-10;

/// Construction-time tolerance for the representation invariants.
pub const GNS_VALIDATION_TOL: f64 = 1e-10;

/// Inner product ⟨u, v⟩, linear in the first argument.
fn inner<T: Scalar>(u: &DVector<Cpx<T>>, v: &DVector<Cpx<T>>) -> Cpx<T> {
    (v.adjoint() * u)[(0, 0)]
}

/// Block-diagonal left-multiplication matrix on coefficient space:
/// vec(g·x) = L_g vec(x), blockwise kron(I_{d_k}, g_k).
fn left_mult_matrix<T: Scalar>(g: &AlgebraElement<T>) -> DMatrix<Cpx<T>> {
    let n = g.algebra().element_dim();
    let mut out = DMatrix::<Cpx<T>>::zeros(n, n);
    let mut offset = 0;
    for (k, &d) in g.algebra().blocks().iter().enumerate() {
        let eye = DMatrix::<Cpx<T>>::identity(d, d);
        let sub = linalg::kron(&eye, g.block(k));
        out.view_mut((offset, offset), (d * d, d * d)).copy_from(&sub);
        offset += d * d;
    }
    out
}

/// Cyclic representation of the algebra on the Hilbert space obtained by
/// quotienting coefficient space by the kernel of the Gram form
/// G[(a, b)] = ω(a* b).
#[derive(Clone, Debug)]
pub struct GnsRepresentation<T: Scalar> {
    algebra: Algebra,
    state: State<T>,
    dim: usize,
    /// Class map: the Hilbert vector of x is `w · vec(x)`.
    w: DMatrix<Cpx<T>>,
    /// Right inverse of the class map on the Gram range.
    w_pinv: DMatrix<Cpx<T>>,
    omega: DVector<Cpx<T>>,
    pi_basis: Vec<DMatrix<Cpx<T>>>,
    rank_tol: T,
}

impl<T: Scalar> GnsRepresentation<T> {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn state(&self) -> &State<T> {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank_tol(&self) -> T {
        self.rank_tol
    }

    /// Cyclic vector: the class of the identity.
    pub fn cyclic_vector(&self) -> &DVector<Cpx<T>> {
        &self.omega
    }

    /// ω is faithful iff nothing was quotiented away.
    pub fn is_faithful(&self) -> bool {
        self.dim == self.algebra.element_dim()
    }

    /// Hilbert-space class of an algebra element.
    pub fn class_vector(&self, x: &AlgebraElement<T>) -> Result<DVector<Cpx<T>>, Error> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(&self.w * x.vectorize())
    }

    /// Representation matrix π(g), assembled by linearity from the basis.
    pub fn pi(&self, g: &AlgebraElement<T>) -> Result<DMatrix<Cpx<T>>, Error> {
        if g.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let coeffs = g.vectorize();
        let mut out = DMatrix::<Cpx<T>>::zeros(self.dim, self.dim);
        for (c, m) in coeffs.iter().zip(&self.pi_basis) {
            out += m * *c;
        }
        Ok(out)
    }
}

/// Builds the cyclic representation of ω. `rank_tol` is relative: Gram
/// eigenvalues above `rank_tol · λ_max` survive the quotient. Eigenvalues
/// within a factor of 10 of the cutoff make the rank ill-defined and are
/// rejected.
pub fn gns_construct<T: Scalar>(
    algebra: &Algebra,
    omega: &State<T>,
    rank_tol: T,
) -> Result<GnsRepresentation<T>, Error> {
    if omega.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    if rank_tol <= T::zero() {
        return Err(Error::InvalidInput("rank tolerance must be positive".into()));
    }
    let n = algebra.element_dim();
    let basis: Vec<AlgebraElement<T>> = algebra
        .basis_indices()
        .into_iter()
        .map(|idx| algebra.basis_element(idx))
        .collect();

    let mut gram = DMatrix::<Cpx<T>>::zeros(n, n);
    for (a, ea) in basis.iter().enumerate() {
        let ea_adj = ea.adjoint();
        for (b, eb) in basis.iter().enumerate() {
            gram[(a, b)] = omega.evaluate(&(&ea_adj * eb))?;
        }
    }

    let (values, vectors) = linalg::hermitian_eigen(&gram);
    let lambda_max = *values.last().expect("nonempty spectrum");
    if lambda_max <= T::zero() {
        return Err(Error::InvalidState("Gram matrix has no positive eigenvalue".into()));
    }
    let cutoff = rank_tol * lambda_max;
    for &lambda in &values {
        if lambda >= cutoff / T::of(10.0) && lambda <= cutoff * T::of(10.0) {
            return Err(Error::RankAmbiguous {
                eigenvalue: lambda.to_f64().unwrap_or(f64::NAN),
                cutoff: cutoff.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let selected: Vec<usize> = (0..n).filter(|&i| values[i] > cutoff).collect();
    let dim = selected.len();

    let mut w = DMatrix::<Cpx<T>>::zeros(dim, n);
    let mut w_pinv = DMatrix::<Cpx<T>>::zeros(n, dim);
    for (row, &i) in selected.iter().enumerate() {
        let root = values[i].sqrt();
        w.row_mut(row).copy_from(&(vectors.column(i).adjoint() * Cpx::new(root, T::zero())));
        w_pinv
            .column_mut(row)
            .copy_from(&(vectors.column(i) / Cpx::new(root, T::zero())));
    }

    let identity = AlgebraElement::identity(algebra.clone());
    let omega_vec = &w * identity.vectorize();

    let pi_basis: Vec<DMatrix<Cpx<T>>> = basis
        .iter()
        .map(|e| &w * left_mult_matrix(e) * &w_pinv)
        .collect();

    let rep = GnsRepresentation {
        algebra: algebra.clone(),
        state: omega.clone(),
        dim,
        w,
        w_pinv,
        omega: omega_vec,
        pi_basis,
        rank_tol,
    };
    validate_representation(&rep, &basis, &gram)?;
    Ok(rep)
}

fn validate_representation<T: Scalar>(
    rep: &GnsRepresentation<T>,
    basis: &[AlgebraElement<T>],
    gram: &DMatrix<Cpx<T>>,
) -> Result<(), Error> {
    let tol = T::of(GNS_VALIDATION_TOL);
    let fail = |what: &str, defect: T| {
        Err(Error::InvalidState(format!(
            "representation failed validation: {what} defect {:?}",
            defect.to_f64()
        )))
    };

    let omega_norm_defect = (rep.omega.norm() - T::one()).abs();
    if omega_norm_defect > tol {
        return fail("cyclic vector norm", omega_norm_defect);
    }
    let eye_defect = linalg::spectral_norm(&(&rep.w * &rep.w_pinv - DMatrix::identity(rep.dim, rep.dim)));
    if eye_defect > tol {
        return fail("unit representation", eye_defect);
    }

    // ⟨π(a)Ω, π(b)Ω⟩ = ω(b*a) over the basis square (sampled when large)
    let n = basis.len();
    let vectors: Vec<DVector<Cpx<T>>> = rep.pi_basis.iter().map(|m| m * &rep.omega).collect();
    let pairs: Vec<(usize, usize)> = if n <= 64 {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        (0..n).map(|a| (a, (7 * a + 13) % n)).chain((0..n).map(|a| (a, a))).collect()
    };
    for (a, b) in pairs {
        let got = inner(&vectors[a], &vectors[b]);
        let want = gram[(b, a)];
        let defect = (got - want).norm_sqr().sqrt();
        if defect > tol {
            return fail("Gram reproduction", defect);
        }
    }

    // multiplicativity on sampled pairs
    for s in 0..4u64 {
        let x: AlgebraElement<T> = random_element(&rep.algebra, 7_700 + s, SampleKind::General);
        let y: AlgebraElement<T> = random_element(&rep.algebra, 8_800 + s, SampleKind::General);
        let lhs = rep.pi(&(&x * &y))?;
        let rhs = rep.pi(&x)? * rep.pi(&y)?;
        let scale = T::one() + x.operator_norm() * y.operator_norm();
        let defect = linalg::spectral_norm(&(lhs - rhs));
        if defect > tol * scale {
            return fail("multiplicativity", defect);
        }
    }
    Ok(())
}

/// Which operator identity an [`ImplementingOperator`] solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImplementingForm {
    /// L·(class of x) = class of δ(x).
    OneSided,
    /// π(δ(a)) = Lπ(a) + π(a)L* as matrices.
    TwoSided,
    /// One-sided fit of a derivation, verified skew with the commutator
    /// identity π(δ(b)) = Sπ(b) − π(b)S.
    Skew,
}

/// A Hilbert-space operator implementing a generator in a representation.
#[derive(Clone, Debug)]
pub struct ImplementingOperator<T: Scalar> {
    pub matrix: DMatrix<Cpx<T>>,
    pub form: ImplementingForm,
    /// Worst operator-norm defect of the defining identity over the basis.
    pub residual: T,
    /// ‖L·Ω‖ for the representation this was fit in.
    pub cyclic_defect: T,
    pub kills_cyclic: bool,
}

fn one_sided_fit<T: Scalar>(
    delta: &Superoperator<T>,
    rep: &GnsRepresentation<T>,
    kill_cyclic: bool,
) -> DMatrix<Cpx<T>> {
    // L·W = W·D on class vectors, optionally constrained to LΩ = 0 by
    // parametrizing L = L'(I − ΩΩ*)
    let q = if kill_cyclic {
        DMatrix::identity(rep.dim, rep.dim) - &rep.omega * rep.omega.adjoint()
    } else {
        DMatrix::identity(rep.dim, rep.dim)
    };
    let design = (&q * &rep.w).transpose();
    let target = (&rep.w * delta.matrix()).transpose();
    let l_prime = linalg::lstsq(&design, &target).transpose();
    l_prime * q
}

fn one_sided_residual<T: Scalar>(
    delta: &Superoperator<T>,
    rep: &GnsRepresentation<T>,
    l: &DMatrix<Cpx<T>>,
) -> T {
    linalg::spectral_norm(&(l * &rep.w - &rep.w * delta.matrix()))
}

/// Splits a complex matrix into stacked real and imaginary parts of its
/// column-major vectorization.
fn stack_realified<T: Scalar>(m: &DMatrix<Cpx<T>>, out: &mut [T]) {
    let len = m.len();
    for (i, z) in m.iter().enumerate() {
        out[i] = z.re;
        out[len + i] = z.im;
    }
}

fn two_sided_fit<T: Scalar>(
    delta: &Superoperator<T>,
    rep: &GnsRepresentation<T>,
    kill_cyclic: bool,
) -> Result<DMatrix<Cpx<T>>, Error> {
    let r = rep.dim;
    let n = rep.algebra.element_dim();
    let q = if kill_cyclic {
        DMatrix::identity(r, r) - &rep.omega * rep.omega.adjoint()
    } else {
        DMatrix::identity(r, r)
    };

    let basis: Vec<AlgebraElement<T>> = rep
        .algebra
        .basis_indices()
        .into_iter()
        .map(|idx| rep.algebra.basis_element(idx))
        .collect();
    let targets: Vec<DMatrix<Cpx<T>>> = basis
        .iter()
        .map(|e| rep.pi(&delta.apply(e)?))
        .collect::<Result<_, _>>()?;

    // real-linear least squares in (Re L', Im L'): the map L ↦ Lπ(a) + π(a)L*
    // is only real-linear because the adjoint conjugates
    let unknowns = 2 * r * r;
    let rows = n * 2 * r * r;
    let mut a_real = DMatrix::<T>::zeros(rows, unknowns);
    let mut b_real = DVector::<T>::zeros(rows);
    for (a, target) in targets.iter().enumerate() {
        stack_realified(target, &mut b_real.as_mut_slice()[a * 2 * r * r..(a + 1) * 2 * r * r]);
    }
    let mut column = vec![T::zero(); 2 * r * r];
    for u in 0..unknowns {
        let (part, pos) = (u / (r * r), u % (r * r));
        let (row, col) = (pos % r, pos / r);
        let mut e = DMatrix::<Cpx<T>>::zeros(r, r);
        e[(row, col)] = if part == 0 {
            Cpx::new(T::one(), T::zero())
        } else {
            Cpx::new(T::zero(), T::one())
        };
        let eq = &e * &q;
        let eq_adj = eq.adjoint();
        for (a, pi_a) in rep.pi_basis.iter().enumerate() {
            let contribution = &eq * pi_a + pi_a * &eq_adj;
            stack_realified(&contribution, &mut column);
            for (i, &v) in column.iter().enumerate() {
                a_real[(a * 2 * r * r + i, u)] = v;
            }
        }
    }
    let solution = linalg::lstsq_real(&a_real, &b_real);
    let mut l = DMatrix::<Cpx<T>>::zeros(r, r);
    for pos in 0..r * r {
        let (row, col) = (pos % r, pos / r);
        l[(row, col)] = Cpx::new(solution[pos], solution[r * r + pos]);
    }
    Ok(l * q)
}

fn two_sided_residual<T: Scalar>(
    delta: &Superoperator<T>,
    rep: &GnsRepresentation<T>,
    l: &DMatrix<Cpx<T>>,
) -> Result<T, Error> {
    let l_adj = l.adjoint();
    let mut worst = T::zero();
    for (a, pi_a) in rep.pi_basis.iter().enumerate() {
        let e = rep.algebra.basis_element(rep.algebra.basis_indices()[a]);
        let target = rep.pi(&delta.apply(&e)?)?;
        let defect = linalg::spectral_norm(&(l * pi_a + pi_a * &l_adj - target));
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// Least-squares fit of an operator implementing δ in the representation,
/// in the requested form. Residual above `tol` is reported as
/// non-implementability: a finding about δ, not a numerical failure.
pub fn implementing_operator<T: Scalar>(
    delta: &Superoperator<T>,
    rep: &GnsRepresentation<T>,
    form: ImplementingForm,
    kill_cyclic: bool,
    tol: T,
) -> Result<ImplementingOperator<T>, Error> {
    if delta.algebra() != rep.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let (matrix, residual) = match form {
        ImplementingForm::OneSided => {
            let l = one_sided_fit(delta, rep, kill_cyclic);
            let res = one_sided_residual(delta, rep, &l);
            (l, res)
        }
        ImplementingForm::TwoSided => {
            let l = two_sided_fit(delta, rep, kill_cyclic)?;
            let res = two_sided_residual(delta, rep, &l)?;
            (l, res)
        }
        ImplementingForm::Skew => {
            return Err(Error::InvalidInput(
                "use skew_implementing_operator for the skew form".into(),
            ))
        }
    };
    if residual > tol {
        return Err(Error::NotImplementable {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let cyclic_defect = (&matrix * &rep.omega).norm();
    Ok(ImplementingOperator {
        matrix,
        form,
        residual,
        cyclic_defect,
        kills_cyclic: kill_cyclic,
    })
}

/// Dissipativity verdict for a Hilbert-space operator: the largest
/// eigenvalue of the symmetric part (L + L*)/2 decides Re⟨Lξ, ξ⟩ ≤ 0.
#[derive(Clone, Debug)]
pub struct OperatorDissipativity<T: Scalar> {
    pub dissipative: bool,
    pub max_symmetric_eigenvalue: T,
    /// Maximizing unit vector when not dissipative.
    pub witness: Option<DVector<Cpx<T>>>,
}

pub fn operator_dissipativity<T: Scalar>(l: &DMatrix<Cpx<T>>, tol: T) -> OperatorDissipativity<T> {
    let sym = (l + l.adjoint()).unscale(T::of(2.0));
    let (values, vectors) = linalg::hermitian_eigen(&sym);
    let top = values.len() - 1;
    let max = values[top];
    let dissipative = max <= tol;
    OperatorDissipativity {
        dissipative,
        max_symmetric_eigenvalue: max,
        witness: if dissipative {
            None
        } else {
            Some(vectors.column(top).into_owned())
        },
    }
}

/// Preconditions are checked before fitting: δ must be a Hermitian map and a
/// derivation, and ω must vanish on its range.
pub fn skew_implementing_operator<T: Scalar>(
    delta: &Superoperator<T>,
    rep: &GnsRepresentation<T>,
    tol: T,
) -> Result<ImplementingOperator<T>, Error> {
    if delta.algebra() != rep.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let scale = T::one() + delta.matrix_norm();
    let hermitian_defect = hermitian_map_defect(delta);
    if hermitian_defect > tol * scale {
        return Err(Error::NotHermitianMap {
            defect: hermitian_defect.to_f64().unwrap_or(f64::NAN),
            tol: (tol * scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    let leibniz_defect = derivation_defect(delta, 17, 8);
    if leibniz_defect > tol * scale {
        return Err(Error::NotDerivation {
            defect: leibniz_defect.to_f64().unwrap_or(f64::NAN),
            tol: (tol * scale).to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut invariance_defect = T::zero();
    for idx in rep.algebra.basis_indices() {
        let image = delta.apply(&rep.algebra.basis_element(idx))?;
        let value = rep.state.evaluate(&image)?;
        invariance_defect = invariance_defect.max(value.norm_sqr().sqrt());
    }
    if invariance_defect > tol {
        return Err(Error::StateNotInvariant {
            defect: invariance_defect.to_f64().unwrap_or(f64::NAN),
        });
    }

    let s = one_sided_fit(delta, rep, false);
    let fit_residual = one_sided_residual(delta, rep, &s);
    let skew_defect = linalg::spectral_norm(&(&s + s.adjoint()));
    // commutator identity π(δ(b)) = Sπ(b) − π(b)S over the basis
    let mut commutator_defect = T::zero();
    for (a, pi_a) in rep.pi_basis.iter().enumerate() {
        let e = rep.algebra.basis_element(rep.algebra.basis_indices()[a]);
        let target = rep.pi(&delta.apply(&e)?)?;
        let defect = linalg::spectral_norm(&(&s * pi_a - pi_a * &s - target));
        commutator_defect = commutator_defect.max(defect);
    }
    let worst = fit_residual.max(skew_defect).max(commutator_defect);
    if worst > tol {
        return Err(Error::NotImplementable {
            residual: worst.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let cyclic_defect = (&s * &rep.omega).norm();
    Ok(ImplementingOperator {
        matrix: s,
        form: ImplementingForm::Skew,
        residual: worst,
        cyclic_defect,
        kills_cyclic: false,
    })
}

/// Per-amplification-level verification record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplifiedLevelReport {
    pub n: usize,
    /// max over samples of Re ω_n(a*δ_n(a)); nonpositive up to tol.
    pub re_form_max: f64,
    /// ‖L_n Ω_n‖.
    pub cyclic_defect: f64,
    /// max over samples of |ω_n(a*δ_n(a)) − ⟨L_nπ_n(a)Ω_n, π_n(a)Ω_n⟩|.
    pub pairing_defect_max: f64,
    pub verdict: String,
}

/// Outcome of the two-sided implementation pipeline with amplification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImplementationReport {
    pub gns_dim: usize,
    pub element_dim: usize,
    pub fit_residual: f64,
    pub cyclic_defect: f64,
    pub dissipative: bool,
    pub max_symmetric_eigenvalue: f64,
    pub levels: Vec<AmplifiedLevelReport>,
    /// Verdict of the independent complete-dissipativity certificate run on
    /// the same generator: must be "pass" whenever the pipeline passes.
    pub certificate_verdict: String,
    pub consistent: bool,
    pub seed: u64,
    pub tol: f64,
}

impl ImplementationReport {
    pub fn pipeline_passed(&self) -> bool {
        self.fit_residual <= self.tol
            && self.cyclic_defect <= self.tol
            && self.dissipative
            && self.levels.iter().all(|l| l.verdict == "pass")
    }
}

/// Class vector of an amplified element under π_n = π ⊗ (trace rep of M_n):
/// the (i, j) grid entry contributes class(a_ij) ⊗ vec(E_ij)/√n.
fn amplified_class_vector<T: Scalar>(
    rep: &GnsRepresentation<T>,
    a: &AlgebraElement<T>,
    n: usize,
) -> DVector<Cpx<T>> {
    let base = &rep.algebra;
    let r = rep.dim;
    let mut out = DVector::<Cpx<T>>::zeros(r * n * n);
    let scale = Cpx::new(T::one() / T::of(n as f64).sqrt(), T::zero());
    for i in 0..n {
        for j in 0..n {
            let sub_blocks: Vec<DMatrix<Cpx<T>>> = base
                .blocks()
                .iter()
                .enumerate()
                .map(|(k, &d)| a.block(k).view((i * d, j * d), (d, d)).into_owned())
                .collect();
            let entry = AlgebraElement::new(base.clone(), sub_blocks).expect("grid sub-block shapes");
            let class = &rep.w * entry.vectorize();
            let pos = j * n + i;
            for g in 0..r {
                out[g * n * n + pos] += class[g] * scale;
            }
        }
    }
    out
}

/// Runs the full two-sided pipeline: construct the cyclic representation,
/// fit L with LΩ = 0, decide its dissipativity, then per level n ≤ n_max
/// verify with L_n = L ⊗ I the three amplified identities (nonpositivity of
/// Re ω_n(a*δ_n(a)), L_nΩ_n = 0, and the pairing identity), and cross-check
/// against the independent complete-dissipativity certificate.
pub fn theorem_report<T: Scalar>(
    delta: &Superoperator<T>,
    omega: &State<T>,
    n_max: usize,
    sample_count: usize,
    seed: u64,
    tol: T,
) -> Result<ImplementationReport, Error> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be ≥ 1".into()));
    }
    let algebra = delta.algebra().clone();
    let rep = gns_construct(&algebra, omega, T::of(GRAM_RANK_REL_TOL))?;
    if !rep.is_faithful() {
        return Err(Error::NotFaithful {
            gns_dim: rep.dim(),
            element_dim: algebra.element_dim(),
        });
    }
    let l_op = implementing_operator(delta, &rep, ImplementingForm::TwoSided, true, tol)?;
    let diss = operator_dissipativity(&l_op.matrix, tol);

    let tol_f = tol.to_f64().unwrap_or(f64::NAN);
    let mut levels = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let algebra_n = algebra.amplified(n)?;
        let omega_n = omega.amplified_with_trace(n)?;
        let eye = DMatrix::<Cpx<T>>::identity(n * n, n * n);
        let l_n = linalg::kron(&l_op.matrix, &eye);
        let omega_n_vec = {
            let mut v = DVector::<Cpx<T>>::zeros(rep.dim * n * n);
            let scale = Cpx::new(T::one() / T::of(n as f64).sqrt(), T::zero());
            for i in 0..n {
                let pos = i * n + i;
                for g in 0..rep.dim {
                    v[g * n * n + pos] = rep.omega[g] * scale;
                }
            }
            v
        };
        let cyclic_defect = (&l_n * &omega_n_vec).norm().to_f64().unwrap_or(f64::NAN);

        let mut family: Vec<AlgebraElement<T>> = algebra_n
            .basis_indices()
            .into_iter()
            .map(|idx| algebra_n.basis_element(idx))
            .collect();
        for s in 0..sample_count {
            family.push(random_element(
                &algebra_n,
                seed.wrapping_add((n * 1_000 + s) as u64),
                SampleKind::General,
            ));
        }

        let mut re_form_max = f64::NEG_INFINITY;
        let mut pairing_defect_max: f64 = 0.0;
        for a in &family {
            let value = omega_n.evaluate(&(&a.adjoint() * &apply_amplified(delta, n, a)?))?;
            re_form_max = re_form_max.max(value.re.to_f64().unwrap_or(f64::NAN));
            let psi = amplified_class_vector(&rep, a, n);
            let paired = inner(&(&l_n * &psi), &psi);
            let defect = (value - paired).norm_sqr().sqrt().to_f64().unwrap_or(f64::NAN);
            pairing_defect_max = pairing_defect_max.max(defect);
        }
        let pass = re_form_max <= tol_f && cyclic_defect <= tol_f && pairing_defect_max <= tol_f;
        levels.push(AmplifiedLevelReport {
            n,
            re_form_max,
            cyclic_defect,
            pairing_defect_max,
            verdict: if pass { "pass".into() } else { "fail".into() },
        });
    }

    let certificate = certify_completely_dissipative(
        delta,
        &CertifyOptions {
            n_max,
            sample_count,
            seed,
            tol,
            ..Default::default()
        },
    )?;

    let report = ImplementationReport {
        gns_dim: rep.dim(),
        element_dim: algebra.element_dim(),
        fit_residual: l_op.residual.to_f64().unwrap_or(f64::NAN),
        cyclic_defect: l_op.cyclic_defect.to_f64().unwrap_or(f64::NAN),
        dissipative: diss.dissipative,
        max_symmetric_eigenvalue: diss.max_symmetric_eigenvalue.to_f64().unwrap_or(f64::NAN),
        levels,
        certificate_verdict: certificate.verdict.clone(),
        consistent: true,
        seed,
        tol: tol_f,
    };
    let consistent = !report.pipeline_passed() || certificate.passed();
    Ok(ImplementationReport { consistent, ..report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{commutator_derivation, lindblad_generator, squared_min_length_weights, weyl_damping_generator};
    use crate::scalar::cpx;
    use approx::assert_relative_eq;

    fn pauli(which: char) -> AlgebraElement<f64> {
        let m = match which {
            'x' => DMatrix::from_row_slice(2, 2, &[cpx(0.0, 0.0), cpx(1.0, 0.0), cpx(1.0, 0.0), cpx(0.0, 0.0)]),
            'y' => DMatrix::from_row_slice(2, 2, &[cpx(0.0, 0.0), cpx(0.0, -1.0), cpx(0.0, 1.0), cpx(0.0, 0.0)]),
            'z' => DMatrix::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(-1.0, 0.0)]),
            _ => unreachable!(),
        };
        AlgebraElement::from_matrix(m).unwrap()
    }

    fn trace_rep(d: usize) -> GnsRepresentation<f64> {
        let algebra = Algebra::full_matrix(d).unwrap();
        let omega = State::trace_state(&algebra);
        gns_construct(&algebra, &omega, 1e-10).unwrap()
    }

    #[test]
    fn trace_state_on_m2_has_dimension_four() {
        let rep = trace_rep(2);
        assert_eq!(rep.dim(), 4);
        assert!(rep.is_faithful());
        // ‖class(σx)‖² = tr(σx²)/2 = 1
        let class = rep.class_vector(&pauli('x')).unwrap();
        assert_relative_eq!(class.norm(), 1.0, epsilon = 1e-10);
        // and π(σx)Ω is the same vector
        let via_pi = rep.pi(&pauli('x')).unwrap() * rep.cyclic_vector();
        assert!((via_pi - class).norm() < 1e-10);
    }

    #[test]
    fn pure_state_on_m2_has_dimension_two() {
        let algebra = Algebra::full_matrix(2).unwrap();
        let rho = DMatrix::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0)]);
        let omega = State::new(algebra.clone(), vec![1.0], vec![rho]).unwrap();
        let rep = gns_construct(&algebra, &omega, 1e-10).unwrap();
        assert_eq!(rep.dim(), 2);
        assert!(!rep.is_faithful());
    }

    #[test]
    fn faithful_state_on_direct_sum_has_full_dimension() {
        let algebra = Algebra::new(vec![2, 3]).unwrap();
        let omega = State::trace_state(&algebra);
        let rep = gns_construct(&algebra, &omega, 1e-10).unwrap();
        assert_eq!(rep.dim(), 13);
        assert!(rep.is_faithful());
    }

    #[test]
    fn gram_reproduction_for_a_random_state() {
        let algebra = Algebra::new(vec![2, 2]).unwrap();
        let omega = crate::random::random_state(&algebra, 5);
        let rep = gns_construct(&algebra, &omega, 1e-10).unwrap();
        let x: AlgebraElement<f64> = random_element(&algebra, 31, SampleKind::General);
        let y: AlgebraElement<f64> = random_element(&algebra, 32, SampleKind::General);
        let lhs = inner(
            &(rep.pi(&x).unwrap() * rep.cyclic_vector()),
            &(rep.pi(&y).unwrap() * rep.cyclic_vector()),
        );
        let rhs = omega.evaluate(&(&y.adjoint() * &x)).unwrap();
        assert!((lhs - rhs).norm_sqr().sqrt() < 1e-10);
    }

    #[test]
    fn ambiguous_gram_rank_is_rejected() {
        let algebra = Algebra::full_matrix(2).unwrap();
        let eps = 5e-10;
        let rho = DMatrix::from_row_slice(
            2,
            2,
            &[cpx(1.0 - eps, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(eps, 0.0)],
        );
        let omega = State::new(algebra.clone(), vec![1.0], vec![rho]).unwrap();
        assert!(matches!(
            gns_construct(&algebra, &omega, 1e-10),
            Err(Error::RankAmbiguous { .. })
        ));
    }

    #[test]
    fn zero_map_has_zero_implementing_operator() {
        let rep = trace_rep(2);
        let zero = Superoperator::from_matrix(
            rep.algebra().clone(),
            DMatrix::zeros(4, 4),
            "0",
        )
        .unwrap();
        for form in [ImplementingForm::OneSided, ImplementingForm::TwoSided] {
            let op = implementing_operator(&zero, &rep, form, true, 1e-10).unwrap();
            assert!(linalg::spectral_norm(&op.matrix) < 1e-10);
            assert!(op.residual < 1e-12);
        }
        let s = skew_implementing_operator(&zero, &rep, 1e-10).unwrap();
        assert!(linalg::spectral_norm(&s.matrix) < 1e-10);
    }

    #[test]
    fn commutator_two_sided_fit_is_skew_and_kills_the_cyclic_vector() {
        let rep = trace_rep(3);
        let h: AlgebraElement<f64> =
            random_element(rep.algebra(), 41, SampleKind::Hermitian);
        let delta = commutator_derivation(&h).unwrap();
        let op = implementing_operator(&delta, &rep, ImplementingForm::TwoSided, true, 1e-10).unwrap();
        assert!(op.residual <= 1e-10, "residual {}", op.residual);
        assert!(op.cyclic_defect <= 1e-10, "‖LΩ‖ = {}", op.cyclic_defect);
        let skew_defect = linalg::spectral_norm(&(&op.matrix + op.matrix.adjoint()));
        assert!(skew_defect <= 1e-10, "skew defect {skew_defect}");
        assert!(operator_dissipativity(&op.matrix, 1e-10).dissipative);

        // L acts on classes as x ↦ δ(x)
        let x: AlgebraElement<f64> = random_element(rep.algebra(), 42, SampleKind::General);
        let lhs = &op.matrix * rep.class_vector(&x).unwrap();
        let rhs = rep.class_vector(&delta.apply(&x).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn one_sided_fit_is_exact_on_a_faithful_state() {
        let rep = trace_rep(2);
        let delta = lindblad_generator(&pauli('z'), &[pauli('x').scale(cpx(0.6, 0.0))]).unwrap();
        let op = implementing_operator(&delta, &rep, ImplementingForm::OneSided, false, 1e-9).unwrap();
        assert!(op.residual < 1e-10, "residual {}", op.residual);
        let x: AlgebraElement<f64> = random_element(rep.algebra(), 43, SampleKind::General);
        let lhs = &op.matrix * rep.class_vector(&x).unwrap();
        let rhs = rep.class_vector(&delta.apply(&x).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn operator_dissipativity_examples() {
        let skew = DMatrix::<Cpx<f64>>::from_row_slice(2, 2, &[cpx(0.0, 1.0), cpx(0.3, 0.4), cpx(-0.3, 0.4), cpx(0.0, -2.0)]);
        let verdict = operator_dissipativity(&skew, 1e-12);
        assert!(verdict.dissipative);
        assert!(verdict.max_symmetric_eigenvalue.abs() < 1e-12);

        let minus_eye = DMatrix::<Cpx<f64>>::identity(3, 3) * cpx(-1.0, 0.0);
        assert!(operator_dissipativity(&minus_eye, 1e-12).dissipative);

        let indefinite = DMatrix::<Cpx<f64>>::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(-1.0, 0.0)]);
        let verdict = operator_dissipativity(&indefinite, 1e-12);
        assert!(!verdict.dissipative);
        assert_relative_eq!(verdict.max_symmetric_eigenvalue, 1.0, epsilon = 1e-12);
        let w = verdict.witness.unwrap();
        assert_relative_eq!(w[0].norm_sqr().sqrt(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn skew_operator_for_a_pauli_commutator() {
        let rep = trace_rep(2);
        let delta = commutator_derivation(&pauli('z')).unwrap();
        let s = skew_implementing_operator(&delta, &rep, 1e-10).unwrap();
        assert_eq!(s.form, ImplementingForm::Skew);
        assert!(linalg::spectral_norm(&(&s.matrix + s.matrix.adjoint())) < 1e-12);
        // S acts as x ↦ i σz x − i x σz
        let x: AlgebraElement<f64> = random_element(rep.algebra(), 44, SampleKind::General);
        let lhs = &s.matrix * rep.class_vector(&x).unwrap();
        let rhs = rep.class_vector(&delta.apply(&x).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn skew_fit_preconditions_are_distinguished() {
        let rep = trace_rep(2);
        let lind = lindblad_generator(&pauli('z'), &[pauli('x')]).unwrap();
        assert!(matches!(
            skew_implementing_operator(&lind, &rep, 1e-8),
            Err(Error::NotDerivation { .. })
        ));

        let algebra = Algebra::full_matrix(2).unwrap();
        let rho = DMatrix::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0)]);
        let pure = State::new(algebra.clone(), vec![1.0], vec![rho]).unwrap();
        let pure_rep = gns_construct(&algebra, &pure, 1e-10).unwrap();
        let delta = commutator_derivation(&pauli('x')).unwrap();
        assert!(matches!(
            skew_implementing_operator(&delta, &pure_rep, 1e-8),
            Err(Error::StateNotInvariant { .. })
        ));
    }

    #[test]
    fn commutator_pipeline_is_consistent_with_certification() {
        let algebra = Algebra::full_matrix(2).unwrap();
        let omega = State::trace_state(&algebra);
        let h: AlgebraElement<f64> = random_element(&algebra, 45, SampleKind::Hermitian);
        for delta in [
            commutator_derivation(&h).unwrap(),
            commutator_derivation(&h).unwrap().scale(-1.0),
        ] {
            let report = theorem_report(&delta, &omega, 2, 4, 9, 1e-8).unwrap();
            assert!(report.pipeline_passed(), "report: {report:?}");
            assert_eq!(report.certificate_verdict, "pass");
            assert!(report.consistent);
            assert_eq!(report.gns_dim, 4);
            for level in &report.levels {
                assert!(level.re_form_max <= 1e-8);
                assert!(level.cyclic_defect <= 1e-10);
                assert!(level.pairing_defect_max <= 1e-8);
            }
        }
    }

    #[test]
    fn pipeline_rejects_non_faithful_states() {
        let algebra = Algebra::full_matrix(2).unwrap();
        let rho = DMatrix::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0), cpx(0.0, 0.0)]);
        let pure = State::new(algebra.clone(), vec![1.0], vec![rho]).unwrap();
        let delta = commutator_derivation(&pauli('z')).unwrap();
        assert!(matches!(
            theorem_report(&delta, &pure, 2, 4, 9, 1e-8),
            Err(Error::NotFaithful { gns_dim: 2, element_dim: 4 })
        ));
    }

    #[test]
    fn weyl_damping_is_not_two_sided_implementable() {
        let rep = trace_rep(2);
        let weights = squared_min_length_weights::<f64>(2);
        let delta = weyl_damping_generator(2, &weights).unwrap();
        let err = implementing_operator(&delta, &rep, ImplementingForm::TwoSided, true, 1e-8);
        match err {
            Err(Error::NotImplementable { residual, .. }) => {
                assert!(residual > 0.05, "residual unexpectedly small: {residual}");
            }
            other => panic!("expected NotImplementable, got {other:?}"),
        }
    }

    #[test]
    fn report_serializes_with_contract_keys() {
        let algebra = Algebra::full_matrix(2).unwrap();
        let omega = State::trace_state(&algebra);
        let delta = commutator_derivation(&pauli('y')).unwrap();
        let report = theorem_report(&delta, &omega, 1, 2, 3, 1e-8).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value["gns_dim"].is_u64());
        assert!(value["fit_residual"].is_f64());
        assert!(value["levels"].is_array());
        assert!(value["certificate_verdict"].is_string());
        let back: ImplementationReport = serde_json::from_str(&text).unwrap();
        assert!(back.consistent);
    }
}
