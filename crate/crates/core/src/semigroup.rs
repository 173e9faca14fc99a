//! Resolvents, Euler approximants, semigroup exponentials, complete
//! positivity via Choi matrices, and generator recovery.

use nalgebra::{DMatrix, DVector};

use crate::algebra::AlgebraElement;
use crate::error::Error;
use crate::generators::{grid_element, Superoperator};
use crate::linalg;
use crate::random::{random_element, SampleKind};
use crate::scalar::{Cpx, Scalar};

/// Condition-number ceiling for resolvent solves.
pub const RESOLVENT_CONDITION_LIMIT: f64 = 1e12;

/// The resolvent (I − αδ)⁻¹ as a superoperator, via a dense LU solve.
///
/// Errors when I − αδ is numerically singular (condition number above
/// [`RESOLVENT_CONDITION_LIMIT`]).
pub fn resolvent<T: Scalar>(delta: &Superoperator<T>, alpha: T) -> Result<Superoperator<T>, Error> {
    let n = delta.algebra().element_dim();
    let system = DMatrix::<Cpx<T>>::identity(n, n) - delta.matrix().scale(alpha);
    let cond = linalg::condition_number(&system).to_f64().unwrap_or(f64::INFINITY);
    if cond > RESOLVENT_CONDITION_LIMIT {
        return Err(Error::IllConditioned {
            cond,
            limit: RESOLVENT_CONDITION_LIMIT,
        });
    }
    let inverse = system
        .lu()
        .try_inverse()
        .ok_or(Error::IllConditioned {
            cond: f64::INFINITY,
            limit: RESOLVENT_CONDITION_LIMIT,
        })?;
    Superoperator::from_matrix(
        delta.algebra().clone(),
        inverse,
        format!("(I − {:?}·δ)⁻¹", alpha.to_f64()),
    )
}

/// The resolvent R(k) = (kI − δ)⁻¹ for k ≠ 0, as (1/k)·(I − δ/k)⁻¹.
pub fn resolvent_at<T: Scalar>(delta: &Superoperator<T>, k: T) -> Result<Superoperator<T>, Error> {
    if k == T::zero() {
        return Err(Error::InvalidInput("resolvent point k must be nonzero".into()));
    }
    Ok(resolvent(delta, T::one() / k)?.scale(T::one() / k))
}

/// The Euler approximant (I − (t/n)δ)⁻ⁿ.
pub fn euler_approximant<T: Scalar>(delta: &Superoperator<T>, t: T, n: u64) -> Result<Superoperator<T>, Error> {
    if n == 0 {
        return Err(Error::InvalidInput("Euler approximant needs n ≥ 1".into()));
    }
    let step = resolvent(delta, t / T::of(n as f64))?;
    Superoperator::from_matrix(
        delta.algebra().clone(),
        linalg::matrix_power(step.matrix(), n),
        format!("euler[n={n}]"),
    )
}

/// The semigroup element exp(tδ).
pub fn exp_generator<T: Scalar>(delta: &Superoperator<T>, t: T) -> Superoperator<T> {
    let m = linalg::expm(&delta.matrix().scale(t));
    Superoperator::from_matrix(delta.algebra().clone(), m, format!("exp({:?}·δ)", t.to_f64()))
        .expect("matrix shape is preserved")
}

/// Finite-difference recovery of a generator from a semigroup family:
/// (τ(h) − I)/h.
pub fn recover_generator<T: Scalar>(
    tau: impl Fn(T) -> Superoperator<T>,
    h: T,
) -> Result<Superoperator<T>, Error> {
    if h <= T::zero() {
        return Err(Error::InvalidInput("step size h must be positive".into()));
    }
    let at_h = tau(h);
    let n = at_h.algebra().element_dim();
    let m = (at_h.matrix() - DMatrix::<Cpx<T>>::identity(n, n)).unscale(h);
    Superoperator::from_matrix(at_h.algebra().clone(), m, "finite-difference generator")
}

/// The Choi matrix Σᵢⱼ Eᵢⱼ ⊗ T(Eᵢⱼ) of a map on a single-block algebra M_d,
/// with the left Kronecker factor indexing the input matrix unit.
#[derive(Clone, Debug)]
pub struct ChoiMatrix<T: Scalar> {
    pub matrix: DMatrix<Cpx<T>>,
    pub hermitian_defect: T,
    pub min_eigenvalue: T,
    pub min_eigenvector: DVector<Cpx<T>>,
}

/// Errors unless the algebra is a single full matrix block; complete
/// positivity of a direct-sum map needs [`blockwise_positivity_probe`].
pub fn choi_matrix<T: Scalar>(map: &Superoperator<T>) -> Result<ChoiMatrix<T>, Error> {
    let algebra = map.algebra();
    if algebra.num_blocks() != 1 {
        return Err(Error::InvalidInput(
            "Choi matrix is defined blockwise; use the blockwise positivity probe for direct sums".into(),
        ));
    }
    let d = algebra.blocks()[0];
    let mut choi = DMatrix::<Cpx<T>>::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut unit = AlgebraElement::zero(algebra.clone());
            unit.block_mut(0)[(i, j)] = Cpx::new(T::one(), T::zero());
            let image = map.apply(&unit).expect("same algebra");
            // place T(E_ij) at outer position (i, j)
            choi.view_mut((i * d, j * d), (d, d)).copy_from(image.block(0));
        }
    }
    let hermitian_defect = linalg::hermiticity_defect(&choi);
    let (min_eigenvalue, min_eigenvector) = linalg::min_hermitian_eigenpair(&choi);
    Ok(ChoiMatrix {
        matrix: choi,
        hermitian_defect,
        min_eigenvalue,
        min_eigenvector,
    })
}

/// Verdict of a complete-positivity check via the Choi matrix.
#[derive(Clone, Debug)]
pub struct CpCheck<T: Scalar> {
    pub completely_positive: bool,
    pub hermitian_defect: T,
    pub min_eigenvalue: T,
    /// Choi eigenvector for the minimal eigenvalue when the check fails.
    pub witness: Option<DVector<Cpx<T>>>,
}

/// Complete positivity of a map on M_d: the Choi matrix is PSD.
///
/// The failure witness w satisfies ⟨C w, w⟩ = min eigenvalue < 0, and
/// converts to a d-positivity violation via
/// [`cp_witness_violation`].
pub fn is_completely_positive<T: Scalar>(map: &Superoperator<T>, tol: T) -> Result<CpCheck<T>, Error> {
    let choi = choi_matrix(map)?;
    let ok = choi.hermitian_defect <= tol && choi.min_eigenvalue >= -tol;
    Ok(CpCheck {
        completely_positive: ok,
        hermitian_defect: choi.hermitian_defect,
        min_eigenvalue: choi.min_eigenvalue,
        witness: if ok { None } else { Some(choi.min_eigenvector) },
    })
}

/// Converts a failed Choi check into an explicit d-positivity violation:
/// returns the positive element P = Σᵢⱼ Eᵢⱼ ⊗ Eᵢⱼ of M_d ⊗ M_d and the
/// quadratic form value ⟨(T ⊗ id)(P)·w, w⟩, which equals the negative Choi
/// eigenvalue.
pub fn cp_witness_violation<T: Scalar>(
    map: &Superoperator<T>,
    witness: &DVector<Cpx<T>>,
) -> Result<(AlgebraElement<T>, T), Error> {
    let algebra = map.algebra();
    if algebra.num_blocks() != 1 {
        return Err(Error::InvalidInput("witness conversion needs a single block".into()));
    }
    let d = algebra.blocks()[0];
    let entangled = grid_element(algebra, d, |i, j| {
        let mut unit = AlgebraElement::zero(algebra.clone());
        unit.block_mut(0)[(i, j)] = Cpx::new(T::one(), T::zero());
        unit
    })?;
    let image = crate::generators::apply_amplified(map, d, &entangled)?;
    let quad = (witness.adjoint() * image.block(0) * witness)[(0, 0)].re;
    Ok((entangled, quad))
}

/// Blockwise positivity probe for maps on direct sums, where no single Choi
/// matrix exists. Checks positivity of amplified images of seeded positive
/// samples up to level `n_max`. A pass is evidence, not a certificate.
#[derive(Clone, Debug)]
pub struct PositivityProbe<T: Scalar> {
    pub passed: bool,
    pub min_eigenvalue: T,
    pub failing_level: Option<usize>,
}

pub fn blockwise_positivity_probe<T: Scalar>(
    map: &Superoperator<T>,
    n_max: usize,
    samples: usize,
    seed: u64,
    tol: T,
) -> Result<PositivityProbe<T>, Error> {
    let algebra = map.algebra().clone();
    let mut min_eig = T::big();
    for n in 1..=n_max {
        for s in 0..samples {
            let x: AlgebraElement<T> = random_element(
                &algebra.amplified(n)?,
                seed.wrapping_add((n * samples + s) as u64),
                SampleKind::Positive,
            );
            let image = crate::generators::apply_amplified(map, n, &x)?;
            let check = image.positivity(tol * x.operator_norm());
            min_eig = min_eig.min(check.min_eigenvalue);
            if !check.positive {
                return Ok(PositivityProbe {
                    passed: false,
                    min_eigenvalue: check.min_eigenvalue,
                    failing_level: Some(n),
                });
            }
        }
    }
    Ok(PositivityProbe {
        passed: true,
        min_eigenvalue: min_eig,
        failing_level: None,
    })
}

/// Residual of the resolvent identity
/// R(k₁) − R(k₂) = (k₂ − k₁)·R(k₁)·R(k₂), in the matrix norm.
pub fn check_resolvent_identity<T: Scalar>(
    delta: &Superoperator<T>,
    k1: T,
    k2: T,
) -> Result<T, Error> {
    let r1 = resolvent_at(delta, k1)?;
    let r2 = resolvent_at(delta, k2)?;
    let lhs = r1.matrix() - r2.matrix();
    let rhs = (r1.matrix() * r2.matrix()).scale(k2 - k1);
    Ok(linalg::spectral_norm(&(lhs - rhs)))
}

/// Kadison-Schwarz evaluation T(x*x) − T(x)*T(x) for unital T: returns the
/// positivity check of the difference. Errors when T is not unital within tol.
pub fn check_schwarz_inequality<T: Scalar>(
    map: &Superoperator<T>,
    x: &AlgebraElement<T>,
    tol: T,
) -> Result<crate::algebra::PositivityCheck<T>, Error> {
    let unital_defect = map.unitality_defect();
    if unital_defect > tol {
        return Err(Error::NotUnital {
            defect: unital_defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lhs = map.apply(&(&x.adjoint() * x))?;
    let tx = map.apply(x)?;
    let rhs = &tx.adjoint() * &tx;
    let scale = x.operator_norm();
    Ok((&lhs - &rhs).positivity(tol * (T::one() + scale * scale)))
}

/// Dissipation inequality δ(x*x) − δ(x)*x − x*δ(x) for identity-killing δ:
/// positivity check of the combination. Errors when ‖δ(1)‖ > tol.
pub fn check_dissipation_inequality<T: Scalar>(
    delta: &Superoperator<T>,
    x: &AlgebraElement<T>,
    tol: T,
) -> Result<crate::algebra::PositivityCheck<T>, Error> {
    let id_defect = delta.identity_image_norm();
    if id_defect > tol {
        return Err(Error::NotIdentityKilling {
            defect: id_defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let lhs = delta.apply(&(&x.adjoint() * x))?;
    let dx = delta.apply(x)?;
    let mixed = &(&dx.adjoint() * x) + &(&x.adjoint() * &dx);
    let scale = x.operator_norm();
    Ok((&lhs - &mixed).positivity(tol * (T::one() + scale * scale)))
}

/// Convenience: algebra of a map family at t = 0⁺ checked against δ:
/// ‖(τ(h) − I)/h − δ‖ in the matrix norm.
pub fn generator_recovery_error<T: Scalar>(
    tau: impl Fn(T) -> Superoperator<T>,
    delta: &Superoperator<T>,
    h: T,
) -> Result<T, Error> {
    let recovered = recover_generator(tau, h)?;
    recovered.distance(delta)
}

/// Shared default time grid for semigroup-level checks.
pub fn default_time_grid<T: Scalar>() -> Vec<T> {
    vec![T::of(0.1), T::of(0.5), T::of(1.0), T::of(2.0)]
}
