//! Dense complex linear algebra helpers shared across the crate.
//!
//! Everything here works on `DMatrix<Complex<T>>` for any [`Scalar`] `T`.

use nalgebra::{DMatrix, DVector};

use crate::scalar::{Cpx, Scalar};

/// Largest singular value of a dense matrix.
pub fn spectral_norm<T: Scalar>(m: &DMatrix<Cpx<T>>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().copied().fold(T::zero(), |acc, s| acc.max(s))
}

/// Smallest singular value of a dense matrix.
pub fn smallest_singular_value<T: Scalar>(m: &DMatrix<Cpx<T>>) -> T {
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().copied().fold(T::big(), |acc, s| acc.min(s))
}

/// 2-norm condition number `σ_max / σ_min`; `T::big()` when singular.
pub fn condition_number<T: Scalar>(m: &DMatrix<Cpx<T>>) -> T {
    let sv = m.clone().svd(false, false).singular_values;
    let hi = sv.iter().copied().fold(T::zero(), |a, s| a.max(s));
    let lo = sv.iter().copied().fold(T::big(), |a, s| a.min(s));
    if lo <= T::zero() {
        T::big()
    } else {
        hi / lo
    }
}

/// Hermiticity defect `‖m − m†‖₂`.
pub fn hermiticity_defect<T: Scalar>(m: &DMatrix<Cpx<T>>) -> T {
    spectral_norm(&(m - m.adjoint()))
}

/// Eigendecomposition of the Hermitian part of `m`, eigenvalues ascending.
///
/// The input is symmetrized as `(m + m†)/2` before decomposition, so callers
/// must check [`hermiticity_defect`] themselves when that matters.
pub fn hermitian_eigen<T: Scalar>(m: &DMatrix<Cpx<T>>) -> (Vec<T>, DMatrix<Cpx<T>>) {
    let herm = (m + m.adjoint()).scale(T::of(0.5));
    let eig = nalgebra::SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Smallest eigenvalue of the Hermitian part together with its eigenvector.
pub fn min_hermitian_eigenpair<T: Scalar>(m: &DMatrix<Cpx<T>>) -> (T, DVector<Cpx<T>>) {
    let (values, vectors) = hermitian_eigen(m);
    (values[0], vectors.column(0).into_owned())
}

/// `m^n` by binary exponentiation.
pub fn matrix_power<T: Scalar>(m: &DMatrix<Cpx<T>>, n: u64) -> DMatrix<Cpx<T>> {
    let dim = m.nrows();
    let mut result = DMatrix::identity(dim, dim);
    let mut base = m.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Least-squares solution of `A·X = B` via SVD, usable for rectangular `A`.
pub fn lstsq<T: Scalar>(a: &DMatrix<Cpx<T>>, b: &DMatrix<Cpx<T>>) -> DMatrix<Cpx<T>> {
    let svd = a.clone().svd(true, true);
    let eps = T::of(1e-13) * svd.singular_values.iter().copied().fold(T::zero(), T::max);
    svd.solve(b, eps).expect("SVD factors requested")
}

/// Real-valued least squares `A·x = b` via SVD.
pub fn lstsq_real<T: Scalar>(a: &DMatrix<T>, b: &DVector<T>) -> DVector<T> {
    let svd = a.clone().svd(true, true);
    let eps = T::of(1e-13) * svd.singular_values.iter().copied().fold(T::zero(), T::max);
    let sol = svd.solve(b, eps).expect("SVD factors requested");
    DVector::from_column_slice(sol.as_slice())
}

/// Maximum column sum of moduli (the induced 1-norm).
fn one_norm<T: Scalar>(m: &DMatrix<Cpx<T>>) -> T {
    use nalgebra::ComplexField;
    let mut best = T::zero();
    for col in m.column_iter() {
        let s = col.iter().fold(T::zero(), |acc, z| acc + z.modulus());
        best = best.max(s);
    }
    best
}

// Padé coefficient tables and 1-norm thresholds from the scaling-and-squaring
// method (Higham 2005); backward error below 1e-13 at f64 precision.
const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

/// Matrix exponential by scaling and squaring with Padé approximants.
pub fn expm<T: Scalar>(a: &DMatrix<Cpx<T>>) -> DMatrix<Cpx<T>> {
    let dim = a.nrows();
    assert_eq!(dim, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a).to_f64().unwrap_or(f64::INFINITY);

    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade(a, &PADE_3);
        (u, v, 0u32)
    } else if norm <= THETA_5 {
        let (u, v) = pade(a, &PADE_5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = pade(a, &PADE_7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = pade(a, &PADE_9);
        (u, v, 0)
    } else {
        let squarings = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
        let scaled = a.scale(T::of(0.5).powi(squarings as i32));
        let (u, v) = pade13(&scaled);
        (u, v, squarings)
    };

    // exp(A) ≈ (V − U)⁻¹ (V + U)
    let numer = &v + &u;
    let denom = &v - &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .expect("Padé denominator is invertible for scaled input");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// U (odd part times A) and V (even part) of the degree-(len−1) Padé numerator.
fn pade<T: Scalar, const N: usize>(
    a: &DMatrix<Cpx<T>>,
    b: &[f64; N],
) -> (DMatrix<Cpx<T>>, DMatrix<Cpx<T>>) {
    let dim = a.nrows();
    let ident = DMatrix::<Cpx<T>>::identity(dim, dim);
    let a2 = a * a;
    // powers[k] = A^(2k)
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() < N / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = DMatrix::<Cpx<T>>::zeros(dim, dim);
    let mut even = DMatrix::<Cpx<T>>::zeros(dim, dim);
    for (k, pow) in powers.iter().enumerate() {
        even += pow.scale(T::of(b[2 * k]));
        if 2 * k + 1 < N {
            odd += pow.scale(T::of(b[2 * k + 1]));
        }
    }
    (a * odd, even)
}

/// Degree-13 Padé with the factored evaluation scheme (avoids A^12).
fn pade13<T: Scalar>(a: &DMatrix<Cpx<T>>) -> (DMatrix<Cpx<T>>, DMatrix<Cpx<T>>) {
    let b = &PADE_13;
    let dim = a.nrows();
    let ident = DMatrix::<Cpx<T>>::identity(dim, dim);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (a6.scale(T::of(b[13])) + a4.scale(T::of(b[11])) + a2.scale(T::of(b[9])));
    let u_outer = a6.scale(T::of(b[7]))
        + a4.scale(T::of(b[5]))
        + a2.scale(T::of(b[3]))
        + ident.scale(T::of(b[1]));
    let u = a * (u_inner + u_outer);

    let v_inner = &a6 * (a6.scale(T::of(b[12])) + a4.scale(T::of(b[10])) + a2.scale(T::of(b[8])));
    let v = v_inner
        + a6.scale(T::of(b[6]))
        + a4.scale(T::of(b[4]))
        + a2.scale(T::of(b[2]))
        + ident.scale(T::of(b[0]));
    (u, v)
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Scalar>(a: &DMatrix<Cpx<T>>, b: &DMatrix<Cpx<T>>) -> DMatrix<Cpx<T>> {
    a.kronecker(b)
}
