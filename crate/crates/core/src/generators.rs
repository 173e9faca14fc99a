//! Linear maps on an algebra stored as dense matrices over vectorized
//! elements, plus the standard generator constructions.
//!
//! Vectorization is the column-stacking of [`AlgebraElement::vectorize`]:
//! blocks concatenated in order, each block column-major. Matrix-vector
//! products with the stored matrix therefore realize the map exactly.

use nalgebra::DMatrix;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::Error;
use crate::linalg;
use crate::random::{random_element, SampleKind};
use crate::scalar::{cpx, Cpx, Scalar};

/// Construction record attached to a superoperator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub constructor: String,
    pub params: Vec<(String, String)>,
}

/// A linear map A → A as a dense `N×N` matrix, N = element dimension.
#[derive(Clone, Debug)]
pub struct Superoperator<T: Scalar> {
    algebra: Algebra,
    matrix: DMatrix<Cpx<T>>,
    label: String,
    provenance: Option<Provenance>,
}

impl<T: Scalar> Superoperator<T> {
    pub fn from_matrix(algebra: Algebra, matrix: DMatrix<Cpx<T>>, label: impl Into<String>) -> Result<Self, Error> {
        let n = algebra.element_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "superoperator matrix must be {n}×{n}, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Superoperator {
            algebra,
            matrix,
            label: label.into(),
            provenance: None,
        })
    }

    /// Build the matrix column-by-column by applying `map` to each matrix unit.
    pub fn from_map(
        algebra: Algebra,
        label: impl Into<String>,
        mut map: impl FnMut(&AlgebraElement<T>) -> AlgebraElement<T>,
    ) -> Self {
        let n = algebra.element_dim();
        let mut matrix = DMatrix::zeros(n, n);
        for (col, idx) in algebra.basis_indices().into_iter().enumerate() {
            let image = map(&algebra.basis_element(idx));
            matrix.set_column(col, &image.vectorize());
        }
        Superoperator {
            algebra,
            matrix,
            label: label.into(),
            provenance: None,
        }
    }

    pub fn identity(algebra: Algebra) -> Self {
        let n = algebra.element_dim();
        Superoperator {
            algebra,
            matrix: DMatrix::identity(n, n),
            label: "identity".into(),
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &DMatrix<Cpx<T>> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn apply(&self, x: &AlgebraElement<T>) -> Result<AlgebraElement<T>, Error> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let image = &self.matrix * x.vectorize();
        AlgebraElement::from_vectorized(self.algebra.clone(), &image)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self, Error> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Superoperator {
            algebra: self.algebra.clone(),
            matrix: &self.matrix * &other.matrix,
            label: format!("{} ∘ {}", self.label, other.label),
            provenance: None,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Superoperator {
            algebra: self.algebra.clone(),
            matrix: &self.matrix + &other.matrix,
            label: format!("{} + {}", self.label, other.label),
            provenance: None,
        })
    }

    pub fn scale(&self, c: T) -> Self {
        Superoperator {
            algebra: self.algebra.clone(),
            matrix: self.matrix.scale(c),
            label: self.label.clone(),
            provenance: self.provenance.clone(),
        }
    }

    /// Spectral norm of the stored matrix (the ℓ²-vectorization induced norm).
    /// Not the C*-operator-norm induced map norm, but equivalent to it, which
    /// is all the convergence checks need.
    pub fn matrix_norm(&self) -> T {
        linalg::spectral_norm(&self.matrix)
    }

    /// ‖self − other‖ in the same matrix norm.
    pub fn distance(&self, other: &Self) -> Result<T, Error> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(linalg::spectral_norm(&(&self.matrix - &other.matrix)))
    }

    /// ‖δ(1)‖.
    pub fn identity_image_norm(&self) -> T {
        let id = AlgebraElement::identity(self.algebra.clone());
        self.apply(&id).expect("same algebra").operator_norm()
    }

    /// ‖T(1) − 1‖.
    pub fn unitality_defect(&self) -> T {
        let id = AlgebraElement::identity(self.algebra.clone());
        let img = self.apply(&id).expect("same algebra");
        (&img - &id).operator_norm()
    }
}

/// Maximal deviation from δ(x*) = δ(x)* over the matrix-unit basis.
pub fn hermitian_map_defect<T: Scalar>(delta: &Superoperator<T>) -> T {
    let algebra = delta.algebra();
    let mut worst = T::zero();
    for idx in algebra.basis_indices() {
        let x = algebra.basis_element::<T>(idx);
        let lhs = delta.apply(&x.adjoint()).expect("same algebra");
        let rhs = delta.apply(&x).expect("same algebra").adjoint();
        worst = worst.max((&lhs - &rhs).operator_norm());
    }
    worst
}

/// Whether δ(x*) = δ(x)* holds within tol on the basis (hence everywhere, by
/// real-linearity of the defect bound over basis expansions).
pub fn is_hermitian_map<T: Scalar>(delta: &Superoperator<T>, tol: T) -> bool {
    hermitian_map_defect(delta) <= tol
}

/// Maximal Leibniz defect ‖δ(xy) − δ(x)y − xδ(y)‖ over seeded sample pairs,
/// normalized by ‖x‖·‖y‖.
pub fn derivation_defect<T: Scalar>(delta: &Superoperator<T>, seed: u64, samples: usize) -> T {
    let algebra = delta.algebra();
    let mut worst = T::zero();
    for i in 0..samples {
        let x: AlgebraElement<T> = random_element(algebra, seed.wrapping_add(2 * i as u64), SampleKind::General);
        let y: AlgebraElement<T> =
            random_element(algebra, seed.wrapping_add(2 * i as u64 + 1), SampleKind::General);
        let lhs = delta.apply(&(&x * &y)).expect("same algebra");
        let rhs = &delta.apply(&x).expect("same algebra") * &y;
        let rhs2 = &x * &delta.apply(&y).expect("same algebra");
        let defect = (&(&lhs - &rhs) - &rhs2).operator_norm();
        let scale = x.operator_norm() * y.operator_norm();
        worst = worst.max(defect / scale);
    }
    worst
}

/// The inner derivation δ(x) = i[h, x] = i(hx − xh) for Hermitian h.
pub fn commutator_derivation<T: Scalar>(h: &AlgebraElement<T>) -> Result<Superoperator<T>, Error> {
    let tol = T::of(1e-12) * h.operator_norm().max(T::one());
    if h.hermiticity_defect() > tol {
        return Err(Error::InvalidInput("commutator generator needs Hermitian h".into()));
    }
    let i = cpx::<T>(0.0, 1.0);
    let delta = Superoperator::from_map(h.algebra().clone(), "i[h, ·]", |x| {
        (&(h * x) - &(x * h)).scale(i)
    });
    Ok(delta.with_provenance(Provenance {
        constructor: "commutator_derivation".into(),
        params: vec![("h_norm".into(), format!("{:?}", h.operator_norm().to_f64()))],
    }))
}

/// The Lindblad generator
/// δ(x) = i[h, x] + Σₖ (Vₖ* x Vₖ − ½{Vₖ*Vₖ, x}).
pub fn lindblad_generator<T: Scalar>(
    h: &AlgebraElement<T>,
    jumps: &[AlgebraElement<T>],
) -> Result<Superoperator<T>, Error> {
    let algebra = h.algebra().clone();
    let tol = T::of(1e-12) * h.operator_norm().max(T::one());
    if h.hermiticity_defect() > tol {
        return Err(Error::InvalidInput("Lindblad generator needs Hermitian h".into()));
    }
    for v in jumps {
        if v.algebra() != &algebra {
            return Err(Error::AlgebraMismatch);
        }
    }
    let i = cpx::<T>(0.0, 1.0);
    let half = cpx::<T>(0.5, 0.0);
    let vstarv: Vec<AlgebraElement<T>> = jumps.iter().map(|v| &v.adjoint() * v).collect();
    let delta = Superoperator::from_map(algebra, "lindblad", |x| {
        let mut acc = (&(h * x) - &(x * h)).scale(i);
        for (v, vv) in jumps.iter().zip(&vstarv) {
            let sandwich = &(&v.adjoint() * x) * v;
            let anti = (&(vv * x) + &(x * vv)).scale(half);
            acc = &acc + &(&sandwich - &anti);
        }
        acc
    });
    Ok(delta.with_provenance(Provenance {
        constructor: "lindblad_generator".into(),
        params: vec![("jump_count".into(), jumps.len().to_string())],
    }))
}

/// Discrete Weyl operator W(p, q) = Xᵖ Zᵠ on C^d, where X is the cyclic
/// shift (X e_j = e_{j+1 mod d}) and Z = diag(ζʲ) with ζ = e^{2πi/d}.
pub fn weyl_matrix<T: Scalar>(d: usize, p: usize, q: usize) -> DMatrix<Cpx<T>> {
    let mut m = DMatrix::zeros(d, d);
    let two_pi = 2.0 * std::f64::consts::PI;
    for j in 0..d {
        // (X^p Z^q) e_j = ζ^{qj} e_{j+p}
        let phase = two_pi * (q * j) as f64 / d as f64;
        m[((j + p) % d, j)] = cpx::<T>(phase.cos(), phase.sin());
    }
    m
}

/// Squared length of the minimal representative of (p, q) in (Z_d)²:
/// min over representatives p' ≡ p, q' ≡ q of p'² + q'².
pub fn squared_min_length_weights<T: Scalar>(d: usize) -> DMatrix<T> {
    let min_sq = |r: usize| -> f64 {
        let r = r % d;
        let a = r as f64;
        let b = (d - r) as f64;
        (a * a).min(b * b)
    };
    DMatrix::from_fn(d, d, |p, q| T::of(min_sq(p) + min_sq(q)))
}

/// Diagonal damping generator of the discrete Weyl system on M_d:
/// δ(W(v)) = −c(v)·W(v), extended linearly via the Hilbert-Schmidt expansion
/// x = Σᵥ tr(W(v)* x)/d · W(v).
///
/// Hermiticity of the map requires c(−v) = c(v); weights are real, c(0,0)
/// must vanish so that δ(1) = 0.
pub fn weyl_damping_generator<T: Scalar>(d: usize, weights: &DMatrix<T>) -> Result<Superoperator<T>, Error> {
    if d == 0 {
        return Err(Error::InvalidInput("Weyl system needs d ≥ 1".into()));
    }
    if weights.nrows() != d || weights.ncols() != d {
        return Err(Error::ShapeMismatch(format!("weights must be {d}×{d}")));
    }
    let tol = T::of(1e-12);
    if weights[(0, 0)].abs() > tol {
        return Err(Error::InvalidInput("weight at (0,0) must vanish so δ(1) = 0".into()));
    }
    for p in 0..d {
        for q in 0..d {
            let mirror = weights[((d - p) % d, (d - q) % d)];
            if (weights[(p, q)] - mirror).abs() > tol {
                return Err(Error::InvalidInput(
                    "weights must satisfy c(−v) = c(v) for a Hermitian map".into(),
                ));
            }
        }
    }
    let algebra = Algebra::full_matrix(d)?;
    let weyls: Vec<(T, DMatrix<Cpx<T>>)> = (0..d)
        .flat_map(|p| (0..d).map(move |q| (p, q)))
        .map(|(p, q)| (weights[(p, q)], weyl_matrix::<T>(d, p, q)))
        .collect();
    let dd = T::of(d as f64);
    let delta = Superoperator::from_map(algebra, "weyl damping", |x| {
        let xm = x.block(0);
        let mut acc = DMatrix::<Cpx<T>>::zeros(d, d);
        for (c, w) in &weyls {
            if c.abs() <= tol {
                continue;
            }
            // coefficient tr(W(v)* x)/d in the HS-orthogonal Weyl basis
            let coeff = (w.adjoint() * xm).trace() / Cpx::new(dd, T::zero());
            acc += w * (coeff * Cpx::new(-*c, T::zero()));
        }
        AlgebraElement::from_matrix(acc).expect("square block")
    });
    Ok(delta.with_provenance(Provenance {
        constructor: "weyl_damping_generator".into(),
        params: vec![("d".into(), d.to_string())],
    }))
}

/// The amplification δₙ = δ ⊗ idₙ on `A ⊗ Mₙ`.
///
/// Amplified elements live on blocks of size n·dₖ read as an n×n grid of
/// dₖ×dₖ sub-blocks (Mₙ outer, A inner): entry (i, j) of the grid across all
/// blocks forms an element x_{ij} of A, and δₙ applies δ to each x_{ij}.
pub fn amplify<T: Scalar>(delta: &Superoperator<T>, n: usize) -> Result<Superoperator<T>, Error> {
    let base = delta.algebra().clone();
    let amplified = base.amplified(n)?;
    let result = Superoperator::from_map(amplified, format!("{} ⊗ id_{n}", delta.label()), |y| {
        apply_amplified(delta, n, y).expect("basis elements live on the amplified algebra")
    });
    Ok(result)
}

/// Applies δ ⊗ idₙ to one element of the n-fold amplification without
/// materializing the amplified superoperator matrix, which grows as
/// (n²·dim)². Exact for any map, and since δₙ acts sub-blockwise,
/// exp(tδₙ) = exp(tδ) ⊗ idₙ may be evaluated the same way.
pub fn apply_amplified<T: Scalar>(
    map: &Superoperator<T>,
    n: usize,
    x: &AlgebraElement<T>,
) -> Result<AlgebraElement<T>, Error> {
    let base = map.algebra();
    let amplified = base.amplified(n)?;
    if x.algebra() != &amplified {
        return Err(Error::AlgebraMismatch);
    }
    let dims = base.blocks();
    let mut out = AlgebraElement::zero(amplified.clone());
    for i in 0..n {
        for j in 0..n {
            let sub_blocks: Vec<DMatrix<Cpx<T>>> = dims
                .iter()
                .enumerate()
                .map(|(k, &d)| x.block(k).view((i * d, j * d), (d, d)).into_owned())
                .collect();
            let sub = AlgebraElement::new(base.clone(), sub_blocks)?;
            let mapped = map.apply(&sub)?;
            for (k, &d) in dims.iter().enumerate() {
                out.block_mut(k).view_mut((i * d, j * d), (d, d)).copy_from(mapped.block(k));
            }
        }
    }
    Ok(out)
}

/// The entangled grid element Σᵢⱼ Eᵢⱼ ⊗ gᵢⱼ of the n-fold amplification,
/// where g runs over an n×n array of algebra elements.
pub fn grid_element<T: Scalar>(
    base: &Algebra,
    n: usize,
    mut entry: impl FnMut(usize, usize) -> AlgebraElement<T>,
) -> Result<AlgebraElement<T>, Error> {
    let amplified = base.amplified(n)?;
    let mut out = AlgebraElement::zero(amplified);
    for i in 0..n {
        for j in 0..n {
            let x = entry(i, j);
            if x.algebra() != base {
                return Err(Error::AlgebraMismatch);
            }
            for (k, &d) in base.blocks().iter().enumerate() {
                out.block_mut(k).view_mut((i * d, j * d), (d, d)).copy_from(x.block(k));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn commutator_derivation_on_paulis() {
        // i[σz, σx] = i·2iσy = −2σy
        let delta = commutator_derivation(&pauli('z')).unwrap();
        let img = delta.apply(&pauli('x')).unwrap();
        let expected = pauli('y').scale(cpx(-2.0, 0.0));
        assert!((&img - &expected).operator_norm() < 1e-13);
    }

    #[test]
    fn commutator_derivation_satisfies_leibniz_and_hermiticity() {
        let h: AlgebraElement<f64> = random_element(&Algebra::new(vec![3]).unwrap(), 3, SampleKind::Hermitian);
        let delta = commutator_derivation(&h).unwrap();
        assert!(hermitian_map_defect(&delta) < 1e-12 * h.operator_norm());
        assert!(derivation_defect(&delta, 17, 5) < 1e-12 * h.operator_norm());
        assert!(delta.identity_image_norm() < 1e-13);
    }

    #[test]
    fn lindblad_with_sigma_x_jump_damps_sigma_z() {
        // V = σx: V*σzV − ½{V*V, σz} = σxσzσx − σz = −2σz
        let h = pauli('z').scale(cpx(0.0, 0.0));
        let delta = lindblad_generator(&h, &[pauli('x')]).unwrap();
        let img = delta.apply(&pauli('z')).unwrap();
        let expected = pauli('z').scale(cpx(-2.0, 0.0));
        assert!((&img - &expected).operator_norm() < 1e-13);
        assert!(delta.identity_image_norm() < 1e-13);
        assert!(hermitian_map_defect(&delta) < 1e-12);
    }

    #[test]
    fn weyl_relations_hold() {
        let d = 5;
        let x = weyl_matrix::<f64>(d, 1, 0);
        let z = weyl_matrix::<f64>(d, 0, 1);
        let zeta = cpx::<f64>(
            (2.0 * std::f64::consts::PI / d as f64).cos(),
            (2.0 * std::f64::consts::PI / d as f64).sin(),
        );
        // ZX = ζ XZ
        let lhs = &z * &x;
        let rhs = (&x * &z) * zeta;
        assert!(linalg::spectral_norm(&(lhs - rhs)) < 1e-13);
        // W(p,q)* = ζ^{pq} W(−p,−q)
        for (p, q) in [(1usize, 2usize), (3, 4), (2, 2)] {
            let w = weyl_matrix::<f64>(d, p, q);
            let winv = weyl_matrix::<f64>(d, (d - p) % d, (d - q) % d);
            let phase_angle = 2.0 * std::f64::consts::PI * ((p * q) % d) as f64 / d as f64;
            let phase = cpx::<f64>(phase_angle.cos(), phase_angle.sin());
            assert!(linalg::spectral_norm(&(w.adjoint() - winv * phase)) < 1e-12);
        }
        // Hilbert-Schmidt orthogonality tr(W(u)* W(v)) = d·δ_uv
        let w12 = weyl_matrix::<f64>(d, 1, 2);
        assert_relative_eq!((w12.adjoint() * &w12).trace().re, d as f64, epsilon = 1e-12);
        let w30 = weyl_matrix::<f64>(d, 3, 0);
        assert!((w12.adjoint() * &w30).trace().norm() < 1e-12);
    }

    #[test]
    fn weyl_damping_diagonalizes_on_weyl_basis() {
        let d = 3;
        let weights = squared_min_length_weights::<f64>(d);
        let delta = weyl_damping_generator(d, &weights).unwrap();
        for p in 0..d {
            for q in 0..d {
                let w = AlgebraElement::from_matrix(weyl_matrix::<f64>(d, p, q)).unwrap();
                let img = delta.apply(&w).unwrap();
                let expected = w.scale(cpx(-weights[(p, q)], 0.0));
                assert!((&img - &expected).operator_norm() < 1e-12);
            }
        }
        assert!(hermitian_map_defect(&delta) < 1e-12);
        assert!(delta.identity_image_norm() < 1e-13);
    }

    #[test]
    fn qubit_weyl_weights_match_pauli_damping_rates() {
        // d = 2: c(0,0) = 0, c(1,0) = c(0,1) = 1, c(1,1) = 2
        let w = squared_min_length_weights::<f64>(2);
        assert_eq!(w[(0, 0)], 0.0);
        assert_eq!(w[(1, 0)], 1.0);
        assert_eq!(w[(0, 1)], 1.0);
        assert_eq!(w[(1, 1)], 2.0);
    }

    #[test]
    fn amplification_acts_blockwise_on_the_grid() {
        let h: AlgebraElement<f64> = random_element(&Algebra::new(vec![2]).unwrap(), 9, SampleKind::Hermitian);
        let delta = commutator_derivation(&h).unwrap();
        let delta2 = amplify(&delta, 2).unwrap();
        assert_eq!(delta2.algebra().blocks(), &[4]);

        // y = E_01 ⊗ x: δ₂(y) = E_01 ⊗ δ(x)
        let x: AlgebraElement<f64> = random_element(h.algebra(), 10, SampleKind::General);
        let y = grid_element(h.algebra(), 2, |i, j| {
            if (i, j) == (0, 1) {
                x.clone()
            } else {
                AlgebraElement::zero(h.algebra().clone())
            }
        })
        .unwrap();
        let img = delta2.apply(&y).unwrap();
        let dx = delta.apply(&x).unwrap();
        let expected = grid_element(h.algebra(), 2, |i, j| {
            if (i, j) == (0, 1) {
                dx.clone()
            } else {
                AlgebraElement::zero(h.algebra().clone())
            }
        })
        .unwrap();
        assert!((&img - &expected).operator_norm() < 1e-13);
    }

    #[test]
    fn amplification_of_direct_sum_keeps_block_structure() {
        let a = Algebra::new(vec![2, 3]).unwrap();
        let h: AlgebraElement<f64> = random_element(&a, 21, SampleKind::Hermitian);
        let delta = commutator_derivation(&h).unwrap();
        let delta3 = amplify(&delta, 3).unwrap();
        assert_eq!(delta3.algebra().blocks(), &[6, 9]);
        // identity is preserved: δ₃(1) = 0
        assert!(delta3.identity_image_norm() < 1e-12);
    }
}
