//! Finite-dimensional C*-algebras as direct sums of full matrix blocks,
//! their elements, and states.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::linalg;
use crate::scalar::{Cpx, Scalar};

/// Default cap on the element dimension Σ dₖ² of an algebra.
pub const DEFAULT_ELEMENT_DIM_CAP: usize = 4096;

/// A finite-dimensional C*-algebra `⊕ₖ M_{dₖ}`, described by its block sizes.
#[derive(Clone, Debug)]
pub struct Algebra {
    blocks: Vec<usize>,
    cap: usize,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.blocks == other.blocks
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Algebra with the given block sizes under the default element-dimension cap.
    pub fn new(blocks: Vec<usize>) -> Result<Self, Error> {
        Self::with_cap(blocks, DEFAULT_ELEMENT_DIM_CAP)
    }

    /// Algebra with an explicit cap on Σ dₖ².
    pub fn with_cap(blocks: Vec<usize>, cap: usize) -> Result<Self, Error> {
        if blocks.is_empty() {
            return Err(Error::InvalidAlgebra("block list must be non-empty".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidAlgebra("block sizes must be positive".into()));
        }
        let element_dim: usize = blocks.iter().map(|d| d * d).sum();
        if element_dim > cap {
            return Err(Error::DimensionCap {
                requested: element_dim,
                cap,
            });
        }
        Ok(Algebra { blocks, cap })
    }

    /// The full matrix algebra `M_d` as a single block.
    pub fn full_matrix(d: usize) -> Result<Self, Error> {
        Self::new(vec![d])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Dimension of the direct-sum representation space, D = Σ dₖ.
    pub fn embedding_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Linear dimension of the algebra, N = Σ dₖ².
    pub fn element_dim(&self) -> usize {
        self.blocks.iter().map(|d| d * d).sum()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Matrix-unit basis indices in vectorization order: blocks in order, and
    /// within block k the entries of `M_{dₖ}` column-major (column index
    /// slowest would be row-major; here columns stack, so `col` varies slowest
    /// of the two only after `row`).
    pub fn basis_indices(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.element_dim());
        for (block, &d) in self.blocks.iter().enumerate() {
            for col in 0..d {
                for row in 0..d {
                    out.push(BasisIndex { block, row, col });
                }
            }
        }
        out
    }

    /// The matrix-unit basis element `E^{(k)}_{row,col}`.
    pub fn basis_element<T: Scalar>(&self, idx: BasisIndex) -> AlgebraElement<T> {
        let mut x = AlgebraElement::zero(self.clone());
        x.blocks[idx.block][(idx.row, idx.col)] = Cpx::new(T::one(), T::zero());
        x
    }

    /// The amplification `A ⊗ Mₙ`, realized as blocks of size `n·dₖ`.
    pub fn amplified(&self, n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("amplification order must be ≥ 1".into()));
        }
        Self::with_cap(self.blocks.iter().map(|d| d * n).collect(), self.cap)
    }
}

/// Position of a matrix unit within an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisIndex {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// An element of a finite-dimensional C*-algebra: one dense matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<T: Scalar> {
    algebra: Algebra,
    blocks: Vec<DMatrix<Cpx<T>>>,
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn new(algebra: Algebra, blocks: Vec<DMatrix<Cpx<T>>>) -> Result<Self, Error> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} blocks, got {}",
                algebra.num_blocks(),
                blocks.len()
            )));
        }
        for (k, (m, &d)) in blocks.iter().zip(algebra.blocks()).enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::ShapeMismatch(format!(
                    "block {k} must be {d}×{d}, got {}×{}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    /// Element of a single-block algebra from one matrix.
    pub fn from_matrix(matrix: DMatrix<Cpx<T>>) -> Result<Self, Error> {
        let d = matrix.nrows();
        if matrix.ncols() != d {
            return Err(Error::ShapeMismatch("matrix must be square".into()));
        }
        Ok(AlgebraElement {
            algebra: Algebra::full_matrix(d)?,
            blocks: vec![matrix],
        })
    }

    pub fn zero(algebra: Algebra) -> Self {
        let blocks = algebra
            .blocks()
            .iter()
            .map(|&d| DMatrix::zeros(d, d))
            .collect();
        AlgebraElement { algebra, blocks }
    }

    pub fn identity(algebra: Algebra) -> Self {
        let blocks = algebra
            .blocks()
            .iter()
            .map(|&d| DMatrix::identity(d, d))
            .collect();
        AlgebraElement { algebra, blocks }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn block(&self, k: usize) -> &DMatrix<Cpx<T>> {
        &self.blocks[k]
    }

    pub fn block_mut(&mut self, k: usize) -> &mut DMatrix<Cpx<T>> {
        &mut self.blocks[k]
    }

    pub fn blocks(&self) -> &[DMatrix<Cpx<T>>] {
        &self.blocks
    }

    /// Adjoint x*, blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: Cpx<T>) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|m| m * c).collect(),
        }
    }

    /// Full (unnormalized) trace across all blocks.
    pub fn trace(&self) -> Cpx<T> {
        self.blocks
            .iter()
            .map(|m| m.trace())
            .fold(Cpx::new(T::zero(), T::zero()), |a, b| a + b)
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn operator_norm(&self) -> T {
        self.blocks
            .iter()
            .map(linalg::spectral_norm)
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// ‖x − x*‖.
    pub fn hermiticity_defect(&self) -> T {
        self.blocks
            .iter()
            .map(linalg::hermiticity_defect)
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Positivity check with a witness on failure.
    ///
    /// `x ≥ 0` is accepted when `x` is Hermitian within `tol` and every block
    /// eigenvalue is ≥ −tol.
    pub fn positivity(&self, tol: T) -> PositivityCheck<T> {
        let hermitian_defect = self.hermiticity_defect();
        let mut min_eigenvalue = T::big();
        let mut witness = None;
        for (k, m) in self.blocks.iter().enumerate() {
            let (lambda, vector) = linalg::min_hermitian_eigenpair(m);
            if lambda < min_eigenvalue {
                min_eigenvalue = lambda;
                witness = Some(PositivityWitness {
                    block: k,
                    eigenvalue: lambda,
                    eigenvector: vector,
                });
            }
        }
        let positive = hermitian_defect <= tol && min_eigenvalue >= -tol;
        PositivityCheck {
            positive,
            hermitian_defect,
            min_eigenvalue,
            witness: if positive { None } else { witness },
        }
    }

    pub fn is_positive(&self, tol: T) -> bool {
        self.positivity(tol).positive
    }

    /// Column-stacked coordinates: blocks concatenated in order, each block
    /// vectorized column-major.
    pub fn vectorize(&self) -> DVector<Cpx<T>> {
        let mut data = Vec::with_capacity(self.algebra.element_dim());
        for m in &self.blocks {
            data.extend_from_slice(m.as_slice());
        }
        DVector::from_vec(data)
    }

    /// Inverse of [`vectorize`](Self::vectorize).
    pub fn from_vectorized(algebra: Algebra, v: &DVector<Cpx<T>>) -> Result<Self, Error> {
        if v.len() != algebra.element_dim() {
            return Err(Error::ShapeMismatch(format!(
                "vector length {} does not match element dimension {}",
                v.len(),
                algebra.element_dim()
            )));
        }
        let mut blocks = Vec::with_capacity(algebra.num_blocks());
        let mut offset = 0;
        for &d in algebra.blocks() {
            blocks.push(DMatrix::from_column_slice(
                d,
                d,
                &v.as_slice()[offset..offset + d * d],
            ));
            offset += d * d;
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    /// The block-diagonal embedding into `M_D`, D = Σ dₖ.
    pub fn embed_block_diagonal(&self) -> DMatrix<Cpx<T>> {
        let dim = self.algebra.embedding_dim();
        let mut out = DMatrix::zeros(dim, dim);
        let mut offset = 0;
        for m in &self.blocks {
            let d = m.nrows();
            out.view_mut((offset, offset), (d, d)).copy_from(m);
            offset += d;
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&DMatrix<Cpx<T>>, &DMatrix<Cpx<T>>) -> DMatrix<Cpx<T>>) -> Self {
        assert_eq!(
            self.algebra, other.algebra,
            "elements belong to different algebras"
        );
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl<T: Scalar> std::ops::Add for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn add(self, rhs: Self) -> AlgebraElement<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Scalar> std::ops::Sub for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn sub(self, rhs: Self) -> AlgebraElement<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Blockwise operator product.
impl<T: Scalar> std::ops::Mul for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn mul(self, rhs: Self) -> AlgebraElement<T> {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl<T: Scalar> std::ops::Neg for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn neg(self) -> AlgebraElement<T> {
        self.scale(Cpx::new(-T::one(), T::zero()))
    }
}

/// Result of a positivity check.
#[derive(Clone, Debug)]
pub struct PositivityCheck<T: Scalar> {
    pub positive: bool,
    pub hermitian_defect: T,
    pub min_eigenvalue: T,
    pub witness: Option<PositivityWitness<T>>,
}

/// Offending block/eigenpair for a failed positivity check.
#[derive(Clone, Debug)]
pub struct PositivityWitness<T: Scalar> {
    pub block: usize,
    pub eigenvalue: T,
    pub eigenvector: DVector<Cpx<T>>,
}

/// A state ω on the algebra: ω(x) = Σₖ wₖ·tr(ρₖ xₖ) with wₖ ≥ 0, Σ wₖ = 1,
/// each ρₖ a density matrix on its block.
#[derive(Clone, Debug)]
pub struct State<T: Scalar> {
    algebra: Algebra,
    weights: Vec<T>,
    rhos: Vec<DMatrix<Cpx<T>>>,
}

impl<T: Scalar> State<T> {
    const VALIDATION_TOL: f64 = 1e-8;

    pub fn new(algebra: Algebra, weights: Vec<T>, rhos: Vec<DMatrix<Cpx<T>>>) -> Result<Self, Error> {
        let tol = T::of(Self::VALIDATION_TOL);
        if weights.len() != algebra.num_blocks() || rhos.len() != algebra.num_blocks() {
            return Err(Error::ShapeMismatch(
                "state needs one weight and one density matrix per block".into(),
            ));
        }
        let mut wsum = T::zero();
        for &w in &weights {
            if w < -tol {
                return Err(Error::InvalidState("block weights must be nonnegative".into()));
            }
            wsum += w;
        }
        if (wsum - T::one()).abs() > tol {
            return Err(Error::InvalidState("block weights must sum to 1".into()));
        }
        for (k, (rho, &d)) in rhos.iter().zip(algebra.blocks()).enumerate() {
            if rho.nrows() != d || rho.ncols() != d {
                return Err(Error::ShapeMismatch(format!(
                    "density matrix {k} must be {d}×{d}"
                )));
            }
            if linalg::hermiticity_defect(rho) > tol {
                return Err(Error::InvalidState(format!("density matrix {k} is not Hermitian")));
            }
            let (lambda, _) = linalg::min_hermitian_eigenpair(rho);
            if lambda < -tol {
                return Err(Error::InvalidState(format!(
                    "density matrix {k} has a negative eigenvalue"
                )));
            }
            if (rho.trace().re - T::one()).abs() > tol {
                return Err(Error::InvalidState(format!("density matrix {k} must have trace 1")));
            }
        }
        Ok(State {
            algebra,
            weights,
            rhos,
        })
    }

    /// The normalized trace ω(x) = tr(x)/D on the full direct sum.
    pub fn trace_state(algebra: &Algebra) -> Self {
        let big_d = T::of(algebra.embedding_dim() as f64);
        let weights = algebra
            .blocks()
            .iter()
            .map(|&d| T::of(d as f64) / big_d)
            .collect();
        let rhos = algebra
            .blocks()
            .iter()
            .map(|&d| DMatrix::<Cpx<T>>::identity(d, d).unscale(T::of(d as f64)))
            .collect();
        State {
            algebra: algebra.clone(),
            weights,
            rhos,
        }
    }

    /// Vector state ⟨x u, u⟩ concentrated on one block (u normalized here).
    pub fn vector_state(algebra: &Algebra, block: usize, u: &DVector<Cpx<T>>) -> Result<Self, Error> {
        let d = algebra.blocks()[block];
        if u.len() != d {
            return Err(Error::ShapeMismatch(format!("vector must have length {d}")));
        }
        let norm = u.norm();
        if norm <= T::zero() {
            return Err(Error::InvalidState("vector state needs a nonzero vector".into()));
        }
        let u = u.unscale(norm);
        let mut weights = vec![T::zero(); algebra.num_blocks()];
        weights[block] = T::one();
        let rhos = algebra
            .blocks()
            .iter()
            .enumerate()
            .map(|(k, &dk)| {
                if k == block {
                    &u * u.adjoint()
                } else {
                    // unused block carries an arbitrary valid density matrix
                    DMatrix::identity(dk, dk).unscale(T::of(dk as f64))
                }
            })
            .collect();
        Ok(State {
            algebra: algebra.clone(),
            weights,
            rhos,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn rho(&self, k: usize) -> &DMatrix<Cpx<T>> {
        &self.rhos[k]
    }

    pub fn evaluate(&self, x: &AlgebraElement<T>) -> Result<Cpx<T>, Error> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let mut acc = Cpx::new(T::zero(), T::zero());
        for ((w, rho), xb) in self.weights.iter().zip(&self.rhos).zip(x.blocks()) {
            acc += (rho * xb).trace() * Cpx::new(*w, T::zero());
        }
        Ok(acc)
    }

    /// The state ω ⊗ trₙ on the amplification `A ⊗ Mₙ` (blocks of size n·dₖ),
    /// with density matrices `Iₙ/n ⊗ ρₖ` in the outer-Mₙ layout.
    pub fn amplified_with_trace(&self, n: usize) -> Result<Self, Error> {
        let algebra = self.algebra.amplified(n)?;
        let eye_n = DMatrix::<Cpx<T>>::identity(n, n).unscale(T::of(n as f64));
        let rhos = self.rhos.iter().map(|rho| eye_n.kronecker(rho)).collect();
        Ok(State {
            algebra,
            weights: self.weights.clone(),
            rhos,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cpx;
    use approx::assert_relative_eq;

    type El = AlgebraElement<f64>;

    fn pauli_x() -> DMatrix<Cpx<f64>> {
        DMatrix::from_row_slice(2, 2, &[cpx(0.0, 0.0), cpx(1.0, 0.0), cpx(1.0, 0.0), cpx(0.0, 0.0)])
    }

    #[test]
    fn dimension_bookkeeping_for_direct_sums() {
        let a = Algebra::new(vec![2, 3]).unwrap();
        assert_eq!(a.embedding_dim(), 5);
        assert_eq!(a.element_dim(), 13);
        assert_eq!(a.basis_indices().len(), 13);
    }

    #[test]
    fn element_dim_cap_is_enforced() {
        // 64² = 4096 passes, 65² does not
        assert!(Algebra::full_matrix(64).is_ok());
        assert!(matches!(
            Algebra::full_matrix(65),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn operator_norm_of_direct_sum_is_max_over_blocks() {
        let a = Algebra::new(vec![2, 2]).unwrap();
        let x = El::new(
            a,
            vec![pauli_x().scale(2.0), pauli_x().scale(5.0)],
        )
        .unwrap();
        assert_relative_eq!(x.operator_norm(), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn vectorize_roundtrip_and_column_major_order() {
        let a = Algebra::new(vec![2]).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[cpx(1.0, 0.0), cpx(3.0, 0.0), cpx(2.0, 0.0), cpx(4.0, 0.0)]);
        let x = El::new(a.clone(), vec![m]).unwrap();
        let v = x.vectorize();
        // column-stacking: (1,1), (2,1), (1,2), (2,2)
        assert_eq!(v[0].re, 1.0);
        assert_eq!(v[1].re, 2.0);
        assert_eq!(v[2].re, 3.0);
        assert_eq!(v[3].re, 4.0);
        let back = El::from_vectorized(a, &v).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn positivity_failure_carries_block_and_eigenpair() {
        let a = Algebra::new(vec![2, 2]).unwrap();
        let x = El::new(
            a,
            vec![DMatrix::identity(2, 2), pauli_x()],
        )
        .unwrap();
        let check = x.positivity(1e-10);
        assert!(!check.positive);
        let w = check.witness.unwrap();
        assert_eq!(w.block, 1);
        assert_relative_eq!(w.eigenvalue, -1.0, epsilon = 1e-12);
        // witness reproduces the violation: ⟨x v, v⟩ = eigenvalue < 0
        let quad = (w.eigenvector.adjoint() * x.block(1) * &w.eigenvector)[(0, 0)].re;
        assert_relative_eq!(quad, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn square_of_hermitian_is_positive() {
        let a = Algebra::new(vec![3]).unwrap();
        let mut h = DMatrix::zeros(3, 3);
        h[(0, 1)] = cpx(1.0, 2.0);
        h[(1, 0)] = cpx(1.0, -2.0);
        h[(2, 2)] = cpx(-3.0, 0.0);
        let x = El::new(a, vec![&h * &h]).unwrap();
        assert!(x.is_positive(1e-12));
    }

    #[test]
    fn trace_state_weights_and_evaluation() {
        let a = Algebra::new(vec![2, 3]).unwrap();
        let omega = State::<f64>::trace_state(&a);
        assert_relative_eq!(omega.weights()[0], 2.0 / 5.0, epsilon = 1e-15);
        assert_relative_eq!(omega.weights()[1], 3.0 / 5.0, epsilon = 1e-15);
        let id = El::identity(a);
        assert_relative_eq!(omega.evaluate(&id).unwrap().re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn state_rejects_non_density_input() {
        let a = Algebra::new(vec![2]).unwrap();
        // trace 2, not 1
        let bad = State::new(a, vec![1.0], vec![DMatrix::identity(2, 2)]);
        assert!(matches!(bad, Err(Error::InvalidState(_))));
    }

    #[test]
    fn amplified_trace_state_is_normalized() {
        let a = Algebra::new(vec![2]).unwrap();
        let omega = State::<f64>::trace_state(&a);
        let omega2 = omega.amplified_with_trace(3).unwrap();
        let id = El::identity(omega2.algebra().clone());
        assert_relative_eq!(omega2.evaluate(&id).unwrap().re, 1.0, epsilon = 1e-13);
    }
}
