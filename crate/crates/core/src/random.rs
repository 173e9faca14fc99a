//! Deterministic seeded sampling of algebra elements and states.
//!
//! All draws go through a ChaCha8 stream seeded with a caller-supplied u64;
//! entries are sampled as f64 and then converted, so sequences agree across
//! scalar types up to rounding and are bit-identical for `T = f64`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{Algebra, AlgebraElement, State};
use crate::scalar::{Cpx, Scalar};

/// What to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// Independent complex Gaussian entries.
    General,
    /// Exact symmetrization (g + g*)/2 of a general draw.
    Hermitian,
    /// y*y for a general draw y.
    Positive,
}

fn gaussian_matrix<T: Scalar>(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<Cpx<T>> {
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Cpx::new(T::of(re), T::of(im))
    })
}

/// Seeded random element. Hermitian draws satisfy x = x* exactly; positive
/// draws are exactly Hermitian and positive up to eigenvalue roundoff.
pub fn random_element<T: Scalar>(algebra: &Algebra, seed: u64, kind: SampleKind) -> AlgebraElement<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = algebra
        .blocks()
        .iter()
        .map(|&d| {
            let g = gaussian_matrix::<T>(d, &mut rng);
            match kind {
                SampleKind::General => g,
                SampleKind::Hermitian => (&g + g.adjoint()).scale(T::of(0.5)),
                SampleKind::Positive => g.adjoint() * &g,
            }
        })
        .collect();
    AlgebraElement::new(algebra.clone(), blocks).expect("sampled blocks match the algebra")
}

/// Seeded random state: normalized positive densities with weights drawn from
/// squared Gaussians, renormalized to sum to 1.
pub fn random_state<T: Scalar>(algebra: &Algebra, seed: u64) -> State<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights: Vec<T> = algebra
        .blocks()
        .iter()
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            T::of(g * g)
        })
        .collect();
    let total = weights.iter().copied().fold(T::zero(), |a, b| a + b);
    for w in &mut weights {
        *w /= total;
    }
    let rhos = algebra
        .blocks()
        .iter()
        .map(|&d| {
            let g = gaussian_matrix::<T>(d, &mut rng);
            let p = g.adjoint() * &g;
            let tr = p.trace().re;
            p.unscale(tr)
        })
        .collect();
    State::new(algebra.clone(), weights, rhos).expect("sampled state is valid")
}
