//! JSON-friendly data forms for matrices, elements, and vectors.
//!
//! Complex numbers serialize as `[re, im]` pairs; matrices as row-major
//! nested arrays. Everything is pinned to f64 on the wire.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::Error;
use crate::scalar::{Cpx, Scalar};

/// Row-major complex matrix as nested `[re, im]` pairs.
pub type MatrixData = Vec<Vec<[f64; 2]>>;

/// Complex vector as `[re, im]` pairs.
pub type VectorData = Vec<[f64; 2]>;

pub fn matrix_to_data<T: Scalar>(m: &DMatrix<Cpx<T>>) -> MatrixData {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)]
                })
                .collect()
        })
        .collect()
}

pub fn matrix_from_data(data: &MatrixData) -> Result<DMatrix<Cpx<f64>>, Error> {
    let rows = data.len();
    if rows == 0 {
        return Err(Error::InvalidInput("matrix must have at least one row".into()));
    }
    let cols = data[0].len();
    if cols == 0 {
        return Err(Error::InvalidInput("matrix must have at least one column".into()));
    }
    if data.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("matrix rows must all have the same length".into()));
    }
    Ok(DMatrix::from_fn(rows, cols, |i, j| {
        Cpx::new(data[i][j][0], data[i][j][1])
    }))
}

pub fn vector_to_data<T: Scalar>(v: &DVector<Cpx<T>>) -> VectorData {
    v.iter()
        .map(|z| [z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN)])
        .collect()
}

pub fn vector_from_data(data: &VectorData) -> DVector<Cpx<f64>> {
    DVector::from_iterator(data.len(), data.iter().map(|p| Cpx::new(p[0], p[1])))
}

/// An algebra element on the wire: one row-major matrix per block.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ElementData {
    pub blocks: Vec<MatrixData>,
}

pub fn element_to_data<T: Scalar>(x: &AlgebraElement<T>) -> ElementData {
    ElementData {
        blocks: x.blocks().iter().map(matrix_to_data).collect(),
    }
}

/// Decodes an element, inferring the algebra from the block shapes.
pub fn element_from_data(data: &ElementData) -> Result<AlgebraElement<f64>, Error> {
    let blocks: Vec<DMatrix<Cpx<f64>>> = data
        .blocks
        .iter()
        .map(matrix_from_data)
        .collect::<Result<_, _>>()?;
    for b in &blocks {
        if b.nrows() != b.ncols() {
            return Err(Error::InvalidInput("element blocks must be square".into()));
        }
    }
    let algebra = Algebra::new(blocks.iter().map(|b| b.nrows()).collect())?;
    AlgebraElement::new(algebra, blocks)
}
