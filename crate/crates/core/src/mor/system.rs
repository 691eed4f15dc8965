use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Discrete-time LTI triple `x+ = A x + B u`, `y = C x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiSystem {
    a: DenseMatrix,
    b: DenseMatrix,
    c: DenseMatrix,
}

impl LtiSystem {
    pub fn new(a: DenseMatrix, b: DenseMatrix, c: DenseMatrix) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() {
            return Err(Error::Shape(format!("A is {}x{}", a.rows(), a.cols())));
        }
        if b.rows() != n {
            return Err(Error::Shape(format!("B has {} rows, A is {n}x{n}", b.rows())));
        }
        if c.cols() != n {
            return Err(Error::Shape(format!("C has {} columns, A is {n}x{n}", c.cols())));
        }
        Ok(LtiSystem { a, b, c })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn b(&self) -> &DenseMatrix {
        &self.b
    }

    pub fn c(&self) -> &DenseMatrix {
        &self.c
    }

    pub fn states(&self) -> usize {
        self.a.rows()
    }

    pub fn inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn outputs(&self) -> usize {
        self.c.rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    /// `(A_U, (V'U)^{-1} V'B, CU)`.
    USide,
    /// `(A_V, V'B, CU (V'U)^{-1})`.
    VSide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedRealization {
    pub ar: DenseMatrix,
    pub br: DenseMatrix,
    pub cr: DenseMatrix,
    pub basis: BasisTag,
}

impl ReducedRealization {
    pub fn order(&self) -> usize {
        self.ar.rows()
    }
}
