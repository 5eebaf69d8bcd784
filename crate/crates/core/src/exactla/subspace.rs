//! Subspaces of ℚⁿ in canonical reduced-echelon form.

use std::fmt;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A linear subspace of `ℚ^ambient_dim`.
///
/// The basis is the nonzero rows of the reduced row echelon form of any
/// spanning set, so two equal subspaces compare equal field by field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| super::matrix::unit_vector(ambient_dim, i))
                .collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn from_spanning(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch {
                op: "Subspace::from_spanning",
                expected: ambient_dim,
                found: v.len(),
            });
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient_dim));
        }
        let (r, pivots) = Matrix::from_rows(&vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Ok(Subspace {
            ambient_dim,
            basis,
            pivots,
        })
    }

    /// Column span of `m`.
    pub fn column_space(m: &Matrix) -> Self {
        let cols = (0..m.cols()).map(|j| m.column(j)).collect();
        Subspace::from_spanning(m.rows(), cols).expect("columns have row length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `ambient_dim × dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    fn check_len(&self, v: &[Scalar], op: &'static str) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                op,
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        self.check_len(v, "Subspace::coordinates")?;
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            super::matrix::vec_axpy(&mut residual, &-c, b);
        }
        if residual.iter().all(Scalar::is_zero) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Vector with the given coordinates.
    pub fn vector(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim(), "coordinate length");
        let mut v = vec![Scalar::zero(); self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            super::matrix::vec_axpy(&mut v, c, b);
        }
        v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_same_ambient(&self, other: &Subspace, op: &'static str) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                op,
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other, "Subspace::sum")?;
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::from_spanning(self.ambient_dim, vectors)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other, "Subspace::intersect")?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        // x ∈ ker [B1 | -B2] gives B1·x₁ = B2·x₂
        let b1 = self.basis_matrix();
        let joint = Matrix::hstack(&[&b1, &other.basis_matrix().neg()])?;
        let kernel = joint.nullspace();
        let vectors = kernel.basis().iter().map(|k| b1.apply(&k[..self.dim()])).collect();
        Subspace::from_spanning(self.ambient_dim, vectors)
    }

    /// Image under a linear map.
    pub fn image(&self, map: &Matrix) -> Result<Subspace> {
        if map.cols() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                op: "Subspace::image",
                expected: self.ambient_dim,
                found: map.cols(),
            });
        }
        Subspace::from_spanning(map.rows(), self.basis.iter().map(|b| map.apply(b)).collect())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) [", self.dim(), self.ambient_dim)?;
        for b in &self.basis {
            let row: Vec<String> = b.iter().map(ToString::to_string).collect();
            write!(f, " ({})", row.join(","))?;
        }
        write!(f, " ]")
    }
}

/// The subspace `{(v, v') : f(v) = g(v')}` of `V ⊕ V'`, i.e. the kernel of `[f | −g]`.
pub fn preimage_pullback(f: &Matrix, g: &Matrix) -> Result<Subspace> {
    if f.rows() != g.rows() {
        return Err(Error::DimensionMismatch {
            op: "preimage_pullback (codomain)",
            expected: f.rows(),
            found: g.rows(),
        });
    }
    Ok(Matrix::hstack(&[f, &g.neg()])?.nullspace())
}
