use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::FisherMatrix;
use crate::error::{Error, Result};

/// Eigenvalues at or below `KERNEL_RTOL·λ_max` are treated as exact zeros.
pub const KERNEL_RTOL: f64 = 1e-10;

/// Relative size of α's kernel component beyond which `αᵀF̃⁻¹α` is reported unbounded.
pub const OVERLAP_RTOL: f64 = 1e-10;

/// Pseudo-inverse on the image of `F` together with the image projector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedInverse {
    pub inverse: DMatrix<f64>,
    pub projector: DMatrix<f64>,
    /// Orthonormal basis of the image, one column per retained eigenvalue.
    pub image: DMatrix<f64>,
    pub rank: usize,
}

pub fn projected_inverse(f: &FisherMatrix) -> Result<ProjectedInverse> {
    let k = f.dim();
    let sym = (&f.entries + f.entries.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let lmax = eig.eigenvalues.max();
    if !(lmax > 0.0) {
        return Err(Error::NoInformation);
    }
    let cut = KERNEL_RTOL * lmax;
    let kept: Vec<usize> = (0..k).filter(|&i| eig.eigenvalues[i] > cut).collect();
    let mut inverse = DMatrix::zeros(k, k);
    let mut projector = DMatrix::zeros(k, k);
    let mut image = DMatrix::zeros(k, kept.len());
    for (c, &i) in kept.iter().enumerate() {
        let v = eig.eigenvectors.column(i);
        let outer = v * v.transpose();
        inverse += &outer / eig.eigenvalues[i];
        projector += outer;
        image.set_column(c, &v);
    }
    Ok(ProjectedInverse {
        inverse,
        projector,
        image,
        rank: kept.len(),
    })
}

/// `αᵀF̃⁻¹α`, failing when α reaches into the kernel of `F`.
pub fn crb_linear(alpha: &[f64], f: &FisherMatrix) -> Result<f64> {
    if alpha.len() != f.dim() {
        return Err(Error::Shape {
            expected: f.dim(),
            got: alpha.len(),
        });
    }
    let p = projected_inverse(f)?;
    let a = DVector::from_column_slice(alpha);
    let outside = &a - &p.projector * &a;
    let overlap = outside.norm() / a.norm().max(f64::MIN_POSITIVE);
    if overlap > OVERLAP_RTOL {
        return Err(Error::UnboundedVariance { overlap });
    }
    Ok(a.dot(&(&p.inverse * &a)))
}
