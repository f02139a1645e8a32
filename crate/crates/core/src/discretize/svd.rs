use nalgebra::DMatrix;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};
use crate::spectral::SigmaSequence;

/// Singular values below this fraction of sigma_max are dropped.
pub const SVD_DROP_TOL: f64 = 1e-14;

/// Thin SVD m = U diag(sigma) V^T with its residuals.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub u: DenseMatrix,
    /// Descending, including values below the drop tolerance.
    pub sigma: Vec<f64>,
    pub vt: DenseMatrix,
    /// ||m - U S V^T||_F / ||m||_F
    pub reconstruction_residual: f64,
    /// max(||U^T U - I||_F, ||V^T V - I||_F)
    pub orthogonality_residual: f64,
}

fn from_nalgebra(m: &DMatrix<f64>) -> Result<DenseMatrix> {
    DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Full thin factorization; the same algorithm backs [`singular_values`].
pub fn svd(m: &DenseMatrix) -> Result<Factorization> {
    let a = m.to_nalgebra();
    let dec = a.clone().svd(true, true);
    let (u, vt) = match (dec.u, dec.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Numerical("SVD did not return singular vectors".into())),
    };
    let s = dec.singular_values;
    // nalgebra does not promise an order; sort triplets descending.
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let vt = DMatrix::from_fn(order.len(), vt.ncols(), |r, c| vt[(order[r], c)]);
    let sigma: Vec<f64> = order.iter().map(|&i| s[i]).collect();

    let recon = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(sigma.clone())) * &vt;
    let norm = a.norm();
    let reconstruction_residual = if norm > 0.0 { (&a - recon).norm() / norm } else { 0.0 };
    let k = sigma.len();
    let eye = DMatrix::<f64>::identity(k, k);
    let ou = (u.transpose() * &u - &eye).norm();
    let ov = (&vt * vt.transpose() - &eye).norm();
    Ok(Factorization {
        u: from_nalgebra(&u)?,
        sigma,
        vt: from_nalgebra(&vt)?,
        reconstruction_residual,
        orthogonality_residual: ou.max(ov),
    })
}

/// Nonincreasing singular values above `SVD_DROP_TOL * sigma_max`.
pub fn singular_values(m: &DenseMatrix) -> Result<SigmaSequence> {
    let mut s: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("SVD produced non-finite singular values".into()));
    }
    s.sort_by(|a, b| b.total_cmp(a));
    let top = s.first().copied().unwrap_or(0.0);
    if !(top > 0.0) {
        return Err(Error::InvalidInput("matrix has no nonzero singular values".into()));
    }
    s.retain(|v| *v >= SVD_DROP_TOL * top);
    SigmaSequence::new(s)
}
