//! Saddle-point systems, block preconditioners and assumption checks.

pub mod assumptions;
pub mod block;
pub mod io;
pub mod solve;
pub mod system;

pub use assumptions::{verify_assumptions, AssumptionReport, LemmaCheck};
pub use block::{make_inexact_p1, BlockPreconditioner, InexactReport, SgsSweeps, Side, Variant};
pub use io::{read_system, write_system};
pub use solve::{solve_preconditioned, NormChoice};
pub use system::{assemble, ConstraintBounds, SaddlePointSystem, SystemMeta};

use crate::error::Result;
use crate::linalg::dense::Matrix;

/// Dense Schur complement `S = B F⁻¹ Bᵀ`, assembled column by column.
pub fn schur(sys: &SaddlePointSystem) -> Result<Matrix> {
    let lu = sys.factor_f()?;
    let m = sys.m();
    let mut s = Matrix::zeros(m, m);
    let mut e = vec![0.0; m];
    for j in 0..m {
        e[j] = 1.0;
        let col = sys.b().matvec(&lu.solve(&sys.bt().matvec(&e)));
        e[j] = 0.0;
        s.column_mut(j).copy_from_slice(&col);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::CsrMatrix;

    #[test]
    fn schur_trivial_cases() {
        let b = CsrMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let sys = assemble(&CsrMatrix::identity(2), &b, &CsrMatrix::identity(1), SystemMeta::new("t", 1.0, None)).unwrap();
        assert!((schur(&sys).unwrap()[(0, 0)] - 1.0).abs() < 1e-15);
        let sys = assemble(
            &CsrMatrix::from_diagonal(&[2.0, 2.0]),
            &CsrMatrix::identity(2),
            &CsrMatrix::identity(2),
            SystemMeta::new("t", 1.0, None),
        )
        .unwrap();
        let s = schur(&sys).unwrap();
        assert!((s - Matrix::identity(2, 2) * 0.5).norm() < 1e-15);
    }

    #[test]
    fn directory_roundtrip() {
        let f = CsrMatrix::from_dense(&Matrix::from_row_slice(2, 2, &[1.0, 0.25, -0.25, 2.0]));
        let b = CsrMatrix::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, -1.0)]).unwrap();
        let sys = assemble(&f, &b, &CsrMatrix::identity(1), SystemMeta::new("toy", 2.0, Some(4)).with_param("seed", 3.0))
            .unwrap()
            .with_rhs(vec![1.0, 2.0, 3.0])
            .unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_system(dir.path(), &sys).unwrap();
        let back = read_system(dir.path()).unwrap();
        assert_eq!(back.f(), sys.f());
        assert_eq!(back.b(), sys.b());
        assert_eq!(back.meta, sys.meta);
        assert_eq!(back.rhs, sys.rhs);
    }
}
