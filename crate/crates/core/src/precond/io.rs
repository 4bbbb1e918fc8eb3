//! System directories: `F.mtx`, `B.mtx`, `H1.mtx`, `H2.mtx`, `meta.json` and an
//! optional `rhs.mtx`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::dense::Matrix;
use crate::linalg::mm;
use crate::linalg::sparse::CsrMatrix;
use crate::precond::system::{SaddlePointSystem, SystemMeta};

fn read_mtx(path: &Path) -> Result<CsrMatrix> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    mm::read(BufReader::new(file))
}

fn write_mtx(path: &Path, a: &CsrMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    mm::write_coordinate(&mut w, a)?;
    w.flush()?;
    Ok(())
}

pub fn write_system(dir: &Path, sys: &SaddlePointSystem) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_mtx(&dir.join("F.mtx"), sys.f())?;
    write_mtx(&dir.join("B.mtx"), sys.b())?;
    write_mtx(&dir.join("H1.mtx"), sys.h1())?;
    write_mtx(&dir.join("H2.mtx"), sys.h2())?;
    if let Some(rhs) = &sys.rhs {
        let mut w = BufWriter::new(File::create(dir.join("rhs.mtx"))?);
        mm::write_array(&mut w, &Matrix::from_column_slice(rhs.len(), 1, rhs))?;
        w.flush()?;
    }
    let mut meta = serde_json::to_string_pretty(&sys.meta)?;
    meta.push('\n');
    std::fs::write(dir.join("meta.json"), meta)?;
    Ok(())
}

/// Reads a system directory. The stored `H1` must agree with the symmetric
/// part of `F`.
pub fn read_system(dir: &Path) -> Result<SaddlePointSystem> {
    let f = read_mtx(&dir.join("F.mtx"))?;
    let b = read_mtx(&dir.join("B.mtx"))?;
    let h1 = read_mtx(&dir.join("H1.mtx"))?;
    let h2 = read_mtx(&dir.join("H2.mtx"))?;
    let meta_path = dir.join("meta.json");
    let meta: SystemMeta = serde_json::from_str(
        &std::fs::read_to_string(&meta_path).map_err(|e| Error::Io(format!("{}: {e}", meta_path.display())))?,
    )?;
    let mut sys = SaddlePointSystem::new(&f, &b, &h2, meta)?;
    let diff = sys.h1().add_scaled(-1.0, &h1)?.frobenius_norm();
    if diff > 1e-12 * sys.h1().frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidMatrix(
            "H1.mtx does not match the symmetric part of F.mtx".into(),
        ));
    }
    let rhs_path = dir.join("rhs.mtx");
    if rhs_path.exists() {
        let r = read_mtx(&rhs_path)?;
        if r.ncols() != 1 {
            return Err(Error::InvalidMatrix("rhs.mtx must have one column".into()));
        }
        let v = r.to_dense().column(0).iter().copied().collect();
        sys = sys.with_rhs(v)?;
    }
    Ok(sys)
}
