//! Matrix Market reader and writer (real and integer fields, coordinate and
//! array formats, general / symmetric / skew-symmetric storage).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::dense::Matrix;
use crate::linalg::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Skew,
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Reads a Matrix Market file into sparse storage.
pub fn read<R: BufRead>(reader: R) -> Result<CsrMatrix> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        f => return Err(parse_err(1, format!("unsupported format '{f}'"))),
    };
    match tokens[3].as_str() {
        "real" | "integer" | "double" => {}
        f => return Err(parse_err(1, format!("unsupported field '{f}'"))),
    }
    let sym = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::Skew,
        s => return Err(parse_err(1, format!("unsupported symmetry '{s}'"))),
    };

    let mut data = lines.filter_map(|(i, l)| match l {
        Ok(l) => {
            let t = l.trim().to_string();
            if t.is_empty() || t.starts_with('%') {
                None
            } else {
                Some(Ok((i + 1, t)))
            }
        }
        Err(e) => Some(Err(Error::from(e))),
    });
    let (size_line, size) = data.next().ok_or_else(|| Error::Parse("missing size line".into()))??;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| parse_err(size_line, e)))
        .collect::<Result<_>>()?;
    let num = |line: usize, t: &str| t.parse::<f64>().map_err(|e| parse_err(line, e));

    let mut triplets = Vec::new();
    let (nrows, ncols);
    if coordinate {
        if dims.len() != 3 {
            return Err(parse_err(size_line, "expected 'rows cols entries'"));
        }
        (nrows, ncols) = (dims[0], dims[1]);
        for _ in 0..dims[2] {
            let (line, text) = data.next().ok_or_else(|| Error::Parse("truncated entry list".into()))??;
            let parts: Vec<&str> = text.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(parse_err(line, "expected 'row col value'"));
            }
            let i: usize = parts[0].parse().map_err(|e| parse_err(line, e))?;
            let j: usize = parts[1].parse().map_err(|e| parse_err(line, e))?;
            if i == 0 || j == 0 || i > nrows || j > ncols {
                return Err(parse_err(line, format!("index ({i}, {j}) out of range")));
            }
            let v = num(line, parts[2])?;
            triplets.push((i - 1, j - 1, v));
        }
    } else {
        if dims.len() != 2 {
            return Err(parse_err(size_line, "expected 'rows cols'"));
        }
        (nrows, ncols) = (dims[0], dims[1]);
        // Column-major; symmetric storage lists only the lower triangle.
        for j in 0..ncols {
            let i0 = match sym {
                Symmetry::General => 0,
                Symmetry::Symmetric => j,
                Symmetry::Skew => j + 1,
            };
            for i in i0..nrows {
                let (line, text) = data.next().ok_or_else(|| Error::Parse("truncated array".into()))??;
                let v = num(line, &text)?;
                triplets.push((i, j, v));
            }
        }
    }
    if sym != Symmetry::General {
        let sign = if sym == Symmetry::Skew { -1.0 } else { 1.0 };
        let mirrored: Vec<_> = triplets
            .iter()
            .filter(|t| t.0 != t.1)
            .map(|&(i, j, v)| (j, i, sign * v))
            .collect();
        triplets.extend(mirrored);
    }
    CsrMatrix::from_triplets(nrows, ncols, &triplets)
}

/// Writes a sparse matrix in `coordinate real general` format.
pub fn write_coordinate<W: Write>(mut w: W, a: &CsrMatrix) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

/// Writes a dense matrix in `array real general` format.
pub fn write_array<W: Write>(mut w: W, m: &Matrix) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} {}", m.nrows(), m.ncols())?;
    for v in m.iter() {
        writeln!(w, "{v:e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_roundtrip() {
        let a = CsrMatrix::from_triplets(3, 2, &[(0, 0, 1.5), (2, 1, -1e-17), (1, 0, 3.0)]).unwrap();
        let mut buf = Vec::new();
        write_coordinate(&mut buf, &a).unwrap();
        let b = read(buf.as_slice()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_coordinate() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 2\n1 1 4\n2 1 1\n";
        let a = read(text.as_bytes()).unwrap();
        assert_eq!(a.to_dense(), Matrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn skew_array() {
        let text = "%%MatrixMarket matrix array real skew-symmetric\n2 2\n3\n";
        let a = read(text.as_bytes()).unwrap();
        assert_eq!(a.to_dense(), Matrix::from_row_slice(2, 2, &[0.0, -3.0, 3.0, 0.0]));
    }

    #[test]
    fn dense_array_roundtrip() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let mut buf = Vec::new();
        write_array(&mut buf, &m).unwrap();
        assert_eq!(read(buf.as_slice()).unwrap().to_dense(), m);
    }

    #[test]
    fn malformed_inputs() {
        assert!(read("".as_bytes()).is_err());
        assert!(read("%%MatrixMarket matrix coordinate complex general\n1 1 0\n".as_bytes()).is_err());
        assert!(read("%%MatrixMarket matrix coordinate real general\n1 1 1\n2 1 1\n".as_bytes()).is_err());
        assert!(read("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1\n".as_bytes()).is_err());
    }
}
