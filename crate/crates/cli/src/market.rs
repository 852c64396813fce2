//! Matrix Market reader and writer for dense self-adjoint matrices.
//!
//! Accepted headers are `%%MatrixMarket matrix coordinate|array
//! real|complex symmetric|hermitian|general`. Symmetric and Hermitian files
//! store one triangle, which is mirrored on read; general files are
//! symmetrized and rejected when the relative defect exceeds 1e-6.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use specfam::linalg::{FieldMode, HermitianMatrix, Mat, Scalar};

use crate::error::{CliError, Result};

/// Largest accepted `‖M - M*‖_F / ‖M‖_F` for `general` input.
pub const MAX_DEFECT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
    Hermitian,
}

/// A parsed file, before conversion to the working field.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketMatrix {
    pub layout: Layout,
    pub field: FieldMode,
    pub symmetry: Symmetry,
    pub entries: Mat<Complex64>,
    /// Relative self-adjointness defect of the stored matrix.
    pub defect: f64,
}

impl MarketMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    /// Converts to the working field, rejecting imaginary parts in real mode.
    pub fn to_hermitian<T: Scalar>(&self) -> Result<HermitianMatrix<T>> {
        let d = self.dim();
        let mut m = Mat::<T>::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let z = self.entries[(i, j)];
                m[(i, j)] = T::from_parts(z.re, z.im).ok_or(CliError::ComplexInRealMode {
                    row: i + 1,
                    col: j + 1,
                })?;
            }
        }
        Ok(HermitianMatrix::new(m)?)
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-comment, non-blank line with its 1-based number.
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty() && !l.starts_with('%'))
    }
}

fn parse_num<N: std::str::FromStr>(token: Option<&str>, line: usize, what: &str) -> Result<N> {
    let token = token.ok_or_else(|| CliError::parse(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| CliError::parse(line, format!("invalid {what} `{token}`")))
}

fn parse_value<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    field: FieldMode,
    line: usize,
) -> Result<Complex64> {
    let re: f64 = parse_num(tokens.next(), line, "value")?;
    let im: f64 = match field {
        FieldMode::Real => 0.0,
        FieldMode::Complex => parse_num(tokens.next(), line, "imaginary part")?,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(CliError::parse(line, "non-finite value"));
    }
    Ok(Complex64::new(re, im))
}

fn parse_header(line: &str) -> Result<(Layout, FieldMode, Symmetry)> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(CliError::parse(
            1,
            "expected `%%MatrixMarket matrix <layout> <field> <symmetry>`",
        ));
    }
    let layout = match words[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(CliError::parse(1, format!("unsupported layout `{other}`"))),
    };
    let field = match words[3].as_str() {
        "real" => FieldMode::Real,
        "complex" => FieldMode::Complex,
        other => return Err(CliError::parse(1, format!("unsupported field `{other}`"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => {
            return Err(CliError::parse(
                1,
                format!("unsupported symmetry `{other}`"),
            ))
        }
    };
    Ok((layout, field, symmetry))
}

fn mirror(symmetry: Symmetry, z: Complex64) -> Complex64 {
    match symmetry {
        Symmetry::Hermitian => z.conj(),
        _ => z,
    }
}

pub fn parse_matrix_market(text: &str) -> Result<MarketMatrix> {
    let mut raw = text.lines().enumerate();
    let header = raw
        .next()
        .map(|(_, l)| l)
        .ok_or_else(|| CliError::parse(1, "empty file"))?;
    let (layout, field, symmetry) = parse_header(header)?;
    let mut lines = Lines { inner: raw };

    let (size_line, size) = lines
        .next_data()
        .ok_or_else(|| CliError::parse(2, "missing size line"))?;
    let mut tokens = size.split_whitespace();
    let rows: usize = parse_num(tokens.next(), size_line, "row count")?;
    let cols: usize = parse_num(tokens.next(), size_line, "column count")?;
    if rows != cols || rows == 0 {
        return Err(CliError::parse(
            size_line,
            format!("expected a nonempty square matrix, got {rows}x{cols}"),
        ));
    }
    let d = rows;
    let mut m = Mat::<Complex64>::zeros(d, d);

    match layout {
        Layout::Coordinate => {
            let nnz: usize = parse_num(tokens.next(), size_line, "entry count")?;
            for _ in 0..nnz {
                let (line, data) = lines
                    .next_data()
                    .ok_or_else(|| CliError::parse(size_line, format!("expected {nnz} entries")))?;
                let mut t = data.split_whitespace();
                let i: usize = parse_num(t.next(), line, "row index")?;
                let j: usize = parse_num(t.next(), line, "column index")?;
                if i == 0 || j == 0 || i > d || j > d {
                    return Err(CliError::parse(
                        line,
                        format!("index ({i}, {j}) outside 1..={d}"),
                    ));
                }
                let z = parse_value(&mut t, field, line)?;
                let (i, j) = (i - 1, j - 1);
                m[(i, j)] += z;
                if symmetry != Symmetry::General && i != j {
                    m[(j, i)] += mirror(symmetry, z);
                }
            }
        }
        Layout::Array => {
            // Column-major; symmetric kinds list the lower triangle only.
            for j in 0..d {
                let start = if symmetry == Symmetry::General { 0 } else { j };
                for i in start..d {
                    let (line, data) = lines
                        .next_data()
                        .ok_or_else(|| CliError::parse(size_line, "too few array entries"))?;
                    let z = parse_value(&mut data.split_whitespace(), field, line)?;
                    m[(i, j)] = z;
                    if symmetry != Symmetry::General && i != j {
                        m[(j, i)] = mirror(symmetry, z);
                    }
                }
            }
        }
    }
    if let Some((line, _)) = lines.next_data() {
        return Err(CliError::parse(line, "unexpected trailing data"));
    }

    let (_, defect) = HermitianMatrix::symmetrize(&m)?;
    if defect > MAX_DEFECT {
        return Err(CliError::NotSelfAdjoint {
            defect,
            limit: MAX_DEFECT,
        });
    }
    Ok(MarketMatrix {
        layout,
        field,
        symmetry,
        entries: m,
        defect,
    })
}

pub fn read_matrix_market(path: &Path) -> Result<MarketMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix_market(&text)
}

/// Dense `array` file holding the lower triangle in column-major order, with
/// 17 significant digits so that re-reading is exact.
pub fn format_matrix_market<T: Scalar>(a: &HermitianMatrix<T>) -> String {
    let d = a.dim();
    let (field, symmetry) = match T::MODE {
        FieldMode::Real => ("real", "symmetric"),
        FieldMode::Complex => ("complex", "hermitian"),
    };
    let mut out = format!("%%MatrixMarket matrix array {field} {symmetry}\n{d} {d}\n");
    for j in 0..d {
        for i in j..d {
            let z = a[(i, j)];
            match T::MODE {
                FieldMode::Real => writeln!(out, "{:.16e}", z.re()),
                FieldMode::Complex => writeln!(out, "{:.16e} {:.16e}", z.re(), z.im()),
            }
            .expect("writing to a String");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_symmetric_lower_triangle() {
        let text = "%%MatrixMarket matrix array real symmetric\n% comment\n2 2\n2\n-1\n2\n";
        let m = parse_matrix_market(text).unwrap();
        let a: HermitianMatrix<f64> = m.to_hermitian().unwrap();
        assert_eq!(
            a.as_mat(),
            &Mat::from_real_rows(&[&[2.0, -1.0], &[-1.0, 2.0]]).unwrap()
        );
    }

    #[test]
    fn coordinate_entries_are_mirrored() {
        let text =
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 1.0\n1 2 5.0\n2 2 3.0\n";
        let a: HermitianMatrix<f64> = parse_matrix_market(text).unwrap().to_hermitian().unwrap();
        assert_eq!(a[(1, 0)], 5.0);
        assert_eq!(a[(0, 1)], 5.0);
    }

    #[test]
    fn hermitian_mirror_conjugates() {
        let text =
            "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n2 1 1.0 2.0\n2 2 4.0 0.0\n";
        let m = parse_matrix_market(text).unwrap();
        assert_eq!(m.entries[(0, 1)], Complex64::new(1.0, -2.0));
        assert!(matches!(
            m.to_hermitian::<f64>(),
            Err(CliError::ComplexInRealMode { row: 1, col: 2 })
        ));
    }

    #[test]
    fn general_input_is_checked() {
        let ok = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n2\n1\n";
        assert_eq!(parse_matrix_market(ok).unwrap().defect, 0.0);
        let bad = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n0\n1\n";
        assert!(matches!(
            parse_matrix_market(bad),
            Err(CliError::NotSelfAdjoint { .. })
        ));
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "",
            "%%MatrixMarket vector array real general\n",
            "%%MatrixMarket matrix array integer general\n1 1\n1\n",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
            "%%MatrixMarket matrix coordinate real general\n2 3 0\n",
            "%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n",
            "%%MatrixMarket matrix array real symmetric\n1 1\n1\n2\n",
            "%%MatrixMarket matrix array real symmetric\n1 1\nx\n",
        ] {
            assert!(parse_matrix_market(text).is_err(), "{text:?}");
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let i = Complex64::new(0.0, 1.0);
        let m = Mat::from_rows(&[
            vec![Complex64::new(0.1, 0.0), i * (1.0 / 3.0)],
            vec![-i * (1.0 / 3.0), Complex64::new(-7e-300, 0.0)],
        ])
        .unwrap();
        let a = HermitianMatrix::new(m).unwrap();
        let text = format_matrix_market(&a);
        let b: HermitianMatrix<Complex64> =
            parse_matrix_market(&text).unwrap().to_hermitian().unwrap();
        assert_eq!(a, b);
    }
}
