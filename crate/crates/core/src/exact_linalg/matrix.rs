use std::fmt::Write as _;

use super::LinalgError;

/// Dense integer matrix, row-major.
///
/// Entries are `i64`: every matrix this crate builds is a Gram matrix of
/// curves with entries bounded by the surface degree. Determinants and other
/// derived quantities are arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds the matrix `(f(i, j))`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn max_abs(&self) -> u64 {
        self.data.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    /// Reduction modulo a prime `l < 2^32`.
    pub fn to_mod(&self, modulus: u32) -> ModMatrix {
        let l = modulus as i64;
        ModMatrix {
            modulus,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x.rem_euclid(l) as u32).collect(),
        }
    }

    /// Plain-text form: a `rows cols` header, then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 3 + 16);
        writeln!(out, "{} {}", self.rows, self.cols).unwrap();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, LinalgError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinalgError::Parse("empty input".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| LinalgError::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(LinalgError::Parse(format!("bad header {header:?}")));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for (i, line) in lines.enumerate() {
            if i >= rows {
                return Err(LinalgError::Parse("more rows than declared".into()));
            }
            let before = data.len();
            for tok in line.split_whitespace() {
                data.push(
                    tok.parse::<i64>()
                        .map_err(|_| LinalgError::Parse(format!("bad entry {tok:?} in row {i}")))?,
                );
            }
            if data.len() - before != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: data.len() - before,
                });
            }
        }
        if data.len() != rows * cols {
            return Err(LinalgError::Parse(format!(
                "expected {rows} rows, found {}",
                data.len() / cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn data(&self) -> &[i64] {
        &self.data
    }
}

/// Dense matrix over `F_l` for a prime `l < 2^32`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ModMatrix {
    pub fn zeros(modulus: u32, rows: usize, cols: usize) -> Self {
        Self {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: u32, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed entries, reducing each mod `l`.
    pub fn from_fn(
        modulus: u32,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let l = modulus as i64;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).rem_euclid(l) as u32);
            }
        }
        Self {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &ModMatrix) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Self {
            modulus: self.modulus,
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Columns `range` as a new matrix.
    pub fn column_slice(&self, range: std::ops::Range<usize>) -> Self {
        let cols = range.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[range.clone()]);
        }
        Self {
            modulus: self.modulus,
            rows: self.rows,
            cols,
            data,
        }
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let ot = other.transpose();
        let mut out = Self::zeros(self.modulus, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.data[i * other.cols + j] = dot_mod(self.row(i), ot.row(j), self.modulus);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub(crate) fn from_raw(modulus: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            modulus,
            rows,
            cols,
            data,
        }
    }

    pub(crate) fn data_mut(&mut self) -> &mut [u32] {
        &mut self.data
    }
}

/// `sum a_i b_i mod l` with delayed reduction.
pub(crate) fn dot_mod(a: &[u32], b: &[u32], modulus: u32) -> u32 {
    let l = modulus as u64;
    let sq = (l - 1) * (l - 1);
    let chunk = if sq == 0 { usize::MAX } else { (u64::MAX / sq).min(1 << 20) as usize };
    let mut acc = 0u64;
    for (ca, cb) in a.chunks(chunk.max(1)).zip(b.chunks(chunk.max(1))) {
        let s: u64 = ca.iter().zip(cb).map(|(&x, &y)| x as u64 * y as u64).sum();
        acc = (acc + s % l) % l;
    }
    acc as u32
}
