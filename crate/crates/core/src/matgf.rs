//! Matrices over F_q, rank, rank distance and canonical subspaces.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::BufRead;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::gf::{build_field, Field, FieldElement};
use crate::{Error, Rational, Result};

/// A dense m×n matrix over F_q stored row-major.
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: field, shape, then row-major entries.
impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.q(), self.rows, self.cols, &self.data).cmp(&(
            other.field.q(),
            other.rows,
            other.cols,
            &other.data,
        ))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Matrix(q={}, {}x{}, {:?})",
            self.field.q(),
            self.rows,
            self.cols,
            self.data
        )
    }
}

/// Text format: `q m n` followed by m lines of n entries.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.field.q(), self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| v >= field.q()) {
            return Err(Error::ElementOutOfRange {
                value: bad as u64,
                q: field.q(),
            });
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Field, rows: &[Vec<u32>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, m, n, rows.concat())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut out = Matrix::zeros(field, n, n);
        for i in 0..n {
            out.data[i * n + i] = 1;
        }
        out
    }

    /// Matrix whose row-major entries are the base-q digits of `index`, least significant first.
    pub fn from_index(field: Field, rows: usize, cols: usize, mut index: u64) -> Self {
        let q = field.q() as u64;
        let mut data = vec![0u32; rows * cols];
        for slot in data.iter_mut() {
            *slot = (index % q) as u32;
            index /= q;
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn to_index(&self) -> u64 {
        let q = self.field.q() as u64;
        self.data
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * q + d as u64)
    }

    pub(crate) fn from_parts(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u32> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![0u32; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Matrix::from_parts(self.field.clone(), self.cols, self.rows, data)
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field.q() != other.field.q() {
            return Err(Error::FieldMismatch {
                left: self.field.q(),
                right: other.field.q(),
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| self.field.add(a, b)))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| self.field.sub(a, b)))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(u32, u32) -> u32) -> Matrix {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Matrix::from_parts(self.field.clone(), self.rows, self.cols, data)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix::from_parts(self.field.clone(), self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field.q() != other.field.q() {
            return Err(Error::FieldMismatch {
                left: self.field.q(),
                right: other.field.q(),
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut data = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    data[idx] = f.add(data[idx], f.mul(a, other.data[k * other.cols + j]));
                }
            }
        }
        Ok(Matrix::from_parts(f.clone(), self.rows, other.cols, data))
    }

    /// Rank over F_q. Binary matrices with a side of at most 64 use packed XOR elimination.
    pub fn rank(&self) -> usize {
        if self.field.q() == 2 {
            if self.cols <= 64 {
                let mut words: Vec<u64> = (0..self.rows).map(|i| pack_bits(self.row(i))).collect();
                return rank_gf2_words(&mut words);
            }
            if self.rows <= 64 {
                let mut words: Vec<u64> =
                    (0..self.cols).map(|j| pack_bits(&self.column(j))).collect();
                return rank_gf2_words(&mut words);
            }
        }
        self.rank_generic()
    }

    /// Rank by generic element-wise Gaussian elimination (no packing).
    pub fn rank_generic(&self) -> usize {
        let mut rows: Vec<Vec<u32>> = self
            .data
            .chunks(self.cols.max(1))
            .map(<[u32]>::to_vec)
            .collect();
        if self.cols == 0 {
            return 0;
        }
        rref_in_place(&self.field, &mut rows, self.cols).len()
    }

    /// Reduced row echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self) -> (Vec<Vec<u32>>, Vec<usize>) {
        let mut rows: Vec<Vec<u32>> = self
            .data
            .chunks(self.cols.max(1))
            .map(<[u32]>::to_vec)
            .collect();
        let pivots = rref_in_place(&self.field, &mut rows, self.cols);
        rows.truncate(pivots.len());
        (rows, pivots)
    }

    /// The column space as a subspace of F_q^m.
    pub fn column_space(&self) -> Subspace {
        let cols: Vec<Vec<u32>> = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::from_vectors(self.field.clone(), self.rows, cols)
    }

    pub fn row_space(&self) -> Subspace {
        let rows: Vec<Vec<u32>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        Subspace::from_vectors(self.field.clone(), self.cols, rows)
    }

    /// Parses one matrix in the `q m n` text format.
    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text.lines().map(str::to_owned).map(Ok::<_, std::io::Error>);
        read_matrix(&mut lines, None)
    }
}

/// Reads a matrix in text format from a line iterator, skipping blank lines.
/// When `cache` holds a field of matching order it is reused.
pub(crate) fn read_matrix<I>(lines: &mut I, cache: Option<&Field>) -> Result<Matrix>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    let mut next_line = || -> Result<String> {
        for line in lines.by_ref() {
            let line = line?;
            if !line.trim().is_empty() {
                return Ok(line);
            }
        }
        Err(Error::Parse("unexpected end of matrix input".into()))
    };
    let header = next_line()?;
    let nums = parse_numbers(&header)?;
    let [q, m, n] = nums[..] else {
        return Err(Error::Parse(format!(
            "matrix header must be `q m n`, got {header:?}"
        )));
    };
    let field = match cache {
        Some(f) if f.q() as u64 == q => f.clone(),
        _ => field_for_order(q)?,
    };
    let (m, n) = (m as usize, n as usize);
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m {
        let row = parse_numbers(&next_line()?)?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "expected {n} entries per row, got {}",
                row.len()
            )));
        }
        data.extend(row.into_iter().map(|v| v as u32));
    }
    if data.iter().any(|&v| v as u64 >= q) {
        return Err(Error::Parse(format!("entry out of range for q = {q}")));
    }
    Matrix::new(field, m, n, data)
}

/// Reads every matrix from a buffered reader.
pub fn read_matrices<R: BufRead>(reader: R) -> Result<Vec<Matrix>> {
    let mut lines = reader.lines().peekable();
    let mut out = Vec::new();
    let mut field: Option<Field> = None;
    loop {
        while matches!(lines.peek(), Some(Ok(l)) if l.trim().is_empty()) {
            lines.next();
        }
        if lines.peek().is_none() {
            break;
        }
        let mat = read_matrix(&mut lines, field.as_ref())?;
        field = Some(mat.field().clone());
        out.push(mat);
    }
    Ok(out)
}

pub(crate) fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

/// Builds the field of order `q` by factoring it as a prime power.
pub fn field_for_order(q: u64) -> Result<Field> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not a prime power"
        )));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
    let mut e = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidParameter(format!(
            "q = {q} is not a prime power"
        )));
    }
    build_field(p, e)
}

fn pack_bits(row: &[u32]) -> u64 {
    row.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | ((b as u64 & 1) << i))
}

/// Rank of packed binary rows, destroying the input.
pub fn rank_gf2_words(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let pivot = rows[i];
        if pivot == 0 {
            continue;
        }
        rank += 1;
        let low = pivot & pivot.wrapping_neg();
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
    }
    rank
}

/// In-place RREF over the first `cols` columns; returns pivot columns. Nonzero rows end up first.
pub(crate) fn rref_in_place(field: &Field, rows: &mut [Vec<u32>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]);
        if inv != 1 {
            for v in rows[r].iter_mut() {
                *v = field.mul(*v, inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Normalized rank distance `rank(X − Y) / n`, exact.
pub fn rank_distance(x: &Matrix, y: &Matrix) -> Result<Rational> {
    let diff = x.sub(y)?;
    Ok(Rational::new(
        BigInt::from(diff.rank()),
        BigInt::from(x.cols()),
    ))
}

/// Entrywise `Σ coeffs[i] · mats[i]`.
pub fn mat_linear_combine(coeffs: &[FieldElement], mats: &[Matrix]) -> Result<Matrix> {
    if coeffs.is_empty() || mats.is_empty() {
        return Err(Error::Empty("linear combination needs at least one term"));
    }
    if coeffs.len() != mats.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} matrices",
            coeffs.len(),
            mats.len()
        )));
    }
    let first = &mats[0];
    let field = first.field();
    let mut acc = Matrix::zeros(field.clone(), first.rows(), first.cols());
    for (c, x) in coeffs.iter().zip(mats) {
        if c.order() != field.q() {
            return Err(Error::FieldMismatch {
                left: field.q(),
                right: c.order(),
            });
        }
        acc.check_same_shape(x)?;
        if c.value() == 0 {
            continue;
        }
        for (a, &b) in acc.data.iter_mut().zip(&x.data) {
            *a = field.add(*a, field.mul(c.value(), b));
        }
    }
    Ok(acc)
}

/// A subspace of F_q^a stored as the RREF basis of its row span.
///
/// Two subspaces are equal exactly when their bases agree entrywise.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q()
            && self.ambient == other.ambient
            && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(q={}, ambient={}, basis={:?})",
            self.field.q(),
            self.ambient,
            self.basis
        )
    }
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical span of arbitrary (possibly dependent) vectors of length `ambient`.
    pub fn from_vectors(field: Field, ambient: usize, mut vectors: Vec<Vec<u32>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        let pivots = rref_in_place(&field, &mut vectors, ambient);
        vectors.truncate(pivots.len());
        Subspace {
            field,
            ambient,
            basis: vectors,
            pivots,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The basis as a dim×ambient matrix, or `None` for the zero subspace.
    pub fn basis_matrix(&self) -> Option<Matrix> {
        if self.basis.is_empty() || self.ambient == 0 {
            return None;
        }
        Some(Matrix::from_parts(
            self.field.clone(),
            self.basis.len(),
            self.ambient,
            self.basis.concat(),
        ))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.field.q() != other.field.q() {
            return Err(Error::FieldMismatch {
                left: self.field.q(),
                right: other.field.q(),
            });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Residue of `v` after eliminating every pivot coordinate; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = out[p];
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Ok(Subspace::from_vectors(
            self.field.clone(),
            self.ambient,
            vectors,
        ))
    }

    pub fn sum_dim(&self, other: &Subspace) -> Result<usize> {
        Ok(self.sum(other)?.dim())
    }

    /// `dim U + dim V − dim(U + V)`.
    pub fn intersect_dim(&self, other: &Subspace) -> Result<usize> {
        let s = self.sum_dim(other)?;
        Ok(self.dim() + other.dim() - s)
    }

    /// Explicit intersection by the Zassenhaus construction.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let a = self.ambient;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for u in &self.basis {
            let mut r = u.clone();
            r.extend_from_slice(u);
            rows.push(r);
        }
        for v in &other.basis {
            let mut r = v.clone();
            r.extend(std::iter::repeat(0).take(a));
            rows.push(r);
        }
        let pivots = rref_in_place(&self.field, &mut rows, 2 * a);
        let meet: Vec<Vec<u32>> = rows
            .into_iter()
            .take(pivots.len())
            .zip(&pivots)
            .filter(|(_, &p)| p >= a)
            .map(|(r, _)| r[a..].to_vec())
            .collect();
        Ok(Subspace::from_vectors(self.field.clone(), a, meet))
    }

    /// All q^dim vectors of the subspace, ordered by coefficient index.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let q = self.field.q() as u64;
        let total = q.pow(self.dim() as u32);
        (0..total).map(|idx| self.combination(idx)).collect()
    }

    /// The vector with base-q coefficient digits `idx` over the basis.
    pub fn combination(&self, mut idx: u64) -> Vec<u32> {
        let f = &self.field;
        let q = f.q() as u64;
        let mut v = vec![0u32; self.ambient];
        for row in &self.basis {
            let c = (idx % q) as u32;
            idx /= q;
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        v
    }

    /// Every `dim`-dimensional subspace of F_q^ambient, built directly from RREF shapes.
    pub fn enumerate_all(field: Field, ambient: usize, dim: usize) -> Vec<Subspace> {
        let mut out = Vec::new();
        if dim > ambient {
            return out;
        }
        let q = field.q();
        let mut pivots: Vec<usize> = (0..dim).collect();
        loop {
            // free slots: row i, columns after its pivot that are not pivots
            let free: Vec<(usize, usize)> = (0..dim)
                .flat_map(|i| {
                    let piv = &pivots;
                    (piv[i] + 1..ambient)
                        .filter(move |c| !piv.contains(c))
                        .map(move |c| (i, c))
                })
                .collect();
            let mut digits = vec![0u32; free.len()];
            loop {
                let mut basis = vec![vec![0u32; ambient]; dim];
                for (i, &p) in pivots.iter().enumerate() {
                    basis[i][p] = 1;
                }
                for (&(i, c), &d) in free.iter().zip(&digits) {
                    basis[i][c] = d;
                }
                out.push(Subspace {
                    field: field.clone(),
                    ambient,
                    basis,
                    pivots: pivots.clone(),
                });
                // odometer increment
                let mut k = 0;
                while k < digits.len() {
                    digits[k] += 1;
                    if digits[k] < q {
                        break;
                    }
                    digits[k] = 0;
                    k += 1;
                }
                if k == digits.len() {
                    break;
                }
            }
            if !next_combination(&mut pivots, ambient) {
                break;
            }
        }
        out
    }
}

/// Advances a sorted k-subset of `0..n` to the next one in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Canonical subspace spanned by the rows of a matrix.
pub fn subspace_from_rows(rows: &Matrix) -> Subspace {
    rows.row_space()
}

pub fn subspace_sum_dim(u: &Subspace, v: &Subspace) -> Result<usize> {
    u.sum_dim(v)
}

pub fn subspace_intersect_dim(u: &Subspace, v: &Subspace) -> Result<usize> {
    u.intersect_dim(v)
}

/// Reshapes a length-mn vector into an m×n matrix (row-major).
pub fn vector_to_matrix(field: &Field, m: usize, n: usize, v: &[u32]) -> Matrix {
    Matrix::from_parts(Arc::clone(field), m, n, v.to_vec())
}
