//! Dense integer matrices, Smith normal form and integer linear systems.
//!
//! Everything in the group layer reduces to these few routines: the Smith
//! form with its unimodular transforms (and the inverse of the left one),
//! and solving `A x = b` over the integers.

use std::fmt;

/// A dense row-major matrix over `i64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Matrix {
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
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length; the
    /// column count of an empty row list is `cols`.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {i}");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn from_cols(cols: &[Vec<i64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix column {j}");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
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

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, k: i64) -> Matrix {
        let data = self.data.iter().map(|a| a * k).collect();
        Matrix { data, ..*self }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Rows `range` of the matrix.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| self.row(i)).collect();
        Matrix::from_rows(&rows, self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<i64>> = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_cols(&cols, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Determinant by fraction-free elimination (Bareiss). Only used on the
    /// small unimodular transforms, mostly in tests.
    pub fn determinant(&self) -> i64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).expect("determinant overflow")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += k * v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        if k == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// Result of [`smith_normal_form`]: `left * m * right == diag(diagonal)`
/// padded with zeros to the shape of `m`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, non-negative, `d[i] | d[i+1]`, zeros last. Length
    /// is `min(rows, cols)`.
    pub diagonal: Vec<i64>,
    pub left: Matrix,
    pub left_inv: Matrix,
    pub right: Matrix,
}

impl SmithForm {
    /// Number of non-zero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|&&d| d != 0).count()
    }

    /// The diagonal as a full matrix with the shape of the input.
    pub fn diagonal_matrix(&self) -> Matrix {
        let mut d = Matrix::zeros(self.left.rows(), self.right.cols());
        for (i, &v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v;
        }
        d
    }
}

struct Reducer {
    a: Matrix,
    left: Matrix,
    left_inv: Matrix,
    right: Matrix,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
    }

    /// row[dst] += k * row[src], tracked on both left transforms.
    fn add_row(&mut self, dst: usize, src: usize, k: i64) {
        self.a.add_row(dst, src, k);
        self.left.add_row(dst, src, k);
        self.left_inv.add_col(src, dst, -k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i64) {
        self.a.add_col(dst, src, k);
        self.right.add_col(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }

    /// Position of the non-zero entry of least absolute value in the
    /// lower-right block starting at `t`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a[(i, j)].abs();
                if v != 0 && best.is_none_or(|(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        a: m.clone(),
        left: Matrix::identity(rows),
        left_inv: Matrix::identity(rows),
        right: Matrix::identity(cols),
    };
    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // always pivot on the smallest entry left, with balanced
            // remainders, to keep the transforms small
            let Some((pi, pj)) = r.min_pivot(t) else {
                break;
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            if r.a[(t, t)] < 0 {
                r.negate_row(t);
            }
            let pivot = r.a[(t, t)];
            for i in t + 1..rows {
                let q = nearest_quotient(r.a[(i, t)], pivot);
                r.add_row(i, t, -q);
            }
            for j in t + 1..cols {
                let q = nearest_quotient(r.a[(t, j)], pivot);
                r.add_col(j, t, -q);
            }
            let cross_clear =
                (t + 1..rows).all(|i| r.a[(i, t)] == 0) && (t + 1..cols).all(|j| r.a[(t, j)] == 0);
            if !cross_clear {
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| r.a[(i, j)] % pivot != 0);
            match offender {
                Some((i, _)) => r.add_row(t, i, 1),
                None => break,
            }
        }
    }
    let diagonal = (0..steps).map(|i| r.a[(i, i)]).collect();
    SmithForm {
        diagonal,
        left: r.left,
        left_inv: r.left_inv,
        right: r.right,
    }
}

/// `q` with `|a - q·p| <= p/2`, for `p > 0`.
fn nearest_quotient(a: i64, p: i64) -> i64 {
    let q = a.div_euclid(p);
    if 2 * a.rem_euclid(p) > p {
        q + 1
    } else {
        q
    }
}

/// Solves `a x = b` over the integers. Returns one solution if any exists.
pub fn solve(a: &Matrix, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(a.rows(), b.len(), "solve: right-hand side length mismatch");
    let snf = smith_normal_form(a);
    solve_with(&snf, b)
}

/// Like [`solve`] but reuses a precomputed Smith form of `a`.
pub fn solve_with(snf: &SmithForm, b: &[i64]) -> Option<Vec<i64>> {
    let c = snf.left.mul_vec(b);
    let cols = snf.right.rows();
    let mut z = vec![0i64; cols];
    for (i, &ci) in c.iter().enumerate() {
        let d = snf.diagonal.get(i).copied().unwrap_or(0);
        if d == 0 {
            if ci != 0 {
                return None;
            }
        } else {
            if ci % d != 0 {
                return None;
            }
            z[i] = ci / d;
        }
    }
    Some(snf.right.mul_vec(&z))
}

/// A basis (as columns) of the integer kernel `{x : a x = 0}`.
pub fn integer_kernel(a: &Matrix) -> Matrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let idx: Vec<usize> = (r..a.cols()).collect();
    snf.right.select_cols(&idx)
}
