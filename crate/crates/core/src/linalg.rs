//! Dense matrices over an exact field: products, row reduction, rank,
//! nullspaces, and exact inertia of symmetric matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{Field, RealField};

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
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

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    /// `self − μ·I`
    pub fn shift(&self, mu: &F) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = m[(i, i)].sub_ref(mu);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a.mul_ref(b);
                    out[(i, j)] = out[(i, j)].add_ref(&t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add_ref(&a.mul_ref(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    /// Block-diagonal matrix built from square blocks.
    pub fn block_diagonal(blocks: &[&Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Assembles a matrix from a grid of equally sized blocks.
    pub fn from_blocks(grid: &[Vec<Self>]) -> Self {
        let br = grid[0][0].rows;
        let bc = grid[0][0].cols;
        let mut out = Self::zeros(br * grid.len(), bc * grid[0].len());
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                assert_eq!((b.rows, b.cols), (br, bc), "unequal block sizes");
                for r in 0..br {
                    for c in 0..bc {
                        out[(i * br + r, j * bc + c)] = b[(r, c)].clone();
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                if !m[(row, c)].is_zero() {
                    m[(row, c)] = m[(row, c)].mul_ref(&inv);
                }
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = &m[(row, c)];
                    if v.is_zero() {
                        continue;
                    }
                    let t = factor.mul_ref(v);
                    m[(r, c)] = m[(r, c)].sub_ref(&t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Rank via forward elimination (no back substitution).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m[(rank, col)].inv().expect("nonzero pivot");
            for r in rank + 1..m.rows {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].mul_ref(&inv);
                for c in col..m.cols {
                    let v = &m[(rank, c)];
                    if v.is_zero() {
                        continue;
                    }
                    let t = factor.mul_ref(v);
                    m[(r, c)] = m[(r, c)].sub_ref(&t);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right nullspace, one vector per free column, in
    /// echelon form: vector `j` has a 1 at its free column and zeros at the
    /// other free columns.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self · X = rhs` for a full-column-rank `self`. Returns `None`
    /// when the system is inconsistent.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>> {
        if rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "solve: {}x{} against {} rows",
                self.rows, self.cols, rhs.rows
            )));
        }
        let aug = Self::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                rhs[(r, c - self.cols)].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        if pivots.len() < self.cols {
            return Err(Error::Dimension("solve: matrix is rank deficient".into()));
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(p, c)] = red[(i, self.cols + c)].clone();
            }
        }
        Ok(Some(x))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `selfᵀ·G == G·self`: self-adjointness with respect to the Gram matrix.
    pub fn is_gram_symmetric(&self, gram: &Self) -> bool {
        self.transpose().mul(gram) == gram.mul(self)
    }

    /// `selfᵀ·G + G·self == 0`
    pub fn is_gram_skew(&self, gram: &Self) -> bool {
        self.transpose().mul(gram).add(&gram.mul(self)).is_zero()
    }

    /// Connected components of the joint sparsity pattern of square matrices.
    /// The matrices are block diagonal after permuting to these index sets.
    pub fn components(mats: &[&Self]) -> Vec<Vec<usize>> {
        let n = mats[0].rows;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for m in mats {
            assert_eq!((m.rows, m.cols), (n, n));
            for i in 0..n {
                for j in 0..n {
                    if i != j && !m[(i, j)].is_zero() {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl<F: RealField> Matrix<F> {
    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.to_f64()).collect()
    }

    /// Exact inertia of a symmetric matrix by symmetric elimination with
    /// 1×1 and 2×2 pivots (Sylvester's law of inertia).
    pub fn inertia(&self) -> Result<Inertia> {
        if !self.is_square() || *self != self.transpose() {
            return Err(Error::Dimension("inertia requires a symmetric matrix".into()));
        }
        let mut s = self.clone();
        let mut active: Vec<usize> = (0..self.rows).collect();
        let mut inertia = Inertia::default();
        while !active.is_empty() {
            if let Some(pos) = active.iter().position(|&i| !s[(i, i)].is_zero()) {
                let p = active.remove(pos);
                let d = s[(p, p)].clone();
                if d > F::zero() {
                    inertia.positive += 1;
                } else {
                    inertia.negative += 1;
                }
                let inv = d.inv().expect("nonzero pivot");
                let col: Vec<F> = active.iter().map(|&r| s[(r, p)].clone()).collect();
                for (ri, &r) in active.iter().enumerate() {
                    if col[ri].is_zero() {
                        continue;
                    }
                    let f = col[ri].mul_ref(&inv);
                    for (ci, &c) in active.iter().enumerate() {
                        if col[ci].is_zero() {
                            continue;
                        }
                        let t = f.mul_ref(&col[ci]);
                        s[(r, c)] = s[(r, c)].sub_ref(&t);
                    }
                }
                continue;
            }
            // Every remaining diagonal entry is zero.
            let pair = active.iter().enumerate().find_map(|(ai, &i)| {
                active[ai + 1..].iter().find(|&&j| !s[(i, j)].is_zero()).map(|&j| (i, j))
            });
            let Some((i, j)) = pair else {
                inertia.zero += active.len();
                break;
            };
            // The 2×2 pivot [[0, a], [a, 0]] contributes one positive and one
            // negative eigenvalue.
            inertia.positive += 1;
            inertia.negative += 1;
            let a_inv = s[(i, j)].inv().expect("nonzero pivot");
            active.retain(|&x| x != i && x != j);
            let ci: Vec<F> = active.iter().map(|&r| s[(r, i)].clone()).collect();
            let cj: Vec<F> = active.iter().map(|&r| s[(r, j)].clone()).collect();
            for (ri, &r) in active.iter().enumerate() {
                for (cc, &c) in active.iter().enumerate() {
                    let t = ci[ri].mul_ref(&cj[cc]).add_ref(&cj[ri].mul_ref(&ci[cc]));
                    if !t.is_zero() {
                        s[(r, c)] = s[(r, c)].sub_ref(&t.mul_ref(&a_inv));
                    }
                }
            }
        }
        Ok(inertia)
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|s| s.len()).max().unwrap_or(1);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| format!("{:>width$}", cells[r * self.cols + c]))
                .collect();
            writeln!(f, "[{}]", line.join("  "))?;
        }
        Ok(())
    }
}

impl<F: fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// `Σ cᵢ·vᵢ` over equally long vectors.
pub fn combine<F: Field>(coeffs: &[F], vectors: &[Vec<F>]) -> Vec<F> {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut out = vec![F::zero(); n];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = o.add_ref(&c.mul_ref(x));
            }
        }
    }
    out
}

/// Rank of a list of vectors.
pub fn span_rank<F: Field>(vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors.to_vec()).rank()
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    let joint: Vec<Vec<F>> = a.iter().chain(b).cloned().collect();
    ra == rb && span_rank(&joint) == ra
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

impl<F: Field> Matrix<F> {
    pub fn trace(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add_ref(&self[(i, i)]);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self[(r, c)].is_one()
                    } else {
                        self[(r, c)].is_zero()
                    }
                })
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, QSqrt2, Rational};
    use num_traits::Zero;

    fn q(rows: Vec<Vec<i64>>) -> Matrix<Rational> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat_int).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = q(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&ns[0])));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = q(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let good = q(vec![vec![1], vec![2], vec![3]]);
        let bad = q(vec![vec![1], vec![2], vec![4]]);
        assert_eq!(a.solve(&good).unwrap().unwrap(), q(vec![vec![1], vec![2]]));
        assert!(a.solve(&bad).unwrap().is_none());
    }

    #[test]
    fn inertia_with_zero_diagonal() {
        // [[0,1],[1,0]] has eigenvalues ±1.
        let m = q(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]);
        let i = m.inertia().unwrap();
        assert_eq!(i, Inertia { positive: 1, negative: 1, zero: 1 });
    }

    #[test]
    fn inertia_over_qsqrt2() {
        // diag(1 - √2, 3 - 2√2, 0)
        let m = Matrix::from_rows(vec![
            vec![QSqrt2::new(rat_int(1), rat_int(-1)), QSqrt2::zero(), QSqrt2::zero()],
            vec![QSqrt2::zero(), QSqrt2::new(rat_int(3), rat_int(-2)), QSqrt2::zero()],
            vec![QSqrt2::zero(), QSqrt2::zero(), QSqrt2::zero()],
        ]);
        assert_eq!(m.inertia().unwrap(), Inertia { positive: 1, negative: 1, zero: 1 });
    }

    #[test]
    fn components_split_block_pattern() {
        let m = q(vec![vec![1, 0, 2], vec![0, 1, 0], vec![2, 0, 1]]);
        assert_eq!(Matrix::components(&[&m]), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn rref_of_rational_matrix() {
        let m = Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(1, 4), rat(1, 6)]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0]);
        assert_eq!(r[(0, 1)], rat(2, 3));
    }
}
