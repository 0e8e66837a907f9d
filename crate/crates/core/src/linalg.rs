//! Dense exact linear algebra: matrices, linear solves, subspaces and
//! quotients with a fixed section.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coordinates of an element of a finite-dimensional space.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn neg(v: &[Scalar]) -> Vector {
    v.iter().map(|x| -x).collect()
}

pub fn conj(v: &[Scalar]) -> Vector {
    v.iter().map(Scalar::conj).collect()
}

/// `acc += c·v`, skipping work when `c` is zero.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Renders coordinates as `[1, 0, 9/25, 0]`; used for failure witnesses.
pub fn format_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", format_vector(self.row(r)))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        let mut out = zero_vector(self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, slot) in out.iter_mut().enumerate() {
                let a = &self.data[r * self.cols + c];
                if !a.is_zero() {
                    *slot += a * x;
                }
            }
        }
        out
    }

    /// Matrix product; `None` on non-conformable shapes.
    pub fn checked_mul(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + c];
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        Some(out)
    }

    /// Matrix product. Panics on non-conformable shapes.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Flattens column-major into a single vector (used to treat linear maps
    /// as points of a coordinate space).
    pub fn to_flat(&self) -> Vector {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                v.push(self[(r, c)].clone());
            }
        }
        v
    }

    pub fn from_flat(rows: usize, cols: usize, flat: &[Scalar]) -> Matrix {
        assert_eq!(flat.len(), rows * cols);
        let mut m = Matrix::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m[(r, c)] = flat[c * rows + r].clone();
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
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
                let idx = row * m.cols + c;
                if !m.data[idx].is_zero() {
                    m.data[idx] = &m.data[idx] * &inv;
                }
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let pv = m.data[row * m.cols + c].clone();
                    if !pv.is_zero() {
                        let idx = r * m.cols + c;
                        m.data[idx] -= &(&factor * &pv);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space `{x : A·x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots, self.cols)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Scalar::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

fn kernel_from_rref(r: &Matrix, pivots: &[usize], cols: usize) -> Vec<Vector> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zero_vector(cols);
            v[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, f)];
            }
            v
        })
        .collect()
}

/// Affine solution set of `A·x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

/// Solves `A·x = b` exactly; `None` when the system is inconsistent.
///
/// The particular solution sets every free variable to zero.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<Option<Solution>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for r in 0..a.rows() {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, n)] = b[r].clone();
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut particular = zero_vector(n);
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = red[(row, n)].clone();
    }
    let coeff_pivots: Vec<usize> = pivots.clone();
    let kernel = kernel_from_rref(&red, &coeff_pivots, n);
    Ok(Some(Solution { particular, kernel }))
}

/// A linear subspace of `Scalar^n`, stored by its reduced echelon basis so
/// that equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.basis.iter().map(|v| format_vector(v)).collect();
        write!(f, "Subspace(dim {} in {}: {})", self.dim(), self.ambient_dim, rows.join(" "))
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| unit_vector(ambient_dim, i)).collect();
        Subspace { ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    /// The span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: v.len() });
            }
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient_dim));
        }
        let (red, pivots) = Matrix::from_rows(vectors)?.rref();
        let basis = (0..pivots.len()).map(|r| red.row(r).to_vec()).collect();
        Ok(Subspace { ambient_dim, basis, pivots })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Residual of `v` after eliminating against the echelon basis; zero iff
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = w[p].clone();
            if !c.is_zero() {
                axpy(&mut w, &-c, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.len() == self.ambient_dim && is_zero_vector(&self.reduce(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        let all: Vec<Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(self.ambient_dim, &all)
    }

    /// `U ∩ V`, from the kernel of `[U | −V]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let mut cols: Vec<Vector> = self.basis.clone();
        cols.extend(other.basis.iter().map(|v| neg(v)));
        let m = Matrix::from_columns(self.ambient_dim, &cols)?;
        let k = self.basis.len();
        let vectors: Vec<Vector> = m
            .kernel()
            .into_iter()
            .map(|coeffs| {
                let mut v = zero_vector(self.ambient_dim);
                for (c, u) in coeffs[..k].iter().zip(&self.basis) {
                    axpy(&mut v, c, u);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient_dim, &vectors)
    }

    /// Greedy completion by unit vectors `e_0, e_1, …` in index order: each is
    /// kept when it is independent of the subspace and the previously kept ones.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut current = self.clone();
        let mut chosen = Vec::new();
        for i in 0..self.ambient_dim {
            if current.dim() == self.ambient_dim {
                break;
            }
            let e = unit_vector(self.ambient_dim, i);
            if !current.contains(&e) {
                let mut vs = current.basis.clone();
                vs.push(e);
                current = Subspace::span(self.ambient_dim, &vs).expect("same ambient dimension");
                chosen.push(i);
            }
        }
        chosen
    }
}

/// The quotient `Scalar^n / I` with its canonical projection and a section
/// (right inverse) spanned by unit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    kernel: Subspace,
    projection: Matrix,
    section: Matrix,
    complement: Vec<usize>,
}

/// Builds `Scalar^n / I` with projection `π`, section `σ`, `π∘σ = id`,
/// `ker π = I`; `σ` maps the quotient onto the span of the unit vectors
/// chosen by [`Subspace::complement_indices`].
pub fn quotient_with_section(ambient_dim: usize, ideal: &Subspace) -> Result<Quotient> {
    if ideal.ambient_dim() != ambient_dim {
        return Err(Error::DimensionMismatch { expected: ambient_dim, found: ideal.ambient_dim() });
    }
    let complement = ideal.complement_indices();
    let q = complement.len();
    let k = ideal.dim();
    let mut cols: Vec<Vector> = ideal.basis().to_vec();
    cols.extend(complement.iter().map(|&i| unit_vector(ambient_dim, i)));
    let change = Matrix::from_columns(ambient_dim, &cols)?;
    let inv = change.inverse().ok_or_else(|| Error::InvalidArgument("basis completion failed".into()))?;
    let mut projection = Matrix::zeros(q, ambient_dim);
    for r in 0..q {
        for c in 0..ambient_dim {
            projection[(r, c)] = inv[(k + r, c)].clone();
        }
    }
    let mut section = Matrix::zeros(ambient_dim, q);
    for (j, &i) in complement.iter().enumerate() {
        section[(i, j)] = Scalar::one();
    }
    Ok(Quotient { kernel: ideal.clone(), projection, section, complement })
}

impl Quotient {
    pub fn ambient_dim(&self) -> usize {
        self.projection.cols()
    }

    pub fn dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn section(&self) -> &Matrix {
        &self.section
    }

    /// Ambient indices of the unit vectors spanning the section's image.
    pub fn complement_indices(&self) -> &[usize] {
        &self.complement
    }

    pub fn project(&self, v: &[Scalar]) -> Vector {
        self.projection.mul_vec(v)
    }

    pub fn lift(&self, x: &[Scalar]) -> Vector {
        self.section.mul_vec(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| v(r)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn solve_identity() {
        let sol = solve_linear(&Matrix::identity(2), &v(&[1, 2])).unwrap().unwrap();
        assert_eq!(sol.particular, v(&[1, 2]));
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn solve_zero_map() {
        let sol = solve_linear(&Matrix::zeros(2, 2), &v(&[0, 0])).unwrap().unwrap();
        assert_eq!(sol.particular, v(&[0, 0]));
        assert_eq!(sol.kernel.len(), 2);
    }

    #[test]
    fn solve_rank_one_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let sol = solve_linear(&a, &v(&[3, 6])).unwrap().unwrap();
        assert_eq!(sol.particular, v(&[3, 0]));
        assert_eq!(sol.kernel.len(), 1);
        // kernel spans (1, -1)
        let k = Subspace::span(2, &sol.kernel).unwrap();
        assert_eq!(k, Subspace::span(2, &[v(&[1, -1])]).unwrap());
        assert_eq!(a.mul_vec(&sol.particular), v(&[3, 6]));
    }

    #[test]
    fn solve_inconsistent_is_empty() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve_linear(&a, &v(&[3, 7])).unwrap().is_none());
        assert!(solve_linear(&a, &v(&[1])).is_err());
    }

    #[test]
    fn intersections() {
        let e1 = Subspace::span(2, &[v(&[1, 0])]).unwrap();
        let e2 = Subspace::span(2, &[v(&[0, 1])]).unwrap();
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert_eq!(e1.intersect(&e1).unwrap(), e1);

        let u = Subspace::span(3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let w = Subspace::span(3, &[v(&[1, 1, 0]), v(&[1, 0, 0])]).unwrap();
        let cap = u.intersect(&w).unwrap();
        assert_eq!(cap, Subspace::span(3, &[v(&[1, 1, 0])]).unwrap());

        let other = Subspace::zero(4);
        assert!(matches!(u.intersect(&other), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn quotients() {
        let q = quotient_with_section(3, &Subspace::zero(3)).unwrap();
        assert_eq!(q.dim(), 3);
        assert_eq!(q.section(), &Matrix::identity(3));

        let q = quotient_with_section(3, &Subspace::full(3)).unwrap();
        assert_eq!(q.dim(), 0);

        let ideal = Subspace::span(3, &[v(&[1, -1, 0])]).unwrap();
        let q = quotient_with_section(3, &ideal).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&v(&[1, 0, 0])), q.project(&v(&[0, 1, 0])));
        assert_eq!(q.projection().mul(q.section()), Matrix::identity(2));
        assert!(q.project(&v(&[1, -1, 0])).iter().all(Scalar::is_zero));
        assert_eq!(q.complement_indices(), &[0, 2]);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Matrix::zeros(0, 0).inverse(), Some(Matrix::zeros(0, 0)));
    }
}
