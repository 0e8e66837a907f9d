//! Finite-dimensional associative *-algebras given by structure constants.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, axpy, format_vector, quotient_with_section, unit_vector, zero_vector, Matrix, Quotient, Subspace, Vector};
use crate::poly::characteristic_polynomial;
use crate::scalar::Scalar;

/// Largest dimension accepted by the generic character solver.
pub const DEFAULT_CHARACTER_BOUND: usize = 64;

/// Which concrete family an algebra came from. Used for model-aware
/// character enumeration and for block-mask ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Matrix(usize),
    Functions(usize),
    DirectSum(Vec<Block>),
    Generic,
}

/// One summand of a direct sum, occupying coordinates `offset..offset + dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub offset: usize,
    pub dim: usize,
    pub model: Model,
}

/// A linear functional given by its values on the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vector,
}

impl Character {
    pub fn eval(&self, a: &[Scalar]) -> Scalar {
        linalg::dot(&self.values, a)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ{}", format_vector(&self.values))
    }
}

/// Basis, sparse structure constants `e_i e_j = Σ_k c_{ij}^k e_k`, and an
/// antilinear involution `a* = J · conj(a)`.
#[derive(Clone, PartialEq, Eq)]
pub struct StarAlgebra {
    dim: usize,
    labels: Vec<String>,
    products: Vec<Vec<(usize, Scalar)>>,
    involution: Matrix,
    unit: Option<Vector>,
    model: Model,
}

impl fmt::Debug for StarAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StarAlgebra(dim {}, {:?})", self.dim, self.model)
    }
}

impl StarAlgebra {
    /// Builds an algebra from dense structure constants `constants[i][j]`
    /// (the coordinates of `e_i e_j`) and validates every axiom.
    pub fn from_structure_constants(
        labels: Vec<String>,
        constants: Vec<Vec<Vector>>,
        involution: Matrix,
        unit: Option<Vector>,
    ) -> Result<Self> {
        let dim = labels.len();
        if constants.len() != dim || constants.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: constants.len() });
        }
        let mut products = Vec::with_capacity(dim * dim);
        for row in &constants {
            for v in row {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
                }
                products.push(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect());
            }
        }
        let alg = Self::from_sparse(labels, products, involution, unit, Model::Generic)?;
        alg.validate()?;
        Ok(alg)
    }

    fn from_sparse(
        labels: Vec<String>,
        products: Vec<Vec<(usize, Scalar)>>,
        involution: Matrix,
        unit: Option<Vector>,
        model: Model,
    ) -> Result<Self> {
        let dim = labels.len();
        if involution.rows() != dim || involution.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: involution.rows() });
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: u.len() });
            }
        }
        Ok(StarAlgebra { dim, labels, products, involution, unit, model })
    }

    /// `M_n` with basis `E_mn`, `E_mn E_kl = δ_nk E_ml`, involution the
    /// conjugate transpose.
    pub fn matrix(n: usize) -> Result<Self> {
        Self::matrix_with_labels(n, |a, b| format!("E{}{}", a + 1, b + 1))
    }

    /// Truncated Moyal matrix basis: `M_n` relabelled `f_mn` (from `f_00`),
    /// with `f_mn ⋆ f_kl = δ_nk f_ml`.
    pub fn moyal(n: usize) -> Result<Self> {
        Self::matrix_with_labels(n, |a, b| format!("f_{a}{b}"))
    }

    fn matrix_with_labels(n: usize, label: impl Fn(usize, usize) -> String) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix algebra needs n >= 1".into()));
        }
        let dim = n * n;
        let idx = |a: usize, b: usize| a * n + b;
        let mut labels = Vec::with_capacity(dim);
        let mut products = vec![Vec::new(); dim * dim];
        let mut involution = Matrix::zeros(dim, dim);
        let mut unit = zero_vector(dim);
        for a in 0..n {
            for b in 0..n {
                labels.push(label(a, b));
                involution[(idx(b, a), idx(a, b))] = Scalar::one();
                for c in 0..n {
                    products[idx(a, b) * dim + idx(b, c)] = vec![(idx(a, c), Scalar::one())];
                }
            }
            unit[idx(a, a)] = Scalar::one();
        }
        Self::from_sparse(labels, products, involution, Some(unit), Model::Matrix(n))
    }

    /// Complex functions on `points` points, basis the point indicators.
    pub fn functions(points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidArgument("function algebra needs at least one point".into()));
        }
        let labels = (0..points).map(|x| format!("e{}", x + 1)).collect();
        let mut products = vec![Vec::new(); points * points];
        for x in 0..points {
            products[x * points + x] = vec![(x, Scalar::one())];
        }
        let unit = vec![Scalar::one(); points];
        Self::from_sparse(labels, products, Matrix::identity(points), Some(unit), Model::Functions(points))
    }

    /// `A ⊕ B` with componentwise operations; nested sums are flattened
    /// into a single block list.
    pub fn direct_sum(a: &StarAlgebra, b: &StarAlgebra) -> Result<Self> {
        let dim = a.dim + b.dim;
        let mut labels = Vec::with_capacity(dim);
        labels.extend(a.labels.iter().map(|l| format!("{l}@0")));
        let second_index = a.blocks().len();
        labels.extend(b.labels.iter().map(|l| format!("{l}@{second_index}")));
        let mut products = vec![Vec::new(); dim * dim];
        for i in 0..a.dim {
            for j in 0..a.dim {
                products[i * dim + j] = a.products[i * a.dim + j].clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                products[(a.dim + i) * dim + a.dim + j] =
                    b.products[i * b.dim + j].iter().map(|(k, c)| (a.dim + k, c.clone())).collect();
            }
        }
        let mut involution = Matrix::zeros(dim, dim);
        for r in 0..a.dim {
            for c in 0..a.dim {
                involution[(r, c)] = a.involution[(r, c)].clone();
            }
        }
        for r in 0..b.dim {
            for c in 0..b.dim {
                involution[(a.dim + r, a.dim + c)] = b.involution[(r, c)].clone();
            }
        }
        let unit = match (&a.unit, &b.unit) {
            (Some(u), Some(v)) => Some(u.iter().chain(v).cloned().collect()),
            _ => None,
        };
        let mut blocks = a.blocks();
        blocks.extend(b.blocks().into_iter().map(|blk| Block { offset: blk.offset + a.dim, ..blk }));
        Self::from_sparse(labels, products, involution, unit, Model::DirectSum(blocks))
    }

    /// Direct sum of several algebras, left to right.
    pub fn direct_sum_of(parts: &[StarAlgebra]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
        let mut acc = first.clone();
        for p in rest {
            acc = Self::direct_sum(&acc, p)?;
        }
        Ok(acc)
    }

    /// Summands of a direct sum; any other algebra is a single block.
    pub fn blocks(&self) -> Vec<Block> {
        match &self.model {
            Model::DirectSum(blocks) => blocks.clone(),
            m => vec![Block { offset: 0, dim: self.dim, model: m.clone() }],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn involution_matrix(&self) -> &Matrix {
        &self.involution
    }

    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    pub fn is_unital(&self) -> bool {
        self.unit.is_some()
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.dim)
    }

    pub fn basis(&self, i: usize) -> Vector {
        unit_vector(self.dim, i)
    }

    pub fn check_element(&self, a: &[Scalar]) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
        }
        Ok(())
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let mut out = self.zero();
        for (k, c) in &self.products[i * self.dim + j] {
            out[*k] += c;
        }
        out
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let products = &self.products[i * self.dim + j];
                if products.is_empty() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in products {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// `a₁ a₂ ⋯ a_n`.
    pub fn mul_all(&self, factors: &[&[Scalar]]) -> Vector {
        let (first, rest) = factors.split_first().expect("at least one factor");
        rest.iter().fold(first.to_vec(), |acc, f| self.mul(&acc, f))
    }

    pub fn commutator(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        linalg::sub(&self.mul(a, b), &self.mul(b, a))
    }

    pub fn star(&self, a: &[Scalar]) -> Vector {
        self.involution.mul_vec(&linalg::conj(a))
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(a, &self.basis(j))).collect();
        Matrix::from_columns(self.dim, &cols).expect("square")
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mult(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.mul(&self.basis(j), a)).collect();
        Matrix::from_columns(self.dim, &cols).expect("square")
    }

    /// Matrix of the inner derivation `x ↦ [m, x]`.
    pub fn ad(&self, m: &[Scalar]) -> Matrix {
        self.left_mult(m).sub(&self.right_mult(m))
    }

    /// Checks associativity on all basis triples, the involution axioms on
    /// all basis pairs, and the unit laws.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis(k));
                    let right = self.mul(&self.basis(i), &self.basis_product(j, k));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            if self.star(&self.star(&e)) != e {
                return Err(Error::InvalidAlgebra(format!("involution is not involutive on {}", self.labels[i])));
            }
            for j in 0..n {
                let f = self.basis(j);
                if self.star(&self.mul(&e, &f)) != self.mul(&self.star(&f), &self.star(&e)) {
                    return Err(Error::InvalidAlgebra(format!(
                        "involution is not an antihomomorphism on ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        if let Some(u) = &self.unit {
            for i in 0..n {
                let e = self.basis(i);
                if self.mul(u, &e) != e || self.mul(&e, u) != e {
                    return Err(Error::InvalidAlgebra(format!("unit fails on {}", self.labels[i])));
                }
            }
        }
        Ok(())
    }

    pub fn is_central(&self, z: &[Scalar]) -> bool {
        (0..self.dim).all(|i| linalg::is_zero_vector(&self.commutator(z, &self.basis(i))))
    }

    /// First basis element failing to commute with `z`, rendered as a witness.
    pub fn centrality_witness(&self, z: &[Scalar]) -> Option<String> {
        (0..self.dim).find_map(|i| {
            let c = self.commutator(z, &self.basis(i));
            (!linalg::is_zero_vector(&c)).then(|| {
                format!("[{}, {}] = {}", format_vector(z), self.labels[i], format_vector(&c))
            })
        })
    }

    /// `Z(A)`, as the joint kernel of `ad(e_i)` transposed.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            // z ↦ [z, e_i] is right_mult(e_i) − left_mult(e_i) applied to z
            let m = self.right_mult(&self.basis(i)).sub(&self.left_mult(&self.basis(i)));
            for r in 0..n {
                rows.push(m.row(r).to_vec());
            }
        }
        if rows.is_empty() {
            return Subspace::zero(0);
        }
        let kernel = Matrix::from_rows(&rows).expect("consistent rows").kernel();
        Subspace::span(n, &kernel).expect("ambient dimension")
    }

    /// All derivations, as a subspace of linear maps flattened column-major
    /// (see [`Matrix::to_flat`]).
    pub fn derivations(&self) -> Subspace {
        let n = self.dim;
        let var = |r: usize, c: usize| c * n + r;
        let mut rows: Vec<Vector> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                // D(e_i e_j) − D(e_i) e_j − e_i D(e_j) = 0, one row per output coordinate s
                let mut eqs = vec![zero_vector(n * n); n];
                for (k, c) in &self.products[i * n + j] {
                    for (s, eq) in eqs.iter_mut().enumerate() {
                        eq[var(s, *k)] += c;
                    }
                }
                for r in 0..n {
                    for (s, c) in &self.products[r * n + j] {
                        eqs[*s][var(r, i)] -= c;
                    }
                    for (s, c) in &self.products[i * n + r] {
                        eqs[*s][var(r, j)] -= c;
                    }
                }
                rows.extend(eqs.into_iter().filter(|e| !linalg::is_zero_vector(e)));
            }
        }
        if rows.is_empty() {
            return Subspace::full(n * n);
        }
        let kernel = Matrix::from_rows(&rows).expect("consistent rows").kernel();
        Subspace::span(n * n, &kernel).expect("ambient dimension")
    }

    /// Witness of the first Leibniz failure of the linear map `d`, if any.
    pub fn leibniz_witness(&self, d: &Matrix) -> Option<String> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let (a, b) = (self.basis(i), self.basis(j));
                let lhs = d.mul_vec(&self.mul(&a, &b));
                let rhs = linalg::add(&self.mul(&d.mul_vec(&a), &b), &self.mul(&a, &d.mul_vec(&b)));
                if lhs != rhs {
                    return Some(format!(
                        "D({} {}) = {} but D(a)b + aD(b) = {}",
                        self.labels[i],
                        self.labels[j],
                        format_vector(&lhs),
                        format_vector(&rhs)
                    ));
                }
            }
        }
        None
    }

    /// First element of the subspace basis that breaks closure under left or
    /// right multiplication by a basis element or under the involution.
    pub fn ideal_witness(&self, ideal: &Subspace) -> Option<String> {
        for v in ideal.basis() {
            for i in 0..self.dim {
                let e = self.basis(i);
                let left = self.mul(&e, v);
                if !ideal.contains(&left) {
                    return Some(format!("{} · {} = {}", self.labels[i], format_vector(v), format_vector(&left)));
                }
                let right = self.mul(v, &e);
                if !ideal.contains(&right) {
                    return Some(format!("{} · {} = {}", format_vector(v), self.labels[i], format_vector(&right)));
                }
            }
            let s = self.star(v);
            if !ideal.contains(&s) {
                return Some(format!("{}* = {}", format_vector(v), format_vector(&s)));
            }
        }
        None
    }

    /// Smallest two-sided ideal containing `generators`, closed under the
    /// involution as well when `star_closed` is set.
    pub fn ideal_closure(&self, generators: &[Vector], star_closed: bool) -> Result<Subspace> {
        let mut current = Subspace::span(self.dim, generators)?;
        loop {
            let mut vectors: Vec<Vector> = current.basis().to_vec();
            for v in current.basis() {
                for i in 0..self.dim {
                    let e = self.basis(i);
                    vectors.push(self.mul(&e, v));
                    vectors.push(self.mul(v, &e));
                }
                if star_closed {
                    vectors.push(self.star(v));
                }
            }
            let next = Subspace::span(self.dim, &vectors)?;
            if next.dim() == current.dim() {
                return Ok(current);
            }
            current = next;
        }
    }

    /// `A / I` with structure `x y = π(σx σy)`, involution `π J σ` and unit
    /// `π(1)`, plus the quotient maps used to build it.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(StarAlgebra, Quotient)> {
        if let Some(w) = self.ideal_witness(ideal) {
            return Err(Error::NotAnIdeal { witness: w });
        }
        let q = quotient_with_section(self.dim, ideal)?;
        let qd = q.dim();
        let labels: Vec<String> = q.complement_indices().iter().map(|&i| format!("[{}]", self.labels[i])).collect();
        let lifts: Vec<Vector> = (0..qd).map(|a| q.lift(&unit_vector(qd, a))).collect();
        let mut products = Vec::with_capacity(qd * qd);
        for a in 0..qd {
            for b in 0..qd {
                let v = q.project(&self.mul(&lifts[a], &lifts[b]));
                products.push(v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
            }
        }
        let involution = q.projection().mul(&self.involution).mul(q.section());
        let unit = self.unit.as_ref().map(|u| q.project(u));
        let alg = Self::from_sparse(labels, products, involution, unit, Model::Generic)?;
        Ok((alg, q))
    }

    /// All characters. Matrix, function and direct-sum models are handled by
    /// their known answers; anything else goes through the generic solver,
    /// which accepts dimensions up to `bound`.
    pub fn characters_bounded(&self, bound: usize) -> Result<Vec<Character>> {
        match &self.model {
            Model::Matrix(1) => Ok(vec![Character { values: vec![Scalar::one()] }]),
            Model::Matrix(_) => Ok(Vec::new()),
            Model::Functions(n) => Ok((0..*n).map(|x| Character { values: unit_vector(*n, x) }).collect()),
            Model::DirectSum(blocks) if blocks.iter().all(|b| b.model != Model::Generic) => {
                let mut out = Vec::new();
                for b in blocks {
                    let inner: Vec<Character> = match &b.model {
                        Model::Matrix(1) => vec![Character { values: vec![Scalar::one()] }],
                        Model::Matrix(_) => Vec::new(),
                        Model::Functions(n) => (0..*n).map(|x| Character { values: unit_vector(*n, x) }).collect(),
                        _ => unreachable!("direct sums hold flattened leaf blocks"),
                    };
                    for ch in inner {
                        let mut values = self.zero();
                        for (k, v) in ch.values.into_iter().enumerate() {
                            values[b.offset + k] = v;
                        }
                        out.push(Character { values });
                    }
                }
                Ok(out)
            }
            _ => self.characters_generic(bound),
        }
    }

    pub fn characters(&self) -> Result<Vec<Character>> {
        self.characters_bounded(DEFAULT_CHARACTER_BOUND)
    }

    /// Generic solver: characters vanish on the ideal generated by
    /// commutators, so they are characters of the commutative quotient `B`.
    /// A character ψ of `B` satisfies `ψ ∘ L_b = ψ(b) ψ`, so its value vector
    /// is a joint eigenvalue tuple of the transposed multiplication operators.
    /// Those tuples are found by splitting into joint eigenspaces, and every
    /// candidate is verified exactly.
    pub fn characters_generic(&self, bound: usize) -> Result<Vec<Character>> {
        if self.dim > bound {
            return Err(Error::Unsupported(format!(
                "character enumeration for a generic algebra of dimension {} (bound {bound})",
                self.dim
            )));
        }
        let mut commutators = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let c = self.commutator(&self.basis(i), &self.basis(j));
                if !linalg::is_zero_vector(&c) {
                    commutators.push(c);
                }
            }
        }
        let ideal = self.ideal_closure(&commutators, false)?;
        let q = quotient_with_section(self.dim, &ideal)?;
        let qd = q.dim();
        if qd == 0 {
            return Ok(Vec::new());
        }
        let lifts: Vec<Vector> = (0..qd).map(|a| q.lift(&unit_vector(qd, a))).collect();
        // transposed left multiplication in B: row-vector action ψ ↦ ψ L_a
        let ops: Vec<Matrix> = lifts
            .iter()
            .map(|la| {
                let cols: Vec<Vector> = lifts.iter().map(|lb| q.project(&self.mul(la, lb))).collect();
                Matrix::from_columns(qd, &cols).expect("square").transpose()
            })
            .collect();
        let mut tuples: Vec<(Subspace, Vector)> = vec![(Subspace::full(qd), Vec::new())];
        for op in &ops {
            let mut next = Vec::new();
            for (space, values) in tuples {
                for (eig, sub) in split_by_operator(op, &space)? {
                    let mut v = values.clone();
                    v.push(eig);
                    next.push((sub, v));
                }
            }
            tuples = next;
        }
        let mut out: Vec<Character> = Vec::new();
        for (_, values) in tuples {
            // values[a] = ψ([e_{c_a}]); pull back along π
            let pulled = q.projection().transpose().mul_vec(&values);
            let ch = Character { values: pulled };
            if self.is_character(&ch) && !out.contains(&ch) {
                out.push(ch);
            }
        }
        Ok(out)
    }

    pub fn is_character(&self, ch: &Character) -> bool {
        if ch.values.len() != self.dim || linalg::is_zero_vector(&ch.values) {
            return false;
        }
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| ch.eval(&self.basis_product(i, j)) == &ch.values[i] * &ch.values[j])
        })
    }

    /// Indices (into `characters`) of those not vanishing on `a`.
    pub fn support(&self, a: &[Scalar], characters: &[Character]) -> Vec<usize> {
        characters.iter().enumerate().filter(|(_, ch)| !ch.eval(a).is_zero()).map(|(k, _)| k).collect()
    }

    /// Random element with small Gaussian-integer coordinates.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Vector {
        (0..self.dim).map(|_| Scalar::complex(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect()
    }
}

/// Splits an invariant subspace `space` of the row-vector operator `op`
/// (acting as `ψ ↦ op · ψ`) into eigenspaces with their eigenvalues.
fn split_by_operator(op: &Matrix, space: &Subspace) -> Result<Vec<(Scalar, Subspace)>> {
    let k = space.dim();
    if k == 0 {
        return Ok(Vec::new());
    }
    let basis = Matrix::from_columns(space.ambient_dim(), space.basis())?;
    // restriction R with op · basis = basis · R
    let image = op.mul(&basis);
    let mut restricted = Matrix::zeros(k, k);
    for c in 0..k {
        let sol = linalg::solve_linear(&basis, &image.column(c))?
            .ok_or_else(|| Error::InvalidAlgebra("multiplication operators do not commute".into()))?;
        for r in 0..k {
            restricted[(r, c)] = sol.particular[r].clone();
        }
    }
    let (roots, rest) = characteristic_polynomial(&restricted).gaussian_rational_roots();
    if rest > 0 {
        return Err(Error::Unsupported(format!(
            "multiplication operator has {rest} eigenvalue(s) outside the Gaussian rationals"
        )));
    }
    let mut out = Vec::new();
    for r in roots {
        let shifted = restricted.sub(&Matrix::identity(k).scale(&r));
        let vectors: Vec<Vector> = shifted
            .kernel()
            .into_iter()
            .map(|coords| {
                let mut v = zero_vector(space.ambient_dim());
                for (c, b) in coords.iter().zip(space.basis()) {
                    axpy(&mut v, c, b);
                }
                v
            })
            .collect();
        out.push((r, Subspace::span(space.ambient_dim(), &vectors)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(alg: &StarAlgebra, label: &str) -> Vector {
        let i = alg.labels().iter().position(|l| l == label).expect("label");
        alg.basis(i)
    }

    #[test]
    fn matrix_products() {
        let m1 = StarAlgebra::matrix(1).unwrap();
        assert_eq!(m1.unit().unwrap(), &vec![Scalar::one()]);
        let m2 = StarAlgebra::matrix(2).unwrap();
        assert_eq!(m2.mul(&e(&m2, "E12"), &e(&m2, "E21")), e(&m2, "E11"));
        assert_eq!(m2.mul(&e(&m2, "E21"), &e(&m2, "E12")), e(&m2, "E22"));
        StarAlgebra::matrix(3).unwrap().validate().unwrap();
        assert!(StarAlgebra::matrix(0).is_err());
    }

    #[test]
    fn function_algebra() {
        let f = StarAlgebra::functions(4).unwrap();
        f.validate().unwrap();
        assert_eq!(f.characters().unwrap().len(), 4);
        assert!(linalg::is_zero_vector(&f.mul(&f.basis(1), &f.basis(2))));
        assert_eq!(f.center().dim(), 4);
        assert_eq!(f.derivations().dim(), 0);
        assert_eq!(f.characters_generic(64).unwrap().len(), 4);
    }

    #[test]
    fn direct_sums() {
        let s = StarAlgebra::direct_sum(&StarAlgebra::matrix(1).unwrap(), &StarAlgebra::matrix(1).unwrap()).unwrap();
        let f = StarAlgebra::functions(2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(s.basis_product(i, j), f.basis_product(i, j));
            }
        }
        let m23 = StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(3).unwrap()).unwrap();
        assert_eq!(m23.dim(), 13);
        m23.validate().unwrap();
        assert!(m23.characters().unwrap().is_empty());
        assert!(m23.characters_generic(64).unwrap().is_empty());
        assert_eq!(m23.center().dim(), 2);
        let mixed = StarAlgebra::direct_sum(&StarAlgebra::matrix(1).unwrap(), &f).unwrap();
        assert_eq!(mixed.characters().unwrap().len(), 3);
    }

    #[test]
    fn centers_and_derivations() {
        let m3 = StarAlgebra::matrix(3).unwrap();
        let z = m3.center();
        assert_eq!(z, Subspace::span(9, &[m3.unit().unwrap().clone()]).unwrap());
        assert_eq!(StarAlgebra::matrix(2).unwrap().derivations().dim(), 3);
        assert_eq!(StarAlgebra::matrix(1).unwrap().derivations().dim(), 0);
    }

    #[test]
    fn matrix_blocks_have_no_characters() {
        let m4 = StarAlgebra::matrix(4).unwrap();
        assert!(m4.characters().unwrap().is_empty());
        assert!(m4.characters_generic(64).unwrap().is_empty());
    }

    #[test]
    fn supports() {
        let f = StarAlgebra::functions(4).unwrap();
        let chars = f.characters().unwrap();
        assert!(f.support(&f.zero(), &chars).is_empty());
        assert_eq!(f.support(f.unit().unwrap(), &chars), vec![0, 1, 2, 3]);
        let chi = vec![Scalar::one(), Scalar::one(), Scalar::ratio(9, 25), Scalar::zero()];
        assert_eq!(f.support(&chi, &chars), vec![0, 1, 2]);
    }

    #[test]
    fn inner_derivations_are_derivations() {
        let m3 = StarAlgebra::matrix(3).unwrap();
        let ders = m3.derivations();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let m = m3.random_element(&mut rng);
            let ad = m3.ad(&m);
            assert!(ders.contains(&ad.to_flat()));
            assert!(m3.leibniz_witness(&ad).is_none());
        }
    }

    #[test]
    fn generic_characters_of_quotients() {
        // functions on 3 points modulo functions vanishing on {0, 2}
        let f = StarAlgebra::functions(3).unwrap();
        let ideal = Subspace::span(3, &[f.basis(1)]).unwrap();
        let (q, _) = f.quotient(&ideal).unwrap();
        assert_eq!(q.model(), &Model::Generic);
        let chars = q.characters().unwrap();
        assert_eq!(chars.len(), 2);
        // a non-diagonal commutative algebra: span{1, x} with x^2 = 0 has one character
        let labels = vec!["1".to_string(), "x".to_string()];
        let one = vec![Scalar::one(), Scalar::zero()];
        let x = vec![Scalar::zero(), Scalar::one()];
        let constants = vec![vec![one.clone(), x.clone()], vec![x.clone(), vec![Scalar::zero(), Scalar::zero()]]];
        let dual = StarAlgebra::from_structure_constants(labels, constants, Matrix::identity(2), Some(one.clone())).unwrap();
        let chars = dual.characters().unwrap();
        assert_eq!(chars, vec![Character { values: one }]);
    }

    #[test]
    fn bad_ideal_rejected() {
        let m2 = StarAlgebra::matrix(2).unwrap();
        let sub = Subspace::span(4, &[e(&m2, "E12")]).unwrap();
        assert!(m2.ideal_witness(&sub).is_some());
        assert!(matches!(m2.quotient(&sub), Err(Error::NotAnIdeal { .. })));
        assert_eq!(m2.ideal_closure(&[e(&m2, "E12")], true).unwrap().dim(), 4);
    }
}
