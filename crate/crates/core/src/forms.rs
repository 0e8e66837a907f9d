//! Differential forms over a finite derivation basis: antisymmetric
//! coefficient tensors, wedge, the Koszul differential, transfer between
//! global and local forms, and the restricted one-form module.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::algebra::StarAlgebra;
use crate::error::{Error, Result};
use crate::kappa::{pairing, PbwElement, PoincareGenerator};
use crate::linalg::{self, format_vector, is_zero_vector, solve_linear, Matrix, Vector};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::tangent::{structure_constant, ActionAssignment, Atlas, LocalDerivation};

/// Operators `X_a` on an algebra closed under commutators:
/// `[X_a, X_b] = Σ_c C_{ab}^c X_c` with scalar constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationBasis {
    algebra: StarAlgebra,
    operators: Vec<Matrix>,
    constants: Vec<Vec<Vec<Scalar>>>,
}

impl DerivationBasis {
    /// Solves for the structure constants; fails when a commutator leaves the span.
    pub fn new(algebra: &StarAlgebra, operators: Vec<Matrix>) -> Result<Self> {
        let n = algebra.dim();
        for op in &operators {
            if op.rows() != n || op.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: op.rows() });
            }
        }
        let r = operators.len();
        let flat: Vec<Vector> = operators.iter().map(Matrix::to_flat).collect();
        let system = Matrix::from_columns(n * n, &flat)?;
        let mut constants = vec![vec![vec![Scalar::zero(); r]; r]; r];
        for a in 0..r {
            for b in a + 1..r {
                let c = operators[a].commutator(&operators[b]);
                let sol = if r == 0 { None } else { solve_linear(&system, &c.to_flat())? };
                let sol = sol.ok_or_else(|| Error::NotBracketClosed { witness: format!("[X{a}, X{b}] is outside the span") })?;
                for (k, v) in sol.particular.into_iter().enumerate() {
                    constants[b][a][k] = -v.clone();
                    constants[a][b][k] = v;
                }
            }
        }
        Ok(DerivationBasis { algebra: algebra.clone(), operators, constants })
    }

    /// `p_0, …, p_d` acting through `D_μ`, with the κ-Minkowski structure constants.
    pub fn from_action(action: &ActionAssignment) -> Result<Self> {
        let report = action.verify();
        if let Some(f) = report.failures().next() {
            return Err(Error::NotBracketClosed { witness: format!("{}: {}", f.id, f.witness.clone().unwrap_or_default()) });
        }
        let r = action.rank();
        let constants = (0..r)
            .map(|a| (0..r).map(|b| (0..r).map(|c| structure_constant(a, b, c, action.kappa())).collect()).collect())
            .collect();
        Ok(DerivationBasis { algebra: action.algebra().clone(), operators: action.operators().to_vec(), constants })
    }

    /// `G_{αμ} = χ_α ∘ D^α_μ ∘ π_α`, indexed `α (d + 1) + μ`.
    pub fn global(atlas: &Atlas) -> Result<Self> {
        DerivationBasis::new(atlas.base(), global_operators(atlas))
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.operators.len()
    }

    pub fn operator(&self, a: usize) -> &Matrix {
        &self.operators[a]
    }

    pub fn constant(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.constants[a][b][c]
    }
}

fn global_operators(atlas: &Atlas) -> Vec<Matrix> {
    let mut ops = Vec::new();
    for alpha in 0..atlas.len() {
        for op in atlas.action(alpha).operators() {
            ops.push(atlas.functional(alpha).mul(op).mul(atlas.projection(alpha)));
        }
    }
    ops
}

/// Sorts `idx`, returning the permutation sign, or `None` on a repeated index.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Increasing `k`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// An antisymmetric `A`-valued map on `degree`-tuples of basis indices,
/// stored on increasing tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormN {
    degree: usize,
    rank: usize,
    dim: usize,
    values: BTreeMap<Vec<usize>, Vector>,
}

impl FormN {
    pub fn zero(degree: usize, rank: usize, dim: usize) -> Self {
        FormN { degree, rank, dim, values: BTreeMap::new() }
    }

    /// A 0-form, that is an algebra element.
    pub fn function(a: Vector, rank: usize) -> Self {
        let mut f = FormN::zero(0, rank, a.len());
        f.insert(Vec::new(), a);
        f
    }

    /// A 1-form with `ρ(X_a) = values[a]`.
    pub fn one_form(values: Vec<Vector>, dim: usize) -> Result<Self> {
        let rank = values.len();
        FormN::from_values(1, rank, dim, values.into_iter().enumerate().map(|(a, v)| (vec![a], v)))
    }

    /// Entries may use any index order; later entries for the same set add up.
    pub fn from_values(degree: usize, rank: usize, dim: usize, entries: impl IntoIterator<Item = (Vec<usize>, Vector)>) -> Result<Self> {
        let mut f = FormN::zero(degree, rank, dim);
        for (idx, v) in entries {
            if idx.len() != degree {
                return Err(Error::DimensionMismatch { expected: degree, found: idx.len() });
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= rank) {
                return Err(Error::IndexOutOfRange { index: bad, len: rank });
            }
            match sort_with_sign(&idx) {
                None if is_zero_vector(&v) => {}
                None => return Err(Error::InvalidArgument(format!("repeated index {idx:?} with nonzero value"))),
                Some((sorted, sign)) => {
                    let v = linalg::scale(&Scalar::from_int(sign), &v);
                    let sum = linalg::add(&f.value(&sorted), &v);
                    f.insert(sorted, sum);
                }
            }
        }
        Ok(f)
    }

    fn insert(&mut self, idx: Vec<usize>, v: Vector) {
        if is_zero_vector(&v) {
            self.values.remove(&idx);
        } else {
            self.values.insert(idx, v);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Nonzero values on increasing tuples.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector)> {
        self.values.iter()
    }

    /// `ρ(X_{i_1}, …, X_{i_n})` for any index order.
    pub fn value(&self, idx: &[usize]) -> Vector {
        match sort_with_sign(idx) {
            None => linalg::zero_vector(self.dim),
            Some((sorted, sign)) => match self.values.get(&sorted) {
                None => linalg::zero_vector(self.dim),
                Some(v) if sign == 1 => v.clone(),
                Some(v) => linalg::neg(v),
            },
        }
    }

    /// Multilinear evaluation on derivations `Σ_a Z^a X_a` with central `Z^a`.
    pub fn evaluate(&self, algebra: &StarAlgebra, args: &[&[Vector]]) -> Result<Vector> {
        if args.len() != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: args.len() });
        }
        for x in args {
            if x.len() != self.rank {
                return Err(Error::DimensionMismatch { expected: self.rank, found: x.len() });
            }
        }
        let mut out = linalg::zero_vector(self.dim);
        let mut idx = vec![0usize; self.degree];
        loop {
            let v = self.value(&idx);
            if !is_zero_vector(&v) {
                let mut term = v;
                for (x, &i) in args.iter().zip(&idx) {
                    term = algebra.mul(&x[i], &term);
                }
                out = linalg::add(&out, &term);
            }
            let mut k = 0;
            while k < self.degree {
                idx[k] += 1;
                if idx[k] < self.rank {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == self.degree {
                return Ok(out);
            }
        }
    }

    fn check_same_shape(&self, other: &FormN) -> Result<()> {
        if self.rank != other.rank || self.dim != other.dim {
            return Err(Error::InvalidArgument(format!(
                "form basis mismatch: rank {} dim {} vs rank {} dim {}",
                self.rank, self.dim, other.rank, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FormN) -> Result<FormN> {
        self.check_same_shape(other)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (k, v) in &other.values {
            let s = linalg::add(&out.value(k), v);
            out.insert(k.clone(), s);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> FormN {
        let mut out = FormN::zero(self.degree, self.rank, self.dim);
        for (k, v) in &self.values {
            out.insert(k.clone(), linalg::scale(c, v));
        }
        out
    }

    /// Applies a linear map to every value.
    pub fn map_values(&self, m: &Matrix) -> FormN {
        let mut out = FormN::zero(self.degree, self.rank, m.rows());
        for (k, v) in &self.values {
            out.insert(k.clone(), m.mul_vec(v));
        }
        out
    }

    /// Random form; with `central` the values are drawn from the center.
    pub fn random<R: Rng>(rng: &mut R, algebra: &StarAlgebra, degree: usize, rank: usize, central: bool) -> FormN {
        let center = algebra.center();
        let mut f = FormN::zero(degree, rank, algebra.dim());
        for t in increasing_tuples(rank, degree) {
            let v = if central {
                let mut v = algebra.zero();
                for b in center.basis() {
                    linalg::axpy(&mut v, &Scalar::complex(rng.gen_range(-3..=3), rng.gen_range(-3..=3)), b);
                }
                v
            } else {
                algebra.random_element(rng)
            };
            f.insert(t, v);
        }
        f
    }
}

impl fmt::Display for FormN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{k:?}: {}", format_vector(v))).collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn shuffles(t: &[usize], n: usize) -> Vec<(Vec<usize>, Vec<usize>, i64)> {
    let mut out = Vec::new();
    for pick in increasing_tuples(t.len(), n) {
        let left: Vec<usize> = pick.iter().map(|&i| t[i]).collect();
        let right: Vec<usize> = (0..t.len()).filter(|i| !pick.contains(i)).map(|i| t[i]).collect();
        let order: Vec<usize> = pick.iter().copied().chain((0..t.len()).filter(|i| !pick.contains(i))).collect();
        let sign = sort_with_sign(&order).map(|(_, s)| s).unwrap_or(0);
        out.push((left, right, sign));
    }
    out
}

/// `(ρ ∧ η)(X_1, …) = 1/(n! m!) Σ_σ sgn(σ) ρ(X_σ(1), …, X_σ(n)) η(X_σ(n+1), …)`,
/// summed over shuffles (each class of `n! m!` permutations contributes equally).
pub fn wedge(algebra: &StarAlgebra, rho: &FormN, eta: &FormN) -> Result<FormN> {
    rho.check_same_shape(eta)?;
    if rho.dim != algebra.dim() {
        return Err(Error::DimensionMismatch { expected: algebra.dim(), found: rho.dim });
    }
    let degree = rho.degree + eta.degree;
    let mut out = FormN::zero(degree, rho.rank, rho.dim);
    if degree > rho.rank {
        return Ok(out);
    }
    for t in increasing_tuples(rho.rank, degree) {
        let mut acc = algebra.zero();
        for (l, r, sign) in shuffles(&t, rho.degree) {
            let p = algebra.mul(&rho.value(&l), &eta.value(&r));
            linalg::axpy(&mut acc, &Scalar::from_int(sign), &p);
        }
        out.insert(t, acc);
    }
    Ok(out)
}

/// The literal permutation sum with the `1/(n! m!)` factor.
pub fn wedge_by_permutations(algebra: &StarAlgebra, rho: &FormN, eta: &FormN) -> Result<FormN> {
    rho.check_same_shape(eta)?;
    let (n, m) = (rho.degree, eta.degree);
    let degree = n + m;
    let mut out = FormN::zero(degree, rho.rank, rho.dim);
    if degree > rho.rank {
        return Ok(out);
    }
    let norm = Scalar::ratio(1, factorial(n) * factorial(m));
    for t in increasing_tuples(rho.rank, degree) {
        let mut acc = algebra.zero();
        for perm in permutations(degree) {
            let sign = sort_with_sign(&perm).map(|(_, s)| s).unwrap_or(0);
            let args: Vec<usize> = perm.iter().map(|&i| t[i]).collect();
            let p = algebra.mul(&rho.value(&args[..n]), &eta.value(&args[n..]));
            linalg::axpy(&mut acc, &Scalar::from_int(sign), &p);
        }
        out.insert(t, linalg::scale(&norm, &acc));
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Koszul differential:
/// `dρ(X_0, …, X_n) = Σ_i (−1)^i X_i(ρ(…, X̂_i, …))
///   + Σ_{i<j} (−1)^{i+j} ρ([X_i, X_j], …, X̂_i, …, X̂_j, …)`.
pub fn koszul_d(basis: &DerivationBasis, rho: &FormN) -> Result<FormN> {
    if rho.rank != basis.rank() || rho.dim != basis.algebra.dim() {
        return Err(Error::InvalidArgument("form and derivation basis disagree".into()));
    }
    let degree = rho.degree + 1;
    let mut out = FormN::zero(degree, rho.rank, rho.dim);
    if degree > rho.rank {
        return Ok(out);
    }
    let sign = |k: usize| Scalar::from_int(if k.is_multiple_of(2) { 1 } else { -1 });
    for t in increasing_tuples(rho.rank, degree) {
        let mut acc = basis.algebra.zero();
        for i in 0..degree {
            let rest: Vec<usize> = t.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect();
            let v = basis.operators[t[i]].mul_vec(&rho.value(&rest));
            linalg::axpy(&mut acc, &sign(i), &v);
        }
        for i in 0..degree {
            for j in i + 1..degree {
                let rest: Vec<usize> = t.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &x)| x).collect();
                for c in 0..rho.rank {
                    let coeff = &basis.constants[t[i]][t[j]][c];
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut args = vec![c];
                    args.extend(&rest);
                    linalg::axpy(&mut acc, &(sign(i + j) * coeff), &rho.value(&args));
                }
            }
        }
        out.insert(t, acc);
    }
    Ok(out)
}

fn local_rank(atlas: &Atlas) -> usize {
    atlas.d() + 1
}

/// `ρ^α(p_{μ_1}, …) = π_α(ρ(G_{αμ_1}, …))` for a form on the global basis.
pub fn glob2loc(atlas: &Atlas, rho: &FormN, alpha: usize) -> Result<FormN> {
    let r = local_rank(atlas);
    if rho.rank != r * atlas.len() || rho.dim != atlas.base().dim() {
        return Err(Error::InvalidArgument("form is not on the global derivation basis".into()));
    }
    if alpha >= atlas.len() {
        return Err(Error::IndexOutOfRange { index: alpha, len: atlas.len() });
    }
    let proj = atlas.projection(alpha);
    let mut out = FormN::zero(rho.degree, r, proj.rows());
    for t in increasing_tuples(r, rho.degree) {
        let global: Vec<usize> = t.iter().map(|&mu| alpha * r + mu).collect();
        out.insert(t, proj.mul_vec(&rho.value(&global)));
    }
    Ok(out)
}

/// Same as [`glob2loc`]; the global lift of `p_μ` on chart `α` is `G_{αμ}`,
/// whose compression `π_α G_{αμ} σ_α` is checked against `D_μ` in
/// [`d_locality_check`].
pub fn restrict_form(atlas: &Atlas, rho: &FormN, alpha: usize) -> Result<FormN> {
    glob2loc(atlas, rho, alpha)
}

/// `ρ = Σ_α χ_α ∘ ρ^α`, where each global basis derivation enters chart `α`
/// through the central decomposition of `π_α ∘ G ∘ σ_α`.
pub fn loc2glob(atlas: &Atlas, locals: &[FormN]) -> Result<FormN> {
    if locals.len() != atlas.len() {
        return Err(Error::DimensionMismatch { expected: atlas.len(), found: locals.len() });
    }
    let degree = locals[0].degree;
    let r = local_rank(atlas);
    for (alpha, f) in locals.iter().enumerate() {
        let dim = atlas.action(alpha).algebra().dim();
        if f.degree != degree || f.rank != r || f.dim != dim {
            return Err(Error::InvalidArgument(format!("local form {alpha} has the wrong shape")));
        }
    }
    let globals = global_operators(atlas);
    let rank = globals.len();
    let mut restricted: Vec<Vec<LocalDerivation>> = Vec::new();
    for alpha in 0..atlas.len() {
        let row = globals
            .iter()
            .map(|g| atlas.action(alpha).decompose(&atlas.restrict(g, alpha)))
            .collect::<Result<Vec<_>>>()?;
        restricted.push(row);
    }
    let mut out = FormN::zero(degree, rank, atlas.base().dim());
    for t in increasing_tuples(rank, degree) {
        let mut acc = atlas.base().zero();
        for (alpha, f) in locals.iter().enumerate() {
            let args: Vec<&[Vector]> = t.iter().map(|&b| restricted[alpha][b].coeffs.as_slice()).collect();
            let v = f.evaluate(atlas.action(alpha).algebra(), &args)?;
            acc = linalg::add(&acc, &atlas.functional(alpha).mul_vec(&v));
        }
        out.insert(t, acc);
    }
    Ok(out)
}

fn first_mismatch(a: &FormN, b: &FormN) -> Option<String> {
    let keys: std::collections::BTreeSet<&Vec<usize>> = a.values.keys().chain(b.values.keys()).collect();
    keys.into_iter().find(|k| a.value(k) != b.value(k)).map(|k| {
        format!("on {k:?}: {} vs {}", format_vector(&a.value(k)), format_vector(&b.value(k)))
    })
}

/// `ρ^α ∧_α η^α = π_α(ρ ∧ η)` on all local basis tuples.
pub fn wedge_compat_check(atlas: &Atlas, rho: &FormN, eta: &FormN, alpha: usize) -> Result<Report> {
    let local_alg = atlas.action(alpha).algebra();
    let lhs = wedge(local_alg, &glob2loc(atlas, rho, alpha)?, &glob2loc(atlas, eta, alpha)?)?;
    let rhs = glob2loc(atlas, &wedge(atlas.base(), rho, eta)?, alpha)?;
    let mut report = Report::new();
    report.record(format!("wedge-compat[{alpha}]"), first_mismatch(&lhs, &rhs));
    Ok(report)
}

/// `(dρ)|_α = d_α(ρ|_α)`, with the lift and bracket compatibilities it rests on.
pub fn d_locality_check(atlas: &Atlas, rho: &FormN, alpha: usize) -> Result<Report> {
    let action = atlas.action(alpha);
    let global = DerivationBasis::global(atlas)?;
    let local = DerivationBasis::from_action(action)?;
    let r = local_rank(atlas);
    let mut report = Report::new();
    let lift = |mu: usize| global.operator(alpha * r + mu);
    let section = (0..r).find_map(|mu| {
        (&atlas.restrict(lift(mu), alpha) != action.operator(mu)).then(|| format!("π G σ differs from D{mu}"))
    });
    report.record(format!("section[{alpha}]"), section);
    let mut bracket = None;
    'outer: for mu in 0..r {
        for nu in mu + 1..r {
            let lhs = atlas.restrict(&lift(mu).commutator(lift(nu)), alpha);
            if lhs != action.operator(mu).commutator(action.operator(nu)) {
                bracket = Some(format!("[G{mu}, G{nu}] does not compress to [D{mu}, D{nu}]"));
                break 'outer;
            }
        }
    }
    report.record(format!("bracket-compat[{alpha}]"), bracket);
    let lhs = restrict_form(atlas, &koszul_d(&global, rho)?, alpha)?;
    let rhs = koszul_d(&local, &restrict_form(atlas, rho, alpha)?)?;
    report.record(format!("d-locality[{alpha}]"), first_mismatch(&lhs, &rhs));
    Ok(report)
}

/// `d(dρ) = 0`.
pub fn dd_witness(basis: &DerivationBasis, rho: &FormN) -> Result<Option<String>> {
    let dd = koszul_d(basis, &koszul_d(basis, rho)?)?;
    let witness = dd.entries().next().map(|(k, v)| format!("d(dρ) on {k:?} = {}", format_vector(v)));
    Ok(witness)
}

/// An element `Σ_α χ_α(ρ^α_μ 𝔛^μ_α)` of the restricted one-forms, stored as
/// local coefficients against the dual basis normalized so that
/// `⟨p_ν, 𝔛^μ⟩ = δ^μ_ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneFormR {
    pub coefficients: Vec<Vec<Vector>>,
}

/// Builds the glued one-form from per-chart coefficient lists.
pub fn omega_r1(atlas: &Atlas, locals: Vec<Vec<Vector>>) -> Result<OneFormR> {
    if locals.len() != atlas.len() {
        return Err(Error::DimensionMismatch { expected: atlas.len(), found: locals.len() });
    }
    for (alpha, c) in locals.iter().enumerate() {
        if c.len() != local_rank(atlas) {
            return Err(Error::DimensionMismatch { expected: local_rank(atlas), found: c.len() });
        }
        for v in c {
            atlas.action(alpha).algebra().check_element(v)?;
        }
    }
    Ok(OneFormR { coefficients: locals })
}

impl OneFormR {
    /// `d a`, with `ρ^α_μ = D^α_μ(π_α a)`.
    pub fn exact(atlas: &Atlas, a: &[Scalar]) -> Result<OneFormR> {
        atlas.base().check_element(a)?;
        let locals = (0..atlas.len())
            .map(|alpha| {
                let pa = atlas.projection(alpha).mul_vec(a);
                (0..local_rank(atlas)).map(|mu| atlas.action(alpha).act(mu, &pa)).collect()
            })
            .collect();
        omega_r1(atlas, locals)
    }

    pub fn local_form(&self, atlas: &Atlas, alpha: usize) -> Result<FormN> {
        FormN::one_form(self.coefficients[alpha].clone(), atlas.action(alpha).algebra().dim())
    }

    /// The glued form on the global derivation basis.
    pub fn to_form(&self, atlas: &Atlas) -> Result<FormN> {
        let locals = (0..atlas.len()).map(|a| self.local_form(atlas, a)).collect::<Result<Vec<_>>>()?;
        loc2glob(atlas, &locals)
    }

    /// `ρ(X)` on chart `α` for `X = Z^μ p_μ`.
    pub fn evaluate_local(&self, atlas: &Atlas, alpha: usize, x: &LocalDerivation) -> Result<Vector> {
        self.local_form(atlas, alpha)?.evaluate(atlas.action(alpha).algebra(), &[x.coeffs.as_slice()])
    }

    /// `a · ρ`, chart-wise `π_α(a) ρ^α_μ`.
    pub fn left_action(&self, atlas: &Atlas, a: &[Scalar]) -> Result<OneFormR> {
        self.module_action(atlas, a, true)
    }

    /// `ρ · a`, chart-wise `ρ^α_μ π_α(a)`.
    pub fn right_action(&self, atlas: &Atlas, a: &[Scalar]) -> Result<OneFormR> {
        self.module_action(atlas, a, false)
    }

    fn module_action(&self, atlas: &Atlas, a: &[Scalar], left: bool) -> Result<OneFormR> {
        atlas.base().check_element(a)?;
        let locals = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(alpha, c)| {
                let alg = atlas.action(alpha).algebra();
                let pa = atlas.projection(alpha).mul_vec(a);
                c.iter().map(|v| if left { alg.mul(&pa, v) } else { alg.mul(v, &pa) }).collect()
            })
            .collect();
        omega_r1(atlas, locals)
    }
}

/// Recovers the local coefficients of a glued one-form and checks the left
/// and right module actions against the glued forms.
pub fn one_form_module_check(atlas: &Atlas, rho: &OneFormR, a: &[Scalar]) -> Result<Report> {
    let mut report = Report::new();
    let glued = rho.to_form(atlas)?;
    for alpha in 0..atlas.len() {
        let back = glob2loc(atlas, &glued, alpha)?;
        report.record(format!("decomposition[{alpha}]"), first_mismatch(&back, &rho.local_form(atlas, alpha)?));
    }
    for (name, acted) in [("left", rho.left_action(atlas, a)?), ("right", rho.right_action(atlas, a)?)] {
        let g = acted.to_form(atlas)?;
        for alpha in 0..atlas.len() {
            let alg = atlas.action(alpha).algebra();
            let pa = atlas.projection(alpha).mul_vec(a);
            let base = glob2loc(atlas, &glued, alpha)?;
            let mut expected = FormN::zero(1, base.rank, base.dim);
            for (k, v) in base.entries() {
                let w = if name == "left" { alg.mul(&pa, v) } else { alg.mul(v, &pa) };
                expected.insert(k.clone(), w);
            }
            report.record(format!("{name}[{alpha}]"), first_mismatch(&glob2loc(atlas, &g, alpha)?, &expected));
        }
    }
    Ok(report)
}

/// Raw pairing `⟨𝔛^ν, p_μ⟩` and the rank of the induced evaluation map
/// `A ⊗ span{𝔛^μ} → Hom_Z(Der_R(A), A)` on the basis `{z_k p_μ}`.
pub fn duality_check(action: &ActionAssignment) -> Result<Report> {
    let r = action.rank();
    let d = action.d();
    let kappa = action.kappa().clone();
    let mut raw = Matrix::zeros(r, r);
    for mu in 0..r {
        let p = PbwElement::generator(d, kappa.clone(), mu);
        for nu in 0..r {
            raw[(mu, nu)] = pairing(PoincareGenerator::X(nu), &p)?;
        }
    }
    let mut report = Report::new();
    let raw_rank = raw.rank();
    report.record("pairing-matrix", (raw_rank != r).then(|| format!("rank {raw_rank} < {r}")));
    let alg = action.algebra();
    let n = alg.dim();
    let center = alg.center();
    // rows: (μ, z_k, output coordinate); columns: (ν, algebra basis e_i)
    let mut columns = Vec::new();
    for nu in 0..r {
        for i in 0..n {
            let mut col = Vec::new();
            for mu in 0..r {
                for z in center.basis() {
                    let v = linalg::scale(&raw[(mu, nu)], &alg.mul(z, &alg.basis(i)));
                    col.extend(v);
                }
            }
            columns.push(col);
        }
    }
    let rows = r * center.dim() * n;
    let m = Matrix::from_columns(rows, &columns)?;
    let rank = m.rank();
    report.record("pairing-rank", (rank != r * n).then(|| format!("rank {rank} < {}", r * n)));
    Ok(report)
}
