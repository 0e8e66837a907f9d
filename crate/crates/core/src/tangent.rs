//! The κ-Minkowski generators `p_μ` acting as derivations `D_μ` on local
//! algebras, restricted derivations `Z(A) ⊗ span{p_μ}`, their gluing along a
//! covering with a partition of unity, and the smash product.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::StarAlgebra;
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::kappa::{coproduct, Monomial, PbwElement};
use crate::linalg::{self, format_vector, is_zero_vector, solve_linear, Matrix, Vector};
use crate::partition::{functional, Partition};
use crate::report::Report;
use crate::scalar::Scalar;

/// `C_{μν}^λ = (δ_μ⁰ δ_ν^λ − δ_ν⁰ δ_μ^λ)(i/κ)`.
pub fn structure_constant(mu: usize, nu: usize, lambda: usize, kappa: &Scalar) -> Scalar {
    let delta = |a: usize, b: usize| i64::from(a == b);
    let c = delta(mu, 0) * delta(nu, lambda) - delta(nu, 0) * delta(mu, lambda);
    Scalar::from_int(c) * Scalar::i() / kappa
}

/// Inner generators of the reference action on `M_n`:
/// `m₀ = −(i/κ) diag(0, 1, …, 1)` and `m_j = E_{1, 1+j}`.
pub fn canonical_generators(n: usize, d: usize, kappa: &Scalar) -> Result<Vec<Vector>> {
    if n < d + 1 {
        return Err(Error::InvalidArgument(format!("canonical action needs N >= d + 1 (N = {n}, d = {d})")));
    }
    if !kappa.is_positive_real() {
        return Err(Error::InvalidArgument("kappa must be positive".into()));
    }
    let idx = |a: usize, b: usize| a * n + b;
    let mut m0 = linalg::zero_vector(n * n);
    let c = -(Scalar::i() / kappa);
    for a in 1..n {
        m0[idx(a, a)] = c.clone();
    }
    let mut gens = vec![m0];
    for j in 1..=d {
        gens.push(linalg::unit_vector(n * n, idx(0, j)));
    }
    Ok(gens)
}

/// Concrete operators `D_0, …, D_d` on a local algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionAssignment {
    algebra: StarAlgebra,
    d: usize,
    kappa: Scalar,
    operators: Vec<Matrix>,
    generators: Option<Vec<Vector>>,
}

impl ActionAssignment {
    /// Explicit operators; use [`ActionAssignment::verify`] to check them.
    pub fn new(algebra: &StarAlgebra, d: usize, kappa: Scalar, operators: Vec<Matrix>) -> Result<Self> {
        if operators.len() != d + 1 {
            return Err(Error::InvalidAction(format!("expected {} operators, got {}", d + 1, operators.len())));
        }
        if !kappa.is_positive_real() {
            return Err(Error::InvalidArgument("kappa must be positive".into()));
        }
        for op in &operators {
            if op.rows() != algebra.dim() || op.cols() != algebra.dim() {
                return Err(Error::DimensionMismatch { expected: algebra.dim(), found: op.rows() });
            }
        }
        Ok(ActionAssignment { algebra: algebra.clone(), d, kappa, operators, generators: None })
    }

    /// `D_μ = [m_μ, ·]`.
    pub fn from_inner(algebra: &StarAlgebra, d: usize, kappa: Scalar, generators: Vec<Vector>) -> Result<Self> {
        for g in &generators {
            algebra.check_element(g)?;
        }
        let ops = generators.iter().map(|m| algebra.ad(m)).collect();
        let mut a = Self::new(algebra, d, kappa, ops)?;
        a.generators = Some(generators);
        Ok(a)
    }

    /// The reference action on `M_N`.
    pub fn canonical(n: usize, d: usize, kappa: Scalar) -> Result<Self> {
        let gens = canonical_generators(n, d, &kappa)?;
        Self::from_inner(&StarAlgebra::matrix(n)?, d, kappa, gens)
    }

    /// The reference action on an algebra that must have exactly the
    /// structure constants and involution of `M_N` (for example a quotient
    /// chart isomorphic to a matrix block in its natural basis).
    pub fn canonical_on(algebra: &StarAlgebra, n: usize, d: usize, kappa: Scalar) -> Result<Self> {
        let m = StarAlgebra::matrix(n)?;
        if algebra.dim() != m.dim() {
            return Err(Error::InvalidAction(format!("canonical({n}) needs a chart of dimension {}, found {}", m.dim(), algebra.dim())));
        }
        let same = (0..m.dim()).all(|i| (0..m.dim()).all(|j| algebra.basis_product(i, j) == m.basis_product(i, j)))
            && algebra.involution_matrix() == m.involution_matrix();
        if !same {
            return Err(Error::InvalidAction(format!("chart is not M_{n} in its standard basis")));
        }
        let gens = canonical_generators(n, d, &kappa)?;
        Self::from_inner(algebra, d, kappa, gens)
    }

    /// Blockwise reference action on a direct sum of matrix blocks: every
    /// block of size `>= d + 1` gets the canonical generators, other blocks
    /// act trivially.
    pub fn block_canonical(algebra: &StarAlgebra, d: usize, kappa: Scalar) -> Result<Self> {
        let mut gens = vec![algebra.zero(); d + 1];
        for b in algebra.blocks() {
            if let crate::algebra::Model::Matrix(n) = b.model {
                if n > d {
                    for (mu, g) in canonical_generators(n, d, &kappa)?.into_iter().enumerate() {
                        for (k, v) in g.into_iter().enumerate() {
                            gens[mu][b.offset + k] = v;
                        }
                    }
                }
            }
        }
        Self::from_inner(algebra, d, kappa, gens)
    }

    pub fn algebra(&self) -> &StarAlgebra {
        &self.algebra
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kappa(&self) -> &Scalar {
        &self.kappa
    }

    pub fn rank(&self) -> usize {
        self.d + 1
    }

    pub fn operator(&self, mu: usize) -> &Matrix {
        &self.operators[mu]
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn generators(&self) -> Option<&[Vector]> {
        self.generators.as_deref()
    }

    /// `p_μ ▷ a`.
    pub fn act(&self, mu: usize, a: &[Scalar]) -> Vector {
        self.operators[mu].mul_vec(a)
    }

    /// Copy with `D_0` multiplied by `c` (for negative controls).
    pub fn with_scaled_time(&self, c: &Scalar) -> Self {
        let mut out = self.clone();
        out.operators[0] = out.operators[0].scale(c);
        out.generators = None;
        out
    }

    /// Leibniz rule for every `D_μ` and the brackets `[D_0, D_j] = (i/κ) D_j`,
    /// `[D_j, D_k] = 0`.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        for (mu, op) in self.operators.iter().enumerate() {
            report.record(format!("leibniz[{mu}]"), self.algebra.leibniz_witness(op));
        }
        for mu in 0..=self.d {
            for nu in mu + 1..=self.d {
                let lhs = self.operators[mu].commutator(&self.operators[nu]);
                let mut rhs = Matrix::zeros(self.algebra.dim(), self.algebra.dim());
                for lambda in 0..=self.d {
                    let c = structure_constant(mu, nu, lambda, &self.kappa);
                    if !c.is_zero() {
                        rhs = rhs.add(&self.operators[lambda].scale(&c));
                    }
                }
                let witness = (lhs != rhs).then(|| {
                    let col = (0..lhs.cols()).find(|&c| lhs.column(c) != rhs.column(c)).unwrap_or(0);
                    format!(
                        "[D{mu}, D{nu}] on {}: {} vs {}",
                        self.algebra.labels().get(col).cloned().unwrap_or_default(),
                        format_vector(&lhs.column(col)),
                        format_vector(&rhs.column(col))
                    )
                });
                report.record(format!("bracket[{mu},{nu}]"), witness);
            }
        }
        report
    }

    /// `Σ_μ Z^μ ⊗ p_μ` with every `Z^μ` verified central.
    pub fn derivation(&self, coeffs: Vec<Vector>) -> Result<LocalDerivation> {
        let x = LocalDerivation::unchecked(coeffs);
        self.check_shape(&x)?;
        for z in &x.coeffs {
            if let Some(w) = self.algebra.centrality_witness(z) {
                return Err(Error::NonCentral { witness: w });
            }
        }
        Ok(x)
    }

    /// The basis derivation `1 ⊗ p_μ`.
    pub fn basis_derivation(&self, mu: usize) -> Result<LocalDerivation> {
        let unit = self.algebra.unit().ok_or_else(|| Error::InvalidArgument("local algebra has no unit".into()))?;
        let mut coeffs = vec![self.algebra.zero(); self.rank()];
        coeffs[mu] = unit.clone();
        Ok(LocalDerivation { coeffs })
    }

    fn check_shape(&self, x: &LocalDerivation) -> Result<()> {
        if x.coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: x.coeffs.len() });
        }
        for z in &x.coeffs {
            self.algebra.check_element(z)?;
        }
        Ok(())
    }

    /// `a ↦ Σ_μ Z^μ D_μ(a)`.
    pub fn apply(&self, x: &LocalDerivation, a: &[Scalar]) -> Vector {
        let mut out = self.algebra.zero();
        for (z, op) in x.coeffs.iter().zip(&self.operators) {
            if !is_zero_vector(z) {
                out = linalg::add(&out, &self.algebra.mul(z, &op.mul_vec(a)));
            }
        }
        out
    }

    /// Matrix of [`ActionAssignment::apply`].
    pub fn operator_of(&self, x: &LocalDerivation) -> Matrix {
        let n = self.algebra.dim();
        let mut out = Matrix::zeros(n, n);
        for (z, op) in x.coeffs.iter().zip(&self.operators) {
            if !is_zero_vector(z) {
                out = out.add(&self.algebra.left_mult(z).mul(op));
            }
        }
        out
    }

    /// `[X, Y]^λ = X^μ D_μ(Y^λ) − Y^μ D_μ(X^λ) + X^μ Y^ν C_{μν}^λ`.
    pub fn bracket(&self, x: &LocalDerivation, y: &LocalDerivation) -> LocalDerivation {
        let a = &self.algebra;
        let mut coeffs = vec![a.zero(); self.rank()];
        for (lambda, out) in coeffs.iter_mut().enumerate() {
            for mu in 0..self.rank() {
                let t1 = a.mul(&x.coeffs[mu], &self.act(mu, &y.coeffs[lambda]));
                let t2 = a.mul(&y.coeffs[mu], &self.act(mu, &x.coeffs[lambda]));
                *out = linalg::add(out, &linalg::sub(&t1, &t2));
                for nu in 0..self.rank() {
                    let c = structure_constant(mu, nu, lambda, &self.kappa);
                    if !c.is_zero() {
                        let xy = a.mul(&x.coeffs[mu], &y.coeffs[nu]);
                        *out = linalg::add(out, &linalg::scale(&c, &xy));
                    }
                }
            }
        }
        LocalDerivation { coeffs }
    }

    /// Compares the operator commutator `[X, Y]` with the bracket formula;
    /// `None` when they agree.
    pub fn bracket_mismatch(&self, x: &LocalDerivation, y: &LocalDerivation) -> Option<String> {
        let ox = self.operator_of(x);
        let oy = self.operator_of(y);
        let lhs = ox.commutator(&oy);
        let rhs = self.operator_of(&self.bracket(x, y));
        (0..lhs.cols()).find(|&c| lhs.column(c) != rhs.column(c)).map(|c| {
            format!(
                "on {}: [X,Y] gives {}, formula gives {}",
                self.algebra.labels()[c],
                format_vector(&lhs.column(c)),
                format_vector(&rhs.column(c))
            )
        })
    }

    /// Central coefficients `Z^μ` with `op = Σ_μ Z^μ D_μ`.
    pub fn decompose(&self, op: &Matrix) -> Result<LocalDerivation> {
        let center = self.algebra.center();
        let n = self.algebra.dim();
        let mut columns = Vec::new();
        let mut labels = Vec::new();
        for mu in 0..self.rank() {
            for (k, z) in center.basis().iter().enumerate() {
                columns.push(self.algebra.left_mult(z).mul(&self.operators[mu]).to_flat());
                labels.push((mu, k));
            }
        }
        if op.rows() != n || op.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: op.rows() });
        }
        let target = op.to_flat();
        let system = Matrix::from_columns(n * n, &columns)?;
        let sol = solve_linear(&system, &target)?
            .ok_or_else(|| Error::NotInSpan("no central combination of the D_mu reproduces the operator".into()))?;
        let mut coeffs = vec![self.algebra.zero(); self.rank()];
        for ((mu, k), c) in labels.into_iter().zip(&sol.particular) {
            linalg::axpy(&mut coeffs[mu], c, &center.basis()[k]);
        }
        Ok(LocalDerivation { coeffs })
    }
}

/// `Σ_μ Z^μ ⊗ p_μ`, coefficient list indexed by `μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalDerivation {
    pub coeffs: Vec<Vector>,
}

impl LocalDerivation {
    /// Coefficients taken as given, without the centrality check.
    pub fn unchecked(coeffs: Vec<Vector>) -> Self {
        LocalDerivation { coeffs }
    }

    pub fn coefficient(&self, mu: usize) -> &Vector {
        &self.coeffs[mu]
    }
}

impl fmt::Display for LocalDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().enumerate().map(|(mu, z)| format!("{}⊗p{mu}", format_vector(z))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Covering, partition (with well-defined functionals) and one action per chart.
#[derive(Debug, Clone)]
pub struct Atlas {
    covering: Covering,
    partition: Partition,
    actions: Vec<ActionAssignment>,
    functionals: Vec<Matrix>,
}

/// A glued derivation of the base algebra, with the local pieces it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalDerivation {
    pub operator: Matrix,
    pub locals: Vec<LocalDerivation>,
}

/// Which side a central element multiplies from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Atlas {
    pub fn new(covering: Covering, partition: Partition, actions: Vec<ActionAssignment>) -> Result<Self> {
        if partition.len() != covering.len() || actions.len() != covering.len() {
            return Err(Error::InvalidArgument(format!(
                "atlas needs one partition element and one action per chart ({} charts, {} elements, {} actions)",
                covering.len(),
                partition.len(),
                actions.len()
            )));
        }
        let d = actions[0].d();
        for (alpha, act) in actions.iter().enumerate() {
            if act.algebra() != &covering.chart(alpha)?.algebra {
                return Err(Error::InvalidAction(format!("action {alpha} is not defined on chart {alpha}")));
            }
            if act.d() != d || act.kappa() != actions[0].kappa() {
                return Err(Error::ParameterMismatch(format!("action {alpha} has different d or kappa")));
            }
        }
        let functionals = (0..covering.len()).map(|a| functional(&partition, &covering, a)).collect::<Result<Vec<_>>>()?;
        Ok(Atlas { covering, partition, actions, functionals })
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn actions(&self) -> &[ActionAssignment] {
        &self.actions
    }

    pub fn action(&self, alpha: usize) -> &ActionAssignment {
        &self.actions[alpha]
    }

    pub fn base(&self) -> &StarAlgebra {
        self.covering.base()
    }

    pub fn d(&self) -> usize {
        self.actions[0].d()
    }

    pub fn kappa(&self) -> &Scalar {
        self.actions[0].kappa()
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// The functional form `χ_α : A_α → A`.
    pub fn functional(&self, alpha: usize) -> &Matrix {
        &self.functionals[alpha]
    }

    pub fn projection(&self, alpha: usize) -> &Matrix {
        self.covering.charts()[alpha].projection()
    }

    pub fn section(&self, alpha: usize) -> &Matrix {
        self.covering.charts()[alpha].section()
    }

    /// `X = Σ_α χ_α ∘ X_α ∘ π_α`.
    pub fn glue(&self, locals: &[LocalDerivation]) -> Result<GlobalDerivation> {
        if locals.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: locals.len() });
        }
        let n = self.base().dim();
        let mut operator = Matrix::zeros(n, n);
        for (alpha, x) in locals.iter().enumerate() {
            let act = &self.actions[alpha];
            act.check_shape(x)?;
            let local = act.operator_of(x);
            operator = operator.add(&self.functionals[alpha].mul(&local).mul(self.projection(alpha)));
        }
        Ok(GlobalDerivation { operator, locals: locals.to_vec() })
    }

    /// `π_α ∘ X ∘ χ_α`, a map on `A_α`.
    pub fn project_global(&self, x: &Matrix, alpha: usize) -> Matrix {
        self.projection(alpha).mul(x).mul(&self.functionals[alpha])
    }

    /// `π_α ∘ X ∘ σ_α`, a map on `A_α`.
    pub fn restrict(&self, x: &Matrix, alpha: usize) -> Matrix {
        self.projection(alpha).mul(x).mul(self.section(alpha))
    }

    /// Recovers local coefficients from a global operator through
    /// [`Atlas::project_global`] and [`ActionAssignment::decompose`].
    pub fn decompose(&self, x: &Matrix) -> Result<Vec<LocalDerivation>> {
        (0..self.len()).map(|alpha| self.actions[alpha].decompose(&self.project_global(x, alpha))).collect()
    }

    /// `c · X` or `X · c` for central `c`, glued from `π_α(c) X_α` or `X_α π_α(c)`.
    pub fn zmodule_action(&self, c: &[Scalar], x: &GlobalDerivation, side: Side) -> Result<GlobalDerivation> {
        let a = self.base();
        a.check_element(c)?;
        if let Some(w) = a.centrality_witness(c) {
            return Err(Error::NonCentral { witness: w });
        }
        let locals = x
            .locals
            .iter()
            .enumerate()
            .map(|(alpha, loc)| {
                let chart = &self.covering.charts()[alpha];
                let pc = chart.project(c);
                let coeffs = loc
                    .coeffs
                    .iter()
                    .map(|z| match side {
                        Side::Left => chart.algebra.mul(&pc, z),
                        Side::Right => chart.algebra.mul(z, &pc),
                    })
                    .collect();
                LocalDerivation { coeffs }
            })
            .collect::<Vec<_>>();
        self.glue(&locals)
    }

    /// Leibniz on all basis pairs of the base algebra.
    pub fn leibniz_witness(&self, x: &GlobalDerivation) -> Option<String> {
        self.base().leibniz_witness(&x.operator)
    }
}

/// Element of `A # κ-Minkowski`: `(basis index, monomial) → coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmashElement {
    terms: BTreeMap<(usize, Monomial), Scalar>,
}

impl SmashElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, Monomial), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, index: usize, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((index, m)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SmashElement) -> SmashElement {
        let mut out = self.clone();
        for ((i, m), c) in &other.terms {
            out.add_term(*i, m.clone(), c.clone());
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(_, m)| m.degree()).max().unwrap_or(0)
    }
}

/// `A_α # ℝ^{1,d}_κ` with products truncated at a declared PBW degree bound;
/// exceeding the bound is an error.
#[derive(Debug, Clone)]
pub struct SmashProduct {
    action: ActionAssignment,
    bound: u32,
}

impl SmashProduct {
    pub fn new(action: ActionAssignment, bound: u32) -> Self {
        SmashProduct { action, bound }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// `a # p`.
    pub fn pure(&self, a: &[Scalar], p: &PbwElement) -> Result<SmashElement> {
        self.action.algebra().check_element(a)?;
        if p.d() != self.action.d() || p.kappa() != self.action.kappa() {
            return Err(Error::ParameterMismatch("PBW element and action disagree on d or kappa".into()));
        }
        let mut out = SmashElement::zero();
        for (i, x) in a.iter().enumerate() {
            for (m, y) in p.terms() {
                out.add_term(i, m.clone(), x * y);
            }
        }
        self.check_bound(&out)?;
        Ok(out)
    }

    fn check_bound(&self, x: &SmashElement) -> Result<()> {
        let degree = x.degree();
        if degree > self.bound {
            return Err(Error::DegreeOverflow { degree, bound: self.bound });
        }
        Ok(())
    }

    /// `p̄^β p_0^n ▷ b = D_1^{β_1} ⋯ D_d^{β_d} D_0^n b`.
    pub fn act_monomial(&self, m: &Monomial, b: &[Scalar]) -> Vector {
        let mut v = b.to_vec();
        for _ in 0..m.time() {
            v = self.action.act(0, &v);
        }
        for j in (1..=self.action.d()).rev() {
            for _ in 0..m.exponent(j) {
                v = self.action.act(j, &v);
            }
        }
        v
    }

    /// `(a # p)(b # q) = a (p₍₁₎ ▷ b) # p₍₂₎ q`.
    pub fn multiply(&self, x: &SmashElement, y: &SmashElement) -> Result<SmashElement> {
        self.check_bound(x)?;
        self.check_bound(y)?;
        let alg = self.action.algebra();
        let d = self.action.d();
        let kappa = self.action.kappa().clone();
        let mut out = SmashElement::zero();
        for ((i, p), c1) in &x.terms {
            let delta = coproduct(&PbwElement::monomial(d, kappa.clone(), p.clone(), Scalar::one()));
            for ((j, q), c2) in &y.terms {
                let qe = PbwElement::monomial(d, kappa.clone(), q.clone(), Scalar::one());
                for (legs, c3) in delta.terms() {
                    let acted = self.act_monomial(&legs[0], &alg.basis(*j));
                    let left = alg.mul(&alg.basis(*i), &acted);
                    if is_zero_vector(&left) {
                        continue;
                    }
                    let right = PbwElement::monomial(d, kappa.clone(), legs[1].clone(), Scalar::one()).star(&qe)?;
                    let c = c1 * c2 * c3;
                    for (k, a) in left.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (m, b) in right.terms() {
                            out.add_term(k, m.clone(), &c * a * b);
                        }
                    }
                }
            }
        }
        self.check_bound(&out)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::block_ideal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k() -> Scalar {
        Scalar::from_int(2)
    }

    #[test]
    fn canonical_models() {
        let a = ActionAssignment::canonical(2, 1, k()).unwrap();
        assert!(a.verify().passed(), "{}", a.verify());
        let c = a.operator(0).commutator(a.operator(1));
        assert_eq!(c, a.operator(1).scale(&(Scalar::i() / k())));
        let b = ActionAssignment::canonical(3, 2, k()).unwrap();
        assert!(b.operator(1).commutator(b.operator(2)).is_zero());
        assert!(b.verify().passed());
        assert!(ActionAssignment::canonical(2, 2, k()).is_err());
    }

    #[test]
    fn verify_negative_and_degenerate() {
        let a = ActionAssignment::canonical(2, 1, k()).unwrap();
        let bad = a.with_scaled_time(&Scalar::from_int(2));
        let r = bad.verify();
        assert!(!r.passed());
        assert!(!r.get("bracket[0,1]").unwrap().passed);
        let zero = ActionAssignment::new(a.algebra(), 1, k(), vec![Matrix::zeros(4, 4); 2]).unwrap();
        assert!(zero.verify().passed());
    }

    #[test]
    fn local_derivations() {
        let a = ActionAssignment::canonical(2, 1, k()).unwrap();
        let m2 = a.algebra().clone();
        let unit = m2.unit().unwrap().clone();
        let x = a.derivation(vec![unit.clone(), m2.zero()]).unwrap();
        // X = p_0 only: apply(E12) = (i/κ) E12
        assert_eq!(a.apply(&x, &m2.basis(1)), linalg::scale(&(Scalar::i() / k()), &m2.basis(1)));
        assert!(m2.leibniz_witness(&a.operator_of(&x)).is_none());
        let err = a.derivation(vec![m2.basis(0), m2.zero()]);
        assert!(matches!(err, Err(Error::NonCentral { .. })));
    }

    #[test]
    fn brackets() {
        let a = ActionAssignment::canonical(3, 2, k()).unwrap();
        let p0 = a.basis_derivation(0).unwrap();
        let p1 = a.basis_derivation(1).unwrap();
        let br = a.bracket(&p0, &p1);
        assert_eq!(br, LocalDerivation { coeffs: vec![a.algebra().zero(), linalg::scale(&(Scalar::i() / k()), a.algebra().unit().unwrap()), a.algebra().zero()] });
        assert!(a.bracket_mismatch(&p0, &p1).is_none());
        assert!(a.bracket(&p1, &p1).coeffs.iter().all(|z| is_zero_vector(z)));
    }

    #[test]
    fn brackets_with_central_coefficients() {
        let alg = StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(2).unwrap()).unwrap();
        let a = ActionAssignment::block_canonical(&alg, 1, k()).unwrap();
        assert!(a.verify().passed());
        let z = a.algebra().center();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        use rand::Rng;
        let mut rand_central = || {
            let mut v = alg.zero();
            for b in z.basis() {
                linalg::axpy(&mut v, &Scalar::complex(rng.gen_range(-3..=3), rng.gen_range(-3..=3)), b);
            }
            v
        };
        for _ in 0..4 {
            let x = a.derivation(vec![rand_central(), rand_central()]).unwrap();
            let y = a.derivation(vec![rand_central(), rand_central()]).unwrap();
            assert!(a.bracket_mismatch(&x, &y).is_none());
        }
        // non-central coefficients break the formula
        let m2 = ActionAssignment::canonical(2, 1, k()).unwrap();
        let alg2 = m2.algebra();
        let x = LocalDerivation::unchecked(vec![alg2.basis(0), alg2.zero()]);
        let y = LocalDerivation::unchecked(vec![alg2.zero(), alg2.basis(1)]);
        assert!(m2.bracket_mismatch(&x, &y).is_some());
    }

    fn block_atlas() -> Atlas {
        let alg = StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(3).unwrap()).unwrap();
        let cov = Covering::new(&alg, &[block_ideal(&alg, &[1]).unwrap(), block_ideal(&alg, &[0]).unwrap()]).unwrap();
        let mut zetas = vec![alg.zero(), alg.zero()];
        for (i, v) in alg.unit().unwrap().iter().enumerate() {
            zetas[usize::from(i >= 4)][i] = v.clone();
        }
        let p = Partition::from_zetas(&alg, &zetas).unwrap();
        let acts = vec![
            ActionAssignment::canonical_on(&cov.chart(0).unwrap().algebra, 2, 1, k()).unwrap(),
            ActionAssignment::canonical_on(&cov.chart(1).unwrap().algebra, 3, 1, k()).unwrap(),
        ];
        Atlas::new(cov, p, acts).unwrap()
    }

    #[test]
    fn gluing_round_trip() {
        let atlas = block_atlas();
        let locals: Vec<LocalDerivation> = (0..2)
            .map(|alpha| {
                let act = atlas.action(alpha);
                let u = act.algebra().unit().unwrap().clone();
                act.derivation(vec![linalg::scale(&Scalar::from_int(alpha as i64 + 2), &u), linalg::scale(&Scalar::i(), &u)]).unwrap()
            })
            .collect();
        let g = atlas.glue(&locals).unwrap();
        assert!(atlas.leibniz_witness(&g).is_none());
        assert_eq!(atlas.decompose(&g.operator).unwrap(), locals);
        for alpha in 0..2 {
            let local = atlas.action(alpha).operator_of(&locals[alpha]);
            assert_eq!(atlas.project_global(&g.operator, alpha), local);
            assert_eq!(atlas.restrict(&g.operator, alpha), local);
            assert!(atlas.action(alpha).algebra().leibniz_witness(&atlas.project_global(&g.operator, alpha)).is_none());
        }
        // z-module actions
        let alg = atlas.base().clone();
        let mut c = alg.zero();
        for (i, v) in alg.unit().unwrap().iter().enumerate() {
            if !v.is_zero() {
                c[i] = Scalar::from_int(if i < 4 { 2 } else { 3 });
            }
        }
        let left = atlas.zmodule_action(&c, &g, Side::Left).unwrap();
        let right = atlas.zmodule_action(&c, &g, Side::Right).unwrap();
        assert_eq!(left, right);
        assert_eq!(left.operator, alg.left_mult(&c).mul(&g.operator));
        assert!(atlas.leibniz_witness(&left).is_none());
        let one = atlas.zmodule_action(alg.unit().unwrap(), &g, Side::Left).unwrap();
        assert_eq!(one.operator, g.operator);
        assert!(matches!(atlas.zmodule_action(&alg.basis(1), &g, Side::Left), Err(Error::NonCentral { .. })));
    }

    #[test]
    fn trivial_chart_glue_is_identity() {
        let alg = StarAlgebra::matrix(2).unwrap();
        let cov = Covering::trivial(&alg).unwrap();
        let act = ActionAssignment::canonical_on(&cov.chart(0).unwrap().algebra, 2, 1, k()).unwrap();
        let atlas = Atlas::new(cov, Partition::unit(&alg).unwrap(), vec![act.clone()]).unwrap();
        let x = act.basis_derivation(1).unwrap();
        assert_eq!(atlas.glue(std::slice::from_ref(&x)).unwrap().operator, act.operator_of(&x));
    }

    #[test]
    fn smash_products() {
        let act = ActionAssignment::canonical(2, 1, k()).unwrap();
        let alg = act.algebra().clone();
        let s = SmashProduct::new(act.clone(), 3);
        let one = PbwElement::one(1, k());
        let p0 = PbwElement::generator(1, k(), 0);
        let p1 = PbwElement::generator(1, k(), 1);
        let a = alg.basis(1);
        let b = alg.basis(2);
        let ab = s.multiply(&s.pure(&a, &one).unwrap(), &s.pure(&b, &one).unwrap()).unwrap();
        assert_eq!(ab, s.pure(&alg.mul(&a, &b), &one).unwrap());
        let lhs = s.multiply(&s.pure(alg.unit().unwrap(), &p0).unwrap(), &s.pure(&b, &one).unwrap()).unwrap();
        let rhs = s.pure(&act.act(0, &b), &one).unwrap().add(&s.pure(&b, &p0).unwrap());
        assert_eq!(lhs, rhs);
        let u = alg.unit().unwrap();
        let x = s.pure(u, &p0).unwrap();
        let y = s.pure(u, &p1).unwrap();
        let z = s.pure(&alg.basis(1), &one).unwrap();
        let left = s.multiply(&s.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = s.multiply(&x, &s.multiply(&y, &z).unwrap()).unwrap();
        assert_eq!(left, right);
        let big = s.pure(u, &p0.star_pow(2)).unwrap();
        assert!(matches!(s.multiply(&big, &big), Err(Error::DegreeOverflow { degree: 4, bound: 3 })));
    }
}
