//! Quantum partitions of unity `χ_α = ζ_α ζ_α*` and their relation to
//! coverings: adaptedness, the functional form `χ_α : A_α → A`, and products.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Model, StarAlgebra};
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::linalg::{self, format_vector, is_zero_vector, zero_vector, Matrix, Vector};
use crate::report::Report;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionElement {
    pub chi: Vector,
    pub zeta: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    elements: Vec<PartitionElement>,
}

impl Partition {
    /// Elements `χ = ζ ζ*` built from the witnesses.
    pub fn from_zetas(algebra: &StarAlgebra, zetas: &[Vector]) -> Result<Self> {
        let mut elements = Vec::with_capacity(zetas.len());
        for z in zetas {
            algebra.check_element(z)?;
            elements.push(PartitionElement { chi: algebra.mul(z, &algebra.star(z)), zeta: z.clone() });
        }
        Ok(Partition { elements })
    }

    /// Explicit `(χ, ζ)` pairs, taken as given; [`verify_partition`] checks them.
    pub fn from_pairs(elements: Vec<PartitionElement>) -> Self {
        Partition { elements }
    }

    /// `{1}` with witness `1`.
    pub fn unit(algebra: &StarAlgebra) -> Result<Self> {
        let u = algebra.unit().ok_or_else(|| Error::InvalidArgument("algebra has no unit".into()))?;
        Self::from_zetas(algebra, std::slice::from_ref(u))
    }

    pub fn elements(&self) -> &[PartitionElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn chi(&self, alpha: usize) -> Result<&Vector> {
        self.elements
            .get(alpha)
            .map(|e| &e.chi)
            .ok_or(Error::IndexOutOfRange { index: alpha, len: self.elements.len() })
    }

    /// Drops elements with `χ = 0`.
    pub fn pruned(&self) -> Partition {
        Partition { elements: self.elements.iter().filter(|e| !is_zero_vector(&e.chi)).cloned().collect() }
    }
}

/// `χ • a = ζ a ζ*`.
pub fn bullet(algebra: &StarAlgebra, elem: &PartitionElement, a: &[Scalar]) -> Vector {
    algebra.mul_all(&[&elem.zeta, a, &algebra.star(&elem.zeta)])
}

/// Checks the four defining conditions. The sum condition is tested on every
/// basis element with left multiplication, or right multiplication when
/// `right` is set.
pub fn verify_partition(algebra: &StarAlgebra, p: &Partition, right: bool) -> Report {
    let mut report = Report::new();
    let n = algebra.dim();
    let bad_len = p.elements.iter().position(|e| e.chi.len() != n || e.zeta.len() != n);
    report.record("membership", bad_len.map(|k| format!("element {k} has the wrong dimension")));
    if bad_len.is_some() {
        return report;
    }
    // finitely many elements: local finiteness holds trivially
    report.pass("local-finiteness");
    let positivity = p.elements.iter().enumerate().find_map(|(k, e)| {
        let zz = algebra.mul(&e.zeta, &algebra.star(&e.zeta));
        (zz != e.chi).then(|| format!("element {k}: ζζ* = {} ≠ χ = {}", format_vector(&zz), format_vector(&e.chi)))
    });
    report.record("positivity", positivity);
    let mut total = zero_vector(n);
    for e in &p.elements {
        total = linalg::add(&total, &e.chi);
    }
    let sum = (0..n).find_map(|i| {
        let b = algebra.basis(i);
        let r = if right { algebra.mul(&b, &total) } else { algebra.mul(&total, &b) };
        (r != b).then(|| format!("Σχ acting on {} gives {}", algebra.labels()[i], format_vector(&r)))
    });
    report.record("sum-to-identity", sum);
    report
}

/// Elements `χ_α • χ̃_β` with witnesses `ζ_α ζ̃_β`, indexed `α · |Q| + β`.
/// Zero elements are kept so that indices match [`Covering::product`].
pub fn product_partition(algebra: &StarAlgebra, p: &Partition, q: &Partition) -> Partition {
    let mut elements = Vec::with_capacity(p.len() * q.len());
    for a in &p.elements {
        for b in &q.elements {
            let zeta = algebra.mul(&a.zeta, &b.zeta);
            let chi = bullet(algebra, a, &b.chi);
            elements.push(PartitionElement { chi, zeta });
        }
    }
    Partition { elements }
}

fn check_lengths(p: &Partition, cov: &Covering) -> Result<()> {
    if p.len() != cov.len() {
        return Err(Error::DimensionMismatch { expected: cov.len(), found: p.len() });
    }
    Ok(())
}

/// Failing `(α, φ)` pairs for `χ_β`: characters of `A_α`, `α ≠ α₀`, not
/// vanishing on `π_α(χ_β)`.
fn offending_characters(p: &Partition, cov: &Covering, alpha0: usize, beta: usize) -> Result<Vec<(usize, usize, Scalar)>> {
    let mut bad = Vec::new();
    for (alpha, chart) in cov.charts().iter().enumerate() {
        if alpha == alpha0 {
            continue;
        }
        let image = chart.project(&p.elements[beta].chi);
        for (k, phi) in chart.algebra.characters()?.iter().enumerate() {
            let v = phi.eval(&image);
            if !v.is_zero() {
                bad.push((alpha, k, v));
            }
        }
    }
    Ok(bad)
}

/// Literal adaptedness: for every `α₀`, every `α ≠ α₀` and every character
/// `φ` of `A_α`, `φ(π_α(χ_{α₀})) = 0`. One record per evaluated
/// `(α₀, α, φ)`, or one vacuous record per `α₀` without characters to test.
pub fn verify_adapted(p: &Partition, cov: &Covering) -> Result<Report> {
    check_lengths(p, cov)?;
    let mut report = Report::new();
    for alpha0 in 0..cov.len() {
        let mut any = false;
        for (alpha, chart) in cov.charts().iter().enumerate() {
            if alpha == alpha0 {
                continue;
            }
            let image = chart.project(&p.elements[alpha0].chi);
            for (k, phi) in chart.algebra.characters()?.iter().enumerate() {
                any = true;
                let v = phi.eval(&image);
                report.record(
                    format!("adapted[a0={alpha0},b={alpha0},a={alpha},phi={k}]"),
                    (!v.is_zero()).then(|| format!("{phi} on π_{alpha}(χ_{alpha0}) = {v}")),
                );
            }
        }
        if !any {
            report.pass(format!("adapted[a0={alpha0},b={alpha0}] vacuous"));
        }
    }
    Ok(report)
}

/// Subordination: for every `α₀` some `β` passes the same test.
pub fn verify_subordinate(p: &Partition, cov: &Covering) -> Result<Report> {
    let mut report = Report::new();
    for alpha0 in 0..cov.len() {
        let mut found = None;
        let mut first_failure = None;
        for beta in 0..p.len() {
            let bad = offending_characters(p, cov, alpha0, beta)?;
            if bad.is_empty() {
                found = Some(beta);
                break;
            }
            if first_failure.is_none() {
                let (alpha, k, v) = &bad[0];
                first_failure = Some(format!("β = {beta}: character {k} of chart {alpha} gives {v}"));
            }
        }
        report.record(
            format!("subordinate[a0={alpha0}]"),
            found.is_none().then(|| first_failure.unwrap_or_else(|| "empty partition".into())),
        );
    }
    Ok(report)
}

/// Closure variant: every `χ_β` has its support inside the characters of `A`
/// annihilating some `I_α`.
pub fn verify_adapted_closure(p: &Partition, cov: &Covering) -> Result<Report> {
    let a = cov.base();
    let chars = a.characters()?;
    let mut report = Report::new();
    for (beta, e) in p.elements.iter().enumerate() {
        let support = a.support(&e.chi, &chars);
        let ok = cov.charts().iter().any(|chart| {
            support.iter().all(|&k| chart.ideal.basis().iter().all(|v| chars[k].eval(v).is_zero()))
        });
        report.record(
            format!("closure[b={beta}]"),
            (!ok).then(|| format!("support {:?} of χ_{beta} is not inside any chart", support)),
        );
    }
    Ok(report)
}

/// The functional form `x ↦ χ_α · σ_α(x)`, as a `dim A × dim A_α` matrix.
/// Requires `χ_α · I_α = 0`.
pub fn functional(p: &Partition, cov: &Covering, alpha: usize) -> Result<Matrix> {
    let a = cov.base();
    let chart = cov.chart(alpha)?;
    let chi = p.chi(alpha)?;
    for v in chart.ideal.basis() {
        let w = a.mul(chi, v);
        if !is_zero_vector(&w) {
            return Err(Error::IllDefined {
                chart: alpha,
                witness: format!("χ_{alpha} · {} = {}", format_vector(v), format_vector(&w)),
            });
        }
    }
    Ok(a.left_mult(chi).mul(chart.section()))
}

/// `χ_α ∘ π_α` as an operator on `A`.
pub fn functional_composite(p: &Partition, cov: &Covering, alpha: usize) -> Result<Matrix> {
    Ok(functional(p, cov, alpha)?.mul(cov.chart(alpha)?.projection()))
}

/// Reconstruction `Σ_α χ_α ∘ π_α = id` and the module property
/// `χ_α(x) b = χ_α(x π_α(b))` on all basis pairs.
pub fn reconstruction_check(p: &Partition, cov: &Covering) -> Result<Report> {
    check_lengths(p, cov)?;
    let a = cov.base();
    let mut report = Report::new();
    let mut total = Matrix::zeros(a.dim(), a.dim());
    for alpha in 0..cov.len() {
        let f = functional(p, cov, alpha)?;
        total = total.add(&f.mul(cov.chart(alpha)?.projection()));
        let chart = cov.chart(alpha)?;
        let q = &chart.algebra;
        let mut witness = None;
        'outer: for x in 0..q.dim() {
            let fx = f.column(x);
            for j in 0..a.dim() {
                let b = a.basis(j);
                let lhs = a.mul(&fx, &b);
                let rhs = f.mul_vec(&q.mul(&q.basis(x), &chart.project(&b)));
                if lhs != rhs {
                    witness = Some(format!("χ_{alpha}({}) · {} differs", q.labels()[x], a.labels()[j]));
                    break 'outer;
                }
            }
        }
        report.record(format!("module[{alpha}]"), witness);
    }
    let id = Matrix::identity(a.dim());
    let witness = (0..a.dim()).find_map(|i| {
        let c = total.column(i);
        (c != id.column(i)).then(|| format!("Σχ∘π on {} gives {}", a.labels()[i], format_vector(&c)))
    });
    report.record("reconstruction", witness);
    Ok(report)
}

/// `χ_{αβ} ∘ π_{αβ} = χ̃_β ∘ π̃_β ∘ χ_α ∘ π_α` for every index pair, where the
/// left side uses the product partition on the product covering.
pub fn functional_product_check(p: &Partition, cov: &Covering, q: &Partition, cov2: &Covering) -> Result<Report> {
    let a = cov.base();
    let prod = product_partition(a, p, q);
    let prod_cov = cov.product(cov2)?;
    let mut report = Report::new();
    for alpha in 0..p.len() {
        let right_first = functional_composite(p, cov, alpha)?;
        for beta in 0..q.len() {
            let idx = alpha * q.len() + beta;
            let lhs = functional_composite(&prod, &prod_cov, idx)?;
            let rhs = functional_composite(q, cov2, beta)?.mul(&right_first);
            let witness = (0..a.dim()).find(|&i| lhs.column(i) != rhs.column(i)).map(|i| {
                format!("on {}: {} vs {}", a.labels()[i], format_vector(&lhs.column(i)), format_vector(&rhs.column(i)))
            });
            report.record(format!("functional-product[{alpha},{beta}]"), witness);
        }
    }
    Ok(report)
}

/// Commutation of each `χ_α ∘ π_α` with the supplied operators on `A`.
pub fn centrality_check(p: &Partition, cov: &Covering, maps: &[Matrix]) -> Result<Report> {
    let mut report = Report::new();
    for alpha in 0..cov.len() {
        let c = functional_composite(p, cov, alpha)?;
        for (k, f) in maps.iter().enumerate() {
            let ok = f.mul(&c) == c.mul(f);
            report.record(format!("centrality[{alpha},{k}]"), (!ok).then(|| format!("map {k} does not commute with χ_{alpha}∘π_{alpha}")));
        }
    }
    Ok(report)
}

const PYTHAGOREAN: [(i64, i64, i64); 4] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25)];

/// Seeded partition with `parts` elements on an algebra whose blocks are all
/// matrix or function models: `ζ_α = U D_α` with a Cayley-transform unitary
/// `U = (I − S)(I + S)^{-1}` per block and diagonal `D_α` satisfying
/// `Σ_α D_α D_α* = I` (entries `1` or Pythagorean pairs).
pub fn random_zeta_partition<R: Rng>(algebra: &StarAlgebra, parts: usize, rng: &mut R) -> Result<Partition> {
    if parts == 0 {
        return Err(Error::InvalidArgument("a partition needs at least one element".into()));
    }
    // each leaf block: (offset, size) as a square matrix block
    let mut leaves: Vec<(usize, usize)> = Vec::new();
    for b in algebra.blocks() {
        match b.model {
            Model::Matrix(n) => leaves.push((b.offset, n)),
            Model::Functions(n) => leaves.extend((0..n).map(|x| (b.offset + x, 1))),
            _ => return Err(Error::Unsupported("random partitions need matrix or function blocks".into())),
        }
    }
    let mut zetas = vec![zero_vector(algebra.dim()); parts];
    for (offset, n) in leaves {
        let u = cayley_unitary(n, rng);
        let mut diag: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); n]; parts];
        for k in 0..n {
            let mut order: Vec<usize> = (0..parts).collect();
            order.shuffle(rng);
            if parts >= 2 && rng.gen_bool(0.5) {
                let (x, y, h) = PYTHAGOREAN[rng.gen_range(0..PYTHAGOREAN.len())];
                diag[order[0]][k] = Scalar::ratio(x, h);
                diag[order[1]][k] = Scalar::ratio(y, h);
            } else {
                diag[order[0]][k] = Scalar::one();
            }
        }
        for (alpha, d) in diag.iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let v = &u[(r, c)] * &d[c];
                    if !v.is_zero() {
                        zetas[alpha][offset + r * n + c] = v;
                    }
                }
            }
        }
    }
    Partition::from_zetas(algebra, &zetas)
}

fn cayley_unitary<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let mut s = Matrix::zeros(n, n);
    for r in 0..n {
        s[(r, r)] = Scalar::complex(0, rng.gen_range(-2..=2));
        for c in r + 1..n {
            let z = Scalar::complex(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            s[(c, r)] = -z.conj();
            s[(r, c)] = z;
        }
    }
    let id = Matrix::identity(n);
    let inv = id.add(&s).inverse().expect("I + S is invertible for skew-Hermitian S");
    id.sub(&s).mul(&inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{block_ideal, vanishing_ideal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_partition(alg: &StarAlgebra, n: usize) -> Partition {
        let zetas: Vec<Vector> = (0..n).map(|m| alg.basis(m * n + m)).collect();
        Partition::from_zetas(alg, &zetas).unwrap()
    }

    fn four_points() -> (StarAlgebra, Partition) {
        let f = StarAlgebra::functions(4).unwrap();
        let z1 = vec![Scalar::one(), Scalar::one(), Scalar::ratio(3, 5), Scalar::zero()];
        let z2 = vec![Scalar::zero(), Scalar::zero(), Scalar::ratio(4, 5), Scalar::one()];
        let p = Partition::from_zetas(&f, &[z1, z2]).unwrap();
        (f, p)
    }

    #[test]
    fn matrix_example() {
        let m4 = StarAlgebra::matrix(4).unwrap();
        let p = diag_partition(&m4, 4);
        assert!(verify_partition(&m4, &p, false).passed());
        assert!(verify_partition(&m4, &p, true).passed());
        let u = Partition::unit(&m4).unwrap();
        assert!(verify_partition(&m4, &u, false).passed());
    }

    #[test]
    fn commutative_example() {
        let (f, p) = four_points();
        assert_eq!(p.elements()[0].chi, vec![Scalar::one(), Scalar::one(), Scalar::ratio(9, 25), Scalar::zero()]);
        assert!(verify_partition(&f, &p, false).passed());
    }

    #[test]
    fn failing_partition_reports_witness() {
        let m2 = StarAlgebra::matrix(2).unwrap();
        let p = Partition::from_zetas(&m2, &[m2.basis(0)]).unwrap();
        let r = verify_partition(&m2, &p, false);
        assert!(!r.passed());
        assert!(r.get("sum-to-identity").unwrap().witness.is_some());
        let bad = Partition::from_pairs(vec![PartitionElement { chi: m2.unit().unwrap().clone(), zeta: m2.basis(0) }]);
        assert!(!verify_partition(&m2, &bad, false).get("positivity").unwrap().passed);
    }

    #[test]
    fn bullets() {
        let m2 = StarAlgebra::matrix(2).unwrap();
        let unit = PartitionElement { chi: m2.unit().unwrap().clone(), zeta: m2.unit().unwrap().clone() };
        let a = m2.basis(1);
        assert_eq!(bullet(&m2, &unit, &a), a);
        let e11 = PartitionElement { chi: m2.basis(0), zeta: m2.basis(0) };
        assert!(is_zero_vector(&bullet(&m2, &e11, &m2.basis(1))));
        let f = StarAlgebra::functions(3).unwrap();
        let z = vec![Scalar::complex(1, 1), Scalar::from_int(2), Scalar::zero()];
        let e = Partition::from_zetas(&f, &[z]).unwrap().elements()[0].clone();
        let b = vec![Scalar::from_int(5), Scalar::i(), Scalar::one()];
        assert_eq!(bullet(&f, &e, &b), f.mul(&e.chi, &b));
    }

    #[test]
    fn products() {
        let m3 = StarAlgebra::matrix(3).unwrap();
        let p = diag_partition(&m3, 3);
        let u = Partition::unit(&m3).unwrap();
        let pu = product_partition(&m3, &p, &u);
        assert_eq!(pu.len(), 3);
        for (a, b) in pu.elements().iter().zip(p.elements()) {
            assert_eq!(a.chi, b.chi);
        }
        let pp = product_partition(&m3, &p, &p);
        assert_eq!(pp.len(), 9);
        assert!(verify_partition(&m3, &pp, false).passed());
        let chis: Vec<_> = pp.pruned().elements().iter().map(|e| e.chi.clone()).collect();
        let expected: Vec<_> = p.elements().iter().map(|e| e.chi.clone()).collect();
        assert_eq!(chis, expected);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m22 = StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(2).unwrap()).unwrap();
        for _ in 0..3 {
            let a = random_zeta_partition(&m22, 3, &mut rng).unwrap();
            let b = random_zeta_partition(&m22, 2, &mut rng).unwrap();
            assert!(verify_partition(&m22, &a, false).passed());
            assert!(verify_partition(&m22, &product_partition(&m22, &a, &b), false).passed());
        }
    }

    #[test]
    fn adaptedness() {
        let m23 = StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(3).unwrap()).unwrap();
        let cov = Covering::new(&m23, &[block_ideal(&m23, &[1]).unwrap(), block_ideal(&m23, &[0]).unwrap()]).unwrap();
        let mut u0 = m23.zero();
        let mut u1 = m23.zero();
        for (k, v) in m23.unit().unwrap().iter().enumerate() {
            if k < 4 { u0[k] = v.clone() } else { u1[k] = v.clone() }
        }
        let p = Partition::from_zetas(&m23, &[u0, u1]).unwrap();
        let r = verify_adapted(&p, &cov).unwrap();
        assert!(r.passed());
        assert!(r.checks.iter().all(|c| c.id.ends_with("vacuous")));

        let (f, p) = four_points();
        let cov = Covering::new(&f, &[vanishing_ideal(&f, &[0, 1, 2]).unwrap(), vanishing_ideal(&f, &[2, 3]).unwrap()]).unwrap();
        let literal = verify_adapted(&p, &cov).unwrap();
        assert!(!literal.passed());
        let fail = literal.failures().next().unwrap();
        assert_eq!(fail.id, "adapted[a0=0,b=0,a=1,phi=0]");
        assert!(fail.witness.as_ref().unwrap().ends_with("9/25"));
        assert!(verify_adapted_closure(&p, &cov).unwrap().passed());
        assert!(!verify_subordinate(&p, &cov).unwrap().passed());

        let disjoint = Covering::new(&f, &[vanishing_ideal(&f, &[0, 1]).unwrap(), vanishing_ideal(&f, &[2, 3]).unwrap()]).unwrap();
        let ind = Partition::from_zetas(
            &f,
            &[
                vec![Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero(), Scalar::one(), Scalar::one()],
            ],
        )
        .unwrap();
        assert!(verify_adapted(&ind, &disjoint).unwrap().passed());
        assert!(verify_subordinate(&ind, &disjoint).unwrap().passed());
    }

    #[test]
    fn functionals() {
        let (f, p) = four_points();
        let cov = Covering::new(&f, &[vanishing_ideal(&f, &[0, 1, 2]).unwrap(), vanishing_ideal(&f, &[2, 3]).unwrap()]).unwrap();
        assert!(reconstruction_check(&p, &cov).unwrap().passed());

        let m2 = StarAlgebra::matrix(2).unwrap();
        let triv = Covering::trivial(&m2).unwrap();
        let u = Partition::unit(&m2).unwrap();
        assert_eq!(functional(&u, &triv, 0).unwrap(), Matrix::identity(4));

        // χ = 1 on a chart with a nonzero ideal is ill-defined
        let ideal_cov = Covering::new(&f, &[vanishing_ideal(&f, &[0, 1]).unwrap(), vanishing_ideal(&f, &[2, 3]).unwrap()]).unwrap();
        let bad = Partition::from_zetas(&f, &[f.unit().unwrap().clone(), f.zero()]).unwrap();
        assert!(matches!(functional(&bad, &ideal_cov, 0), Err(Error::IllDefined { chart: 0, .. })));
    }

    #[test]
    fn functional_products() {
        let m2 = StarAlgebra::matrix(2).unwrap();
        let triv = Covering::trivial(&m2).unwrap();
        let u = Partition::unit(&m2).unwrap();
        assert!(functional_product_check(&u, &triv, &u, &triv).unwrap().passed());

        let m3 = StarAlgebra::matrix(3).unwrap();
        let p = diag_partition(&m3, 3);
        // three copies of the trivial chart, one per element
        let cov3 = Covering::new(&m3, &vec![crate::linalg::Subspace::zero(9); 3]).unwrap();
        assert!(functional_product_check(&p, &cov3, &p, &cov3).unwrap().passed());
        assert!(reconstruction_check(&p, &cov3).unwrap().passed());
    }
}
