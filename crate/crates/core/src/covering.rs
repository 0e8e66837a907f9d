//! Coverings of a *-algebra by finitely many *-ideals with zero
//! intersection, the local quotient algebras and the overlap diagram.

use std::collections::BTreeMap;

use crate::algebra::{Model, StarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{format_vector, unit_vector, Matrix, Quotient, Subspace, Vector};
use crate::report::Report;
use crate::scalar::Scalar;

/// Ideal spanned by the coordinates of the listed direct-sum blocks.
pub fn block_ideal(algebra: &StarAlgebra, blocks: &[usize]) -> Result<Subspace> {
    let all = algebra.blocks();
    let mut vectors = Vec::new();
    for &b in blocks {
        let blk = all.get(b).ok_or(Error::IndexOutOfRange { index: b, len: all.len() })?;
        vectors.extend((blk.offset..blk.offset + blk.dim).map(|i| unit_vector(algebra.dim(), i)));
    }
    Subspace::span(algebra.dim(), &vectors)
}

/// Functions vanishing on the point set `region` (zero-based point indices).
pub fn vanishing_ideal(algebra: &StarAlgebra, region: &[usize]) -> Result<Subspace> {
    let Model::Functions(n) = algebra.model() else {
        return Err(Error::InvalidArgument("vanishing ideals need a function algebra".into()));
    };
    if let Some(&bad) = region.iter().find(|&&x| x >= *n) {
        return Err(Error::IndexOutOfRange { index: bad, len: *n });
    }
    let vectors: Vec<Vector> = (0..*n).filter(|x| !region.contains(x)).map(|x| unit_vector(*n, x)).collect();
    Subspace::span(*n, &vectors)
}

/// Smallest *-ideal containing the given elements.
pub fn generated_ideal(algebra: &StarAlgebra, generators: &[Vector]) -> Result<Subspace> {
    for g in generators {
        algebra.check_element(g)?;
    }
    algebra.ideal_closure(generators, true)
}

/// One local algebra `A_α = A / I_α` with its projection and section.
#[derive(Debug, Clone)]
pub struct Chart {
    pub ideal: Subspace,
    pub algebra: StarAlgebra,
    pub quotient: Quotient,
}

impl Chart {
    pub fn project(&self, a: &[Scalar]) -> Vector {
        self.quotient.project(a)
    }

    pub fn lift(&self, x: &[Scalar]) -> Vector {
        self.quotient.lift(x)
    }

    pub fn projection(&self) -> &Matrix {
        self.quotient.projection()
    }

    pub fn section(&self) -> &Matrix {
        self.quotient.section()
    }
}

/// `A_{αβ} = A / (I_α + I_β)` with `π_{αβ}` and the induced maps
/// `π^α_β = π_{αβ} ∘ σ_α : A_α → A_{αβ}` and `π^β_α = π_{αβ} ∘ σ_β`.
#[derive(Debug, Clone)]
pub struct Overlap {
    pub chart: Chart,
    pub from_first: Matrix,
    pub from_second: Matrix,
}

#[derive(Debug, Clone)]
pub struct Covering {
    base: StarAlgebra,
    charts: Vec<Chart>,
    overlaps: BTreeMap<(usize, usize), Overlap>,
}

fn build_chart(base: &StarAlgebra, ideal: &Subspace) -> Result<Chart> {
    let (algebra, quotient) = base.quotient(ideal)?;
    Ok(Chart { ideal: ideal.clone(), algebra, quotient })
}

impl Covering {
    /// Validates the ideals, checks `∩ I_α = {0}` and caches every local and
    /// overlap algebra.
    pub fn new(base: &StarAlgebra, ideals: &[Subspace]) -> Result<Self> {
        if ideals.is_empty() {
            return Err(Error::InvalidArgument("a covering needs at least one ideal".into()));
        }
        for ideal in ideals {
            if ideal.ambient_dim() != base.dim() {
                return Err(Error::DimensionMismatch { expected: base.dim(), found: ideal.ambient_dim() });
            }
            if let Some(w) = base.ideal_witness(ideal) {
                return Err(Error::NotAnIdeal { witness: w });
            }
        }
        let mut common = ideals[0].clone();
        for ideal in &ideals[1..] {
            common = common.intersect(ideal)?;
        }
        if let Some(w) = common.basis().first() {
            return Err(Error::IntersectionNonzero { witness: format_vector(w) });
        }
        let charts = ideals.iter().map(|i| build_chart(base, i)).collect::<Result<Vec<_>>>()?;
        let mut overlaps = BTreeMap::new();
        for a in 0..charts.len() {
            for b in a..charts.len() {
                let sum = charts[a].ideal.sum(&charts[b].ideal)?;
                let chart = build_chart(base, &sum)?;
                let from_first = chart.projection().mul(charts[a].section());
                let from_second = chart.projection().mul(charts[b].section());
                overlaps.insert((a, b), Overlap { chart, from_first, from_second });
            }
        }
        Ok(Covering { base: base.clone(), charts, overlaps })
    }

    /// The covering `{ {0} }` with `A_1 = A`.
    pub fn trivial(base: &StarAlgebra) -> Result<Self> {
        Self::new(base, &[Subspace::zero(base.dim())])
    }

    pub fn base(&self) -> &StarAlgebra {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, alpha: usize) -> Result<&Chart> {
        self.charts.get(alpha).ok_or(Error::IndexOutOfRange { index: alpha, len: self.charts.len() })
    }

    pub fn ideals(&self) -> Vec<Subspace> {
        self.charts.iter().map(|c| c.ideal.clone()).collect()
    }

    pub fn project(&self, alpha: usize, a: &[Scalar]) -> Result<Vector> {
        self.base.check_element(a)?;
        Ok(self.chart(alpha)?.project(a))
    }

    pub fn section(&self, alpha: usize, x: &[Scalar]) -> Result<Vector> {
        let chart = self.chart(alpha)?;
        chart.algebra.check_element(x)?;
        Ok(chart.lift(x))
    }

    /// Overlap data for `(α, β)`. When `α > β` the two induced maps are
    /// returned swapped so that `from_first` always starts at `A_α`.
    pub fn overlap(&self, alpha: usize, beta: usize) -> Result<Overlap> {
        self.chart(alpha)?;
        self.chart(beta)?;
        if alpha <= beta {
            Ok(self.overlaps[&(alpha, beta)].clone())
        } else {
            let o = &self.overlaps[&(beta, alpha)];
            Ok(Overlap { chart: o.chart.clone(), from_first: o.from_second.clone(), from_second: o.from_first.clone() })
        }
    }

    /// Covering by all sums `I_α + Ĩ_β`, indexed `α · m + β`.
    pub fn product(&self, other: &Covering) -> Result<Covering> {
        if self.base != other.base {
            return Err(Error::InvalidArgument("coverings of different algebras".into()));
        }
        let mut ideals = Vec::new();
        for a in &self.charts {
            for b in &other.charts {
                ideals.push(a.ideal.sum(&b.ideal)?);
            }
        }
        Covering::new(&self.base, &ideals)
    }

    /// Exhaustive basis sweep of the covering laws: zero intersection,
    /// projections are surjective *-homomorphisms with `π ∘ σ = id`, and
    /// the overlap diagram commutes.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        let a = &self.base;
        let mut common = self.charts[0].ideal.clone();
        for c in &self.charts[1..] {
            common = common.intersect(&c.ideal).expect("same ambient dimension");
        }
        report.record("intersection-zero", common.basis().first().map(|w| format_vector(w)));

        let total: usize = self.charts.iter().map(|c| c.algebra.dim()).sum();
        report.record(
            "dimension-bound",
            (a.dim() > total).then(|| format!("dim A = {} > {total}", a.dim())),
        );

        for (alpha, chart) in self.charts.iter().enumerate() {
            let q = &chart.algebra;
            let ps = chart.projection().mul(chart.section());
            report.record(
                format!("section[{alpha}]"),
                (ps != Matrix::identity(q.dim())).then(|| "π∘σ differs from the identity".to_string()),
            );
            let mut hom = None;
            let mut inv = None;
            for i in 0..a.dim() {
                let ei = a.basis(i);
                let pi = chart.project(&ei);
                if inv.is_none() && chart.project(&a.star(&ei)) != q.star(&pi) {
                    inv = Some(format!("π({}*) ≠ π({})*", a.labels()[i], a.labels()[i]));
                }
                for j in 0..a.dim() {
                    let ej = a.basis(j);
                    if hom.is_none() && chart.project(&a.mul(&ei, &ej)) != q.mul(&pi, &chart.project(&ej)) {
                        hom = Some(format!("π({} {}) ≠ π({}) π({})", a.labels()[i], a.labels()[j], a.labels()[i], a.labels()[j]));
                    }
                }
            }
            report.record(format!("homomorphism[{alpha}]"), hom);
            report.record(format!("involution[{alpha}]"), inv);
            if let (Some(u), Some(qu)) = (a.unit(), q.unit()) {
                report.record(format!("unit[{alpha}]"), (&chart.project(u) != qu).then(|| "π(1) is not the unit".to_string()));
            }
        }

        for (&(alpha, beta), o) in &self.overlaps {
            let direct = o.chart.projection();
            let via_a = o.from_first.mul(self.charts[alpha].projection());
            let via_b = o.from_second.mul(self.charts[beta].projection());
            let mut witness = None;
            for i in 0..a.dim() {
                let col = direct.column(i);
                if via_a.column(i) != col || via_b.column(i) != col {
                    witness = Some(format!("diagram fails on {}", a.labels()[i]));
                    break;
                }
            }
            report.record(format!("diagram[{alpha},{beta}]"), witness);
        }
        report
    }
}
