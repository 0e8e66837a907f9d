//! Hopf structure of κ-Minkowski: primitive generators, coproduct extended
//! multiplicatively, counit and antipode.

use super::monomial::Monomial;
use super::pbw::PbwElement;
use super::tensor::TensorElement;
use crate::report::Report;
use crate::scalar::Scalar;

fn generator_coproduct(d: usize, kappa: &Scalar, mu: usize) -> TensorElement {
    let p = PbwElement::generator(d, kappa.clone(), mu);
    let one = p.one_like();
    TensorElement::pure(&[&p, &one]).add(&TensorElement::pure(&[&one, &p]))
}

/// `Δ` on a single monomial, as the product `Δ(p_1)^{β_1} ⋯ Δ(p_d)^{β_d} Δ(p_0)^n`
/// in the tensor-product algebra.
pub fn coproduct_monomial(d: usize, kappa: &Scalar, m: &Monomial) -> TensorElement {
    let mut acc = TensorElement::one(d, kappa.clone(), 2);
    for mu in (1..=d).chain(std::iter::once(0)) {
        let g = generator_coproduct(d, kappa, mu);
        for _ in 0..m.exponent(mu) {
            acc = acc.mul(&g);
        }
    }
    acc
}

pub fn coproduct(f: &PbwElement) -> TensorElement {
    let mut out = TensorElement::zero(f.d(), f.kappa().clone(), 2);
    for (m, c) in f.terms() {
        out = out.add(&coproduct_monomial(f.d(), f.kappa(), m).scale(c));
    }
    out
}

pub fn counit(f: &PbwElement) -> Scalar {
    f.constant_term()
}

/// `S(p̄^β p_0^n) = S(p_0)^n S(p̄^β) = (−1)^{|β|+n} p_0^n ⋆ p̄^β`.
pub fn antipode_monomial(d: usize, kappa: &Scalar, m: &Monomial) -> PbwElement {
    let time = PbwElement::monomial(d, kappa.clone(), Monomial::one(d).with_time(m.time()), Scalar::one());
    let space = PbwElement::monomial(d, kappa.clone(), m.with_time(0), Scalar::one());
    let sign = if m.degree().is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
    time.star(&space).expect("same parameters").scale(&sign)
}

pub fn antipode(f: &PbwElement) -> PbwElement {
    let mut out = f.zero_like();
    for (m, c) in f.terms() {
        out = out.add(&antipode_monomial(f.d(), f.kappa(), m).scale(c));
    }
    out
}

fn counit_tensor(d: usize, kappa: &Scalar, m: &Monomial) -> TensorElement {
    let mut t = TensorElement::zero(d, kappa.clone(), 0);
    if m.is_one() {
        t.add_term(Vec::new(), Scalar::one());
    }
    t
}

fn antipode_tensor(d: usize, kappa: &Scalar, m: &Monomial) -> TensorElement {
    TensorElement::from_element(&antipode_monomial(d, kappa, m))
}

/// Checks coassociativity, both counit laws and both antipode laws on every
/// monomial of degree `<= max_degree`. One check per (identity, monomial).
pub fn hopf_axiom_check(d: usize, kappa: &Scalar, max_degree: u32) -> Report {
    let mut report = Report::new();
    for m in Monomial::all_up_to(d, max_degree) {
        let x = PbwElement::monomial(d, kappa.clone(), m.clone(), Scalar::one());
        let x_t = TensorElement::from_element(&x);
        let delta = coproduct(&x);
        let cop = |mono: &Monomial| coproduct_monomial(d, kappa, mono);
        let eps = |mono: &Monomial| counit_tensor(d, kappa, mono);
        let s = |mono: &Monomial| antipode_tensor(d, kappa, mono);

        let left = delta.expand_leg(0, &cop);
        let right = delta.expand_leg(1, &cop);
        report.record(format!("coassociativity[{m}]"), (left != right).then(|| format!("{left} != {right}")));

        for (name, leg) in [("counit-left", 0), ("counit-right", 1)] {
            let r = delta.expand_leg(leg, &eps);
            report.record(format!("{name}[{m}]"), (r != x_t).then(|| format!("{r} != {x_t}")));
        }

        let unit = TensorElement::from_element(&x.one_like().scale(&counit(&x)));
        for (name, leg) in [("antipode-left", 0), ("antipode-right", 1)] {
            let r = delta.expand_leg(leg, &s).contract(0);
            report.record(format!("{name}[{m}]"), (r != unit).then(|| format!("{r} != {unit}")));
        }
    }
    report
}
