use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of the κ-Minkowski algebra in normal-ordered PBW form.
///
/// The same coefficient map is also read as a commutative polynomial in the
/// coordinates `p_μ` when the κ-Poincaré action is applied (see
/// [`super::poincare`]); the star product is [`PbwElement::star`].
#[derive(Clone, PartialEq, Eq)]
pub struct PbwElement {
    d: usize,
    kappa: Scalar,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PbwElement {
    pub fn zero(d: usize, kappa: Scalar) -> Self {
        assert!(kappa.is_positive_real(), "kappa must be a positive rational");
        PbwElement { d, kappa, terms: BTreeMap::new() }
    }

    pub fn one(d: usize, kappa: Scalar) -> Self {
        Self::monomial(d, kappa, Monomial::one(d), Scalar::one())
    }

    pub fn generator(d: usize, kappa: Scalar, mu: usize) -> Self {
        Self::monomial(d, kappa, Monomial::generator(d, mu), Scalar::one())
    }

    pub fn monomial(d: usize, kappa: Scalar, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.d(), d);
        let mut e = Self::zero(d, kappa);
        e.add_term(m, c);
        e
    }

    pub fn from_terms(d: usize, kappa: Scalar, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut e = Self::zero(d, kappa);
        for (m, c) in terms {
            assert_eq!(m.d(), d);
            e.add_term(m, c);
        }
        e
    }

    /// A zero element with the same parameters as `self`.
    pub fn zero_like(&self) -> Self {
        Self::zero(self.d, self.kappa.clone())
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.d, self.kappa.clone())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kappa(&self) -> &Scalar {
        &self.kappa
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Highest total degree among the terms; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn check_compatible(&self, other: &PbwElement) -> Result<()> {
        if self.d != other.d || self.kappa != other.kappa {
            return Err(Error::ParameterMismatch(format!(
                "(d = {}, kappa = {}) vs (d = {}, kappa = {})",
                self.d, self.kappa, other.d, other.kappa
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        self.check_compatible(other).expect("compatible parameters");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> PbwElement {
        if c.is_zero() {
            return self.zero_like();
        }
        PbwElement {
            d: self.d,
            kappa: self.kappa.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// The star product, computed by moving every `p_0` of the left factor
    /// through the spatial part of the right factor with
    /// `p_0 p_j = p_j (p_0 + i/κ)`.
    pub fn star(&self, other: &PbwElement) -> Result<PbwElement> {
        self.check_compatible(other)?;
        let mut out = self.zero_like();
        let step = Scalar::i() * self.kappa.inv().expect("kappa nonzero");
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let shift = &step * Scalar::from_int(i64::from(b.spatial_degree()));
                // (p_0 + shift)^m p_0^n by repeated multiplication
                let mut poly: Vec<Scalar> = vec![Scalar::one()];
                for _ in 0..a.time() {
                    let mut next = vec![Scalar::zero(); poly.len() + 1];
                    for (k, c) in poly.iter().enumerate() {
                        next[k + 1] += c;
                        next[k] += &(c * &shift);
                    }
                    poly = next;
                }
                let spatial: Vec<u32> = a.spatial().iter().zip(b.spatial()).map(|(s, t)| s + t).collect();
                let xy = x * y;
                for (k, c) in poly.into_iter().enumerate() {
                    let m = Monomial::new(spatial.clone(), k as u32 + b.time());
                    out.add_term(m, &xy * &c);
                }
            }
        }
        Ok(out)
    }

    /// Star power `f ⋆ ⋯ ⋆ f`.
    pub fn star_pow(&self, n: u32) -> PbwElement {
        let mut acc = self.one_like();
        for _ in 0..n {
            acc = acc.star(self).expect("same parameters");
        }
        acc
    }

    /// `f ⋆ g − g ⋆ f`.
    pub fn commutator(&self, other: &PbwElement) -> Result<PbwElement> {
        Ok(self.star(other)?.sub(&other.star(self)?))
    }

    /// Involution on the polynomial class: generators are self-adjoint,
    /// products reverse, coefficients conjugate.
    pub fn dagger(&self) -> PbwElement {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let time = PbwElement::monomial(self.d, self.kappa.clone(), Monomial::one(self.d).with_time(m.time()), c.conj());
            let space = PbwElement::monomial(self.d, self.kappa.clone(), m.with_time(0), Scalar::one());
            out = out.add(&time.star(&space).expect("same parameters"));
        }
        out
    }

    // Commutative-polynomial operations used by the κ-Poincaré action.

    /// Pointwise product of the coefficient maps read as commutative polynomials.
    pub fn commutative_mul(&self, other: &PbwElement) -> PbwElement {
        self.check_compatible(other).expect("compatible parameters");
        let mut out = self.zero_like();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }

    /// `∂f/∂p_mu` of the commutative polynomial.
    pub fn partial(&self, mu: usize) -> PbwElement {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let e = m.exponent(mu);
            if e > 0 {
                out.add_term(m.with_exponent(mu, e - 1), c * Scalar::from_int(i64::from(e)));
            }
        }
        out
    }

    /// `f(p_0 + s, p̄)`.
    pub fn shift_time(&self, s: &Scalar) -> PbwElement {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let n = m.time();
            for k in 0..=n {
                let coeff = c * crate::scalar::binomial(n, k) * s.pow(n - k);
                out.add_term(m.with_time(k), coeff);
            }
        }
        out
    }

    /// Value of the commutative polynomial at `p = 0`, i.e. the counit.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.d))
    }

    /// Random element with small Gaussian-integer coefficients and at most
    /// `max_terms` terms of degree `<= max_degree`.
    pub fn random<R: Rng>(rng: &mut R, d: usize, kappa: Scalar, max_degree: u32, max_terms: usize) -> PbwElement {
        let monomials = Monomial::all_up_to(d, max_degree);
        let count = rng.gen_range(1..=max_terms.max(1));
        let mut e = PbwElement::zero(d, kappa);
        for _ in 0..count {
            let m = monomials[rng.gen_range(0..monomials.len())].clone();
            let c = Scalar::complex(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            e.add_term(m, c);
        }
        e
    }
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| if m.is_one() { format!("({c})") } else { format!("({c}) {m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1() -> Scalar {
        Scalar::one()
    }

    fn mono(spatial: &[u32], time: u32) -> Monomial {
        Monomial::new(spatial.to_vec(), time)
    }

    #[test]
    fn basic_commutator() {
        for kappa in [Scalar::one(), Scalar::from_int(2), Scalar::ratio(1, 2)] {
            let p0 = PbwElement::generator(1, kappa.clone(), 0);
            let p1 = PbwElement::generator(1, kappa.clone(), 1);
            let c = p0.commutator(&p1).unwrap();
            assert_eq!(c, p1.scale(&(Scalar::i() / &kappa)));
        }
    }

    #[test]
    fn p0_squared_times_p1() {
        let kappa = Scalar::from_int(3);
        let p0 = PbwElement::generator(1, kappa.clone(), 0);
        let p1 = PbwElement::generator(1, kappa.clone(), 1);
        let lhs = p0.star(&p0).unwrap().star(&p1).unwrap();
        let ik = Scalar::i() / &kappa;
        let expected = PbwElement::from_terms(
            1,
            kappa.clone(),
            [
                (mono(&[1], 2), Scalar::one()),
                (mono(&[1], 1), Scalar::from_int(2) * &ik),
                (mono(&[1], 0), &ik * &ik),
            ],
        );
        assert_eq!(lhs, expected);
    }

    #[test]
    fn unit_is_neutral() {
        let f = PbwElement::from_terms(2, k1(), [(mono(&[1, 2], 1), Scalar::complex(1, 2))]);
        assert_eq!(f.one_like().star(&f).unwrap(), f);
        assert_eq!(f.star(&f.one_like()).unwrap(), f);
    }

    #[test]
    fn mismatched_parameters_rejected() {
        let a = PbwElement::generator(1, k1(), 0);
        let b = PbwElement::generator(1, Scalar::from_int(2), 0);
        let c = PbwElement::generator(2, k1(), 0);
        assert!(matches!(a.star(&b), Err(Error::ParameterMismatch(_))));
        assert!(matches!(a.star(&c), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn dagger_is_antimultiplicative() {
        let kappa = Scalar::ratio(1, 2);
        let f = PbwElement::from_terms(2, kappa.clone(), [(mono(&[1, 0], 1), Scalar::complex(1, 1)), (mono(&[0, 1], 0), Scalar::i())]);
        let g = PbwElement::from_terms(2, kappa.clone(), [(mono(&[0, 1], 2), Scalar::from_int(2)), (mono(&[0, 0], 1), Scalar::one())]);
        assert_eq!(f.star(&g).unwrap().dagger(), g.dagger().star(&f.dagger()).unwrap());
        assert_eq!(f.dagger().dagger(), f);
    }

    #[test]
    fn degree_bound() {
        let kappa = k1();
        let f = PbwElement::from_terms(2, kappa.clone(), [(mono(&[1, 1], 2), Scalar::one())]);
        let g = PbwElement::from_terms(2, kappa, [(mono(&[2, 0], 1), Scalar::one())]);
        assert!(f.star(&g).unwrap().degree().unwrap() <= 7);
    }
}
