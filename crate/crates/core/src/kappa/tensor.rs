use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::monomial::Monomial;
use super::pbw::PbwElement;
use crate::scalar::Scalar;

/// Element of an `n`-fold tensor power of the κ-Minkowski algebra, keyed by
/// tuples of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    d: usize,
    kappa: Scalar,
    arity: usize,
    terms: BTreeMap<Vec<Monomial>, Scalar>,
}

impl TensorElement {
    pub fn zero(d: usize, kappa: Scalar, arity: usize) -> Self {
        TensorElement { d, kappa, arity, terms: BTreeMap::new() }
    }

    /// `1 ⊗ ⋯ ⊗ 1`.
    pub fn one(d: usize, kappa: Scalar, arity: usize) -> Self {
        let mut t = Self::zero(d, kappa, arity);
        t.add_term(vec![Monomial::one(d); arity], Scalar::one());
        t
    }

    /// `f_1 ⊗ ⋯ ⊗ f_n`.
    pub fn pure(factors: &[&PbwElement]) -> Self {
        let first = factors.first().expect("at least one factor");
        let mut t = Self::one(first.d(), first.kappa().clone(), 0);
        for f in factors {
            let mut next = Self::zero(f.d(), f.kappa().clone(), t.arity + 1);
            for (key, c) in &t.terms {
                for (m, x) in f.terms() {
                    let mut k = key.clone();
                    k.push(m.clone());
                    next.add_term(k, c * x);
                }
            }
            t = next;
        }
        t
    }

    pub fn from_element(f: &PbwElement) -> Self {
        Self::pure(&[f])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &[Monomial]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: Vec<Monomial>, c: Scalar) {
        assert_eq!(key.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = Self::zero(self.d, self.kappa.clone(), self.arity);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    fn mono(&self, m: &Monomial) -> PbwElement {
        PbwElement::monomial(self.d, self.kappa.clone(), m.clone(), Scalar::one())
    }

    /// Product in the tensor-product algebra (legwise star products).
    pub fn mul(&self, other: &TensorElement) -> TensorElement {
        assert_eq!(self.arity, other.arity);
        let mut out = Self::zero(self.d, self.kappa.clone(), self.arity);
        for (ka, x) in &self.terms {
            for (kb, y) in &other.terms {
                let legs: Vec<PbwElement> = ka
                    .iter()
                    .zip(kb)
                    .map(|(a, b)| self.mono(a).star(&self.mono(b)).expect("same parameters"))
                    .collect();
                let refs: Vec<&PbwElement> = legs.iter().collect();
                let prod = if refs.is_empty() { Self::one(self.d, self.kappa.clone(), 0) } else { Self::pure(&refs) };
                out = out.add(&prod.scale(&(x * y)));
            }
        }
        out
    }

    /// Replaces leg `leg` by the tensor produced by `map` on its monomial.
    /// The output arity is `arity − 1 + r` where `r` is the arity of `map`'s values.
    pub fn expand_leg(&self, leg: usize, map: &dyn Fn(&Monomial) -> TensorElement) -> TensorElement {
        assert!(leg < self.arity);
        let mut out: Option<TensorElement> = None;
        for (key, c) in &self.terms {
            let image = map(&key[leg]);
            let arity = self.arity - 1 + image.arity;
            let acc = out.get_or_insert_with(|| Self::zero(self.d, self.kappa.clone(), arity));
            for (ik, x) in &image.terms {
                let mut k: Vec<Monomial> = key[..leg].to_vec();
                k.extend(ik.iter().cloned());
                k.extend(key[leg + 1..].iter().cloned());
                acc.add_term(k, c * x);
            }
        }
        out.unwrap_or_else(|| {
            let r = map(&Monomial::one(self.d)).arity;
            Self::zero(self.d, self.kappa.clone(), self.arity - 1 + r)
        })
    }

    /// Multiplies legs `leg` and `leg + 1` together.
    pub fn contract(&self, leg: usize) -> TensorElement {
        assert!(leg + 1 < self.arity);
        let mut out = Self::zero(self.d, self.kappa.clone(), self.arity - 1);
        for (key, c) in &self.terms {
            let prod = self.mono(&key[leg]).star(&self.mono(&key[leg + 1])).expect("same parameters");
            for (m, x) in prod.terms() {
                let mut k: Vec<Monomial> = key[..leg].to_vec();
                k.push(m.clone());
                k.extend(key[leg + 2..].iter().cloned());
                out.add_term(k, c * x);
            }
        }
        out
    }

    /// Reads an arity-1 tensor back as an algebra element.
    pub fn to_element(&self) -> PbwElement {
        assert_eq!(self.arity, 1);
        PbwElement::from_terms(self.d, self.kappa.clone(), self.terms.iter().map(|(k, c)| (k[0].clone(), c.clone())))
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let legs: Vec<String> = k.iter().map(|m| m.to_string()).collect();
                format!("({c}) {}", legs.join(" ⊗ "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
