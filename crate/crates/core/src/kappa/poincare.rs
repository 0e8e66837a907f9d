//! κ-Poincaré generators acting on κ-Minkowski elements read as commutative
//! polynomials in `p_μ`.
//!
//! Metric signature is `(+, −, −, −)`: `P^μ ▷ f = −i ∂f/∂p_μ`, `P_0 = P^0`,
//! `P_j = −P^j`, and `E ▷ f = f(p_0 + i/κ, p̄)`.

use std::fmt;

use super::pbw::PbwElement;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Generators of the deformed translations and Lorentz sector.
///
/// `P(μ)`, `M(j)`, `N(j)` carry lower indices; `X(μ)` is the upper-index
/// basis element with `X(0) = κ(1 − E)` and `X(j) = P^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoincareGenerator {
    P(usize),
    E,
    M(usize),
    N(usize),
    X(usize),
}

impl fmt::Display for PoincareGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoincareGenerator::P(mu) => write!(f, "P_{mu}"),
            PoincareGenerator::E => write!(f, "E"),
            PoincareGenerator::M(j) => write!(f, "M_{j}"),
            PoincareGenerator::N(j) => write!(f, "N_{j}"),
            PoincareGenerator::X(mu) => write!(f, "X^{mu}"),
        }
    }
}

/// `ε_{jkl}` on `{1, 2, 3}` with `ε_{123} = 1`.
pub fn levi_civita(j: usize, k: usize, l: usize) -> i64 {
    match (j, k, l) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

fn validate(h: PoincareGenerator, d: usize) -> Result<()> {
    match h {
        PoincareGenerator::P(mu) | PoincareGenerator::X(mu) if mu > d => {
            Err(Error::IndexOutOfRange { index: mu, len: d + 1 })
        }
        PoincareGenerator::M(j) | PoincareGenerator::N(j) => {
            if d != 3 {
                Err(Error::RequiresThreeDimensions { generator: h.to_string(), d })
            } else if !(1..=3).contains(&j) {
                Err(Error::IndexOutOfRange { index: j, len: 4 })
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

fn p_upper(mu: usize, f: &PbwElement) -> PbwElement {
    f.partial(mu).scale(&-Scalar::i())
}

fn coordinate(f: &PbwElement, mu: usize) -> PbwElement {
    PbwElement::generator(f.d(), f.kappa().clone(), mu)
}

/// `h ▷ f`.
pub fn act(h: PoincareGenerator, f: &PbwElement) -> Result<PbwElement> {
    let d = f.d();
    validate(h, d)?;
    let kappa = f.kappa().clone();
    let inv_kappa = kappa.inv().expect("kappa nonzero");
    let shift = Scalar::i() * &inv_kappa;
    Ok(match h {
        PoincareGenerator::P(0) => p_upper(0, f),
        PoincareGenerator::P(j) => p_upper(j, f).scale(&-Scalar::one()),
        PoincareGenerator::E => f.shift_time(&shift),
        PoincareGenerator::X(0) => f.sub(&f.shift_time(&shift)).scale(&kappa),
        PoincareGenerator::X(j) => p_upper(j, f),
        PoincareGenerator::M(j) => {
            let mut out = f.zero_like();
            for k in 1..=3 {
                for l in 1..=3 {
                    let e = levi_civita(j, k, l);
                    if e != 0 {
                        let term = coordinate(f, k).commutative_mul(&f.partial(l));
                        out = out.add(&term.scale(&(Scalar::i() * Scalar::from_int(e))));
                    }
                }
            }
            out
        }
        PoincareGenerator::N(j) => {
            let e2 = f.shift_time(&(&shift + &shift));
            let mut laplacian = f.zero_like();
            for l in 1..=3 {
                laplacian = laplacian.add(&f.partial(l).partial(l));
            }
            let bracket = f.sub(&e2).scale(&kappa).add(&laplacian.scale(&inv_kappa));
            // p^j = −p_j
            let first = coordinate(f, j).commutative_mul(&bracket).scale(&Scalar::ratio(-1, 2));
            let pj = p_upper(j, f);
            let second = coordinate(f, 0).commutative_mul(&pj);
            let mut third = f.zero_like();
            for k in 1..=3 {
                third = third.add(&coordinate(f, k).commutative_mul(&p_upper(k, &pj)));
            }
            let n_upper = first.add(&second).sub(&third.scale(&inv_kappa));
            n_upper.scale(&-Scalar::one())
        }
    })
}

/// Applies a word of generators right to left; the empty word is the identity.
pub fn act_word(word: &[PoincareGenerator], f: &PbwElement) -> Result<PbwElement> {
    let mut out = f.clone();
    for &h in word.iter().rev() {
        out = act(h, &out)?;
    }
    Ok(out)
}

/// One Sweedler term `c · w₁ ⊗ w₂` with words of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductTerm {
    pub coeff: Scalar,
    pub left: Vec<PoincareGenerator>,
    pub right: Vec<PoincareGenerator>,
}

fn term(coeff: Scalar, left: &[PoincareGenerator], right: &[PoincareGenerator]) -> CoproductTerm {
    CoproductTerm { coeff, left: left.to_vec(), right: right.to_vec() }
}

/// Coproduct of a generator in the Majid–Ruegg basis.
pub fn generator_coproduct(h: PoincareGenerator, d: usize, kappa: &Scalar) -> Result<Vec<CoproductTerm>> {
    use PoincareGenerator::*;
    validate(h, d)?;
    let one = Scalar::one();
    Ok(match h {
        P(0) | M(_) => vec![term(one.clone(), &[h], &[]), term(one, &[], &[h])],
        X(0) => vec![term(kappa.clone(), &[], &[]), term(-kappa, &[E], &[E])],
        P(_) | X(_) => vec![term(one.clone(), &[h], &[]), term(one, &[E], &[h])],
        E => vec![term(one, &[E], &[E])],
        N(j) => {
            let mut terms = vec![term(one.clone(), &[h], &[]), term(one, &[E], &[h])];
            let inv = kappa.inv().expect("kappa nonzero");
            for k in 1..=3 {
                for l in 1..=3 {
                    let e = levi_civita(j, k, l);
                    if e != 0 {
                        terms.push(term(-(&inv * Scalar::from_int(e)), &[P(k)], &[M(l)]));
                    }
                }
            }
            terms
        }
    })
}

/// Both sides of the module-algebra law `h ▷ (f ⋆ g) = Σ (h₍₁₎ ▷ f) ⋆ (h₍₂₎ ▷ g)`.
pub fn module_algebra_sides(h: PoincareGenerator, f: &PbwElement, g: &PbwElement) -> Result<(PbwElement, PbwElement)> {
    f.check_compatible(g)?;
    let lhs = act(h, &f.star(g)?)?;
    let mut rhs = f.zero_like();
    for t in generator_coproduct(h, f.d(), f.kappa())? {
        let a = act_word(&t.left, f)?;
        let b = act_word(&t.right, g)?;
        rhs = rhs.add(&a.star(&b)?.scale(&t.coeff));
    }
    Ok((lhs, rhs))
}

/// `⟨t, f⟩`: act, then evaluate at `p = 0`.
pub fn pairing(t: PoincareGenerator, f: &PbwElement) -> Result<Scalar> {
    match t {
        PoincareGenerator::M(_) | PoincareGenerator::N(_) => {
            Err(Error::Unsupported(format!("pairing with {t}")))
        }
        _ => Ok(act(t, f)?.constant_term()),
    }
}
