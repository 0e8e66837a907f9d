//! Univariate polynomials over the Gaussian rationals, characteristic
//! polynomials, and extraction of Gaussian-rational roots.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Coefficients stored from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// `x − r`
    pub fn linear(r: &Scalar) -> Self {
        Poly::new(vec![-r, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Scalar::from_int(k as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero);
        Poly::new((0..n).map(|i| get(self, i) - get(other, i)).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        Poly::new(self.coeffs.iter().map(|c| c * &inv).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.leading().inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().expect("nonempty") * &lead_inv;
            if !c.is_zero() {
                for (k, dc) in divisor.coeffs.iter().enumerate() {
                    rem[shift + k] -= &(&c * dc);
                }
                quot[shift] = c;
            }
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors, made monic.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Distinct roots lying in the Gaussian rationals, together with the
    /// degree of the square-free cofactor that could not be split into them.
    pub fn gaussian_rational_roots(&self) -> (Vec<Scalar>, usize) {
        if self.degree().unwrap_or(0) == 0 {
            return (Vec::new(), 0);
        }
        let mut rest = self.squarefree();
        let mut roots = Vec::new();
        for approx in numeric_roots(&rest) {
            if let Some(r) = reconstruct(approx) {
                if !roots.contains(&r) && rest.eval(&r).is_zero() {
                    rest = rest.div_rem(&Poly::linear(&r)).0;
                    roots.push(r);
                }
            }
        }
        let remaining = rest.degree().unwrap_or(0);
        (roots, remaining)
    }
}

/// Characteristic polynomial `det(x I − A)`, by reduction to upper
/// Hessenberg form followed by the standard determinant recurrence.
pub fn characteristic_polynomial(a: &Matrix) -> Poly {
    let n = a.rows();
    assert_eq!(n, a.cols(), "characteristic polynomial needs a square matrix");
    let mut h = a.clone();
    for col in 0..n.saturating_sub(2) {
        let Some(p) = (col + 1..n).find(|&r| !h[(r, col)].is_zero()) else {
            continue;
        };
        if p != col + 1 {
            // similarity by a permutation: swap rows and the matching columns
            for c in 0..n {
                let tmp = h[(p, c)].clone();
                h[(p, c)] = h[(col + 1, c)].clone();
                h[(col + 1, c)] = tmp;
            }
            for r in 0..n {
                let tmp = h[(r, p)].clone();
                h[(r, p)] = h[(r, col + 1)].clone();
                h[(r, col + 1)] = tmp;
            }
        }
        let pivot_inv = h[(col + 1, col)].inv().expect("nonzero pivot");
        for r in col + 2..n {
            let factor = &h[(r, col)] * &pivot_inv;
            if factor.is_zero() {
                continue;
            }
            for c in 0..n {
                let v = &factor * &h[(col + 1, c)];
                h[(r, c)] -= &v;
            }
            for rr in 0..n {
                let v = &factor * &h[(rr, r)];
                h[(rr, col + 1)] += &v;
            }
        }
    }
    // p_k = (x − h_kk) p_{k−1} − Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j−1}) p_{i−1}
    let mut ps: Vec<Poly> = vec![Poly::constant(Scalar::one())];
    for k in 0..n {
        let mut next = Poly::new(vec![-&h[(k, k)], Scalar::one()]).mul(&ps[k]);
        let mut prod = Scalar::one();
        for i in (0..k).rev() {
            prod *= &h[(i + 1, i)];
            if prod.is_zero() {
                break;
            }
            let c = &h[(i, k)] * &prod;
            next = next.sub(&ps[i].mul(&Poly::constant(c)));
        }
        ps.push(next);
    }
    ps.pop().expect("nonempty")
}

fn to_complex(s: &Scalar) -> Complex64 {
    let (re, im) = s.to_f64_pair();
    Complex64::new(re, im)
}

/// Approximate roots of a square-free polynomial by the Aberth iteration.
fn numeric_roots(p: &Poly) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let coeffs: Vec<Complex64> = monic.coeffs().iter().map(to_complex).collect();
    let deriv: Vec<Complex64> = monic.derivative().coeffs().iter().map(to_complex).collect();
    let eval = |c: &[Complex64], x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * x + k);
    let radius = 1.0 + coeffs.iter().take(n).map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5 + 0.1, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let pv = eval(&coeffs, z[i]);
            let dv = eval(&deriv, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm());
            }
        }
        if moved < 1e-14 {
            break;
        }
    }
    z
}

fn rational_approx(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    if x.abs() < 1e-9 {
        return Some(BigRational::zero());
    }
    // continued-fraction convergents with bounded denominator
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        let approx_f = approx_to_f64(&approx);
        if (approx_f - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some(approx);
        }
        if k1 > BigInt::from(1_000_000i64) {
            return None;
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            return Some(approx);
        }
        v = 1.0 / frac;
    }
    None
}

fn approx_to_f64(r: &BigRational) -> f64 {
    Scalar::from_rational(r.clone()).to_f64_pair().0
}

fn reconstruct(z: Complex64) -> Option<Scalar> {
    Some(Scalar::new(rational_approx(z.re)?, rational_approx(z.im)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn division_and_gcd() {
        // (x−1)(x−2) and (x−1)(x+3)
        let a = Poly::linear(&s(1)).mul(&Poly::linear(&s(2)));
        let b = Poly::linear(&s(1)).mul(&Poly::linear(&s(-3)));
        assert_eq!(a.gcd(&b), Poly::linear(&s(1)));
        let (q, r) = a.div_rem(&Poly::linear(&s(2)));
        assert_eq!(q, Poly::linear(&s(1)));
        assert!(r.is_zero());
    }

    #[test]
    fn charpoly_matches_known() {
        let m = Matrix::from_rows(&[vec![s(2), s(1), s(0)], vec![s(1), s(3), s(1)], vec![s(0), s(1), s(4)]]).unwrap();
        let p = characteristic_polynomial(&m);
        // x^3 − 9x^2 + 24x − 18
        assert_eq!(p, Poly::new(vec![s(-18), s(24), s(-9), s(1)]));
    }

    #[test]
    fn charpoly_with_zero_subdiagonal() {
        let mut m = Matrix::zeros(4, 4);
        m[(0, 3)] = s(1);
        m[(3, 0)] = s(1);
        m[(1, 1)] = Scalar::i();
        let p = characteristic_polynomial(&m);
        // (x^2 − 1)(x − i) x
        let expected = Poly::new(vec![s(-1), s(0), s(1)]).mul(&Poly::linear(&Scalar::i())).mul(&Poly::linear(&s(0)));
        assert_eq!(p, expected);
    }

    #[test]
    fn roots_found_exactly() {
        let roots = [Scalar::ratio(1, 3), Scalar::complex(-2, 1), Scalar::ratio(9, 25), Scalar::zero()];
        let mut p = Poly::constant(s(1));
        for r in &roots {
            p = p.mul(&Poly::linear(r)).mul(&Poly::linear(r));
        }
        let (found, rest) = p.gaussian_rational_roots();
        assert_eq!(rest, 0);
        assert_eq!(found.len(), 4);
        for r in &roots {
            assert!(found.contains(r));
        }
    }

    #[test]
    fn irrational_roots_are_reported() {
        // x^2 − 2
        let p = Poly::new(vec![s(-2), s(0), s(1)]);
        let (found, rest) = p.gaussian_rational_roots();
        assert!(found.is_empty());
        assert_eq!(rest, 2);
    }
}
