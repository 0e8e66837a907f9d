//! Closed-form evaluation of the convolution integral
//!
//! ```text
//! (f ⋆ g)(p) = ∫ dy⁰ dq₀/2π  e^{−i y⁰ q₀} f(p₀ + q₀, p̄) g(p₀, e^{−y⁰/κ} p̄)
//! ```
//!
//! on polynomials. `f` is Taylor-expanded in `q₀`; the `q₀^k` moment yields a
//! `k`-th derivative of a delta at `y⁰ = 0`, which is then paired with the
//! exponential dilation of the spatial part of `g`. This path shares no code
//! with the normal-ordering product.

use super::monomial::Monomial;
use super::pbw::PbwElement;
use crate::error::Result;
use crate::scalar::Scalar;

/// `∫ dy dq/2π e^{−iyq} q^k h(y) = i^k (−1)^k h^{(k)}(0)`, for
/// `h(y) = e^{−r y}` so that `h^{(k)}(0) = (−r)^k`.
fn delta_moment(k: u32, rate: &Scalar) -> Scalar {
    let sign = if k.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
    Scalar::i().pow(k) * sign * (-rate).pow(k)
}

/// `m! / (m − k)!`
fn falling_factorial(m: u32, k: u32) -> Scalar {
    (0..k).fold(Scalar::one(), |acc, t| acc * Scalar::from_int(i64::from(m - t)))
}

fn factorial(k: u32) -> Scalar {
    falling_factorial(k, k)
}

pub fn integral_star_oracle(f: &PbwElement, g: &PbwElement) -> Result<PbwElement> {
    f.check_compatible(g)?;
    let inv_kappa = f.kappa().inv().expect("kappa nonzero");
    let mut out = f.zero_like();
    for (a, x) in f.terms() {
        for (b, y) in g.terms() {
            let rate = Scalar::from_int(i64::from(b.spatial_degree())) * &inv_kappa;
            let spatial: Vec<u32> = a.spatial().iter().zip(b.spatial()).map(|(s, t)| s + t).collect();
            let m = a.time();
            for k in 0..=m {
                // (1/k!) ∂^k_{p₀} p₀^m = C(m,k) p₀^{m−k}
                let taylor = falling_factorial(m, k) / factorial(k);
                let c = x * y * taylor * delta_moment(k, &rate);
                out.add_term(Monomial::new(spatial.clone(), m - k + b.time()), c);
            }
        }
    }
    Ok(out)
}
