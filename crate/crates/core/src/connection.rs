//! Linear connections on restricted derivations `Z(A) ⊗ span{p_μ}` and their
//! curvature, both as an operator and in components.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, format_vector, Vector};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::tangent::{structure_constant, ActionAssignment, LocalDerivation};

/// `Γ^λ_{μν}` stored as `gamma[μ][ν][λ]`, every entry central.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionCoefficients {
    gamma: Vec<Vec<Vec<Vector>>>,
}

impl ConnectionCoefficients {
    pub fn new(action: &ActionAssignment, gamma: Vec<Vec<Vec<Vector>>>) -> Result<Self> {
        let r = action.rank();
        let alg = action.algebra();
        if gamma.len() != r || gamma.iter().any(|g| g.len() != r || g.iter().any(|h| h.len() != r)) {
            return Err(Error::InvalidArgument(format!("connection coefficients must be a {r}x{r}x{r} grid")));
        }
        for (mu, g) in gamma.iter().enumerate() {
            for (nu, h) in g.iter().enumerate() {
                for (lambda, z) in h.iter().enumerate() {
                    alg.check_element(z)?;
                    if let Some(w) = alg.centrality_witness(z) {
                        return Err(Error::NonCentral { witness: format!("Γ^{lambda}_{{{mu}{nu}}}: {w}") });
                    }
                }
            }
        }
        Ok(ConnectionCoefficients { gamma })
    }

    /// `Γ^λ_{μν} = f(μ, ν, λ) · 1`.
    pub fn scalar(action: &ActionAssignment, f: impl Fn(usize, usize, usize) -> Scalar) -> Result<Self> {
        let unit = action.algebra().unit().ok_or_else(|| Error::InvalidArgument("algebra has no unit".into()))?;
        let r = action.rank();
        let gamma = (0..r)
            .map(|mu| (0..r).map(|nu| (0..r).map(|l| linalg::scale(&f(mu, nu, l), unit)).collect()).collect())
            .collect();
        Self::new(action, gamma)
    }

    pub fn zero(action: &ActionAssignment) -> Self {
        let r = action.rank();
        ConnectionCoefficients { gamma: vec![vec![vec![action.algebra().zero(); r]; r]; r] }
    }

    /// Random central entries with `Γ* = −Γ`.
    pub fn random_anti_hermitian<R: Rng>(rng: &mut R, action: &ActionAssignment) -> Self {
        let alg = action.algebra();
        let center = alg.center();
        let r = action.rank();
        let mut entry = || {
            let mut c = alg.zero();
            for b in center.basis() {
                linalg::axpy(&mut c, &Scalar::complex(rng.gen_range(-3..=3), rng.gen_range(-3..=3)), b);
            }
            linalg::sub(&c, &alg.star(&c))
        };
        let gamma = (0..r).map(|_| (0..r).map(|_| (0..r).map(|_| entry()).collect()).collect()).collect();
        ConnectionCoefficients { gamma }
    }

    pub fn get(&self, mu: usize, nu: usize, lambda: usize) -> &Vector {
        &self.gamma[mu][nu][lambda]
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }
}

/// `R_{μνλ}^τ` stored as `r[μ][ν][λ][τ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureTensor {
    pub r: Vec<Vec<Vec<Vec<Vector>>>>,
}

impl CurvatureTensor {
    pub fn get(&self, mu: usize, nu: usize, lambda: usize, tau: usize) -> &Vector {
        &self.r[mu][nu][lambda][tau]
    }

    /// First `(μ, ν, λ, τ)` with `R_{μνλ}^τ ≠ −R_{νμλ}^τ`.
    pub fn antisymmetry_witness(&self) -> Option<String> {
        let n = self.r.len();
        for mu in 0..n {
            for nu in 0..n {
                for lambda in 0..n {
                    for tau in 0..n {
                        if self.r[mu][nu][lambda][tau] != linalg::neg(&self.r[nu][mu][lambda][tau]) {
                            return Some(format!("R_{{{mu}{nu}{lambda}}}^{tau}"));
                        }
                    }
                }
            }
        }
        None
    }
}

/// `∇_X Y = X^μ Y^ν Γ^λ_{μν} p_λ + X^μ (p_μ ▷ Y^ν) p_ν`.
pub fn nabla(action: &ActionAssignment, gamma: &ConnectionCoefficients, x: &LocalDerivation, y: &LocalDerivation) -> LocalDerivation {
    let alg = action.algebra();
    let r = action.rank();
    let mut coeffs = vec![alg.zero(); r];
    for (lambda, out) in coeffs.iter_mut().enumerate() {
        for mu in 0..r {
            if linalg::is_zero_vector(&x.coeffs[mu]) {
                continue;
            }
            for nu in 0..r {
                let t = alg.mul_all(&[&x.coeffs[mu], &y.coeffs[nu], gamma.get(mu, nu, lambda)]);
                *out = linalg::add(out, &t);
            }
            let t = alg.mul(&x.coeffs[mu], &action.act(mu, &y.coeffs[lambda]));
            *out = linalg::add(out, &t);
        }
    }
    LocalDerivation { coeffs }
}

fn scale_derivation(action: &ActionAssignment, z: &[Scalar], x: &LocalDerivation, left: bool) -> LocalDerivation {
    let alg = action.algebra();
    LocalDerivation { coeffs: x.coeffs.iter().map(|c| if left { alg.mul(z, c) } else { alg.mul(c, z) }).collect() }
}

fn add_derivations(x: &LocalDerivation, y: &LocalDerivation) -> LocalDerivation {
    LocalDerivation { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| linalg::add(a, b)).collect() }
}

fn sub_derivations(x: &LocalDerivation, y: &LocalDerivation) -> LocalDerivation {
    LocalDerivation { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| linalg::sub(a, b)).collect() }
}

/// `X*` with coefficients `−(X^μ)*`.
pub fn involution(action: &ActionAssignment, x: &LocalDerivation) -> LocalDerivation {
    let alg = action.algebra();
    LocalDerivation { coeffs: x.coeffs.iter().map(|c| linalg::neg(&alg.star(c))).collect() }
}

/// One sample for the axiom checks: derivations `X`, `Y`, `Z` and a central `f`.
#[derive(Debug, Clone)]
pub struct AxiomSample {
    pub x: LocalDerivation,
    pub y: LocalDerivation,
    pub z: LocalDerivation,
    pub f: Vector,
}

impl AxiomSample {
    pub fn random<R: Rng>(rng: &mut R, action: &ActionAssignment) -> Result<Self> {
        let alg = action.algebra();
        let center = alg.center();
        let mut central = || {
            let mut c = alg.zero();
            for b in center.basis() {
                linalg::axpy(&mut c, &Scalar::complex(rng.gen_range(-3..=3), rng.gen_range(-3..=3)), b);
            }
            c
        };
        let r = action.rank();
        let x = action.derivation((0..r).map(|_| central()).collect())?;
        let y = action.derivation((0..r).map(|_| central()).collect())?;
        let z = action.derivation((0..r).map(|_| central()).collect())?;
        let f = central();
        Ok(AxiomSample { x, y, z, f })
    }
}

/// Linearity in both slots, the left and right Leibniz rules, hermiticity
/// `(∇_X Y)* = ∇_{X*}(Y*)` and anti-hermiticity of every `Γ` entry.
pub fn verify_connection_axioms(action: &ActionAssignment, gamma: &ConnectionCoefficients, samples: &[AxiomSample]) -> Report {
    let alg = action.algebra();
    let mut report = Report::new();
    let nab = |x: &LocalDerivation, y: &LocalDerivation| nabla(action, gamma, x, y);
    let first = |f: &dyn Fn(&AxiomSample) -> (LocalDerivation, LocalDerivation)| {
        samples.iter().enumerate().find_map(|(i, s)| {
            let (l, r) = f(s);
            (l != r).then(|| format!("sample {i}: {l} vs {r}"))
        })
    };
    report.record(
        "linearity-first",
        first(&|s| {
            let lhs = nab(&add_derivations(&s.x, &scale_derivation(action, &s.f, &s.y, true)), &s.z);
            let rhs = add_derivations(&nab(&s.x, &s.z), &scale_derivation(action, &s.f, &nab(&s.y, &s.z), true));
            (lhs, rhs)
        }),
    );
    report.record(
        "linearity-second",
        first(&|s| (nab(&s.x, &add_derivations(&s.y, &s.z)), add_derivations(&nab(&s.x, &s.y), &nab(&s.x, &s.z)))),
    );
    report.record(
        "leibniz-left",
        first(&|s| {
            let xf = action.apply(&s.x, &s.f);
            let lhs = nab(&s.x, &scale_derivation(action, &s.f, &s.y, true));
            let rhs = add_derivations(&scale_derivation(action, &s.f, &nab(&s.x, &s.y), true), &scale_derivation(action, &xf, &s.y, true));
            (lhs, rhs)
        }),
    );
    report.record(
        "leibniz-right",
        first(&|s| {
            let xf = action.apply(&s.x, &s.f);
            let lhs = nab(&s.x, &scale_derivation(action, &s.f, &s.y, false));
            let rhs = add_derivations(&scale_derivation(action, &s.f, &nab(&s.x, &s.y), false), &scale_derivation(action, &xf, &s.y, false));
            (lhs, rhs)
        }),
    );
    report.record(
        "hermiticity",
        first(&|s| (involution(action, &nab(&s.x, &s.y)), nab(&involution(action, &s.x), &involution(action, &s.y)))),
    );
    let r = gamma.rank();
    let mut witness = None;
    'outer: for mu in 0..r {
        for nu in 0..r {
            for lambda in 0..r {
                let g = gamma.get(mu, nu, lambda);
                if alg.star(g) != linalg::neg(g) {
                    witness = Some(format!("Γ^{lambda}_{{{mu}{nu}}} = {} is not anti-hermitian", format_vector(g)));
                    break 'outer;
                }
            }
        }
    }
    report.record("anti-hermitian", witness);
    report
}

/// `R_{μνλ}^τ = p_μ▷Γ^τ_{νλ} − p_ν▷Γ^τ_{μλ} + Γ^σ_{νλ}Γ^τ_{μσ} − Γ^σ_{μλ}Γ^τ_{νσ} − C^σ_{μν}Γ^τ_{σλ}`.
pub fn curvature_components(action: &ActionAssignment, gamma: &ConnectionCoefficients) -> CurvatureTensor {
    let alg = action.algebra();
    let n = action.rank();
    let kappa = action.kappa();
    let mut r = vec![vec![vec![vec![alg.zero(); n]; n]; n]; n];
    for mu in 0..n {
        for nu in 0..n {
            for lambda in 0..n {
                for tau in 0..n {
                    let mut v = linalg::sub(&action.act(mu, gamma.get(nu, lambda, tau)), &action.act(nu, gamma.get(mu, lambda, tau)));
                    for sigma in 0..n {
                        v = linalg::add(&v, &alg.mul(gamma.get(nu, lambda, sigma), gamma.get(mu, sigma, tau)));
                        v = linalg::sub(&v, &alg.mul(gamma.get(mu, lambda, sigma), gamma.get(nu, sigma, tau)));
                        let c = structure_constant(mu, nu, sigma, kappa);
                        if !c.is_zero() {
                            v = linalg::sub(&v, &linalg::scale(&c, gamma.get(sigma, lambda, tau)));
                        }
                    }
                    r[mu][nu][lambda][tau] = v;
                }
            }
        }
    }
    CurvatureTensor { r }
}

/// `R(X, Y)Z = ∇_X ∇_Y Z − ∇_Y ∇_X Z − ∇_{[X,Y]} Z`.
pub fn curvature_operator(
    action: &ActionAssignment,
    gamma: &ConnectionCoefficients,
    x: &LocalDerivation,
    y: &LocalDerivation,
    z: &LocalDerivation,
) -> LocalDerivation {
    let xy = nabla(action, gamma, x, &nabla(action, gamma, y, z));
    let yx = nabla(action, gamma, y, &nabla(action, gamma, x, z));
    let br = nabla(action, gamma, &action.bracket(x, y), z);
    sub_derivations(&sub_derivations(&xy, &yx), &br)
}

/// Operator and component curvature on every basis triple, plus antisymmetry.
pub fn curvature_cross_check(action: &ActionAssignment, gamma: &ConnectionCoefficients) -> Result<Report> {
    let n = action.rank();
    let comps = curvature_components(action, gamma);
    let basis = (0..n).map(|mu| action.basis_derivation(mu)).collect::<Result<Vec<_>>>()?;
    let mut witness = None;
    'outer: for mu in 0..n {
        for nu in 0..n {
            for lambda in 0..n {
                let op = curvature_operator(action, gamma, &basis[mu], &basis[nu], &basis[lambda]);
                let expected = LocalDerivation { coeffs: comps.r[mu][nu][lambda].clone() };
                if op != expected {
                    witness = Some(format!("R(p{mu}, p{nu})p{lambda}: operator {op}, components {expected}"));
                    break 'outer;
                }
            }
        }
    }
    let mut report = Report::new();
    report.record("curvature", witness);
    report.record("curvature-antisymmetry", comps.antisymmetry_witness());
    Ok(report)
}
