//! Acceptance suite: twelve criteria, one PASS/FAIL line each. Exact arithmetic
//! throughout, so every comparison is equality.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qtangent::connection::{curvature_components, curvature_cross_check, verify_connection_axioms, AxiomSample, ConnectionCoefficients};
use qtangent::covering::{block_ideal, vanishing_ideal, Covering};
use qtangent::forms::{d_locality_check, dd_witness, wedge_compat_check, DerivationBasis, FormN};
use qtangent::kappa::{hopf_axiom_check, integral_star_oracle, module_algebra_sides, PbwElement, PoincareGenerator};
use qtangent::partition::{
    functional, product_partition, random_zeta_partition, reconstruction_check, verify_adapted, verify_adapted_closure,
    verify_partition, Partition,
};
use qtangent::tangent::{ActionAssignment, Atlas, LocalDerivation};
use qtangent::{linalg, Error, Report, Scalar, StarAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_report(label: &str, r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{label}: {} {}", c.id, c.witness.clone().unwrap_or_default())),
    }
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn m23() -> StarAlgebra {
    StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(3).unwrap()).unwrap()
}

fn block_covering(alg: &StarAlgebra) -> Covering {
    Covering::new(alg, &[block_ideal(alg, &[1]).unwrap(), block_ideal(alg, &[0]).unwrap()]).unwrap()
}

fn block_units(alg: &StarAlgebra, split: usize) -> Vec<Vec<Scalar>> {
    let mut zetas = vec![alg.zero(), alg.zero()];
    for (i, v) in alg.unit().unwrap().iter().enumerate() {
        zetas[usize::from(i >= split)][i] = v.clone();
    }
    zetas
}

fn block_atlas(kappa: Scalar) -> Atlas {
    let alg = m23();
    let cov = block_covering(&alg);
    let p = Partition::from_zetas(&alg, &block_units(&alg, 4)).unwrap();
    let acts = vec![
        ActionAssignment::canonical_on(&cov.chart(0).unwrap().algebra, 2, 1, kappa.clone()).unwrap(),
        ActionAssignment::canonical_on(&cov.chart(1).unwrap().algebra, 3, 1, kappa).unwrap(),
    ];
    Atlas::new(cov, p, acts).unwrap()
}

fn four_points() -> (StarAlgebra, Partition, Covering) {
    let f = StarAlgebra::functions(4).unwrap();
    let z1 = vec![Scalar::one(), Scalar::one(), Scalar::ratio(3, 5), Scalar::zero()];
    let z2 = vec![Scalar::zero(), Scalar::zero(), Scalar::ratio(4, 5), Scalar::one()];
    let p = Partition::from_zetas(&f, &[z1, z2]).unwrap();
    let cov = Covering::new(&f, &[vanishing_ideal(&f, &[0, 1, 2]).unwrap(), vanishing_ideal(&f, &[2, 3]).unwrap()]).unwrap();
    (f, p, cov)
}

fn random_central<R: Rng>(rng: &mut R, alg: &StarAlgebra) -> Vec<Scalar> {
    let mut v = alg.zero();
    for b in alg.center().basis() {
        linalg::axpy(&mut v, &Scalar::complex(rng.gen_range(-4..=4), rng.gen_range(-4..=4)), b);
    }
    v
}

fn hopf_axioms() -> Outcome {
    let start = Instant::now();
    let r = hopf_axiom_check(3, &Scalar::one(), 4);
    let elapsed = start.elapsed();
    ensure_report("hopf", &r)?;
    ensure(elapsed < Duration::from_secs(30), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("{} identities in {:.2?}", r.len(), elapsed))
}

fn commutators() -> Outcome {
    let mut count = 0;
    for d in 1..=3 {
        for kappa in [Scalar::one(), Scalar::from_int(2), Scalar::ratio(1, 2)] {
            let p0 = PbwElement::generator(d, kappa.clone(), 0);
            for j in 1..=d {
                let pj = PbwElement::generator(d, kappa.clone(), j);
                let c = ok(p0.commutator(&pj))?;
                let expected = pj.scale(&(Scalar::i() / &kappa));
                ensure(c == expected, || format!("[p0, p{j}] = {c:?} for d={d}, κ={kappa}"))?;
                count += 1;
                for k in 1..=d {
                    let pk = PbwElement::generator(d, kappa.clone(), k);
                    let c = ok(pj.commutator(&pk))?;
                    ensure(c.is_zero(), || format!("[p{j}, p{k}] ≠ 0 for d={d}, κ={kappa}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} commutators"))
}

fn oracle() -> Outcome {
    let kappas = [Scalar::one(), Scalar::from_int(2), Scalar::ratio(1, 2)];
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = 1 + (seed as usize % 3);
        let kappa = kappas[seed as usize % 3].clone();
        let f = PbwElement::random(&mut rng, d, kappa.clone(), 4, 3);
        let g = PbwElement::random(&mut rng, d, kappa, 4, 3);
        let a = ok(f.star(&g))?;
        let b = ok(integral_star_oracle(&f, &g))?;
        ensure(a == b, || format!("seed {seed}: star and oracle differ"))?;
    }
    Ok("50 pairs".into())
}

fn module_algebra() -> Outcome {
    use PoincareGenerator::*;
    let mut hs = vec![P(0), E];
    for j in 1..=3 {
        hs.extend([P(j), M(j), N(j)]);
    }
    for seed in 0..25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let kappa = [Scalar::one(), Scalar::from_int(2), Scalar::ratio(1, 2)][seed as usize % 3].clone();
        let f = PbwElement::random(&mut rng, 3, kappa.clone(), 2, 3);
        let g = PbwElement::random(&mut rng, 3, kappa, 2, 3);
        for &h in &hs {
            let (lhs, rhs) = ok(module_algebra_sides(h, &f, &g))?;
            ensure(lhs == rhs, || format!("seed {seed}, {h}: sides differ"))?;
        }
    }
    Ok(format!("25 pairs × {} generators", hs.len()))
}

fn diagonal(alg: &StarAlgebra, n: usize) -> Partition {
    let zetas: Vec<Vec<Scalar>> = (0..n).map(|m| alg.basis(m * n + m)).collect();
    Partition::from_zetas(alg, &zetas).unwrap()
}

fn matrix_partition() -> Outcome {
    let m4 = StarAlgebra::matrix(4).unwrap();
    let p = diagonal(&m4, 4);
    ensure_report("M_4 left", &verify_partition(&m4, &p, false))?;
    ensure_report("M_4 right", &verify_partition(&m4, &p, true))?;
    let moyal = StarAlgebra::moyal(8).unwrap();
    let q = diagonal(&moyal, 8);
    ensure(moyal.labels()[9] == "f_11", || format!("unexpected Moyal label {}", moyal.labels()[9]))?;
    ensure_report("Moyal left", &verify_partition(&moyal, &q, false))?;
    ensure_report("Moyal right", &verify_partition(&moyal, &q, true))?;
    Ok("M_4 and Moyal N=8".into())
}

fn product_partitions() -> Outcome {
    let alg = m23();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = ok(random_zeta_partition(&alg, 2, &mut rng))?;
    let q = ok(random_zeta_partition(&alg, 2, &mut rng))?;
    ensure_report("P", &verify_partition(&alg, &p, false))?;
    ensure_report("Q", &verify_partition(&alg, &q, false))?;
    let pq = product_partition(&alg, &p, &q);
    ensure_report("P·Q", &verify_partition(&alg, &pq, false))?;
    let cov = block_covering(&alg);
    let prod_cov = ok(cov.product(&cov))?;
    let adapted = ok(verify_adapted(&pq, &prod_cov))?;
    ensure_report("adapted", &adapted)?;
    ensure(adapted.checks.iter().all(|c| c.id.ends_with("vacuous")), || "adapted check was not vacuous".into())?;
    Ok(format!("{} product elements, {} vacuous adapted records", pq.len(), adapted.len()))
}

fn covering_laws() -> Outcome {
    let alg = m23();
    let block = block_covering(&alg);
    ensure_report("block", &block.verify())?;
    let (_, _, fcov) = four_points();
    ensure_report("functions", &fcov.verify())?;
    let f5 = StarAlgebra::functions(5).unwrap();
    let three = ok(Covering::new(
        &f5,
        &[vanishing_ideal(&f5, &[0, 1]).unwrap(), vanishing_ideal(&f5, &[1, 2, 3]).unwrap(), vanishing_ideal(&f5, &[3, 4]).unwrap()],
    ))?;
    ensure_report("functions, three charts", &three.verify())?;
    Ok(format!("{} checks", block.verify().len() + fcov.verify().len() + three.verify().len()))
}

fn gluing() -> Outcome {
    let atlas = block_atlas(Scalar::from_int(2));
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
        let locals = (0..atlas.len())
            .map(|alpha| {
                let act = atlas.action(alpha);
                act.derivation((0..act.rank()).map(|_| random_central(&mut rng, act.algebra())).collect())
            })
            .collect::<Result<Vec<LocalDerivation>, Error>>();
        let locals = ok(locals)?;
        let g = ok(atlas.glue(&locals))?;
        if let Some(w) = atlas.leibniz_witness(&g) {
            return Err(format!("seed {seed}: Leibniz fails {w}"));
        }
        let back = ok(atlas.decompose(&g.operator))?;
        ensure(back == locals, || format!("seed {seed}: decompose∘glue differs"))?;
    }
    Ok("10 seeded glued derivations".into())
}

fn differential_calculus() -> Outcome {
    let act = ok(ActionAssignment::canonical(3, 2, Scalar::from_int(2)))?;
    let basis = ok(DerivationBasis::from_action(&act))?;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
        let degree = (seed % 2) as usize;
        let f = FormN::random(&mut rng, act.algebra(), degree, 3, false);
        if let Some(w) = ok(dd_witness(&basis, &f))? {
            return Err(format!("seed {seed}: {w}"));
        }
    }
    let atlas = block_atlas(Scalar::from_int(2));
    let alg = atlas.base().clone();
    for seed in 0..6u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(950 + seed);
        let (a, b) = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 1), (2, 2)][seed as usize];
        let rho = FormN::random(&mut rng, &alg, a, 4, false);
        let eta = FormN::random(&mut rng, &alg, b, 4, false);
        for alpha in 0..atlas.len() {
            ensure_report("wedge", &ok(wedge_compat_check(&atlas, &rho, &eta, alpha))?)?;
            ensure_report("locality", &ok(d_locality_check(&atlas, &rho, alpha))?)?;
        }
    }
    Ok("20 forms with d∘d = 0; 6 block-model pairs".into())
}

fn curvature() -> Outcome {
    let m22 = StarAlgebra::direct_sum(&StarAlgebra::matrix(2).unwrap(), &StarAlgebra::matrix(2).unwrap()).unwrap();
    let models = [
        ok(ActionAssignment::block_canonical(&m22, 1, Scalar::from_int(2)))?,
        ok(ActionAssignment::canonical(3, 2, Scalar::ratio(1, 2)))?,
    ];
    let mut triples = 0;
    for (k, act) in models.iter().enumerate() {
        for seed in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 * k as u64 + seed);
            let g = ConnectionCoefficients::random_anti_hermitian(&mut rng, act);
            ensure_report(&format!("d={} seed {seed}", act.d()), &ok(curvature_cross_check(act, &g))?)?;
            triples += act.rank().pow(3);
        }
    }
    let act = ok(ActionAssignment::canonical(2, 1, Scalar::one()))?;
    let g = ok(ConnectionCoefficients::scalar(&act, |_, _, _| Scalar::i()))?;
    let r = curvature_components(&act, &g);
    let unit = act.algebra().unit().unwrap();
    for l in 0..2 {
        for t in 0..2 {
            ensure(r.get(0, 1, l, t) == unit, || format!("R_{{01{l}}}^{t} = {:?}", r.get(0, 1, l, t)))?;
            ensure(r.get(1, 0, l, t) == &linalg::neg(unit), || format!("R_{{10{l}}}^{t} wrong"))?;
        }
    }
    ensure_report("Γ = i", &ok(curvature_cross_check(&act, &g))?)?;
    Ok(format!("{triples} basis triples; Γ = i gives R_01 = 1"))
}

fn negative_controls() -> Outcome {
    let act = ok(ActionAssignment::canonical(2, 1, Scalar::one()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<AxiomSample> = (0..2).map(|_| AxiomSample::random(&mut rng, &act)).collect::<Result<_, _>>().map_err(|e| format!("{e:?}"))?;
    let real = ok(ConnectionCoefficients::scalar(&act, |_, _, _| Scalar::one()))?;
    let r = verify_connection_axioms(&act, &real, &samples);
    let c = r.get("anti-hermitian").ok_or("missing anti-hermitian record")?;
    ensure(!c.passed && c.witness.is_some(), || "real Γ was accepted".into())?;
    let alg = act.algebra();
    let x = LocalDerivation::unchecked(vec![alg.basis(0), alg.zero()]);
    let y = LocalDerivation::unchecked(vec![alg.zero(), alg.basis(1)]);
    ensure(act.bracket_mismatch(&x, &y).is_some(), || "non-central coefficients matched the bracket formula".into())?;
    ensure(matches!(act.derivation(x.coeffs.clone()), Err(Error::NonCentral { .. })), || "non-central coefficients accepted".into())?;
    let (f, _, _) = four_points();
    let cov = ok(Covering::new(&f, &[vanishing_ideal(&f, &[0, 1]).unwrap(), vanishing_ideal(&f, &[2, 3]).unwrap()]))?;
    let bad = ok(Partition::from_zetas(&f, &[f.unit().unwrap().clone(), f.zero()]))?;
    ensure(matches!(functional(&bad, &cov, 0), Err(Error::IllDefined { chart: 0, .. })), || "ill-defined functional accepted".into())?;
    Ok("three controls rejected".into())
}

fn commutative_recovery() -> Outcome {
    let (_, p, cov) = four_points();
    ensure_report("reconstruction", &ok(reconstruction_check(&p, &cov))?)?;
    let literal = ok(verify_adapted(&p, &cov))?;
    let fail = literal.failures().next().ok_or("literal adaptedness unexpectedly passed")?;
    ensure(fail.id == "adapted[a0=0,b=0,a=1,phi=0]", || format!("unexpected failing record {}", fail.id))?;
    let w = fail.witness.clone().unwrap_or_default();
    ensure(w.ends_with("9/25"), || format!("unexpected witness {w}"))?;
    ensure_report("closure", &ok(verify_adapted_closure(&p, &cov))?)?;
    Ok(format!("literal fails at {} ({w}); closure passes", fail.id))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("hopf-axioms", hopf_axioms),
        ("commutators", commutators),
        ("oracle-equivalence", oracle),
        ("module-algebra", module_algebra),
        ("matrix-partition", matrix_partition),
        ("product-partition", product_partitions),
        ("covering-laws", covering_laws),
        ("gluing", gluing),
        ("differential-calculus", differential_calculus),
        ("curvature", curvature),
        ("negative-controls", negative_controls),
        ("commutative-recovery", commutative_recovery),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({ms} ms): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
