//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion followed by the
//! individual checks, and exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toral_core::action::ZdAction;
use toral_core::centralizer::{
    affine_report, commutant_z_basis, free_index, is_maximal_cartan, noncommuting_pair, unit_search, MaximalityVerdict,
};
use toral_core::classify::{
    compare, compare_entropy, conjugate_over_q, cyclicity, ideal_class_comparison, ideal_equivalent, is_square_mod2,
    lm_ideal_of_matrix, CompareOptions, Cyclicity, CyclicityCertificate, IdealEquivalence,
};
use toral_core::corpus::Corpus;
use toral_core::linalg::{hnf, snf};
use toral_core::spectra::{all_roots_real, entropy, is_hyperbolic, polynomial_is_ergodic};
use toral_core::{Execution, IntMatrix, IntPoly, RatMatrix};

const UNIT_BOX: i64 = 50;
const ENTROPY_TOL: f64 = 1e-8;
const HOMOGENEITY_TOL: f64 = 1e-9;

#[derive(Default)]
struct Outcome {
    checks: Vec<(bool, String)>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(ok, _)| *ok)
    }
}

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64(rows)
}

fn action(gens: Vec<IntMatrix>) -> ZdAction {
    ZdAction::new(gens).expect("valid action")
}

fn corpus() -> Corpus {
    Corpus::bundled().expect("bundled corpus")
}

fn entry(c: &Corpus, name: &str) -> ZdAction {
    c.get(name).unwrap_or_else(|| panic!("missing {name}")).to_action().expect("valid")
}

/// Counts `x ∈ (D⁻¹Z/Z)^n` with `x(G_i − I) ∈ Z^n`, `D = min |det(G_i − I)|`.
fn brute_force_fixed_points(a: &ZdAction) -> u64 {
    let n = a.dim();
    let id = IntMatrix::identity(n);
    let shifted: Vec<IntMatrix> = a.generators().iter().map(|g| g - &id).collect();
    let d = shifted
        .iter()
        .filter_map(|s| s.det().ok().filter(|x| !x.is_zero()).map(|x| x.abs()))
        .min()
        .expect("some generator without eigenvalue 1");
    let d: i64 = d.try_into().expect("small");
    let total = (d as u64).pow(n as u32);
    let mut count = 0;
    for idx in 0..total {
        let mut x = vec![0i64; n];
        let mut r = idx;
        for slot in x.iter_mut() {
            *slot = (r % d as u64) as i64;
            r /= d as u64;
        }
        let fixed = shifted.iter().all(|s| {
            (0..n).all(|j| {
                let v: BigInt = (0..n).map(|i| BigInt::from(x[i]) * s.get(i, j)).sum();
                (v % BigInt::from(d)).is_zero()
            })
        });
        if fixed {
            count += 1;
        }
    }
    count
}

fn fix_order(a: &ZdAction) -> String {
    a.fixed_points().map(|f| f.order.to_string()).unwrap_or_else(|e| e.to_string())
}

fn maximal(a: &ZdAction) -> Option<bool> {
    match is_maximal_cartan(a, UNIT_BOX, Execution::default()) {
        MaximalityVerdict::Maximal { .. } => Some(true),
        MaximalityVerdict::NotMaximal { .. } => Some(false),
        MaximalityVerdict::NotVerified { .. } => None,
    }
}

fn rat(x: &IntMatrix) -> RatMatrix {
    RatMatrix::from(x)
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::default();
    let a = m(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]]);
    let b = m(&[&[2, -4, -1], &[1, -4, -1], &[1, -5, -1]]);
    let a2 = m(&[&[1, 2, -1], &[-1, -2, 2], &[2, 5, -2]]);
    let b2 = m(&[&[1, -1, -1], &[-1, -2, -1], &[-1, -4, -2]]);
    let v = m(&[&[2, -2, -1], &[0, -3, 0], &[1, -4, -2]]);
    let id = IntMatrix::identity(3);
    let rhs = &(&id.scale(&BigInt::from(2)) - &a.scale(&BigInt::from(4))) - &(&a * &a);
    o.check(b == rhs, "B == 2I - 4A - A^2");
    let vi = rat(&v).inverse().expect("invertible");
    let conj = |x: &IntMatrix| rat(&v).checked_mul(&rat(x)).and_then(|p| p.checked_mul(&vi)).expect("shapes");
    o.check(conj(&a) == rat(&a2), "V A V^-1 == A'");
    o.check(conj(&b) == rat(&b2), "V B V^-1 == B'");
    let f = a.charpoly().expect("square");
    o.check(f == IntPoly::from_i64(&[1, -6, 3, 1]), format!("charpoly(A) = {f}"));
    for (name, x) in [("A", &a), ("B", &b), ("A'", &a2), ("B'", &b2)] {
        let d = x.det().expect("square");
        o.check(d.abs().is_one(), format!("det {name} = {d}"));
    }
    o
}

/// `det(m, mW, mW²)` evaluated directly.
fn cubic_form_value(w: &IntMatrix, x: &[i64; 3]) -> BigInt {
    let row = IntMatrix::from_rows(&[x.to_vec()]).expect("row");
    let r1 = &row * w;
    let r2 = &r1 * w;
    let stacked = IntMatrix::vstack(&[&row, &r1, &r2]).expect("3 x 3");
    stacked.det().expect("square")
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::default();
    let c = corpus();
    let a = entry(&c, "example2a_min");
    let a2 = entry(&c, "example2a_max");
    match cyclicity(&a, Execution::default()) {
        Cyclicity::Cyclic { witness } => {
            // independent route: the orbit of the witness under A alone already spans Z^3
            let w: [i64; 3] = witness.clone().try_into().expect("dim 3");
            let d = cubic_form_value(a.generator(0), &w);
            o.check(d.abs().is_one(), format!("alpha cyclic, witness {witness:?}, det(w, wA, wA^2) = {d}"));
        }
        other => o.check(false, format!("alpha cyclic: {other:?}")),
    }
    match cyclicity(&a2, Execution::default()) {
        Cyclicity::NonCyclic { certificate: CyclicityCertificate::CubicForm { prime, coefficients, witness } } => {
            let coeffs: Vec<BigInt> = coefficients.iter().map(|s| s.parse().expect("integer")).collect();
            let nonzero: Vec<BigInt> = coeffs.iter().filter(|x| !x.is_zero()).cloned().collect();
            let shown: Vec<BigInt> = [3, 18, -9, -9, 27, 3, -9, 3].iter().map(|&x| BigInt::from(x)).collect();
            let neg: Vec<BigInt> = shown.iter().map(|x| -x).collect();
            o.check(prime == 3, format!("alpha' certificate prime {prime}"));
            o.check(
                nonzero == shown || nonzero == neg,
                format!("form coefficients {coefficients:?} match +-(3, 18, -9, -9, 27, 3, -9, 3)"),
            );
            // second route: the stored coefficients reproduce det(m, mW, mW^2) pointwise
            let w = a2.rho(&witness);
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let mut agree = true;
            for _ in 0..50 {
                let x: [i64; 3] = [rng.gen_range(-9..=9), rng.gen_range(-9..=9), rng.gen_range(-9..=9)];
                let mons = [
                    x[0] * x[0] * x[0],
                    x[0] * x[0] * x[1],
                    x[0] * x[0] * x[2],
                    x[0] * x[1] * x[1],
                    x[0] * x[1] * x[2],
                    x[0] * x[2] * x[2],
                    x[1] * x[1] * x[1],
                    x[1] * x[1] * x[2],
                    x[1] * x[2] * x[2],
                    x[2] * x[2] * x[2],
                ];
                let poly: BigInt = coeffs.iter().zip(mons).map(|(c, mm)| c * BigInt::from(mm)).sum();
                agree &= poly == cubic_form_value(&w, &x);
            }
            o.check(agree, "coefficients agree with direct determinants at 50 random points");
        }
        other => o.check(false, format!("alpha' non-cyclic with mod-3 form: {other:?}")),
    }
    o.check(maximal(&a) == Some(true), format!("alpha maximal (unit box {UNIT_BOX}): {:?}", maximal(&a)));
    o.check(maximal(&a2) == Some(false), format!("alpha' not maximal: {:?}", maximal(&a2)));
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::default();
    let a = action(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, -11, 7]]), m(&[&[-2, 1, 0], &[0, -2, 1], &[1, -11, 5]])]);
    let a2 = action(vec![m(&[&[0, 1, 0], &[-1, 0, 2], &[-3, -5, 7]]), m(&[&[-2, 1, 0], &[-1, -2, 2], &[-3, -5, 5]])]);
    let mm = m(&[&[0, -2, 1], &[-1, -5, 3], &[-2, -9, 6]]);
    o.check(*a2.generator(0) == &mm * &mm, "A' == M^2");
    // exhaustive oracle over all 512 matrices mod 2
    let target = a.generator(0).mod_reduce(&BigInt::from(2));
    let mut roots = 0;
    for bits in 0u32..512 {
        let entries: Vec<i64> = (0..9).map(|k| ((bits >> k) & 1) as i64).collect();
        let x = IntMatrix::from_rows(&[entries[0..3].to_vec(), entries[3..6].to_vec(), entries[6..9].to_vec()])
            .expect("3 x 3");
        if (&x * &x).mod_reduce(&BigInt::from(2)) == target {
            roots += 1;
        }
    }
    let lib = is_square_mod2(a.generator(0)).expect("3 x 3");
    o.check(roots == 0 && !lib, format!("A square mod 2: enumeration found {roots} roots, library says {lib}"));
    for (name, x, want) in [("alpha", &a, 2), ("alpha'", &a2, 4)] {
        let brute = brute_force_fixed_points(x);
        o.check(
            fix_order(x) == want.to_string() && brute == want,
            format!("|Fix({name})| = {} (brute force {brute}), expected {want}", fix_order(x)),
        );
    }
    for (name, x, want) in [("alpha", &a, "4"), ("alpha'", &a2, "16")] {
        let r = affine_report(x, UNIT_BOX, Execution::default()).expect("report");
        let got = r.affine_index.clone().unwrap_or_default();
        o.check(got == want, format!("[Z_Aff({name}) : {name}] = {got}, expected {want}"));
    }
    o
}

fn ideal_verdict(a: &ZdAction, b: &ZdAction) -> Option<bool> {
    ideal_class_comparison(a, b).as_ref().and_then(IdealEquivalence::as_bool)
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::default();
    let a = action(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, 8, 2]]), m(&[&[2, 1, 0], &[0, 2, 1], &[1, 8, 4]])]);
    // B' as constructed from the field data; the printed matrix has determinant 6
    let a2 = action(vec![m(&[&[-1, 2, 0], &[-1, 1, 1], &[-5, 9, 2]]), m(&[&[1, 2, 0], &[-1, 3, 1], &[-5, 9, 4]])]);
    let q = conjugate_over_q(&a, &a2);
    o.check(
        q.conjugator().is_some(),
        format!("rationally conjugate, conjugator {:?}", q.conjugator().map(|v| v.to_string())),
    );
    let iv = ideal_verdict(&a, &a2);
    o.check(iv == Some(false), format!("LM ideal classes inequivalent: {:?}", ideal_class_comparison(&a, &a2)));
    let (fa, fb) = (fix_order(&a), fix_order(&a2));
    let (ba, bb) = (brute_force_fixed_points(&a), brute_force_fixed_points(&a2));
    o.check(fa == "2" && fb == "1", format!("Fix orders {fa} vs {fb} (brute force {ba} vs {bb}), expected 2 vs 1"));
    for (name, x) in [("alpha", &a), ("alpha'", &a2)] {
        o.check(
            x.is_cartan() && maximal(x) == Some(true),
            format!("{name} maximal Cartan: cartan {}, maximal {:?}", x.is_cartan(), maximal(x)),
        );
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::default();
    let actions = [
        ("alpha", action(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[-1, 8, 2]]), m(&[&[2, 1, 0], &[0, 2, 1], &[-1, 8, 4]])])),
        (
            "alpha'",
            action(vec![m(&[&[-1, 2, 0], &[-1, 1, 1], &[-6, 9, 2]]), m(&[&[1, 2, 0], &[-1, 3, 1], &[-6, 9, 4]])]),
        ),
        (
            "alpha''",
            action(vec![m(&[&[-3, 4, 0], &[-3, 3, 1], &[-10, 11, 2]]), m(&[&[-1, 4, 0], &[-3, 5, 1], &[-10, 11, 4]])]),
        ),
    ];
    for i in 0..3 {
        for j in i + 1..3 {
            let (ni, a) = &actions[i];
            let (nj, b) = &actions[j];
            o.check(conjugate_over_q(a, b).is_conjugate(), format!("{ni} ~Q {nj}"));
            o.check(ideal_verdict(a, b) == Some(false), format!("ideal classes of {ni} and {nj} inequivalent"));
            let opts = CompareOptions { unit_box: 10, ..CompareOptions::default() };
            let r = compare(a, b, opts).expect("comparable");
            o.check(
                r.distinguishing_invariant.as_deref() == Some("ideal class"),
                format!("{ni} vs {nj} distinguished by {:?}", r.distinguishing_invariant),
            );
        }
    }
    for (name, a) in &actions {
        let brute = brute_force_fixed_points(a);
        o.check(fix_order(a) == "2" && brute == 2, format!("|Fix({name})| = {} (brute force {brute})", fix_order(a)));
        let r = affine_report(a, UNIT_BOX, Execution::default()).expect("report");
        o.check(r.structure == "Z^2 x Z/2 x Z/2", format!("Z_Aff({name}) = {}", r.structure));
    }
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::default();
    let c = corpus();
    let printed_min_a = m(&[&[0, -1, 0], &[1, 0, -1], &[1, 11, 1]]);
    let printed_min_b = m(&[&[0, 14, 5], &[5, 55, 19], &[19, 214, 74]]);
    let printed_max =
        [m(&[&[0, -1, 0], &[1, 0, -2], &[0, -6, -1]]), m(&[&[-5, 14, 10], &[-14, 55, 38], &[-30, 114, 79]])];
    let file = c.get("example3c_min").expect("entry");
    let data = file.field_data().expect("valid").expect("field block");
    let amin = data.construct("power_basis").expect("module");
    let amax = data.construct("ok_basis").expect("module");
    o.check(*amin.generator(1) == printed_min_b, "constructed B on {1, a, a^2} equals the printed B");
    o.check(
        amax.generators() == printed_max.as_slice(),
        "constructed A', B' on {1, a, (a^2+1)/2} equal the printed matrices",
    );
    let pd = printed_min_a.det().expect("square");
    o.check(
        *amin.generator(0) != printed_min_a && !pd.abs().is_one(),
        format!("printed A has det {pd} (not an automorphism); constructed A = {}", amin.generator(0)),
    );
    let (fa, fb) = (fix_order(&amin), fix_order(&amax));
    let (ba, bb) = (brute_force_fixed_points(&amin), brute_force_fixed_points(&amax));
    o.check(fa == "1" && fb == "4", format!("Fix orders {fa} vs {fb} (brute force {ba} vs {bb}), expected 1 vs 4"));
    let (ca, cb) = (cyclicity(&amin, Execution::default()), cyclicity(&amax, Execution::default()));
    o.check(ca.as_bool() == Some(true), format!("alpha_min cyclic: {ca:?}"));
    o.check(cb.as_bool() == Some(false), format!("alpha_max non-cyclic: {cb:?}"));
    o.check(
        maximal(&amin) == Some(true) && maximal(&amax) == Some(true),
        format!("both maximal: {:?} {:?}", maximal(&amin), maximal(&amax)),
    );
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::default();
    let base = action(vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, 8, 2]]), m(&[&[2, 1, 0], &[0, 2, 1], &[1, 8, 4]])]);
    let a3xa = base.power(3).and_then(|p| p.product(&base)).expect("product");
    let a2xa2 = base.power(2).and_then(|p| p.product(&base.power(2).expect("power"))).expect("product");
    let cmp = compare_entropy(&a3xa, &a2xa2).expect("entropy");
    o.check(
        cmp.max_deviation <= ENTROPY_TOL,
        format!("entropy functions agree on |n| <= 3, max deviation {:.3e}", cmp.max_deviation),
    );
    // second route: spectral entropy of each group element
    let mut spectral_dev: f64 = 0.0;
    for n1 in -3..=3 {
        for n2 in -3..=3 {
            let n = [n1, n2];
            for x in [&a3xa, &a2xa2] {
                let h = x.entropy_function(&n).expect("entropy");
                let s = entropy(&x.rho(&n)).expect("spectrum");
                spectral_dev = spectral_dev.max((h - s).abs());
            }
        }
    }
    o.check(
        spectral_dev <= ENTROPY_TOL,
        format!("Lyapunov and spectral entropy agree, max deviation {spectral_dev:.3e}"),
    );
    let (c1, c2) = (commutant_z_basis(&a3xa), commutant_z_basis(&a2xa2));
    o.check(c1.rank() == 6 && c2.rank() == 12, format!("commutant ranks {} vs {}", c1.rank(), c2.rank()));
    o.check(noncommuting_pair(&c1).is_none(), "commutant of a3 x a abelian");
    match noncommuting_pair(&c2) {
        Some((p, q)) => {
            let in_commutant = |x: &IntMatrix| a2xa2.generators().iter().all(|g| x.commutes_with(g));
            o.check(
                !p.commutes_with(&q) && in_commutant(&p) && in_commutant(&q),
                format!("commutant of a2 x a2 non-abelian: {p} and {q}"),
            );
        }
        None => o.check(false, "no non-commuting pair found for a2 x a2"),
    }
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::default();
    let c = corpus();
    for e in &c.entries {
        let a = e.to_action().expect("valid");
        for (i, g) in a.generators().iter().enumerate() {
            let f = g.charpoly().expect("square");
            let cert = polynomial_is_ergodic(&f);
            let ok = cert.ergodic && is_hyperbolic(g) && all_roots_real(&f);
            o.check(
                ok,
                format!(
                    "{} generator {i}: ergodic ({} cyclotomic polynomials excluded), hyperbolic, real",
                    e.name, cert.tested
                ),
            );
        }
        let r = a.satisfies_r(3, Execution::default());
        o.check(r.is_verified(), format!("{} condition (R): {r:?}", e.name));
        let Some(data) = e.field_data().expect("valid") else { continue };
        if data.field.is_totally_real() && data.field.degree() == 3 {
            let units = unit_search(&commutant_z_basis(&a), UNIT_BOX, Execution::default()).expect("search");
            let rank = free_index(&a, &units).map(|f| f.free_rank);
            o.check(matches!(rank, Ok(2)), format!("{} free rank of discovered units {rank:?}", e.name));
        }
    }
    o
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut w = IntMatrix::identity(n);
    for _ in 0..5 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        let f = BigInt::from(*[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).expect("index"));
        w.add_row_multiple(i, j, &f);
        if rng.gen_bool(0.3) {
            w.negate_row(rng.gen_range(0..n));
        }
    }
    w
}

fn random_time_change(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let all: Vec<[i64; 4]> = (0..625)
        .map(|k| [k % 5 - 2, (k / 5) % 5 - 2, (k / 25) % 5 - 2, (k / 125) % 5 - 2])
        .filter(|c| (c[0] * c[3] - c[1] * c[2]).abs() == 1)
        .collect();
    let c = all[rng.gen_range(0..all.len())];
    vec![vec![c[0], c[1]], vec![c[2], c[3]]]
}

fn proptest_runner(seed: u8) -> TestRunner {
    let config = Config { cases: 64, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]))
}

fn matrix_of(v: &[i64], r: usize, c: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = v.chunks(c).take(r).map(|x| x.to_vec()).collect();
    IntMatrix::from_rows(&rows).expect("shape")
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::default();

    let ch = proptest_runner(1).run(&prop::collection::vec(-9i64..=9, 16), |v| {
        let x = matrix_of(&v, 4, 4);
        let f = x.charpoly().expect("square");
        prop_assert!(f.eval_matrix(&x).expect("square").is_zero());
        Ok(())
    });
    o.check(ch.is_ok(), format!("Cayley-Hamilton on 64 random 4 x 4 matrices: {ch:?}"));

    let sn = proptest_runner(2).run(&prop::collection::vec(-20i64..=20, 12), |v| {
        let x = matrix_of(&v, 3, 4);
        let s = snf(&x);
        for w in s.d.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let sq = matrix_of(&v, 3, 3);
        let ds = snf(&sq);
        let prod: BigInt = ds.d.iter().fold(BigInt::one(), |a, b| a * b);
        prop_assert_eq!(prod.abs(), sq.det().expect("square").abs());
        Ok(())
    });
    o.check(sn.is_ok(), format!("SNF divisibility and |det| = product of d_i: {sn:?}"));

    let hn = proptest_runner(3).run(&(prop::collection::vec(-20i64..=20, 12), any::<u64>()), |(v, seed)| {
        let x = matrix_of(&v, 3, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(&mut rng, 3);
        prop_assert_eq!(hnf(&(&u * &x)), hnf(&x));
        Ok(())
    });
    o.check(hn.is_ok(), format!("HNF invariant under unimodular row operations: {hn:?}"));

    let c = corpus();
    let a3 = entry(&c, "example3a_principal");
    let a2b = entry(&c, "example2b_max");
    let hom = proptest_runner(4).run(&(1i64..=4, -3i64..=3, -3i64..=3), |(k, n1, n2)| {
        for a in [&a3, &a2b] {
            let h = a.entropy_function(&[n1, n2]).expect("entropy");
            let hk = a.entropy_function(&[k * n1, k * n2]).expect("entropy");
            let hm = a.entropy_function(&[-n1, -n2]).expect("entropy");
            prop_assert!((hk - k as f64 * h).abs() <= HOMOGENEITY_TOL * (1.0 + hk.abs()));
            prop_assert!((hm - h).abs() <= HOMOGENEITY_TOL * (1.0 + h.abs()));
            let g = a.rho(&[n1, n2]);
            let gi = g.inverse_unimodular().expect("unimodular");
            let (e1, e2) = (entropy(&g).expect("spectrum"), entropy(&gi).expect("spectrum"));
            prop_assert!((e1 - e2).abs() <= HOMOGENEITY_TOL * (1.0 + e1.abs()));
        }
        Ok(())
    });
    o.check(hom.is_ok(), format!("h(kn) = k h(n) and entropy(m) = entropy(m^-1) to 1e-9: {hom:?}"));

    // Latimer-MacDuffee map on 20 random conjugates of the second-class matrix of Example 3a
    let file = c.get("example3a_second").expect("entry");
    let data = file.field_data().expect("valid").expect("field");
    let second = entry(&c, "example3a_second");
    let mat = second.generator(0).clone();
    let base = lm_ideal_of_matrix(&mat, &data.field).expect("ideal");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut lm_ok = 0;
    for _ in 0..20 {
        let w = random_unimodular(&mut rng, 3);
        let conj = &(&w * &mat) * &w.inverse_unimodular().expect("unimodular");
        let ideal = lm_ideal_of_matrix(&conj, &data.field).expect("ideal");
        if ideal_equivalent(&base, &ideal, &data.units).as_bool() == Some(true) {
            lm_ok += 1;
        }
    }
    o.check(lm_ok == 20, format!("LM class invariant on {lm_ok}/20 random unimodular conjugates"));

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cyc_ok = 0;
    let mut cyc_total = 0;
    for name in ["example2a_min", "example2a_max", "example3c_max"] {
        let a = entry(&c, name);
        let v = cyclicity(&a, Execution::default()).as_bool();
        for _ in 0..4 {
            let tc = a.time_change(&random_time_change(&mut rng)).expect("GL(2,Z)");
            let cj = a.conjugate_by(&random_unimodular(&mut rng, 3)).expect("unimodular");
            cyc_total += 2;
            cyc_ok += (cyclicity(&tc, Execution::default()).as_bool() == v) as usize;
            cyc_ok += (cyclicity(&cj, Execution::default()).as_bool() == v) as usize;
        }
    }
    o.check(
        cyc_ok == cyc_total,
        format!("cyclicity invariant under {cyc_ok}/{cyc_total} time changes and conjugations"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = CompareOptions { unit_box: 10, ..CompareOptions::default() };
    let mut pairs: Vec<(String, ZdAction, ZdAction)> = Vec::new();
    for (p, q) in [
        ("example2a_min", "example2a_max"),
        ("example2b_min", "example2b_max"),
        ("example3b_second", "example3b_third"),
        ("example1b_cube_times", "example1b_square_square"),
        ("example1a_square", "example1a_power"),
    ] {
        pairs.push((format!("{p} / {q}"), entry(&c, p), entry(&c, q)));
    }
    for name in ["example2a_max", "example3a_principal"] {
        let a = entry(&c, name);
        let w = random_unimodular(&mut rng, 3);
        pairs.push((format!("{name} / conjugate"), a.clone(), a.conjugate_by(&w).expect("unimodular")));
        pairs.push((
            format!("{name} / time change"),
            a.clone(),
            a.time_change(&random_time_change(&mut rng)).expect("GL(2,Z)"),
        ));
    }
    for (label, a, b) in &pairs {
        let r = compare(a, b, opts).expect("comparable");
        o.check(r.verdict_chain_holds, format!("verdict chain Z => Q => entropy holds for {label}"));
    }
    o
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "Example 2a structural identities", criterion_1),
        (2, "Example 2a classification", criterion_2),
        (3, "Example 2b squares, fixed points, affine indices", criterion_3),
        (4, "Example 3a conjugacy, ideal classes, fixed points, maximality", criterion_4),
        (5, "Example 3b three ideal classes", criterion_5),
        (6, "Example 3c construction, fixed points, cyclicity, maximality", criterion_6),
        (7, "Examples 1a/1b entropy and commutants", criterion_7),
        (8, "spectral and dynamical gates on the corpus", criterion_8),
        (9, "property suites", criterion_9),
    ];
    let mut failed = Vec::new();
    for (k, title, f) in criteria {
        let start = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            let mut o = Outcome::default();
            o.check(false, format!("panicked: {}", msg.unwrap_or_default()));
            o
        });
        let ok = outcome.passed();
        println!(
            "{} criterion {k}: {title} ({:.1} s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for (good, what) in &outcome.checks {
            println!("    {} {what}", if *good { "ok  " } else { "FAIL" });
        }
        if !ok {
            failed.push(k);
        }
    }
    if failed.is_empty() {
        println!("all 9 criteria PASS");
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
