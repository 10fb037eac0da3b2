//! Data-driven verification of the bundled corpus.
//!
//! Jobs (one per corpus entry, per assertion and per ideal-class group) run
//! concurrently; their results are concatenated in corpus order.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::action::{ZdAction, DEFAULT_SEARCH_BOX};
use crate::centralizer::{
    affine_report, commutant_z_basis, free_index, noncommuting_pair, unit_search, DEFAULT_UNIT_BOX,
};
use crate::classify::{
    compare, compare_entropy, conjugate_over_q, cubic_form, cyclicity, ideal_class_comparison, is_square_mod2,
    time_change_equivalent_q, CompareOptions, Cyclicity, CyclicityCertificate, IdealEquivalence, TimeChange,
    DEFAULT_Z_CONJUGACY_BOX,
};
use crate::corpus::{Assertion, Corpus};
use crate::exec::{map_slice, Execution};
use crate::format::{matrix_from_rows, ActionFile};
use crate::linalg::IntMatrix;
use crate::poly::IntPoly;
use crate::report::{condition_r_text, cyclicity_text, maximality_text};
use crate::spectra::{all_roots_real, is_hyperbolic, polynomial_is_ergodic};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub example: String,
    pub subject: String,
    pub check: String,
    pub passed: bool,
    pub expected: String,
    pub computed: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {} | expected {} | computed {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.example,
            self.subject,
            self.check,
            self.expected,
            self.computed
        )
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Keeps jobs whose example tag equals the filter or whose entry names contain it.
    pub filter: Option<String>,
    pub unit_box: i64,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { filter: None, unit_box: DEFAULT_UNIT_BOX, exec: Execution::default() }
    }
}

enum Job<'a> {
    Entry(&'a ActionFile),
    Assertion(&'a Assertion),
    IdealClasses(String, Vec<&'a ActionFile>),
}

fn matches(filter: &Option<String>, example: &str, names: &[&str]) -> bool {
    match filter {
        None => true,
        Some(f) => example == f || names.iter().any(|n| n.contains(f.as_str())),
    }
}

struct Checks {
    example: String,
    subject: String,
    out: Vec<CheckResult>,
}

impl Checks {
    fn new(example: &str, subject: &str) -> Self {
        Checks { example: example.to_string(), subject: subject.to_string(), out: Vec::new() }
    }

    fn push(
        &mut self,
        check: impl Into<String>,
        passed: bool,
        expected: impl Into<String>,
        computed: impl Into<String>,
    ) -> bool {
        self.out.push(CheckResult {
            example: self.example.clone(),
            subject: self.subject.clone(),
            check: check.into(),
            passed,
            expected: expected.into(),
            computed: computed.into(),
        });
        passed
    }

    fn eq<T: PartialEq + ToString>(&mut self, check: &str, expected: T, computed: T) -> bool {
        let ok = expected == computed;
        self.push(check, ok, expected.to_string(), computed.to_string())
    }
}

pub fn verify(corpus: &Corpus, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut jobs = Vec::new();
    for e in &corpus.entries {
        if matches(&opts.filter, e.example.as_deref().unwrap_or(""), &[&e.name]) {
            jobs.push(Job::Entry(e));
        }
    }
    for a in &corpus.assertions {
        if matches(&opts.filter, a.example(), &a.entries()) {
            jobs.push(Job::Assertion(a));
        }
    }
    let mut groups: Vec<(String, Vec<&ActionFile>)> = Vec::new();
    for e in &corpus.entries {
        let tagged = e.expectations.as_ref().is_some_and(|x| x.ideal_class_tag.is_some());
        let Some(ex) = e.example.clone().filter(|_| tagged) else { continue };
        match groups.iter_mut().find(|(g, _)| *g == ex) {
            Some((_, v)) => v.push(e),
            None => groups.push((ex, vec![e])),
        }
    }
    for (ex, members) in groups {
        let names: Vec<&str> = members.iter().map(|m| m.name.as_str()).collect();
        if members.len() > 1 && matches(&opts.filter, &ex, &names) {
            jobs.push(Job::IdealClasses(ex, members));
        }
    }
    map_slice(opts.exec, &jobs, |job| match job {
        Job::Entry(e) => entry_checks(e, opts),
        Job::Assertion(a) => assertion_checks(corpus, a, opts),
        Job::IdealClasses(ex, members) => ideal_class_checks(ex, members),
    })
    .into_iter()
    .flatten()
    .collect()
}

fn det_list(ms: &[IntMatrix]) -> String {
    ms.iter().map(|m| m.det().map(|d| d.to_string()).unwrap_or_else(|_| "?".into())).collect::<Vec<_>>().join(", ")
}

fn entry_checks(e: &ActionFile, opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut c = Checks::new(e.example.as_deref().unwrap_or("-"), &e.name);
    let ms = match e.matrices() {
        Ok(ms) => ms,
        Err(err) => {
            c.push("file shape", false, "consistent dim, rank and matrices", err.to_string());
            return c.out;
        }
    };
    let unimodular = ms.iter().all(|m| m.det().is_ok_and(|d| d.abs().is_one()));
    c.push("generators unimodular", unimodular, "det ∈ {±1}", format!("det = [{}]", det_list(&ms)));
    let mut clash = None;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if clash.is_none() && !ms[i].commutes_with(&ms[j]) {
                clash = Some((i, j));
            }
        }
    }
    let commute = c.push(
        "commutation",
        clash.is_none(),
        "all generators commute",
        match clash {
            None => "all pairs commute".to_string(),
            Some((i, j)) => format!("generators {i} and {j} do not commute"),
        },
    );
    if !unimodular || !commute {
        return c.out;
    }
    let a = match ZdAction::new(ms.clone()) {
        Ok(a) => a,
        Err(err) => {
            c.push("valid action", false, "valid action", err.to_string());
            return c.out;
        }
    };
    for (i, m) in ms.iter().enumerate() {
        let Ok(f) = m.charpoly() else { continue };
        let cert = polynomial_is_ergodic(&f);
        let hyperbolic = is_hyperbolic(m);
        let real = all_roots_real(&f);
        let computed = format!(
            "ergodic {} ({} cyclotomic factors tested{}), hyperbolic {hyperbolic}, real {real}",
            cert.ergodic,
            cert.tested,
            cert.cyclotomic_index.map(|k| format!(", Φ_{k} divides")).unwrap_or_default()
        );
        c.push(
            format!("generator {i} spectral gates"),
            cert.ergodic && hyperbolic && real,
            "ergodic, hyperbolic, real spectrum",
            computed,
        );
    }
    let r = a.satisfies_r(DEFAULT_SEARCH_BOX, opts.exec);
    c.push("condition (R)", r.is_verified(), "verified with witness", condition_r_text(&r));

    if let Some(block) = &e.field {
        match block.resolve() {
            Err(err) => {
                c.push("field data", false, "valid field block", err.to_string());
            }
            Ok(data) => {
                if let Some(lat) = &block.lattice {
                    match data.construct(lat) {
                        Ok(built) => {
                            c.push(
                                format!("construct on {lat}"),
                                built.generators() == ms.as_slice(),
                                "stored generators",
                                if built.generators() == ms.as_slice() {
                                    "identical".to_string()
                                } else {
                                    built.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ; ")
                                },
                            );
                            for err in &e.printed_errata {
                                let printed = matrix_from_rows(&err.printed);
                                let constructed = built.generators().get(err.generator);
                                let differs = match (&printed, constructed) {
                                    (Ok(p), Some(b)) => p != b,
                                    _ => false,
                                };
                                let pdet = printed
                                    .as_ref()
                                    .ok()
                                    .and_then(|p| p.det().ok())
                                    .map(|d| d.to_string())
                                    .unwrap_or_default();
                                c.push(
                                    format!("printed generator {} recorded as erratum", err.generator),
                                    differs,
                                    "printed matrix differs from the field data",
                                    format!(
                                        "printed det {pdet}, constructed {}",
                                        constructed.map(|b| b.to_string()).unwrap_or_default()
                                    ),
                                );
                            }
                        }
                        Err(err) => {
                            c.push(format!("construct on {lat}"), false, "stored generators", err.to_string());
                        }
                    }
                }
                if data.field.is_totally_real() && data.field.degree() == 3 {
                    let comm = commutant_z_basis(&a);
                    let rank = unit_search(&comm, opts.unit_box, opts.exec).and_then(|u| free_index(&a, &u));
                    match rank {
                        Ok(f) => c.eq("Dirichlet free rank of discovered units", 2, f.free_rank),
                        Err(err) => c.push("Dirichlet free rank of discovered units", false, "2", err.to_string()),
                    };
                }
            }
        }
    }

    let Some(x) = &e.expectations else { return c.out };
    if let Some(fp) = x.fixed_points {
        let computed = a.fixed_points().map(|f| f.order.to_string()).unwrap_or_else(|e| e.to_string());
        c.eq("fixed points", fp.to_string(), computed);
    }
    if let Some(cart) = x.cartan {
        c.eq("Cartan", cart, a.is_cartan());
    }
    if let Some(rank) = x.commutant_rank {
        c.eq("commutant rank", rank, commutant_z_basis(&a).rank());
    }
    if let Some(abelian) = x.commutant_abelian {
        let pair = noncommuting_pair(&commutant_z_basis(&a));
        let computed = match &pair {
            None => "abelian".to_string(),
            Some((p, q)) => format!("non-abelian, {p} and {q} do not commute"),
        };
        c.push(
            "commutant abelian",
            abelian == pair.is_none(),
            if abelian { "abelian" } else { "non-abelian with explicit pair" },
            computed,
        );
    }
    if let Some(cyc) = x.cyclic {
        let v = cyclicity(&a, opts.exec);
        c.push("cyclic", v.as_bool() == Some(cyc), cyc.to_string(), cyclicity_text(&v));
    }
    if let Some(max) = x.maximal {
        let v = crate::centralizer::is_maximal_cartan(&a, opts.unit_box, opts.exec);
        let got = match v {
            crate::centralizer::MaximalityVerdict::Maximal { .. } => Some(true),
            crate::centralizer::MaximalityVerdict::NotMaximal { .. } => Some(false),
            crate::centralizer::MaximalityVerdict::NotVerified { .. } => None,
        };
        c.push(format!("maximal (unit box {})", opts.unit_box), got == Some(max), max.to_string(), maximality_text(&v));
    }
    if x.affine_torsion_order.is_some() || x.affine_index.is_some() || x.affine_structure.is_some() {
        match affine_report(&a, opts.unit_box, opts.exec) {
            Ok(r) => {
                if let Some(t) = x.affine_torsion_order {
                    c.eq("affine torsion order", t.to_string(), r.affine_torsion_order.clone());
                }
                if let Some(i) = x.affine_index {
                    c.eq(
                        "affine centralizer index",
                        i.to_string(),
                        r.affine_index.clone().unwrap_or_else(|| "n/a".into()),
                    );
                }
                if let Some(s) = &x.affine_structure {
                    c.eq("affine centralizer type", s.clone(), r.structure.clone());
                }
            }
            Err(err) => {
                c.push("affine centralizer", false, "report", err.to_string());
            }
        }
    }
    c.out
}

fn load(corpus: &Corpus, name: &str) -> std::result::Result<ZdAction, String> {
    let e = corpus.get(name).ok_or_else(|| format!("unknown entry {name}"))?;
    e.to_action().map_err(|err| err.to_string())
}

fn generator(a: &ZdAction, i: usize) -> std::result::Result<&IntMatrix, String> {
    a.generators().get(i).ok_or_else(|| format!("no generator {i}"))
}

fn assertion_checks(corpus: &Corpus, assertion: &Assertion, opts: &VerifyOptions) -> Vec<CheckResult> {
    let subject = assertion.entries().join(" / ");
    let mut c = Checks::new(assertion.example(), &subject);
    if let Err(err) = run_assertion(corpus, assertion, opts, &mut c) {
        c.push("assertion inputs", false, "valid entries", err);
    }
    c.out
}

fn run_assertion(
    corpus: &Corpus,
    assertion: &Assertion,
    opts: &VerifyOptions,
    c: &mut Checks,
) -> std::result::Result<(), String> {
    match assertion {
        Assertion::PolynomialRelation { entry, generator: g, variable, coeffs, .. } => {
            let a = load(corpus, entry)?;
            let lhs = generator(&a, *g)?;
            let rhs = IntPoly::from_i64(coeffs).eval_matrix(generator(&a, *variable)?).map_err(|e| e.to_string())?;
            let p = IntPoly::from_i64(coeffs);
            c.push(
                format!("generator {g} = p(generator {variable})"),
                *lhs == rhs,
                format!("p = {p}"),
                rhs.to_string(),
            );
        }
        Assertion::Charpoly { entry, generator: g, poly, .. } => {
            let a = load(corpus, entry)?;
            let f = generator(&a, *g)?.charpoly().map_err(|e| e.to_string())?;
            c.eq(
                &format!("characteristic polynomial of generator {g}"),
                IntPoly::from_i64(poly).to_string(),
                f.to_string(),
            );
        }
        Assertion::Conjugator { from, to, matrix, .. } => {
            let a = load(corpus, from)?;
            let b = load(corpus, to)?;
            let v = matrix_from_rows(matrix).map_err(|e| e.to_string())?;
            let det = v.det().map_err(|e| e.to_string())?;
            let ok = !det.is_zero() && a.generators().iter().zip(b.generators()).all(|(x, y)| &v * x == y * &v);
            c.push(
                "V·A_i·V⁻¹ = B_i for every generator",
                ok,
                format!("V = {v}"),
                format!("det V = {det}, identities hold: {ok}"),
            );
        }
        Assertion::CubicForm { entry, prime, coefficients, .. } => {
            let a = load(corpus, entry)?;
            let v = cyclicity(&a, opts.exec);
            let computed: Option<(u64, Vec<BigInt>)> = match &v {
                Cyclicity::NonCyclic { certificate: CyclicityCertificate::CubicForm { prime, coefficients, .. } } => {
                    Some((*prime, coefficients.iter().filter_map(|s| s.parse().ok()).collect()))
                }
                _ => None,
            };
            let expected: Vec<BigInt> = coefficients.iter().map(|&x| BigInt::from(x)).collect();
            let ok = computed.as_ref().is_some_and(|(p, coeffs)| {
                let nz: Vec<BigInt> = coeffs.iter().filter(|x| !x.is_zero()).cloned().collect();
                let neg: Vec<BigInt> = nz.iter().map(|x| -x).collect();
                *p == *prime && (nz == expected || neg == expected)
            });
            c.push(
                "non-cyclic with cubic form certificate",
                ok,
                format!(
                    "nonzero coefficients ±[{}] vanishing mod {prime}",
                    coefficients.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                ),
                cyclicity_text(&v),
            );
            if let Cyclicity::NonCyclic { certificate: CyclicityCertificate::CubicForm { witness, .. } } = &v {
                // recompute the form from scratch as a second route
                let w = a.rho(witness);
                let direct = cubic_form(&w).map_err(|e| e.to_string())?;
                let stored = computed.map(|(_, x)| x).unwrap_or_default();
                c.push(
                    "cubic form recomputed from its witness",
                    direct == stored,
                    "same coefficients",
                    format!("{direct:?}"),
                );
            }
        }
        Assertion::Square { entry, generator: g, root, .. } => {
            let a = load(corpus, entry)?;
            let m = matrix_from_rows(root).map_err(|e| e.to_string())?;
            let sq = &m * &m;
            c.push(format!("generator {g} = M²"), *generator(&a, *g)? == sq, format!("M = {m}"), format!("M² = {sq}"));
        }
        Assertion::NotSquareMod2 { entry, generator: g, .. } => {
            let a = load(corpus, entry)?;
            let sq = is_square_mod2(generator(&a, *g)?).map_err(|e| e.to_string())?;
            c.push(
                format!("generator {g} is a square mod 2"),
                !sq,
                "false (exhaustive over all matrices mod 2)",
                sq.to_string(),
            );
        }
        Assertion::RationallyConjugate { entries, .. } => {
            for i in 0..entries.len() {
                for j in i + 1..entries.len() {
                    let a = load(corpus, &entries[i])?;
                    let b = load(corpus, &entries[j])?;
                    let v = conjugate_over_q(&a, &b);
                    let computed = match v.conjugator() {
                        Some(x) => format!("conjugator {x}"),
                        None => format!("{v:?}"),
                    };
                    c.push(format!("{} ~Q {}", entries[i], entries[j]), v.is_conjugate(), "conjugator found", computed);
                }
            }
        }
        Assertion::EntropyEqual { entries, .. } => {
            for i in 0..entries.len() {
                for j in i + 1..entries.len() {
                    let a = load(corpus, &entries[i])?;
                    let b = load(corpus, &entries[j])?;
                    let e = compare_entropy(&a, &b).map_err(|e| e.to_string())?;
                    c.push(
                        format!("entropy functions of {} and {} on ‖n‖∞ ≤ 3", entries[i], entries[j]),
                        e.equal,
                        "equal to 1e-8",
                        format!("max deviation {:.3e}", e.max_deviation),
                    );
                }
            }
        }
        Assertion::TimeChange { first, second, c: expected, .. } => {
            let a = load(corpus, first)?;
            let b = load(corpus, second)?;
            let v = time_change_equivalent_q(&a, &b);
            let ok = matches!(&v, TimeChange::Equivalent { c: got, .. } if got == expected);
            c.push("time change over Q", ok, format!("equivalent with C = {expected:?}"), format!("{v:?}"));
        }
        Assertion::Compare { first, second, weakly_isomorphic, distinguishing, .. } => {
            let a = load(corpus, first)?;
            let b = load(corpus, second)?;
            let opts = CompareOptions { unit_box: opts.unit_box, z_box: DEFAULT_Z_CONJUGACY_BOX, exec: opts.exec };
            let r = compare(&a, &b, opts).map_err(|e| e.to_string())?;
            c.eq("weakly isomorphic", *weakly_isomorphic, r.weakly_isomorphic());
            let got = r.distinguishing_invariant.clone().unwrap_or_else(|| "none".into());
            c.push("distinguishing invariant", got.starts_with(distinguishing.as_str()), distinguishing.clone(), got);
            c.push("verdict chain Z ⇒ Q ⇒ entropy", r.verdict_chain_holds, "holds", r.verdict_chain_holds.to_string());
        }
    }
    Ok(())
}

fn ideal_class_checks(example: &str, members: &[&ActionFile]) -> Vec<CheckResult> {
    let mut c = Checks::new(example, "ideal classes");
    let tag = |e: &ActionFile| e.expectations.as_ref().and_then(|x| x.ideal_class_tag.clone()).unwrap_or_default();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (p, q) = (members[i], members[j]);
            let check = format!("{} vs {}", p.name, q.name);
            let (a, b) = match (p.to_action(), q.to_action()) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    c.push(check, false, "valid actions", "invalid action");
                    continue;
                }
            };
            let same = tag(p) == tag(q);
            let v = ideal_class_comparison(&a, &b);
            let computed = match &v {
                Some(IdealEquivalence::Equivalent { multiplier }) => format!("equivalent, multiplier {multiplier}"),
                Some(IdealEquivalence::Inequivalent { certificate }) => format!("inequivalent ({certificate})"),
                Some(IdealEquivalence::NotVerified { reason }) => format!("not verified ({reason})"),
                None => "not comparable".into(),
            };
            let ok = v.as_ref().and_then(IdealEquivalence::as_bool) == Some(same);
            c.push(check, ok, if same { "equivalent" } else { "inequivalent" }, computed);
        }
    }
    c.out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_selects_one_example() {
        let corpus = Corpus::bundled().unwrap();
        let opts = VerifyOptions { filter: Some("2b".into()), unit_box: 10, exec: Execution::default() };
        let out = verify(&corpus, &opts);
        assert!(!out.is_empty());
        assert!(out.iter().all(|r| r.example == "2b"), "{out:?}");
        assert!(out.iter().all(|r| r.passed), "{:#?}", out.iter().filter(|r| !r.passed).collect::<Vec<_>>());
    }

    #[test]
    fn perturbed_matrix_fails_the_commutation_check() {
        let mut corpus = Corpus::bundled().unwrap();
        let e = corpus.entries.iter_mut().find(|e| e.name == "example2a_min").unwrap();
        e.generators[1][0][0] += 1;
        let opts = VerifyOptions { filter: Some("example2a_min".into()), unit_box: 5, exec: Execution::default() };
        let out = verify(&corpus, &opts);
        let fail = out.iter().find(|r| !r.passed).unwrap();
        // [[3,-4,-1],...] has determinant 2, so unimodularity trips first, then commutation
        assert!(fail.check == "generators unimodular" || fail.check == "commutation", "{fail:?}");
        assert!(out.iter().any(|r| r.check == "commutation" && !r.passed));
    }
}
