//! Invariant report for a single action, as text and as JSON.

use serde::Serialize;

use crate::action::{ConditionR, IrreducibilityVerdict, WeylChamberSet, ZdAction, DEFAULT_SEARCH_BOX};
use crate::centralizer::{
    commutant_z_basis, is_maximal_cartan, noncommuting_pair, torsion_elements, MaximalityVerdict,
};
use crate::classify::{
    cyclicity, ComparisonReport, Cyclicity, CyclicityCertificate, IdealEquivalence, QConjugacy, TimeChange, ZConjugacy,
};
use crate::exec::{box_point, box_size, Execution};
use crate::spectra::{all_roots_real, entropy, is_hyperbolic, polynomial_is_ergodic};

pub const ENTROPY_GRID: i64 = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorReport {
    pub matrix: String,
    pub charpoly: String,
    pub ergodic: bool,
    /// `k` with `Φ_k` dividing the characteristic polynomial.
    pub cyclotomic_factor: Option<usize>,
    pub hyperbolic: bool,
    pub real_spectrum: bool,
    pub entropy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRow {
    pub n: Vec<i64>,
    pub entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionSummary {
    pub order: usize,
    pub element_orders: Vec<u64>,
    pub search_box: i64,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub name: String,
    pub dim: usize,
    pub rank: usize,
    pub generators: Vec<GeneratorReport>,
    /// `Some(true)` with a witness, `Some(false)` with an invariant subspace, `None` if inconclusive.
    pub irreducible: Option<bool>,
    pub irreducibility_witness: Option<Vec<i64>>,
    pub cartan: bool,
    pub condition_r: ConditionR,
    pub entropy_table: Vec<EntropyRow>,
    pub weyl_chambers: Option<WeylChamberSet>,
    pub fixed_points: Option<String>,
    pub fixed_point_invariant_factors: Vec<String>,
    pub commutant_rank: usize,
    pub commutant_abelian: bool,
    pub torsion: Option<TorsionSummary>,
    pub cyclicity: Cyclicity,
    /// Only computed for Cartan actions.
    pub maximality: Option<MaximalityVerdict>,
    pub unit_search_box: i64,
}

/// Exit-status class of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Ok,
    /// Some verdict is a verified negative of a dynamical gate.
    Violation,
    /// Some search-bounded verdict is undecided.
    NotVerified,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::NotVerified => 2,
        }
    }
}

pub fn generator_report(m: &crate::IntMatrix) -> GeneratorReport {
    let f = m.charpoly().ok();
    let cert = f.as_ref().map(polynomial_is_ergodic);
    GeneratorReport {
        matrix: m.to_string(),
        charpoly: f.as_ref().map(|p| p.to_string()).unwrap_or_default(),
        ergodic: cert.as_ref().is_some_and(|c| c.ergodic),
        cyclotomic_factor: cert.and_then(|c| c.cyclotomic_index),
        hyperbolic: is_hyperbolic(m),
        real_spectrum: f.as_ref().is_some_and(all_roots_real),
        entropy: entropy(m).ok(),
    }
}

pub fn entropy_table(a: &ZdAction, grid: i64) -> Vec<EntropyRow> {
    let d = a.rank();
    (0..box_size(d, grid))
        .map(|i| box_point(i, d, grid))
        .filter_map(|n| a.entropy_function(&n).ok().map(|h| EntropyRow { n, entropy: h }))
        .collect()
}

pub fn analyze(name: &str, a: &ZdAction, unit_box: i64, exec: Execution) -> InvariantReport {
    let generators = a.generators().iter().map(generator_report).collect();
    let (irreducible, irreducibility_witness) = match a.is_irreducible(DEFAULT_SEARCH_BOX) {
        IrreducibilityVerdict::Irreducible { witness } => (Some(true), Some(witness)),
        IrreducibilityVerdict::Reducible { .. } => (Some(false), None),
        IrreducibilityVerdict::Inconclusive => (None, None),
    };
    let cartan = a.is_cartan();
    let fix = a.fixed_points().ok();
    let c = commutant_z_basis(a);
    let torsion = torsion_elements(&c, exec).ok().map(|t| TorsionSummary {
        order: t.order(),
        element_orders: t.elements.iter().map(|(_, o)| *o).collect(),
        search_box: t.search_box,
        complete: t.complete,
    });
    InvariantReport {
        name: name.to_string(),
        dim: a.dim(),
        rank: a.rank(),
        generators,
        irreducible,
        irreducibility_witness,
        cartan,
        condition_r: a.satisfies_r(DEFAULT_SEARCH_BOX, exec),
        entropy_table: entropy_table(a, ENTROPY_GRID),
        weyl_chambers: if a.rank() == 2 { a.weyl_chambers().ok() } else { None },
        fixed_points: fix.as_ref().map(|f| f.order.to_string()),
        fixed_point_invariant_factors: fix
            .map(|f| f.invariant_factors.iter().map(|x| x.to_string()).collect())
            .unwrap_or_default(),
        commutant_rank: c.rank(),
        commutant_abelian: noncommuting_pair(&c).is_none(),
        torsion,
        cyclicity: cyclicity(a, exec),
        maximality: cartan.then(|| is_maximal_cartan(a, unit_box, exec)),
        unit_search_box: unit_box,
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn cyclicity_text(c: &Cyclicity) -> String {
    match c {
        Cyclicity::Cyclic { witness } => format!("true (witness [{}])", join(witness)),
        Cyclicity::NonCyclic { certificate: CyclicityCertificate::CubicForm { prime, coefficients, .. } } => {
            format!("false (cubic form [{}] vanishes mod {prime})", coefficients.join(", "))
        }
        Cyclicity::NonCyclic { certificate: CyclicityCertificate::ModP { prime } } => {
            format!("false (no cyclic vector over F_{prime})")
        }
        Cyclicity::NotVerified { reason } => format!("not verified ({reason})"),
    }
}

pub fn maximality_text(m: &MaximalityVerdict) -> String {
    match m {
        MaximalityVerdict::Maximal { search_box } => format!("true (unit box {search_box})"),
        MaximalityVerdict::NotMaximal { witness, .. } => {
            let rows: Vec<String> = witness.iter().map(|r| format!("[{}]", join(r))).collect();
            format!("false (witness [{}])", rows.join(", "))
        }
        MaximalityVerdict::NotVerified { reason } => format!("not verified ({reason})"),
    }
}

pub fn condition_r_text(c: &ConditionR) -> String {
    match c {
        ConditionR::Verified { m1, m2 } => {
            format!("verified (ergodic plane spanned by [{}] and [{}])", join(m1), join(m2))
        }
        ConditionR::False { reason } => format!("false ({reason})"),
        ConditionR::NotVerified { reason } => format!("not verified ({reason})"),
    }
}

fn line(s: &mut String, key: &str, value: String) {
    s.push_str(key);
    s.push_str(": ");
    s.push_str(&value);
    s.push('\n');
}

fn opt_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_else(|| "inconclusive".into())
}

impl InvariantReport {
    pub fn status(&self) -> Status {
        if self.generators.iter().any(|g| !g.ergodic || !g.hyperbolic)
            || matches!(self.condition_r, ConditionR::False { .. })
        {
            return Status::Violation;
        }
        let undecided = self.irreducible.is_none()
            || matches!(self.condition_r, ConditionR::NotVerified { .. })
            || matches!(self.cyclicity, Cyclicity::NotVerified { .. })
            || matches!(self.maximality, Some(MaximalityVerdict::NotVerified { .. }));
        if undecided {
            Status::NotVerified
        } else {
            Status::Ok
        }
    }

    pub fn to_json(&self) -> String {
        crate::format::to_json_text(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        line(&mut s, "name", self.name.clone());
        line(&mut s, "dim", self.dim.to_string());
        line(&mut s, "rank", self.rank.to_string());
        for (i, g) in self.generators.iter().enumerate() {
            let ergodic = match g.cyclotomic_factor {
                Some(k) if !g.ergodic => format!("false (Φ_{k} divides the characteristic polynomial)"),
                _ => g.ergodic.to_string(),
            };
            line(&mut s, &format!("generator {i}"), g.matrix.clone());
            line(&mut s, "  charpoly", g.charpoly.clone());
            line(&mut s, "  ergodic", ergodic);
            line(&mut s, "  hyperbolic", g.hyperbolic.to_string());
            line(&mut s, "  real_spectrum", g.real_spectrum.to_string());
            line(&mut s, "  entropy", g.entropy.map(|h| format!("{h:.10}")).unwrap_or_else(|| "n/a".into()));
        }
        let irr = match (&self.irreducible, &self.irreducibility_witness) {
            (Some(true), Some(w)) => format!("true (witness [{}])", join(w)),
            (b, _) => opt_bool(*b),
        };
        line(&mut s, "irreducible", irr);
        line(&mut s, "cartan", self.cartan.to_string());
        line(&mut s, "condition_r", condition_r_text(&self.condition_r));
        line(&mut s, "entropy_table", format!("‖n‖∞ ≤ {ENTROPY_GRID}, {} points", self.entropy_table.len()));
        for row in &self.entropy_table {
            s.push_str(&format!("  ({}): {:.10}\n", join(&row.n), row.entropy));
        }
        match &self.weyl_chambers {
            Some(w) => {
                line(
                    &mut s,
                    "weyl_chambers",
                    format!(
                        "{} chambers, {} walls{}",
                        w.chambers.len(),
                        w.walls,
                        if w.degenerate { ", degenerate" } else { "" }
                    ),
                );
                for ch in &w.chambers {
                    s.push_str(&format!(
                        "  [{:.6}, {:.6}) positive rows [{}], h(n) = {:.10}·n1 + {:.10}·n2\n",
                        ch.start_angle,
                        ch.end_angle,
                        join(&ch.positive_rows),
                        ch.entropy_coefficients[0],
                        ch.entropy_coefficients[1]
                    ));
                }
            }
            None => line(&mut s, "weyl_chambers", "n/a".into()),
        }
        line(&mut s, "fixed_points", self.fixed_points.clone().unwrap_or_else(|| "n/a".into()));
        line(&mut s, "fixed_point_invariant_factors", format!("[{}]", self.fixed_point_invariant_factors.join(", ")));
        line(&mut s, "commutant_rank", self.commutant_rank.to_string());
        line(&mut s, "commutant_abelian", self.commutant_abelian.to_string());
        line(
            &mut s,
            "torsion",
            match &self.torsion {
                Some(t) => format!(
                    "{} elements, orders [{}] (box {}{})",
                    t.order,
                    join(&t.element_orders),
                    t.search_box,
                    if t.complete { "" } else { ", reduced" }
                ),
                None => "n/a".into(),
            },
        );
        line(&mut s, "cyclic", cyclicity_text(&self.cyclicity));
        line(
            &mut s,
            "maximal",
            self.maximality.as_ref().map(maximality_text).unwrap_or_else(|| "n/a (not a Cartan action)".into()),
        );
        s
    }
}

/// One-line verdict for a comparison; `identical` short-circuits to the identity.
pub fn comparison_verdict(r: &ComparisonReport, identical: bool) -> String {
    if identical {
        return "isomorphic: yes (identity)".into();
    }
    let detail = |s: &Option<String>| {
        let s = s.clone().unwrap_or_default();
        match (s.find('('), s.rfind(')')) {
            (Some(i), Some(j)) if i < j => s[i + 1..j].to_string(),
            _ => s,
        }
    };
    if !r.entropy.equal {
        return format!(
            "entropy functions differ (max deviation {:.3e}); not weakly isomorphic",
            r.entropy.max_deviation
        );
    }
    if !r.weakly_isomorphic() {
        return format!("entropy functions equal; not weakly isomorphic ({})", detail(&r.distinguishing_invariant));
    }
    let z = match &r.z_conjugate {
        ZConjugacy::Conjugate { .. } => "yes".to_string(),
        ZConjugacy::NotConjugate { obstruction } => {
            let short = obstruction.split(':').next().unwrap_or(obstruction);
            format!("no ({short})")
        }
        ZConjugacy::NotVerified { .. } => "not verified".to_string(),
    };
    format!("weakly isomorphic: yes; Z-conjugate: {z}")
}

fn rows_text(v: &[Vec<String>]) -> String {
    let rows: Vec<String> = v.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

pub fn comparison_text(first: &str, second: &str, r: &ComparisonReport, identical: bool) -> String {
    let mut s = String::new();
    let summary = |name: &str, a: &crate::classify::ActionSummary| {
        format!(
            "{name} (dim {}, rank {}, commutant rank {}{}, fixed points {}, cyclic {})",
            a.dim,
            a.rank,
            a.commutant_rank,
            if a.commutant_abelian { ", abelian" } else { ", non-abelian" },
            a.fixed_points.clone().unwrap_or_else(|| "n/a".into()),
            opt_bool(a.cyclicity.as_bool())
        )
    };
    line(&mut s, "first", summary(first, &r.first));
    line(&mut s, "second", summary(second, &r.second));
    line(
        &mut s,
        "entropy functions",
        format!(
            "{} (max deviation {:.3e} on ‖n‖∞ ≤ 3)",
            if r.entropy.equal { "equal" } else { "differ" },
            r.entropy.max_deviation
        ),
    );
    let q = match &r.rationally_conjugate {
        QConjugacy::Conjugate { v } => format!("yes (V = {})", rows_text(v)),
        QConjugacy::NotConjugate { reason } => format!("no ({reason})"),
        QConjugacy::NotVerified { reason } => format!("not verified ({reason})"),
    };
    line(&mut s, "rationally conjugate", q);
    let z = match &r.z_conjugate {
        ZConjugacy::Conjugate { v } => format!("yes (V = {})", rows_text(v)),
        ZConjugacy::NotConjugate { obstruction } => format!("no ({obstruction})"),
        ZConjugacy::NotVerified { reason } => format!("not verified ({reason})"),
    };
    line(&mut s, "Z-conjugate", z);
    let t = match &r.time_change_q {
        TimeChange::Equivalent { permutation, c } => format!("yes (matching {permutation:?}, C = {c:?})"),
        TimeChange::NotEquivalent { permutations_checked } => format!("no ({permutations_checked} matchings checked)"),
        TimeChange::NotVerified { reason } => format!("not verified ({reason})"),
    };
    line(&mut s, "time change over Q", t);
    let i = match &r.ideal_classes {
        Some(IdealEquivalence::Equivalent { multiplier }) => format!("equivalent (multiplier {multiplier})"),
        Some(IdealEquivalence::Inequivalent { certificate }) => format!("inequivalent ({certificate})"),
        Some(IdealEquivalence::NotVerified { reason }) => format!("not verified ({reason})"),
        None => "n/a".into(),
    };
    line(&mut s, "ideal classes", i);
    line(&mut s, "distinguishing invariant", r.distinguishing_invariant.clone().unwrap_or_else(|| "none".into()));
    line(&mut s, "verdict chain (Z => Q => entropy)", if r.verdict_chain_holds { "holds" } else { "VIOLATED" }.into());
    line(&mut s, "verdict", comparison_verdict(r, identical));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn identity_action_is_reported_plainly() {
        let a = ZdAction::new(vec![IntMatrix::identity(3)]).unwrap();
        let r = analyze("id", &a, 2, Execution::Sequential);
        assert!(!r.generators[0].ergodic);
        assert_eq!(r.generators[0].cyclotomic_factor, Some(1));
        assert_eq!(r.status(), Status::Violation);
        assert!(r.maximality.is_none());
        let text = r.to_text();
        assert!(text.contains("ergodic: false"), "{text}");
    }

    #[test]
    fn example_2a_report_lines() {
        let a = ZdAction::new(vec![
            IntMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[-1, 6, -3]]),
            IntMatrix::from_i64(&[&[2, -4, -1], &[1, -4, -1], &[1, -5, -1]]),
        ])
        .unwrap();
        let r = analyze("2a", &a, 12, Execution::default());
        let text = r.to_text();
        assert!(text.contains("\ncyclic: true"), "{text}");
        assert!(text.contains("\nmaximal: true"), "{text}");
        assert!(text.contains("\nfixed_points: 1\n"), "{text}");
        assert_eq!(r.entropy_table.len(), 49);
        assert_eq!(r.status(), Status::Ok);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["fixed_points"], "1");
    }
}
