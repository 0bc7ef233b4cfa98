//! Exhaustive self-checks of the library's structural results over short words.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::matrix::{entries_from_subwords, is_parikh_m3, psi, UnitriangularMatrix};
use crate::matrix_normal::Decomposer;
use crate::mequivalence::{class_of_matrix, power_class_inequality};
use crate::powers::{
    binary_power_is_parikh, matrix_power_closed_form, matrix_power_iterated, matrix_root,
};
use crate::word_normal::{verify_form_reconstruction, verify_maximal_lift};
use crate::words::{is_square_free, words_up_to, OrderedAlphabet, Word};

const MAX_REPORTED_FAILURES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Entries of `ψ(w)` are subword counts.
    SubwordEntries,
    /// Closed-form powers agree with repeated multiplication.
    ClosedFormPowers,
    /// `m`-th roots invert `m`-th powers.
    Roots,
    /// `2c <= (m+1)ab` decides whether a binary power is Parikh.
    BinaryPowerMembership,
    /// `|C_{w^m}| >= |C_w|^m`.
    ClassPowerInequality,
    /// M-unambiguous words have a unique matrix normal form.
    UnambiguousUniqueForm,
    /// A Parikh matrix is primitive iff all its words are square-free.
    PrimitiveSquareFree,
    /// `≺`-maximal words lift to matrix normal forms.
    MaximalLift,
    /// Matrix normal forms rebuild `≺`-maximal words with matching word forms.
    FormReconstruction,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::SubwordEntries,
        Suite::ClosedFormPowers,
        Suite::Roots,
        Suite::BinaryPowerMembership,
        Suite::ClassPowerInequality,
        Suite::UnambiguousUniqueForm,
        Suite::PrimitiveSquareFree,
        Suite::MaximalLift,
        Suite::FormReconstruction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SubwordEntries => "subword-entries",
            Suite::ClosedFormPowers => "closed-form-powers",
            Suite::Roots => "roots",
            Suite::BinaryPowerMembership => "binary-power-membership",
            Suite::ClassPowerInequality => "class-power-inequality",
            Suite::UnambiguousUniqueForm => "unambiguous-unique-form",
            Suite::PrimitiveSquareFree => "primitive-square-free",
            Suite::MaximalLift => "maximal-lift",
            Suite::FormReconstruction => "form-reconstruction",
        }
    }

    pub fn run(self, max_len: usize, bound: usize) -> Result<SuiteReport> {
        match self {
            Suite::SubwordEntries => subword_entries(max_len),
            Suite::ClosedFormPowers => closed_form_powers(max_len),
            Suite::Roots => roots(max_len),
            Suite::BinaryPowerMembership => binary_power_membership(max_len),
            Suite::ClassPowerInequality => class_power_inequality(max_len, bound),
            Suite::UnambiguousUniqueForm => unambiguous_unique_form(max_len, bound),
            Suite::PrimitiveSquareFree => primitive_square_free(max_len, bound),
            Suite::MaximalLift => maximal_lift(max_len, bound),
            Suite::FormReconstruction => form_reconstruction(max_len, bound),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub cases: usize,
    pub violations: usize,
    /// The first few violating cases, rendered.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            cases: 0,
            violations: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

fn binary() -> OrderedAlphabet {
    OrderedAlphabet::parse("a,b").expect("valid")
}

fn ternary() -> OrderedAlphabet {
    OrderedAlphabet::parse("a,b,c").expect("valid")
}

/// Distinct binary Parikh matrices of words up to `max_len`, each with its least word.
fn binary_matrices(max_len: usize) -> BTreeMap<String, (UnitriangularMatrix, Word)> {
    let s = binary();
    let mut out = BTreeMap::new();
    for w in words_up_to(&s, max_len) {
        let m = psi(&s, &w);
        out.entry(m.to_string()).or_insert((m, w));
    }
    out
}

/// All 3x3 unitriangular matrices with entries at most `limit`.
fn small_matrices(limit: u32) -> Vec<UnitriangularMatrix> {
    let mut out = Vec::new();
    for a in 0..=limit {
        for b in 0..=limit {
            for c in 0..=limit {
                out.push(UnitriangularMatrix::from_upper(3, &[&[a, c], &[b]]).expect("3x3"));
            }
        }
    }
    out
}

fn subword_entries(max_len: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::SubwordEntries);
    for (s, len) in [(binary(), max_len), (ternary(), max_len.min(6))] {
        for w in words_up_to(&s, len) {
            r.check(psi(&s, &w) == entries_from_subwords(&s, &w), || {
                s.render(&w)
            });
        }
    }
    Ok(r)
}

fn power_corpus(max_len: usize) -> Vec<UnitriangularMatrix> {
    let s = ternary();
    let mut corpus: Vec<UnitriangularMatrix> = words_up_to(&s, max_len.min(5))
        .iter()
        .map(|w| psi(&s, w))
        .collect();
    corpus.extend(small_matrices(3));
    corpus
}

fn closed_form_powers(max_len: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::ClosedFormPowers);
    for x in power_corpus(max_len) {
        for m in 1..=6 {
            let ok = matrix_power_closed_form(&x, m)? == matrix_power_iterated(&x, m)?;
            r.check(ok, || format!("[{x}]^{m}"));
        }
    }
    Ok(r)
}

fn roots(max_len: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::Roots);
    for x in power_corpus(max_len) {
        for m in 1..=6 {
            let ok = matrix_root(&matrix_power_closed_form(&x, m)?, m)?.as_ref() == Some(&x);
            r.check(ok, || format!("root of [{x}]^{m}"));
        }
    }
    Ok(r)
}

fn binary_power_membership(max_len: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::BinaryPowerMembership);
    for x in small_matrices(max_len.min(6) as u32) {
        for m in 1..=6 {
            let ok =
                binary_power_is_parikh(&x, m)? == is_parikh_m3(&matrix_power_closed_form(&x, m)?)?;
            r.check(ok, || format!("[{x}]^{m}"));
        }
    }
    Ok(r)
}

fn class_power_inequality(max_len: usize, bound: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::ClassPowerInequality);
    let s = binary();
    for w in words_up_to(&s, max_len.min(bound / 2)) {
        for m in 1..=2 {
            let q = power_class_inequality(&s, &w, m, bound)?;
            r.check(q.holds, || {
                format!("{} m={m}: {} < {}", s.render(&w), q.lhs, q.rhs)
            });
        }
    }
    Ok(r)
}

fn unambiguous_unique_form(max_len: usize, bound: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::UnambiguousUniqueForm);
    let s = binary();
    let mut d = Decomposer::new(&s, bound);
    for (m, w) in binary_matrices(max_len).into_values() {
        if class_of_matrix(&s, &m, bound)?.len() != 1 {
            continue;
        }
        let n = d.normal_forms(&m)?.len();
        r.check(n == 1, || format!("{} has {n} normal forms", s.render(&w)));
    }
    Ok(r)
}

fn primitive_square_free(max_len: usize, bound: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::PrimitiveSquareFree);
    let s = binary();
    let mut d = Decomposer::new(&s, bound);
    for (m, w) in binary_matrices(max_len).into_values() {
        let primitive = d.is_primitive(&m)?;
        let square_free = class_of_matrix(&s, &m, bound)?
            .members
            .iter()
            .all(is_square_free);
        r.check(primitive == square_free, || {
            format!(
                "ψ({}): primitive={primitive}, square-free={square_free}",
                s.render(&w)
            )
        });
    }
    Ok(r)
}

fn maximal_lift(max_len: usize, bound: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::MaximalLift);
    let s = binary();
    let mut d = Decomposer::new(&s, bound);
    for w in words_up_to(&s, max_len) {
        let rep = verify_maximal_lift(&mut d, &w)?;
        r.check(rep.pass, || {
            format!(
                "{}: lifted {} not in {:?}",
                rep.word, rep.lifted, rep.matrix_forms
            )
        });
    }
    Ok(r)
}

fn form_reconstruction(max_len: usize, bound: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new(Suite::FormReconstruction);
    let s = binary();
    let mut d = Decomposer::new(&s, bound);
    for (m, _) in binary_matrices(max_len).into_values() {
        for rec in verify_form_reconstruction(&mut d, &m)?.reconstructions {
            r.check(rec.form_recovered && rec.maximal, || {
                format!(
                    "{} -> {} (pn_r {}, maximal={})",
                    rec.form, rec.word, rec.word_form, rec.maximal
                )
            });
        }
    }
    Ok(r)
}

/// Runs the given suites in order.
pub fn run_suites(suites: &[Suite], max_len: usize, bound: usize) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|s| s.run(max_len, bound)).collect()
}
