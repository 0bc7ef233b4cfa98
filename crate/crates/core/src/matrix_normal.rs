//! rl-Parikh normal forms of Parikh matrices.
//!
//! For `M` in `P⁺`, `μ(M)` is the largest `n` with `M = A·B^n`, `A` Parikh and
//! `B` Parikh but not the identity. `ϑ(M)` selects the admissible second-diagonal
//! sum of `B`: the largest when `μ(M) > 1`, otherwise the smallest `σ(B)` over
//! splits `M = A·B` with `A ≠ I` and `μ(A) ≠ 1` (falling back to `σ(M)` when no
//! such split exists). `S_M` collects the triples `(A, B, μ(M))` with
//! `σ(B) = ϑ(M)`, and a normal form peels one triple off the right at a time.
//!
//! Parikh membership of `A` and `B` is certified by exhaustive witness
//! search, so every operation here is bounded by the enumeration limit.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{bounded_vector, psi, UnitriangularMatrix};
use crate::normal_form::{MatrixNormalForm, NormalForm};
use crate::powers::matrix_power_closed_form;
use crate::words::{enumerate_words, OrderedAlphabet, ParikhVector, Word};

/// `(A, B, n)` with `A·B^n` equal to the decomposed matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DecompositionTriplet {
    pub a: UnitriangularMatrix,
    pub b: UnitriangularMatrix,
    pub n: usize,
}

/// `μ`, `ϑ` and `S_M` of one matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub mu: usize,
    pub theta: usize,
    /// Set when `μ = 1` and no split `M = A·B` with `A ≠ I`, `μ(A) ≠ 1`
    /// exists, so `ϑ` fell back to `σ(M)`.
    pub theta_fallback: bool,
    pub triples: Vec<DecompositionTriplet>,
}

/// Sum of the second-diagonal entries.
pub fn sigma(m: &UnitriangularMatrix) -> num_bigint::BigUint {
    m.sigma()
}

/// `A = M · (B^n)^{-1}` when that lies in `M_n`.
pub fn right_divide(
    m: &UnitriangularMatrix,
    b: &UnitriangularMatrix,
    n: usize,
) -> Result<Option<UnitriangularMatrix>> {
    if m.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: b.dim(),
        });
    }
    m.right_quotient(&matrix_power_closed_form(b, n as u64)?)
}

/// Distinct Parikh matrices of one Parikh vector with their least witnesses.
#[derive(Debug)]
struct ParikhTable {
    matrices: Vec<UnitriangularMatrix>,
    witnesses: HashMap<UnitriangularMatrix, Word>,
}

/// `μ(M)` with every decomposition `(A, B)` achieving it.
type Top = Arc<(usize, Vec<(UnitriangularMatrix, UnitriangularMatrix)>)>;

/// Memoizing engine behind the normal-form operations. Reusing one instance
/// across many matrices of the same alphabet shares the witness tables.
#[derive(Debug)]
pub struct Decomposer {
    alphabet: OrderedAlphabet,
    bound: usize,
    tables: HashMap<Vec<usize>, Arc<ParikhTable>>,
    top: HashMap<UnitriangularMatrix, Top>,
    analyses: HashMap<UnitriangularMatrix, Arc<Analysis>>,
    forms: HashMap<UnitriangularMatrix, Arc<Vec<MatrixNormalForm>>>,
}

impl Decomposer {
    pub fn new(alphabet: &OrderedAlphabet, bound: usize) -> Self {
        Self {
            alphabet: alphabet.clone(),
            bound,
            tables: HashMap::new(),
            top: HashMap::new(),
            analyses: HashMap::new(),
            forms: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn table(&mut self, p: &ParikhVector) -> Result<Arc<ParikhTable>> {
        if let Some(t) = self.tables.get(p.counts()) {
            return Ok(t.clone());
        }
        let mut matrices = Vec::new();
        let mut witnesses = HashMap::new();
        for w in enumerate_words(&self.alphabet, p, self.bound)? {
            let m = psi(&self.alphabet, &w);
            if let std::collections::hash_map::Entry::Vacant(e) = witnesses.entry(m) {
                matrices.push(e.key().clone());
                e.insert(w);
            }
        }
        let table = Arc::new(ParikhTable {
            matrices,
            witnesses,
        });
        self.tables.insert(p.counts().to_vec(), table.clone());
        Ok(table)
    }

    fn check_dim(&self, m: &UnitriangularMatrix) -> Result<()> {
        let expected = self.alphabet.size() + 1;
        if m.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: m.dim(),
            });
        }
        Ok(())
    }

    /// The lexicographically least word with Parikh matrix `m`, if any.
    pub fn witness(&mut self, m: &UnitriangularMatrix) -> Result<Option<Word>> {
        self.check_dim(m)?;
        let p = bounded_vector(m, self.bound)?;
        Ok(self.table(&p)?.witnesses.get(m).cloned())
    }

    pub fn is_parikh(&mut self, m: &UnitriangularMatrix) -> Result<bool> {
        Ok(self.witness(m)?.is_some())
    }

    fn require_nontrivial_parikh(&mut self, m: &UnitriangularMatrix) -> Result<()> {
        if !self.is_parikh(m)? {
            return Err(Error::NotAParikhMatrix);
        }
        if m.is_identity() {
            return Err(Error::PreconditionViolated(
                "the identity has no right power decomposition".into(),
            ));
        }
        Ok(())
    }

    /// All `(A, B)` with `M = A·B^n`, `A` Parikh and `B` a non-identity Parikh matrix.
    pub fn decompositions(
        &mut self,
        m: &UnitriangularMatrix,
        n: usize,
    ) -> Result<Vec<(UnitriangularMatrix, UnitriangularMatrix)>> {
        self.check_dim(m)?;
        if n == 0 {
            return Err(Error::PreconditionViolated(
                "exponent must be positive".into(),
            ));
        }
        let p = bounded_vector(m, self.bound)?;
        let limits: Vec<usize> = p.counts().iter().map(|&c| c / n).collect();
        let mut out = Vec::new();
        let mut d = vec![0usize; limits.len()];
        // Odometer over all base Parikh vectors d with n·d <= p.
        loop {
            let mut pos = 0;
            loop {
                if pos == d.len() {
                    return Ok(out);
                }
                if d[pos] < limits[pos] {
                    d[pos] += 1;
                    break;
                }
                d[pos] = 0;
                pos += 1;
            }
            let table = self.table(&ParikhVector(d.clone()))?;
            for b in &table.matrices {
                let Some(a) = right_divide(m, b, n)? else {
                    continue;
                };
                if self.is_parikh(&a)? {
                    out.push((a, b.clone()));
                }
            }
        }
    }

    /// `μ(M)` together with every decomposition achieving it.
    fn top(&mut self, m: &UnitriangularMatrix) -> Result<Top> {
        if let Some(t) = self.top.get(m) {
            return Ok(t.clone());
        }
        self.require_nontrivial_parikh(m)?;
        let p = bounded_vector(m, self.bound)?;
        let max = p.counts().iter().copied().max().unwrap_or(0);
        let mut found = None;
        for n in (1..=max).rev() {
            let decs = self.decompositions(m, n)?;
            if !decs.is_empty() {
                found = Some(Arc::new((n, decs)));
                break;
            }
        }
        // n = 1 with A = I, B = M always succeeds.
        let found = found.expect("trivial decomposition exists");
        self.top.insert(m.clone(), found.clone());
        Ok(found)
    }

    pub fn mu(&mut self, m: &UnitriangularMatrix) -> Result<usize> {
        Ok(self.top(m)?.0)
    }

    pub fn analyze(&mut self, m: &UnitriangularMatrix) -> Result<Arc<Analysis>> {
        if let Some(a) = self.analyses.get(m) {
            return Ok(a.clone());
        }
        let top = self.top(m)?;
        let (mu, decs) = (top.0, &top.1);
        let size = |x: &UnitriangularMatrix| x.sigma().to_usize().expect("bounded");
        let (theta, theta_fallback) = if mu > 1 {
            (
                decs.iter().map(|(_, b)| size(b)).max().expect("nonempty"),
                false,
            )
        } else {
            let mut best: Option<usize> = None;
            for (a, b) in decs {
                if a.is_identity() || self.mu(a)? == 1 {
                    continue;
                }
                let s = size(b);
                best = Some(best.map_or(s, |x| x.min(s)));
            }
            match best {
                Some(s) => (s, false),
                None => (size(m), true),
            }
        };
        let mut triples: Vec<DecompositionTriplet> = decs
            .iter()
            .filter(|(_, b)| size(b) == theta)
            .map(|(a, b)| DecompositionTriplet {
                a: a.clone(),
                b: b.clone(),
                n: mu,
            })
            .collect();
        triples.sort_by_cached_key(|t| (t.b.to_string(), t.a.to_string()));
        let analysis = Arc::new(Analysis {
            mu,
            theta,
            theta_fallback,
            triples,
        });
        self.analyses.insert(m.clone(), analysis.clone());
        Ok(analysis)
    }

    /// Every rl-Parikh normal form of `m`; the identity has the single empty form.
    pub fn normal_forms(&mut self, m: &UnitriangularMatrix) -> Result<Arc<Vec<MatrixNormalForm>>> {
        if let Some(f) = self.forms.get(m) {
            return Ok(f.clone());
        }
        self.check_dim(m)?;
        if !self.is_parikh(m)? {
            return Err(Error::NotAParikhMatrix);
        }
        let mut out = Vec::new();
        if m.is_identity() {
            out.push(NormalForm::empty());
        } else {
            let analysis = self.analyze(m)?;
            for t in &analysis.triples {
                for prefix in self.normal_forms(&t.a)?.iter() {
                    let mut form = prefix.clone();
                    form.push_right(t.b.clone(), t.n);
                    out.push(form);
                }
            }
        }
        let out = Arc::new(out);
        self.forms.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// True iff the only normal form is the one-factor form `M^1`. The
    /// identity counts as primitive: its only representative is the empty word.
    pub fn is_primitive(&mut self, m: &UnitriangularMatrix) -> Result<bool> {
        let forms = self.normal_forms(m)?;
        if m.is_identity() {
            return Ok(true);
        }
        Ok(forms.len() == 1 && forms[0].len() == 1 && forms[0].factors[0].exp == 1)
    }

    /// Checks that `form` is an rl-Parikh normal form of `m`: it recomposes
    /// to `m` and each peeled factor is a member of the corresponding `S_{A_i}`.
    pub fn is_normal_form_of(
        &mut self,
        m: &UnitriangularMatrix,
        form: &MatrixNormalForm,
    ) -> Result<bool> {
        let mut current = m.clone();
        for f in form.factors.iter().rev() {
            if current.is_identity() {
                return Ok(false);
            }
            let analysis = self.analyze(&current)?;
            let Some(t) = analysis
                .triples
                .iter()
                .find(|t| t.b == f.base && t.n == f.exp)
            else {
                return Ok(false);
            };
            current = t.a.clone();
        }
        Ok(current.is_identity())
    }

    /// Renders a matrix form through least witnesses, e.g. `ψ(a) ψ(b)^2 ψ(a)`.
    pub fn render_form(&mut self, form: &MatrixNormalForm) -> String {
        let alphabet = self.alphabet.clone();
        form.render_with(|b| self.witness(b).ok().flatten().map(|w| alphabet.render(&w)))
    }
}

pub fn mu(alphabet: &OrderedAlphabet, m: &UnitriangularMatrix, bound: usize) -> Result<usize> {
    Decomposer::new(alphabet, bound).mu(m)
}

pub fn theta_matrix(
    alphabet: &OrderedAlphabet,
    m: &UnitriangularMatrix,
    bound: usize,
) -> Result<usize> {
    Ok(Decomposer::new(alphabet, bound).analyze(m)?.theta)
}

/// `S_M`, ordered by the text encoding of `B`, then of `A`.
pub fn s_set(
    alphabet: &OrderedAlphabet,
    m: &UnitriangularMatrix,
    bound: usize,
) -> Result<Vec<DecompositionTriplet>> {
    Ok(Decomposer::new(alphabet, bound).analyze(m)?.triples.clone())
}

pub fn rl_normal_forms_matrix(
    alphabet: &OrderedAlphabet,
    m: &UnitriangularMatrix,
    bound: usize,
) -> Result<Vec<MatrixNormalForm>> {
    Ok(Decomposer::new(alphabet, bound)
        .normal_forms(m)?
        .as_ref()
        .clone())
}

pub fn is_primitive(
    alphabet: &OrderedAlphabet,
    m: &UnitriangularMatrix,
    bound: usize,
) -> Result<bool> {
    Decomposer::new(alphabet, bound).is_primitive(m)
}
