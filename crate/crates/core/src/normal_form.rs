//! Products of powers `B_k^{n_k} ... B_0^{n_0}` shared by matrix and word normal forms.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::{psi, UnitriangularMatrix};
use crate::powers::matrix_power_closed_form;
use crate::words::{word_power, OrderedAlphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor<B> {
    pub base: B,
    pub exp: usize,
}

/// Factors stored left to right, i.e. from index `k` down to index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm<B> {
    pub factors: Vec<Factor<B>>,
}

pub type MatrixNormalForm = NormalForm<UnitriangularMatrix>;
pub type WordNormalForm = NormalForm<Word>;

impl<B> NormalForm<B> {
    pub fn empty() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor with index `i`, counted from the right (index 0 is rightmost).
    pub fn from_right(&self, i: usize) -> Option<&Factor<B>> {
        self.factors
            .len()
            .checked_sub(i + 1)
            .map(|k| &self.factors[k])
    }

    /// Appends a new rightmost factor.
    pub fn push_right(&mut self, base: B, exp: usize) {
        self.factors.push(Factor { base, exp });
    }

    /// The factors with index `>= i`, i.e. the form with its `i` rightmost factors removed.
    pub fn truncate_right(&self, i: usize) -> Self
    where
        B: Clone,
    {
        Self {
            factors: self.factors[..self.factors.len() - i].to_vec(),
        }
    }
}

impl MatrixNormalForm {
    /// The ordered product of `base^exp`.
    pub fn product(&self, dim: usize) -> Result<UnitriangularMatrix> {
        let mut acc = UnitriangularMatrix::identity(dim)?;
        for f in &self.factors {
            acc = acc.multiply(&matrix_power_closed_form(&f.base, f.exp as u64)?)?;
        }
        Ok(acc)
    }

    /// Renders every base through a word with that Parikh matrix, e.g.
    /// `ψ(a)^4 ψ(b) ψ(aba)^2`; bases without a supplied witness print as matrices.
    pub fn render_with(
        &self,
        mut witness: impl FnMut(&UnitriangularMatrix) -> Option<String>,
    ) -> String {
        if self.factors.is_empty() {
            return "I".to_string();
        }
        self.factors
            .iter()
            .map(|f| {
                let base = match witness(&f.base) {
                    Some(w) => format!("ψ({w})"),
                    None => format!("[{}]", f.base),
                };
                if f.exp == 1 {
                    base
                } else {
                    format!("{base}^{}", f.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl WordNormalForm {
    /// Concatenation of `base^exp`.
    pub fn expand(&self) -> Word {
        self.factors.iter().fold(Word::empty(), |acc, f| {
            acc.concat(&word_power(&f.base, f.exp))
        })
    }

    /// Text rendering such as `a^4 b (aba)^2`. Multi-letter bases keep
    /// their parentheses even with exponent 1, e.g. `(cb)^2 (ba) (aba)^2`.
    pub fn render(&self, alphabet: &OrderedAlphabet) -> String {
        if self.factors.is_empty() {
            return crate::words::EMPTY_WORD.to_string();
        }
        self.factors
            .iter()
            .map(|f| {
                let text = alphabet.render(&f.base);
                let base = if f.base.len() > 1 {
                    format!("({text})")
                } else {
                    text
                };
                if f.exp == 1 {
                    base
                } else {
                    format!("{base}^{}", f.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// JSON mirror of the matrix form with rendered word bases.
    pub fn to_json(&self, alphabet: &OrderedAlphabet) -> serde_json::Value {
        let factors: Vec<_> = self
            .factors
            .iter()
            .map(|f| serde_json::json!({ "base": alphabet.render(&f.base), "exp": f.exp }))
            .collect();
        serde_json::json!({ "factors": factors })
    }

    /// Maps every `(v_i, n_i)` to `(ψ(v_i), n_i)`.
    pub fn lift(&self, alphabet: &OrderedAlphabet) -> MatrixNormalForm {
        NormalForm {
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    base: psi(alphabet, &f.base),
                    exp: f.exp,
                })
                .collect(),
        }
    }
}
