//! M-equivalence classes by exhaustive enumeration.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{bounded_vector, psi, UnitriangularMatrix};
use crate::words::{
    enumerate_words, parikh_vector, word_power, words_of_length, OrderedAlphabet, Word,
};

/// All words sharing one Parikh matrix, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub alphabet: OrderedAlphabet,
    pub matrix: UnitriangularMatrix,
    pub members: Vec<Word>,
}

impl EquivalenceClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    /// Lexicographically least member.
    pub fn representative(&self) -> Option<&Word> {
        self.members.first()
    }
}

/// `C_w`.
pub fn equivalence_class(
    alphabet: &OrderedAlphabet,
    w: &Word,
    bound: usize,
) -> Result<EquivalenceClass> {
    alphabet.check_word(w)?;
    if w.len() > bound {
        return Err(Error::BoundExceeded {
            required: w.len(),
            bound,
        });
    }
    let matrix = psi(alphabet, w);
    let members = enumerate_words(alphabet, &parikh_vector(alphabet, w), bound)?
        .into_iter()
        .filter(|x| psi(alphabet, x) == matrix)
        .collect();
    Ok(EquivalenceClass {
        alphabet: alphabet.clone(),
        matrix,
        members,
    })
}

/// All words whose Parikh matrix is `m`; empty when `m` is not a Parikh matrix.
pub fn class_of_matrix(
    alphabet: &OrderedAlphabet,
    m: &UnitriangularMatrix,
    bound: usize,
) -> Result<EquivalenceClass> {
    if m.dim() != alphabet.size() + 1 {
        return Err(Error::DimensionMismatch {
            expected: alphabet.size() + 1,
            found: m.dim(),
        });
    }
    let p = bounded_vector(m, bound)?;
    let members = enumerate_words(alphabet, &p, bound)?
        .into_iter()
        .filter(|x| &psi(alphabet, x) == m)
        .collect();
    Ok(EquivalenceClass {
        alphabet: alphabet.clone(),
        matrix: m.clone(),
        members,
    })
}

pub fn is_m_unambiguous(alphabet: &OrderedAlphabet, w: &Word, bound: usize) -> Result<bool> {
    Ok(equivalence_class(alphabet, w, bound)?.len() == 1)
}

/// Comparison of `|C_{w^m}|` against `|C_w|^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInequality {
    pub lhs: usize,
    pub rhs: BigUint,
    pub holds: bool,
    pub equality: bool,
}

pub fn power_class_inequality(
    alphabet: &OrderedAlphabet,
    w: &Word,
    m: usize,
    bound: usize,
) -> Result<ClassInequality> {
    if m == 0 {
        return Err(Error::PreconditionViolated(
            "exponent must be positive".into(),
        ));
    }
    if w.len() * m > bound {
        return Err(Error::BoundExceeded {
            required: w.len() * m,
            bound,
        });
    }
    let base = equivalence_class(alphabet, w, bound)?.len();
    let lhs = equivalence_class(alphabet, &word_power(w, m), bound)?.len();
    let rhs = BigUint::from(base).pow(m as u32);
    let lhs_big = BigUint::from(lhs);
    Ok(ClassInequality {
        lhs,
        holds: lhs_big >= rhs,
        equality: lhs_big == rhs,
        rhs,
    })
}

/// One row of [`conjecture_scan`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub word: String,
    pub class_size: usize,
    pub power_class_size: usize,
    pub equality: bool,
}

/// For every nonempty word of length at most `max_len` that is the least
/// member of its class, compares `|C_{w^m}|` with `|C_w|^m`.
pub fn conjecture_scan(
    alphabet: &OrderedAlphabet,
    m: usize,
    max_len: usize,
    bound: usize,
) -> Result<Vec<ScanRow>> {
    if m == 0 {
        return Err(Error::PreconditionViolated(
            "exponent must be positive".into(),
        ));
    }
    if max_len * m > bound {
        return Err(Error::BoundExceeded {
            required: max_len * m,
            bound,
        });
    }
    let mut seen: HashSet<Word> = HashSet::new();
    let mut rows = Vec::new();
    for len in 1..=max_len {
        for w in words_of_length(alphabet, len) {
            if seen.contains(&w) {
                continue;
            }
            let class = equivalence_class(alphabet, &w, bound)?;
            seen.extend(class.members.iter().cloned());
            let power_class_size = equivalence_class(alphabet, &word_power(&w, m), bound)?.len();
            let equality =
                BigUint::from(class.len()).pow(m as u32).to_usize() == Some(power_class_size);
            rows.push(ScanRow {
                word: alphabet.render(&w),
                class_size: class.len(),
                power_class_size,
                equality,
            });
        }
    }
    Ok(rows)
}

/// The ternary word `a^{N-1} c b`, whose class has `N` members.
pub fn ternary_family_word(n: usize) -> Word {
    assert!(n >= 1, "family index starts at 1");
    let mut v = vec![0u8; n - 1];
    v.extend([2, 1]);
    Word::from_indices(v)
}

pub fn scan_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("word,|C_w|,|C_{w^m}|,equality\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.word, r.class_size, r.power_class_size, r.equality
        );
    }
    out
}

pub fn scan_to_json_lines(rows: &[ScanRow]) -> String {
    rows.iter()
        .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> OrderedAlphabet {
        OrderedAlphabet::parse("a,b").unwrap()
    }

    fn rendered(class: &EquivalenceClass) -> Vec<String> {
        class
            .members
            .iter()
            .map(|w| class.alphabet.render(w))
            .collect()
    }

    #[test]
    fn aba_classes() {
        let s = ab();
        let aba = s.parse_word("aba").unwrap();
        assert_eq!(rendered(&equivalence_class(&s, &aba, 14).unwrap()), ["aba"]);
        let sq = equivalence_class(&s, &aba.power(2), 14).unwrap();
        let mut members = rendered(&sq);
        members.sort();
        assert_eq!(members, ["aabbaa", "abaaba", "baaaab"]);
        assert!(is_m_unambiguous(&s, &aba, 14).unwrap());
        assert!(!is_m_unambiguous(&s, &aba.power(2), 14).unwrap());
        assert!(is_m_unambiguous(&s, &Word::empty(), 14).unwrap());
        assert_eq!(
            rendered(&equivalence_class(&s, &Word::empty(), 14).unwrap()),
            ["λ"]
        );
    }

    #[test]
    fn class_bound() {
        let s = ab();
        let w = s.parse_word("abababababababab").unwrap();
        assert!(matches!(
            equivalence_class(&s, &w, 14),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn class_inequality() {
        let s = ab();
        let aba = s.parse_word("aba").unwrap();
        let r = power_class_inequality(&s, &aba, 2, 14).unwrap();
        assert_eq!(
            (r.lhs, r.rhs.clone(), r.holds),
            (3, BigUint::from(1u32), true)
        );
        let r = power_class_inequality(&s, &s.parse_word("abba").unwrap(), 1, 14).unwrap();
        assert!(r.equality);
        let t = OrderedAlphabet::parse("a,b,c").unwrap();
        let r = power_class_inequality(&t, &t.parse_word("abcb").unwrap(), 2, 14).unwrap();
        assert_eq!((r.lhs, r.rhs, r.equality), (1, BigUint::from(1u32), true));
    }

    #[test]
    fn family_words() {
        let t = OrderedAlphabet::parse("a,b,c").unwrap();
        assert_eq!(t.render(&ternary_family_word(1)), "cb");
        assert_eq!(t.render(&ternary_family_word(3)), "aacb");
        for n in 1..=4 {
            assert_eq!(
                equivalence_class(&t, &ternary_family_word(n), 14)
                    .unwrap()
                    .len(),
                n
            );
        }
    }

    #[test]
    fn scan_rows() {
        let t = OrderedAlphabet::parse("a,b,c").unwrap();
        let rows = conjecture_scan(&t, 2, 3, 14).unwrap();
        let acb = rows.iter().find(|r| r.word == "acb").unwrap();
        assert_eq!((acb.class_size, acb.equality), (2, true));
        assert!(rows.iter().all(|r| r.word != "cab"));
        let rows = conjecture_scan(&ab(), 1, 4, 14).unwrap();
        assert!(rows.iter().all(|r| r.equality));
        let rows = conjecture_scan(&ab(), 2, 2, 14).unwrap();
        let r = rows.iter().find(|r| r.word == "ab").unwrap();
        assert_eq!(r.class_size, 1);
        assert!(r.power_class_size >= 1);
        assert!(matches!(
            conjecture_scan(&ab(), 2, 8, 14),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn scan_export() {
        let rows = vec![ScanRow {
            word: "acb".into(),
            class_size: 2,
            power_class_size: 4,
            equality: true,
        }];
        assert_eq!(
            scan_to_csv(&rows),
            "word,|C_w|,|C_{w^m}|,equality\nacb,2,4,true\n"
        );
        assert_eq!(
            scan_to_json_lines(&rows),
            "{\"word\":\"acb\",\"class_size\":2,\"power_class_size\":4,\"equality\":true}\n"
        );
    }
}
