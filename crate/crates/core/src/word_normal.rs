//! rl-Parikh normal forms of words and the `≺` order on M-equivalent words.
//!
//! `τ(w)` is the largest `n` with `w = u v^n`, `v` nonempty. `θ(w)` picks the
//! length of `v`: the longest base achieving `τ(w)` when `τ(w) > 1`, otherwise
//! the shortest suffix `v` whose prefix `u` is nonempty with `τ(u) ≠ 1`
//! (or `|w|` if there is none). `ρ(w)` peels `v^{τ(w)}` off the right, and
//! iterating `ρ` yields the normal form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::psi;
use crate::matrix_normal::Decomposer;
use crate::mequivalence::{class_of_matrix, EquivalenceClass};
use crate::normal_form::{MatrixNormalForm, NormalForm, WordNormalForm};
use crate::words::{enumerate_words, OrderedAlphabet, Word};

/// How many consecutive copies of the length-`period` suffix end `s`.
fn suffix_repetitions(s: &[u8], period: usize) -> usize {
    let block = &s[s.len() - period..];
    let mut reps = 1;
    while (reps + 1) * period <= s.len() {
        let start = s.len() - (reps + 1) * period;
        if &s[start..start + period] != block {
            break;
        }
        reps += 1;
    }
    reps
}

fn tau_of(s: &[u8]) -> usize {
    (1..=s.len())
        .map(|p| suffix_repetitions(s, p))
        .max()
        .unwrap_or(0)
}

pub fn tau(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(tau_of(w.indices()))
}

/// Whether `θ(w)` was decided by the longest base ending `w` in `v^τ` with
/// an empty prefix, a case the nonempty-prefix reading would exclude.
fn theta_and_note(s: &[u8]) -> (usize, usize, bool) {
    let t = tau_of(s);
    if t > 1 {
        let best = (1..=s.len() / t)
            .filter(|&p| suffix_repetitions(s, p) >= t)
            .max()
            .expect("τ is attained");
        (t, best, best * t == s.len())
    } else {
        let best = (1..s.len())
            .find(|&len| tau_of(&s[..s.len() - len]) != 1)
            .unwrap_or(s.len());
        (t, best, false)
    }
}

pub fn theta_word(w: &Word) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(theta_and_note(w.indices()).1)
}

/// `(u, v, n)` with `w = u v^n`, `n = τ(w)` and `|v| = θ(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoTriplet {
    pub prefix: Word,
    pub base: Word,
    pub exp: usize,
    /// Set when the prefix is empty while `exp > 1`.
    pub empty_prefix_power: bool,
}

pub fn rho(w: &Word) -> Result<RhoTriplet> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (t, len, note) = theta_and_note(w.indices());
    Ok(RhoTriplet {
        prefix: w.prefix(w.len() - len * t),
        base: w.suffix(len),
        exp: t,
        empty_prefix_power: note,
    })
}

/// The rl-Parikh normal form of a nonempty word.
pub fn pn_r(w: &Word) -> Result<WordNormalForm> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut rev = Vec::new();
    let mut rest = w.clone();
    while !rest.is_empty() {
        let r = rho(&rest)?;
        rev.push((r.base, r.exp));
        rest = r.prefix;
    }
    let mut form = NormalForm::empty();
    for (base, exp) in rev.into_iter().rev() {
        form.push_right(base, exp);
    }
    Ok(form)
}

/// `≺` on two normal forms, compared from the rightmost factor. The caller
/// guarantees the underlying words are distinct and M-equivalent.
pub fn precedes_forms(left: &WordNormalForm, right: &WordNormalForm) -> bool {
    for i in 0..left.len().min(right.len()) {
        let (f, g) = (
            left.from_right(i).expect("in range"),
            right.from_right(i).expect("in range"),
        );
        if f == g {
            continue;
        }
        return f.exp < g.exp
            || (f.exp == g.exp && f.exp == 1 && f.base.len() > g.base.len())
            || (f.exp == g.exp && f.exp > 1 && f.base.len() < g.base.len());
    }
    false
}

/// `w ≺ w2`, after checking that the words are distinct and M-equivalent.
pub fn precedes(alphabet: &OrderedAlphabet, w: &Word, w2: &Word) -> Result<bool> {
    if w == w2 {
        return Err(Error::EqualWords);
    }
    if psi(alphabet, w) != psi(alphabet, w2) {
        return Err(Error::NotMEquivalent);
    }
    if w.is_empty() || w2.is_empty() {
        // Only λ is M-equivalent to λ.
        return Err(Error::EqualWords);
    }
    Ok(precedes_forms(&pn_r(w)?, &pn_r(w2)?))
}

/// Members of the class that no other member dominates under `≺`.
pub fn maximal_words(class: &EquivalenceClass) -> Vec<Word> {
    if class.members.iter().any(Word::is_empty) {
        return class.members.clone();
    }
    let forms: Vec<WordNormalForm> = class
        .members
        .iter()
        .map(|w| pn_r(w).expect("nonempty"))
        .collect();
    class
        .members
        .iter()
        .zip(&forms)
        .enumerate()
        .filter(|(i, (_, f))| {
            !forms
                .iter()
                .enumerate()
                .any(|(j, g)| j != *i && precedes_forms(f, g))
        })
        .map(|(_, (w, _))| w.clone())
        .collect()
}

pub fn lift_to_matrix_form(alphabet: &OrderedAlphabet, nf: &WordNormalForm) -> MatrixNormalForm {
    nf.lift(alphabet)
}

/// Outcome of checking that a `≺`-maximal word lifts to a matrix normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalLiftReport {
    pub word: String,
    pub maximal: bool,
    pub word_form: String,
    pub lifted: String,
    pub matrix_forms: Vec<String>,
    pub lifted_is_normal_form: bool,
    pub pass: bool,
}

/// If `w` is `≺`-maximal in its class, checks that the lift of `pn_r(w)` is
/// among the rl-Parikh normal forms of `ψ(w)`. Non-maximal words pass vacuously.
pub fn verify_maximal_lift(decomposer: &mut Decomposer, w: &Word) -> Result<MaximalLiftReport> {
    let alphabet = decomposer.alphabet().clone();
    if w.len() > decomposer.bound() {
        return Err(Error::BoundExceeded {
            required: w.len(),
            bound: decomposer.bound(),
        });
    }
    let m = psi(&alphabet, w);
    let forms = decomposer.normal_forms(&m)?;
    let matrix_forms: Vec<String> = forms.iter().map(|f| decomposer.render_form(f)).collect();
    if w.is_empty() {
        return Ok(MaximalLiftReport {
            word: alphabet.render(w),
            maximal: true,
            word_form: crate::words::EMPTY_WORD.into(),
            lifted: "I".into(),
            lifted_is_normal_form: forms.iter().any(NormalForm::is_empty),
            pass: forms.iter().any(NormalForm::is_empty),
            matrix_forms,
        });
    }
    let class = class_of_matrix(&alphabet, &m, decomposer.bound())?;
    let maximal = maximal_words(&class).contains(w);
    let nf = pn_r(w)?;
    let lifted = lift_to_matrix_form(&alphabet, &nf);
    let lifted_is_normal_form = forms.contains(&lifted);
    Ok(MaximalLiftReport {
        word: alphabet.render(w),
        maximal,
        word_form: nf.render(&alphabet),
        lifted: decomposer.render_form(&lifted),
        matrix_forms,
        lifted_is_normal_form,
        pass: !maximal || lifted_is_normal_form,
    })
}

/// One word built from a matrix normal form by choosing a witness per base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reconstruction {
    pub form: String,
    pub word: String,
    pub word_form: String,
    pub form_recovered: bool,
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReconstructionReport {
    pub reconstructions: Vec<Reconstruction>,
    pub pass: bool,
}

impl ReconstructionReport {
    /// Distinct reconstructed words, in lexicographic order.
    pub fn words(&self) -> Vec<String> {
        let mut w: Vec<String> = self
            .reconstructions
            .iter()
            .map(|r| r.word.clone())
            .collect();
        w.sort();
        w.dedup();
        w
    }
}

/// For every normal form of `m` and every choice of witness words for its
/// bases, builds `w = v_k^{n_k} ... v_0^{n_0}` and checks that `pn_r(w)`
/// returns exactly that factorization and that `w` is `≺`-maximal.
pub fn verify_form_reconstruction(
    decomposer: &mut Decomposer,
    m: &crate::matrix::UnitriangularMatrix,
) -> Result<ReconstructionReport> {
    let alphabet = decomposer.alphabet().clone();
    let bound = decomposer.bound();
    let forms = decomposer.normal_forms(m)?;
    let class = class_of_matrix(&alphabet, m, bound)?;
    let maximal = maximal_words(&class);
    let mut reconstructions = Vec::new();
    for form in forms.iter() {
        let rendered = decomposer.render_form(form);
        let mut choices: Vec<Vec<Word>> = Vec::with_capacity(form.len());
        for f in &form.factors {
            let p = f.base.parikh_vector().ok_or(Error::BoundExceeded {
                required: usize::MAX,
                bound,
            })?;
            let ws: Vec<Word> = enumerate_words(&alphabet, &p, bound)?
                .into_iter()
                .filter(|w| psi(&alphabet, w) == f.base)
                .collect();
            choices.push(ws);
        }
        let mut picks = vec![0usize; choices.len()];
        loop {
            let mut expected = NormalForm::empty();
            for (f, (options, &k)) in form.factors.iter().zip(choices.iter().zip(&picks)) {
                expected.push_right(options[k].clone(), f.exp);
            }
            let w = expected.expand();
            let (word_form, form_recovered) = if w.is_empty() {
                (crate::words::EMPTY_WORD.to_string(), expected.is_empty())
            } else {
                let nf = pn_r(&w)?;
                (nf.render(&alphabet), nf == expected)
            };
            reconstructions.push(Reconstruction {
                form: rendered.clone(),
                word: alphabet.render(&w),
                word_form,
                form_recovered,
                maximal: maximal.contains(&w),
            });
            // advance the mixed-radix counter over witness choices
            let mut pos = picks.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                picks[pos] += 1;
                if picks[pos] < choices[pos].len() {
                    break;
                }
                picks[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX || picks.is_empty() {
                break;
            }
        }
    }
    let pass = reconstructions
        .iter()
        .all(|r| r.form_recovered && r.maximal);
    Ok(ReconstructionReport {
        reconstructions,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mequivalence::equivalence_class;
    use crate::words::{words_up_to, DEFAULT_ENUM_BOUND as BOUND};

    fn abc() -> OrderedAlphabet {
        OrderedAlphabet::parse("a,b,c").unwrap()
    }

    fn w(t: &str) -> Word {
        abc().parse_word(t).unwrap()
    }

    /// Reference τ: try every (u, v, n) with w = u v^n.
    fn tau_oracle(x: &Word) -> usize {
        let mut best = 0;
        for vlen in 1..=x.len() {
            for n in 1..=x.len() / vlen {
                let v = x.suffix(vlen);
                let u = x.prefix(x.len() - vlen * n);
                if u.concat(&v.power(n)) == *x {
                    best = best.max(n);
                }
            }
        }
        best
    }

    /// Reference θ straight from the set definitions.
    fn theta_oracle(x: &Word) -> usize {
        let t = tau_oracle(x);
        if t > 1 {
            (1..=x.len())
                .filter(|&l| l * t <= x.len())
                .filter(|&l| {
                    let v = x.suffix(l);
                    x.prefix(x.len() - l * t).concat(&v.power(t)) == *x
                })
                .max()
                .unwrap()
        } else {
            (1..x.len())
                .filter(|&l| tau_oracle(&x.prefix(x.len() - l)) != 1)
                .min()
                .unwrap_or(x.len())
        }
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&w("bbabbabba")).unwrap(), 3);
        assert_eq!(tau(&w("a")).unwrap(), 1);
        assert_eq!(tau(&w("acccabab")).unwrap(), 2);
        assert_eq!(tau(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_word(&w("bbabbabba")).unwrap(), 3);
        assert_eq!(theta_word(&w("a")).unwrap(), 1);
        // prefix cbcbb ends in b^2, so the single letter a already qualifies
        assert_eq!(theta_word(&w("cbcbba")).unwrap(), 1);
        assert_eq!(theta_word(&w("cbc")).unwrap(), 3);
        assert_eq!(theta_word(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn tau_theta_match_oracles() {
        for x in words_up_to(&abc(), 7).into_iter().skip(1) {
            assert_eq!(tau(&x).unwrap(), tau_oracle(&x), "{}", abc().render(&x));
            assert_eq!(
                theta_word(&x).unwrap(),
                theta_oracle(&x),
                "{}",
                abc().render(&x)
            );
        }
    }

    #[test]
    fn rho_examples() {
        let r = rho(&w("bbabbabba")).unwrap();
        assert_eq!((r.prefix, r.base, r.exp), (Word::empty(), w("bba"), 3));
        assert!(r.empty_prefix_power);
        let r = rho(&w("cbcbbaabaaba")).unwrap();
        assert_eq!((r.prefix, r.base, r.exp), (w("cbcbba"), w("aba"), 2));
        assert!(!r.empty_prefix_power);
        let r = rho(&w("a")).unwrap();
        assert_eq!((r.prefix, r.base, r.exp), (Word::empty(), w("a"), 1));
    }

    #[test]
    fn normal_form_examples() {
        let s = abc();
        assert_eq!(pn_r(&w("bbabbabba")).unwrap().render(&s), "(bba)^3");
        assert_eq!(pn_r(&w("acccabab")).unwrap().render(&s), "a c^3 (ab)^2");
        assert_eq!(
            pn_r(&w("cbcbbaabaaba")).unwrap().render(&s),
            "(cbc) b^2 a (aba)^2"
        );
        assert_eq!(
            pn_r(&w("cbcbbaaba")).unwrap().render(&s),
            "(cbc) b^2 a^2 (ba)"
        );
    }

    #[test]
    fn expansion_and_chop_off() {
        for x in words_up_to(&abc(), 6).into_iter().skip(1) {
            let nf = pn_r(&x).unwrap();
            assert_eq!(nf.expand(), x);
            for i in 1..nf.len() {
                let head = nf.truncate_right(i);
                assert_eq!(pn_r(&head.expand()).unwrap(), head);
            }
        }
    }

    fn example_class() -> EquivalenceClass {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let m = crate::matrix::UnitriangularMatrix::from_upper(3, &[&[8u32, 16], &[3]]).unwrap();
        class_of_matrix(&s, &m, BOUND).unwrap()
    }

    #[test]
    fn precedence() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let x = |t: &str| s.parse_word(t).unwrap();
        assert!(precedes(&s, &x("aaaaabbabaa"), &x("aaaababaaba")).unwrap());
        assert!(!precedes(&s, &x("aaaababaaba"), &x("aaaaabbabaa")).unwrap());
        assert!(precedes(&s, &x("baaaaaaaabb"), &x("aaaababaaba")).unwrap());
        assert_eq!(precedes(&s, &x("abba"), &x("abba")), Err(Error::EqualWords));
        assert_eq!(precedes(&s, &x("ab"), &x("ba")), Err(Error::NotMEquivalent));
    }

    #[test]
    fn maximal_in_example_class() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let class = example_class();
        assert_eq!(class.len(), 10);
        let max: Vec<String> = maximal_words(&class).iter().map(|x| s.render(x)).collect();
        assert_eq!(max, ["aaaababaaba", "aabaaaabaab"]);
    }

    #[test]
    fn maximal_small_classes() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let single = equivalence_class(&s, &s.parse_word("aba").unwrap(), BOUND).unwrap();
        assert_eq!(maximal_words(&single), single.members);
        let class = equivalence_class(&s, &s.parse_word("abaaba").unwrap(), BOUND).unwrap();
        let forms: Vec<_> = class.members.iter().map(|x| pn_r(x).unwrap()).collect();
        let oracle: Vec<Word> = class
            .members
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                (0..forms.len()).all(|j| j == *i || !precedes_forms(&forms[*i], &forms[j]))
            })
            .map(|(_, x)| x.clone())
            .collect();
        assert_eq!(maximal_words(&class), oracle);
        assert!(!oracle.is_empty());
    }

    #[test]
    fn lifts() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let x = |t: &str| s.parse_word(t).unwrap();
        let nf = pn_r(&x("bbabbabba")).unwrap();
        let lifted = lift_to_matrix_form(&s, &nf);
        assert_eq!(lifted.factors.len(), 1);
        assert_eq!(
            (&lifted.factors[0].base, lifted.factors[0].exp),
            (&psi(&s, &x("bba")), 3)
        );

        let mut d = Decomposer::new(&s, BOUND);
        let lifted = lift_to_matrix_form(&s, &pn_r(&x("aaaababaaba")).unwrap());
        assert_eq!(d.render_form(&lifted), "ψ(a)^4 ψ(b) ψ(aba)^2");
        let lifted = lift_to_matrix_form(&s, &pn_r(&x("aabaaaabaab")).unwrap());
        assert_eq!(d.render_form(&lifted), "ψ(a)^2 ψ(b) ψ(a)^2 ψ(aab)^2");
    }

    #[test]
    fn maximal_lift_reports() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let mut d = Decomposer::new(&s, BOUND);
        let r = verify_maximal_lift(&mut d, &s.parse_word("aaaababaaba").unwrap()).unwrap();
        assert!(r.maximal && r.pass);
        assert_eq!(r.lifted, "ψ(a)^4 ψ(b) ψ(aba)^2");
        let r = verify_maximal_lift(&mut d, &s.parse_word("aba").unwrap()).unwrap();
        assert!(r.maximal && r.pass);
        let r = verify_maximal_lift(&mut d, &s.parse_word("aaaaabbabaa").unwrap()).unwrap();
        assert!(!r.maximal && r.pass);
    }

    #[test]
    fn reconstruction_reports() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let mut d = Decomposer::new(&s, BOUND);
        let m = crate::matrix::UnitriangularMatrix::from_upper(3, &[&[8u32, 16], &[3]]).unwrap();
        let r = verify_form_reconstruction(&mut d, &m).unwrap();
        assert!(r.pass);
        assert_eq!(r.words(), ["aaaababaaba", "aabaaaabaab"]);

        let r = verify_form_reconstruction(&mut d, &psi(&s, &s.parse_word("a").unwrap())).unwrap();
        assert!(r.pass);
        assert_eq!(r.words(), ["a"]);

        let r =
            verify_form_reconstruction(&mut d, &psi(&s, &s.parse_word("abba").unwrap())).unwrap();
        assert!(r.pass);
        assert_eq!(r.words(), ["abba", "baab"]);
    }
}
