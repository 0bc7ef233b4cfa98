//! Closed-form powers of unitriangular matrices, exact m-th roots, and the
//! binary characterization of powers that are Parikh matrices.
//!
//! For `X` in `M_n` and `m >= 1`, entry `(i, j)` of `X^m` above the diagonal is
//!
//! ```text
//!   sum_{t=1}^{j-i} C(m, t) * P_t(i, j)
//! ```
//!
//! where `P_t(i, j)` sums the products `X[i,k1] X[k1,k2] ... X[k_{t-1},j]`
//! over all strictly increasing chains `i < k1 < ... < k_{t-1} < j`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{psi, UnitriangularMatrix};
use crate::words::{OrderedAlphabet, Word};

/// Binomial coefficient `C(m, t)`; zero when `t > m`.
pub fn binomial(m: u64, t: u64) -> BigUint {
    if t > m {
        return BigUint::zero();
    }
    let t = t.min(m - t);
    let mut acc = BigUint::one();
    for k in 0..t {
        acc = acc * (m - k) / (k + 1);
    }
    acc
}

/// Path sums `P_t(i, j)` of a matrix for every chain length `t`.
///
/// Built by dynamic programming over `t`: `P_t(i, j) = Σ_k P_{t-1}(i, k) X[k, j]`.
#[derive(Debug, Clone)]
pub struct PathSums {
    n: usize,
    // table[t - 1][i * n + j]
    table: Vec<Vec<BigUint>>,
}

impl PathSums {
    pub fn new(x: &UnitriangularMatrix) -> Self {
        let n = x.dim();
        let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(n.saturating_sub(1));
        let mut first = vec![BigUint::zero(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                first[i * n + j] = x.get(i, j).clone();
            }
        }
        table.push(first);
        for t in 2..n {
            let prev = &table[t - 2];
            let mut next = vec![BigUint::zero(); n * n];
            for i in 0..n {
                for j in i + t..n {
                    let mut acc = BigUint::zero();
                    for k in i + t - 1..j {
                        let (p, y) = (&prev[i * n + k], x.get(k, j));
                        if !p.is_zero() && !y.is_zero() {
                            acc += p * y;
                        }
                    }
                    next[i * n + j] = acc;
                }
            }
            table.push(next);
        }
        Self { n, table }
    }

    /// `P_t(i, j)` with 0-based `i < j`; zero when `t` exceeds `j - i` or `t == 0`.
    pub fn get(&self, i: usize, j: usize, t: usize) -> BigUint {
        if t == 0 || i >= j || j >= self.n || t > j - i {
            return BigUint::zero();
        }
        self.table[t - 1][i * self.n + j].clone()
    }
}

/// `X^m` through the closed-form binomial expansion.
pub fn matrix_power_closed_form(x: &UnitriangularMatrix, m: u64) -> Result<UnitriangularMatrix> {
    if m == 0 {
        return Err(Error::PreconditionViolated(
            "exponent must be positive".into(),
        ));
    }
    let n = x.dim();
    let paths = PathSums::new(x);
    let binomials: Vec<BigUint> = (0..n as u64).map(|t| binomial(m, t)).collect();
    let mut out = UnitriangularMatrix::identity(n)?;
    for i in 0..n {
        for j in i + 1..n {
            let mut acc = BigUint::zero();
            for t in 1..=(j - i).min(m as usize) {
                let p = paths.get(i, j, t);
                if !p.is_zero() {
                    acc += &binomials[t] * p;
                }
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// `X^m` by repeated multiplication, as a reference for the closed form.
pub fn matrix_power_iterated(x: &UnitriangularMatrix, m: u64) -> Result<UnitriangularMatrix> {
    let mut acc = UnitriangularMatrix::identity(x.dim())?;
    for _ in 0..m {
        acc = acc.multiply(x)?;
    }
    Ok(acc)
}

/// The unique `X` in `M_n` with `X^m = Y`, if one exists.
///
/// Entries are recovered diagonal by diagonal: the power's entry `(i, j)` is
/// `m X[i,j]` plus terms `C(m,t) P_t(i,j)`, `t >= 2`, that only involve
/// entries of `X` on lower diagonals.
pub fn matrix_root(y: &UnitriangularMatrix, m: u64) -> Result<Option<UnitriangularMatrix>> {
    if m == 0 {
        return Err(Error::PreconditionViolated(
            "exponent must be positive".into(),
        ));
    }
    let n = y.dim();
    let big_m = BigUint::from(m);
    let binomials: Vec<BigUint> = (0..n as u64).map(|t| binomial(m, t)).collect();
    let mut x = UnitriangularMatrix::identity(n)?;
    // paths[t - 1][i * n + j], filled as diagonals are recovered.
    let mut paths = vec![vec![BigUint::zero(); n * n]; n.saturating_sub(1)];
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut correction = BigUint::zero();
            for t in 2..=d {
                let mut acc = BigUint::zero();
                for k in i + t - 1..j {
                    let (p, e) = (&paths[t - 2][i * n + k], x.get(k, j));
                    if !p.is_zero() && !e.is_zero() {
                        acc += p * e;
                    }
                }
                if !acc.is_zero() {
                    correction += &binomials[t] * &acc;
                }
                paths[t - 1][i * n + j] = acc;
            }
            let target = y.get(i, j);
            if &correction > target {
                return Ok(None);
            }
            let rest = target - correction;
            if !(&rest % &big_m).is_zero() {
                return Ok(None);
            }
            let value = rest / &big_m;
            paths[0][i * n + j] = value.clone();
            x.set(i, j, value);
        }
    }
    if &matrix_power_closed_form(&x, m)? != y {
        return Ok(None);
    }
    Ok(Some(x))
}

fn binary_entries(x: &UnitriangularMatrix) -> Result<(&BigUint, &BigUint, &BigUint)> {
    if x.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: x.dim(),
        });
    }
    Ok((x.get(0, 1), x.get(1, 2), x.get(0, 2)))
}

/// Whether `X^m` is a Parikh matrix over a binary alphabet, decided from the
/// entries of `X = ((1,a,c),(0,1,b),(0,0,1))`: if `a` or `b` is zero then
/// `c` must be zero, otherwise `2c <= (m+1)ab`.
pub fn binary_power_is_parikh(x: &UnitriangularMatrix, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::PreconditionViolated(
            "exponent must be positive".into(),
        ));
    }
    let (a, b, c) = binary_entries(x)?;
    if a.is_zero() || b.is_zero() {
        return Ok(c.is_zero());
    }
    Ok(c * 2u32 <= BigUint::from(m + 1) * a * b)
}

/// Least exponent at which a binary matrix power becomes Parikh.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinPower {
    pub m: BigUint,
    /// Set when `X` is the identity, so every power is `I` (the Parikh
    /// matrix of the empty word, outside `P⁺`).
    pub identity: bool,
}

/// Least `m` with `X^m` Parikh: `max(1, ceil(2c/(ab)) - 1)` when `a, b > 0`.
/// `None` when `a` or `b` is zero but `c` is not, since no power is Parikh.
pub fn min_power_to_parikh(x: &UnitriangularMatrix) -> Result<Option<MinPower>> {
    let (a, b, c) = binary_entries(x)?;
    if a.is_zero() || b.is_zero() {
        if !c.is_zero() {
            return Ok(None);
        }
        return Ok(Some(MinPower {
            m: BigUint::one(),
            identity: a.is_zero() && b.is_zero(),
        }));
    }
    let ab = a * b;
    let ceil = (c * 2u32 + &ab - 1u32) / &ab;
    let m = if ceil > BigUint::one() {
        ceil - 1u32
    } else {
        BigUint::one()
    };
    Ok(Some(MinPower { m, identity: false }))
}

/// Outcome of comparing `v^m` and `w^m` for `m = 1..=m_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerDichotomy {
    AlwaysEquivalent,
    NeverEquivalent,
    /// Some powers agree and others do not; never expected.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub outcome: PowerDichotomy,
    /// `per_power[m - 1]` is whether `v^m` and `w^m` are M-equivalent.
    pub per_power: Vec<bool>,
}

pub fn power_equiv_dichotomy(
    alphabet: &OrderedAlphabet,
    v: &Word,
    w: &Word,
    m_max: u64,
) -> Result<DichotomyReport> {
    if m_max == 0 {
        return Err(Error::PreconditionViolated("m_max must be positive".into()));
    }
    alphabet.check_word(v)?;
    alphabet.check_word(w)?;
    let (pv, pw) = (psi(alphabet, v), psi(alphabet, w));
    let per_power = (1..=m_max)
        .map(|m| Ok(matrix_power_closed_form(&pv, m)? == matrix_power_closed_form(&pw, m)?))
        .collect::<Result<Vec<_>>>()?;
    let outcome = if per_power.iter().all(|&e| e) {
        PowerDichotomy::AlwaysEquivalent
    } else if per_power.iter().all(|&e| !e) {
        PowerDichotomy::NeverEquivalent
    } else {
        PowerDichotomy::Mixed
    };
    Ok(DichotomyReport { outcome, per_power })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::is_parikh_m3;

    fn mat(n: usize, upper: &[&[u64]]) -> UnitriangularMatrix {
        UnitriangularMatrix::from_upper(n, upper).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(7, 0), BigUint::one());
        assert_eq!(binomial(60, 30), "118264581564861424".parse().unwrap());
    }

    #[test]
    fn path_sum_edges() {
        let x = mat(4, &[&[1, 2, 3], &[4, 5], &[6]]);
        let p = PathSums::new(&x);
        assert_eq!(p.get(0, 3, 1), BigUint::from(3u32));
        // chains 0<1<3, 0<2<3
        assert_eq!(p.get(0, 3, 2), BigUint::from(1u32 * 5 + 2 * 6));
        assert_eq!(p.get(0, 3, 3), BigUint::from(1u32 * 4 * 6));
        assert_eq!(p.get(0, 3, 4), BigUint::zero());
        assert_eq!(p.get(1, 2, 2), BigUint::zero());
    }

    #[test]
    fn abb_powers() {
        let x = mat(3, &[&[1, 2], &[2]]);
        for m in 1..=10u64 {
            let expected = mat(3, &[&[m, m * m + m], &[2 * m]]);
            assert_eq!(matrix_power_closed_form(&x, m).unwrap(), expected);
        }
        assert_eq!(matrix_power_closed_form(&x, 1).unwrap(), x);
    }

    #[test]
    fn closed_form_matches_iteration_small() {
        let x = mat(5, &[&[1, 0, 2, 1], &[3, 1, 0], &[2, 2], &[1]]);
        for m in 1..=6 {
            assert_eq!(
                matrix_power_closed_form(&x, m).unwrap(),
                matrix_power_iterated(&x, m).unwrap()
            );
        }
    }

    #[test]
    fn roots() {
        let x = mat(3, &[&[1, 2], &[2]]);
        let y = matrix_power_closed_form(&x, 3).unwrap();
        assert_eq!(matrix_root(&y, 3).unwrap(), Some(x.clone()));
        assert_eq!(matrix_root(&x, 1).unwrap(), Some(x));
        assert_eq!(matrix_root(&mat(3, &[&[1, 0], &[0]]), 2).unwrap(), None);
        // divisible second diagonal, but the corner is not reachable
        assert_eq!(matrix_root(&mat(3, &[&[2, 0], &[2]]), 2).unwrap(), None);
        assert_eq!(matrix_root(&mat(3, &[&[2, 4], &[2]]), 2).unwrap(), None);
        assert_eq!(
            matrix_root(&mat(3, &[&[2, 3], &[2]]), 2).unwrap(),
            Some(mat(3, &[&[1, 1], &[1]]))
        );
    }

    #[test]
    fn binary_power_membership_example() {
        let x = mat(3, &[&[2, 9], &[2]]);
        assert!(binary_power_is_parikh(&x, 4).unwrap());
        for m in 1..4 {
            assert!(!binary_power_is_parikh(&x, m).unwrap());
        }
        assert_eq!(
            matrix_power_closed_form(&x, 4).unwrap(),
            mat(3, &[&[8, 60], &[8]])
        );
        assert!(binary_power_is_parikh(&mat(3, &[&[0, 0], &[1]]), 7).unwrap());
        assert!(matches!(
            binary_power_is_parikh(&mat(4, &[]), 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minimal_powers() {
        let min = |x| min_power_to_parikh(&x).unwrap();
        assert_eq!(
            min(mat(3, &[&[2, 9], &[2]])),
            Some(MinPower {
                m: 4u32.into(),
                identity: false
            })
        );
        assert_eq!(min(mat(3, &[&[2, 3], &[2]])).unwrap().m, BigUint::one());
        assert_eq!(min(mat(3, &[&[0, 1], &[1]])), None);
        assert_eq!(
            min(mat(3, &[])),
            Some(MinPower {
                m: BigUint::one(),
                identity: true
            })
        );
        assert_eq!(
            min(mat(3, &[&[0, 0], &[3]])),
            Some(MinPower {
                m: BigUint::one(),
                identity: false
            })
        );
    }

    #[test]
    fn minimal_power_agrees_with_scan() {
        for a in 0..=4u64 {
            for b in 0..=4u64 {
                for c in 0..=20u64 {
                    let x = mat(3, &[&[a, c], &[b]]);
                    let scanned = (1..=64u64).find(|&m| {
                        is_parikh_m3(&matrix_power_closed_form(&x, m).unwrap()).unwrap()
                    });
                    let got = min_power_to_parikh(&x).unwrap().map(|r| r.m);
                    assert_eq!(got, scanned.map(BigUint::from), "a={a} b={b} c={c}");
                }
            }
        }
    }

    #[test]
    fn dichotomy() {
        let s = OrderedAlphabet::parse("a,b").unwrap();
        let w = |t: &str| s.parse_word(t).unwrap();
        let r = power_equiv_dichotomy(&s, &w("ab"), &w("ba"), 5).unwrap();
        assert_eq!(r.outcome, PowerDichotomy::NeverEquivalent);
        let r = power_equiv_dichotomy(&s, &w("abba"), &w("baab"), 5).unwrap();
        assert_eq!(r.outcome, PowerDichotomy::AlwaysEquivalent);
        let r = power_equiv_dichotomy(&s, &w("abb"), &w("abb"), 5).unwrap();
        assert_eq!(r.per_power, vec![true; 5]);
    }
}
