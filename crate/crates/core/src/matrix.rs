//! The monoid `M_n` of upper unitriangular nonnegative-integer matrices and
//! the Parikh matrix morphism.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{count_subword, enumerate_words, OrderedAlphabet, ParikhVector, Word};

/// An `n x n` upper triangular matrix with unit diagonal and nonnegative
/// integer entries. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct UnitriangularMatrix {
    n: usize,
    entries: Vec<BigUint>,
}

impl UnitriangularMatrix {
    pub fn identity(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMatrix(format!("dimension {n} is below 2")));
        }
        let mut entries = vec![BigUint::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigUint::one();
        }
        Ok(Self { n, entries })
    }

    /// Builds a matrix from full rows, checking the unitriangular shape.
    pub fn from_rows(rows: Vec<Vec<BigUint>>) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::identity(n)?;
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, x) in row.into_iter().enumerate() {
                let expected_fixed = match j.cmp(&i) {
                    std::cmp::Ordering::Less => Some(BigUint::zero()),
                    std::cmp::Ordering::Equal => Some(BigUint::one()),
                    std::cmp::Ordering::Greater => None,
                };
                match expected_fixed {
                    Some(v) if v != x => {
                        return Err(Error::InvalidMatrix(format!(
                            "entry ({}, {}) must be {v}, found {x}",
                            i + 1,
                            j + 1
                        )))
                    }
                    Some(_) => {}
                    None => m.entries[i * n + j] = x,
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from its strictly-upper part only: `upper[i]` lists
    /// entries `(i, i+1), (i, i+2), ...`.
    pub fn from_upper<T: Into<BigUint> + Copy>(n: usize, upper: &[&[T]]) -> Result<Self> {
        let mut m = Self::identity(n)?;
        if upper.len() > n - 1 {
            return Err(Error::InvalidMatrix("too many rows".into()));
        }
        for (i, row) in upper.iter().enumerate() {
            if row.len() > n - 1 - i {
                return Err(Error::InvalidMatrix(format!("row {} too long", i + 1)));
            }
            for (k, &x) in row.iter().enumerate() {
                m.entries[i * n + i + 1 + k] = x.into();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: BigUint) {
        debug_assert!(i < j);
        self.entries[i * self.n + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<BigUint>> {
        self.entries
            .chunks(self.n)
            .map(<[BigUint]>::to_vec)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    /// Entries `(i, i+1)`.
    pub fn second_diagonal(&self) -> Vec<BigUint> {
        (0..self.n - 1)
            .map(|i| self.get(i, i + 1).clone())
            .collect()
    }

    /// Sum of the second-diagonal entries.
    pub fn sigma(&self) -> BigUint {
        self.second_diagonal().into_iter().sum()
    }

    /// The second diagonal read as a Parikh vector, if every entry fits in `usize`.
    pub fn parikh_vector(&self) -> Option<ParikhVector> {
        self.second_diagonal()
            .iter()
            .map(ToPrimitive::to_usize)
            .collect::<Option<Vec<_>>>()
            .map(ParikhVector)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        check_dims(self.n, other.n)?;
        let n = self.n;
        let mut out = Self::identity(n)?;
        for i in 0..n {
            for j in i + 1..n {
                let mut acc = BigUint::zero();
                for k in i..=j {
                    let (x, y) = (self.get(i, k), other.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    /// The exact integer inverse; entries may be negative.
    pub fn inverse(&self) -> Vec<Vec<BigInt>> {
        let n = self.n;
        let mut inv = vec![vec![BigInt::zero(); n]; n];
        // Back substitution column by column on X·Y = I, Y upper unitriangular.
        for j in 0..n {
            inv[j][j] = BigInt::one();
            for i in (0..j).rev() {
                let mut acc = BigInt::zero();
                for k in i + 1..=j {
                    let x = self.get(i, k);
                    if !x.is_zero() {
                        acc += BigInt::from(x.clone()) * &inv[k][j];
                    }
                }
                inv[i][j] = -acc;
            }
        }
        inv
    }

    /// Returns `A` with `A · divisor = self`, if `A` lies in `M_n`.
    ///
    /// Solved row by row by forward substitution: entry `(i, j)` of `A`
    /// only depends on entries `(i, k)` with `k < j`.
    pub fn right_quotient(&self, divisor: &Self) -> Result<Option<Self>> {
        check_dims(self.n, divisor.n)?;
        let n = self.n;
        let mut a = Self::identity(n)?;
        for i in 0..n {
            for j in i + 1..n {
                let mut known = BigUint::zero();
                for k in i..j {
                    let (x, y) = (a.get(i, k), divisor.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        known += x * y;
                    }
                }
                let target = self.get(i, j);
                if &known > target {
                    return Ok(None);
                }
                a.entries[i * n + j] = target - known;
            }
        }
        Ok(Some(a))
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Text encoding: rows separated by `;`, entries by `,`.
impl fmt::Display for UnitriangularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n)
            .map(|row| {
                row.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        f.write_str(&rows.join(";"))
    }
}

impl FromStr for UnitriangularMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .trim()
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<BigUint>()
                            .map_err(|_| Error::InvalidMatrix(format!("bad entry {:?}", x.trim())))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

/// JSON form `{"n":3,"rows":[[1,2,9],[0,1,2],[0,0,1]]}`. Entries beyond
/// `u64` are written as decimal strings; both forms are accepted on input.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<JsonEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonEntry {
    Small(u64),
    Big(String),
}

impl From<UnitriangularMatrix> for MatrixJson {
    fn from(m: UnitriangularMatrix) -> Self {
        let rows = m
            .rows()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| match x.to_u64() {
                        Some(v) => JsonEntry::Small(v),
                        None => JsonEntry::Big(x.to_string()),
                    })
                    .collect()
            })
            .collect();
        Self { n: m.n, rows }
    }
}

impl TryFrom<MatrixJson> for UnitriangularMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        let rows = json
            .rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        JsonEntry::Small(v) => Ok(BigUint::from(v)),
                        JsonEntry::Big(s) => s
                            .parse::<BigUint>()
                            .map_err(|_| Error::InvalidMatrix(format!("bad entry {s:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Self::from_rows(rows)?;
        if m.n != json.n {
            return Err(Error::InvalidMatrix(format!(
                "declared n = {} but {} rows given",
                json.n, m.n
            )));
        }
        Ok(m)
    }
}

/// Parikh matrix of `w`: the product of the generator matrices of its letters.
///
/// Right-multiplying by the generator of letter `q` adds column `q` to
/// column `q + 1`, so each letter costs `O(s)` additions.
pub fn psi(alphabet: &OrderedAlphabet, w: &Word) -> UnitriangularMatrix {
    let n = alphabet.size() + 1;
    let mut m = UnitriangularMatrix::identity(n).expect("alphabet is nonempty");
    for &q in w.indices() {
        let q = q as usize;
        for i in 0..=q {
            let add = m.entries[i * n + q].clone();
            m.entries[i * n + q + 1] += add;
        }
    }
    m
}

/// Builds the matrix entry by entry from subword counts:
/// entry `(i, j+1)` is `|w|_{a_i a_{i+1} ... a_j}`.
pub fn entries_from_subwords(alphabet: &OrderedAlphabet, w: &Word) -> UnitriangularMatrix {
    let s = alphabet.size();
    let mut m = UnitriangularMatrix::identity(s + 1).expect("alphabet is nonempty");
    for i in 0..s {
        for j in i..s {
            let pattern = Word::from_indices((i as u8..=j as u8).collect());
            m.set(i, j + 1, count_subword(w, &pattern));
        }
    }
    m
}

/// Membership test in `P_Σ` for 3 x 3 matrices: `M_{1,3} <= M_{1,2} · M_{2,3}`.
pub fn is_parikh_m3(m: &UnitriangularMatrix) -> Result<bool> {
    check_dims(3, m.dim())?;
    Ok(m.get(0, 2) <= &(m.get(0, 1) * m.get(1, 2)))
}

/// The lexicographically least word whose Parikh matrix is `m`, found by
/// searching all words with the Parikh vector on the second diagonal.
pub fn find_witness(
    alphabet: &OrderedAlphabet,
    m: &UnitriangularMatrix,
    bound: usize,
) -> Result<Option<Word>> {
    check_dims(alphabet.size() + 1, m.dim())?;
    let p = bounded_vector(m, bound)?;
    Ok(enumerate_words(alphabet, &p, bound)?
        .into_iter()
        .find(|w| &psi(alphabet, w) == m))
}

/// The second diagonal as a Parikh vector, rejecting totals above `bound`.
pub(crate) fn bounded_vector(m: &UnitriangularMatrix, bound: usize) -> Result<ParikhVector> {
    let too_big = || Error::BoundExceeded {
        required: m.sigma().to_usize().unwrap_or(usize::MAX),
        bound,
    };
    let p = m.parikh_vector().ok_or_else(too_big)?;
    if p.total() > bound {
        return Err(too_big());
    }
    Ok(p)
}

/// A matrix paired with its alphabet and, when known, a word it is the
/// Parikh matrix of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParikhMatrix {
    matrix: UnitriangularMatrix,
    alphabet: OrderedAlphabet,
    witness: Option<Word>,
}

impl ParikhMatrix {
    pub fn of_word(alphabet: &OrderedAlphabet, w: &Word) -> Self {
        Self {
            matrix: psi(alphabet, w),
            alphabet: alphabet.clone(),
            witness: Some(w.clone()),
        }
    }

    /// Certifies `m` by witness search; fails with `NotAParikhMatrix` when no word matches.
    pub fn certify(
        alphabet: &OrderedAlphabet,
        m: UnitriangularMatrix,
        bound: usize,
    ) -> Result<Self> {
        match find_witness(alphabet, &m, bound)? {
            Some(w) => Ok(Self {
                matrix: m,
                alphabet: alphabet.clone(),
                witness: Some(w),
            }),
            None => Err(Error::NotAParikhMatrix),
        }
    }

    pub fn matrix(&self) -> &UnitriangularMatrix {
        &self.matrix
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn witness(&self) -> Option<&Word> {
        self.witness.as_ref()
    }
}
