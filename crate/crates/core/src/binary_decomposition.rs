//! Right power decomposition `M = A·B^n` of binary Parikh matrices by solving
//! the entry equations directly.
//!
//! With `M = ((1,u,t),(0,1,v))`, `A = ((1,p,r),(0,1,q))` and
//! `B = ((1,x,z),(0,1,y))`, the product `A·B^n` equals `M` iff
//!
//! ```text
//!   p + n x = u,   q + n y = v,   r + n p y + n z + C(n,2) x y = t,
//! ```
//!
//! and both factors are Parikh iff `r <= pq` and `z <= xy`. The search starts
//! at `n = max(u, v)` and lowers `n` until some solution exists.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::UnitriangularMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecomposeMode {
    /// Bases restricted to `x, y > 0`; errors when no exponent works.
    Faithful,
    /// Bases with `x, y >= 0`, not both zero.
    #[default]
    Complete,
}

/// One solution `(n, p, q, r, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BinarySolution {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl BinarySolution {
    /// The factors `(A, B)`.
    pub fn matrices(&self) -> (UnitriangularMatrix, UnitriangularMatrix) {
        let a = UnitriangularMatrix::from_upper(3, &[&[self.p, self.r], &[self.q]]).expect("3x3");
        let b = UnitriangularMatrix::from_upper(3, &[&[self.x, self.z], &[self.y]]).expect("3x3");
        (a, b)
    }
}

fn small(x: &BigUint) -> Result<u64> {
    x.to_u64()
        .filter(|&v| v <= u32::MAX as u64)
        .ok_or_else(|| Error::PreconditionViolated(format!("entry {x} too large")))
}

/// Solutions at the largest exponent that admits any, sorted.
pub fn decompose_binary(
    m: &UnitriangularMatrix,
    mode: DecomposeMode,
) -> Result<Vec<BinarySolution>> {
    if m.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: m.dim(),
        });
    }
    let (u, v, t) = (
        small(m.get(0, 1))?,
        small(m.get(1, 2))?,
        small(m.get(0, 2))?,
    );
    if u == 0 || v == 0 {
        return Err(Error::PreconditionViolated(
            "both second-diagonal entries must be positive".into(),
        ));
    }
    let min_base = match mode {
        DecomposeMode::Faithful => 1,
        DecomposeMode::Complete => 0,
    };
    for n in (1..=u.max(v)).rev() {
        let mut found = Vec::new();
        for x in min_base..=u / n {
            for y in min_base..=v / n {
                if x == 0 && y == 0 {
                    continue;
                }
                let (p, q) = (u - n * x, v - n * y);
                // r = t - n p y - n z - C(n,2) x y, with 0 <= r <= pq and 0 <= z <= xy
                let fixed = (n as u128) * (p as u128) * (y as u128)
                    + (n as u128) * (n as u128 - 1) / 2 * (x as u128) * (y as u128);
                for z in 0..=x * y {
                    let used = fixed + (n as u128) * (z as u128);
                    if used > t as u128 {
                        break;
                    }
                    let r = (t as u128 - used) as u64;
                    if r <= p * q {
                        found.push(BinarySolution {
                            n,
                            p,
                            q,
                            r,
                            x,
                            y,
                            z,
                        });
                    }
                }
            }
        }
        if !found.is_empty() {
            found.sort();
            return Ok(found);
        }
    }
    Err(Error::NoDecomposition)
}
