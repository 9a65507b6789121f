//! Exact elements of the ring spanned by `1` and `((1-β)/N)·β^k`, `k ∈ ℤ`.
//!
//! Points of Γ, elements of T and every offset of the maps built here live in
//! this ring. A value is stored as
//!
//! ```text
//! unit · 1 + ((1-β)/N) · Σ_k c_k β^k
//! ```
//!
//! with finitely many nonzero `c_k`. The `unit` term is only needed for
//! reflected maps `x ↦ φ_i(1-x)`, whose offsets contain `β^n · 1`; for points
//! with finite codings it is zero. Equality is coefficient-wise.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational contraction parameter β with `0 < β < 1/(N+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Beta {
    value: BigRational,
    cap: u8,
}

impl Beta {
    pub fn new(value: BigRational, cap: u8) -> Result<Self> {
        let bound = BigRational::new(BigInt::one(), BigInt::from(cap as u32 + 1));
        if !value.is_positive() || value >= bound {
            return Err(Error::BetaOutOfRange {
                beta: value.to_string(),
                bound: bound.to_string(),
            });
        }
        Ok(Self { value, cap })
    }

    /// Parses `p/q` (or an integer, which is always rejected by the range check).
    pub fn parse(text: &str, cap: u8) -> Result<Self> {
        let value = BigRational::from_str(text.trim())
            .map_err(|_| Error::Parse(format!("invalid rational beta {text:?}")))?;
        Self::new(value, cap)
    }

    /// `1 / (2N + 2)`, the value used by the verification sweeps.
    pub fn standard(cap: u8) -> Self {
        let value = BigRational::new(BigInt::one(), BigInt::from(2 * cap as u32 + 2));
        Self::new(value, cap).expect("1/(2N+2) is always in range")
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn cap(&self) -> u8 {
        self.cap
    }

    /// True when `β < 1/(2N+1)`, where codings are unique and the
    /// self-similarity criterion is both necessary and sufficient.
    pub fn in_unique_coding_regime(&self) -> bool {
        self.value < BigRational::new(BigInt::one(), BigInt::from(2 * self.cap as u32 + 1))
    }

    /// Numerator and denominator as machine integers, if they fit.
    pub fn as_fraction(&self) -> Option<(i128, i128)> {
        Some((self.value.numer().to_i128()?, self.value.denom().to_i128()?))
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// `(1-β)/N`
    pub fn digit_unit(&self) -> BigRational {
        (BigRational::one() - &self.value) / BigRational::from_integer(BigInt::from(self.cap))
    }

    /// `β^k` for any integer `k`.
    pub fn pow(&self, k: i32) -> BigRational {
        num_traits::pow::Pow::pow(&self.value, k)
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// An exact element `unit + ((1-β)/N) Σ c_k β^k` of the β-Laurent ring.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BetaLaurent {
    unit: i64,
    coeffs: BTreeMap<i32, i64>,
}

impl BetaLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant `1`.
    pub fn one() -> Self {
        Self {
            unit: 1,
            coeffs: BTreeMap::new(),
        }
    }

    /// `c · ((1-β)/N) β^exp`
    pub fn monomial(exp: i32, c: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, c);
        out
    }

    /// The point `φ_w(0) = ((1-β)/N) Σ_k w_k β^{k-1}` of Γ coded by `word`.
    pub fn from_coding(word: &[u8]) -> Self {
        let mut out = Self::zero();
        for (k, &letter) in word.iter().enumerate() {
            out.add_term(k as i32, letter as i64);
        }
        out
    }

    /// `β^n · 1`, rewritten as `1 - ((1-β)/N) Σ_{k<n} N β^k`.
    pub fn beta_power(n: u32, cap: u8) -> Self {
        let mut out = Self::one();
        for k in 0..n as i32 {
            out.add_term(k, -(cap as i64));
        }
        out
    }

    pub fn unit(&self) -> i64 {
        self.unit
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.unit == 0 && self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add_unit(&mut self, c: i64) {
        self.unit += c;
    }

    /// Multiplies by `β^n` for `n ≥ 0`. Only valid when `unit == 0`, since
    /// `β^n · 1` is not a finite shift of the unit term.
    pub fn shifted(&self, n: i32) -> Self {
        debug_assert!(self.unit == 0 || n == 0, "cannot shift a unit term");
        Self {
            unit: self.unit,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k + n, c)).collect(),
        }
    }

    /// Multiplies by `β^n`, expanding any unit term via [`BetaLaurent::beta_power`].
    pub fn scaled_by_beta_power(&self, n: u32, cap: u8) -> Self {
        let mut out = Self {
            unit: 0,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k + n as i32, c)).collect(),
        };
        if self.unit != 0 {
            let bp = Self::beta_power(n, cap);
            out = out + bp.times(self.unit);
        }
        out
    }

    pub fn times(&self, s: i64) -> Self {
        if s == 0 {
            return Self::zero();
        }
        Self {
            unit: self.unit * s,
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k, c * s)).collect(),
        }
    }

    /// Exact value at a rational β.
    pub fn value_at(&self, beta: &Beta) -> BigRational {
        let mut sum = BigRational::zero();
        for (&k, &c) in &self.coeffs {
            sum += beta.pow(k) * BigRational::from_integer(BigInt::from(c));
        }
        sum * beta.digit_unit() + BigRational::from_integer(BigInt::from(self.unit))
    }

    /// Floating-point value at β.
    pub fn value_f64(&self, beta: f64, cap: u8) -> f64 {
        let unit = (1.0 - beta) / cap as f64;
        let sum: f64 = self
            .coeffs
            .iter()
            .map(|(&k, &c)| c as f64 * beta.powi(k))
            .sum();
        self.unit as f64 + unit * sum
    }
}

impl std::ops::Add for BetaLaurent {
    type Output = BetaLaurent;

    fn add(mut self, rhs: BetaLaurent) -> BetaLaurent {
        self.unit += rhs.unit;
        for (k, c) in rhs.coeffs {
            self.add_term(k, c);
        }
        self
    }
}

impl std::ops::Sub for BetaLaurent {
    type Output = BetaLaurent;

    fn sub(self, rhs: BetaLaurent) -> BetaLaurent {
        self + rhs.times(-1)
    }
}

impl std::ops::Neg for BetaLaurent {
    type Output = BetaLaurent;

    fn neg(self) -> BetaLaurent {
        self.times(-1)
    }
}
