//! Numerical verification of an extracted IFS at a rational β.
//!
//! Sample points `x = φ_u(0) + t_j` with random finite codings are pushed
//! through every map and the image is certified to lie in `Γ_t` by greedy
//! digit extraction. Exact mode works on an integer lattice: every quantity is
//! scaled by
//!
//! ```text
//! D = N · q^{E+1} · p^{-F},    β = p/q,
//! ```
//!
//! where `F ≤ 0` and `E` bound the exponents that occur, so that `1` and each
//! `((1-β)/N) β^k` with `F ≤ k ≤ E` become integers. The lattice runs on
//! checked `i128` and falls back to `BigInt` on overflow.
//!
//! Float mode runs the same sampling in `f64` and reports the largest residual.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digits::TranslationVector;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::ifs::{extract_ifs, Ifs, Orientation};
use crate::laurent::{Beta, BetaLaurent};

pub const DEFAULT_SEED: u64 = 0x5eed_cafe;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Outcome of [`greedy_coding`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Greedy {
    pub digits: Vec<u8>,
    /// 1-based index of the first step where no digit keeps the remainder in range.
    pub stuck_at: Option<usize>,
    /// Rescaled remainder after the last successful step, in `[0, 1]`.
    pub remainder: BigRational,
}

/// Greedy β-expansion of `x ∈ [0,1]` against the maps `φ_0, …, φ_N`.
pub fn greedy_coding(x: &BigRational, beta: &Beta, depth: usize) -> Result<Greedy> {
    if x.is_negative() || *x > BigRational::one() {
        return Err(Error::PointOutOfRange);
    }
    let c = beta.digit_unit();
    let cap = beta.cap();
    let mut x = x.clone();
    let mut digits = Vec::with_capacity(depth);
    for index in 1..=depth {
        let q = (&x / &c).floor().to_integer();
        let d = q.to_u32().unwrap_or(u32::MAX).min(cap as u32) as u8;
        let r = &x - &c * BigRational::from_integer(d.into());
        if r.is_negative() || r > *beta.value() {
            return Ok(Greedy {
                digits,
                stuck_at: Some(index),
                remainder: x,
            });
        }
        digits.push(d);
        x = r / beta.value();
    }
    Ok(Greedy {
        digits,
        stuck_at: None,
        remainder: x,
    })
}

/// Integer arithmetic used by the lattice.
trait LatticeInt: Clone + Ord + Send + Sync + Debug {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn small(v: i64) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Exact quotient; `None` when not divisible.
    fn div_exact(&self, o: &Self) -> Option<Self>;
    /// `min(⌊self / o⌋, cap)` for `self ≥ 0`, `o > 0`.
    fn quotient_capped(&self, o: &Self, cap: u8) -> u8;
    fn is_neg(&self) -> bool;
}

impl LatticeInt for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn small(v: i64) -> Self {
        v as i128
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        (self % o == 0).then(|| self / o)
    }
    fn quotient_capped(&self, o: &Self, cap: u8) -> u8 {
        // Subtractive search is cheaper than 128-bit division for small alphabets.
        if cap <= 8 {
            let mut d = 0u8;
            let mut acc = *o;
            while d < cap && acc <= *self {
                d += 1;
                acc += *o;
            }
            d
        } else {
            (self / o).min(cap as i128) as u8
        }
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl LatticeInt for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn small(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(o);
        r.is_zero().then_some(q)
    }
    fn quotient_capped(&self, o: &Self, cap: u8) -> u8 {
        (self / o).to_u32().unwrap_or(u32::MAX).min(cap as u32) as u8
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

struct Overflow;

type Lat<T> = std::result::Result<T, Overflow>;

fn ok<T>(v: Option<T>) -> Lat<T> {
    v.ok_or(Overflow)
}

/// Scaled integer model of the ring at a fixed rational β.
struct Lattice<I> {
    cap: u8,
    min_exp: i32,
    max_exp: i32,
    den: I,
    /// `((1-β)/N) β^k · D` for `k = min_exp ..= max_exp`.
    term: Vec<I>,
    /// `β^k · D` for `k = 0 ..= max_exp + 1`.
    tail: Vec<I>,
    p_pow: Vec<I>,
    q_pow: Vec<I>,
}

impl<I: LatticeInt> Lattice<I> {
    fn new(beta: &Beta, min_exp: i32, max_exp: i32) -> Lat<Self> {
        let p = ok(I::from_big(beta.value().numer()))?;
        let q = ok(I::from_big(beta.value().denom()))?;
        let span = (max_exp - min_exp + 2) as usize;
        let mut p_pow = vec![I::small(1)];
        let mut q_pow = vec![I::small(1)];
        for i in 1..=span {
            p_pow.push(ok(p_pow[i - 1].mul(&p))?);
            q_pow.push(ok(q_pow[i - 1].mul(&q))?);
        }
        let cap_i = I::small(beta.cap() as i64);
        let den = ok(cap_i.mul(&q_pow[(max_exp + 1) as usize]))?;
        let den = ok(den.mul(&p_pow[(-min_exp) as usize]))?;
        let q_minus_p = ok(q.sub(&p))?;
        let mut term = Vec::new();
        for k in min_exp..=max_exp {
            let v = ok(q_minus_p.mul(&p_pow[(k - min_exp) as usize]))?;
            term.push(ok(v.mul(&q_pow[(max_exp - k) as usize]))?);
        }
        let mut tail = Vec::new();
        for k in 0..=max_exp + 1 {
            let v = ok(cap_i.mul(&p_pow[(k - min_exp) as usize]))?;
            tail.push(ok(v.mul(&q_pow[(max_exp + 1 - k) as usize]))?);
        }
        Ok(Self {
            cap: beta.cap(),
            min_exp,
            max_exp,
            den,
            term,
            tail,
            p_pow,
            q_pow,
        })
    }

    fn term_at(&self, k: i32) -> &I {
        &self.term[(k - self.min_exp) as usize]
    }

    fn embed(&self, x: &BetaLaurent) -> Lat<I> {
        let mut acc = ok(self.den.mul(&I::small(x.unit())))?;
        for (&k, &c) in x.coeffs() {
            assert!(k >= self.min_exp && k <= self.max_exp, "exponent {k} outside the lattice");
            acc = ok(acc.add(&ok(self.term_at(k).mul(&I::small(c)))?))?;
        }
        Ok(acc)
    }

    /// `β^n · x`; exact because every lattice value carries `q^{E-max_k}`.
    fn scale(&self, x: &I, n: u32) -> Lat<I> {
        let v = ok(x.mul(&self.p_pow[n as usize]))?;
        Ok(v.div_exact(&self.q_pow[n as usize]).expect("lattice values are divisible by q^n"))
    }

    /// Greedy digits of `r ∈ [0, D]` for `steps` steps. Returns the final
    /// remainder, or the 1-based index where extraction got stuck.
    fn greedy(&self, mut r: I, steps: usize) -> std::result::Result<I, usize> {
        if r.is_neg() || r > self.den {
            return Err(0);
        }
        for s in 0..steps {
            let w = &self.term[(s as i32 - self.min_exp) as usize];
            let d = r.quotient_capped(w, self.cap);
            if d > 0 {
                r = r.sub(&w.mul(&I::small(d as i64)).expect("d·w ≤ r")).expect("no overflow below r");
            }
            if r > self.tail[s + 1] {
                return Err(s + 1);
            }
        }
        Ok(r)
    }
}

/// Numeric verification settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    pub float: bool,
    pub tolerance: f64,
    pub exec: Execution,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            depth: 12,
            seed: DEFAULT_SEED,
            float: false,
            tolerance: DEFAULT_TOLERANCE,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub sample: usize,
    pub map: usize,
    pub reason: String,
}

/// Verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericReport {
    pub beta: String,
    pub seed: u64,
    pub samples: usize,
    pub depth: usize,
    pub mode: String,
    /// `"i128"` or `"bigint"` in exact mode, `"f64"` otherwise.
    pub arithmetic: String,
    pub maps: usize,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<SampleFailure>,
    /// Exact rational in exact mode.
    pub max_residual: String,
    pub max_residual_f64: f64,
    pub tolerance: Option<f64>,
    pub cylinders_checked: u64,
    pub uncovered_cylinders: u64,
    pub passed: bool,
}

struct Sample {
    source: usize,
    letters: Vec<u8>,
}

fn draw(seed: u64, index: usize, m: usize, cap: u8, depth: usize) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let source = rng.gen_range(0..=m);
    let letters = (0..depth).map(|_| rng.gen_range(0..=cap)).collect();
    Sample { source, letters }
}

#[derive(Clone)]
struct Partial<R> {
    checks: u64,
    failures: u64,
    first_failure: Option<SampleFailure>,
    max_residual: R,
}

fn merge<R: PartialOrd + Clone>(parts: Vec<Partial<R>>, zero: R) -> Partial<R> {
    let mut out = Partial {
        checks: 0,
        failures: 0,
        first_failure: None,
        max_residual: zero,
    };
    for p in parts {
        out.checks += p.checks;
        out.failures += p.failures;
        if out.first_failure.is_none() {
            out.first_failure = p.first_failure;
        }
        if p.max_residual > out.max_residual {
            out.max_residual = p.max_residual;
        }
    }
    out
}

/// Index of the translate `j` with `y - t_j ∈ [0, width]`, if any.
fn locate<T: PartialOrd + Clone>(translates: &[T], y: &T, within: impl Fn(usize) -> bool) -> Option<usize> {
    let idx = translates.partition_point(|t| t <= y);
    (idx > 0 && within(idx - 1)).then(|| idx - 1)
}

struct Prepared<I> {
    lattice: Lattice<I>,
    translates: Vec<I>,
    offsets: Vec<I>,
}

fn prepare<I: LatticeInt>(t: &TranslationVector, ifs: &Ifs, beta: &Beta, depth: usize) -> Lat<Prepared<I>> {
    let offset_min = ifs.maps.iter().filter_map(|f| f.offset.min_exponent()).min().unwrap_or(0);
    let offset_max = ifs.maps.iter().filter_map(|f| f.offset.max_exponent()).max().unwrap_or(0);
    let min_exp = offset_min.min(-(t.tau() as i32));
    let max_exp = offset_max.max(ifs.max_power().max(1) as i32) + depth as i32;
    let lattice = Lattice::<I>::new(beta, min_exp, max_exp)?;
    let translates = t
        .entries()
        .iter()
        .map(|e| lattice.embed(&e.to_laurent()))
        .collect::<Lat<Vec<_>>>()?;
    let offsets = ifs.maps.iter().map(|f| lattice.embed(&f.offset)).collect::<Lat<Vec<_>>>()?;
    Ok(Prepared {
        lattice,
        translates,
        offsets,
    })
}

fn exact_samples<I: LatticeInt>(
    t: &TranslationVector,
    ifs: &Ifs,
    prep: &Prepared<I>,
    opts: &NumericOptions,
) -> Lat<Partial<I>> {
    let lat = &prep.lattice;
    let cap = t.cap();
    let max_power = ifs.max_power() as usize;
    let parts = opts.exec.map_range(opts.samples, |index| -> Lat<Partial<I>> {
        let sample = draw(opts.seed, index, t.m(), cap, opts.depth);
        let mut x = prep.translates[sample.source].clone();
        for (k, &l) in sample.letters.iter().enumerate() {
            x = ok(x.add(&ok(lat.term_at(k as i32).mul(&I::small(l as i64)))?))?;
        }
        let scaled = (0..=max_power).map(|n| lat.scale(&x, n as u32)).collect::<Lat<Vec<_>>>()?;
        let mut part = Partial {
            checks: 0,
            failures: 0,
            first_failure: None,
            max_residual: I::small(0),
        };
        for (map, f) in ifs.maps.iter().enumerate() {
            part.checks += 1;
            let b = &prep.offsets[map];
            let sx = &scaled[f.power as usize];
            let y = match f.orientation {
                Orientation::Preserving => ok(b.add(sx))?,
                Orientation::Reversing => ok(b.sub(sx))?,
            };
            let fail = |reason: String| SampleFailure { sample: index, map, reason };
            let Some(j) = locate(&prep.translates, &y, |j| {
                y.sub(&prep.translates[j]).is_some_and(|r| r <= lat.den)
            }) else {
                part.failures += 1;
                part.first_failure.get_or_insert_with(|| fail("image misses every translate".into()));
                continue;
            };
            let steps = f.power as usize + opts.depth;
            match lat.greedy(ok(y.sub(&prep.translates[j]))?, steps) {
                Ok(r) => {
                    let top = ok(lat.tail[steps].sub(&r))?;
                    let residual = if r < top { r } else { top };
                    if residual > part.max_residual {
                        part.max_residual = residual;
                    }
                }
                Err(step) => {
                    part.failures += 1;
                    part.first_failure
                        .get_or_insert_with(|| fail(format!("greedy coding stuck at digit {step} of Γ + t_{j}")));
                }
            }
        }
        Ok(part)
    });
    Ok(merge(parts.into_iter().collect::<Lat<Vec<_>>>()?, I::small(0)))
}

/// Exact interval check that the images cover every depth-`limit` cylinder.
fn cylinder_cover<I: LatticeInt>(t: &TranslationVector, ifs: &Ifs, prep: &Prepared<I>, depth: usize) -> Lat<(u64, u64)> {
    let lat = &prep.lattice;
    let mut intervals = Vec::with_capacity(ifs.len() * prep.translates.len());
    for (map, f) in ifs.maps.iter().enumerate() {
        let b = &prep.offsets[map];
        let width = &lat.tail[f.power as usize];
        for s in &prep.translates {
            let sx = lat.scale(s, f.power)?;
            let iv = match f.orientation {
                Orientation::Preserving => {
                    let lo = ok(b.add(&sx))?;
                    let hi = ok(lo.add(width))?;
                    (lo, hi)
                }
                Orientation::Reversing => {
                    let hi = ok(b.sub(&sx))?;
                    let lo = ok(hi.sub(width))?;
                    (lo, hi)
                }
            };
            intervals.push(iv);
        }
    }
    intervals.sort();
    // reach[i] = largest right end among the first i+1 intervals.
    let mut reach: Vec<I> = Vec::with_capacity(intervals.len());
    for (_, hi) in &intervals {
        let r = match reach.last() {
            Some(prev) if prev > hi => prev.clone(),
            _ => hi.clone(),
        };
        reach.push(r);
    }
    let covered = |lo: &I, hi: &I| {
        let idx = intervals.partition_point(|(l, _)| l <= lo);
        idx > 0 && reach[idx - 1] >= *hi
    };
    let limit = depth.max(ifs.max_power() as usize);
    let (mut checked, mut uncovered) = (0u64, 0u64);
    for root in &prep.translates {
        let mut stack = vec![(0usize, root.clone())];
        while let Some((k, lo)) = stack.pop() {
            checked += 1;
            let hi = ok(lo.add(&lat.tail[k]))?;
            if covered(&lo, &hi) {
                continue;
            }
            if k == limit {
                uncovered += 1;
                continue;
            }
            let w = lat.term_at(k as i32);
            let mut child = lo;
            for _ in 0..=t.cap() {
                stack.push((k + 1, child.clone()));
                child = ok(child.add(w))?;
            }
        }
    }
    Ok((checked, uncovered))
}

fn float_samples(t: &TranslationVector, ifs: &Ifs, beta: &Beta, opts: &NumericOptions) -> Result<Partial<f64>> {
    let cap = t.cap();
    let b = beta.to_f64();
    let c = (1.0 - b) / cap as f64;
    let translates: Vec<f64> = t.entries().iter().map(|e| e.to_laurent().value_f64(b, cap)).collect();
    let tol = opts.tolerance;
    let parts = opts.exec.map_range(opts.samples, |index| {
        let sample = draw(opts.seed, index, t.m(), cap, opts.depth);
        let mut x = translates[sample.source];
        let mut s = c;
        for &l in &sample.letters {
            x += l as f64 * s;
            s *= b;
        }
        let mut part = Partial {
            checks: 0,
            failures: 0,
            first_failure: None,
            max_residual: 0.0f64,
        };
        for (map, f) in ifs.maps.iter().enumerate() {
            part.checks += 1;
            let y = f.apply_f64(x, b, cap);
            let fail = |reason: String| SampleFailure { sample: index, map, reason };
            let Some(j) = locate(&translates, &(y + tol), |j| y - translates[j] <= 1.0 + tol) else {
                part.failures += 1;
                part.first_failure.get_or_insert_with(|| fail("image misses every translate".into()));
                continue;
            };
            let r = y - translates[j];
            let (mut pos, mut width) = (0.0f64, 1.0f64);
            let mut stuck = None;
            for step in 0..f.power as usize + opts.depth {
                let d = ((r - pos + tol) / (c * width)).floor().clamp(0.0, cap as f64);
                let lo = pos + d * c * width;
                if r < lo - tol || r > lo + b * width + tol {
                    stuck = Some(step + 1);
                    break;
                }
                pos = lo;
                width *= b;
            }
            if let Some(step) = stuck {
                part.failures += 1;
                part.first_failure
                    .get_or_insert_with(|| fail(format!("greedy coding stuck at digit {step} of Γ + t_{j}")));
                continue;
            }
            let residual = (r - pos).abs().min((r - pos - width).abs());
            part.max_residual = part.max_residual.max(residual);
        }
        part
    });
    Ok(merge(parts, 0.0))
}

fn run_exact<I: LatticeInt>(
    t: &TranslationVector,
    ifs: &Ifs,
    beta: &Beta,
    opts: &NumericOptions,
) -> Lat<(Partial<BigRational>, (u64, u64))> {
    let prep = prepare::<I>(t, ifs, beta, opts.depth)?;
    let cover = cylinder_cover(t, ifs, &prep, opts.depth)?;
    let part = if opts.float {
        Partial {
            checks: 0,
            failures: 0,
            first_failure: None,
            max_residual: BigRational::zero(),
        }
    } else {
        let p = exact_samples(t, ifs, &prep, opts)?;
        Partial {
            checks: p.checks,
            failures: p.failures,
            first_failure: p.first_failure,
            max_residual: BigRational::new(p.max_residual.to_big(), prep.lattice.den.to_big()),
        }
    };
    Ok((part, cover))
}

/// Verifies `ifs` against `Γ_t` by sampling at a rational `β < 1/(2N+1)`.
pub fn verify_numeric(t: &TranslationVector, ifs: &Ifs, beta: &Beta, opts: &NumericOptions) -> Result<NumericReport> {
    if beta.cap() != t.cap() {
        return Err(Error::AlphabetMismatch {
            left: beta.cap(),
            right: t.cap(),
        });
    }
    if ifs.cap != t.cap() {
        return Err(Error::AlphabetMismatch {
            left: ifs.cap,
            right: t.cap(),
        });
    }
    if !beta.in_unique_coding_regime() {
        return Err(Error::BetaOutOfRange {
            beta: beta.to_string(),
            bound: format!("1/{}", 2 * t.cap() as u32 + 1),
        });
    }
    if opts.depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let (exact, (cylinders_checked, uncovered_cylinders), arithmetic) = match run_exact::<i128>(t, ifs, beta, opts) {
        Ok((p, c)) => (p, c, "i128"),
        Err(Overflow) => match run_exact::<BigInt>(t, ifs, beta, opts) {
            Ok((p, c)) => (p, c, "bigint"),
            Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
        },
    };
    let (part, arithmetic, max_residual, max_residual_f64) = if opts.float {
        let p = float_samples(t, ifs, beta, opts)?;
        let r = p.max_residual;
        let checks = Partial {
            checks: p.checks,
            failures: p.failures,
            first_failure: p.first_failure,
            max_residual: (),
        };
        (checks, "f64", format!("{r:e}"), r)
    } else {
        let r = exact.max_residual;
        let checks = Partial {
            checks: exact.checks,
            failures: exact.failures,
            first_failure: exact.first_failure,
            max_residual: (),
        };
        (checks, arithmetic, r.to_string(), r.to_f64().unwrap_or(f64::NAN))
    };
    let residual_ok = if opts.float {
        max_residual_f64 < opts.tolerance
    } else {
        max_residual == "0"
    };
    Ok(NumericReport {
        beta: beta.to_string(),
        seed: opts.seed,
        samples: opts.samples,
        depth: opts.depth,
        mode: if opts.float { "float" } else { "exact" }.into(),
        arithmetic: arithmetic.into(),
        maps: ifs.len(),
        checks: part.checks,
        failures: part.failures,
        first_failure: part.first_failure,
        max_residual,
        max_residual_f64,
        tolerance: opts.float.then_some(opts.tolerance),
        cylinders_checked,
        uncovered_cylinders,
        passed: part.failures == 0 && uncovered_cylinders == 0 && residual_ok,
    })
}

/// Extracts the IFS of an admissible `t` and verifies it numerically.
pub fn verify_vector(t: &TranslationVector, beta: &Beta, opts: &NumericOptions) -> Result<NumericReport> {
    let ifs = extract_ifs(t)?;
    verify_numeric(t, &ifs, beta, opts)
}
