//! Exact arithmetic for Beatty slopes.
//!
//! Floor parities of `m * alpha` decide colors, and a floor is a discontinuous
//! function, so nothing here goes anywhere near floating point. A slope is
//! either an exact rational or the series value `1 - sum_{i>=1} 1/(2i)!`
//! held as a shrinking rational interval with a proven tail bound.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gapset::mod2;

/// Default number of interval refinements (doublings of the term count)
/// before floor questions are reported as ambiguous.
pub const DEFAULT_REFINE_CAP: u32 = 64;

/// An exact Beatty slope.
#[derive(Debug, Clone)]
pub enum AlphaValue {
    Rational(BigRational),
    FactorialSeries(FactorialAlpha),
}

/// The value `1 - sum_{i=1}^inf 1/(2i)!` (equivalently `2 - e/2 - 1/(2e)`),
/// kept as a rational interval `[lo, hi]` where
///
/// * `hi = 1 - S_I` with `S_I` the partial sum through `1/(2I)!`, and
/// * `lo = hi - T_I` with tail bound `T_I = 2/(2I+2)!`.
///
/// The series terms past `1/(2I+2)!` shrink by a factor well below 1/2 each,
/// so the omitted tail is strictly between `1/(2I+2)!` and `T_I`, and the true
/// value lies strictly inside `(lo, hi)`.
#[derive(Debug, Clone)]
pub struct FactorialAlpha {
    state: Arc<Mutex<SeriesState>>,
}

#[derive(Debug)]
struct SeriesState {
    /// Number of series terms summed so far (`I`).
    terms: u64,
    /// Numerator of `S_I` over the denominator `fact`.
    sum_num: BigInt,
    /// `(2I)!`
    fact: BigInt,
}

impl SeriesState {
    fn extend_to(&mut self, target: u64) {
        while self.terms < target {
            let i = self.terms + 1;
            let step = BigInt::from(2 * i - 1) * BigInt::from(2 * i);
            self.fact *= &step;
            self.sum_num = &self.sum_num * &step + 1u32;
            self.terms = i;
        }
    }

    fn interval(&self) -> (BigRational, BigRational) {
        let hi = BigRational::new(&self.fact - &self.sum_num, self.fact.clone());
        let tail_den =
            &self.fact * BigInt::from(2 * self.terms + 1) * BigInt::from(2 * self.terms + 2);
        let tail = BigRational::new(BigInt::from(2), tail_den);
        (&hi - &tail, hi)
    }
}

/// Builds the series slope summed through `1/(2*precision_terms)!`.
pub fn factorial_alpha(precision_terms: u64) -> AlphaValue {
    assert!(precision_terms >= 1, "need at least one series term");
    let mut state = SeriesState {
        terms: 0,
        sum_num: BigInt::zero(),
        fact: BigInt::one(),
    };
    state.extend_to(precision_terms);
    AlphaValue::FactorialSeries(FactorialAlpha {
        state: Arc::new(Mutex::new(state)),
    })
}

impl FactorialAlpha {
    pub fn terms(&self) -> u64 {
        self.state.lock().unwrap().terms
    }

    /// Current enclosure `[lo, hi]` of the true value.
    pub fn interval(&self) -> (BigRational, BigRational) {
        self.state.lock().unwrap().interval()
    }

    /// One refinement step: doubles the number of summed terms.
    pub fn refine(&self) {
        let mut st = self.state.lock().unwrap();
        let target = st.terms * 2;
        st.extend_to(target);
    }
}

impl AlphaValue {
    pub fn rational(value: BigRational) -> AlphaValue {
        AlphaValue::Rational(value)
    }

    /// Current enclosure; a point interval for exact rationals.
    pub fn interval(&self) -> (BigRational, BigRational) {
        match self {
            AlphaValue::Rational(v) => (v.clone(), v.clone()),
            AlphaValue::FactorialSeries(s) => s.interval(),
        }
    }

    /// Parity of `floor(m * alpha)`. Series slopes are refined until both
    /// interval endpoints agree on the floor.
    pub fn floor_parity(&self, m: u64, refine_cap: u32) -> Result<u8> {
        assert!(m >= 1);
        match self {
            AlphaValue::Rational(v) => Ok(parity(&rational_scaled_floor(v, m))),
            AlphaValue::FactorialSeries(s) => {
                for _ in 0..=refine_cap {
                    let (lo, hi) = s.interval();
                    let fl = rational_scaled_floor(&lo, m);
                    let fh = rational_scaled_floor(&hi, m);
                    if fl == fh {
                        return Ok(parity(&fl));
                    }
                    s.refine();
                }
                Err(Error::AmbiguousFloor {
                    m,
                    refinements: refine_cap,
                })
            }
        }
    }

    /// An interval `[x, y]` inside `[0, 2)` containing `d * alpha mod 2`,
    /// refined until it is narrower than 1/12 and decides containment in
    /// `[1/3, 1)` either way. Exact rationals yield a point.
    pub fn scaled_mod2_range(&self, d: u64, refine_cap: u32) -> Result<(BigRational, BigRational)> {
        assert!(d >= 1);
        match self {
            AlphaValue::Rational(v) => {
                let x = mod2(&(v * BigRational::from_integer(BigInt::from(d))));
                Ok((x.clone(), x))
            }
            AlphaValue::FactorialSeries(s) => {
                let d_big = BigRational::from_integer(BigInt::from(d));
                let twelfth = BigRational::new(BigInt::one(), BigInt::from(12));
                let third = BigRational::new(BigInt::one(), BigInt::from(3));
                let one = BigRational::one();
                let two = BigRational::from_integer(BigInt::from(2));
                for round in 0..=refine_cap {
                    let (lo, hi) = s.interval();
                    let lo_d = &lo * &d_big;
                    let hi_d = &hi * &d_big;
                    let base = (&lo_d / &two).floor() * &two;
                    let x = &lo_d - &base;
                    let y = &hi_d - &base;
                    if y < two {
                        let narrow = (&y - &x) < twelfth;
                        let inside = x >= third && y < one;
                        let outside = y < third || x >= one;
                        if narrow && (inside || outside) {
                            return Ok((x, y));
                        }
                    }
                    if round < refine_cap {
                        s.refine();
                    }
                }
                Err(Error::StraddlesBoundary {
                    d,
                    refinements: refine_cap,
                })
            }
        }
    }
}

/// `floor(m * p/q)` by exact integer division.
fn rational_scaled_floor(v: &BigRational, m: u64) -> BigInt {
    (v.numer() * BigInt::from(m)).div_floor(v.denom())
}

fn parity(x: &BigInt) -> u8 {
    x.mod_floor(&BigInt::from(2)).to_u8().unwrap()
}
