//! Analytic lower bounds for the powers-of-two gap set, parameter
//! optimization, and machine-checked certification of the formulas against
//! the block colorings that realize them.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::analysis::{
    longest_prefix_avoiding, verify_avoidance, Certificate, DiffseqWitness, VerifyOutcome,
};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::gapset::GapSet;

/// `2^(t+u) * (k - 2^(u+1) - t^2/2 + t) + 2^(u+1)`, evaluated in exact
/// rational arithmetic with the floor applied last. May be non-positive for
/// poor parameters; still returned.
pub fn refined_bound(k: u64, t: u32, u: u32) -> BigInt {
    let pow_tu = BigRational::from_integer(BigInt::from(2).pow(t + u));
    let pow_u1 = BigRational::from_integer(BigInt::from(2).pow(u + 1));
    let inner = BigRational::from_integer(BigInt::from(k))
        - &pow_u1
        - BigRational::new(BigInt::from(t) * BigInt::from(t), BigInt::from(2))
        + BigRational::from_integer(BigInt::from(t));
    (pow_tu * inner + pow_u1).floor().to_integer()
}

/// `2^s * (s - 2) + 2` with `s = floor(sqrt(2k))`, all in exact integers.
pub fn simple_bound(k: u64) -> BigInt {
    let s = (2 * k).sqrt();
    BigInt::from(2).pow(s as u32) * (BigInt::from(s) - 2) + 2
}

/// The parameter point the closed form is built on: `t = floor(sqrt(2k))`
/// and the largest `u` with `4^(u+1) <= k`. `None` when `k < 4` (no valid
/// `u >= 0` exists there).
pub fn closed_form_params(k: u64) -> Option<(u32, u32)> {
    if k < 4 {
        return None;
    }
    let t = (2 * k).sqrt() as u32;
    let mut u = 0u32;
    while 4u64.checked_pow(u + 2).is_some_and(|p| p <= k) {
        u += 1;
    }
    Some((t, u))
}

/// Exhaustive search over `2 <= t <= 2*ceil(sqrt(2k)) + 4` and
/// `0 <= u <= ceil(log2 k)`, maximizing the refined bound; ties prefer
/// smaller `t + u`, then smaller `t`.
pub fn best_params(k: u64) -> (u32, u32, BigInt) {
    assert!(k >= 2);
    let s = (2 * k).sqrt();
    let t_max = (2 * if s * s < 2 * k { s + 1 } else { s } + 4) as u32;
    let u_max = ceil_log2(k);
    let mut best: Option<(u32, u32, BigInt)> = None;
    for t in 2..=t_max {
        for u in 0..=u_max {
            let value = refined_bound(k, t, u);
            let better = match &best {
                None => true,
                Some((bt, bu, bv)) => {
                    value > *bv
                        || (value == *bv && (t + u < bt + bu || (t + u == bt + bu && t < *bt)))
                }
            };
            if better {
                best = Some((t, u, value));
            }
        }
    }
    best.expect("search range is nonempty")
}

fn ceil_log2(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

/// Closed-form bound value with a rigorous enclosure.
#[derive(Debug, Clone)]
pub struct TheoremBound {
    /// Midpoint of the computed enclosure.
    pub value: BigRational,
    /// Enclosure width; guaranteed at most 10^-6.
    pub width: BigRational,
}

/// Guaranteed absolute precision of [`theorem_bound`].
pub const THEOREM_BOUND_PRECISION: &str = "1e-6";

/// Evaluates `2^sqrt(2k) * ((sqrt(2)-1)k/8 - sqrt(k)/8) + sqrt(k)/2` with
/// outward-rounded fixed-point interval arithmetic, to within 10^-6.
pub fn theorem_bound(k: u64) -> TheoremBound {
    assert!(k >= 1);
    // Working sizes grow with the magnitude of 2^sqrt(2k) so the *absolute*
    // width target stays reachable.
    let magnitude = (2 * k).sqrt() as u32; // > log2 of the leading factor
    let mut digits = 30 + magnitude / 3;
    let mut dyadic_bits = 64 + 2 * magnitude;
    let target = BigRational::new(BigInt::one(), BigInt::from(10).pow(6));
    loop {
        let ctx = FixedCtx::new(digits, dyadic_bits);
        let x = ctx.sqrt_of_int(2 * k);
        let pow = ctx.pow2(&x);
        let sqrt2 = ctx.sqrt_of_int(2);
        let sqrt_k = ctx.sqrt_of_int(k);
        let a = ctx.scale_ratio(&ctx.sub(&sqrt2, &ctx.exact_int(1)), k, 8);
        let b = ctx.scale_ratio(&sqrt_k, 1, 8);
        let c = ctx.scale_ratio(&sqrt_k, 1, 2);
        let total = ctx.add(&ctx.mul(&pow, &ctx.sub(&a, &b)), &c);
        let (lo, hi) = ctx.to_rationals(&total);
        let width = &hi - &lo;
        if width <= target {
            return TheoremBound {
                value: (lo + hi) / BigRational::from_integer(BigInt::from(2)),
                width,
            };
        }
        digits *= 2;
        dyadic_bits *= 2;
    }
}

/// Interval in fixed-point: the pair `(lo, hi)` encodes
/// `[lo / 10^digits, hi / 10^digits]`. Every operation rounds outward.
struct Fixed {
    lo: BigInt,
    hi: BigInt,
}

struct FixedCtx {
    scale: BigInt,
    dyadic_bits: u32,
    /// `roots[i]` encloses `2^(1/2^(i+1))`: iterated square roots of 2.
    roots: Vec<Fixed>,
}

impl FixedCtx {
    fn new(digits: u32, dyadic_bits: u32) -> FixedCtx {
        let scale = BigInt::from(10).pow(digits);
        let mut roots: Vec<Fixed> = Vec::with_capacity(dyadic_bits as usize);
        let mut cur = Fixed {
            lo: &scale * 2,
            hi: &scale * 2,
        };
        for _ in 0..dyadic_bits {
            let lo = (&cur.lo * &scale).sqrt();
            let hi = (&cur.hi * &scale).sqrt() + 1;
            cur = Fixed { lo, hi };
            roots.push(Fixed {
                lo: cur.lo.clone(),
                hi: cur.hi.clone(),
            });
        }
        FixedCtx {
            scale,
            dyadic_bits,
            roots,
        }
    }

    fn exact_int(&self, n: i64) -> Fixed {
        Fixed {
            lo: &self.scale * n,
            hi: &self.scale * n,
        }
    }

    fn sqrt_of_int(&self, n: u64) -> Fixed {
        let scaled = BigInt::from(n) * &self.scale * &self.scale;
        let root = scaled.sqrt();
        Fixed {
            hi: &root + 1,
            lo: root,
        }
    }

    fn add(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            lo: &a.lo + &b.lo,
            hi: &a.hi + &b.hi,
        }
    }

    fn sub(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            lo: &a.lo - &b.hi,
            hi: &a.hi - &b.lo,
        }
    }

    fn mul(&self, a: &Fixed, b: &Fixed) -> Fixed {
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = products.iter().min().unwrap().div_floor(&self.scale);
        let hi = products.iter().max().unwrap().div_ceil(&self.scale);
        Fixed { lo, hi }
    }

    /// Multiplies by the exact positive rational `num/den`.
    fn scale_ratio(&self, a: &Fixed, num: u64, den: u64) -> Fixed {
        let num = BigInt::from(num);
        let den = BigInt::from(den);
        Fixed {
            lo: (&a.lo * &num).div_floor(&den),
            hi: (&a.hi * &num).div_ceil(&den),
        }
    }

    /// `2^x` for a nonnegative interval `x`, via `2^int * 2^(frac)` with the
    /// fraction snapped outward to the dyadic grid and the grid powers taken
    /// from the iterated-square-root chain.
    fn pow2(&self, x: &Fixed) -> Fixed {
        assert!(!x.lo.is_negative());
        let dy = BigInt::one() << self.dyadic_bits;
        let (int_lo, frac_lo) = x.lo.div_mod_floor(&self.scale);
        let (mut int_hi, frac_hi) = x.hi.div_mod_floor(&self.scale);
        let c_lo = (&frac_lo * &dy).div_floor(&self.scale);
        let mut c_hi = (&frac_hi * &dy).div_ceil(&self.scale);
        if c_hi == dy {
            int_hi += 1;
            c_hi = BigInt::zero();
        }
        let lo = self.pow2_frac_lo(&c_lo) << int_lo.to_usize().expect("sane exponent");
        let hi = self.pow2_frac_hi(&c_hi) << int_hi.to_usize().expect("sane exponent");
        Fixed { lo, hi }
    }

    /// Lower bound on `2^(c / 2^dyadic_bits)`, scaled.
    fn pow2_frac_lo(&self, c: &BigInt) -> BigInt {
        let mut acc = self.scale.clone();
        for bit in 0..self.dyadic_bits {
            if c.bit(bit as u64) {
                // bit j stands for exponent 1/2^(dyadic_bits - j)
                let r = &self.roots[(self.dyadic_bits - 1 - bit) as usize];
                acc = (acc * &r.lo).div_floor(&self.scale);
            }
        }
        acc
    }

    fn pow2_frac_hi(&self, c: &BigInt) -> BigInt {
        let mut acc = self.scale.clone();
        for bit in 0..self.dyadic_bits {
            if c.bit(bit as u64) {
                let r = &self.roots[(self.dyadic_bits - 1 - bit) as usize];
                acc = (acc * &r.hi).div_ceil(&self.scale);
            }
        }
        acc
    }

    fn to_rationals(&self, a: &Fixed) -> (BigRational, BigRational) {
        (
            BigRational::new(a.lo.clone(), self.scale.clone()),
            BigRational::new(a.hi.clone(), self.scale.clone()),
        )
    }
}

#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certified(Certificate),
    /// The block coloring failed at the formula's range: the witness shows a
    /// monochromatic sequence of the target length inside `[1..bound-1]`, and
    /// `largest_verified_n` is the longest prefix that does verify.
    Discrepancy {
        counterexample: DiffseqWitness,
        largest_verified_n: u64,
    },
}

/// Checks the refined bound at `(k, t, u)` against the stretched block
/// coloring that motivates it: verifies avoidance of length `k` on
/// `[1 .. refined_bound - 1]`.
pub fn certify_bound(k: u64, t: u32, u: u32) -> Result<CertifyOutcome> {
    let bound = refined_bound(k, t, u);
    if bound < BigInt::from(2) {
        return Err(Error::InvalidArgument(format!(
            "refined bound at k={k}, t={t}, u={u} is {bound}; nothing to certify"
        )));
    }
    let bound = bound.to_u64().ok_or_else(|| {
        Error::InvalidArgument("refined bound exceeds the addressable range".into())
    })?;
    let coloring = Coloring::stretched_thue_morse(t, u)?;
    let n = bound - 1;
    match verify_avoidance(&coloring, &GapSet::PowersOfTwo, k, n)? {
        VerifyOutcome::Certified(cert) => Ok(CertifyOutcome::Certified(cert)),
        VerifyOutcome::Counterexample(counterexample) => {
            let largest_verified_n =
                longest_prefix_avoiding(&coloring, &GapSet::PowersOfTwo, k, n)?;
            Ok(CertifyOutcome::Discrepancy {
                counterexample,
                largest_verified_n,
            })
        }
    }
}

/// Everything the `bound` CLI verb reports for one `k`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub k: u64,
    pub t: u32,
    pub u: u32,
    pub refined_bound: BigInt,
    pub simple_bound: BigInt,
    pub theorem_bound: TheoremBound,
    /// `None` when certification was not requested.
    pub certified_bound: Option<BigInt>,
    pub certificate: Option<Certificate>,
    pub discrepancy: Option<(DiffseqWitness, u64)>,
    /// certified >= refined, when certification ran.
    pub consistent: Option<bool>,
}

/// Builds a report at explicit parameters, or at the optimizer's choice when
/// `params` is `None`.
pub fn bound_report(k: u64, params: Option<(u32, u32)>, certify: bool) -> Result<BoundReport> {
    let (t, u) = match params {
        Some(p) => p,
        None => {
            let (t, u, _) = best_params(k);
            (t, u)
        }
    };
    let refined = refined_bound(k, t, u);
    let mut report = BoundReport {
        k,
        t,
        u,
        refined_bound: refined.clone(),
        simple_bound: simple_bound(k),
        theorem_bound: theorem_bound(k),
        certified_bound: None,
        certificate: None,
        discrepancy: None,
        consistent: None,
    };
    if certify {
        match certify_bound(k, t, u)? {
            CertifyOutcome::Certified(cert) => {
                let certified = BigInt::from(cert.delta_lower_bound);
                report.consistent = Some(certified >= refined);
                report.certified_bound = Some(certified);
                report.certificate = Some(cert);
            }
            CertifyOutcome::Discrepancy {
                counterexample,
                largest_verified_n,
            } => {
                let certified = BigInt::from(largest_verified_n + 1);
                report.consistent = Some(certified >= refined);
                report.certified_bound = Some(certified);
                report.discrepancy = Some((counterexample, largest_verified_n));
            }
        }
    }
    Ok(report)
}

/// Decimal rendering of a rational, rounded to `places` fractional digits.
pub fn decimal_string(value: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10).pow(places);
    let shifted = value * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let rounded = (shifted + half).floor().to_integer();
    let negative = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= places as usize {
        format!(
            "{}{}",
            "0".repeat(places as usize + 1 - digits.len()),
            digits
        )
    } else {
        digits
    };
    let split = digits.len() - places as usize;
    format!(
        "{}{}.{}",
        if negative { "-" } else { "" },
        &digits[..split],
        &digits[split..]
    )
}
