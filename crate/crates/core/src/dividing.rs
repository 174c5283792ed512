//! Nested-interval slope selection for dividing gap sets.
//!
//! For a generator `a_1 = 1, a_2, a_3, ...` with products `d_t`, the table of
//! depth `t` assigns each level `b` a closed rational interval
//! `I_b = [C_b, D_b]`, starting from `I_t = [1/2, 1]` and working downward:
//!
//! * `a_b` odd:  `I_{b-1} = (a_b - 1 + I_b) / a_b`
//! * `a_b` even: `I_{b-1} = (a_b - 2 + I_b) / a_b`
//!
//! Two facts make this useful, and both are machine-checked by the test
//! suite rather than trusted:
//!
//! 1. every `I_b` stays inside `[1/2^k, 1]`, where `k` is one more than the
//!    longest run of consecutive 2's among `a_2..a_t`;
//! 2. if `d_b * gamma mod 2` lands in `I_b`, then `d_h * gamma mod 2` lands
//!    in `I_h` for every deeper level `h`.
//!
//! So any rational picked from the level-1 interval of the deepest table has
//! `d_t * alpha mod 2` inside `[1/2^k, 1]` for every level at once, and the
//! parity-of-`floor(n * alpha)` coloring then admits no monochromatic
//! diffsequence of length `2^k + 1` over the covered range.
//!
//! Note that the level-1 intervals of *different* depths need not be nested:
//! each `a_{b+1} = 2` step halves the interval away from `[1/2, 1]`, so their
//! running intersection can genuinely become empty (it does for the factorial
//! generator by depth 4). `nested_alpha` therefore selects from the deepest
//! table alone; `j_intervals` exposes the running intersections for
//! inspection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::bits::Bits;
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::exactreal::AlphaValue;
use crate::gapset::{mod2, GapSet, Generator};

/// Interval table of depth `t` for a fixed generator prefix.
#[derive(Debug, Clone)]
pub struct IntervalTable {
    a: Vec<u64>,
    /// `c[b-1]`, `d[b-1]` are the endpoints of the level-`b` interval.
    c: Vec<BigRational>,
    d: Vec<BigRational>,
    run_bound: u32,
}

/// Builds the interval table for `a_1..a_t`. Requires `a_1 = 1` (reduce
/// first) and `a_i >= 2` beyond that.
pub fn build_intervals(a: &[u64]) -> Result<IntervalTable> {
    if a.is_empty() {
        return Err(Error::InvalidGenerator("empty generator prefix".into()));
    }
    if a[0] != 1 {
        return Err(Error::InvalidGenerator(format!(
            "a_1 = {} but the table requires a_1 = 1; divide the gap set by a_1 first",
            a[0]
        )));
    }
    if let Some((i, &v)) = a.iter().enumerate().skip(1).find(|&(_, &v)| v < 2) {
        return Err(Error::InvalidGenerator(format!(
            "a_{} = {} but every value after a_1 must be at least 2",
            i + 1,
            v
        )));
    }
    let t = a.len();
    let mut c = vec![BigRational::one(); t];
    let mut d = vec![BigRational::one(); t];
    c[t - 1] = BigRational::new(BigInt::one(), BigInt::from(2));
    d[t - 1] = BigRational::one();
    for b in (2..=t).rev() {
        let ab = a[b - 1];
        let offset =
            BigRational::from_integer(BigInt::from(if ab % 2 == 1 { ab - 1 } else { ab - 2 }));
        let den = BigRational::from_integer(BigInt::from(ab));
        c[b - 2] = (&offset + &c[b - 1]) / &den;
        d[b - 2] = (&offset + &d[b - 1]) / &den;
    }
    let run_bound = 1 + max_run_of_twos(&a[1..]);
    Ok(IntervalTable {
        a: a.to_vec(),
        c,
        d,
        run_bound,
    })
}

fn max_run_of_twos(values: &[u64]) -> u32 {
    let mut best = 0u32;
    let mut cur = 0u32;
    for &v in values {
        if v == 2 {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

impl IntervalTable {
    pub fn depth(&self) -> usize {
        self.a.len()
    }

    pub fn generator(&self) -> &[u64] {
        &self.a
    }

    /// Partial products `d_1..d_t` of the generator.
    pub fn products(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.a.len());
        let mut p = BigInt::one();
        for &v in &self.a {
            p *= BigInt::from(v);
            out.push(p.clone());
        }
        out
    }

    /// Endpoints of the level-`b` interval, 1-indexed.
    pub fn level(&self, b: usize) -> (&BigRational, &BigRational) {
        (&self.c[b - 1], &self.d[b - 1])
    }

    /// `k`: one more than the longest run of consecutive 2's in `a_2..a_t`.
    pub fn run_bound(&self) -> u32 {
        self.run_bound
    }

    /// `1 / 2^k`, the proven floor of every interval in this table.
    pub fn window_floor(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2).pow(self.run_bound))
    }

    /// Midpoint of the level-1 interval: the slope a caller would select
    /// from this table.
    pub fn level1_midpoint(&self) -> BigRational {
        (&self.c[0] + &self.d[0]) / BigRational::from_integer(BigInt::from(2))
    }
}

/// Running intersection of the level-1 intervals of depths `1..=t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JtInterval {
    pub t: usize,
    pub lo: BigRational,
    pub hi: BigRational,
}

/// The running intersections for every depth up to `a.len()`. An entry is
/// `None` from the first depth where the intersection becomes empty, which
/// happens whenever some `a_{b+1} = 2` pulls the level-1 interval below the
/// previous ones.
pub fn j_intervals(a: &[u64]) -> Result<Vec<Option<JtInterval>>> {
    let mut out = Vec::with_capacity(a.len());
    let mut running: Option<(BigRational, BigRational)> = None;
    for t in 1..=a.len() {
        let table = build_intervals(&a[..t])?;
        let (c1, d1) = table.level(1);
        running = match running {
            None if t == 1 => Some((c1.clone(), d1.clone())),
            Some((lo, hi)) => {
                let lo = lo.max(c1.clone());
                let hi = hi.min(d1.clone());
                if lo <= hi {
                    Some((lo, hi))
                } else {
                    None
                }
            }
            None => None,
        };
        out.push(running.clone().map(|(lo, hi)| JtInterval { t, lo, hi }));
    }
    Ok(out)
}

/// A slope chosen for a concrete range bound, with everything needed to
/// restate the guarantee it carries.
#[derive(Debug, Clone)]
pub struct NestedAlpha {
    /// Midpoint of the deepest table's level-1 interval.
    pub alpha: BigRational,
    /// Generator values `a_1..a_T`.
    pub a: Vec<u64>,
    /// Products `d_1..d_T`; `T` is minimal with `d_T` above the range bound.
    pub d: Vec<u64>,
    /// Tail-aware run bound `k` (covers runs of 2's anywhere in the
    /// generator, not only the materialized prefix).
    pub run_bound: u32,
    /// `1 / 2^k`.
    pub window_floor: BigRational,
    /// The deepest level-1 interval the slope was drawn from.
    pub base_lo: BigRational,
    pub base_hi: BigRational,
}

/// Selects an exact rational slope for ranges `[1..bound]`: takes the
/// smallest depth `T` with `d_T > bound`, builds that table, and returns the
/// midpoint of its level-1 interval. Every product then satisfies
/// `d_t * alpha mod 2` inside `[1/2^k, 1]`, which is verified here exactly
/// before returning.
pub fn nested_alpha(gen: &Generator, bound: u64) -> Result<NestedAlpha> {
    let run = gen.max_run_of_twos().ok_or_else(|| {
        Error::InvalidGenerator(
            "generator has unbounded runs of 2's; no avoiding slope exists".into(),
        )
    })?;
    let run_bound = run + 1;
    let (a, d) = gen.take_until_product_exceeds(bound);
    let table = build_intervals(&a)?;
    let (c1, d1) = table.level(1);
    let alpha = (c1 + d1) / BigRational::from_integer(BigInt::from(2));
    let window_floor = BigRational::new(BigInt::one(), BigInt::from(2).pow(run_bound));
    let one = BigRational::one();
    for (&dt, t) in d.iter().zip(1..) {
        let v = mod2(&(&alpha * BigRational::from_integer(BigInt::from(dt))));
        if v < window_floor || v > one {
            return Err(Error::Internal(format!(
                "selected slope {alpha} violates its window at level {t}: \
                 {dt} * alpha mod 2 = {v} outside [{window_floor}, 1]"
            )));
        }
    }
    Ok(NestedAlpha {
        alpha,
        a,
        d,
        run_bound,
        window_floor,
        base_lo: c1.clone(),
        base_hi: d1.clone(),
    })
}

/// A materialized avoiding coloring for a dividing gap set.
#[derive(Debug, Clone)]
pub struct DividingColoring {
    /// Explicit coloring of `[1..n]`.
    pub coloring: Coloring,
    pub alpha: BigRational,
    /// `a_1` of the original (unreduced) generator; colors are constant on
    /// runs of this many consecutive integers.
    pub index_scale: u64,
    /// Depth of the table the slope came from.
    pub levels: usize,
    pub run_bound: u32,
    /// No monochromatic diffsequence of this length exists in `[1..n]`.
    pub avoid_length: u64,
}

/// Builds the parity coloring of `[1..n]` for a dividing-structured gap set:
/// reduce the generator so `a_1 = 1`, select a slope for the compressed range,
/// and color `n` by the parity of `floor(m * alpha)` with
/// `m = (n-1)/a_1 + 1`.
pub fn dividing_coloring(g: &GapSet, n: u64) -> Result<DividingColoring> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "range bound must be positive".into(),
        ));
    }
    let gen = g
        .generator()
        .ok_or_else(|| Error::NotDividing(g.to_string()))?;
    let scale = gen.first();
    let reduced = gen.reduce_first();
    let compressed_bound = n.div_ceil(scale);
    let na = nested_alpha(&reduced, compressed_bound)?;
    let beatty = Coloring::beatty(AlphaValue::rational(na.alpha.clone()), scale);
    let bits: Bits = beatty.materialize(n)?.into_iter().collect();
    let avoid_length = (1u64 << na.run_bound) + 1;
    Ok(DividingColoring {
        coloring: Coloring::explicit(bits),
        alpha: na.alpha,
        index_scale: scale,
        levels: na.d.len(),
        run_bound: na.run_bound,
        avoid_length,
    })
}
