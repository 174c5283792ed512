//! Difference sets and their enumeration.
//!
//! A gap set is a set of positive integers used as the allowed consecutive
//! differences of a diffsequence. Families are described lazily; members are
//! only ever enumerated up to a bound.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceiling,
}

/// Generator of a dividing sequence: the set members are the partial products
/// `d_t = a_1 * a_2 * ... * a_t`. Held as a finite prefix plus an optional
/// repeating tail pattern, so eventually-periodic generators are expressible.
/// An empty tail means the generator (and the set) is finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividingSeq {
    prefix: Vec<u64>,
    tail: Vec<u64>,
}

impl DividingSeq {
    pub fn new(prefix: Vec<u64>, tail: Vec<u64>) -> Result<DividingSeq> {
        if prefix.is_empty() && tail.is_empty() {
            return Err(Error::InvalidGenerator("no generator values".into()));
        }
        for (i, &v) in prefix.iter().enumerate() {
            if i == 0 {
                if v == 0 {
                    return Err(Error::InvalidGenerator("a_1 must be positive".into()));
                }
            } else if v < 2 {
                return Err(Error::InvalidGenerator(format!(
                    "a_{} = {} but every value after a_1 must be at least 2",
                    i + 1,
                    v
                )));
            }
        }
        // Tail values repeat forever, so they all occur at positions >= 2.
        if let Some(&v) = tail.iter().find(|&&v| v < 2) {
            return Err(Error::InvalidGenerator(format!(
                "tail value {v} must be at least 2"
            )));
        }
        Ok(DividingSeq { prefix, tail })
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    /// The generator value `a_i`, 1-indexed; `None` past the end of a finite
    /// generator.
    pub fn value(&self, i: usize) -> Option<u64> {
        debug_assert!(i >= 1);
        if i <= self.prefix.len() {
            Some(self.prefix[i - 1])
        } else if self.tail.is_empty() {
            None
        } else {
            Some(self.tail[(i - 1 - self.prefix.len()) % self.tail.len()])
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_empty()
    }

    /// Returns the same generator with `a_1` replaced by 1.
    pub fn reduce_first(&self) -> DividingSeq {
        if self.prefix.is_empty() {
            // a_1 comes from the tail; pin it to 1 and rotate the pattern so
            // positions >= 2 are unchanged.
            let mut tail = self.tail.clone();
            tail.rotate_left(1);
            DividingSeq {
                prefix: vec![1],
                tail,
            }
        } else {
            let mut prefix = self.prefix.clone();
            prefix[0] = 1;
            DividingSeq {
                prefix,
                tail: self.tail.clone(),
            }
        }
    }

    /// Longest run of consecutive 2's that can occur anywhere at positions
    /// >= 2, including runs inside the repeating tail. `None` when the tail is
    /// > all 2's, i.e. the runs are unbounded.
    pub fn max_run_of_twos(&self) -> Option<u32> {
        let values: Vec<u64> = self.prefix.to_vec();
        if self.tail.is_empty() {
            return Some(max_run_in(values.iter().copied().skip(1)));
        }
        if self.tail.iter().all(|&v| v == 2) {
            return None;
        }
        // Unroll prefix + two tail periods: enough to see every junction run
        // (prefix/tail seam and tail wrap-around).
        let mut unrolled = values;
        for _ in 0..2 {
            unrolled.extend_from_slice(&self.tail);
        }
        Some(max_run_in(unrolled.into_iter().skip(1)))
    }
}

fn max_run_in(values: impl Iterator<Item = u64>) -> u32 {
    let mut best = 0u32;
    let mut cur = 0u32;
    for v in values {
        if v == 2 {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

/// A dividing-structured view of a gap set: yields the generator values
/// `a_1, a_2, ...` whose partial products are the set members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// Finite prefix with an optional repeating tail.
    Eventually(DividingSeq),
    /// `a_i = i`, so the members are the factorials.
    Counting,
}

impl Generator {
    pub fn value(&self, i: usize) -> Option<u64> {
        match self {
            Generator::Eventually(seq) => seq.value(i),
            Generator::Counting => Some(i as u64),
        }
    }

    pub fn max_run_of_twos(&self) -> Option<u32> {
        match self {
            Generator::Eventually(seq) => seq.max_run_of_twos(),
            // only a_2 = 2
            Generator::Counting => Some(1),
        }
    }

    pub fn reduce_first(&self) -> Generator {
        match self {
            Generator::Eventually(seq) => Generator::Eventually(seq.reduce_first()),
            Generator::Counting => Generator::Counting,
        }
    }

    pub fn first(&self) -> u64 {
        self.value(1).expect("generators are nonempty")
    }

    /// Generator values `a_1..a_T` and products `d_1..d_T`, where `T` is
    /// minimal with `d_T > bound` (the whole generator if it is finite and
    /// never exceeds the bound).
    pub fn take_until_product_exceeds(&self, bound: u64) -> (Vec<u64>, Vec<u64>) {
        let mut a = Vec::new();
        let mut d = Vec::new();
        let mut product: u64 = 1;
        let mut i = 1usize;
        while let Some(v) = self.value(i) {
            match product.checked_mul(v) {
                Some(p) => {
                    product = p;
                    a.push(v);
                    d.push(p);
                    if p > bound {
                        break;
                    }
                }
                // overflow certainly exceeds any u64 bound
                None => break,
            }
            i += 1;
        }
        (a, d)
    }
}

/// A set of positive integer differences.
#[derive(Debug, Clone, PartialEq)]
pub enum GapSet {
    /// {1, 2, 4, 8, ...}
    PowersOfTwo,
    /// {1, 2, 6, 24, ...}
    Factorials,
    /// Partial products of a dividing generator.
    Dividing(DividingSeq),
    /// A finite, explicitly listed set.
    Explicit(Vec<u64>),
    /// {round(alpha^i) : i >= 0} for a rational alpha > 1.
    FloorPowers { alpha: BigRational, round: Rounding },
}

impl GapSet {
    pub fn explicit(mut values: Vec<u64>) -> Result<GapSet> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("explicit gap set is empty".into()));
        }
        if values.contains(&0) {
            return Err(Error::InvalidArgument(
                "gap set members must be positive".into(),
            ));
        }
        values.sort_unstable();
        values.dedup();
        Ok(GapSet::Explicit(values))
    }

    pub fn dividing(prefix: Vec<u64>, tail: Vec<u64>) -> Result<GapSet> {
        Ok(GapSet::Dividing(DividingSeq::new(prefix, tail)?))
    }

    pub fn floor_powers(alpha: BigRational, round: Rounding) -> Result<GapSet> {
        if alpha <= BigRational::one() {
            return Err(Error::InvalidArgument(format!(
                "floor-power base must exceed 1, got {alpha}"
            )));
        }
        Ok(GapSet::FloorPowers { alpha, round })
    }

    /// All members `d <= n`, strictly increasing.
    pub fn members_up_to(&self, n: u64) -> Vec<u64> {
        match self {
            GapSet::PowersOfTwo => {
                let mut out = Vec::new();
                let mut p = 1u64;
                while p <= n {
                    out.push(p);
                    match p.checked_mul(2) {
                        Some(q) => p = q,
                        None => break,
                    }
                }
                out
            }
            GapSet::Factorials => {
                let mut out = Vec::new();
                let mut f = 1u64;
                let mut i = 1u64;
                while f <= n {
                    out.push(f);
                    i += 1;
                    match f.checked_mul(i) {
                        Some(g) => f = g,
                        None => break,
                    }
                }
                out
            }
            GapSet::Dividing(seq) => {
                let mut out = Vec::new();
                let mut product = 1u64;
                let mut i = 1usize;
                while let Some(v) = seq.value(i) {
                    match product.checked_mul(v) {
                        Some(p) if p <= n => {
                            product = p;
                            out.push(p);
                        }
                        _ => break,
                    }
                    i += 1;
                }
                out
            }
            GapSet::Explicit(values) => values.iter().copied().take_while(|&v| v <= n).collect(),
            GapSet::FloorPowers { alpha, round } => {
                let mut out: Vec<u64> = Vec::new();
                let mut power = BigRational::one();
                loop {
                    let v = match round {
                        Rounding::Floor => power.floor().to_integer(),
                        Rounding::Ceiling => power.ceil().to_integer(),
                    };
                    let Some(v) = v.to_u64() else { break };
                    if v > n {
                        break;
                    }
                    if out.last() != Some(&v) {
                        out.push(v);
                    }
                    power *= alpha;
                }
                out
            }
        }
    }

    pub fn contains(&self, d: u64) -> bool {
        if d == 0 {
            return false;
        }
        match self {
            GapSet::PowersOfTwo => d.is_power_of_two(),
            GapSet::Explicit(values) => values.binary_search(&d).is_ok(),
            _ => self.members_up_to(d).last() == Some(&d),
        }
    }

    /// Divides every member by `a_1`, i.e. replaces `a_1` by 1 in the
    /// generator. Only defined for the `Dividing` kind.
    pub fn reduce_by_first(&self) -> Result<GapSet> {
        match self {
            GapSet::Dividing(seq) => Ok(GapSet::Dividing(seq.reduce_first())),
            other => Err(Error::NotDividing(other.to_string())),
        }
    }

    /// The generator view for gap sets that form a dividing sequence.
    pub fn generator(&self) -> Option<Generator> {
        match self {
            GapSet::PowersOfTwo => Some(Generator::Eventually(
                DividingSeq::new(vec![1], vec![2]).expect("static generator"),
            )),
            GapSet::Factorials => Some(Generator::Counting),
            GapSet::Dividing(seq) => Some(Generator::Eventually(seq.clone())),
            GapSet::Explicit(values) => {
                // A finite explicit set is dividing-structured iff each member
                // divides the next.
                if values.windows(2).any(|w| w[1] % w[0] != 0) {
                    return None;
                }
                let mut gen = Vec::with_capacity(values.len());
                let mut prev = 1u64;
                for &v in values {
                    gen.push(v / prev);
                    prev = v;
                }
                if gen.iter().skip(1).any(|&g| g < 2) {
                    return None;
                }
                DividingSeq::new(gen, vec![])
                    .ok()
                    .map(Generator::Eventually)
            }
            GapSet::FloorPowers { .. } => None,
        }
    }

    /// Parses the textual descriptor grammar used by the CLI:
    /// `pow2`, `factorial`, `dividing:1,2,3|2,3`, `explicit:1,2,6`,
    /// `floorpow:3/2:floor`.
    pub fn parse(descr: &str) -> Result<GapSet> {
        let err = |reason: &str| Error::Parse {
            what: format!("gap set descriptor `{descr}`"),
            reason: reason.into(),
        };
        match descr {
            "pow2" => return Ok(GapSet::PowersOfTwo),
            "factorial" => return Ok(GapSet::Factorials),
            _ => {}
        }
        if let Some(rest) = descr.strip_prefix("dividing:") {
            let (prefix_part, tail_part) = match rest.split_once('|') {
                Some((p, t)) => (p, t),
                None => (rest, ""),
            };
            let prefix =
                parse_u64_list(prefix_part).map_err(|e| err(&format!("bad prefix list: {e}")))?;
            let tail = if tail_part.is_empty() {
                vec![]
            } else {
                parse_u64_list(tail_part).map_err(|e| err(&format!("bad tail list: {e}")))?
            };
            return GapSet::dividing(prefix, tail);
        }
        if let Some(rest) = descr.strip_prefix("explicit:") {
            let values = parse_u64_list(rest).map_err(|e| err(&format!("bad list: {e}")))?;
            return GapSet::explicit(values);
        }
        if let Some(rest) = descr.strip_prefix("floorpow:") {
            let (alpha_part, mode_part) = rest
                .rsplit_once(':')
                .ok_or_else(|| err("expected floorpow:<p/q>:<floor|ceil>"))?;
            let alpha = parse_rational(alpha_part).map_err(|e| err(&format!("bad base: {e}")))?;
            let round = match mode_part {
                "floor" => Rounding::Floor,
                "ceil" | "ceiling" => Rounding::Ceiling,
                other => return Err(err(&format!("unknown rounding mode `{other}`"))),
            };
            return GapSet::floor_powers(alpha, round);
        }
        Err(err(
            "expected pow2, factorial, dividing:..., explicit:... or floorpow:...",
        ))
    }
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapSet::PowersOfTwo => f.write_str("pow2"),
            GapSet::Factorials => f.write_str("factorial"),
            GapSet::Dividing(seq) => {
                write!(f, "dividing:{}", join_u64(seq.prefix()))?;
                if !seq.tail().is_empty() {
                    write!(f, "|{}", join_u64(seq.tail()))?;
                }
                Ok(())
            }
            GapSet::Explicit(values) => write!(f, "explicit:{}", join_u64(values)),
            GapSet::FloorPowers { alpha, round } => write!(
                f,
                "floorpow:{}:{}",
                alpha,
                match round {
                    Rounding::Floor => "floor",
                    Rounding::Ceiling => "ceil",
                }
            ),
        }
    }
}

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_u64_list(s: &str) -> std::result::Result<Vec<u64>, String> {
    if s.trim().is_empty() {
        return Err("empty list".into());
    }
    s.split(',')
        .map(|part| part.trim().parse::<u64>().map_err(|e| e.to_string()))
        .collect()
}

/// Parses `p/q` or a bare integer into an exact rational.
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator `{num}`"))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator `{den}`"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

/// Exact `x mod 2` for a rational, in `[0, 2)`.
pub fn mod2(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let q = (x / &two).floor();
    let r = x - q * &two;
    debug_assert!(!r.is_negative() && r < two);
    r
}
