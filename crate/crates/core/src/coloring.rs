//! 2-colorings of the positive integers.
//!
//! Three shapes: periodic block colorings (the doubling blocks and their
//! stretched variants live here), explicit colorings of a finite range, and
//! Beatty colorings by the parity of `floor(m * alpha)`.

use serde::{Deserialize, Serialize};

use crate::bits::{Bits, DEFAULT_BIT_CAP};
use crate::error::{Error, Result};
use crate::exactreal::{AlphaValue, DEFAULT_REFINE_CAP};

/// Doubling block of order `t`: length `2^t`, built by appending the bitwise
/// complement at each step starting from "1". `t = 0` gives "1" itself.
pub fn thue_morse_block(t: u32) -> Result<Bits> {
    thue_morse_block_with_cap(t, DEFAULT_BIT_CAP)
}

pub fn thue_morse_block_with_cap(t: u32, cap: u64) -> Result<Bits> {
    let len = checked_block_len(t, cap)?;
    let mut block = Bits::with_capacity(len);
    block.push(1);
    for _ in 0..t {
        block.append_complement();
    }
    Ok(block)
}

fn checked_block_len(log2_len: u32, cap: u64) -> Result<u64> {
    match 1u64.checked_shl(log2_len) {
        Some(l) if l <= cap => Ok(l),
        Some(l) => Err(Error::MemoryCap { requested: l, cap }),
        None => Err(Error::MemoryCap {
            requested: u64::MAX,
            cap,
        }),
    }
}

/// Block of order `t` with every bit repeated `2^u` times; length `2^(t+u)`.
pub fn stretch_block(t: u32, u: u32) -> Result<Bits> {
    stretch_block_with_cap(t, u, DEFAULT_BIT_CAP)
}

pub fn stretch_block_with_cap(t: u32, u: u32, cap: u64) -> Result<Bits> {
    let len = checked_block_len(
        t.checked_add(u).ok_or(Error::MemoryCap {
            requested: u64::MAX,
            cap,
        })?,
        cap,
    )?;
    let base = thue_morse_block_with_cap(t, cap)?;
    let copies = 1u64 << u;
    let mut out = Bits::with_capacity(len);
    for bit in base.iter() {
        for _ in 0..copies {
            out.push(bit);
        }
    }
    Ok(out)
}

/// A coloring of the positive integers with colors {0, 1}. Positions are
/// 1-indexed: position 1 takes the first block bit.
#[derive(Debug, Clone)]
pub enum Coloring {
    /// The block repeats forever.
    Periodic { block: Bits },
    /// Defined only on `[1..len]`.
    Explicit { bits: Bits },
    /// Color of `n` is the parity of `floor(m * alpha)` where
    /// `m = (n-1)/index_scale + 1`. A scale of 1 is the plain Beatty rule;
    /// larger scales color each run of `index_scale` consecutive integers
    /// alike (used when every gap is a multiple of the scale).
    Beatty { alpha: AlphaValue, index_scale: u64 },
}

impl Coloring {
    /// Periodic coloring over the doubling block of order `t`.
    pub fn thue_morse(t: u32) -> Result<Coloring> {
        Ok(Coloring::Periodic {
            block: thue_morse_block(t)?,
        })
    }

    /// Periodic coloring over the stretched block (`t`, `u`).
    pub fn stretched_thue_morse(t: u32, u: u32) -> Result<Coloring> {
        Ok(Coloring::Periodic {
            block: stretch_block(t, u)?,
        })
    }

    pub fn periodic(block: Bits) -> Coloring {
        Coloring::Periodic { block }
    }

    pub fn explicit(bits: Bits) -> Coloring {
        Coloring::Explicit { bits }
    }

    pub fn beatty(alpha: AlphaValue, index_scale: u64) -> Coloring {
        assert!(index_scale >= 1);
        Coloring::Beatty { alpha, index_scale }
    }

    pub fn color_count(&self) -> u32 {
        2
    }

    /// Length of one period, or of the defined range for explicit colorings.
    pub fn period(&self) -> Option<u64> {
        match self {
            Coloring::Periodic { block } => Some(block.len()),
            Coloring::Explicit { bits } => Some(bits.len()),
            Coloring::Beatty { .. } => None,
        }
    }

    pub fn color_of(&self, n: u64) -> Result<u8> {
        if n == 0 {
            return Err(Error::InvalidArgument("positions are 1-indexed".into()));
        }
        match self {
            Coloring::Periodic { block } => Ok(block.get((n - 1) % block.len())),
            Coloring::Explicit { bits } => {
                if n > bits.len() {
                    Err(Error::OutOfRange { n, len: bits.len() })
                } else {
                    Ok(bits.get(n - 1))
                }
            }
            Coloring::Beatty { alpha, index_scale } => {
                let m = (n - 1) / index_scale + 1;
                alpha.floor_parity(m, DEFAULT_REFINE_CAP)
            }
        }
    }

    /// Colors of `1..=n` as a plain byte vector (index 0 holds position 1).
    pub fn materialize(&self, n: u64) -> Result<Vec<u8>> {
        let n_usize = usize::try_from(n)
            .map_err(|_| Error::InvalidArgument(format!("range [1..{n}] too large")))?;
        match self {
            Coloring::Beatty { alpha, index_scale } => {
                // One parity per compressed index, expanded in place.
                let mut out = Vec::with_capacity(n_usize);
                let mut m = 1u64;
                while out.len() < n_usize {
                    let parity = alpha.floor_parity(m, DEFAULT_REFINE_CAP)?;
                    for _ in 0..*index_scale {
                        if out.len() == n_usize {
                            break;
                        }
                        out.push(parity);
                    }
                    m += 1;
                }
                Ok(out)
            }
            _ => (1..=n).map(|i| self.color_of(i)).collect(),
        }
    }

    pub fn descriptor(&self) -> ColoringDescriptor {
        match self {
            Coloring::Periodic { block } => ColoringDescriptor::Periodic {
                block: block.to_string(),
            },
            Coloring::Explicit { bits } => ColoringDescriptor::Explicit {
                bits: bits.to_string(),
            },
            Coloring::Beatty { alpha, index_scale } => match alpha {
                AlphaValue::Rational(v) => ColoringDescriptor::Beatty {
                    alpha: v.to_string(),
                    index_scale: *index_scale,
                },
                AlphaValue::FactorialSeries(_) => ColoringDescriptor::BeattyFactorialSeries {
                    index_scale: *index_scale,
                },
            },
        }
    }

    /// Serializes to the coloring file format:
    ///
    /// ```text
    /// # diffseq-coloring v1
    /// periodic 1001
    /// ```
    ///
    /// (or `explicit <bits>`). Beatty colorings must be materialized first.
    pub fn to_file_string(&self) -> Result<String> {
        match self {
            Coloring::Periodic { block } => Ok(format!("{FILE_HEADER}\nperiodic {block}\n")),
            Coloring::Explicit { bits } => Ok(format!("{FILE_HEADER}\nexplicit {bits}\n")),
            Coloring::Beatty { .. } => Err(Error::InvalidArgument(
                "materialize a Beatty coloring before writing it to a file".into(),
            )),
        }
    }

    pub fn parse_file(text: &str) -> Result<Coloring> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().unwrap_or("");
        if header.trim() != FILE_HEADER {
            return Err(Error::Parse {
                what: "coloring file".into(),
                reason: format!("expected header `{FILE_HEADER}`"),
            });
        }
        let body = lines.next().unwrap_or("");
        let (kind, bits) = body.trim().split_once(' ').ok_or_else(|| Error::Parse {
            what: "coloring file".into(),
            reason: "expected `periodic <bits>` or `explicit <bits>`".into(),
        })?;
        let bits = Bits::from_bitstring(bits.trim())?;
        match kind {
            "periodic" => Ok(Coloring::Periodic { block: bits }),
            "explicit" => Ok(Coloring::Explicit { bits }),
            other => Err(Error::Parse {
                what: "coloring file".into(),
                reason: format!("unknown coloring kind `{other}`"),
            }),
        }
    }
}

pub const FILE_HEADER: &str = "# diffseq-coloring v1";

/// Compact, reconstructible description of a coloring, embedded in
/// certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ColoringDescriptor {
    Periodic { block: String },
    Explicit { bits: String },
    Beatty { alpha: String, index_scale: u64 },
    BeattyFactorialSeries { index_scale: u64 },
}

impl ColoringDescriptor {
    /// Rebuilds the described coloring.
    pub fn reconstruct(&self) -> Result<Coloring> {
        match self {
            ColoringDescriptor::Periodic { block } => {
                Ok(Coloring::periodic(Bits::from_bitstring(block)?))
            }
            ColoringDescriptor::Explicit { bits } => {
                Ok(Coloring::explicit(Bits::from_bitstring(bits)?))
            }
            ColoringDescriptor::Beatty { alpha, index_scale } => {
                let v = crate::gapset::parse_rational(alpha).map_err(|reason| Error::Parse {
                    what: format!("rational `{alpha}`"),
                    reason,
                })?;
                Ok(Coloring::beatty(AlphaValue::rational(v), *index_scale))
            }
            ColoringDescriptor::BeattyFactorialSeries { index_scale } => Ok(Coloring::beatty(
                crate::exactreal::factorial_alpha(3),
                *index_scale,
            )),
        }
    }
}
