//! Packed bit sequences used for coloring blocks.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on block sizes: 2^30 bits (128 MiB packed).
pub const DEFAULT_BIT_CAP: u64 = 1 << 30;

/// A packed sequence of bits, indexed from 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
    len: u64,
}

impl Bits {
    pub fn with_capacity(bits: u64) -> Bits {
        Bits {
            words: Vec::with_capacity((bits as usize).div_ceil(64)),
            len: 0,
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: u8) {
        let w = (self.len / 64) as usize;
        if w == self.words.len() {
            self.words.push(0);
        }
        if bit != 0 {
            self.words[w] |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn get(&self, i: u64) -> u8 {
        debug_assert!(i < self.len);
        ((self.words[(i / 64) as usize] >> (i % 64)) & 1) as u8
    }

    /// Appends the bitwise complement of the current contents to itself.
    pub fn append_complement(&mut self) {
        let n = self.len;
        for i in 0..n {
            self.push(1 - self.get(i));
        }
    }

    pub fn from_bitstring(s: &str) -> Result<Bits> {
        let mut b = Bits::with_capacity(s.len() as u64);
        for ch in s.chars() {
            match ch {
                '0' => b.push(0),
                '1' => b.push(1),
                _ => {
                    return Err(Error::Parse {
                        what: "bitstring".into(),
                        reason: format!("unexpected character {ch:?}"),
                    })
                }
            }
        }
        if b.is_empty() {
            return Err(Error::Parse {
                what: "bitstring".into(),
                reason: "empty".into(),
            });
        }
        Ok(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({}: {})", self.len, self)
    }
}

impl FromIterator<u8> for Bits {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        let mut b = Bits::with_capacity(0);
        for bit in iter {
            b.push(bit);
        }
        b
    }
}
