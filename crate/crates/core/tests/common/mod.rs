//! Brute-force oracles, written independently of the library's DP and
//! search code paths. Everything here is exhaustive and only usable at tiny
//! sizes; that is the point.

#![allow(dead_code)]

/// Longest monochromatic diffsequence in `[1..colors.len()]` by exhaustive
/// recursive extension from every start. `colors[i]` is the color of `i+1`.
pub fn brute_longest_mono(colors: &[u8], gaps: &[u64]) -> u64 {
    let n = colors.len() as u64;
    let mut best = 0;
    for start in 1..=n {
        best = best.max(extend_from(start, colors, gaps, n));
    }
    best
}

fn extend_from(p: u64, colors: &[u8], gaps: &[u64], n: u64) -> u64 {
    let mut best = 1;
    for &d in gaps {
        let q = p + d;
        if q <= n && colors[(q - 1) as usize] == colors[(p - 1) as usize] {
            best = best.max(1 + extend_from(q, colors, gaps, n));
        }
    }
    best
}

/// Maximum number of steps of size `gap_size` over all monochromatic
/// diffsequences, by the same exhaustive extension.
pub fn brute_max_gap_count(colors: &[u8], gaps: &[u64], gap_size: u64) -> u64 {
    let n = colors.len() as u64;
    let mut best = 0;
    for start in 1..=n {
        best = best.max(count_from(start, colors, gaps, gap_size, n));
    }
    best
}

fn count_from(p: u64, colors: &[u8], gaps: &[u64], gap_size: u64, n: u64) -> u64 {
    let mut best = 0;
    for &d in gaps {
        let q = p + d;
        if q <= n && colors[(q - 1) as usize] == colors[(p - 1) as usize] {
            let sub = count_from(q, colors, gaps, gap_size, n) + u64::from(d == gap_size);
            best = best.max(sub);
        }
    }
    best
}

/// Plain validity check for a claimed witness.
pub fn check_witness(colors: &[u8], gaps: &[u64], positions: &[u64], color: u8) -> bool {
    if positions.is_empty() {
        return false;
    }
    positions
        .iter()
        .all(|&p| p >= 1 && p <= colors.len() as u64 && colors[(p - 1) as usize] == color)
        && positions
            .windows(2)
            .all(|w| w[1] > w[0] && gaps.contains(&(w[1] - w[0])))
}

/// Does the coloring encoded in the low `n` bits of `mask` (bit i = color of
/// position i+1) contain a monochromatic diffsequence of length `k`?
pub fn mask_has_length(mask: u64, n: usize, k: u64, gaps: &[u64]) -> bool {
    let mut len = vec![0u64; n + 1];
    for a in 1..=n {
        let ca = (mask >> (a - 1)) & 1;
        let mut best = 1;
        for &d in gaps {
            let d = d as usize;
            if d >= a {
                break;
            }
            if (mask >> (a - d - 1)) & 1 == ca && len[a - d] + 1 > best {
                best = len[a - d] + 1;
            }
        }
        if best >= k {
            return true;
        }
        len[a] = best;
    }
    false
}

/// Exhaustive existence over all 2^n colorings of `[1..n]`.
pub fn brute_exists_valid(gaps: &[u64], k: u64, n: usize) -> Option<u64> {
    assert!(n <= 24, "exhaustive enumeration only for tiny n");
    (0u64..(1 << n)).find(|&mask| !mask_has_length(mask, n, k, gaps))
}

/// Exhaustive Ramsey-type number, growing `n` until no coloring survives.
pub fn brute_delta(gaps_up_to: impl Fn(u64) -> Vec<u64>, k: u64, cap: usize) -> Option<u64> {
    for n in k.max(1) as usize..=cap {
        let gaps = gaps_up_to(n as u64 - 1);
        if brute_exists_valid(&gaps, k, n).is_none() {
            return Some(n as u64);
        }
    }
    None
}
