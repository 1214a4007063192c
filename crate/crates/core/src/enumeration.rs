//! Coding maps between naturals, words and tuples.
//!
//! `psi` lists `2^<ℕ` in length-then-lexicographic order, `s_of(n)` pads
//! `psi(n)` with zeros to length exactly `n`, and `phi`/`pair_code` are the
//! diagonal enumeration of `ℕ²` (`(0,0), (1,0), (0,1), (2,0), (1,1), …`) and
//! its inverse. All arithmetic is checked; overflow is an error rather than a
//! wrapped value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntPair {
    pub i: u64,
    pub j: u64,
}

/// The `n`-th word in length-then-lexicographic order (`0 < 1`).
pub fn psi(n: u64) -> Word {
    let shifted = n as u128 + 1;
    let len = 127 - shifted.leading_zeros() as usize;
    let offset = shifted - (1u128 << len);
    Word::from_index(offset as u64, len)
}

/// Inverse of [`psi`].
pub fn psi_index(word: &Word) -> Result<u64> {
    if word.len() >= 64 {
        return Err(Error::Overflow("psi_index"));
    }
    ((1u64 << word.len()) - 1)
        .checked_add(word.to_index())
        .ok_or(Error::Overflow("psi_index"))
}

/// `s_n = psi(n) · 0^(n − |psi(n)|)`, a word of length exactly `n`.
pub fn s_of(n: u64) -> Word {
    let mut w = psi(n);
    let pad = n as usize - w.len();
    w.extend_from(&Word::zeros(pad));
    w
}

/// Whether `t` is a prefix of `s_n`, without materializing `s_n`.
fn is_prefix_of_s(t: &Word, n: u64) -> bool {
    if t.len() as u64 > n {
        return false;
    }
    let head = psi(n);
    t.bits()
        .iter()
        .enumerate()
        .all(|(k, &b)| b == (k < head.len() && head.bit(k)))
}

/// Least `n ≤ bound` with `t` a strict prefix of `s_n`.
pub fn density_witness(t: &Word, bound: u64) -> Option<u64> {
    (t.len() as u64 + 1..=bound).find(|&n| is_prefix_of_s(t, n))
}

/// `Σ_{k ≤ m} k`.
pub fn triangle(m: u64) -> Result<u64> {
    m.checked_mul(m + 1)
        .map(|x| x / 2)
        .ok_or(Error::Overflow("triangle"))
}

/// Largest `m` with `m(m+1)/2 ≤ q`.
#[allow(non_snake_case)]
pub fn M_of(q: u64) -> u64 {
    // (8q+1) would overflow for large q, so solve in u128
    let disc = 8 * q as u128 + 1;
    let mut m = ((disc.isqrt() - 1) / 2) as u64;
    while (m as u128 + 1) * (m as u128 + 2) / 2 <= q as u128 {
        m += 1;
    }
    while m as u128 * (m as u128 + 1) / 2 > q as u128 {
        m -= 1;
    }
    m
}

/// Diagonal enumeration `ℕ → ℕ²`.
pub fn phi(q: u64) -> IntPair {
    let m = M_of(q);
    // m(m+1)/2 ≤ q, so this cannot overflow
    let base = m * (m + 1) / 2;
    IntPair {
        i: m - (q - base),
        j: q - base,
    }
}

/// `⟨i, j⟩ = Σ_{k ≤ i+j} k + j`, the inverse of [`phi`].
pub fn pair_code(i: u64, j: u64) -> Result<u64> {
    let d = i.checked_add(j).ok_or(Error::Overflow("pair_code"))?;
    triangle(d)?
        .checked_add(j)
        .ok_or(Error::Overflow("pair_code"))
}

/// `p((a)) = a`, `p(s·b) = ⟨p(s), b⟩`.
pub fn tuple_code(entries: &[u64]) -> Result<u64> {
    let (&first, rest) = entries.split_first().ok_or(Error::EmptyTuple)?;
    rest.iter().try_fold(first, |acc, &b| pair_code(acc, b))
}

/// Inverse of [`tuple_code`] restricted to tuples of length `len ≥ 1`.
pub fn tuple_decode(code: u64, len: usize) -> Result<Vec<u64>> {
    if len == 0 {
        return Err(Error::EmptyTuple);
    }
    let mut out = vec![0; len];
    let mut acc = code;
    for slot in out[1..].iter_mut().rev() {
        let IntPair { i, j } = phi(acc);
        *slot = j;
        acc = i;
    }
    out[0] = acc;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn psi_listed_values() {
        let expected = ["e", "0", "1", "00", "01", "10", "11", "000"];
        for (n, e) in expected.iter().enumerate() {
            assert_eq!(psi(n as u64), w(e), "psi({n})");
        }
    }

    #[test]
    fn s_examples() {
        assert_eq!(s_of(0), w("e"));
        assert_eq!(s_of(1), w("0"));
        assert_eq!(s_of(2), w("10"));
        assert_eq!(s_of(3), w("000"));
        assert_eq!(s_of(4), w("0100"));
    }

    #[test]
    fn density_examples() {
        assert_eq!(density_witness(&w("e"), 10), Some(1));
        assert_eq!(density_witness(&w("1"), 10), Some(2));
        assert_eq!(density_witness(&w("11"), 100), Some(6));
        assert_eq!(density_witness(&w("11"), 5), None);
    }

    #[test]
    fn m_and_phi_examples() {
        assert_eq!(M_of(0), 0);
        assert_eq!(M_of(2), 1);
        assert_eq!(M_of(5), 2);
        assert_eq!(M_of(u64::MAX), 6_074_000_999);
        let listed = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        for (q, &(i, j)) in listed.iter().enumerate() {
            assert_eq!(phi(q as u64), IntPair { i, j });
        }
    }

    #[test]
    fn pair_and_tuple_codes() {
        assert_eq!(pair_code(0, 0), Ok(0));
        assert_eq!(pair_code(1, 1), Ok(4));
        assert_eq!(pair_code(0, 2), Ok(5));
        assert_eq!(tuple_code(&[7]), Ok(7));
        assert_eq!(tuple_code(&[0, 0]), Ok(0));
        assert_eq!(tuple_code(&[1, 1]), Ok(4));
        assert_eq!(tuple_code(&[]), Err(Error::EmptyTuple));
        assert_eq!(
            tuple_decode(tuple_code(&[3, 1, 4]).unwrap(), 3),
            Ok(vec![3, 1, 4])
        );
    }

    #[test]
    fn overflow_is_rejected() {
        assert!(pair_code(u64::MAX, 1).is_err());
        assert!(pair_code(1 << 33, 0).is_err());
        assert!(tuple_code(&[1 << 20, 1 << 20, 1 << 20]).is_err());
        assert!(psi_index(&Word::zeros(64)).is_err());
    }
}
