//! The sets `A^C`, `C_S` and `S_β`, a bounded checker for the translation
//! condition on `S`, and the words `s_{α,n}` whose limits `β_α` index the antichain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{LastDifference, PointPair, RationalPoint, Word};

/// Longest word `s_alpha` will build.
pub const MAX_WORD_LEN: usize = 1 << 26;

pub fn card_ones(t: &Word) -> u64 {
    t.count_ones() as u64
}

/// `S_β = {Σ_{i<j} (1 + β(i)) : j ∈ ℕ}` for an eventually periodic `β ∈ ℕ^ℕ`.
///
/// Always contains 0 and is infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetS {
    pre: Vec<u64>,
    period: Vec<u64>,
}

impl SetS {
    /// `β = pre · period^∞`.
    pub fn from_increments(pre: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::parse(
                &format!("{pre:?}({period:?})"),
                "period must be nonempty",
            ));
        }
        let s = SetS { pre, period };
        s.cycle_sum()?;
        s.pre
            .iter()
            .try_fold(0u64, |acc, b| acc.checked_add(b + 1))
            .ok_or(Error::Overflow("S_beta"))?;
        Ok(s)
    }

    /// `S_β` for a binary `β`.
    pub fn from_beta(beta: &RationalPoint) -> Self {
        let digits = |w: &Word| w.bits().iter().map(|&b| u64::from(b)).collect();
        SetS {
            pre: digits(beta.preperiod()),
            period: digits(beta.period()),
        }
    }

    pub fn naturals() -> Self {
        SetS {
            pre: vec![],
            period: vec![0],
        }
    }

    pub fn evens() -> Self {
        SetS {
            pre: vec![],
            period: vec![1],
        }
    }

    fn cycle_sum(&self) -> Result<u64> {
        self.period
            .iter()
            .try_fold(0u64, |acc, b| acc.checked_add(b.checked_add(1)?))
            .ok_or(Error::Overflow("S_beta"))
    }

    /// `β(i)`.
    pub fn increment(&self, i: usize) -> u64 {
        match self.pre.get(i) {
            Some(&b) => b,
            None => self.period[(i - self.pre.len()) % self.period.len()],
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        let mut sum = 0u64;
        for &b in &self.pre {
            if sum >= n {
                return sum == n;
            }
            sum += b + 1;
        }
        let offset = n
            .checked_sub(sum)
            .map(|d| d % self.cycle_sum().expect("checked on construction"));
        let Some(mut target) = offset else {
            return false;
        };
        for &b in &self.period {
            if target == 0 {
                return true;
            }
            match target.checked_sub(b + 1) {
                Some(rest) => target = rest,
                None => return false,
            }
        }
        target == 0
    }

    /// The least `count` elements in increasing order.
    pub fn elements(&self, count: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(count);
        let mut sum = 0u64;
        for i in 0..count {
            out.push(sum);
            sum = sum.saturating_add(self.increment(i) + 1);
        }
        out
    }

    /// `S ∩ [lo, hi]`.
    pub fn elements_in(&self, lo: u64, hi: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut sum = 0u64;
        for i in 0.. {
            if sum > hi {
                break;
            }
            if sum >= lo {
                out.push(sum);
            }
            match sum.checked_add(self.increment(i) + 1) {
                Some(next) => sum = next,
                None => break,
            }
        }
        out
    }
}

/// The first `count` partial sums `Σ_{i<j} (1 + β(i))`, read off a finite prefix of `β`.
pub fn s_beta(beta_prefix: &Word, count: usize) -> Result<Vec<u64>> {
    let needed = count.saturating_sub(1);
    if beta_prefix.len() < needed {
        return Err(Error::PrefixTooShort {
            needed,
            available: beta_prefix.len(),
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut sum = 0u64;
    for j in 0..count {
        out.push(sum);
        if j < needed {
            sum += 1 + u64::from(beta_prefix.bit(j));
        }
    }
    Ok(out)
}

/// Outcome for one `p`: the least `k` that works for every `q ≤ q_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationLevel {
    pub p: u64,
    pub k: Option<u64>,
    /// `(q, c)` with `c` the least good translate in `[q, q + k]`.
    pub witnesses: Vec<(u64, u64)>,
    /// Least `q` with no good `c ∈ [q, q + k_max]`, when `k` is `None`.
    pub obstruction: Option<u64>,
}

/// Bounded check of `∀p ∃k ∀q ∃c ∈ [q, q+k]  c + (S ∩ [0,p]) = S ∩ (c + [0,p])`.
///
/// Every quantifier is cut off at the given bounds, so a pass certifies the
/// condition only up to those bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub p_max: u64,
    pub k_max: u64,
    pub q_max: u64,
    pub levels: Vec<TranslationLevel>,
}

impl TranslationReport {
    pub fn holds_up_to_bounds(&self) -> bool {
        self.levels.iter().all(|l| l.k.is_some())
    }
}

fn good_translate(s: &SetS, p: u64, c: u64) -> bool {
    let base = s.elements_in(0, p);
    let moved = s.elements_in(c, c + p);
    base.len() == moved.len() && base.iter().zip(&moved).all(|(&a, &b)| a + c == b)
}

pub fn thm9_condition(s: &SetS, p_max: u64, k_max: u64, q_max: u64) -> TranslationReport {
    let levels = (0..=p_max)
        .map(|p| {
            let horizon = q_max + k_max;
            let good: Vec<bool> = (0..=horizon).map(|c| good_translate(s, p, c)).collect();
            // next_good[c] = least good c' ≥ c
            let mut next_good = vec![None; good.len() + 1];
            for c in (0..good.len()).rev() {
                next_good[c] = if good[c] {
                    Some(c as u64)
                } else {
                    next_good[c + 1]
                };
            }
            let mut witnesses = Vec::new();
            let mut k = 0;
            let mut obstruction = None;
            for q in 0..=q_max {
                match next_good[q as usize].filter(|&c| c - q <= k_max) {
                    Some(c) => {
                        k = k.max(c - q);
                        witnesses.push((q, c));
                    }
                    None => {
                        obstruction = Some(q);
                        break;
                    }
                }
            }
            TranslationLevel {
                p,
                k: obstruction.is_none().then_some(k),
                witnesses: if obstruction.is_none() {
                    witnesses
                } else {
                    Vec::new()
                },
                obstruction,
            }
        })
        .collect();
    TranslationReport {
        p_max,
        k_max,
        q_max,
        levels,
    }
}

/// `t ∈ C_S`, i.e. `Card(t) ∈ S`.
pub fn in_c_s(t: &Word, s: &SetS) -> bool {
    s.contains(card_ones(t))
}

/// Membership of a rational pair in `A^C = {(s0γ, s1γ) : s ∈ C}`.
pub fn in_a_c(pair: &PointPair, membership: impl Fn(&Word) -> bool) -> bool {
    let LastDifference::At(n) = pair.last_difference() else {
        return false;
    };
    let single_flip = pair.sym_diff().support() == Some(vec![n]);
    single_flip && !pair.first.bit_at(n) && membership(&pair.first.prefix(n as usize))
}

/// A finite prefix of `α ∈ 2^ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaSeed(pub Word);

impl AlphaSeed {
    /// The first `len` bits of `point`.
    pub fn from_point(point: &RationalPoint, len: usize) -> Self {
        AlphaSeed(point.prefix(len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One step `s_{n+2} = s_n^{a} s_{n+1}^{b}` of the recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaStep {
    pub n: usize,
    pub left_power: usize,
    pub right_power: usize,
    pub len: usize,
}

fn alpha_words(alpha: &AlphaSeed, n: usize, mut on_step: impl FnMut(AlphaStep)) -> Result<Word> {
    if n >= 2 && alpha.len() < n {
        return Err(Error::PrefixTooShort {
            needed: n,
            available: alpha.len(),
        });
    }
    let (mut a, mut b) = (Word::parse("0")?, Word::parse("1")?);
    if n == 0 {
        return Ok(a);
    }
    for m in 0..n - 1 {
        let left_power = usize::from(alpha.0.bit(m)) + 1;
        let right_power = usize::from(alpha.0.bit(m + 1)) + 1;
        let len = a.len() * left_power + b.len() * right_power;
        if len > MAX_WORD_LEN {
            return Err(Error::Overflow("s_alpha length"));
        }
        on_step(AlphaStep {
            n: m + 2,
            left_power,
            right_power,
            len,
        });
        let next = a.power(left_power).concat(&b.power(right_power));
        a = std::mem::replace(&mut b, next);
    }
    Ok(b)
}

/// `s_{α,n}`, with `s_{α,0} = 0`, `s_{α,1} = 1` and
/// `s_{α,n+2} = s_{α,n}^{α(n)+1} s_{α,n+1}^{α(n+1)+1}`. Needs `α(i)` for `i < n`.
pub fn s_alpha(alpha: &AlphaSeed, n: usize) -> Result<Word> {
    alpha_words(alpha, n, |_| {})
}

/// [`s_alpha`] together with every recursion step taken.
pub fn s_alpha_trace(alpha: &AlphaSeed, n: usize) -> Result<(Word, Vec<AlphaStep>)> {
    let mut steps = Vec::new();
    let word = alpha_words(alpha, n, |s| steps.push(s))?;
    Ok((word, steps))
}

/// The first `bits` bits of `β_α = lim s_{α,2n}`, read from the least `2n` with `|s_{α,2n}| ≥ bits`.
pub fn beta_alpha(alpha: &AlphaSeed, bits: usize) -> Result<Word> {
    let mut n = 0;
    loop {
        let word = s_alpha(alpha, n)?;
        if word.len() >= bits {
            return Ok(word.prefix(bits));
        }
        n += 2;
    }
}
