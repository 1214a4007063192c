//! Finite binary words and eventually periodic points of Cantor space.
//!
//! A [`RationalPoint`] is kept in canonical form (primitive period, shortest
//! preperiod), so structural equality coincides with equality of the infinite
//! words they denote. Every pointwise predicate is decided on a window of
//! `max(preperiods) + lcm(periods)` bits.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0, 1}`. The empty word prints as `e`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Word(bits)
    }

    pub fn zeros(len: usize) -> Self {
        Word(vec![false; len])
    }

    /// The word of length `len` spelling `value` in binary, most significant bit first.
    pub fn from_index(value: u64, len: usize) -> Self {
        debug_assert!(len >= 64 || value >> len == 0);
        Word(
            (0..len)
                .rev()
                .map(|k| k < 64 && (value >> k) & 1 == 1)
                .collect(),
        )
    }

    /// Inverse of [`Word::from_index`]. Only meaningful for words of length ≤ 64.
    pub fn to_index(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// All words of length `len` in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!(len < 64, "refusing to enumerate 2^{len} words");
        (0..1u64 << len).map(move |v| Word::from_index(v, len))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.0);
        bits.extend_from_slice(&other.0);
        Word(bits)
    }

    /// `self · b`.
    pub fn with_bit(&self, b: bool) -> Word {
        let mut w = self.clone();
        w.push(b);
        w
    }

    /// `self` concatenated `times` times.
    pub fn power(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// First `n` symbols. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    /// Non-strict prefix relation `self ≼ other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Strict prefix relation `self ≺ other`, `self ≠ other`.
    pub fn is_strict_prefix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Words are written as plain bit strings; `e` is the empty word.
    pub fn parse(literal: &str) -> Result<Word> {
        if literal == "e" {
            return Ok(Word::empty());
        }
        if literal.is_empty() {
            return Err(Error::parse(
                literal,
                "empty literal; write `e` for the empty word",
            ));
        }
        literal
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(
                    literal,
                    format!("unexpected symbol {other:?}"),
                )),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// The bits without the `e` convention (empty word gives `""`).
    pub fn bit_string(&self) -> String {
        self.0.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(&self.bit_string())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl From<&[bool]> for Word {
    fn from(bits: &[bool]) -> Self {
        Word(bits.to_vec())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// An eventually periodic infinite binary word `preperiod · period^∞`.
///
/// The derived `Ord` is structural and only useful for containers; use
/// [`RationalPoint::lex_cmp`] for the lexicographic order on Cantor space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint {
    preperiod: Word,
    period: Word,
}

impl RationalPoint {
    /// Builds `preperiod · period^∞` in canonical form.
    pub fn new(preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::parse(
                &format!("{preperiod}()"),
                "period must be nonempty",
            ));
        }
        Ok(Self::canonical(preperiod.0, period.0))
    }

    /// `b^∞`.
    pub fn constant(b: bool) -> Self {
        RationalPoint {
            preperiod: Word::empty(),
            period: Word(vec![b]),
        }
    }

    pub fn zeros() -> Self {
        Self::constant(false)
    }

    pub fn ones() -> Self {
        Self::constant(true)
    }

    /// `word · 0^∞`.
    pub fn finite(word: &Word) -> Self {
        Self::canonical(word.0.clone(), vec![false])
    }

    fn canonical(mut pre: Vec<bool>, mut period: Vec<bool>) -> Self {
        let n = period.len();
        if let Some(d) = (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (d..n).all(|i| period[i] == period[i - d]))
        {
            period.truncate(d);
        }
        while let (Some(&last), Some(&per_last)) = (pre.last(), period.last()) {
            if last != per_last {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        RationalPoint {
            preperiod: Word(pre),
            period: Word(period),
        }
    }

    pub fn preperiod(&self) -> &Word {
        &self.preperiod
    }

    pub fn period(&self) -> &Word {
        &self.period
    }

    /// `|preperiod| + |period|` of the canonical form.
    pub fn window(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    pub fn bit_at(&self, i: u64) -> bool {
        let pre = self.preperiod.len() as u64;
        if i < pre {
            self.preperiod.0[i as usize]
        } else {
            let per = self.period.len() as u64;
            self.period.0[((i - pre) % per) as usize]
        }
    }

    /// The first `n` bits.
    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n as u64).map(|i| self.bit_at(i)).collect())
    }

    /// `word · self`.
    pub fn prepend(&self, word: &Word) -> Self {
        Self::canonical(word.concat(&self.preperiod).0, self.period.0.clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let pre = self.preperiod.len().max(other.preperiod.len());
        let per = lcm(self.period.len(), other.period.len());
        let bits: Vec<bool> = (0..(pre + per) as u64)
            .map(|i| f(self.bit_at(i), other.bit_at(i)))
            .collect();
        Self::canonical(bits[..pre].to_vec(), bits[pre..].to_vec())
    }

    /// Pointwise XOR.
    pub fn sym_diff(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a != b)
    }

    /// Drops bit 0.
    pub fn shift(&self) -> Self {
        if self.preperiod.is_empty() {
            let mut period = self.period.0.clone();
            period.rotate_left(1);
            Self::canonical(Vec::new(), period)
        } else {
            Self::canonical(self.preperiod.0[1..].to_vec(), self.period.0.clone())
        }
    }

    /// Drops the first `k` bits.
    pub fn shift_by(&self, k: u64) -> Self {
        let pre = self.preperiod.len() as u64;
        if k <= pre {
            return Self::canonical(
                self.preperiod.0[k as usize..].to_vec(),
                self.period.0.clone(),
            );
        }
        let mut period = self.period.0.clone();
        let r = ((k - pre) % period.len() as u64) as usize;
        period.rotate_left(r);
        Self::canonical(Vec::new(), period)
    }

    /// Lexicographic order on infinite words, `0 < 1`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let pre = self.preperiod.len().max(other.preperiod.len());
        let per = lcm(self.period.len(), other.period.len());
        (0..(pre + per) as u64)
            .map(|i| self.bit_at(i).cmp(&other.bit_at(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    pub fn lex_less(&self, other: &Self) -> bool {
        self.lex_cmp(other) == Ordering::Less
    }

    /// Membership in `P_f`: eventually zero.
    pub fn in_pf(&self) -> bool {
        self.period.0 == [false]
    }

    /// Membership in `S_1`: some bit is one.
    pub fn in_s1(&self) -> bool {
        self.preperiod
            .0
            .iter()
            .chain(self.period.0.iter())
            .any(|&b| b)
    }

    /// Positions of the ones of an eventually zero point.
    pub fn support(&self) -> Option<Vec<u64>> {
        self.in_pf().then(|| {
            (0..self.preperiod.len() as u64)
                .filter(|&i| self.preperiod.0[i as usize])
                .collect()
        })
    }

    /// Every canonical rational with `|preperiod| + |period| ≤ max_window`.
    pub fn all_with_window(max_window: usize) -> Vec<RationalPoint> {
        let mut out = BTreeSet::new();
        for total in 1..=max_window {
            for per_len in 1..=total {
                let pre_len = total - per_len;
                for pre in Word::all_of_length(pre_len) {
                    for per in Word::all_of_length(per_len) {
                        out.insert(Self::canonical(pre.0.clone(), per.0));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Literal syntax `u(v)` for `u·v^∞`; `(v)` or `e(v)` for an empty preperiod.
    pub fn parse(literal: &str) -> Result<Self> {
        let open = literal
            .find('(')
            .ok_or_else(|| Error::parse(literal, "expected `u(v)`"))?;
        let body = literal[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| Error::parse(literal, "missing closing `)`"))?;
        let pre = match &literal[..open] {
            "" => Word::empty(),
            s => Word::parse(s).map_err(|_| Error::parse(literal, "bad preperiod"))?,
        };
        if body.is_empty() || body == "e" {
            return Err(Error::parse(literal, "period must be nonempty"));
        }
        let per = Word::parse(body).map_err(|_| Error::parse(literal, "bad period"))?;
        RationalPoint::new(pre, per)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.preperiod.bit_string(), self.period)
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoint({self})")
    }
}

impl FromStr for RationalPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RationalPoint::parse(s)
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        RationalPoint::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Where two points last disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum LastDifference {
    /// The points are equal.
    None,
    At(u64),
    /// They disagree infinitely often.
    Infinite,
}

/// A point of `2^ℕ × 2^ℕ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointPair {
    pub first: RationalPoint,
    pub second: RationalPoint,
}

impl PointPair {
    pub fn new(first: RationalPoint, second: RationalPoint) -> Self {
        PointPair { first, second }
    }

    pub fn sym_diff(&self) -> RationalPoint {
        self.first.sym_diff(&self.second)
    }

    /// `E_0`: the points agree from some index on.
    pub fn in_e0(&self) -> bool {
        self.sym_diff().in_pf()
    }

    pub fn in_diagonal(&self) -> bool {
        self.first == self.second
    }

    /// `L_0`: `first <_lex second`.
    pub fn in_l0(&self) -> bool {
        self.first.lex_less(&self.second)
    }

    pub fn last_difference(&self) -> LastDifference {
        let d = self.sym_diff();
        if !d.in_pf() {
            LastDifference::Infinite
        } else if d.preperiod().is_empty() {
            LastDifference::None
        } else {
            // canonical and eventually zero, so the preperiod ends in a one
            LastDifference::At(d.preperiod().len() as u64 - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RationalPoint {
        RationalPoint::parse(s).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn empty_word_is_not_zero() {
        assert_ne!(w("e"), w("0"));
        assert_eq!(w("e").to_string(), "e");
        assert!(Word::parse("").is_err());
        assert!(Word::parse("012").is_err());
    }

    #[test]
    fn bit_at_examples() {
        assert!(r("1(0)").bit_at(0));
        assert!(!r("(0)").bit_at(7));
        assert!(r("(01)").bit_at(5));
    }

    #[test]
    fn literal_round_trip_and_canonical_form() {
        assert_eq!(r("0(10)").to_string(), "(01)");
        assert_eq!(r("e(0101)").to_string(), "(01)");
        assert_eq!(r("0(0)"), r("(0)"));
        assert_eq!(r("110(110)").to_string(), "(110)");
        assert_eq!(r("1(01)"), r("(10)"));
        assert!(RationalPoint::parse("01").is_err());
        assert!(RationalPoint::parse("0()").is_err());
        assert!(RationalPoint::parse("0(1").is_err());
        assert!(RationalPoint::parse("2(1)").is_err());
    }

    #[test]
    fn sym_diff_examples() {
        assert_eq!(r("1(0)").sym_diff(&r("(0)")), r("1(0)"));
        let x = r("01(101)");
        assert_eq!(x.sym_diff(&x), RationalPoint::zeros());
        assert_eq!(r("(01)").sym_diff(&r("(10)")), RationalPoint::ones());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(r("1(0)").shift(), r("(0)"));
        assert_eq!(r("(0)").shift(), r("(0)"));
        assert_eq!(r("0(10)").shift(), r("(10)"));
        assert_eq!(
            r("011(01)").shift_by(5),
            r("011(01)").shift().shift().shift().shift().shift()
        );
    }

    #[test]
    fn lex_examples() {
        assert!(r("(0)").lex_less(&r("1(0)")));
        assert!(!r("(01)").lex_less(&r("(01)")));
        assert!(!r("(01)").lex_less(&r("(0)")));
    }

    #[test]
    fn one_dimensional_sets() {
        assert!(r("11(0)").in_pf());
        assert!(!r("(10)").in_pf());
        assert!(r("(0)").in_pf());
        assert!(!r("(0)").in_s1());
        assert!(r("0001(0)").in_s1());
        assert!(r("(001)").in_s1());
    }

    #[test]
    fn pair_predicates() {
        let p = |a: &str, b: &str| PointPair::new(r(a), r(b));
        assert!(p("01(0)", "11(0)").in_e0());
        assert!(!p("(01)", "(10)").in_e0());
        assert!(p("0(1)", "0(1)").in_e0());
        assert!(p("(0)", "(0)").in_diagonal());
        assert!(p("0(0)", "(0)").in_diagonal());
        assert!(!p("(0)", "1(0)").in_diagonal());
        assert_eq!(p("00(0)", "11(0)").last_difference(), LastDifference::At(1));
        assert_eq!(p("1(01)", "1(01)").last_difference(), LastDifference::None);
        assert_eq!(
            p("(01)", "(10)").last_difference(),
            LastDifference::Infinite
        );
    }

    #[test]
    fn window_enumeration_is_canonical() {
        let all = RationalPoint::all_with_window(4);
        assert!(all.iter().all(|x| x.window() <= 4));
        assert!(all.contains(&RationalPoint::zeros()));
        assert!(all.contains(&r("1(01)")));
    }

    #[test]
    fn json_uses_literal_syntax() {
        let pair = PointPair::new(r("0(1)"), r("(0)"));
        let json = serde_json::to_string(&pair).unwrap();
        assert_eq!(json, r#"{"first":"0(1)","second":"(0)"}"#);
        let back: PointPair = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pair);
    }
}
