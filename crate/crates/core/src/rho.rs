//! The map `ρ₀`, its tower `ρ₀^ξ` for `ξ < ω^ω`, and the sets `H_{1+ξ}` and `A_{1+ξ}`.
//!
//! `ρ₀(ε)(i) = 1` iff `ε(⟨i,j⟩) = 0` for every `j`. Rational points have
//! rational images, so finite stages of the tower are exact on them. A limit
//! stage is exact too once its sequence of shifted stages repeats; otherwise
//! it becomes an opaque evaluator whose bits may need a search budget.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Not;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::enumeration::{pair_code, phi};
use crate::error::{Error, Result};
use crate::testgen::{in_branches, TestTable};
use crate::words::{PointPair, RationalPoint, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeValued {
    Zero,
    One,
    /// The search budget ran out before the value was certified.
    Unknown,
}

impl ThreeValued {
    pub fn from_bool(b: bool) -> Self {
        if b {
            ThreeValued::One
        } else {
            ThreeValued::Zero
        }
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            ThreeValued::Zero => Some(false),
            ThreeValued::One => Some(true),
            ThreeValued::Unknown => None,
        }
    }
}

impl Not for ThreeValued {
    type Output = ThreeValued;

    fn not(self) -> ThreeValued {
        match self {
            ThreeValued::Zero => ThreeValued::One,
            ThreeValued::One => ThreeValued::Zero,
            ThreeValued::Unknown => ThreeValued::Unknown,
        }
    }
}

impl fmt::Display for ThreeValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreeValued::Zero => "0",
            ThreeValued::One => "1",
            ThreeValued::Unknown => "unknown",
        })
    }
}

/// An ordinal below `ω^ω` in Cantor normal form.
///
/// Terms are `(exponent, coefficient)` with strictly decreasing exponents and
/// positive coefficients. The derived order on the term list is the ordinal order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OrdinalNotation {
    terms: Vec<(u32, u64)>,
}

impl OrdinalNotation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn finite(n: u64) -> Self {
        Self::monomial(0, n)
    }

    pub fn omega() -> Self {
        Self::monomial(1, 1)
    }

    /// `ω^exponent · coefficient`.
    pub fn monomial(exponent: u32, coefficient: u64) -> Self {
        let terms = if coefficient == 0 {
            Vec::new()
        } else {
            vec![(exponent, coefficient)]
        };
        OrdinalNotation { terms }
    }

    /// Checks the CNF shape.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self> {
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::parse(
                &format!("{terms:?}"),
                "coefficients must be positive",
            ));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::parse(
                &format!("{terms:?}"),
                "exponents must be strictly decreasing",
            ));
        }
        Ok(OrdinalNotation { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e > 0)
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e == 0)
    }

    /// The finite part `n` in `self = base + n`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(&(0, c)) => c,
            _ => 0,
        }
    }

    /// `self` with its finite part removed: zero or a limit.
    pub fn limit_part(&self) -> Self {
        let mut terms = self.terms.clone();
        if terms.last().is_some_and(|&(e, _)| e == 0) {
            terms.pop();
        }
        OrdinalNotation { terms }
    }

    pub fn predecessor(&self) -> Option<Self> {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => {
                *c -= 1;
                if *c == 0 {
                    terms.pop();
                }
                Some(OrdinalNotation { terms })
            }
            _ => None,
        }
    }

    pub fn successor(&self) -> Result<Self> {
        self.checked_add(&Self::finite(1))
    }

    /// Ordinal sum `self + other`.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let Some(&(lead, lead_c)) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .filter(|&(e, _)| e >= lead)
            .collect();
        match terms.last_mut() {
            Some((e, c)) if *e == lead => {
                *c = c
                    .checked_add(lead_c)
                    .ok_or(Error::Overflow("ordinal addition"))?;
                terms.extend_from_slice(&other.terms[1..]);
            }
            _ => terms.extend_from_slice(&other.terms),
        }
        Ok(OrdinalNotation { terms })
    }

    /// Literal syntax: `0`, `3`, `w`, `w*2+1`, `w^2`, `w^3*2+w+5`. `ω` is accepted for `w`.
    pub fn parse(literal: &str) -> Result<Self> {
        let text: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::parse(literal, "empty ordinal"));
        }
        if text == "0" {
            return Ok(Self::zero());
        }
        let bad = |reason: &str| Error::parse(literal, reason);
        let number = |s: &str| -> Result<u64> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("expected a natural number"));
            }
            s.parse().map_err(|_| bad("number out of range"))
        };
        let mut terms = Vec::new();
        for term in text.split('+') {
            let parsed = match term.strip_prefix('w').or_else(|| term.strip_prefix('ω')) {
                None => (0, number(term)?),
                Some(rest) => {
                    let (exp_part, coeff_part) = match rest.split_once('*') {
                        Some((e, c)) => (e, Some(c)),
                        None => (rest, None),
                    };
                    let exponent = match exp_part.strip_prefix('^') {
                        Some(e) => {
                            u32::try_from(number(e)?).map_err(|_| bad("exponent out of range"))?
                        }
                        None if exp_part.is_empty() => 1,
                        None => return Err(bad("unexpected text after w")),
                    };
                    let coefficient = coeff_part.map(number).transpose()?.unwrap_or(1);
                    (exponent, coefficient)
                }
            };
            if parsed.1 == 0 {
                return Err(bad("zero coefficient"));
            }
            terms.push(parsed);
        }
        Self::from_terms(terms).map_err(|_| bad("terms must have strictly decreasing exponents"))
    }
}

impl fmt::Display for OrdinalNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, &(e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for OrdinalNotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl Serialize for OrdinalNotation {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrdinalNotation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// The sequence `(ξ_k^λ)` chosen for a limit `λ = μ + ω^e·c`.
///
/// The head lists `μ + ω^e·(c−1)` as unit monomials, largest first; the tail
/// repeats `ω^(e−1)`. Every term is nonzero and below `λ`, and the ordinal sum
/// of the whole sequence is `λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalSequence {
    head: Vec<OrdinalNotation>,
    tail: OrdinalNotation,
}

impl FundamentalSequence {
    pub fn term(&self, k: usize) -> OrdinalNotation {
        self.head
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.tail.clone())
    }

    pub fn head(&self) -> &[OrdinalNotation] {
        &self.head
    }

    pub fn tail(&self) -> &OrdinalNotation {
        &self.tail
    }

    pub fn iter(&self) -> impl Iterator<Item = OrdinalNotation> + '_ {
        (0..).map(|k| self.term(k))
    }
}

pub fn fundamental_sequence(lambda: &OrdinalNotation) -> Result<FundamentalSequence> {
    if !lambda.is_limit() {
        return Err(Error::NotLimit(lambda.to_string()));
    }
    let (&(e, c), rest) = lambda.terms.split_last().expect("limits are nonzero");
    let mut head = Vec::new();
    for &(exp, coeff) in rest.iter().chain((c > 1).then_some(&(e, c - 1))) {
        // coefficients of desk-scale ordinals are small; huge ones would not fit in memory anyway
        head.extend(std::iter::repeat_n(
            OrdinalNotation::monomial(exp, 1),
            coeff as usize,
        ));
    }
    Ok(FundamentalSequence {
        head,
        tail: OrdinalNotation::monomial(e - 1, 1),
    })
}

type Evaluator = Arc<dyn Fn(u64, u64) -> ThreeValued + Send + Sync>;

/// A point of `2^ℕ` given either exactly or by a budgeted evaluator.
#[derive(Clone)]
pub enum LazyPoint {
    /// `base^∞` flipped at finitely many positions.
    Fd {
        base: bool,
        deviations: BTreeSet<u64>,
    },
    /// A rational point whose period is not constant.
    Rational(RationalPoint),
    /// `(index, budget) ↦ bit`.
    Opaque(Evaluator),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Fd0,
    Fd1,
    Rational,
    Opaque,
}

impl LazyPoint {
    pub fn fd(base: bool, deviations: impl IntoIterator<Item = u64>) -> Self {
        LazyPoint::Fd {
            base,
            deviations: deviations.into_iter().collect(),
        }
    }

    pub fn zeros() -> Self {
        Self::fd(false, [])
    }

    pub fn ones() -> Self {
        Self::fd(true, [])
    }

    /// Stores eventually constant points as [`LazyPoint::Fd`].
    pub fn rational(point: &RationalPoint) -> Self {
        if point.period().len() == 1 {
            let base = point.period().bit(0);
            let deviations = (0..point.preperiod().len())
                .filter(|&k| point.preperiod().bit(k) != base)
                .map(|k| k as u64);
            Self::fd(base, deviations)
        } else {
            LazyPoint::Rational(point.clone())
        }
    }

    pub fn opaque(f: impl Fn(u64, u64) -> ThreeValued + Send + Sync + 'static) -> Self {
        LazyPoint::Opaque(Arc::new(f))
    }

    pub fn tag(&self) -> ClassTag {
        match self {
            LazyPoint::Fd { base: false, .. } => ClassTag::Fd0,
            LazyPoint::Fd { base: true, .. } => ClassTag::Fd1,
            LazyPoint::Rational(_) => ClassTag::Rational,
            LazyPoint::Opaque(_) => ClassTag::Opaque,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, LazyPoint::Opaque(_))
    }

    /// The exact value as a rational point, if known.
    pub fn to_rational(&self) -> Option<RationalPoint> {
        match self {
            LazyPoint::Fd { base, deviations } => {
                let len = deviations.last().map_or(0, |&d| d as usize + 1);
                let bits = (0..len as u64)
                    .map(|k| deviations.contains(&k) != *base)
                    .collect();
                Some(
                    RationalPoint::new(Word::from_bits(bits), Word::from_bits(vec![*base]))
                        .expect("nonempty period"),
                )
            }
            LazyPoint::Rational(r) => Some(r.clone()),
            LazyPoint::Opaque(_) => None,
        }
    }

    /// Whether this is exactly `0^∞`. `None` for opaque points.
    pub fn is_zero_point(&self) -> Option<bool> {
        match self {
            LazyPoint::Fd { base, deviations } => Some(!base && deviations.is_empty()),
            LazyPoint::Rational(_) => Some(false),
            LazyPoint::Opaque(_) => None,
        }
    }

    pub fn bit(&self, i: u64, budget: u64) -> ThreeValued {
        match self {
            LazyPoint::Fd { base, deviations } => {
                ThreeValued::from_bool(deviations.contains(&i) != *base)
            }
            LazyPoint::Rational(r) => ThreeValued::from_bool(r.bit_at(i)),
            LazyPoint::Opaque(f) => f(i, budget),
        }
    }

    /// `(ε)^k`, i.e. `i ↦ ε(i + k)`.
    pub fn shift_by(&self, k: u64) -> Self {
        match self {
            LazyPoint::Fd { base, deviations } => {
                Self::fd(*base, deviations.range(k..).map(|d| d - k))
            }
            LazyPoint::Rational(r) => Self::rational(&r.shift_by(k)),
            LazyPoint::Opaque(f) => {
                let f = Arc::clone(f);
                Self::opaque(move |i, budget| match i.checked_add(k) {
                    Some(j) => f(j, budget),
                    None => ThreeValued::Unknown,
                })
            }
        }
    }

    /// Bits `< k` of `self` followed by `tail`.
    pub fn splice(&self, k: u64, tail: &LazyPoint) -> Self {
        if self.is_exact() {
            let head_bit = |i: u64| self.bit(i, 0) == ThreeValued::One;
            match tail {
                LazyPoint::Fd { base, deviations } => {
                    let front = (0..k).filter(|&i| head_bit(i) != *base);
                    let back = deviations.iter().filter_map(|d| d.checked_add(k));
                    return Self::fd(*base, front.chain(back));
                }
                LazyPoint::Rational(r) => {
                    let head = Word::from_bits((0..k).map(head_bit).collect());
                    return Self::rational(&r.prepend(&head));
                }
                LazyPoint::Opaque(_) => {}
            }
        }
        let (head, tail) = (self.clone(), tail.clone());
        Self::opaque(move |i, budget| {
            if i < k {
                head.bit(i, budget)
            } else {
                tail.bit(i - k, budget)
            }
        })
    }
}

impl fmt::Debug for LazyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LazyPoint::Fd { base, deviations } => f
                .debug_struct("Fd")
                .field("base", &u8::from(*base))
                .field("deviations", deviations)
                .finish(),
            LazyPoint::Rational(r) => write!(f, "Rational({r})"),
            LazyPoint::Opaque(_) => f.write_str("Opaque"),
        }
    }
}

impl From<RationalPoint> for LazyPoint {
    fn from(point: RationalPoint) -> Self {
        LazyPoint::rational(&point)
    }
}

/// Column `i` of a rational point: whether `r(⟨i,j⟩) = 0` for every `j`.
///
/// Past the preperiod `r(⟨i,j⟩)` depends on `⟨i,j⟩ mod P` for the period length
/// `P`, and `⟨i,j+2P⟩ ≡ ⟨i,j⟩ (mod P)`, so `2P` steps past the preperiod suffice.
fn rational_column_is_zero(r: &RationalPoint, i: u64) -> bool {
    let pre = r.preperiod().len() as u128;
    let per = r.period().len() as u128;
    let bit = |pos: u128| {
        if pos < pre {
            r.preperiod().bit(pos as usize)
        } else {
            r.period().bit(((pos - pre) % per) as usize)
        }
    };
    let code = |j: u128| {
        let d = i as u128 + j;
        d * (d + 1) / 2 + j
    };
    let first_past = (0..)
        .find(|&j| code(j) >= pre)
        .expect("codes are unbounded");
    (0..first_past + 2 * per).all(|j| !bit(code(j)))
}

/// `ρ₀(ε)(i)`. Exact on FD and rational points; opaque points are scanned for `j < budget`.
pub fn rho0_bit(e: &LazyPoint, i: u64, budget: u64) -> ThreeValued {
    match e {
        LazyPoint::Fd { base: true, .. } => ThreeValued::Zero,
        LazyPoint::Fd {
            base: false,
            deviations,
        } => ThreeValued::from_bool(!deviations.iter().any(|&d| phi(d).i == i)),
        LazyPoint::Rational(r) => ThreeValued::from_bool(rational_column_is_zero(r, i)),
        LazyPoint::Opaque(f) => scan_column(f, i, budget),
    }
}

fn scan_column(f: &Evaluator, i: u64, budget: u64) -> ThreeValued {
    for j in 0..budget {
        let Ok(pos) = pair_code(i, j) else {
            break;
        };
        if f(pos, budget) == ThreeValued::One {
            return ThreeValued::Zero;
        }
    }
    ThreeValued::Unknown
}

/// The exact image `ρ₀(e)` of an FD or rational point; `None` for opaque points.
///
/// FD0 with support `D` goes to FD1 with deviations `{φ₀(d) : d ∈ D}`; FD1 goes
/// to `0^∞`; a rational with preperiod length `L` and period length `P` goes to
/// a rational with preperiod `min{i : ⟨i,0⟩ ≥ L}` and period `2P`.
pub fn class_transport(e: &LazyPoint) -> Option<LazyPoint> {
    match e {
        LazyPoint::Fd { base: true, .. } => Some(LazyPoint::zeros()),
        LazyPoint::Fd {
            base: false,
            deviations,
        } => Some(LazyPoint::fd(true, deviations.iter().map(|&d| phi(d).i))),
        LazyPoint::Rational(r) => {
            let pre = r.preperiod().len() as u64;
            let per = 2 * r.period().len();
            let start = (0..)
                .find(|&i: &u64| i * (i + 1) / 2 >= pre)
                .expect("triangles are unbounded");
            let col = |i: u64| rational_column_is_zero(r, i);
            let head = Word::from_bits((0..start).map(col).collect());
            let cycle = Word::from_bits((start..start + per as u64).map(col).collect());
            Some(LazyPoint::rational(
                &RationalPoint::new(head, cycle).expect("nonempty period"),
            ))
        }
        LazyPoint::Opaque(_) => None,
    }
}

pub fn apply_rho0(e: &LazyPoint) -> LazyPoint {
    class_transport(e).unwrap_or_else(|| {
        let LazyPoint::Opaque(f) = e else {
            unreachable!("exact points always transport")
        };
        let f = Arc::clone(f);
        LazyPoint::opaque(move |i, budget| scan_column(&f, i, budget))
    })
}

/// Longest run of stages searched for a repeat before a limit stage goes opaque.
pub const MAX_LIMIT_STAGES: usize = 2048;

/// Largest rational window kept exact inside a limit stage.
pub const MAX_EXACT_WINDOW: usize = 1024;

/// Stages of `ρ₀^λ(ε)`.
///
/// With `P_{k+1} = ρ₀^{(k,k+1)}(P_k)`, the tails `Q_k = (P_{k+1})^k` satisfy
/// `Q_0 = ρ₀^{ξ_0}(ε)` and `Q_{k+1} = ρ₀^{ξ_{k+1}}(S(Q_k))`, and
/// `ρ₀^λ(ε)(k) = Q_k(0)`. The bits `< k` that `ρ₀^{(k,k+1)}` leaves alone are
/// never needed again, so only the tails are stored.
struct LimitStages {
    sequence: FundamentalSequence,
    tails: Mutex<Vec<LazyPoint>>,
}

impl LimitStages {
    fn next_tail(&self, k: usize, prev: &LazyPoint) -> LazyPoint {
        apply_tower(&self.sequence.term(k), &prev.shift_by(1))
    }

    fn tail(&self, k: usize) -> LazyPoint {
        let mut tails = self.tails.lock().expect("stage cache poisoned");
        while tails.len() <= k {
            let next = self.next_tail(tails.len(), tails.last().expect("Q_0 is stored"));
            tails.push(next);
        }
        tails[k].clone()
    }
}

fn small_enough(p: &LazyPoint) -> bool {
    match p {
        LazyPoint::Fd { deviations, .. } => deviations
            .last()
            .is_none_or(|&d| d < MAX_EXACT_WINDOW as u64),
        LazyPoint::Rational(r) => r.window() <= MAX_EXACT_WINDOW,
        LazyPoint::Opaque(_) => false,
    }
}

/// Once the sequence is constant the tails follow one fixed map, so a repeated
/// exact tail makes the diagonal `Q_k(0)` eventually periodic.
fn exact_limit(stages: &LimitStages) -> Option<LazyPoint> {
    let settled = stages.sequence.head().len();
    let mut seen: HashMap<RationalPoint, usize> = HashMap::new();
    let mut tails = vec![stages.tail(0)];
    for k in 0..MAX_LIMIT_STAGES {
        let current = &tails[k];
        if !small_enough(current) {
            break;
        }
        let key = current.to_rational().expect("exact");
        if k >= settled {
            if let Some(&j) = seen.get(&key) {
                let bit = |p: &LazyPoint| p.bit(0, 0) == ThreeValued::One;
                let head = Word::from_bits(tails[..j].iter().map(bit).collect());
                let cycle = Word::from_bits(tails[j..k].iter().map(bit).collect());
                return Some(LazyPoint::rational(
                    &RationalPoint::new(head, cycle).expect("j < k"),
                ));
            }
            seen.insert(key, k);
        }
        let next = stages.next_tail(k + 1, current);
        tails.push(next);
    }
    let mut cache = stages.tails.lock().expect("stage cache poisoned");
    if tails.len() > cache.len() {
        *cache = tails;
    }
    None
}

fn apply_limit(lambda: &OrdinalNotation, e: &LazyPoint) -> LazyPoint {
    let sequence = fundamental_sequence(lambda).expect("caller passes a limit");
    let first = apply_tower(&sequence.term(0), e);
    let stages = Arc::new(LimitStages {
        sequence,
        tails: Mutex::new(vec![first]),
    });
    if let Some(exact) = exact_limit(&stages) {
        return exact;
    }
    LazyPoint::opaque(move |k, budget| match usize::try_from(k) {
        Ok(k) => stages.tail(k).bit(0, budget),
        Err(_) => ThreeValued::Unknown,
    })
}

/// `ρ₀^ξ(e)` as a point. Finite stages over exact inputs stay exact.
pub fn apply_tower(xi: &OrdinalNotation, e: &LazyPoint) -> LazyPoint {
    let base = xi.limit_part();
    let mut point = if base.is_zero() {
        e.clone()
    } else {
        apply_limit(&base, e)
    };
    let mut remaining = xi.finite_part();
    while remaining > 0 {
        // 0^∞ and 1^∞ swap under ρ₀, so long runs reduce to their parity
        if point.is_zero_point() == Some(true)
            || matches!(&point, LazyPoint::Fd { base: true, deviations } if deviations.is_empty())
        {
            if remaining % 2 == 1 {
                point = apply_rho0(&point);
            }
            break;
        }
        point = apply_rho0(&point);
        remaining -= 1;
    }
    point
}

/// `ρ₀^ξ(e)(i)`.
pub fn rho_tower(xi: &OrdinalNotation, e: &LazyPoint, i: u64, budget: u64) -> ThreeValued {
    apply_tower(xi, e).bit(i, budget)
}

/// Membership of `e` in `H_{1+ξ} = (ρ₀^ξ)^{-1}({0^∞})`.
///
/// Exact when `ρ₀^ξ(e)` is; otherwise a one at some `i < budget` refutes
/// membership and anything else is `Unknown`.
pub fn in_h(xi: &OrdinalNotation, e: &LazyPoint, budget: u64) -> ThreeValued {
    let image = apply_tower(xi, e);
    if let Some(zero) = image.is_zero_point() {
        return ThreeValued::from_bool(zero);
    }
    if (0..budget).any(|i| image.bit(i, budget) == ThreeValued::One) {
        ThreeValued::Zero
    } else {
        ThreeValued::Unknown
    }
}

/// Membership of a rational pair in `A_{1+ξ} = {(α,β) ∈ [T] : S(αΔβ) ∉ H_{1+ξ}}`.
pub fn in_a(
    xi: &OrdinalNotation,
    table: &TestTable,
    pair: &PointPair,
    budget: u64,
) -> Result<ThreeValued> {
    if !in_branches(table, pair)? {
        return Ok(ThreeValued::Zero);
    }
    let moved = LazyPoint::rational(&pair.sym_diff().shift());
    Ok(!in_h(xi, &moved, budget))
}
