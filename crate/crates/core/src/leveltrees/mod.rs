//! Trees on `2 × 2`, stored level by level, and the uniform acyclicity check.
//!
//! Level `p` of a [`PairTree`] is the relation `T ∩ (2^p × 2^p)` on words of
//! length `p`. A tree is uniformly acyclic when every level `p > 0` is
//! irreflexive, antisymmetric, and its symmetrization has no cycle of length
//! at least 3. Only finitely many levels are ever materialized.

mod graph;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use graph::{CycleSearch, FiniteRelation, LevelGraph};

use crate::enumeration::s_of;
use crate::error::{Error, Result};
use crate::words::Word;

pub type WordPair = (Word, Word);

/// A prefix-closed tree on `2 × 2` truncated at a finite depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTree {
    levels: Vec<BTreeSet<WordPair>>,
}

impl PairTree {
    /// Checks the level shape and prefix closure.
    pub fn from_levels(levels: Vec<BTreeSet<WordPair>>) -> Result<Self> {
        let root: BTreeSet<WordPair> = [(Word::empty(), Word::empty())].into();
        if levels.first() != Some(&root) {
            return Err(Error::InvalidTree("level 0 must be {(e,e)}".into()));
        }
        for (p, level) in levels.iter().enumerate() {
            if let Some((s, t)) = level.iter().find(|(s, t)| s.len() != p || t.len() != p) {
                return Err(Error::InvalidTree(format!(
                    "pair ({s},{t}) at level {p} has the wrong length"
                )));
            }
        }
        let tree = PairTree { levels };
        if let Some(p) = tree.prefix_closure_violation() {
            return Err(Error::InvalidTree(format!(
                "level {p} is not prefix closed"
            )));
        }
        Ok(tree)
    }

    pub(crate) fn from_levels_unchecked(levels: Vec<BTreeSet<WordPair>>) -> Self {
        PairTree { levels }
    }

    /// The tree containing only `(e, e)`.
    pub fn trivial() -> Self {
        PairTree {
            levels: vec![[(Word::empty(), Word::empty())].into()],
        }
    }

    /// Deepest materialized level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, p: usize) -> Option<&BTreeSet<WordPair>> {
        self.levels.get(p)
    }

    pub fn levels(&self) -> &[BTreeSet<WordPair>] {
        &self.levels
    }

    /// First level `p + 1` holding a pair whose restriction is missing from level `p`.
    pub fn prefix_closure_violation(&self) -> Option<usize> {
        self.levels.windows(2).enumerate().find_map(|(p, w)| {
            w[1].iter()
                .any(|(s, t)| !w[0].contains(&(s.prefix(p), t.prefix(p))))
                .then_some(p + 1)
        })
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.prefix_closure_violation().is_none()
    }

    /// The same tree with every pair `(u, u)` removed above level 0.
    pub fn without_diagonal(&self) -> Self {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(p, level)| {
                if p == 0 {
                    level.clone()
                } else {
                    level.iter().filter(|(s, t)| s != t).cloned().collect()
                }
            })
            .collect();
        PairTree { levels }
    }

    /// Level `p` as a relation on all `2^p` words of length `p`.
    pub fn level_relation(&self, p: usize) -> Result<FiniteRelation<Word>> {
        let level = self.level(p).ok_or(Error::InsufficientDepth {
            needed: p,
            available: self.depth(),
        })?;
        FiniteRelation::new(Word::all_of_length(p), level.iter().cloned())
    }

    /// Level `p` with diagonal pairs dropped, as an undirected graph on `2^p` vertices.
    pub fn level_graph(&self, p: usize) -> Result<LevelGraph<Word>> {
        let level = self.level(p).ok_or(Error::InsufficientDepth {
            needed: p,
            available: self.depth(),
        })?;
        Ok(LevelGraph::new(
            Word::all_of_length(p),
            level.iter().filter(|(s, t)| s != t).cloned(),
        ))
    }

    /// JSON: an array of levels, each an array of `[s, t]` string pairs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.levels).expect("word pairs always serialize")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let levels: Vec<BTreeSet<WordPair>> =
            serde_json::from_str(json).map_err(|e| Error::InvalidTree(e.to_string()))?;
        PairTree::from_levels(levels)
    }
}

impl Serialize for PairTree {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.levels.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PairTree {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let levels = Vec::<BTreeSet<WordPair>>::deserialize(deserializer)?;
        PairTree::from_levels(levels).map_err(serde::de::Error::custom)
    }
}

/// The tree `T_0` of the closure of `A_0`: the diagonal together with every
/// `(s_n·0·w, s_n·1·w)`.
pub fn build_t0(depth: usize) -> PairTree {
    let mut levels = vec![BTreeSet::from([(Word::empty(), Word::empty())])];
    for p in 1..=depth {
        let mut level: BTreeSet<WordPair> =
            Word::all_of_length(p).map(|u| (u.clone(), u)).collect();
        for n in 0..p {
            let s = s_of(n as u64);
            let (left, right) = (s.with_bit(false), s.with_bit(true));
            for w in Word::all_of_length(p - n - 1) {
                level.insert((left.concat(&w), right.concat(&w)));
            }
        }
        levels.push(level);
    }
    PairTree::from_levels_unchecked(levels)
}

/// Why a level fails uniform acyclicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum LevelFailure {
    Reflexive { witness: WordPair },
    Symmetric { witness: WordPair },
    Cycle { cycle: Vec<Word> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub irreflexive: bool,
    pub antisymmetric: bool,
    /// `None` when the level is reflexive and so has no symmetrization.
    pub acyclic: Option<bool>,
    pub edges: usize,
    pub components: usize,
    pub failure: Option<LevelFailure>,
}

impl LevelReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AcyclicityReport {
    pub levels: Vec<LevelReport>,
}

impl AcyclicityReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(LevelReport::passed)
    }

    pub fn first_failure(&self) -> Option<(usize, &LevelFailure)> {
        self.levels
            .iter()
            .find_map(|r| r.failure.as_ref().map(|f| (r.level, f)))
    }
}

fn check_level(tree: &PairTree, p: usize) -> Result<LevelReport> {
    let relation = tree.level_relation(p)?;
    let reflexive = relation.reflexive_witness().cloned();
    let symmetric = relation.symmetric_witness().cloned();
    let graph = tree.level_graph(p)?;
    let cycle = match relation.symmetrize() {
        Ok(g) => Some(g.find_cycle()),
        Err(_) => None,
    };
    let failure = match (reflexive, symmetric, &cycle) {
        (Some(witness), _, _) => Some(LevelFailure::Reflexive { witness }),
        (None, Some(witness), _) => Some(LevelFailure::Symmetric { witness }),
        (None, None, Some(CycleSearch::Cycle(c))) => Some(LevelFailure::Cycle { cycle: c.clone() }),
        _ => None,
    };
    Ok(LevelReport {
        level: p,
        irreflexive: relation.is_irreflexive(),
        antisymmetric: relation.is_antisymmetric(),
        acyclic: cycle.map(|c| c.is_acyclic()),
        edges: graph.edge_count(),
        components: graph.component_count(),
        failure,
    })
}

/// Checks every level `0 < p ≤ depth`.
pub fn is_uniformly_acyclic(tree: &PairTree, depth: usize) -> Result<AcyclicityReport> {
    if depth > tree.depth() {
        return Err(Error::InsufficientDepth {
            needed: depth,
            available: tree.depth(),
        });
    }
    let levels = (1..=depth)
        .map(|p| check_level(tree, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(AcyclicityReport { levels })
}

/// Off-diagonal edge count and number of connected components among the `2^p` words.
pub fn level_edge_stats(tree: &PairTree, p: usize) -> Result<(usize, usize)> {
    let g = tree.level_graph(p)?;
    Ok((g.edge_count(), g.component_count()))
}
