//! Finite relations, their symmetrizations and cycle certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Debug, Display, Write as _};

use crate::error::{Error, Result};

/// A binary relation on a finite ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRelation<L> {
    ground: BTreeSet<L>,
    pairs: BTreeSet<(L, L)>,
}

impl<L: Ord + Clone + Debug> FiniteRelation<L> {
    pub fn new(
        ground: impl IntoIterator<Item = L>,
        pairs: impl IntoIterator<Item = (L, L)>,
    ) -> Result<Self> {
        let ground: BTreeSet<L> = ground.into_iter().collect();
        let pairs: BTreeSet<(L, L)> = pairs.into_iter().collect();
        if let Some((x, y)) = pairs
            .iter()
            .find(|(x, y)| !ground.contains(x) || !ground.contains(y))
        {
            return Err(Error::InvalidRelation(format!(
                "pair ({x:?}, {y:?}) leaves the ground set"
            )));
        }
        Ok(FiniteRelation { ground, pairs })
    }

    /// A relation whose ground set is exactly the labels occurring in `pairs`.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (L, L)>) -> Self {
        let pairs: BTreeSet<(L, L)> = pairs.into_iter().collect();
        let ground = pairs
            .iter()
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect();
        FiniteRelation { ground, pairs }
    }

    pub fn ground(&self) -> &BTreeSet<L> {
        &self.ground
    }

    pub fn pairs(&self) -> &BTreeSet<(L, L)> {
        &self.pairs
    }

    pub fn contains(&self, x: &L, y: &L) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn reflexive_witness(&self) -> Option<&(L, L)> {
        self.pairs.iter().find(|(x, y)| x == y)
    }

    pub fn is_irreflexive(&self) -> bool {
        self.reflexive_witness().is_none()
    }

    /// A pair `(x, y)`, `x ≠ y`, whose reverse is also present.
    pub fn symmetric_witness(&self) -> Option<&(L, L)> {
        self.pairs
            .iter()
            .find(|(x, y)| x != y && self.contains(y, x))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.symmetric_witness().is_none()
    }

    pub fn is_reflexive(&self) -> bool {
        self.ground.iter().all(|x| self.contains(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        let mut succ: BTreeMap<&L, Vec<&L>> = BTreeMap::new();
        for (x, y) in &self.pairs {
            succ.entry(x).or_default().push(y);
        }
        self.pairs.iter().all(|(x, y)| {
            succ.get(y)
                .into_iter()
                .flatten()
                .all(|z| self.contains(x, z))
        })
    }

    /// The undirected graph `s(R)`. Rejects reflexive input.
    pub fn symmetrize(&self) -> Result<LevelGraph<L>> {
        if let Some((x, _)) = self.reflexive_witness() {
            return Err(Error::ReflexiveInput(format!("{x:?}")));
        }
        Ok(LevelGraph::new(
            self.ground.iter().cloned(),
            self.pairs.iter().cloned(),
        ))
    }

    /// `(x,i) R (y,j)` iff `(x,i) = (y,j)` or (`(x,y) ∈ self` and `(i,j) = (0,1)`).
    pub fn lift_quasiorder(&self) -> FiniteRelation<(L, u8)> {
        let ground: BTreeSet<(L, u8)> = self
            .ground
            .iter()
            .flat_map(|x| [(x.clone(), 0), (x.clone(), 1)])
            .collect();
        let pairs = ground
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .chain(
                self.pairs
                    .iter()
                    .map(|(x, y)| ((x.clone(), 0), (y.clone(), 1))),
            )
            .collect();
        FiniteRelation { ground, pairs }
    }
}

/// Outcome of a cycle search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleSearch<L> {
    Acyclic,
    /// `(e_0, …, e_n)` with `n ≥ 3`, `e_0 = e_n` and no other repetition.
    Cycle(Vec<L>),
}

impl<L> CycleSearch<L> {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, CycleSearch::Acyclic)
    }
}

/// A simple undirected graph on labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelGraph<L> {
    vertices: Vec<L>,
    index: BTreeMap<L, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl<L: Ord + Clone + Debug> LevelGraph<L> {
    /// Builds the graph; loops are dropped and `{x,y}` is stored once.
    pub fn new(
        vertices: impl IntoIterator<Item = L>,
        edges: impl IntoIterator<Item = (L, L)>,
    ) -> Self {
        let set: BTreeSet<L> = vertices.into_iter().collect();
        let vertices: Vec<L> = set.into_iter().collect();
        let mut index: BTreeMap<L, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut vertices = vertices;
        let mut edge_set = BTreeSet::new();
        for (x, y) in edges {
            let a = vertex_id(&mut vertices, &mut index, x);
            let b = vertex_id(&mut vertices, &mut index, y);
            if a != b {
                edge_set.insert((a.min(b), a.max(b)));
            }
        }
        LevelGraph {
            vertices,
            index,
            edges: edge_set,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[L] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&L, &L)> {
        self.edges
            .iter()
            .map(|&(a, b)| (&self.vertices[a], &self.vertices[b]))
    }

    pub fn has_edge(&self, x: &L, y: &L) -> bool {
        match (self.index.get(x), self.index.get(y)) {
            (Some(&a), Some(&b)) => self.edges.contains(&(a.min(b), a.max(b))),
            _ => false,
        }
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut count = 0;
        for root in 0..adj.len() {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Depth-first search for a cycle of length ≥ 3.
    ///
    /// In an undirected DFS every non-tree edge joins a vertex to one of its
    /// ancestors, so the first such edge closes a cycle along the tree path.
    pub fn find_cycle(&self) -> CycleSearch<L> {
        let adj = self.adjacency();
        let n = adj.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut visited = vec![false; n];
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some(top) = stack.last_mut() {
                let u = top.0;
                let Some(&v) = adj[u].get(top.1) else {
                    stack.pop();
                    continue;
                };
                top.1 += 1;
                if parent[u] == Some(v) {
                    continue;
                }
                if visited[v] {
                    let mut path = vec![u];
                    let mut cur = u;
                    while cur != v {
                        cur = parent[cur].expect("back edge target is an ancestor");
                        path.push(cur);
                    }
                    path.reverse();
                    path.push(v);
                    return CycleSearch::Cycle(
                        path.into_iter().map(|i| self.vertices[i].clone()).collect(),
                    );
                }
                visited[v] = true;
                parent[v] = Some(u);
                stack.push((v, 0));
            }
        }
        CycleSearch::Acyclic
    }

    /// Re-checks a cycle certificate against the edge set.
    pub fn validate_cycle(&self, cycle: &[L]) -> bool {
        let n = match cycle.len().checked_sub(1) {
            Some(n) if n >= 3 => n,
            _ => return false,
        };
        if cycle[0] != cycle[n] {
            return false;
        }
        let distinct: BTreeSet<&L> = cycle[..n].iter().collect();
        distinct.len() == n && cycle.windows(2).all(|w| self.has_edge(&w[0], &w[1]))
    }
}

impl<L: Ord + Clone + Debug + Display> LevelGraph<L> {
    /// Graphviz rendering; vertices are named by their `Display` form.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for (x, y) in self.edges() {
            let _ = writeln!(out, "  \"{x}\" -- \"{y}\";");
        }
        out.push_str("}\n");
        out
    }
}

fn vertex_id<L: Ord + Clone>(vertices: &mut Vec<L>, index: &mut BTreeMap<L, usize>, x: L) -> usize {
    if let Some(&i) = index.get(&x) {
        return i;
    }
    vertices.push(x.clone());
    index.insert(x, vertices.len() - 1);
    vertices.len() - 1
}
