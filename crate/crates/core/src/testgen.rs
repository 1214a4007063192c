//! Tests: one word pair `(s_q, t_q)` per level, built by dovetailing.
//!
//! A table must satisfy three clauses:
//!
//! * (a) exactly one row per level (structural here);
//! * (b) for every `m, q` and word `u` some row `(s_q·0·u·v, t_q·1·u·v)` sits at a
//!   level `n` with `φ₀(n − 1) = m`;
//! * (c) every row `n > 0` is `(s_q·0·w, t_q·1·w)` for some `q < n`.
//!
//! Clause (b) quantifies over infinitely many requirements, so a finite table can
//! only cover a bounded box of them; [`verify_density`] reports that coverage.
//!
//! The tree generated by a table has level `p` equal to
//! `{(s_q·0·w, t_q·1·w) : q < p, |w| = p − q − 1}`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::enumeration::{pair_code, phi, psi, psi_index, tuple_code};
use crate::error::{Error, Result};
use crate::leveltrees::PairTree;
use crate::words::{LastDifference, PointPair, Word};

/// The clause (c) witness of a row: `s_n = s_q·0·w`, `t_n = t_q·1·w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Provenance {
    pub from_level: usize,
    pub w: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub s: Word,
    pub t: Word,
    /// `None` only for row 0.
    pub provenance: Option<Provenance>,
}

/// A density requirement `(q, u, m)` of clause (b).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Requirement {
    pub q: usize,
    pub u: Word,
    pub m: u64,
}

impl Requirement {
    /// Dovetailing key `p((m, q, ψ⁻¹(u)))`.
    pub fn schedule_code(&self) -> Result<u64> {
        tuple_code(&[self.m, self.q as u64, psi_index(&self.u)?])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestTable {
    rows: Vec<Row>,
}

#[derive(Serialize, Deserialize)]
struct RowRecord {
    level: usize,
    s: Word,
    t: Word,
    from_level: Option<usize>,
    w: Option<Word>,
}

/// Level `n` of a row whose level index is `n`; `φ₀(n − 1)` is the column it serves.
fn column_of_level(n: usize) -> u64 {
    phi(n as u64 - 1).i
}

fn row_meets(row: &Row, prior: &Row, q: usize, u: &Word) -> bool {
    let end = q + 1 + u.len();
    let (s, t) = (row.s.bits(), row.t.bits());
    s.len() >= end
        && s[..q] == *prior.s.bits()
        && t[..q] == *prior.t.bits()
        && !s[q]
        && t[q]
        && s[q + 1..end] == *u.bits()
        && t[q + 1..end] == *u.bits()
}

impl TestTable {
    /// Validates row lengths, row 0 and every stored provenance.
    pub fn from_rows(rows: Vec<Row>) -> Result<Self> {
        let table = TestTable { rows };
        table.audit()?;
        Ok(table)
    }

    fn audit(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidTable(msg));
        let Some(first) = self.rows.first() else {
            return bad("a table needs row 0".into());
        };
        if !first.s.is_empty() || !first.t.is_empty() || first.provenance.is_some() {
            return bad("row 0 must be (e, e) without provenance".into());
        }
        for (n, row) in self.rows.iter().enumerate().skip(1) {
            if row.s.len() != n || row.t.len() != n {
                return bad(format!("row {n} has the wrong length"));
            }
            let Some(Provenance { from_level: q, w }) = &row.provenance else {
                return bad(format!("row {n} lacks provenance"));
            };
            let q = *q;
            let prior = &self.rows[q.min(n - 1)];
            let expected_s = prior.s.with_bit(false).concat(w);
            let expected_t = prior.t.with_bit(true).concat(w);
            if q >= n || row.s != expected_s || row.t != expected_t {
                return bad(format!("row {n} does not match its provenance ({q}, {w})"));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, q: usize) -> Option<&Row> {
        self.rows.get(q)
    }

    /// Deepest level with a row.
    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }

    /// Whether `row n` witnesses requirement `(q, u, ·)`; the column is not checked.
    pub fn row_meets(&self, n: usize, q: usize, u: &Word) -> bool {
        match (self.rows.get(n), self.rows.get(q)) {
            (Some(row), Some(prior)) => n > 0 && row_meets(row, prior, q, u),
            _ => false,
        }
    }

    /// First level `n ≥ 1` at which some row witnesses `req`.
    pub fn witness_for(&self, req: &Requirement) -> Option<usize> {
        (1..self.rows.len())
            .find(|&n| column_of_level(n) == req.m && self.row_meets(n, req.q, &req.u))
    }

    /// Membership of `(s, t)` in the generated tree, straight from its definition.
    pub fn tree_contains(&self, s: &Word, t: &Word) -> bool {
        let p = s.len();
        if t.len() != p {
            return false;
        }
        if p == 0 {
            return true;
        }
        (0..p.min(self.rows.len())).any(|q| {
            let row = &self.rows[q];
            s.bits()[..q] == *row.s.bits()
                && t.bits()[..q] == *row.t.bits()
                && !s.bit(q)
                && t.bit(q)
                && s.bits()[q + 1..] == t.bits()[q + 1..]
        })
    }

    /// JSON: an array of `{level, s, t, from_level, w}`.
    pub fn to_json(&self) -> String {
        let records: Vec<RowRecord> = self
            .rows
            .iter()
            .enumerate()
            .map(|(level, r)| RowRecord {
                level,
                s: r.s.clone(),
                t: r.t.clone(),
                from_level: r.provenance.as_ref().map(|p| p.from_level),
                w: r.provenance.as_ref().map(|p| p.w.clone()),
            })
            .collect();
        serde_json::to_string(&records).expect("rows always serialize")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let records: Vec<RowRecord> =
            serde_json::from_str(json).map_err(|e| Error::InvalidTable(e.to_string()))?;
        let mut rows = Vec::with_capacity(records.len());
        for (n, rec) in records.into_iter().enumerate() {
            if rec.level != n {
                return Err(Error::InvalidTable(format!(
                    "record {n} claims level {}",
                    rec.level
                )));
            }
            let provenance = match (rec.from_level, rec.w) {
                (Some(from_level), Some(w)) => Some(Provenance { from_level, w }),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidTable(format!(
                        "row {n} has partial provenance"
                    )))
                }
            };
            rows.push(Row {
                s: rec.s,
                t: rec.t,
                provenance,
            });
        }
        TestTable::from_rows(rows)
    }
}

/// Per-column queue of requirements in increasing schedule code.
///
/// For a fixed column `m` the codes are `⟨⟨m, q⟩, k⟩`; they are produced one
/// Cantor diagonal `d = ⟨m, q⟩ + k` at a time, which yields them in order.
#[derive(Default)]
struct ColumnQueue {
    next_diagonal: u64,
    pending: Vec<(usize, u64)>,
}

impl ColumnQueue {
    fn push_diagonal(&mut self, m: u64) -> Result<()> {
        let d = self.next_diagonal;
        let mut batch = Vec::new();
        for q in 0u64.. {
            let a = pair_code(m, q)?;
            if a > d {
                break;
            }
            batch.push((q as usize, d - a));
        }
        // ascending k within a diagonal is ascending code
        batch.sort_by_key(|&(_, k)| k);
        self.pending.extend(batch);
        self.next_diagonal += 1;
        Ok(())
    }
}

/// Builds rows `0..=depth`.
///
/// Requirements are served in increasing [`Requirement::schedule_code`]: level
/// `n` goes to the least-coded requirement `(q, u, φ₀(n − 1))` that fits
/// (`q + 1 + |u| ≤ n`) and is not already witnessed by an earlier row, with
/// `v = 0^(n − q − 1 − |u|)`. When none fits, the row extends row `n − 1` with
/// an empty `w`.
pub fn build_test(depth: usize) -> Result<TestTable> {
    if depth == 0 {
        return Err(Error::InvalidDepth(depth));
    }
    let mut rows = vec![Row {
        s: Word::empty(),
        t: Word::empty(),
        provenance: None,
    }];
    let mut queues: HashMap<u64, ColumnQueue> = HashMap::new();
    let mut by_column: HashMap<u64, Vec<usize>> = HashMap::new();

    for n in 1..=depth {
        let m = column_of_level(n);
        let queue = queues.entry(m).or_default();
        let served = by_column.entry(m).or_default();
        // every requirement that fits level n has q < n and k < 2^n
        let last_useful = pair_code(m, n as u64)?.saturating_add(1u64 << n.min(40));
        let mut pick = None;
        'search: loop {
            let mut i = 0;
            while i < queue.pending.len() {
                let (q, k) = queue.pending[i];
                let u = psi(k);
                if q + 1 + u.len() > n {
                    i += 1;
                    continue;
                }
                queue.pending.remove(i);
                let met = served.iter().any(|&r| row_meets(&rows[r], &rows[q], q, &u));
                if !met {
                    pick = Some((q, u));
                    break 'search;
                }
            }
            if queue.next_diagonal > last_useful {
                break;
            }
            queue.push_diagonal(m)?;
        }
        let (q, w) = match pick {
            Some((q, u)) => {
                let pad = n - q - 1 - u.len();
                (q, u.concat(&Word::zeros(pad)))
            }
            None => (n - 1, Word::empty()),
        };
        let prior = &rows[q];
        let row = Row {
            s: prior.s.with_bit(false).concat(&w),
            t: prior.t.with_bit(true).concat(&w),
            provenance: Some(Provenance { from_level: q, w }),
        };
        rows.push(row);
        served.push(n);
    }
    Ok(TestTable { rows })
}

/// Re-derives clause (c) for every row from scratch, ignoring stored provenance.
/// Returns the first level with no decomposition.
pub fn first_decomposition_failure(table: &TestTable) -> Option<usize> {
    let rows = table.rows();
    let first_row_ok = rows
        .first()
        .is_some_and(|r| r.s.is_empty() && r.t.is_empty());
    if !first_row_ok {
        return Some(0);
    }
    (1..rows.len()).find(|&n| {
        let (s, t) = (&rows[n].s, &rows[n].t);
        s.len() != n
            || t.len() != n
            || !(0..n).any(|q| {
                row_meets(&rows[n], &rows[q], q, &Word::empty())
                    && s.bits()[q + 1..] == t.bits()[q + 1..]
            })
    })
}

pub fn verify_decomposition(table: &TestTable) -> bool {
    first_decomposition_failure(table).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub m_max: u64,
    pub q_max: usize,
    pub u_len_max: usize,
    pub checked: usize,
    pub met: usize,
    pub unmet: Vec<Requirement>,
}

impl DensityReport {
    /// Full coverage of the requested box. Says nothing about requirements outside it.
    pub fn complete(&self) -> bool {
        self.unmet.is_empty()
    }
}

/// Bounded check of clause (b) over `m ≤ m_max`, `q ≤ q_max`, `|u| ≤ u_len_max`.
pub fn verify_density(
    table: &TestTable,
    m_max: u64,
    q_max: usize,
    u_len_max: usize,
) -> DensityReport {
    let mut by_column: HashMap<u64, Vec<usize>> = HashMap::new();
    for n in 1..table.rows().len() {
        by_column.entry(column_of_level(n)).or_default().push(n);
    }
    let mut checked = 0;
    let mut unmet = Vec::new();
    for m in 0..=m_max {
        let levels = by_column.get(&m).map(Vec::as_slice).unwrap_or(&[]);
        for q in 0..=q_max {
            for len in 0..=u_len_max {
                for u in Word::all_of_length(len) {
                    checked += 1;
                    if !levels.iter().any(|&n| table.row_meets(n, q, &u)) {
                        unmet.push(Requirement { q, u, m });
                    }
                }
            }
        }
    }
    DensityReport {
        m_max,
        q_max,
        u_len_max,
        checked,
        met: checked - unmet.len(),
        unmet,
    }
}

/// Levels `0..=depth` of the tree generated by the table. Needs rows `q < depth`.
pub fn generate_tree(table: &TestTable, depth: usize) -> Result<PairTree> {
    if depth > table.rows().len() {
        return Err(Error::InsufficientDepth {
            needed: depth.saturating_sub(1),
            available: table.depth(),
        });
    }
    let mut levels = vec![BTreeSet::from([(Word::empty(), Word::empty())])];
    for p in 1..=depth {
        let mut level = BTreeSet::new();
        for (q, row) in table.rows()[..p].iter().enumerate() {
            let (left, right) = (row.s.with_bit(false), row.t.with_bit(true));
            for w in Word::all_of_length(p - q - 1) {
                level.insert((left.concat(&w), right.concat(&w)));
            }
        }
        levels.push(level);
    }
    Ok(PairTree::from_levels_unchecked(levels))
}

/// Exact membership of a rational pair in the branches `[T]` of the generated tree.
///
/// A branch is `(s_q·0·γ, t_q·1·γ)`, so `q` must be the last index where the
/// two points differ.
pub fn in_branches(table: &TestTable, pair: &PointPair) -> Result<bool> {
    let q = match pair.last_difference() {
        LastDifference::At(q) => q as usize,
        LastDifference::None | LastDifference::Infinite => return Ok(false),
    };
    let row = table.row(q).ok_or(Error::InsufficientDepth {
        needed: q,
        available: table.depth(),
    })?;
    Ok(pair.first.prefix(q) == row.s
        && pair.second.prefix(q) == row.t
        && !pair.first.bit_at(q as u64)
        && pair.second.bit_at(q as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leveltrees::{is_uniformly_acyclic, level_edge_stats};
    use crate::words::RationalPoint;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn row(s: &str, t: &str, prov: Option<(usize, &str)>) -> Row {
        Row {
            s: w(s),
            t: w(t),
            provenance: prov.map(|(q, x)| Provenance {
                from_level: q,
                w: w(x),
            }),
        }
    }

    #[test]
    fn first_rows_are_forced() {
        let t = build_test(1).unwrap();
        assert_eq!(t.rows()[0], row("e", "e", None));
        assert_eq!(t.rows()[1], row("0", "1", Some((0, "e"))));
        assert!(matches!(build_test(0), Err(Error::InvalidDepth(0))));
    }

    #[test]
    fn decomposition_examples() {
        let good = TestTable {
            rows: vec![row("e", "e", None), row("0", "1", Some((0, "e")))],
        };
        assert!(verify_decomposition(&good));
        let bad = TestTable {
            rows: vec![row("e", "e", None), row("1", "1", Some((0, "e")))],
        };
        assert!(!verify_decomposition(&bad));
        assert_eq!(first_decomposition_failure(&bad), Some(1));
        assert!(TestTable::from_rows(bad.rows).is_err());
        for d in [1, 2, 5, 17, 40] {
            assert!(verify_decomposition(&build_test(d).unwrap()), "depth {d}");
        }
    }

    #[test]
    fn shallow_table_reports_unmet_requirements() {
        let t = build_test(2).unwrap();
        // row 1 serves (q=0, u=e, m=0) and row 2 serves (q=0, u=e, m=1)
        assert!(verify_density(&t, 1, 0, 0).complete());
        let report = verify_density(&t, 1, 1, 1);
        assert!(!report.complete());
        assert_eq!(report.checked, 2 * 2 * 3);
        assert_eq!(report.met + report.unmet.len(), report.checked);
        assert!(report.unmet.contains(&Requirement {
            q: 1,
            u: Word::empty(),
            m: 0
        }));
    }

    #[test]
    fn density_agrees_with_direct_phi_oracle() {
        let t = build_test(60).unwrap();
        let report = verify_density(&t, 3, 2, 2);
        for m in 0..=3u64 {
            for q in 0..=2usize {
                for len in 0..=2 {
                    for u in Word::all_of_length(len) {
                        let (sq, tq) = (&t.rows()[q].s, &t.rows()[q].t);
                        let want_s = sq.with_bit(false).concat(&u);
                        let want_t = tq.with_bit(true).concat(&u);
                        let met = t.rows().iter().enumerate().skip(1).any(|(n, r)| {
                            phi(n as u64 - 1).i == m
                                && want_s.is_prefix_of(&r.s)
                                && want_t.is_prefix_of(&r.t)
                        });
                        let req = Requirement { q, u, m };
                        assert_eq!(met, !report.unmet.contains(&req), "{req:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_respect_the_column() {
        let t = build_test(40).unwrap();
        for n in 1..=40 {
            let prov = t.rows()[n].provenance.clone().unwrap();
            let req = Requirement {
                q: prov.from_level,
                u: Word::empty(),
                m: phi(n as u64 - 1).i,
            };
            let found = t.witness_for(&req).unwrap();
            assert_eq!(phi(found as u64 - 1).i, req.m);
        }
    }

    #[test]
    fn generated_tree_small_levels() {
        let table = build_test(3).unwrap();
        let tree = generate_tree(&table, 2).unwrap();
        assert_eq!(tree.level(1), Some(&BTreeSet::from([(w("0"), w("1"))])));
        let expected = BTreeSet::from([(w("00"), w("10")), (w("01"), w("11")), (w("00"), w("11"))]);
        assert_eq!(tree.level(2), Some(&expected));
        assert!(generate_tree(&table, 5).is_err());
    }

    #[test]
    fn generated_levels_are_spanning_trees() {
        let table = build_test(8).unwrap();
        let tree = generate_tree(&table, 8).unwrap();
        assert!(tree.is_prefix_closed());
        assert!(is_uniformly_acyclic(&tree, 8).unwrap().passed());
        for p in 1..=8 {
            assert_eq!(level_edge_stats(&tree, p).unwrap(), ((1 << p) - 1, 1));
        }
    }

    #[test]
    fn tree_membership_matches_materialized_levels() {
        let table = build_test(9).unwrap();
        let tree = generate_tree(&table, 8).unwrap();
        for p in 0..=8 {
            let level = tree.level(p).unwrap();
            for s in Word::all_of_length(p) {
                for t in Word::all_of_length(p) {
                    assert_eq!(
                        table.tree_contains(&s, &t),
                        level.contains(&(s.clone(), t.clone()))
                    );
                }
            }
        }
    }

    #[test]
    fn branch_examples() {
        let table = build_test(8).unwrap();
        let z = RationalPoint::zeros();
        let pair = PointPair::new(z.prepend(&w("0")), z.prepend(&w("1")));
        assert_eq!(in_branches(&table, &pair), Ok(true));
        let x = RationalPoint::parse("01(011)").unwrap();
        assert_eq!(
            in_branches(&table, &PointPair::new(x.clone(), x)),
            Ok(false)
        );
        let alt = PointPair::new(
            RationalPoint::parse("(01)").unwrap(),
            RationalPoint::parse("(10)").unwrap(),
        );
        assert_eq!(in_branches(&table, &alt), Ok(false));
        let deep = PointPair::new(
            RationalPoint::zeros(),
            RationalPoint::finite(&w("000000000001")),
        );
        assert!(matches!(
            in_branches(&table, &deep),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let table = build_test(12).unwrap();
        let json = table.to_json();
        assert!(json.starts_with(r#"[{"level":0,"s":"e","t":"e","from_level":null,"w":null},{"level":1,"s":"0","t":"1","from_level":0,"w":"e"}"#));
        assert_eq!(TestTable::from_json(&json).unwrap(), table);
        let tampered = json.replacen(r#""s":"0","t":"1""#, r#""s":"1","t":"1""#, 1);
        assert!(TestTable::from_json(&tampered).is_err());
    }

    #[test]
    fn schedule_codes_follow_tuple_order() {
        let a = Requirement {
            q: 0,
            u: Word::empty(),
            m: 0,
        };
        let b = Requirement {
            q: 0,
            u: Word::empty(),
            m: 1,
        };
        assert_eq!(a.schedule_code(), Ok(0));
        assert_eq!(b.schedule_code(), Ok(tuple_code(&[1, 0, 0]).unwrap()));
    }
}
