use potpi_core::leveltrees::{build_t0, is_uniformly_acyclic, level_edge_stats, FiniteRelation};

#[test]
fn lifted_relations_are_quasi_orders() {
    for n in 0..=4u8 {
        let ground: Vec<u8> = (0..n).collect();
        let cells: Vec<(u8, u8)> = ground
            .iter()
            .flat_map(|&x| ground.iter().map(move |&y| (x, y)))
            .collect();
        for mask in 0u32..1 << cells.len() {
            let pairs: Vec<_> = cells
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &c)| c)
                .collect();
            let irreflexive = pairs.iter().all(|(x, y)| x != y);
            let relation = FiniteRelation::new(ground.clone(), pairs).unwrap();
            let lifted = relation.lift_quasiorder();
            let g: Vec<_> = lifted.ground().iter().cloned().collect();
            let r = |a: &(u8, u8), b: &(u8, u8)| lifted.contains(a, b);
            assert!(g.iter().all(|a| r(a, a)));
            for a in &g {
                for b in &g {
                    if !r(a, b) {
                        continue;
                    }
                    assert!(g.iter().all(|c| !r(b, c) || r(a, c)), "not transitive");
                    if irreflexive && a != b {
                        assert!(!r(b, a), "not antisymmetric");
                    }
                }
            }
            assert!(lifted.is_reflexive() && lifted.is_transitive());
            if irreflexive {
                assert!(lifted.is_antisymmetric());
            }
        }
    }
}

#[test]
fn t0_levels() {
    let t0 = build_t0(10);
    assert!(t0.is_prefix_closed());
    let off = t0.without_diagonal();
    for p in 0..=10 {
        assert_eq!(
            level_edge_stats(&off, p).unwrap().0,
            (1 << p) - 1,
            "level {p}"
        );
    }
    assert!(is_uniformly_acyclic(&off, 8).unwrap().passed());
    assert!(!is_uniformly_acyclic(&t0, 1).unwrap().passed());
}
