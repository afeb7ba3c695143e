mod common {
    pub mod llt;
}

use std::collections::BTreeMap;

use wsk_core::mult::{linkage_class, Label, TableKind};
use wsk_core::partition::*;
use wsk_core::*;

fn engine(n: usize, e: i64) -> MultEngine {
    MultEngine::new(GroupContext::new(Family::A, n - 1, e).unwrap())
}

fn p(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Restricted to e-restricted `nu`, the graded layers of the q-Weyl module
/// of `lambda` are the graded decomposition numbers `d_{lambda', nu'}(v)`
/// of the Hecke algebra, here computed by the Fock space canonical basis.
#[test]
fn weyl_layers_match_fock_space_canonical_basis() {
    for e in [2u32, 3] {
        for r in 2..=7u32 {
            let n = r as usize;
            let d = common::llt::decomposition_matrix(r, e);
            let eng = engine(n, e as i64);
            for lam in list_partitions(n, r) {
                let t = eng.weyl_layer_table(&lam, n).unwrap();
                let mut ours: BTreeMap<Vec<u32>, common::llt::Lp> = BTreeMap::new();
                for (i, layer) in t.layers.iter().enumerate() {
                    for x in layer {
                        let Label::Partition(nu) = &x.label else { panic!() };
                        if is_e_restricted(nu, e) {
                            ours.entry(conjugate(nu).parts().to_vec()).or_default().insert(i as i64, x.mult as i64);
                        }
                    }
                }
                let lc = conjugate(&lam).parts().to_vec();
                let theirs: BTreeMap<Vec<u32>, common::llt::Lp> =
                    d.iter().filter(|((l, _), _)| *l == lc).map(|((_, m), c)| (m.clone(), c.clone())).collect();
                assert_eq!(ours, theirs, "e={e} lambda={lam}");
            }
        }
    }
}

#[test]
fn small_tables() {
    let eng = engine(2, 2);
    let t = eng.weyl_layer_table(&p(&[2]), 2).unwrap();
    assert_eq!(t.layers.len(), 2);
    assert_eq!(t.layers[1][0].label, Label::Partition(p(&[1, 1])));
    let eng = engine(3, 2);
    let t = eng.weyl_layer_table(&p(&[1, 1, 1]), 3).unwrap();
    assert_eq!(t.layers[0].len(), 1);
    assert_eq!(t.layers[0][0].label, Label::Partition(p(&[1, 1, 1])));
}

#[test]
fn linkage_matches_cores() {
    for e in [2u32, 3] {
        for r in 2..=6u32 {
            let n = r as usize;
            let ctx = GroupContext::new(Family::A, n - 1, e as i64).unwrap();
            for lam in list_partitions(n, r) {
                let class = linkage_class(&ctx, &lam, n).unwrap();
                let expected: Vec<Partition> =
                    list_partitions(n, r).into_iter().filter(|mu| e_core(mu, e) == e_core(&lam, e)).collect();
                assert_eq!(class, expected, "e={e} {lam}");
            }
        }
    }
}

#[test]
fn large_e_gives_simple_modules() {
    for r in 2..=6u32 {
        let n = r as usize;
        let eng = engine(n, r as i64 + 1);
        for lam in list_partitions(n, r) {
            assert_eq!(linkage_class(eng.ctx(), &lam, n).unwrap(), vec![lam.clone()]);
            let t = eng.weyl_layer_table(&lam, n).unwrap();
            assert_eq!(t.layers.len(), 1);
            let s = eng.specht_layer_table(&lam).unwrap();
            assert_eq!(s.layers.len(), 1);
            assert_eq!(s.layers[0].len(), 1);
        }
    }
}

#[test]
fn sums_specht_and_parity() {
    for e in [2i64, 3] {
        for r in 2..=6u32 {
            let n = r as usize;
            let eng = engine(n, e);
            for lam in list_partitions(n, r) {
                let t = eng.weyl_layer_table(&lam, n).unwrap();
                let lw = to_weight(&lam, n).unwrap();
                for mu in linkage_class(eng.ctx(), &lam, n).unwrap() {
                    let mw = to_weight(&mu, n).unwrap();
                    assert_eq!(t.column_sum(&Label::Partition(mu.clone())), eng.decomposition_number(&lw, &mw).unwrap());
                }
                let lpar = mult::parity_class(eng.ctx(), &lw).unwrap();
                for (i, layer) in t.layers.iter().enumerate() {
                    for x in layer {
                        let same = mult::parity_class(eng.ctx(), &x.weight).unwrap() == lpar;
                        assert_eq!(same, i % 2 == 0, "{lam} layer {i}");
                    }
                }
                let s = eng.specht_layer_table(&lam).unwrap();
                assert_eq!(s.kind, TableKind::Specht);
                let m = t.layers.len();
                assert_eq!(s.layers.len(), m);
                for j in 0..m {
                    let expected: Vec<(Vec<u32>, u64)> = t.layers[m - 1 - j]
                        .iter()
                        .filter_map(|x| match &x.label {
                            Label::Partition(nu) if is_e_restricted(nu, e as u32) => Some((conjugate(nu).parts().to_vec(), x.mult)),
                            _ => None,
                        })
                        .collect();
                    let mut got: Vec<(Vec<u32>, u64)> = s.layers[j]
                        .iter()
                        .map(|x| match &x.label {
                            Label::Partition(nu) => (nu.parts().to_vec(), x.mult),
                            Label::Weight(_) => panic!(),
                        })
                        .collect();
                    let mut expected = expected;
                    expected.sort();
                    got.sort();
                    assert_eq!(got, expected);
                }
            }
        }
    }
}

#[test]
fn modular_tables_are_the_quantum_tables() {
    let eng = engine(6, 5);
    for lam in list_partitions(6, 6) {
        let m = eng.modular_table(&lam, 6, 5).unwrap();
        let q = eng.weyl_layer_table(&lam, 6).unwrap();
        assert!(m.flags.assumes_james && m.flags.assumes_bipartite);
        assert_eq!(m.layers, q.layers);
    }
    let eng = engine(6, 2);
    assert!(eng.modular_table(&p(&[6]), 6, 2).is_err());
    let eng = engine(8, 3);
    assert!(eng.modular_table(&p(&[4, 4]), 8, 3).is_ok());
}

#[test]
fn unlinked_and_diagonal_numbers() {
    let eng = engine(3, 2);
    let a = to_weight(&p(&[3]), 3).unwrap();
    let b = to_weight(&p(&[2, 1]), 3).unwrap();
    assert_eq!(eng.decomposition_number(&a, &a).unwrap(), 1);
    assert_eq!(eng.decomposition_number(&a, &b).unwrap(), 0);
}

#[test]
fn type_d_weight_tables() {
    let eng = MultEngine::new(GroupContext::new(Family::D, 4, 3).unwrap());
    for w in [vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![2, 0, 1, 1], vec![3, 0, 0, 0]] {
        let t = eng.weyl_layer_table_weight(&Weight(w)).unwrap();
        t.validate().unwrap();
        assert!(!t.flags.outside_proven_range);
    }
    let eng = MultEngine::new(GroupContext::new(Family::D, 5, 2).unwrap());
    let t = eng.weyl_layer_table_weight(&Weight(vec![1, 0, 0, 0, 0])).unwrap();
    assert!(t.flags.outside_proven_range);
}

#[test]
fn conventions_differ_on_sl2() {
    // Full intervals put every lower linked weight into the module; the
    // dominant poset gives the two-factor Weyl modules of quantum SL2.
    let ctx = GroupContext::new(Family::A, 1, 3).unwrap();
    let full = MultEngine::new(ctx.clone()).with_q_convention(QConvention::FullInterval);
    let dom = MultEngine::new(ctx);
    for a in 0..12 {
        let w = Weight(vec![a]);
        let tf = full.weyl_layer_table_weight(&w).unwrap();
        let td = dom.weyl_layer_table_weight(&w).unwrap();
        assert_eq!(tf.layers[0], td.layers[0]);
        assert!(td.layers.len() <= 2);
        assert_eq!(td.layers.iter().flatten().count(), if a % 3 == 2 || a < 2 { 1 } else { 2 }, "{a}");
    }
    let t = full.weyl_layer_table_weight(&Weight(vec![6])).unwrap();
    assert_eq!(t.layers.len(), 3);
}
