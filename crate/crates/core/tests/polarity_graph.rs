use polarity_core::c4::{find_c4, find_c4_pairwise, is_c4_free};
use polarity_core::graph::bitset;
use polarity_core::io::{canonical_edge_list, from_edge_list, from_graph6, to_edge_list, to_graph6};
use polarity_core::plane::{orthogonal_polarity, Polarity};
use polarity_core::polarity_graph::{edge_ledger, mixing_lower_bound, square_identity_check};
use polarity_core::{Field, Graph, Plane, PolarityGraph};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn er_counts() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let g = PolarityGraph::er(q).unwrap();
        let qu = q as usize;
        assert_eq!(g.n(), qu * qu + qu + 1);
        assert_eq!(g.edge_count(), qu * (qu + 1) * (qu + 1) / 2);
        assert_eq!(g.loop_count(), qu + 1);
        assert!((0..g.n()).all(|v| g.graph().degree(v) == qu + 1));
    }
}

#[test]
fn square_identity_by_matrix_product() {
    // independent of the bitset check: integer matrix product for small q
    for q in [2u64, 3, 4, 5] {
        let g = PolarityGraph::er(q).unwrap();
        let n = g.n();
        let a: Vec<Vec<i64>> = (0..n)
            .map(|u| (0..n).map(|v| g.graph().has_edge(u, v) as i64).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let s: i64 = (0..n).map(|k| a[i][k] * a[k][j]).sum();
                assert_eq!(s, 1 + if i == j { q as i64 } else { 0 });
            }
        }
        assert!(g.square_identity().passed());
    }
}

#[test]
fn square_identity_detects_a_broken_graph() {
    let g = PolarityGraph::er(3).unwrap();
    let mut broken = g.graph().clone();
    let (u, v) = broken.edges().next().unwrap();
    broken.remove_edge(u, v);
    let report = square_identity_check(&broken, 3);
    assert!(!report.passed());
}

#[test]
fn build_rejects_a_non_polarity() {
    let plane = Plane::pg(&Field::with_order(3).unwrap());
    let mut map: Vec<usize> = (0..plane.num_points()).collect();
    map.swap(0, 1);
    let bad = Polarity::new(&plane, map);
    assert!(bad.is_err() || PolarityGraph::build(&plane, &bad.unwrap()).is_err());
}

#[test]
fn loopless_er_is_c4_free_for_both_checkers() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let g = PolarityGraph::er(q).unwrap().loopless();
        assert!(find_c4(&g, true).is_none());
        assert!(find_c4_pairwise(&g, true).is_none());
    }
}

#[test]
fn c4_witnesses_are_genuine() {
    let k4 = Graph::complete(4);
    let w = find_c4(&k4, true).unwrap();
    assert!(w.is_valid_in(&k4));
    let mut g = PolarityGraph::er(5).unwrap().loopless();
    // join two vertices at distance 2 through a third: plants a 4-cycle
    let (a, b) = g.edges().next().unwrap();
    let c = g.neighbors(b).find(|&c| c != a).unwrap();
    let d = g.neighbors(a).find(|&d| d != b && d != c && !g.has_edge(d, c)).unwrap();
    g.add_edge(c, d);
    assert!(!is_c4_free(&g, true));
    assert!(find_c4(&g, true).unwrap().is_valid_in(&g));
    assert!(find_c4_pairwise(&g, true).unwrap().is_valid_in(&g));
}

#[test]
fn ledger_identities_on_random_sets() {
    let g = PolarityGraph::er(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for size in [0, 1, 5, 20, 57] {
        let set = bitset(g.n(), sample(&mut rng, g.n(), size));
        let l = edge_ledger(g.graph(), &set);
        let deg: usize = set.ones().map(|v| g.graph().degree(v)).sum();
        assert_eq!(deg, 2 * l.non_loop_edges + l.loops + l.cut);
        assert_eq!(l.edges, l.non_loop_edges + l.loops);
        // deleting the set removes its inside and cut edges
        let rest = g.graph().delete_vertices(&set);
        assert_eq!(rest.edge_count() + rest.loop_count() + l.edges + l.cut, g.edge_count() + g.loop_count());
    }
}

#[test]
fn mixing_bound_holds_on_random_subsets() {
    for q in [3u64, 4, 5, 7, 8, 9] {
        let g = PolarityGraph::er(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for t in 0..200 {
            let size = 1 + t % g.n();
            let set = bitset(g.n(), sample(&mut rng, g.n(), size));
            let e = edge_ledger(g.graph(), &set).edges as i128;
            assert!(mixing_lower_bound(q, size as u64).admits(e), "q={q} |S|={size} e={e}");
        }
    }
}

#[test]
fn mixing_bound_is_compared_exactly() {
    // q = 4, s = 7: 5*49/42 - 7 = 35/6 - 7 < 0
    let b = mixing_lower_bound(4, 7);
    assert!(b.admits(0));
    assert_eq!(b.ceil(), (b.approx()).ceil() as i128);
    // q = 3, s = 13: 4*169/26 - 13*sqrt(3)/2 = 26 - 11.258.. so ceil is 15
    assert_eq!(mixing_lower_bound(3, 13).ceil(), 15);
    assert!(!mixing_lower_bound(3, 13).admits(14));
}

#[test]
fn graph_files_round_trip() {
    for q in [2u64, 4, 7] {
        let g = PolarityGraph::er(q).unwrap().loopless();
        let a = from_graph6(&to_graph6(&g)).unwrap();
        let b = from_edge_list(&to_edge_list(&g)).unwrap();
        assert_eq!(canonical_edge_list(&a), canonical_edge_list(&g));
        assert_eq!(canonical_edge_list(&b), canonical_edge_list(&g));
    }
    // 63+ vertices use the long graph6 header
    let g = PolarityGraph::er(8).unwrap().loopless();
    let s = to_graph6(&g);
    assert_eq!(s.as_bytes()[0], 126);
    assert_eq!(from_graph6(&s).unwrap(), g);
}

#[test]
fn absolute_points_are_the_loops() {
    let plane = Plane::pg(&Field::with_order(9).unwrap());
    let pol = orthogonal_polarity(&plane).unwrap();
    let g = PolarityGraph::build(&plane, &pol).unwrap();
    let abs: Vec<usize> = pol.absolute_points(&plane).collect();
    assert_eq!(g.absolute_points(), abs.as_slice());
}
