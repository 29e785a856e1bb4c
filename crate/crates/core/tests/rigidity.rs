mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rigidnet::graph::{AngleIndexSet, Edge, Graph};
use rigidnet::numerics::SeededRng;
use rigidnet::rigidity::*;
use rigidnet::{Mat2, Vec2};

#[test]
fn bearing_jacobian_matches_central_differences() {
    let mut rng = SeededRng::new(2024);
    let g = random_connected_graph(5, 0.5, &mut rng);
    let fw = random_framework_on(g.clone(), &mut rng);
    let x: Vec<f64> = fw.stacked().iter().copied().collect();
    let fd = central_difference(&x, 1e-6, false, |y| bearings_at(&g, y));
    let rb = bearing_rigidity_matrix(&fw).unwrap();
    assert!((rb - fd).amax() < 1e-6);
}

#[test]
fn bearings_rotate_with_the_configuration() {
    let mut rng = SeededRng::new(5);
    let fw = random_framework_on(Graph::complete(4), &mut rng);
    let r = Mat2::rotation(0.9);
    let rotated = fw
        .with_config(fw.config().iter().map(|&p| r * p).collect())
        .unwrap();
    let b = bearing_function(&fw).unwrap();
    let br = bearing_function(&rotated).unwrap();
    for k in 0..b.len() / 2 {
        let v = r * Vec2::new(b[2 * k], b[2 * k + 1]);
        assert!((v - Vec2::new(br[2 * k], br[2 * k + 1])).norm() < 1e-14);
    }
}

#[test]
fn signed_angles_match_complex_oracle() {
    let mut rng = SeededRng::new(8);
    for _ in 0..20 {
        let fw = random_framework_on(random_connected_graph(6, 0.4, &mut rng), &mut rng);
        let ais = AngleIndexSet::full(fw.graph());
        let s = signed_angle_function(&fw, &ais).unwrap();
        let x: Vec<f64> = fw.stacked().iter().copied().collect();
        let oracle = angles_at(&ais, &x);
        for (a, b) in s.iter().zip(&oracle) {
            let d = (a - b).abs();
            assert!(d.min(2.0 * std::f64::consts::PI - d) < 1e-12);
        }
    }
}

#[test]
fn trivial_motions_annihilated_on_isar_framework() {
    let mut rng = SeededRng::new(31);
    let fw = random_isar_laman_framework(6, &mut rng).unwrap();
    let rs = signed_angle_rigidity_matrix(&fw, &AngleIndexSet::full(fw.graph())).unwrap();
    let basis = trivial_motion_basis(&fw).unwrap();
    for v in basis.vectors() {
        assert!((&rs * v).amax() < 1e-9);
    }
    let dist = distance_rigidity_matrix(&fw).unwrap();
    assert!((&dist * &basis.rotation).amax() < 1e-12);
}

#[test]
fn prism_is_generically_isar() {
    let v = generic_verdict(&prism(), 20, 3).unwrap();
    assert_eq!(v.isar_count, 20);
    assert!(v.majority && v.combinatorial);
}

#[test]
fn prism_with_concurrent_rungs_is_not_isar() {
    let o = Vec2::new(0.3, 0.4);
    let p1 = Vec2::new(0.0, 0.0);
    let p2 = Vec2::new(1.0, 0.1);
    let p3 = Vec2::new(0.4, 1.0);
    let away = |p: Vec2, k: f64| o + (p - o) * k;
    let config = vec![p1, p2, p3, away(p3, 2.7), away(p1, 3.1), away(p2, 2.2)];
    let fw = Framework::new(prism(), config).unwrap();
    let report = analyze(&fw).unwrap();
    assert!(!report.is_isar);
    assert!(report.rank_signed_angle < 8);
    assert_eq!(report.is_isar, report.is_ibr);
}

#[test]
fn laman_removal_destroys_isar() {
    let mut rng = SeededRng::new(606);
    for n in 4..10 {
        let fw = random_isar_laman_framework(n, &mut rng).unwrap();
        for e in fw.graph().edges() {
            let g = fw.graph().without_edge(e);
            let r = analyze(&fw.with_graph(g).unwrap()).unwrap();
            assert!(r.rank_signed_angle < 2 * n - 4, "n = {n}, removed {e}");
        }
    }
}

#[test]
fn extraction_on_redundant_six_node_network() {
    let mut g = strip_graph();
    g.add_edge(1, 4).unwrap();
    g.add_edge(2, 6).unwrap();
    let fw = Framework::new(g, strip_positions()).unwrap();
    let sub = extract_laman_spanning_subgraph(&fw).unwrap();
    assert_eq!(sub.edge_count(), 9);
    assert!(is_laman(&sub));
    assert!(sub.edges().all(|e| fw.graph().has_edge(e.0, e.1)));
}

#[test]
fn extraction_scans_in_hash_order() {
    let mut rng = SeededRng::new(12);
    let fw = random_framework_on(Graph::complete(4), &mut rng);
    let sub = extract_laman_spanning_subgraph(&fw).unwrap();
    let edges: Vec<Edge> = sub.edges().collect();
    assert_eq!(
        edges,
        vec![Edge(1, 2), Edge(1, 3), Edge(1, 4), Edge(2, 3), Edge(2, 4)]
    );
}

#[test]
fn pebble_game_matches_oracle_on_sampled_seven_vertex_graphs() {
    let mut rng = SeededRng::new(77);
    let pairs = all_pairs(7);
    let mut laman = 0;
    for _ in 0..3000 {
        let mut chosen = pairs.clone();
        for k in (1..chosen.len()).rev() {
            chosen.swap(k, rng.index(k + 1));
        }
        chosen.truncate(11);
        let g = Graph::new(7, chosen).unwrap();
        let expected = exhaustive_laman(&g);
        laman += expected as usize;
        assert_eq!(is_laman(&g), expected, "{g:?}");
    }
    assert!(laman > 0);
}

#[test]
fn distance_matrix_rank_tracks_laman() {
    let mut rng = SeededRng::new(90);
    for n in 3..9 {
        let fw = random_isar_laman_framework(n, &mut rng).unwrap();
        let (rank, _) = numerical_rank(&distance_rigidity_matrix(&fw).unwrap()).unwrap();
        assert_eq!(rank, 2 * n - 3);
    }
}

#[test]
fn padded_null_space_of_signed_angle_matrix() {
    let mut rng = SeededRng::new(4);
    let fw = random_isar_laman_framework(5, &mut rng).unwrap();
    let rs = signed_angle_rigidity_matrix(&fw, &AngleIndexSet::full(fw.graph())).unwrap();
    let ns = rigidnet::numerics::null_space(&rs, 1e-8).unwrap();
    assert_eq!(ns.ncols(), 4);
    assert!((&rs * &ns).amax() < 1e-10);
    let eye = DMatrix::<f64>::identity(4, 4);
    assert!((ns.transpose() * &ns - eye).amax() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bearing_and_signed_angle_rigidity_agree(seed in any::<u64>(), n in 3usize..9, p in 0.1f64..0.9) {
        let mut rng = SeededRng::new(seed);
        let fw = random_framework_on(random_connected_graph(n, p, &mut rng), &mut rng);
        let r = analyze(&fw).unwrap();
        prop_assert_eq!(r.is_ibr, r.is_isar);
    }

    #[test]
    fn signed_angles_invariant_under_similarity(seed in any::<u64>(), n in 3usize..8) {
        let mut rng = SeededRng::new(seed);
        let fw = random_framework_on(random_connected_graph(n, 0.5, &mut rng), &mut rng);
        let ais = AngleIndexSet::full(fw.graph());
        let s = signed_angle_function(&fw, &ais).unwrap();
        let q = apply_similarity(fw.config(), random_similarity(&mut rng));
        let s2 = signed_angle_function(&fw.with_config(q).unwrap(), &ais).unwrap();
        for (a, b) in s.iter().zip(s2.iter()) {
            let d = (a - b).abs();
            prop_assert!(d.min(2.0 * std::f64::consts::PI - d) < 1e-9);
        }
    }

    #[test]
    fn henneberg_laman_is_generically_isar(seed in any::<u64>(), n in 3usize..12) {
        let mut rng = SeededRng::new(seed);
        let g = random_laman_graph(n, &mut rng).unwrap();
        prop_assert!(is_laman(&g));
        let fw = random_framework_on(g, &mut rng);
        prop_assert!(analyze(&fw).unwrap().is_isar);
    }

    #[test]
    fn degenerate_iff_collinear(seed in any::<u64>(), n in 3usize..8) {
        let mut rng = SeededRng::new(seed);
        let dir = Vec2::from_polar(rng.uniform(0.0, std::f64::consts::TAU));
        let base = Vec2::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        let line: Vec<Vec2> = (0..n).map(|k| base + dir * (k as f64 + rng.uniform(0.0, 0.5))).collect();
        prop_assert!(is_degenerate(&line));
        let mut bent = line.clone();
        bent[n / 2] += dir.perp() * 1e-3;
        prop_assert!(!is_degenerate(&bent));
    }
}
