mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{bfs, certify_isomorphism, lambda};
use median_recon::graph::gate;
use median_recon::reconstruct::write_trace;
use median_recon::{
    all_pairs_distances, boundary_cells, boundary_distance_matrix, enumerate_cubes, generate, is_median,
    isomorphism_extending, reconstruct, reconstruct_traced, BoundaryMode, Family, GenSpec, Graph, PartialMap,
    StepRecord,
};

fn median_graph() -> impl Strategy<Value = Graph> {
    prop_oneof![
        (1usize..30, any::<u64>()).prop_map(|(n, s)| generate::random_tree(n, s)),
        (1usize..6, 1usize..6).prop_map(|(a, b)| generate::grid(&[a, b])),
        (1usize..4, 1usize..4, 1usize..3).prop_map(|(a, b, c)| generate::grid(&[a, b, c])),
        (0usize..5).prop_map(generate::hypercube),
        (3usize..8, 0usize..3, any::<u64>()).prop_map(|(d, extra, s)| generate::median_closure(d, d + extra, s).unwrap()),
        (2usize..7, any::<u64>(), 1usize..4)
            .prop_map(|(n, s, p)| generate::cartesian_product(&generate::random_tree(n, s), &generate::grid(&[p]))),
    ]
}

fn isomorphic_fixing(a: &Graph, b: &Graph, fixed: &[String]) -> bool {
    a.n() == b.n()
        && match isomorphism_extending(a, b, &PartialMap::identity(fixed)).unwrap() {
            Some(map) => certify_isomorphism(a, b, &map, fixed),
            None => false,
        }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_are_median(g in median_graph()) {
        prop_assert!(is_median(&g).median);
    }

    #[test]
    fn all_pairs_matches_bfs(g in median_graph()) {
        let d = all_pairs_distances(&g);
        for s in 0..g.n() {
            let row = bfs(&g, s);
            prop_assert_eq!(d.row(s), row.as_slice());
        }
    }

    #[test]
    fn quadrangle_condition(g in median_graph()) {
        prop_assume!(g.n() <= 64);
        let d = all_pairs_distances(&g);
        for u in 0..g.n() {
            for z in 0..g.n() {
                let nz = g.neighbors(z);
                for (i, &v) in nz.iter().enumerate() {
                    for &w in &nz[i + 1..] {
                        let du = d.get(u, z);
                        if du == 0 || d.get(u, v) != du - 1 || d.get(u, w) != du - 1 {
                            continue;
                        }
                        let xs = (0..g.n())
                            .filter(|&x| g.has_edge(x, v) && g.has_edge(x, w) && d.get(u, x) + 2 == du)
                            .count();
                        prop_assert_eq!(xs, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn cubes_are_gated(g in median_graph()) {
        prop_assume!(g.n() <= 40);
        let cx = enumerate_cubes(&g, 0).unwrap();
        let d = all_pairs_distances(&g);
        for (_, c) in cx.iter() {
            for x in 0..g.n() {
                let gx = gate(&g, x, c.vertices()).unwrap();
                let best = c.vertices().iter().map(|&y| d.get(x, y)).min().unwrap();
                prop_assert_eq!(d.get(x, gx), best);
                prop_assert!(c.vertices().iter().all(|&y| d.get(x, y) == d.get(x, gx) + d.get(gx, y)));
            }
        }
    }

    #[test]
    fn opposite_of_downward_cube_is_gate_of_basepoint(g in median_graph(), zi in any::<usize>()) {
        let z = zi % g.n();
        let dz = bfs(&g, z);
        let down = median_recon::cubes::DownwardCubes::new(&g, z);
        for v in 0..g.n() {
            let c = down.cube(v, &lambda(&g, &dz, v)).unwrap();
            let opp = median_recon::cubes::opposite_vertex(&c, v).unwrap();
            prop_assert_eq!(opp, gate(&g, z, c.vertices()).unwrap());
        }
    }

    #[test]
    fn facet_unique_boundary_lies_in_dimension_based(g in median_graph()) {
        let cx = enumerate_cubes(&g, 0).unwrap();
        let fu = boundary_cells(&cx, BoundaryMode::FacetUnique);
        let db = boundary_cells(&cx, BoundaryMode::DimensionBased);
        prop_assert!(fu.cells.is_subset(&db.cells));
    }

    #[test]
    fn basepoint_independence(g in median_graph()) {
        let d = boundary_distance_matrix(&g, BoundaryMode::FacetUnique).unwrap();
        let first = reconstruct(&d, None).unwrap();
        for z in d.labels().iter().take(8) {
            let other = reconstruct(&d, Some(z)).unwrap();
            prop_assert!(isomorphic_fixing(&other, &first, d.labels()));
        }
    }

    #[test]
    fn boundary_modes_reconstruct_the_same_graph(g in median_graph()) {
        let fu = boundary_distance_matrix(&g, BoundaryMode::FacetUnique).unwrap();
        let db = boundary_distance_matrix(&g, BoundaryMode::DimensionBased).unwrap();
        let a = reconstruct(&fu, None).unwrap();
        let b = reconstruct(&db, None).unwrap();
        prop_assert!(isomorphic_fixing(&a, &b, fu.labels()));
    }

    #[test]
    fn peeled_vertices_are_monotone(g in median_graph()) {
        let d = boundary_distance_matrix(&g, BoundaryMode::FacetUnique).unwrap();
        let r = reconstruct_traced(&d, None).unwrap();
        let st = &r.state;
        let z = st.basepoint();
        let dist: Vec<u32> = r
            .trace()
            .iter()
            .map(|s| st.distance(z, st.index_of(&s.v_i).unwrap()).unwrap())
            .collect();
        prop_assert!(dist.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), d in 3usize..7) {
        let spec = GenSpec::new(Family::MedianClosure, format!("{d},{d}"), seed);
        prop_assert_eq!(spec.build().unwrap().to_json(), spec.build().unwrap().to_json());
        let spec = GenSpec::new(Family::Tree, "12", seed);
        prop_assert_eq!(spec.build().unwrap().to_json(), spec.build().unwrap().to_json());
    }
}

#[test]
fn q3_minus_graphs_are_not_median() {
    let (gp, gpp, _) = generate::q3_minus();
    assert!(!is_median(&gp).median);
    assert!(!is_median(&gpp).median);
    let k23 = Graph::new(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
    assert!(!is_median(&k23).median);
}

#[test]
fn trace_file_round_trips() {
    let g = generate::grid(&[3, 4]);
    let d = boundary_distance_matrix(&g, BoundaryMode::FacetUnique).unwrap();
    let r = reconstruct_traced(&d, None).unwrap();
    let mut buf = Vec::new();
    write_trace(r.trace(), &mut buf).unwrap();
    let back: Vec<StepRecord> = String::from_utf8(buf)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(back, r.trace());
    let created: BTreeSet<&str> = back.iter().filter(|s| s.u_i_new).map(|s| s.u_i.as_str()).collect();
    assert_eq!(created.len(), 2);
}
