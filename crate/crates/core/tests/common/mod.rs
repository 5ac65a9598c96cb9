//! Test suite graphs and test-side oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use median_recon::generate;
use median_recon::Graph;

pub struct Case {
    pub name: String,
    pub graph: Graph,
}

fn case(name: String, graph: Graph) -> Case {
    Case { name, graph }
}

pub const EXHAUSTIVE_TREE_MAX: usize = 8;

/// Every labelled tree with at most [`EXHAUSTIVE_TREE_MAX`] vertices.
pub fn for_each_exhaustive_tree(mut f: impl FnMut(&Graph)) -> usize {
    let mut count = 0;
    for n in 1..=EXHAUSTIVE_TREE_MAX {
        generate::for_each_tree(n, |g| {
            f(&g);
            count += 1;
        });
    }
    count
}

/// 200 seeded random trees with 9 to 50 vertices.
pub fn seeded_trees() -> Vec<Case> {
    (0..200u64)
        .map(|i| {
            let n = 9 + (i as usize % 42);
            case(format!("tree n={n} seed={i}"), generate::random_tree(n, i))
        })
        .collect()
}

/// All `a x b` grids up to 6x6 plus the 3-dimensional grids up to 3x3x3.
pub fn grids() -> Vec<Case> {
    let mut out = Vec::new();
    for a in 1..=6 {
        for b in a..=6 {
            out.push(case(format!("grid {a}x{b}"), generate::grid(&[a, b])));
        }
    }
    for dims in [[2, 2, 2], [2, 2, 3], [2, 3, 3], [3, 3, 3]] {
        out.push(case(format!("grid {dims:?}"), generate::grid(&dims)));
    }
    out
}

pub fn hypercubes() -> Vec<Case> {
    (0..=5).map(|n| case(format!("Q{n}"), generate::hypercube(n))).collect()
}

/// 200 median closures in `Q_3` to `Q_8`.
pub fn median_closures() -> Vec<Case> {
    (0..200u64)
        .map(|i| {
            let d = 3 + (i as usize % 6);
            let k = d + (i as usize / 6) % 3;
            let g = generate::median_closure(d, k, i).expect("suite closure parameters connect");
            case(format!("median_closure d={d} k={k} seed={i}"), g)
        })
        .collect()
}

/// 50 Cartesian products over five factor shapes.
pub fn products() -> Vec<Case> {
    (0..50u64)
        .map(|i| {
            let n = 3 + (i as usize % 5);
            let (name, g) = match i % 5 {
                0 => ("tree x path", generate::cartesian_product(&generate::random_tree(n, i), &generate::grid(&[3]))),
                1 => ("tree x tree", generate::cartesian_product(&generate::random_tree(n, i), &generate::random_tree(4, i + 1))),
                2 => ("grid x tree", generate::cartesian_product(&generate::grid(&[2, 3]), &generate::random_tree(n, i))),
                3 => (
                    "closure x edge",
                    generate::cartesian_product(&generate::median_closure(4, 5, i).unwrap(), &generate::hypercube(1)),
                ),
                _ => ("tree x Q2", generate::cartesian_product(&generate::random_tree(n, i), &generate::hypercube(2))),
            };
            case(format!("{name} #{i}"), g)
        })
        .collect()
}

/// Everything except the exhaustive trees.
pub fn sampled_suite() -> Vec<Case> {
    let mut out = seeded_trees();
    out.extend(grids());
    out.extend(hypercubes());
    out.extend(median_closures());
    out.extend(products());
    out
}

pub fn bfs(g: &Graph, s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; g.n()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in g.neighbors(v) {
            if d[w] == u32::MAX {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

/// Checks that `map` is a bijection `a -> b` preserving adjacency both ways
/// and fixing every label in `fixed`.
pub fn certify_isomorphism(a: &Graph, b: &Graph, map: &[usize], fixed: &[String]) -> bool {
    if a.n() != b.n() || map.len() != a.n() {
        return false;
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    if image.len() != a.n() || image.iter().any(|&y| y >= b.n()) {
        return false;
    }
    let edges_a: BTreeSet<(usize, usize)> = a
        .edges()
        .map(|(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
        .collect();
    let edges_b: BTreeSet<(usize, usize)> = b.edges().collect();
    if edges_a != edges_b {
        return false;
    }
    fixed.iter().all(|l| match (a.id_of(l), b.id_of(l)) {
        (Some(x), Some(y)) => map[x] == y,
        _ => false,
    })
}

/// Whether some bijection `a -> b` fixing the labels in `fixed` preserves
/// adjacency, by trying every permutation of the remaining vertices.
pub fn brute_force_extension_exists(a: &Graph, b: &Graph, fixed: &[String]) -> bool {
    if a.n() != b.n() {
        return false;
    }
    let mut map = vec![usize::MAX; a.n()];
    let mut used = vec![false; b.n()];
    for l in fixed {
        let (x, y) = (a.id_of(l).unwrap(), b.id_of(l).unwrap());
        map[x] = y;
        used[y] = true;
    }
    let free: Vec<usize> = (0..a.n()).filter(|&x| map[x] == usize::MAX).collect();
    fn go(i: usize, free: &[usize], map: &mut [usize], used: &mut [bool], a: &Graph, b: &Graph) -> bool {
        if i == free.len() {
            return a.edge_count() == b.edge_count() && a.edges().all(|(u, v)| b.has_edge(map[u], map[v]));
        }
        for y in 0..b.n() {
            if !used[y] {
                used[y] = true;
                map[free[i]] = y;
                if go(i + 1, free, map, used, a, b) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    go(0, &free, &mut map, &mut used, a, b)
}

/// Induced cubes of `g` in which `root` is adjacent to exactly `dirs`, as
/// sorted vertex sets. Vertex `m` of the cube (a bit mask over `dirs`) is
/// searched among common neighbours of its parents; the full vertex set is
/// then checked to induce exactly the hypercube edges.
pub fn cubes_at(g: &Graph, root: usize, dirs: &[usize]) -> Vec<Vec<usize>> {
    let k = dirs.len();
    let mut order: Vec<usize> = (1..1usize << k).collect();
    order.sort_by_key(|m| (m.count_ones(), *m));
    let mut slots = vec![usize::MAX; 1 << k];
    slots[0] = root;
    let mut found = BTreeSet::new();

    fn rec(g: &Graph, order: &[usize], pos: usize, dirs: &[usize], slots: &mut Vec<usize>, found: &mut BTreeSet<Vec<usize>>) {
        if pos == order.len() {
            // Distinct vertices, every cube edge present, and no other edge
            // inside the set: then the induced subgraph is exactly Q_k.
            let mut vs = slots.clone();
            vs.sort_unstable();
            if vs.windows(2).any(|w| w[0] == w[1]) {
                return;
            }
            let k = dirs.len();
            let inside: usize = vs
                .iter()
                .map(|&v| g.neighbors(v).iter().filter(|w| vs.binary_search(w).is_ok()).count())
                .sum();
            if inside != k << k {
                return;
            }
            let cube_edges = (0..slots.len()).all(|x| (0..k).all(|i| g.has_edge(slots[x], slots[x ^ (1 << i)])));
            if !cube_edges {
                return;
            }
            found.insert(vs);
            return;
        }
        let m = order[pos];
        let cands: Vec<usize> = if m.count_ones() == 1 {
            vec![dirs[m.trailing_zeros() as usize]]
        } else {
            let parents: Vec<usize> = (0..dirs.len()).filter(|&i| m >> i & 1 == 1).map(|i| slots[m ^ (1 << i)]).collect();
            g.neighbors(parents[0])
                .iter()
                .copied()
                .filter(|&x| parents[1..].iter().all(|&p| g.has_edge(p, x)))
                .collect()
        };
        for x in cands {
            if slots.contains(&x) {
                continue;
            }
            slots[m] = x;
            rec(g, order, pos + 1, dirs, slots, found);
        }
        slots[m] = usize::MAX;
    }

    rec(g, &order, 0, dirs, &mut slots, &mut found);
    found.into_iter().collect()
}

/// All induced cubes of dimension at most `max_dim`, as sorted vertex sets.
pub fn brute_force_cubes(g: &Graph, max_dim: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for r in 0..g.n() {
        let nbrs = g.neighbors(r);
        for k in 0..=max_dim.min(nbrs.len()) {
            for dirs in subsets(nbrs, k) {
                out.extend(cubes_at(g, r, &dirs));
            }
        }
    }
    out
}

pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = subsets(&items[1..], k);
    for mut rest in subsets(&items[1..], k - 1) {
        rest.insert(0, items[0]);
        out.push(rest);
    }
    out
}

/// Down-neighbours of `v` with respect to `z`.
pub fn lambda(g: &Graph, dz: &[u32], v: usize) -> Vec<usize> {
    g.neighbors(v).iter().copied().filter(|&w| dz[w] + 1 == dz[v]).collect()
}
