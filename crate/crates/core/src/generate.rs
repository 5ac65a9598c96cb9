//! Deterministic and seeded generators for median graphs, plus the
//! 3-cube-minus-a-vertex counterexample.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{is_median, Graph, GraphError};

pub const MAX_HYPERCUBE_DIM: usize = 12;
pub const MAX_CLOSURE_DIM: usize = 10;
pub const MAX_GRID_VERTICES: usize = 1 << 16;
pub const MAX_TREE_VERTICES: usize = 1 << 16;
const CLOSURE_ATTEMPTS: u64 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("bad parameters for {family}: {reason}")]
    BadParams { family: Family, reason: String },
    #[error("median closure stayed disconnected after {0} attempts")]
    DisconnectedClosure(u64),
    #[error("median closure is not a median graph (triple {0:?})")]
    NotMedian([usize; 3]),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Hypercube `Q_n`; vertex `i` is the subset encoded by the bits of `i`,
/// labelled as an `n`-character bit string (most significant bit first).
pub fn hypercube(n: usize) -> Graph {
    assert!(n <= MAX_HYPERCUBE_DIM, "hypercube dimension {n} exceeds {MAX_HYPERCUBE_DIM}");
    let size = 1usize << n;
    let edges: Vec<(usize, usize)> = (0..size)
        .flat_map(|v| (0..n).map(move |i| (v, v ^ (1 << i))))
        .filter(|&(u, v)| u < v)
        .collect();
    let labels = (0..size).map(|v| bit_label(v, n)).collect();
    Graph::with_labels(size, &edges, labels).expect("hypercube is valid")
}

fn bit_label(v: usize, width: usize) -> String {
    if width == 0 {
        return "e".to_owned();
    }
    format!("{v:0width$b}")
}

/// Cartesian grid with the given side lengths; labels are coordinate
/// tuples such as `(1,2)`.
pub fn grid(dims: &[usize]) -> Graph {
    assert!(dims.iter().all(|&s| s >= 1), "grid sides must be >= 1");
    let size: usize = dims.iter().product();
    assert!(size <= MAX_GRID_VERTICES, "grid too large");
    let coords = |mut v: usize| {
        let mut c = vec![0; dims.len()];
        for (slot, &side) in c.iter_mut().zip(dims).rev() {
            *slot = v % side;
            v /= side;
        }
        c
    };
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let mut edges = Vec::new();
    let mut labels = Vec::with_capacity(size);
    for v in 0..size {
        let c = coords(v);
        for (i, &x) in c.iter().enumerate() {
            if x + 1 < dims[i] {
                edges.push((v, v + stride[i]));
            }
        }
        let parts: Vec<String> = c.iter().map(usize::to_string).collect();
        labels.push(format!("({})", parts.join(",")));
    }
    Graph::with_labels(size, &edges, labels).expect("grid is valid")
}

/// Tree decoded from a Prüfer sequence over `0..seq.len() + 2`.
pub fn prufer_tree(seq: &[usize]) -> Graph {
    let n = seq.len() + 2;
    assert!(seq.iter().all(|&x| x < n), "Prüfer entry out of range");
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::new(n, &edges).expect("Prüfer decoding yields a tree")
}

/// Uniformly random labelled tree on `n` vertices (random Prüfer sequence).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    assert!((1..=MAX_TREE_VERTICES).contains(&n), "tree size out of range");
    match n {
        1 => Graph::new(1, &[]).expect("single vertex"),
        2 => Graph::new(2, &[(0, 1)]).expect("single edge"),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            prufer_tree(&seq)
        }
    }
}

/// Calls `f` on every labelled tree with `n` vertices (`n^(n-2)` of them).
pub fn for_each_tree(n: usize, mut f: impl FnMut(Graph)) {
    match n {
        0 => {}
        1 | 2 => f(random_tree(n, 0)),
        _ => {
            let mut seq = vec![0usize; n - 2];
            loop {
                f(prufer_tree(&seq));
                let mut i = 0;
                while i < seq.len() {
                    seq[i] += 1;
                    if seq[i] < n {
                        break;
                    }
                    seq[i] = 0;
                    i += 1;
                }
                if i == seq.len() {
                    return;
                }
            }
        }
    }
}

/// `a □ b`; vertex `(i, j)` has id `i * |b| + j` and label `(la,lb)`.
pub fn cartesian_product(a: &Graph, b: &Graph) -> Graph {
    let nb = b.n();
    let id = |i: usize, j: usize| i * nb + j;
    let mut edges = Vec::new();
    for i in 0..a.n() {
        for j in 0..nb {
            for &j2 in b.neighbors(j) {
                if j < j2 {
                    edges.push((id(i, j), id(i, j2)));
                }
            }
            for &i2 in a.neighbors(i) {
                if i < i2 {
                    edges.push((id(i, j), id(i2, j)));
                }
            }
        }
    }
    let labels = (0..a.n())
        .flat_map(|i| (0..nb).map(move |j| (i, j)))
        .map(|(i, j)| format!("({},{})", a.label(i), b.label(j)))
        .collect();
    Graph::with_labels(a.n() * nb, &edges, labels).expect("product of connected graphs")
}

/// Median closure of `k` random vertices of `Q_d`, as an induced subgraph of
/// `Q_d` (ids in ascending bit-mask order, labels are bit strings).
///
/// A disconnected closure is regenerated from `seed + 1`, up to 16 attempts.
pub fn median_closure(d: usize, k: usize, seed: u64) -> Result<Graph, GenError> {
    if !(1..=MAX_CLOSURE_DIM).contains(&d) || k == 0 || k > 1 << d {
        return Err(GenError::BadParams {
            family: Family::MedianClosure,
            reason: format!("need 1 <= d <= {MAX_CLOSURE_DIM} and 1 <= k <= 2^d, got d={d}, k={k}"),
        });
    }
    for attempt in 0..CLOSURE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let start: Vec<usize> = sample(&mut rng, 1 << d, k).into_vec();
        let set = close_under_majority(&start);
        match hypercube_induced(d, &set) {
            Ok(g) => {
                let check = is_median(&g);
                return match check.witness {
                    None => Ok(g),
                    Some(w) => Err(GenError::NotMedian(w.triple)),
                };
            }
            Err(GraphError::Disconnected(_)) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(GenError::DisconnectedClosure(CLOSURE_ATTEMPTS))
}

fn majority(a: usize, b: usize, c: usize) -> usize {
    (a & b) | (b & c) | (a & c)
}

/// Smallest superset of `start` closed under coordinatewise majority, sorted.
pub fn close_under_majority(start: &[usize]) -> Vec<usize> {
    let mut members: Vec<usize> = Vec::new();
    let mut seen: HashSet<usize> = HashSet::new();
    let mut pending: Vec<usize> = start.to_vec();
    while let Some(x) = pending.pop() {
        if !seen.insert(x) {
            continue;
        }
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let m = majority(x, a, b);
                if !seen.contains(&m) {
                    pending.push(m);
                }
            }
        }
        members.push(x);
    }
    members.sort_unstable();
    members
}

fn hypercube_induced(d: usize, set: &[usize]) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    for (i, &a) in set.iter().enumerate() {
        for bit in 0..d {
            let b = a ^ (1 << bit);
            if a < b {
                if let Ok(j) = set.binary_search(&b) {
                    edges.push((i, j));
                }
            }
        }
    }
    let labels = set.iter().map(|&v| bit_label(v, d)).collect();
    Graph::with_labels(set.len(), &edges, labels)
}

/// The two labellings `G'`, `G''` of the 3-cube minus a vertex: the 6-cycle
/// `v1..v6` plus `v0` joined to `v1, v3, v5` (in `G'`) or `v2, v4, v6` (in
/// `G''`). Also returns the shared hexagon labels `v1..v6`.
pub fn q3_minus() -> (Graph, Graph, Vec<String>) {
    let labels: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
    let mut cycle: Vec<(usize, usize)> = (1..=6).map(|i| (i, i % 6 + 1)).collect();
    let mut odd = cycle.clone();
    odd.extend([(0, 1), (0, 3), (0, 5)]);
    cycle.extend([(0, 2), (0, 4), (0, 6)]);
    let g1 = Graph::with_labels(7, &odd, labels.clone()).expect("valid");
    let g2 = Graph::with_labels(7, &cycle, labels.clone()).expect("valid");
    (g1, g2, labels[1..].to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Tree,
    Grid,
    Hypercube,
    Product,
    MedianClosure,
    Q3Minus,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tree => "tree",
            Family::Grid => "grid",
            Family::Hypercube => "hypercube",
            Family::Product => "product",
            Family::MedianClosure => "median_closure",
            Family::Q3Minus => "q3_minus",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "tree" => Family::Tree,
            "grid" => Family::Grid,
            "hypercube" => Family::Hypercube,
            "product" => Family::Product,
            "median_closure" | "median-closure" => Family::MedianClosure,
            "q3_minus" | "q3-minus" => Family::Q3Minus,
            other => return Err(GenError::UnknownFamily(other.to_owned())),
        })
    }
}

/// A reproducible generator invocation.
///
/// Parameter strings per family: `tree` `n`; `grid` `a,b,..`; `hypercube`
/// `n`; `median_closure` `d,k`; `q3_minus` `prime` (default) or `double`;
/// `product` `fam:params;fam:params` with factors seeded `seed`, `seed + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub params: String,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(family: Family, params: impl Into<String>, seed: u64) -> Self {
        GenSpec {
            family,
            params: params.into(),
            seed,
        }
    }

    pub fn build(&self) -> Result<Graph, GenError> {
        let bad = |reason: String| GenError::BadParams {
            family: self.family,
            reason,
        };
        let nums = || -> Result<Vec<usize>, GenError> {
            self.params
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|e| bad(format!("{s:?}: {e}"))))
                .collect()
        };
        let single = || -> Result<usize, GenError> {
            match nums()?.as_slice() {
                [n] => Ok(*n),
                other => Err(bad(format!("expected one integer, got {}", other.len()))),
            }
        };
        match self.family {
            Family::Tree => {
                let n = single()?;
                if !(1..=MAX_TREE_VERTICES).contains(&n) {
                    return Err(bad(format!("tree size must be in 1..={MAX_TREE_VERTICES}")));
                }
                Ok(random_tree(n, self.seed))
            }
            Family::Hypercube => {
                let n = single()?;
                if n > MAX_HYPERCUBE_DIM {
                    return Err(bad(format!("dimension must be <= {MAX_HYPERCUBE_DIM}")));
                }
                Ok(hypercube(n))
            }
            Family::Grid => {
                let dims = nums()?;
                if dims.contains(&0) {
                    return Err(bad("grid sides must be >= 1".into()));
                }
                let size = dims.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
                if size.is_none_or(|s| s > MAX_GRID_VERTICES) {
                    return Err(bad(format!("grid exceeds {MAX_GRID_VERTICES} vertices")));
                }
                Ok(grid(&dims))
            }
            Family::MedianClosure => match nums()?.as_slice() {
                [d, k] => median_closure(*d, *k, self.seed),
                _ => Err(bad("expected d,k".into())),
            },
            Family::Q3Minus => {
                let (g1, g2, _) = q3_minus();
                match self.params.trim() {
                    "" | "prime" => Ok(g1),
                    "double" => Ok(g2),
                    other => Err(bad(format!("expected prime or double, got {other:?}"))),
                }
            }
            Family::Product => {
                let parts: Vec<&str> = self.params.split(';').collect();
                let [left, right] = parts.as_slice() else {
                    return Err(bad("expected fam:params;fam:params".into()));
                };
                let factor = |text: &str, seed: u64| -> Result<Graph, GenError> {
                    let (fam, params) = text
                        .split_once(':')
                        .ok_or_else(|| bad(format!("factor {text:?} lacks ':'")))?;
                    GenSpec::new(fam.trim().parse()?, params, seed).build()
                };
                let a = factor(left, self.seed)?;
                let b = factor(right, self.seed.wrapping_add(1))?;
                if a.n().checked_mul(b.n()).is_none_or(|s| s > MAX_GRID_VERTICES) {
                    return Err(bad("product too large".into()));
                }
                Ok(cartesian_product(&a, &b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{check_3cube_condition, induced_cube};

    #[test]
    fn hypercube_examples() {
        assert_eq!((hypercube(0).n(), hypercube(0).edge_count()), (1, 0));
        assert_eq!((hypercube(1).n(), hypercube(1).edge_count()), (2, 1));
        let q3 = hypercube(3);
        assert_eq!((q3.n(), q3.edge_count()), (8, 12));
        assert_eq!(q3.label(0b011), "011");
        assert!(q3.edges().all(|(u, v)| (u ^ v).count_ones() == 1));
    }

    #[test]
    fn grid_examples() {
        let g = grid(&[3, 3]);
        assert_eq!((g.n(), g.edge_count()), (9, 12));
        assert!(g.has_edge(g.id_of("(1,1)").unwrap(), g.id_of("(1,2)").unwrap()));
        let cube = grid(&[2, 2, 2]);
        assert!(induced_cube(&cube, &(0..8).collect::<Vec<_>>()).is_some());
        let p5 = grid(&[5]);
        assert_eq!((p5.n(), p5.edge_count()), (5, 4));
        assert!((0..5).all(|v| p5.degree(v) <= 2));
    }

    #[test]
    fn tree_examples() {
        assert_eq!(random_tree(1, 0).n(), 1);
        assert_eq!(random_tree(2, 0).edge_count(), 1);
        let t = random_tree(10, 7);
        assert_eq!((t.n(), t.edge_count()), (10, 9));
        assert!(is_median(&t).median);
        assert_eq!(random_tree(10, 7), t);
        assert_ne!(random_tree(10, 8), t);
    }

    #[test]
    fn prufer_enumeration_counts() {
        for n in 1..=6 {
            let mut count = 0usize;
            let mut edge_sets = HashSet::new();
            for_each_tree(n, |t| {
                count += 1;
                assert_eq!(t.edge_count(), n - 1);
                edge_sets.insert(t.edges().collect::<Vec<_>>());
            });
            let expected = if n <= 2 { 1 } else { n.pow(n as u32 - 2) };
            assert_eq!(count, expected);
            assert_eq!(edge_sets.len(), expected);
        }
    }

    #[test]
    fn product_examples() {
        let e = hypercube(1);
        let q2 = cartesian_product(&e, &e);
        assert_eq!((q2.n(), q2.edge_count()), (4, 4));
        assert!(induced_cube(&q2, &[0, 1, 2, 3]).is_some());
        let p3 = grid(&[3]);
        let g = cartesian_product(&p3, &p3);
        assert_eq!((g.n(), g.edge_count()), (9, 12));
        assert_eq!(g.label(5), "((1),(2))");
        let prism = cartesian_product(&random_tree(7, 3), &e);
        assert!(is_median(&prism).median);
    }

    #[test]
    fn median_closure_examples() {
        let one = median_closure(4, 1, 0).unwrap();
        assert_eq!(one.n(), 1);
        let pair = median_closure(1, 2, 0).unwrap();
        assert_eq!((pair.n(), pair.edge_count()), (2, 1));
        let g = median_closure(6, 8, 42).unwrap();
        assert!(is_median(&g).median);
        assert!(check_3cube_condition(&g).holds);
        assert_eq!(median_closure(6, 8, 42).unwrap(), g);
        assert!(matches!(median_closure(0, 1, 0), Err(GenError::BadParams { .. })));
        assert!(matches!(median_closure(3, 9, 0), Err(GenError::BadParams { .. })));
    }

    #[test]
    fn closure_is_closed() {
        let set = close_under_majority(&[0b0011, 0b0101, 0b1001, 0b1110]);
        for &a in &set {
            for &b in &set {
                for &c in &set {
                    assert!(set.binary_search(&majority(a, b, c)).is_ok());
                }
            }
        }
    }

    #[test]
    fn q3_minus_examples() {
        let (g1, g2, hex) = q3_minus();
        assert_eq!(hex, ["v1", "v2", "v3", "v4", "v5", "v6"]);
        assert_eq!(g1.neighbors(0), &[1, 3, 5]);
        assert_eq!(g2.neighbors(0), &[2, 4, 6]);
        assert!(!is_median(&g1).median && !is_median(&g2).median);
    }

    #[test]
    fn spec_strings() {
        let g = GenSpec::new(Family::Grid, "3,3", 0).build().unwrap();
        assert_eq!(g, grid(&[3, 3]));
        let p = GenSpec::new(Family::Product, "tree:4;hypercube:1", 9).build().unwrap();
        assert_eq!(p, cartesian_product(&random_tree(4, 9), &hypercube(1)));
        assert_eq!(
            GenSpec::new(Family::Q3Minus, "double", 0).build().unwrap(),
            q3_minus().1
        );
        assert!("median-closure".parse::<Family>().is_ok());
        assert!(matches!("blob".parse::<Family>(), Err(GenError::UnknownFamily(_))));
        assert!(GenSpec::new(Family::Grid, "3,x", 0).build().is_err());
        assert!(GenSpec::new(Family::Hypercube, "13", 0).build().is_err());
        assert!(GenSpec::new(Family::Product, "tree:3", 0).build().is_err());
    }
}
