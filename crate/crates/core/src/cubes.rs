//! Cubes of median graphs and the cell complex they span.
//!
//! In a median graph every vertex `v` together with its down-neighbours
//! `Λ(v)` (neighbours one step closer to a basepoint `z`) spans a unique
//! cube, and every cube arises exactly once as the subcube of such a `C(v)`
//! spanned by `v` and a subset of `Λ(v)`. Enumeration walks that bijection.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{bfs_distances, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubeError {
    #[error("graph is not median: {0}")]
    NotMedian(String),
    #[error("vertex {0} is not in the cube")]
    NotInCube(usize),
    #[error("vertex {0} is not a down-neighbour of the cube's top vertex")]
    NotInLambda(usize),
    #[error("cell complex is not closed under facets: facet {0:?} missing")]
    NotClosed(Vec<usize>),
}

/// A cube of the graph.
///
/// Vertices are addressed by a bit mask relative to the top vertex: bit `i`
/// set means "moved along direction `i`". The top has mask `0`, the bottom
/// the full mask.
#[derive(Debug, Clone)]
pub struct Cube {
    vertices: Vec<usize>,
    by_mask: Vec<usize>,
    dim: usize,
}

impl PartialEq for Cube {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for Cube {}

impl std::hash::Hash for Cube {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cube {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, &self.vertices).cmp(&(other.dim, &other.vertices))
    }
}

impl Cube {
    fn from_masks(by_mask: Vec<usize>) -> Cube {
        debug_assert!(by_mask.len().is_power_of_two());
        let dim = by_mask.len().trailing_zeros() as usize;
        let mut vertices = by_mask.clone();
        vertices.sort_unstable();
        Cube {
            vertices,
            by_mask,
            dim,
        }
    }

    pub fn point(v: usize) -> Cube {
        Cube::from_masks(vec![v])
    }

    /// Sorted vertex list; the canonical identity of the cell.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex farthest from the enumeration basepoint.
    pub fn top(&self) -> usize {
        self.by_mask[0]
    }

    /// Gate of the enumeration basepoint in the cube.
    pub fn bottom(&self) -> usize {
        self.by_mask[self.by_mask.len() - 1]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_all(&self, vs: &[usize]) -> bool {
        vs.iter().all(|&v| self.contains(v))
    }

    fn mask_of(&self, v: usize) -> Option<usize> {
        self.by_mask.iter().position(|&x| x == v)
    }

    /// Distance between two members measured inside the cube.
    pub fn inner_distance(&self, u: usize, v: usize) -> Result<u32, CubeError> {
        let mu = self.mask_of(u).ok_or(CubeError::NotInCube(u))?;
        let mv = self.mask_of(v).ok_or(CubeError::NotInCube(v))?;
        Ok((mu ^ mv).count_ones())
    }

    /// Members adjacent to `v` inside the cube.
    pub fn neighbors_in_cube(&self, v: usize) -> Result<Vec<usize>, CubeError> {
        let m = self.mask_of(v).ok_or(CubeError::NotInCube(v))?;
        let mut out: Vec<usize> = (0..self.dim).map(|i| self.by_mask[m ^ (1 << i)]).collect();
        out.sort_unstable();
        Ok(out)
    }
}

/// The member of `c` at inner distance `dim` from `v`.
pub fn opposite_vertex(c: &Cube, v: usize) -> Result<usize, CubeError> {
    let m = c.mask_of(v).ok_or(CubeError::NotInCube(v))?;
    Ok(c.by_mask[m ^ (c.by_mask.len() - 1)])
}

/// The `2 * dim` facets of `c`, split along each direction class.
pub fn facets(c: &Cube) -> Vec<Cube> {
    let mut out = Vec::with_capacity(2 * c.dim);
    for i in 0..c.dim {
        for side in [0usize, 1] {
            let by_mask = (0..1usize << (c.dim - 1))
                .map(|m| c.by_mask[insert_bit(m, i, side)])
                .collect();
            out.push(Cube::from_masks(by_mask));
        }
    }
    out
}

/// Every face of `c` (all dimensions, `c` itself included): `3^dim` cubes.
pub fn faces(c: &Cube) -> Vec<Cube> {
    let full = (1usize << c.dim) - 1;
    let mut out = Vec::new();
    for free in 0..=full {
        let fixed = full & !free;
        // iterate subsets `base` of `fixed`
        let mut base = fixed;
        loop {
            let by_mask = (0..1usize << free.count_ones())
                .map(|m| c.by_mask[base | deposit(m, free)])
                .collect();
            out.push(Cube::from_masks(by_mask));
            if base == 0 {
                break;
            }
            base = (base - 1) & fixed;
        }
    }
    out
}

/// Inserts `bit` at position `i` of `m`, shifting higher bits up.
fn insert_bit(m: usize, i: usize, bit: usize) -> usize {
    let low = m & ((1 << i) - 1);
    let high = (m >> i) << (i + 1);
    high | (bit << i) | low
}

/// Spreads the low bits of `m` onto the set bits of `support`.
fn deposit(m: usize, support: usize) -> usize {
    let mut out = 0;
    let mut k = 0;
    for i in 0..usize::BITS as usize {
        if support >> i & 1 == 1 {
            if m >> k & 1 == 1 {
                out |= 1 << i;
            }
            k += 1;
        }
    }
    out
}

/// Masks of a `k`-cube ordered by level, then value.
fn masks_by_level(k: usize) -> Vec<usize> {
    let mut masks: Vec<usize> = (0..1usize << k).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    masks
}

/// `Λ(v)`: neighbours of `v` one step closer to `z`.
pub fn lambda_set(g: &Graph, z: usize, v: usize) -> Vec<usize> {
    let dz = bfs_distances(g, z);
    lambda_with(g, &dz, v)
}

fn lambda_with(g: &Graph, dz: &[u32], v: usize) -> Vec<usize> {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&u| dz[u] + 1 == dz[v])
        .collect()
}

/// Downward-cube construction against a fixed basepoint.
pub struct DownwardCubes<'g> {
    g: &'g Graph,
    z: usize,
    dz: Vec<u32>,
}

impl<'g> DownwardCubes<'g> {
    pub fn new(g: &'g Graph, z: usize) -> Self {
        DownwardCubes {
            g,
            z,
            dz: bfs_distances(g, z),
        }
    }

    pub fn basepoint(&self) -> usize {
        self.z
    }

    pub fn distances(&self) -> &[u32] {
        &self.dz
    }

    pub fn lambda(&self, v: usize) -> Vec<usize> {
        lambda_with(self.g, &self.dz, v)
    }

    /// The unique cube containing `v` and all of `a ⊆ Λ(v)`, closed level by
    /// level with the quadrangle condition. Every pair route to a vertex is
    /// cross-checked.
    pub fn cube(&self, v: usize, a: &[usize]) -> Result<Cube, CubeError> {
        let g = self.g;
        let dz = &self.dz;
        for &u in a {
            if !(g.has_edge(u, v) && dz[u] + 1 == dz[v]) {
                return Err(CubeError::NotInLambda(u));
            }
        }
        let k = a.len();
        let mut by_mask = vec![usize::MAX; 1 << k];
        by_mask[0] = v;
        for (i, &u) in a.iter().enumerate() {
            by_mask[1 << i] = u;
        }
        let mut seen: BTreeSet<usize> = by_mask.iter().copied().filter(|&x| x != usize::MAX).collect();
        if seen.len() != k + 1 {
            return Err(CubeError::NotMedian(format!(
                "repeated down-neighbour in {a:?}"
            )));
        }
        for m in masks_by_level(k).into_iter().filter(|m| m.count_ones() >= 2) {
            let level = m.count_ones();
            let target = dz[v].checked_sub(level).ok_or_else(|| {
                CubeError::NotMedian(format!("cube at {v} descends below the basepoint"))
            })?;
            let bits: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).collect();
            let mut found: Option<usize> = None;
            for (x, &i) in bits.iter().enumerate() {
                for &j in &bits[x + 1..] {
                    let p = by_mask[m ^ (1 << i)];
                    let q = by_mask[m ^ (1 << j)];
                    let cands: Vec<usize> = g
                        .neighbors(p)
                        .iter()
                        .copied()
                        .filter(|&w| dz[w] == target && g.has_edge(w, q))
                        .collect();
                    if cands.len() != 1 {
                        return Err(CubeError::NotMedian(format!(
                            "{} quadrangle completions for {} and {} towards {}",
                            cands.len(),
                            g.label(p),
                            g.label(q),
                            g.label(self.z)
                        )));
                    }
                    match found {
                        None => found = Some(cands[0]),
                        Some(w) if w == cands[0] => {}
                        Some(w) => {
                            return Err(CubeError::NotMedian(format!(
                                "quadrangle completions disagree: {} vs {}",
                                g.label(w),
                                g.label(cands[0])
                            )))
                        }
                    }
                }
            }
            let w = found.expect("level >= 2 has a pair");
            if !seen.insert(w) {
                return Err(CubeError::NotMedian(format!(
                    "vertex {} completes two corners of one cube",
                    g.label(w)
                )));
            }
            by_mask[m] = w;
        }
        Ok(Cube::from_masks(by_mask))
    }
}

/// See [`DownwardCubes::cube`].
pub fn downward_cube(g: &Graph, z: usize, v: usize, a: &[usize]) -> Result<Cube, CubeError> {
    DownwardCubes::new(g, z).cube(v, a)
}

/// Every cube of a median graph, exactly once.
pub fn enumerate_cubes(g: &Graph, z: usize) -> Result<CellComplex, CubeError> {
    let dc = DownwardCubes::new(g, z);
    let mut cubes = Vec::new();
    for v in 0..g.n() {
        let lam = dc.lambda(v);
        let full = dc.cube(v, &lam)?;
        for support in 0..1usize << lam.len() {
            let sub_dim = support.count_ones();
            let by_mask = (0..1usize << sub_dim)
                .map(|m| full.by_mask[deposit(m, support)])
                .collect();
            cubes.push(Cube::from_masks(by_mask));
        }
    }
    CellComplex::from_cubes(z, cubes)
}

/// All induced cubes of an arbitrary graph (no median assumption).
///
/// Exponential in the vertex degree; intended for small non-median inputs.
pub fn induced_complex(g: &Graph) -> Result<CellComplex, CubeError> {
    let dz = bfs_distances(g, 0);
    let adj = g.adjacency();
    let mut cubes = Vec::new();
    for r in 0..g.n() {
        let nbrs: Vec<usize> = adj[r].iter().copied().filter(|&x| x > r).collect();
        // A direction set is only viable if every pair spans a square.
        let compatible = |a: usize, b: usize| {
            !g.has_edge(a, b)
                && adj[a]
                    .iter()
                    .any(|&w| w != r && w > r && g.has_edge(w, b))
        };
        let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
        while let Some((dirs, next)) = stack.pop() {
            for found in cubes_through(adj, &|x| x >= r, r, &dirs, usize::MAX) {
                cubes.push(orient(found, &dz));
            }
            for (i, &c) in nbrs.iter().enumerate().skip(next) {
                if dirs.iter().all(|&d| compatible(d, c)) {
                    let mut ext = dirs.clone();
                    ext.push(c);
                    stack.push((ext, i + 1));
                }
            }
        }
    }
    CellComplex::from_cubes(0, cubes)
}

/// Re-roots a mask table so that the vertex farthest from the basepoint is
/// the top (ties broken by smallest id).
fn orient(by_mask: Vec<usize>, dz: &[u32]) -> Cube {
    let top_mask = (0..by_mask.len())
        .max_by_key(|&m| (dz[by_mask[m]], std::cmp::Reverse(by_mask[m])))
        .unwrap_or(0);
    Cube::from_masks((0..by_mask.len()).map(|m| by_mask[m ^ top_mask]).collect())
}

/// All induced cubes through `root` whose neighbours of `root` are exactly
/// `dirs` (in that order), restricted to vertices passing `allowed`. Each
/// result is a mask table with `root` at mask 0 and `dirs[i]` at `1 << i`.
/// Stops after `limit` results.
pub(crate) fn cubes_through(
    adj: &[Vec<usize>],
    allowed: &dyn Fn(usize) -> bool,
    root: usize,
    dirs: &[usize],
    limit: usize,
) -> Vec<Vec<usize>> {
    let has_edge = |a: usize, b: usize| adj[a].binary_search(&b).is_ok();
    let k = dirs.len();
    let order = masks_by_level(k);
    let mut by_mask = vec![usize::MAX; 1 << k];
    let mut results = Vec::new();
    if !allowed(root) {
        return results;
    }

    fn fits(
        by_mask: &[usize],
        order: &[usize],
        pos: usize,
        x: usize,
        has_edge: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        let m = order[pos];
        order[..pos].iter().all(|&o| {
            let w = by_mask[o];
            w != x && has_edge(w, x) == ((o ^ m).count_ones() == 1)
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        pos: usize,
        order: &[usize],
        by_mask: &mut Vec<usize>,
        dirs: &[usize],
        adj: &[Vec<usize>],
        allowed: &dyn Fn(usize) -> bool,
        has_edge: &dyn Fn(usize, usize) -> bool,
        results: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if results.len() >= limit {
            return;
        }
        if pos == order.len() {
            results.push(by_mask.clone());
            return;
        }
        let m = order[pos];
        let cands: Vec<usize> = if m.count_ones() == 1 {
            vec![dirs[m.trailing_zeros() as usize]]
        } else {
            let parents: Vec<usize> = (0..dirs.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| by_mask[m ^ (1 << i)])
                .collect();
            adj[parents[0]]
                .iter()
                .copied()
                .filter(|&x| parents[1..].iter().all(|&p| has_edge(p, x)))
                .collect()
        };
        for x in cands {
            if allowed(x) && fits(by_mask, order, pos, x, has_edge) {
                by_mask[m] = x;
                search(
                    pos + 1,
                    order,
                    by_mask,
                    dirs,
                    adj,
                    allowed,
                    has_edge,
                    results,
                    limit,
                );
                by_mask[m] = usize::MAX;
            }
        }
    }

    by_mask[0] = root;
    search(
        1,
        &order,
        &mut by_mask,
        dirs,
        adj,
        allowed,
        &has_edge,
        &mut results,
        limit,
    );
    results
}

/// Recognizes `vertices` as an induced cube of `g`.
pub fn induced_cube(g: &Graph, vertices: &[usize]) -> Option<Cube> {
    let n = vertices.len();
    if n == 0 || !n.is_power_of_two() {
        return None;
    }
    let mut set = vertices.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() != n {
        return None;
    }
    let inside = |x: usize| set.binary_search(&x).is_ok();
    let root = set[0];
    let dirs: Vec<usize> = g.neighbors(root).iter().copied().filter(|&x| inside(x)).collect();
    if 1usize << dirs.len() != n {
        return None;
    }
    cubes_through(g.adjacency(), &inside, root, &dirs, 1)
        .pop()
        .map(Cube::from_masks)
}

/// Outcome of the 3-cube condition scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeCubeCheck {
    pub holds: bool,
    /// Three squares (sorted vertex lists) through a common vertex, pairwise
    /// sharing an edge, that do not lie in a 3-cube.
    pub witness: Option<[[usize; 4]; 3]>,
}

/// Induced 4-cycles of `g` as sorted vertex lists.
pub fn squares(g: &Graph) -> Vec<[usize; 4]> {
    let mut out = BTreeSet::new();
    for a in 0..g.n() {
        let ns = g.neighbors(a);
        for (i, &b) in ns.iter().enumerate() {
            for &c in &ns[i + 1..] {
                if g.has_edge(b, c) {
                    continue;
                }
                for &d in g.neighbors(b) {
                    if d != a && g.has_edge(d, c) && !g.has_edge(d, a) {
                        let mut sq = [a, b, c, d];
                        sq.sort_unstable();
                        out.insert(sq);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Checks that any three squares pairwise meeting in an edge and all meeting
/// in a single vertex lie in a common 3-cube.
pub fn check_3cube_condition(g: &Graph) -> ThreeCubeCheck {
    let sqs = squares(g);
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, sq) in sqs.iter().enumerate() {
        for &v in sq {
            through[v].push(i);
        }
    }
    let common = |a: &[usize; 4], b: &[usize; 4]| -> Vec<usize> {
        a.iter().copied().filter(|x| b.contains(x)).collect()
    };
    let shares_edge = |a: &[usize; 4], b: &[usize; 4]| {
        let c = common(a, b);
        c.len() == 2 && g.has_edge(c[0], c[1])
    };
    for (v, list) in through.iter().enumerate() {
        for (x, &i) in list.iter().enumerate() {
            for (y, &j) in list.iter().enumerate().skip(x + 1) {
                if !shares_edge(&sqs[i], &sqs[j]) {
                    continue;
                }
                for &k in &list[y + 1..] {
                    let (s1, s2, s3) = (&sqs[i], &sqs[j], &sqs[k]);
                    if !shares_edge(s1, s3) || !shares_edge(s2, s3) {
                        continue;
                    }
                    if s1.iter().filter(|x| s2.contains(x) && s3.contains(x)).count() != 1 {
                        continue;
                    }
                    if !closes_to_3cube(g, v, [s1, s2, s3]) {
                        return ThreeCubeCheck {
                            holds: false,
                            witness: Some([*s1, *s2, *s3]),
                        };
                    }
                }
            }
        }
    }
    ThreeCubeCheck {
        holds: true,
        witness: None,
    }
}

fn closes_to_3cube(g: &Graph, v: usize, sqs: [&[usize; 4]; 3]) -> bool {
    let mut union: BTreeSet<usize> = sqs.iter().flat_map(|s| s.iter().copied()).collect();
    // In each square, the vertex opposite v.
    let far: Vec<usize> = sqs
        .iter()
        .map(|s| {
            *s.iter()
                .find(|&&x| x != v && !g.has_edge(x, v))
                .expect("square has an opposite vertex")
        })
        .collect();
    let cands: Vec<usize> = g
        .neighbors(far[0])
        .iter()
        .copied()
        .filter(|&w| !union.contains(&w) && g.has_edge(w, far[1]) && g.has_edge(w, far[2]))
        .collect();
    cands.into_iter().any(|w| {
        union.insert(w);
        let verts: Vec<usize> = union.iter().copied().collect();
        let ok = induced_cube(g, &verts).is_some();
        union.remove(&w);
        ok
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellId {
    pub dim: usize,
    pub idx: usize,
}

/// All cubes of a graph grouped by dimension, with facet incidence.
#[derive(Debug, Clone)]
pub struct CellComplex {
    basepoint: usize,
    cells: Vec<Vec<Cube>>,
    coface_count: Vec<Vec<usize>>,
    maximal: Vec<Vec<bool>>,
    index: HashMap<Vec<usize>, CellId>,
}

impl CellComplex {
    /// Assembles a complex from a cube list. Duplicates and missing facets
    /// are errors.
    pub fn from_cubes(basepoint: usize, mut cubes: Vec<Cube>) -> Result<Self, CubeError> {
        cubes.sort();
        if let Some(w) = cubes.windows(2).find(|w| w[0] == w[1]) {
            return Err(CubeError::NotMedian(format!(
                "cube {:?} enumerated twice",
                w[0].vertices
            )));
        }
        let top_dim = cubes.last().map_or(0, Cube::dim);
        let mut cells: Vec<Vec<Cube>> = vec![Vec::new(); top_dim + 1];
        for c in cubes {
            cells[c.dim].push(c);
        }
        let mut index = HashMap::new();
        for (dim, list) in cells.iter().enumerate() {
            for (idx, c) in list.iter().enumerate() {
                index.insert(c.vertices.clone(), CellId { dim, idx });
            }
        }
        let mut coface_count: Vec<Vec<usize>> = cells.iter().map(|l| vec![0; l.len()]).collect();
        for list in cells.iter().skip(1) {
            for c in list {
                for f in facets(c) {
                    let id = index
                        .get(&f.vertices)
                        .ok_or_else(|| CubeError::NotClosed(f.vertices.clone()))?;
                    coface_count[id.dim][id.idx] += 1;
                }
            }
        }
        // The complex is closed under facets, so a cell lies inside a larger
        // cell iff it is a facet of some cell.
        let maximal = coface_count
            .iter()
            .map(|l| l.iter().map(|&c| c == 0).collect())
            .collect();
        Ok(CellComplex {
            basepoint,
            cells,
            coface_count,
            maximal,
            index,
        })
    }

    /// Subcomplex of cells whose vertices all satisfy `keep`. Matches the
    /// cube complex of the induced subgraph on the kept vertices.
    pub fn restrict(&self, keep: &dyn Fn(usize) -> bool) -> CellComplex {
        let cubes = self
            .iter()
            .map(|(_, c)| c)
            .filter(|c| c.vertices.iter().all(|&v| keep(v)))
            .cloned()
            .collect();
        CellComplex::from_cubes(self.basepoint, cubes).expect("subcomplex of a closed complex is closed")
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// Largest cell dimension.
    pub fn dimension(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells_of_dim(&self, dim: usize) -> &[Cube] {
        self.cells.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn cell(&self, id: CellId) -> &Cube {
        &self.cells[id.dim][id.idx]
    }

    pub fn coface_count(&self, id: CellId) -> usize {
        self.coface_count[id.dim][id.idx]
    }

    pub fn is_maximal(&self, id: CellId) -> bool {
        self.maximal[id.dim][id.idx]
    }

    pub fn lookup(&self, vertices: &[usize]) -> Option<CellId> {
        self.index.get(vertices).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell counts per dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CellId, &Cube)> + '_ {
        self.cells.iter().enumerate().flat_map(|(dim, list)| {
            list.iter()
                .enumerate()
                .map(move |(idx, c)| (CellId { dim, idx }, c))
        })
    }

    /// Cells containing every vertex of `vs`.
    pub fn cubes_containing<'a>(&'a self, vs: &'a [usize]) -> impl Iterator<Item = &'a Cube> + 'a {
        self.iter().map(|(_, c)| c).filter(move |c| c.contains_all(vs))
    }

    pub fn to_json(&self, g: &Graph) -> String {
        #[derive(Serialize)]
        struct CellOut<'a> {
            vertices: &'a [usize],
            maximal: bool,
            coface_count: usize,
        }
        #[derive(Serialize)]
        struct DimOut<'a> {
            dim: usize,
            cells: Vec<CellOut<'a>>,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            basepoint: usize,
            dimension: usize,
            labels: &'a [String],
            cells: Vec<DimOut<'a>>,
        }
        let out = Out {
            basepoint: self.basepoint,
            dimension: self.dimension(),
            labels: g.labels(),
            cells: self
                .cells
                .iter()
                .enumerate()
                .map(|(dim, list)| DimOut {
                    dim,
                    cells: list
                        .iter()
                        .enumerate()
                        .map(|(idx, c)| CellOut {
                            vertices: &c.vertices,
                            maximal: self.maximal[dim][idx],
                            coface_count: self.coface_count[dim][idx],
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string(&out).expect("complex serializes")
    }
}
