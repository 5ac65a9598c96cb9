//! Ground-truth checks: isomorphisms extending a boundary map, corner and
//! peeling validators, and step-by-step audits of a reconstruction against
//! the graph it came from.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::boundary::{boundary_cells, BoundaryMode};
use crate::cubes::{cubes_through, enumerate_cubes, CubeError};
use crate::graph::{all_pairs_distances, bfs_distances, is_median, Graph};
use crate::matrix::DistanceMatrix;
use crate::reconstruct::{reconstruct_traced, ReconstructError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("graphs differ in size ({0} vs {1} vertices)")]
    SizeMismatch(usize, usize),
    #[error("partial map is not injective at {0:?}")]
    NotInjective(String),
    #[error("label {0:?} is not a vertex of the graph")]
    UnknownLabel(String),
    #[error("order is not a permutation of the vertices")]
    NotPermutation,
    #[error("graph is not median: intervals of {0:?} meet in {1} vertices")]
    NotMedian([usize; 3], usize),
    #[error(transparent)]
    Cube(#[from] CubeError),
}

/// Injective map between labels of two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialMap {
    pairs: Vec<(String, String)>,
}

impl PartialMap {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self, VerifyError> {
        let mut dom = HashSet::new();
        let mut ran = HashSet::new();
        for (a, b) in &pairs {
            if !dom.insert(a.as_str()) {
                return Err(VerifyError::NotInjective(a.clone()));
            }
            if !ran.insert(b.as_str()) {
                return Err(VerifyError::NotInjective(b.clone()));
            }
        }
        Ok(PartialMap { pairs })
    }

    pub fn identity<S: AsRef<str>>(labels: &[S]) -> Self {
        let pairs = labels
            .iter()
            .map(|l| (l.as_ref().to_owned(), l.as_ref().to_owned()))
            .collect();
        PartialMap::new(pairs).expect("identity on distinct labels")
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn resolve(&self, a: &Graph, b: &Graph) -> Result<Vec<(usize, usize)>, VerifyError> {
        self.pairs
            .iter()
            .map(|(x, y)| {
                let i = a.id_of(x).ok_or_else(|| VerifyError::UnknownLabel(x.clone()))?;
                let j = b.id_of(y).ok_or_else(|| VerifyError::UnknownLabel(y.clone()))?;
                Ok((i, j))
            })
            .collect()
    }
}

/// Finds an isomorphism `a -> b` (as `map[id in a] = id in b`) agreeing with
/// `sigma`, or `None` if there is none.
///
/// Backtracking assigns the most constrained vertex first; candidates must
/// match degree and distances to every vertex already mapped. The result is
/// checked edge by edge before it is returned.
pub fn isomorphism_extending(a: &Graph, b: &Graph, sigma: &PartialMap) -> Result<Option<Vec<usize>>, VerifyError> {
    if a.n() != b.n() {
        return Err(VerifyError::SizeMismatch(a.n(), b.n()));
    }
    let fixed = sigma.resolve(a, b)?;
    if a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let n = a.n();
    let da = all_pairs_distances(a);
    let db = all_pairs_distances(b);

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut mapped: Vec<usize> = Vec::with_capacity(n);
    for &(x, y) in &fixed {
        if a.degree(x) != b.degree(y) || mapped.iter().any(|&m| da.get(x, m) != db.get(y, map[m])) {
            return Ok(None);
        }
        map[x] = y;
        used[y] = true;
        mapped.push(x);
    }

    let mut cands: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        if map[x] != usize::MAX {
            continue;
        }
        cands[x] = (0..n)
            .filter(|&y| {
                !used[y]
                    && a.degree(x) == b.degree(y)
                    && mapped.iter().all(|&m| da.get(x, m) == db.get(y, map[m]))
            })
            .collect();
        if cands[x].is_empty() {
            return Ok(None);
        }
    }

    fn search(
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        cands: &[Vec<usize>],
        da: &DistanceMatrix,
        db: &DistanceMatrix,
    ) -> bool {
        let next = (0..map.len())
            .filter(|&x| map[x] == usize::MAX)
            .min_by_key(|&x| cands[x].len());
        let Some(x) = next else {
            return true;
        };
        for &y in &cands[x] {
            if used[y] {
                continue;
            }
            let mut narrowed = cands.to_vec();
            let mut dead = false;
            for (w, list) in narrowed.iter_mut().enumerate() {
                if map[w] != usize::MAX || w == x {
                    continue;
                }
                list.retain(|&c| c != y && da.get(w, x) == db.get(c, y));
                if list.is_empty() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if search(map, used, &narrowed, da, db) {
                return true;
            }
            map[x] = usize::MAX;
            used[y] = false;
        }
        false
    }

    if !search(&mut map, &mut used, &cands, &da, &db) {
        return Ok(None);
    }
    let edge_perfect = a.edges().all(|(u, v)| b.has_edge(map[u], map[v]));
    Ok(edge_perfect.then_some(map))
}

/// True iff `v` and all its neighbours lie in exactly one cube of `g`.
pub fn check_corner(g: &Graph, v: usize) -> bool {
    corner_cubes(g, &|_| true, v).len() == 1
}

/// Cubes of the subgraph induced by `alive` spanned by `v` and all its
/// neighbours there, as mask tables with `v` at mask 0. At most two are
/// returned.
fn corner_cubes(g: &Graph, alive: &dyn Fn(usize) -> bool, v: usize) -> Vec<Vec<usize>> {
    let dirs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| alive(w)).collect();
    cubes_through(g.adjacency(), alive, v, &dirs, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PeelingViolation {
    /// The order does not start at the basepoint.
    BasepointNotFirst,
    /// Distance from the basepoint drops.
    NotMonotone,
    /// The vertex is not a corner of the subgraph induced by its prefix.
    NotCorner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelingCheck {
    pub ok: bool,
    /// Position in the order and the kind of the first failure.
    pub violation: Option<(usize, PeelingViolation)>,
}

/// Checks that `order` (basepoint first) is a monotone corner peeling read
/// backwards: distances from `z` never decrease and every vertex is a corner
/// of the subgraph induced by itself and its predecessors.
pub fn check_monotone_peeling(g: &Graph, z: usize, order: &[usize]) -> Result<PeelingCheck, VerifyError> {
    let n = g.n();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(VerifyError::NotPermutation);
    }
    let fail = |i, kind| {
        Ok(PeelingCheck {
            ok: false,
            violation: Some((i, kind)),
        })
    };
    if order[0] != z {
        return fail(0, PeelingViolation::BasepointNotFirst);
    }
    let dz = bfs_distances(g, z);
    if let Some(i) = (1..n).find(|&i| dz[order[i]] < dz[order[i - 1]]) {
        return fail(i, PeelingViolation::NotMonotone);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for (i, &v) in order.iter().enumerate().skip(1) {
        if corner_cubes(g, &|w| pos[w] <= i, v).len() != 1 {
            return fail(i, PeelingViolation::NotCorner);
        }
    }
    Ok(PeelingCheck {
        ok: true,
        violation: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuditCheck {
    Reconstruction,
    ExtendedBoundary,
    CreatedDistance,
    BoundaryContained,
    CubeOutsideBoundary,
    CubeMismatch,
    Corner,
    Monotone,
    Isomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub step: Option<usize>,
    pub check: AuditCheck,
    pub detail: String,
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(s) => write!(f, "step {s}: {:?}: {}", self.check, self.detail),
            None => write!(f, "{:?}: {}", self.check, self.detail),
        }
    }
}

/// Outcome of [`audit_reconstruction`].
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub mode: String,
    pub basepoint: String,
    pub input_size: usize,
    /// Peeling steps plus the final one that meets the basepoint.
    pub steps: usize,
    pub created: usize,
    /// Distances produced by the new-vertex formula and compared to BFS.
    pub distances_checked: usize,
    pub distance_mismatches: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "mode {}, basepoint {}, {} input vertices, {} steps, {} created, {} distances checked\n",
            self.mode, self.basepoint, self.input_size, self.steps, self.created, self.distances_checked
        );
        for f in &self.failures {
            out.push_str(&format!("FAIL {f}\n"));
        }
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// Which input set and basepoint an audit uses.
#[derive(Debug, Clone, Default)]
pub struct AuditOptions {
    pub mode: BoundaryMode,
    /// Vertices handed to the reconstructor; defaults to the boundary. Must
    /// contain the boundary.
    pub input: Option<Vec<usize>>,
    /// Basepoint vertex; defaults to the smallest input vertex.
    pub basepoint: Option<usize>,
}

/// Reconstructs `g` from its boundary distance matrix and checks every step
/// against `g`.
pub fn audit_reconstruction(g: &Graph, mode: BoundaryMode) -> Result<AuditReport, VerifyError> {
    audit_with(
        g,
        &AuditOptions {
            mode,
            ..AuditOptions::default()
        },
    )
}

/// [`audit_reconstruction`] with an explicit input set and basepoint.
///
/// The peeling is replayed on `g` itself: at each step the true cube of the
/// peeled vertex in the remaining subgraph gives the true opposite vertex,
/// which fixes what every created label stands for. Checked per step: the
/// reconstructor's `S` equals the replayed extended boundary, created
/// distances equal BFS distances, the boundary of the remaining subgraph lies
/// in `S`, the cube minus its opposite vertex lies on that boundary, and the
/// identified cube is the true one. Finally the order is checked to be a
/// monotone corner peeling and the output to be isomorphic to `g` fixing the
/// input.
pub fn audit_with(g: &Graph, opts: &AuditOptions) -> Result<AuditReport, VerifyError> {
    let check = is_median(g);
    if let Some(w) = check.witness {
        return Err(VerifyError::NotMedian(w.triple, w.intersection_size));
    }
    let n = g.n();
    let cx = enumerate_cubes(g, 0)?;
    let input = match &opts.input {
        Some(s) => {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            s
        }
        None => boundary_cells(&cx, opts.mode).vertices,
    };
    let z = opts.basepoint.unwrap_or(input[0]);
    let dg = all_pairs_distances(g);
    let matrix = dg.restrict(&input);

    let mut report = AuditReport {
        mode: opts.mode.to_string(),
        basepoint: g.label(z).to_owned(),
        input_size: input.len(),
        steps: 0,
        created: 0,
        distances_checked: 0,
        distance_mismatches: 0,
        failures: Vec::new(),
    };
    let fail = |report: &mut AuditReport, step: Option<usize>, check, detail: String| {
        report.failures.push(AuditFailure { step, check, detail });
    };

    let recon = match reconstruct_traced(&matrix, Some(g.label(z))) {
        Ok(r) => r,
        Err(e) => {
            let step = match &e {
                ReconstructError::AmbiguousCompletion { step, .. } | ReconstructError::IsolatedNonBase { step, .. } => {
                    Some(*step)
                }
                _ => None,
            };
            fail(&mut report, step, AuditCheck::Reconstruction, e.to_string());
            return Ok(report);
        }
    };
    report.steps = recon.steps();
    report.created = recon.created();
    let st = &recon.state;

    // label id in the reconstruction -> vertex of g
    let mut to_g: HashMap<usize, usize> = (0..st.input_len()).map(|i| (i, input[i])).collect();
    let mut alive = vec![true; n];
    let mut s_true: BTreeSet<usize> = input.iter().copied().collect();
    let mut active_labels: BTreeSet<usize> = (0..st.input_len()).collect();
    let mut peel_order = Vec::with_capacity(n);

    for rec in st.trace() {
        let step = Some(rec.step);
        let s_mapped: Option<BTreeSet<usize>> = active_labels.iter().map(|l| to_g.get(l).copied()).collect();
        if s_mapped.as_ref() != Some(&s_true) {
            fail(&mut report, step, AuditCheck::ExtendedBoundary, "S differs from the replayed extended boundary".into());
            return Ok(report);
        }
        let sub = cx.restrict(&|x| alive[x]);
        let boundary_now: BTreeSet<usize> = boundary_cells(&sub, opts.mode).vertices.into_iter().collect();
        if !boundary_now.is_subset(&s_true) {
            fail(&mut report, step, AuditCheck::BoundaryContained, "boundary of the remaining graph is not inside S".into());
        }

        let vl = st.index_of(&rec.v_i).expect("trace labels are known");
        let v = to_g[&vl];
        let cubes = corner_cubes(g, &|x| alive[x], v);
        if cubes.len() != 1 {
            fail(&mut report, step, AuditCheck::Corner, format!("{} is not a corner of the remaining graph", g.label(v)));
            return Ok(report);
        }
        let true_cube = &cubes[0];
        let u = *true_cube.last().expect("cube is nonempty");
        if let Some(&x) = true_cube.iter().find(|&&x| x != u && !boundary_now.contains(&x)) {
            fail(
                &mut report,
                step,
                AuditCheck::CubeOutsideBoundary,
                format!("cube vertex {} is not on the boundary", g.label(x)),
            );
        }

        let ul = st.index_of(&rec.u_i).expect("trace labels are known");
        if rec.u_i_new {
            if s_true.contains(&u) {
                fail(
                    &mut report,
                    step,
                    AuditCheck::ExtendedBoundary,
                    format!("created {} but {} was already in S", rec.u_i, g.label(u)),
                );
                return Ok(report);
            }
            // Distances to labels created later are checked at their steps.
            for x in 0..st.labels().len() {
                let (Some(d), Some(&gx)) = (st.distance(ul, x), to_g.get(&x)) else {
                    continue;
                };
                let truth = dg.get(u, gx);
                report.distances_checked += 1;
                if d != truth {
                    report.distance_mismatches += 1;
                    fail(
                        &mut report,
                        step,
                        AuditCheck::CreatedDistance,
                        format!("d({}, {}) = {d}, BFS gives {truth}", rec.u_i, st.label(x)),
                    );
                }
            }
            to_g.insert(ul, u);
        } else if to_g.get(&ul) != Some(&u) {
            fail(
                &mut report,
                step,
                AuditCheck::CubeMismatch,
                format!("completed with {} but the true opposite vertex is {}", rec.u_i, g.label(u)),
            );
            return Ok(report);
        }

        let seen: BTreeSet<usize> = rec
            .cube_levels
            .iter()
            .flatten()
            .map(|l| to_g[&st.index_of(l).expect("trace labels are known")])
            .collect();
        let truth: BTreeSet<usize> = true_cube.iter().copied().collect();
        if seen != truth {
            fail(&mut report, step, AuditCheck::CubeMismatch, format!("cube of {} misidentified", rec.v_i));
        }

        alive[v] = false;
        s_true.remove(&v);
        s_true.insert(u);
        active_labels.remove(&vl);
        active_labels.insert(ul);
        peel_order.push(v);
    }

    let last = Some(st.trace().len());
    let sub = cx.restrict(&|x| alive[x]);
    let boundary_now: BTreeSet<usize> = boundary_cells(&sub, opts.mode).vertices.into_iter().collect();
    if s_true != BTreeSet::from([z]) || !boundary_now.is_subset(&s_true) {
        fail(&mut report, last, AuditCheck::ExtendedBoundary, "peeling did not end at the basepoint".into());
        return Ok(report);
    }

    peel_order.push(z);
    peel_order.reverse();
    match check_monotone_peeling(g, z, &peel_order) {
        Ok(PeelingCheck { violation: Some((i, kind)), .. }) => {
            fail(&mut report, None, AuditCheck::Monotone, format!("{kind:?} at position {i}"));
        }
        Ok(_) => {}
        Err(e) => fail(&mut report, None, AuditCheck::Monotone, e.to_string()),
    }

    let sigma = PartialMap::identity(matrix.labels());
    match isomorphism_extending(&recon.graph, g, &sigma) {
        Ok(Some(_)) => {}
        Ok(None) => fail(&mut report, None, AuditCheck::Isomorphism, "no isomorphism fixes the input labels".into()),
        Err(e) => fail(&mut report, None, AuditCheck::Isomorphism, e.to_string()),
    }
    Ok(report)
}
