//! Rebuilds a median graph from the distances between its boundary vertices
//! by monotone corner peeling.
//!
//! The reconstructor keeps a set `S` of known vertices (initially the
//! boundary), their distances `D` and a partial graph `Γ`. Each step takes
//! the member `v` of `S` farthest from a fixed basepoint `z`, which is a
//! corner of what remains. Its neighbours in `S` span (all but possibly one
//! vertex of) the cube of that corner. The missing opposite vertex `u` is
//! either found in `S` or created, with
//! `d(x, u) = max { d(x, n) : n ∈ N } - 1` for the neighbours `N` of `u` in
//! the cube. Then `v` leaves `S` and `u` joins it. The run ends when `z` is
//! the farthest member left.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::{DistanceMatrix, MatrixError};

/// Prefix of labels given to vertices created during reconstruction.
pub const AUX_PREFIX: &str = "aux:";

/// Cube directions beyond this cannot be addressed by a mask table.
const MAX_CUBE_DIM: usize = 24;

/// One peeling step, as written to trace files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub v_i: String,
    #[serde(rename = "L_i")]
    pub l_i: Vec<String>,
    pub cube_levels: Vec<Vec<String>>,
    #[serde(rename = "N_i")]
    pub n_i: Vec<String>,
    pub u_i: String,
    pub u_i_new: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("malformed distance matrix: {0}")]
    MalformedMatrix(#[from] MatrixError),
    #[error("basepoint {0:?} is not a label of the matrix")]
    UnknownBasepoint(String),
    #[error(
        "ambiguous cube completion at step {step} (corner {vertex}, level {level}): {reason}; candidates {candidates:?}"
    )]
    AmbiguousCompletion {
        step: usize,
        vertex: String,
        level: usize,
        candidates: Vec<String>,
        reason: String,
        trace: Vec<StepRecord>,
    },
    #[error("step {step}: {vertex} has no neighbour in S yet is within distance 1 of the basepoint")]
    IsolatedNonBase {
        step: usize,
        vertex: String,
        trace: Vec<StepRecord>,
    },
}

impl ReconstructError {
    /// Steps completed before the failure.
    pub fn trace(&self) -> &[StepRecord] {
        match self {
            ReconstructError::AmbiguousCompletion { trace, .. }
            | ReconstructError::IsolatedNonBase { trace, .. } => trace,
            _ => &[],
        }
    }
}

/// Cube around a corner as identified from `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeCompletion {
    /// Neighbours of the corner in `S`.
    pub neighbors: Vec<usize>,
    /// Vertices of the cube by distance from the corner; the last level holds
    /// the opposite vertex when it is already in `S`, and is empty otherwise.
    pub levels: Vec<Vec<usize>>,
    /// Neighbours of the opposite vertex inside the cube.
    pub opposite_neighbors: Vec<usize>,
    pub opposite: Option<usize>,
    pub dim: usize,
}

/// The reconstructor's working state. Indices refer to the label universe:
/// input labels in matrix order followed by created labels.
#[derive(Debug, Clone)]
pub struct ReconstructionState {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<Vec<Option<u32>>>,
    active: Vec<bool>,
    gamma: Vec<BTreeSet<usize>>,
    z: usize,
    input_len: usize,
    next_aux: usize,
    trace: Vec<StepRecord>,
}

impl ReconstructionState {
    /// Starts from a validated matrix; `Γ` joins labels at distance 1. The
    /// basepoint defaults to the first label.
    pub fn init(d: &DistanceMatrix, basepoint: Option<&str>) -> Result<Self, ReconstructError> {
        d.validate()?;
        let n = d.len();
        let labels = d.labels().to_vec();
        let index: HashMap<String, usize> =
            labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let z = match basepoint {
            None => 0,
            Some(b) => *index
                .get(b)
                .ok_or_else(|| ReconstructError::UnknownBasepoint(b.to_owned()))?,
        };
        let dist = (0..n)
            .map(|i| d.row(i).iter().map(|&x| Some(x)).collect())
            .collect();
        let gamma = (0..n)
            .map(|i| (0..n).filter(|&j| d.get(i, j) == 1).collect())
            .collect();
        Ok(ReconstructionState {
            labels,
            index,
            dist,
            active: vec![true; n],
            gamma,
            z,
            input_len: n,
            next_aux: 0,
            trace: Vec::new(),
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn basepoint(&self) -> usize {
        self.z
    }

    /// Number of labels that came from the input matrix.
    pub fn input_len(&self) -> usize {
        self.input_len
    }

    /// Known distance between two labels, if it was ever recorded.
    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        self.dist[i][j]
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    /// Current `S`, in universe order.
    pub fn active(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.active[i]).collect()
    }

    pub fn gamma_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.gamma[i].iter().copied()
    }

    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    fn d(&self, i: usize, j: usize) -> u32 {
        self.dist[i][j].expect("distances between members of S are known")
    }

    /// Member of `S` farthest from the basepoint; ties go to the earliest
    /// label in universe order.
    pub fn pick_corner(&self) -> usize {
        let mut best = self.z;
        let mut best_d = 0;
        for i in 0..self.labels.len() {
            if self.active[i] && self.d(self.z, i) > best_d {
                best = i;
                best_d = self.d(self.z, i);
            }
        }
        best
    }

    fn ambiguous(
        &self,
        v: usize,
        level: usize,
        candidates: &[usize],
        reason: impl Into<String>,
    ) -> ReconstructError {
        ReconstructError::AmbiguousCompletion {
            step: self.trace.len(),
            vertex: self.labels[v].clone(),
            level,
            candidates: candidates.iter().map(|&c| self.labels[c].clone()).collect(),
            reason: reason.into(),
            trace: self.trace.clone(),
        }
    }

    /// Identifies the cube of the corner `v` from distances alone. Every
    /// uniqueness the completion relies on is checked.
    pub fn complete_cube(&self, v: usize) -> Result<CubeCompletion, ReconstructError> {
        let z = self.z;
        let dzv = self.d(z, v);
        let neighbors: Vec<usize> = (0..self.labels.len())
            .filter(|&w| w != v && self.active[w] && self.d(v, w) == 1)
            .collect();

        if neighbors.is_empty() {
            if dzv <= 1 {
                return Err(ReconstructError::IsolatedNonBase {
                    step: self.trace.len(),
                    vertex: self.labels[v].clone(),
                    trace: self.trace.clone(),
                });
            }
            // Pendant corner whose support vertex is not yet known.
            return Ok(CubeCompletion {
                neighbors,
                levels: vec![vec![v], vec![]],
                opposite_neighbors: vec![v],
                opposite: None,
                dim: 1,
            });
        }
        if let Some(&bad) = neighbors.iter().find(|&&w| self.d(z, w) + 1 != dzv) {
            return Err(self.ambiguous(v, 1, &[bad], "neighbour of the corner is not closer to the basepoint"));
        }
        if neighbors.len() == 1 {
            return Ok(CubeCompletion {
                levels: vec![vec![v], neighbors.clone()],
                opposite_neighbors: vec![v],
                opposite: Some(neighbors[0]),
                neighbors,
                dim: 1,
            });
        }

        let k = neighbors.len();
        if k > MAX_CUBE_DIM {
            return Err(self.ambiguous(v, 1, &neighbors, "corner degree exceeds the supported cube dimension"));
        }
        let mut by_mask = vec![usize::MAX; 1 << k];
        by_mask[0] = v;
        for (i, &w) in neighbors.iter().enumerate() {
            by_mask[1 << i] = w;
        }
        let mut used: BTreeSet<usize> = neighbors.iter().copied().chain([v]).collect();
        let mut opposite = None;
        let mut masks: Vec<usize> = (0..1usize << k).filter(|m| m.count_ones() >= 2).collect();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        for m in masks {
            let level = m.count_ones() as usize;
            let Some(target) = dzv.checked_sub(level as u32) else {
                return Err(self.ambiguous(v, level, &[], "cube would extend past the basepoint"));
            };
            let bits: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).collect();
            let mut agreed: Option<Option<usize>> = None;
            for (x, &i) in bits.iter().enumerate() {
                for &j in &bits[x + 1..] {
                    let (p, q) = (by_mask[m ^ (1 << i)], by_mask[m ^ (1 << j)]);
                    let cands: Vec<usize> = (0..self.labels.len())
                        .filter(|&w| {
                            self.active[w]
                                && self.d(w, v) == level as u32
                                && self.d(z, w) == target
                                && self.d(w, p) == 1
                                && self.d(w, q) == 1
                        })
                        .collect();
                    let route = match cands.as_slice() {
                        [] if level == k => None,
                        [w] => Some(*w),
                        _ => {
                            return Err(self.ambiguous(
                                v,
                                level,
                                &cands,
                                format!(
                                    "expected a unique common neighbour of {} and {}",
                                    self.labels[p], self.labels[q]
                                ),
                            ))
                        }
                    };
                    match agreed {
                        None => agreed = Some(route),
                        Some(prev) if prev == route => {}
                        Some(prev) => {
                            let seen: Vec<usize> = prev.into_iter().chain(route).collect();
                            return Err(self.ambiguous(v, level, &seen, "completion routes disagree"));
                        }
                    }
                }
            }
            let found = agreed.expect("a level >= 2 mask has a pair");
            if let Some(w) = found {
                if !used.insert(w) {
                    return Err(self.ambiguous(v, level, &[w], "one vertex completes two cube corners"));
                }
            }
            if level == k {
                opposite = found;
            } else {
                by_mask[m] = found.expect("levels below the top must complete");
            }
        }

        let mut levels: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
        for (m, &w) in by_mask.iter().enumerate().take((1 << k) - 1) {
            levels[m.count_ones() as usize].push(w);
        }
        if let Some(u) = opposite {
            levels[k].push(u);
        }
        for level in &mut levels {
            level.sort_unstable();
        }
        Ok(CubeCompletion {
            opposite_neighbors: levels[k - 1].clone(),
            neighbors,
            levels,
            opposite,
            dim: k,
        })
    }

    /// `max { D[x, n] : n ∈ N } - 1`.
    pub fn distance_to_new_vertex(&self, opposite_neighbors: &[usize], x: usize) -> u32 {
        opposite_neighbors
            .iter()
            .map(|&n| self.d(x, n))
            .max()
            .expect("N is nonempty")
            .saturating_sub(1)
    }

    fn fresh_label(&mut self) -> String {
        loop {
            let label = format!("{AUX_PREFIX}{}", self.next_aux);
            self.next_aux += 1;
            if !self.index.contains_key(&label) {
                return label;
            }
        }
    }

    /// Peels one corner. Returns `None` once the basepoint is the farthest
    /// member of `S`, i.e. the reconstruction is complete.
    pub fn step(&mut self) -> Result<Option<&StepRecord>, ReconstructError> {
        let v = self.pick_corner();
        if v == self.z {
            return Ok(None);
        }
        let cube = self.complete_cube(v)?;
        self.active[v] = false;
        let (u, is_new) = match cube.opposite {
            Some(u) => (u, false),
            None => {
                let others = self.active();
                let row: Vec<u32> = others
                    .iter()
                    .map(|&x| self.distance_to_new_vertex(&cube.opposite_neighbors, x))
                    .collect();
                if let Some(pos) = row.iter().position(|&d| d == 0) {
                    self.active[v] = true;
                    return Err(self.ambiguous(
                        v,
                        cube.dim,
                        &[others[pos]],
                        "new opposite vertex would coincide with a member of S",
                    ));
                }
                let label = self.fresh_label();
                let u = self.labels.len();
                self.index.insert(label.clone(), u);
                self.labels.push(label);
                for r in &mut self.dist {
                    r.push(None);
                }
                let mut new_row = vec![None; u + 1];
                new_row[u] = Some(0);
                self.dist.push(new_row);
                self.gamma.push(BTreeSet::new());
                for (&x, &d) in others.iter().zip(&row) {
                    self.dist[u][x] = Some(d);
                    self.dist[x][u] = Some(d);
                    if d == 1 {
                        self.gamma[u].insert(x);
                        self.gamma[x].insert(u);
                    }
                }
                let dim = cube.dim as u32;
                self.dist[u][v] = Some(dim);
                self.dist[v][u] = Some(dim);
                if cube.dim == 1 {
                    self.gamma[u].insert(v);
                    self.gamma[v].insert(u);
                }
                self.active.push(true);
                (u, true)
            }
        };

        let names = |ids: &[usize]| -> Vec<String> { ids.iter().map(|&i| self.labels[i].clone()).collect() };
        let mut cube_levels: Vec<Vec<String>> = cube.levels.iter().map(|l| names(l)).collect();
        if is_new {
            cube_levels[cube.dim] = vec![self.labels[u].clone()];
        }
        let record = StepRecord {
            step: self.trace.len(),
            v_i: self.labels[v].clone(),
            l_i: names(&cube.neighbors),
            cube_levels,
            n_i: names(&cube.opposite_neighbors),
            u_i: self.labels[u].clone(),
            u_i_new: is_new,
        };
        self.trace.push(record);
        Ok(self.trace.last())
    }

    /// `Γ` as a graph over the whole label universe.
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .gamma
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&w| u < w).map(move |&w| (u, w)))
            .collect();
        // Every peeled vertex is joined to a vertex strictly closer to the
        // basepoint, so Γ is connected.
        Graph::with_labels(self.labels.len(), &edges, self.labels.clone())
            .expect("reconstructed graph is connected")
    }
}

/// Output of a traced run.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub graph: Graph,
    pub state: ReconstructionState,
}

impl Reconstruction {
    pub fn trace(&self) -> &[StepRecord] {
        self.state.trace()
    }

    /// Labels created during the run.
    pub fn created(&self) -> usize {
        self.state.labels().len() - self.state.input_len()
    }

    /// Steps including the final one that meets the basepoint.
    pub fn steps(&self) -> usize {
        self.state.trace().len() + 1
    }
}

/// Runs the peeling to completion and returns `Γ` with the full state.
pub fn reconstruct_traced(d: &DistanceMatrix, basepoint: Option<&str>) -> Result<Reconstruction, ReconstructError> {
    let mut state = ReconstructionState::init(d, basepoint)?;
    while state.step()?.is_some() {}
    Ok(Reconstruction {
        graph: state.to_graph(),
        state,
    })
}

/// Rebuilds the graph from boundary labels and their distances. Input
/// labels keep their positions as vertex ids `0..d.len()`.
pub fn reconstruct(d: &DistanceMatrix, basepoint: Option<&str>) -> Result<Graph, ReconstructError> {
    reconstruct_traced(d, basepoint).map(|r| r.graph)
}

/// Writes one JSON object per step.
pub fn write_trace<W: Write>(trace: &[StepRecord], mut out: W) -> std::io::Result<()> {
    for rec in trace {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
