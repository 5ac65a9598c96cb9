//! Combinatorial boundary of a cube complex and the boundary distance matrix.
//!
//! Two variants are supported:
//!
//! * [`BoundaryMode::FacetUnique`]: downward closure of the non-maximal cells
//!   (maximal by inclusion) that are a facet of exactly one cell.
//! * [`BoundaryMode::DimensionBased`]: for a complex of dimension `k`, the
//!   downward closure of the cells of dimension `< k` lying in at most one
//!   `k`-cell.
//!
//! The first is always contained in the second.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::cubes::{enumerate_cubes, facets, faces, CellComplex, CellId, CubeError};
use crate::graph::{all_pairs_distances, Graph};
use crate::matrix::DistanceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BoundaryMode {
    #[default]
    FacetUnique,
    DimensionBased,
}

impl BoundaryMode {
    pub const ALL: [BoundaryMode; 2] = [BoundaryMode::FacetUnique, BoundaryMode::DimensionBased];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::FacetUnique => "facet-unique",
            BoundaryMode::DimensionBased => "dimension-based",
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "facet-unique" => Ok(BoundaryMode::FacetUnique),
            "dimension-based" => Ok(BoundaryMode::DimensionBased),
            other => Err(format!(
                "unknown boundary mode {other:?} (expected facet-unique or dimension-based)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySpec {
    pub mode: BoundaryMode,
    /// Downward-closed set of boundary cells.
    pub cells: BTreeSet<CellId>,
    /// The 0-cells of `cells`, ascending.
    pub vertices: Vec<usize>,
}

/// Selects generators per `mode` and closes them downward through facets.
///
/// A complex consisting of a single vertex has that vertex as its boundary.
pub fn boundary_cells(cx: &CellComplex, mode: BoundaryMode) -> BoundarySpec {
    let generators: Vec<CellId> = match mode {
        BoundaryMode::FacetUnique => cx
            .iter()
            .map(|(id, _)| id)
            .filter(|&id| !cx.is_maximal(id) && cx.coface_count(id) == 1)
            .collect(),
        BoundaryMode::DimensionBased => {
            let top = cx.dimension();
            let mut tops_containing = vec![Vec::new(); top + 1];
            for (d, slot) in tops_containing.iter_mut().enumerate() {
                *slot = vec![0usize; cx.cells_of_dim(d).len()];
            }
            for c in cx.cells_of_dim(top) {
                for f in faces(c) {
                    let id = cx.lookup(f.vertices()).expect("faces of cells are cells");
                    tops_containing[id.dim][id.idx] += 1;
                }
            }
            cx.iter()
                .map(|(id, _)| id)
                .filter(|&id| id.dim < top && tops_containing[id.dim][id.idx] <= 1)
                .collect()
        }
    };

    let mut cells = BTreeSet::new();
    let mut stack = generators;
    while let Some(id) = stack.pop() {
        if !cells.insert(id) {
            continue;
        }
        for f in facets(cx.cell(id)) {
            stack.push(cx.lookup(f.vertices()).expect("facets of cells are cells"));
        }
    }
    if cx.len() == 1 {
        cells.insert(CellId { dim: 0, idx: 0 });
    }
    let vertices = cells
        .iter()
        .filter(|id| id.dim == 0)
        .map(|&id| cx.cell(id).vertices()[0])
        .collect();
    BoundarySpec {
        mode,
        cells,
        vertices,
    }
}

/// Boundary vertex ids of a median graph, ascending.
pub fn boundary_vertices(g: &Graph, mode: BoundaryMode) -> Result<Vec<usize>, CubeError> {
    let cx = enumerate_cubes(g, 0)?;
    Ok(boundary_cells(&cx, mode).vertices)
}

/// Distance matrix of a median graph restricted to its boundary, labels in
/// ascending vertex id order.
pub fn boundary_distance_matrix(g: &Graph, mode: BoundaryMode) -> Result<DistanceMatrix, CubeError> {
    let cx = enumerate_cubes(g, 0)?;
    Ok(boundary_distance_matrix_with(g, &cx, mode))
}

/// As [`boundary_distance_matrix`] for an already built complex of `g`
/// (which need not come from a median graph).
pub fn boundary_distance_matrix_with(g: &Graph, cx: &CellComplex, mode: BoundaryMode) -> DistanceMatrix {
    let vertices = boundary_cells(cx, mode).vertices;
    all_pairs_distances(g).restrict(&vertices)
}

/// Copy of `g` with its boundary vertex set recorded.
pub fn mark_boundary(g: &Graph, mode: BoundaryMode) -> Result<Graph, CubeError> {
    let mut out = g.clone();
    out.set_boundary(boundary_vertices(g, mode)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::induced_complex;
    use crate::generate;
    use crate::verify::check_corner;

    fn labels_of(g: &Graph, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| g.label(v).to_string()).collect()
    }

    #[test]
    fn path_boundary_is_its_ends() {
        let p = generate::grid(&[3]);
        for mode in BoundaryMode::ALL {
            assert_eq!(labels_of(&p, &boundary_vertices(&p, mode).unwrap()), ["(0)", "(2)"]);
        }
    }

    #[test]
    fn square_boundary_is_everything_but_the_square() {
        let q2 = generate::hypercube(2);
        let cx = enumerate_cubes(&q2, 0).unwrap();
        let b = boundary_cells(&cx, BoundaryMode::FacetUnique);
        assert_eq!(b.vertices, vec![0, 1, 2, 3]);
        assert_eq!(b.cells.len(), 8);
        assert!(b.cells.iter().all(|id| id.dim < 2));
    }

    #[test]
    fn grid_boundary_is_the_perimeter() {
        let g = generate::grid(&[3, 3]);
        for mode in BoundaryMode::ALL {
            let b = boundary_vertices(&g, mode).unwrap();
            assert_eq!(b.len(), 8);
            assert!(!b.contains(&g.id_of("(1,1)").unwrap()));
        }
    }

    #[test]
    fn single_vertex_boundary_is_itself() {
        let g = generate::hypercube(0);
        for mode in BoundaryMode::ALL {
            assert_eq!(boundary_vertices(&g, mode).unwrap(), vec![0]);
        }
    }

    #[test]
    fn matrix_examples() {
        let edge = generate::hypercube(1);
        let d = boundary_distance_matrix(&edge, BoundaryMode::FacetUnique).unwrap();
        assert_eq!((d.row(0), d.row(1)), (&[0, 1][..], &[1, 0][..]));

        let p = generate::grid(&[3]);
        let d = boundary_distance_matrix(&p, BoundaryMode::FacetUnique).unwrap();
        assert_eq!(d.labels(), &["(0)", "(2)"]);
        assert_eq!(d.get(0, 1), 2);

        let g = generate::grid(&[3, 3]);
        let d = boundary_distance_matrix(&g, BoundaryMode::FacetUnique).unwrap();
        assert_eq!(d.len(), 8);
        let at = |a: &str, b: &str| d.get(d.index_of(a).unwrap(), d.index_of(b).unwrap());
        assert_eq!(at("(0,0)", "(2,2)"), 4);
        assert_eq!(at("(0,2)", "(2,0)"), 4);
        assert_eq!(at("(0,1)", "(2,1)"), 2);
    }

    #[test]
    fn square_with_pendant_edge_differs_between_modes() {
        // square 0-1-3-2 plus pendant 3-4
        let g = Graph::new(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let cx = enumerate_cubes(&g, 0).unwrap();
        let fu = boundary_cells(&cx, BoundaryMode::FacetUnique);
        let db = boundary_cells(&cx, BoundaryMode::DimensionBased);
        assert!(fu.cells.is_subset(&db.cells));
        assert!(fu.cells.len() < db.cells.len());
        let pendant = cx.lookup(&[3, 4]).unwrap();
        assert!(db.cells.contains(&pendant) && !fu.cells.contains(&pendant));
        assert_eq!(fu.vertices, db.vertices);
        assert_eq!(fu.vertices, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn q3_minus_boundary_is_the_hexagon() {
        let (gp, _, hexagon) = generate::q3_minus();
        let cx = induced_complex(&gp).unwrap();
        let b = boundary_cells(&cx, BoundaryMode::FacetUnique);
        assert_eq!(labels_of(&gp, &b.vertices), hexagon);
    }

    #[test]
    fn boundary_properties_on_generated_graphs() {
        let graphs = vec![
            generate::grid(&[4, 2]),
            generate::grid(&[2, 2, 3]),
            generate::hypercube(3),
            generate::random_tree(11, 5),
            generate::cartesian_product(&generate::random_tree(6, 2), &generate::grid(&[2])),
            generate::median_closure(6, 8, 42).unwrap(),
            generate::median_closure(5, 5, 9).unwrap(),
        ];
        for g in &graphs {
            let cx = enumerate_cubes(g, 0).unwrap();
            let fu = boundary_cells(&cx, BoundaryMode::FacetUnique);
            let db = boundary_cells(&cx, BoundaryMode::DimensionBased);
            for b in [&fu, &db] {
                for &id in &b.cells {
                    for f in facets(cx.cell(id)) {
                        assert!(b.cells.contains(&cx.lookup(f.vertices()).unwrap()));
                    }
                }
            }
            assert!(fu.cells.is_subset(&db.cells));
            let max_dims: BTreeSet<usize> = cx
                .iter()
                .filter(|&(id, _)| cx.is_maximal(id))
                .map(|(id, _)| id.dim)
                .collect();
            if max_dims.len() == 1 {
                assert_eq!(fu.cells, db.cells);
            }
            for v in 0..g.n() {
                if check_corner(g, v) {
                    assert!(fu.vertices.contains(&v), "corner {v} not on the boundary");
                }
            }
        }
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("facet-unique".parse(), Ok(BoundaryMode::FacetUnique));
        assert_eq!("dimension-based".parse(), Ok(BoundaryMode::DimensionBased));
        assert!("nope".parse::<BoundaryMode>().is_err());
        assert_eq!(BoundaryMode::default().to_string(), "facet-unique");
    }
}
