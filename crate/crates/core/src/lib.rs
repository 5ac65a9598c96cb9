//! Reconstruction of finite CAT(0) cube complexes, through their median
//! graph 1-skeleta, from the distances between boundary vertices.
//!
//! ```
//! use median_recon::{boundary_distance_matrix, generate, reconstruct, BoundaryMode};
//!
//! let g = generate::grid(&[3, 3]);
//! let d = boundary_distance_matrix(&g, BoundaryMode::FacetUnique).unwrap();
//! assert_eq!(d.len(), 8);
//! let h = reconstruct(&d, None).unwrap();
//! assert_eq!((h.n(), h.edge_count()), (9, 12));
//! ```

pub mod boundary;
pub mod cli;
pub mod cubes;
pub mod generate;
pub mod graph;
pub mod matrix;
pub mod reconstruct;
pub mod verify;

pub use boundary::{boundary_cells, boundary_distance_matrix, boundary_vertices, BoundaryMode, BoundarySpec};
pub use cubes::{enumerate_cubes, induced_complex, CellComplex, CellId, Cube, CubeError};
pub use generate::{Family, GenError, GenSpec};
pub use graph::{all_pairs_distances, bfs_distances, is_median, Graph, GraphError};
pub use matrix::{DistanceMatrix, MatrixError};
pub use reconstruct::{reconstruct, reconstruct_traced, ReconstructError, Reconstruction, StepRecord};
pub use verify::{audit_reconstruction, check_corner, check_monotone_peeling, isomorphism_extending, PartialMap, VerifyError};
