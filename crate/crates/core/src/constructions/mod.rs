//! Incidence constructions: the point-line lattice and its point graph,
//! sampling with deletion, forbidden-configuration search, block
//! hypergraphs, and the end-to-end experiment pipeline.

mod deletion;
mod forbidden;
mod hypergraph;
mod lattice;
mod params;
mod pipeline;
mod pointgraph;
mod structure;

pub use deletion::{deletion_probability, sample_and_delete, trial_seed, AuditLog, DeletionError, Sampled};
pub use forbidden::{check_witness, forbidden_config_scan, ScanError, ScanOptions, Witness, DEFAULT_CAP};
pub use hypergraph::{build_block_hypergraph, BlockHypergraph, CopyCensus, HypergraphError, PlantedCopy};
pub use lattice::{cube_root, incidence_count, pach_sharir_bound, st_lattice, Lattice, LatticeError};
pub use params::{Constants, ExperimentParams};
pub use pipeline::{
    curve_paths, run_pipeline, BlockSummary, DivisionSummary, GraphSummary, IncidenceSummary, PartSummary,
    PipelineError, PipelineReport,
};
pub use pointgraph::{point_graph, PointGraph, PointGraphStats};
pub use structure::{IncidenceStructure, Provenance, SharedPoints};
