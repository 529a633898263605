//! Linear correctors for post-processing biased random bits: GF(2) code
//! algebra, weight distributions, output min-entropy bounds, an exact
//! oracle, corrector catalogs and a stream engine.

pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod error;
pub mod gf2;
pub mod oracle;
pub mod weights;

pub use bounds::{
    efficiency, new_bound, old_bound, solve_h_in_req, BoundKind, DualFormBound, MinEntropyRate,
    NewBound, OldBound, OutputBound, Requirement, TotalMinEntropy,
};
pub use catalog::{
    appropriate, build_records, load_catalog, load_code, pareto_frontier, select_for_target,
    CatalogEntry, Corrector, CorrectorRecord, Frontier,
};
pub use engine::{apply_block, apply_cyclic_block, apply_stream, StreamStats};
pub use error::{Error, Result};
pub use gf2::{expand_cyclic, BinaryLinearCode, BitMatrix, BitVector};
pub use oracle::{exact_min_entropy, exact_output_dist, most_probable_coset_check, BitProbabilities};
pub use weights::{enumerate_wd, macwilliams, wd_for_code, WeightDistribution};
