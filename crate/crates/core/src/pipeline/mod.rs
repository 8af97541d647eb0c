//! File formats, the planar vector-field front end, the Hopf generator, rendering, and the
//! end-to-end run used by the command line tool.

pub mod formats;
pub mod hopf;
pub mod render;
pub mod run;
pub mod vectors;

pub use formats::*;
pub use hopf::{
    disk, disk_at, gen_hopf_fields, gen_hopf_fields_on, hopf_grid, hopf_sample, hopf_vector,
    parse_lambdas, window, window_at, HopfGrid, DEFAULT_EXTENT,
};
pub use render::{barcode_json, render_barcode, Format};
pub use run::{
    cli_persist, env_seed, exit_code, run_persist, RunConfig, RunMode, RunOutput, SEED_VAR,
};
pub use vectors::{mvf_from_vectors, SampledVectorField};
