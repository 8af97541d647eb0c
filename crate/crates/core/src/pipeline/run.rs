//! The `persist` run: read inputs, build a diagram, compute and write the barcode.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tracking::{build_track_diagram, NeighborhoodSearch};
use crate::zigzag::{
    build_fixed_diagram, zigzag_barcode_with_order, Barcode, OperationOrder, PairDiagram,
};

use super::formats::{read_complex, read_field, read_set};
use super::render::{barcode_json, render_barcode, Format};

/// Environment variable that overrides [`RunConfig::seed`].
pub const SEED_VAR: &str = "MVF_SEED";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RunMode {
    #[default]
    Fixed,
    Track,
}

impl std::str::FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fixed" => Ok(RunMode::Fixed),
            "track" => Ok(RunMode::Track),
            other => Err(format!("unknown mode {other:?}, expected fixed or track")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub complex: PathBuf,
    pub fields: Vec<PathBuf>,
    pub neighborhood: PathBuf,
    /// Collar radius for exit-set enlargement. Fixed mode skips enlargement when unset; track
    /// mode treats unset as zero.
    pub delta: Option<usize>,
    pub mode: RunMode,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
    /// Seeds the order of simplex operations inside each arrow. The barcode does not depend on
    /// it; the option exists to exercise that.
    pub seed: Option<u64>,
}

/// The value of `MVF_SEED`, if set.
pub fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| Error::Parse {
            path: SEED_VAR.into(),
            line: 0,
            msg: format!("not an integer: {v:?}"),
        }),
        Err(_) => Ok(None),
    }
}

impl RunConfig {
    /// The seed after applying `MVF_SEED`.
    pub fn effective_seed(&self) -> Result<Option<u64>> {
        Ok(env_seed()?.or(self.seed))
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub diagram: PairDiagram,
    pub barcode: Barcode,
}

/// Runs the pipeline and writes its outputs.
pub fn run_persist(config: &RunConfig) -> Result<RunOutput> {
    if config.fields.is_empty() {
        return Err(Error::BadDiagram("no fields given".into()));
    }
    let seed = config.effective_seed()?;
    let k = Arc::new(read_complex(&config.complex)?);
    let fields = config
        .fields
        .iter()
        .map(|p| read_field(k.clone(), p))
        .collect::<Result<Vec<_>>>()?;
    let n = read_set(&k, &config.neighborhood)?;
    let diagram = match config.mode {
        RunMode::Fixed => build_fixed_diagram(&fields, &n, config.delta)?,
        RunMode::Track => {
            build_track_diagram(
                &fields,
                &n,
                config.delta.unwrap_or(0),
                NeighborhoodSearch::Collar,
            )?
            .0
        }
    };
    let order = seed.map_or(OperationOrder::Canonical, OperationOrder::Shuffled);
    let barcode = zigzag_barcode_with_order(&diagram, order)?;
    fs::write(&config.out, barcode_json(&barcode)?)?;
    if let Some(svg) = &config.svg {
        fs::write(svg, render_barcode(&barcode, Format::Svg))?;
    }
    Ok(RunOutput { diagram, barcode })
}

/// 1 for unreadable or malformed input, 2 for everything the algorithms reject.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

/// [`run_persist`] with errors reported on stderr and mapped to an exit code.
pub fn cli_persist(config: &RunConfig) -> i32 {
    match run_persist(config) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
