//! Persistence of Conley indices for sequences of combinatorial multivector fields.
//!
//! A field on a simplicial complex is a partition into convex multivectors. For each field in a
//! sequence the crate finds the invariant part of an isolating neighborhood, builds an index
//! pair for it, and strings the pairs into a zigzag whose barcode shows how the Conley index
//! changes along the sequence.
//!
//! ```
//! use std::sync::Arc;
//! use mvfconley::complex::fixtures;
//! use mvfconley::{build_fixed_diagram, zigzag_barcode, MultivectorField};
//!
//! let k = Arc::new(fixtures::triangle());
//! let f = MultivectorField::singletons(k.clone());
//! let d = build_fixed_diagram(&[f.clone(), f], &k.full_set(), None).unwrap();
//! let bars = zigzag_barcode(&d).unwrap();
//! assert_eq!(bars.rank_at(1, 3, 0).unwrap(), 1);
//! ```

pub mod complex;
pub mod error;
pub mod gf2;
pub mod indexpair;
pub mod mvf;
pub mod pipeline;
pub mod scc;
pub mod set;
pub mod tracking;
pub mod zigzag;

pub use complex::{build_complex, BettiVector, Simplex, SimplicialComplex};
pub use error::{Error, Result};
pub use indexpair::{
    check_index_pair, cl_mo_pair, find_r, intersect_pairs, pf_pair, push_backward, push_forward,
    removable_regular_vector, union_pf_pair, validate_index_pair, IndexPair, Mode, PairViolation,
};
pub use mvf::{build_mvf, intersect_fields, random_mvf, MultivectorField};
pub use set::SimplexSet;
pub use tracking::{
    build_track_diagram, delta_collar, find_neighborhood, NeighborhoodSearch, TrackStep,
};
pub use zigzag::{
    build_fixed_diagram, cone_diagram, rank_at, zigzag_barcode, Bar, Barcode, PairDiagram,
};
