//! End-to-end constructions.
//!
//! Where `gadget` holds single-relation schemas, this module assembles
//! them into complete artifacts: the positional-structure gadgets shared
//! by the larger builds, a two-universal combinatorial sentence taken all
//! the way to one prefixed polynomial equation in 138 unknowns, and a
//! termination sentence whose variable ledger is reconciled against a
//! 181-unknown reference display.

pub mod goodstein;
pub mod hereditary;
pub mod ph2;

pub use goodstein::{
    build_goodstein, GoodsteinArtifacts, GOODSTEIN_BUILT_CENSUS, GOODSTEIN_DISPLAY_CENSUS,
    GOODSTEIN_PARAMS,
};
pub use hereditary::{g_disjunction, g_elem, g_hp};
pub use ph2::{build_ph2, Ph2Artifacts, PH2_PARAMS};
