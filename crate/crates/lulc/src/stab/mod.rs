//! The state-transformation pipeline: stabilizer tableaux for the two
//! superpositions of an instance, conversion to graph states, and the
//! local-Clifford equivalence decision.

mod clifford;
mod graph;
mod lc;
mod support;
mod tableau;

pub use clifford::{LocalCliffordLayer, SingleClifford, SitePauli};
pub use graph::{lc_orbit, Graph, GraphError, OrbitResult};
pub use lc::{lc_decide, to_graph_state, LcOptions};
pub use support::SupportState;
pub use tableau::{
    apply_diagonal_phases, tableau_from_instance, PauliGen, StabError, StabilizerTableau,
};
