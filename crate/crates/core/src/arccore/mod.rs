//! Arc systems, their gluings and the face data of the resulting curves.

mod diagram;
mod gluing;
mod partition;

pub use diagram::{catalan, enumerate_chord_diagrams, ChordDiagram, DiagramError, DyckWords};
pub use gluing::{
    component_count, face_profile, is_meander, minimal_arcs, region_sizes, stratum_of,
    untwisted_is_connected, FaceProfile, GluedPair, GluingError, MinimalArcs,
    PlaneMeanderCandidate, Stratum,
};
pub use partition::{parse_power_token, Partition, PartitionError};

pub(crate) use diagram::pairing_of_word;
