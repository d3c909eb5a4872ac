//! Enumeration of meanders and pairs of arc systems, their classification
//! by the stratum of the associated pillowcase cover, and exact evaluation
//! of the Masur-Veech constants governing their asymptotic counts.

pub mod arccore;
pub mod census;
pub mod freqlab;
pub mod linvol;
pub mod mvconst;
pub mod planetree;

pub use arccore::{ChordDiagram, FaceProfile, GluedPair, Partition, Stratum};
pub use mvconst::PiExpression;
pub use planetree::{PlaneTree, SeparatrixDiagram};
