//! Finite p-groups given by power-commutator presentations.

pub mod cli;
pub mod collect;
pub mod corpus;
pub mod group;
pub mod oracle;
pub mod predicates;
pub mod presentation;
pub mod quotient;
pub mod report;
pub mod subgroup;
pub mod sweep;
pub mod theorems;
pub mod view;
pub mod witness;
pub mod word;

pub use collect::{consistency_check, Collector, ConsistencyReport};
pub use corpus::{build, Family, FamilySpec};
pub use group::{Element, PcError, PcGroup};
pub use presentation::{parse_presentation, PcPresentation};
pub use quotient::{quotient, QuotientGroup};
pub use subgroup::{Characteristic, Subgroup, SubgroupError, SubgroupView};
pub use view::{Elem, GroupView};
pub use witness::Witness;
pub use word::Word;
