//! Constructions of long words avoiding the level-3 Zimin word, with the
//! checkers that verify their defining properties.

mod crt;
mod euler;
mod interval;

pub use crt::CrtSchedule;
pub use euler::{
    check_property_p, euler_construct_improved, euler_construct_improved_capped,
    euler_construct_p, euler_construct_p_capped, improved_digraph, plain_digraph, DigraphKind,
    PermDigraph, PropertyPReport, PropertyPViolation, DEFAULT_EDGE_CAP,
};
pub use interval::{random_interval_word, IntervalModel};
