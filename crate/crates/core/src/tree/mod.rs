//! Tree automorphisms given by finite-state wreath recursions.

mod alphabet;
mod dsl;
mod element;
mod level;
mod machine;

pub use alphabet::{Alphabet, LevelPerm, Vertex};
pub use dsl::{parse_machine, write_machine};
pub use element::{Element, DEFAULT_LEVEL_CAP};
pub use level::LevelActions;
pub use machine::{free_reduce, inverse_word, Letter, Machine, State, StateId, Word};
