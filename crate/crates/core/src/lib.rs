//! Loop groups of neuron networks and their geometry.
//!
//! * [`netgraph`]: networks, spanning trees, feedback loops as words.
//! * [`fpgroup`]: free reduction, conjugacy classes, class enumeration.
//! * [`sl2rep`]: SL(2,C) representations, characters, translation lengths.
//! * [`degeneration`]: rescaled length vectors along diverging families.
//! * [`limitset`]: limit sets of two-generator groups, fits and rendering.
//! * [`dessin`]: subgroup graphs, coset permutations, dessins d'enfants.
//! * [`qnet`]: area states and small statevector circuits.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod degeneration;
pub mod dessin;
pub mod fpgroup;
pub mod limitset;
pub mod netgraph;
pub mod numfmt;
pub mod qnet;
pub mod sl2rep;

pub use fpgroup::{canonical_cyclic, enumerate_classes, ConjugacyClassList, Presentation, Word};
pub use netgraph::{build_network, loop_basis, walk_to_word, LoopBasis, Network, Walk};
pub use sl2rep::{classify, make_rep, moduli_point, morgan_shalen_vector, Matrix2C, Representation};
