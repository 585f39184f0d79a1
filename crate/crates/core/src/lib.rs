//! Linking-number and parity invariants of virtual, flat and free knots
//! given by Gauss codes.

pub mod canonical;
pub mod eta;
pub mod gauss;
pub mod linking;
pub mod poly;
pub mod reidemeister;

pub use canonical::{canonical_key, equal_flat, reduce, CanonicalKey, Identification, DEFAULT_DEPTH};
pub use eta::{eta, eta_iterate, eta_long, parity_pairs, phrase_parity, smooth_pair, EtaError, FormalSum, LongTerm};
pub use gauss::{
    flatten, forget_arrows, virtualize, ChordDiagram, Crossing, Decoration, End, FlatGaussCode, Flavor, FreeGaussCode,
    GaussCode, GaussError, GaussPhrase, Label, Parity, Passage, PhraseKind, Sign, Symbol, VirtualGaussCode,
};
pub use linking::{
    gaussian_parity, invariant_bundle, l_prime, l_virtual, linking_number, oriented_parity, vertical_smooth, writhe,
    Component, InvariantBundle, TwoComponentState,
};
pub use poly::Poly;
pub use reidemeister::{apply_move, enumerate_moves, random_walk, MoveDescriptor, MoveError, MoveKind, Walk};
