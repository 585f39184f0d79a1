//! Pinned codes. The figure-derived ones were reconstructed by exhaustive
//! search for diagrams with the stated crossing data.
#![allow(dead_code)]

/// Right-handed classical trefoil.
pub const TREFOIL: &str = "O1+U2+O3+U1+O2+U3+";
/// Left-handed trefoil read off the (2,3) torus curve.
pub const LEFT_TREFOIL: &str = "U1-O2-U3-O1-U2-O3-";
/// Classical figure eight read off a Lissajous-type space curve.
pub const FIGURE_EIGHT: &str = "O1-U2+O3+U1-O4-U3+O2+U4-";

pub const VIRTUAL_TREFOIL: &str = "O1-O2-U1-U2-";
/// Three crossings, two of index 1 (both negative), one of index 2 (positive).
pub const VIRTUAL_FIGURE_EIGHT: &str = "O1-U2+U1-U3-O2+O3-";
/// Four crossings, connected intersection graph, every index zero.
pub const MIYAZAWA: &str = "U1-U2-O1-U3+O2-U4+O3+O4+";
/// Four crossings, index profile a_1 = 0, a_2 = 1.
pub const GREEN_4_35: &str = "O1-U2-U1-U3+O2-U4+O3+O4+";
/// Three crossings with a_0 - w = -2, a_1 = 2.
pub const INDEX_TWO_EXAMPLE: &str = "O1+U2-U1+O3+O2-U3+";
/// Six negative crossings, two of index 1 and four of index 3.
pub const PRETZEL: &str = "O1-O2-U1-U3-U4-U2-U5-U6-O4-O3-O5-O6-";
/// Chord 1 meets five chords: three positively with sign +, two negatively
/// with signs + and -.
pub const ODD_CHORD: &str = "U1+O2+O3+O4+U5+U6-O1+U2+U3+U4+O5+O6-";
/// Six chords whose opposite-parity intersecting pairs are
/// (1,2), (1,3), (4,6), (5,6).
pub const TWO_TERM_FLAT: &str = "H1 H3 H2 T1 T5 T6 H5 H4 H6 T3 T2 T4";

/// Twenty steps from `TREFOIL` with seed 7 over all move kinds.
pub const TREFOIL_WALK_SEED: u64 = 7;
pub const TREFOIL_WALK_END: &str = "O7+O8-O1+U6+O9-O10+O6+U2+O3+U1+U7+U8-U9-U10+O2+U3+";
