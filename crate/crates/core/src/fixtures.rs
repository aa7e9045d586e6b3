//! Published examples, shipped as canonical documents.
//!
//! These are independent of every construction in the crate and are used as
//! golden values.

use crate::document::SpaceDocument;
use crate::magic::SquareArray;
use crate::space::{HeffterSpace, PlainSpace};

pub const EXAMPLE_20: &str = include_str!("../fixtures/example_20_4_3.json");
pub const EXAMPLE_24: &str = include_str!("../fixtures/example_24_4_3.json");
pub const EXAMPLE_40: &str = include_str!("../fixtures/example_40_4_3.json");
pub const EXAMPLE_80: &str = include_str!("../fixtures/example_80_8_3.json");
pub const K4_ONE_FACTORIZATION: &str = include_str!("../fixtures/k4_one_factorization.json");
pub const MARGOSSIAN_4: &str = include_str!("../fixtures/margossian_4.json");
pub const MARGOSSIAN_8: &str = include_str!("../fixtures/margossian_8.json");
pub const FLIPPED_4: &str = include_str!("../fixtures/flipped_4.json");
pub const FLIPPED_8: &str = include_str!("../fixtures/flipped_8.json");

/// Every fixture by file stem.
pub const ALL: [(&str, &str); 9] = [
    ("example_20_4_3", EXAMPLE_20),
    ("example_24_4_3", EXAMPLE_24),
    ("example_40_4_3", EXAMPLE_40),
    ("example_80_8_3", EXAMPLE_80),
    ("k4_one_factorization", K4_ONE_FACTORIZATION),
    ("margossian_4", MARGOSSIAN_4),
    ("margossian_8", MARGOSSIAN_8),
    ("flipped_4", FLIPPED_4),
    ("flipped_8", FLIPPED_8),
];

fn load(text: &str) -> SpaceDocument {
    SpaceDocument::parse(text).expect("shipped fixture parses")
}

/// Shiftable `(20, 4; 3)` Heffter space found by computer.
pub fn example_20() -> HeffterSpace {
    load(EXAMPLE_20).into_heffter().unwrap()
}

/// Shiftable `(24, 4; 3)` Heffter space found by computer.
pub fn example_24() -> HeffterSpace {
    load(EXAMPLE_24).into_heffter().unwrap()
}

/// `example_20 ⋆` the trivial `(2, 1; 3)` space, as printed.
pub fn example_40() -> HeffterSpace {
    load(EXAMPLE_40).into_heffter().unwrap()
}

/// `example_20 ⋆` the one-factorization of `K4`, as printed.
pub fn example_80() -> HeffterSpace {
    load(EXAMPLE_80).into_heffter().unwrap()
}

pub fn k4_one_factorization() -> PlainSpace {
    load(K4_ONE_FACTORIZATION).into_plain().unwrap()
}

pub fn margossian_4() -> SquareArray {
    load(MARGOSSIAN_4).into_square().unwrap()
}

pub fn margossian_8() -> SquareArray {
    load(MARGOSSIAN_8).into_square().unwrap()
}

/// Order-4 Margossian square after the sign flip.
pub fn flipped_4() -> SquareArray {
    load(FLIPPED_4).into_square().unwrap()
}

/// Order-8 Margossian square after the sign flip.
pub fn flipped_8() -> SquareArray {
    load(FLIPPED_8).into_square().unwrap()
}
