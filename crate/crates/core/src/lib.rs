//! Construction, composition, verification and search of shiftable Heffter
//! spaces.
//!
//! * [`space`]: blocks, Heffter systems and spaces, plain resolvable spaces,
//!   and their validators.
//! * [`magic`]: broken diagonals and Margossian pandiagonal magic squares.
//! * [`netbuild`]: shiftable `(n², n; 3)` spaces from sign-flipped
//!   Margossian squares, `n ≡ 0 (mod 4)`.
//! * [`compose`]: the ⋆ product and the `(16ℓ²mn, 4ℓn; 3)` pipeline.
//! * [`search`]: exact search for small shiftable spaces.
//! * [`document`]: the canonical text format shared with the CLI.

pub mod compose;
pub mod document;
mod error;
pub mod fixtures;
pub mod magic;
pub mod netbuild;
pub mod report;
pub mod search;
pub mod space;

pub use compose::{pipeline_space, plain_space_3, star_compose, trivial_space};
pub use document::{DocumentKind, DocumentObject, SpaceDocument};
pub use error::{Error, Result};
pub use magic::{is_margossian, margossian_square, MagicSquare, SquareArray};
pub use netbuild::{flip_mask, heffter_net, net_space_from_array, sign_flip, FlipMask};
pub use report::{Check, Report, Witness};
pub use search::{search_heffter_space, SearchMode, SearchOutcome, SearchProblem, SearchStatus};
pub use space::{Block, HeffterArrayView, HeffterSpace, HeffterSystem, PlainSpace};
