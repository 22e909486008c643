//! Exact game solvers and strategy engines: the pebble game with family
//! moves, the Cops-and-Robber edge game (two independent solvers), the
//! high-girth Robber strategy, the path-based Duplicator engine with its
//! adversarial verifier, and a colour refinement oracle.

pub mod cr;
pub mod duplicator;
pub mod girth;
pub mod pebble;
pub mod refine;

pub use cr::{solve_cr_game, solve_cr_game_minimax, CrOutcome};
pub use duplicator::{adversarial_verify, complete, respond, CrOracle, DuplicatorState};
pub use girth::robber_girth_move;
pub use pebble::{solve_pebble_game, BijectionMode, PgConfig, PgOutcome, PgVerdict, Side};
pub use refine::{color_refinement, cr_distinguishes};
