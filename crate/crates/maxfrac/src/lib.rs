//! Attractors and invariant measures of iterated function systems whose maps
//! satisfy a max-type generalized contraction condition.
//!
//! The central object is an [`IfsSystem`]: finitely many self-maps of
//! Euclidean space with selection probabilities, a comparison function `phi`,
//! and a depth `p`. The system is admissible when, for all points `x, y`,
//!
//! ```text
//! max over words w of length p of d(f_w(x), f_w(y))
//!     <= phi( max over words v of length < p of d(f_v(x), f_v(y)) )
//! ```
//!
//! where `f_w` denotes the composition of the maps selected by the word `w`
//! (last letter applied first) and the empty word acts as the identity.
//! Under this condition the set map `K -> union of f_i(K)` has a unique
//! compact fixed set (the attractor) and the induced Markov operator on
//! probability measures has a unique invariant measure; both arise as limits
//! of Picard iterates from arbitrary starting data.
//!
//! The crate provides:
//!
//! * finite point-set geometry: [`Point`], [`PointCloud`], Hausdorff
//!   distance ([`hausdorff`]) and diameter ([`diameter`]);
//! * comparison functions ([`ComparisonFn`]) with iterate and admissibility
//!   checks;
//! * finite words over the map alphabet ([`Word`]), enumeration and
//!   composition;
//! * the contraction verifier ([`verify_phi_max`]), the set-level fractal
//!   operator ([`fractal_step`], [`attractor`], [`absorbing_hull`]);
//! * discrete measures ([`DiscreteMeasure`]), the Markov operator
//!   ([`markov_step`], [`markov_iterate`], [`invariant_measure`]), its dual
//!   acting on test functions ([`dual_apply`], [`dual_iterate`]), oscillation
//!   and contraction profiles, and the chaos game;
//! * exact 1-Wasserstein distance between discrete measures
//!   ([`wasserstein1`], [`wasserstein1_1d`]) with transport plan and dual
//!   potentials, McShane extension of Lipschitz data ([`mcshane_extend`]),
//!   and measure embedding ([`embed`]).
//!
//! All randomized routines take explicit `u64` seeds and use a fixed,
//! portable generator (ChaCha8), so every result is reproducible bit for bit.

pub mod comparison;
pub mod dual;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod numeric;
pub mod system;
pub mod transport;
pub mod words;

pub use comparison::{check_comparison, ComparisonFn, ComparisonReport};
pub use dual::{
    contraction_profile, dual_apply, dual_apply_n, dual_envelope, dual_iterate, oscillation,
    DualApplied, EnvelopeRow, Evaluable, ProfileResult, TestFunction, INEQUALITY_ETA,
};
pub use error::{Error, Result};
pub use geometry::{diameter, distance, hausdorff, Point, PointCloud, DEDUP_TOL};
pub use measure::{
    chaos_game, integrate, invariant_measure, markov_iterate, markov_step, moments,
    DiscreteMeasure, InvariantRun, MarkovRun, Moments, PrunePolicy, ATOM_CAP,
};
pub use system::{
    absorbing_hull, attractor, compose, fractal_step, verify_phi_max, AttractorRun, HullResult,
    IfsSystem, MapSpec, VerifyReport, VerifyWitness,
};
pub use transport::{
    embed, mcshane_extend, wasserstein1, wasserstein1_1d, LipExtension, TransportPlan,
    TRANSPORT_ATOM_CAP,
};
pub use words::{enumerate_prefix_words, enumerate_words, for_each_word, word_probability, Word};
