//! Seeded random operator generation.
//!
//! Every random draw in the harness comes from a counter-derived ChaCha
//! stream keyed by `(seed, trial, stream)`, so a campaign produces the
//! same operators no matter how trials are scheduled.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{Operator, TracialAlgebra, C64};
use crate::spectral::{eig_hermitian_unchecked, polar, spectral_projection_from};

/// Stream id reserved for the counterexample search.
pub(crate) const STREAM_FALSIFY: u64 = 0xFA15;

/// Deterministic per-trial generator: one independent ChaCha stream per
/// `(seed, trial, stream)` triple.
pub fn trial_rng(seed: u64, trial: u64, stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&stream.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Shapes of random operators the harness can request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    /// Independent standard complex Gaussian entries.
    General,
    /// `(z + z*)/2` of a general draw.
    Hermitian,
    /// `z*z` normalized to unit operator norm.
    Positive,
    /// Spectral projection of a random Hermitian above its median
    /// eigenvalue.
    Projection,
    /// Polar factor of a general draw (Haar unitary).
    Unitary,
    /// Normalized positive plus `0.1 * 1`.
    InvertiblePositive,
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn general(rng: &mut impl Rng, algebra: &TracialAlgebra) -> Operator {
    Operator::from_fn(algebra, |_, _, _| gaussian(rng))
}

/// Draws one operator of the requested kind.
pub fn gen_operator(rng: &mut impl Rng, algebra: &TracialAlgebra, kind: OperatorKind) -> Operator {
    match kind {
        OperatorKind::General => general(rng, algebra),
        OperatorKind::Hermitian => general(rng, algebra).hermitian_part(),
        OperatorKind::Positive => {
            let z = general(rng, algebra);
            let sq = z.adjoint().multiply(&z).expect("same algebra");
            let norm = sq.norm();
            if norm > 0.0 {
                sq.scale_re(1.0 / norm)
            } else {
                Operator::identity(algebra)
            }
        }
        OperatorKind::Projection => {
            let h = general(rng, algebra).hermitian_part();
            let dec = eig_hermitian_unchecked(&h).expect("hermitian by construction");
            let eigs = dec.eigenvalues();
            let median = eigs[eigs.len() / 2];
            spectral_projection_from(&dec, median)
        }
        OperatorKind::Unitary => {
            // A Ginibre draw is almost surely invertible, so the polar
            // factor is a Haar-distributed unitary.
            polar(&general(rng, algebra)).partial_isometry
        }
        OperatorKind::InvertiblePositive => {
            let pos = gen_operator(rng, algebra, OperatorKind::Positive);
            pos.add(&Operator::identity(algebra).scale_re(0.1))
                .expect("same algebra")
        }
    }
}

/// Convenience wrapper fixing the kind-specific stream id.
pub fn gen_for_trial(
    seed: u64,
    trial: u64,
    algebra: &TracialAlgebra,
    kind: OperatorKind,
) -> Operator {
    let stream = match kind {
        OperatorKind::General => 1,
        OperatorKind::Hermitian => 2,
        OperatorKind::Positive => 3,
        OperatorKind::Projection => 4,
        OperatorKind::Unitary => 5,
        OperatorKind::InvertiblePositive => 6,
    };
    let mut rng = trial_rng(seed, trial, stream);
    gen_operator(&mut rng, algebra, kind)
}
