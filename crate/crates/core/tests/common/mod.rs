#![allow(dead_code)]

use flab::fl_module::{FLModule, LData};
use flab::pairing::{standard_gram, PairedFLModule, Symmetry};
use flab::ring::{make_ring, Family};

/// Rank 2 symplectic module over `F_p` with weights (0, 1), `Φ = 1` and the
/// standard pairing.
pub fn pcanon2(p: u64) -> PairedFLModule {
    let k = make_ring(Family::Witt, p, 1, 1).unwrap();
    PairedFLModule {
        module: FLModule::from_ints(&k, (0, 1), &[0, 1], &[&[1, 0], &[0, 1]]),
        l: LData::trivial(&k, vec![1]),
        symmetry: Symmetry::Symplectic,
        gram: vec![standard_gram(&k, 2, Symmetry::Symplectic)],
    }
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
