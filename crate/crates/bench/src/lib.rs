//! Shared fixtures for the benchmarks.

use rbc_core::{construct_block_rs, construct_mds, construct_repetition, FieldSpec, LinearCode, Matrix, RbcParams};

/// Named codes with the parameters they are benchmarked at.
pub fn verify_fixtures() -> Vec<(&'static str, LinearCode, RbcParams)> {
    let gf2 = FieldSpec::new(2).unwrap();
    let gf8 = FieldSpec::new(8).unwrap();
    let gf5 = FieldSpec::new(5).unwrap();
    vec![
        ("repetition_k4_d2", construct_repetition(&gf2, 4, 2), RbcParams::square(2, 2).unwrap()),
        ("mds_gf8_k4_d3", construct_mds(&gf8, 4, 3).unwrap(), RbcParams::square(4, 3).unwrap()),
        ("blockrs_gf5_k4_d2", construct_block_rs(&gf5, 4, 2, 2).unwrap(), RbcParams::square(2, 2).unwrap()),
    ]
}

/// A dense 8×8 matrix over GF(4).
pub fn rank_fixture() -> Matrix {
    let f = FieldSpec::new(4).unwrap();
    let rows: Vec<Vec<u32>> = (0..8u32).map(|i| (0..8u32).map(|j| (i * 3 + j * j + i * j) % 4).collect()).collect();
    Matrix::from_rows(&f, &rows).unwrap()
}
