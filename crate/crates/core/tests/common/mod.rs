#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use rbc_core::{FieldElem, FieldSpec, LinearCode, Matrix};

/// All vectors in F^len, in odometer order.
pub fn all_vectors(field: &FieldSpec, len: usize) -> Vec<Vec<FieldElem>> {
    let q = field.order();
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut c| {
            (0..len)
                .map(|_| {
                    let v = FieldElem::from_raw((c % q) as u8);
                    c /= q;
                    v
                })
                .collect()
        })
        .collect()
}

/// Determination by definition: every pair of messages that agree on the
/// codeword positions `repair` must agree on the message positions `requested`.
/// Messages are bucketed by their restricted encoding, which checks all pairs
/// in one pass.
pub fn determines_by_enumeration(code: &LinearCode, requested: &[usize], repair: &[usize]) -> bool {
    let g = code.generator();
    let f = code.field();
    let mut seen: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
    for x in all_vectors(f, code.k()) {
        let key: Vec<u8> = repair
            .iter()
            .map(|&j| (0..code.k()).fold(FieldElem::ZERO, |acc, i| f.add(acc, f.mul(x[i], g.get(i, j)))).value())
            .collect();
        let proj: Vec<u8> = requested.iter().map(|&i| x[i].value()).collect();
        match seen.get(&key) {
            Some(prev) if *prev != proj => return false,
            Some(_) => {}
            None => {
                seen.insert(key, proj);
            }
        }
    }
    true
}

pub fn random_matrix(rng: &mut impl Rng, field: &FieldSpec, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| FieldElem::from_raw(rng.gen_range(0..field.order()) as u8)).collect();
    Matrix::new(field.clone(), rows, cols, data).unwrap()
}

/// Every k×n matrix over GF(2).
pub fn all_binary_codes(k: usize, n: usize) -> Vec<LinearCode> {
    let f = FieldSpec::new(2).unwrap();
    (0u64..1 << (k * n))
        .map(|bits| {
            let data = (0..k * n).map(|b| FieldElem::from_raw((bits >> b & 1) as u8)).collect();
            LinearCode::new(Matrix::new(f.clone(), k, n, data).unwrap())
        })
        .collect()
}

/// Every subset of 0..n, any size.
pub fn power_set(n: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}
