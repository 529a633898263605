#![allow(dead_code)]

use std::path::PathBuf;

use lincorr::catalog::{load_catalog, Corrector};
use lincorr::gf2::{BinaryLinearCode, BitMatrix, BitVector};
use num_bigint::BigUint;
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn starter() -> Vec<Corrector> {
    let loaded = load_catalog(&data_dir().join("starter.jsonl"), true).expect("starter catalog");
    loaded.correctors
}

pub fn by_name(cs: &[Corrector], name: &str) -> Corrector {
    cs.iter()
        .find(|c| c.entry.name == name)
        .unwrap_or_else(|| panic!("{name} missing from starter catalog"))
        .clone()
}

/// Random full-rank `k x n` generator with no zero column.
pub fn random_code<R: Rng>(rng: &mut R, n: usize, k: usize) -> BinaryLinearCode {
    loop {
        let rows: Vec<BitVector> = (0..k)
            .map(|_| BitVector::from_bits((0..n).map(|_| rng.gen_bool(0.5))))
            .collect();
        let m = BitMatrix::from_rows(n, rows).unwrap();
        if m.first_zero_column().is_some() {
            continue;
        }
        if let Ok(c) = BinaryLinearCode::new(m) {
            return c;
        }
    }
}

/// Weight histogram by listing every codeword as a sum of generator rows.
pub fn brute_wd(code: &BinaryLinearCode) -> Vec<BigUint> {
    let n = code.n();
    let mut counts = vec![0u64; n + 1];
    let rows = code.generator().rows();
    for m in 0u64..1 << code.k() {
        let mut w = BitVector::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            if (m >> i) & 1 == 1 {
                w.xor_assign(r);
            }
        }
        counts[w.weight()] += 1;
    }
    counts.into_iter().map(BigUint::from).collect()
}

/// Old bound straight from its closed form.
pub fn old_bound_direct(n: usize, k: usize, d: usize, h: f64) -> f64 {
    let _ = n;
    let z = 2f64.powf(1.0 - h) - 1.0;
    (k as f64 - (1.0 + z.powi(d as i32) * 2f64.powi(k as i32)).log2()).max(0.0)
}

pub fn old_efficiency_direct(n: usize, k: usize, d: usize, h: f64) -> f64 {
    old_bound_direct(n, k, d, h) / (n as f64 * h)
}
