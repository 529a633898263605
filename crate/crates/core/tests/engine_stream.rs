mod common;

use common::{by_name, random_code, starter};
use lincorr::engine::{apply_block, apply_bytes, apply_cyclic_block, Path};
use lincorr::gf2::BitVector;
use lincorr::oracle::{exact_output_dist, BitProbabilities};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unpack(bytes: &[u8], bits: usize) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
        .take(bits)
        .collect()
}

#[test]
fn biased_stream_matches_exact_output_distribution() {
    let c = by_name(&starter(), "rm1_3");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let total_bits = 1_000_000usize;
    let mut input = vec![0u8; total_bits / 8];
    for byte in input.iter_mut() {
        for b in 0..8 {
            if rng.gen_bool(0.25) {
                *byte |= 1 << b;
            }
        }
    }
    let (out, stats) = apply_bytes(&c.code, &input, Path::Dense).unwrap();
    assert_eq!(stats.blocks, 125_000);
    let bits = unpack(&out, stats.out_bits as usize);
    let mut freq = [0u64; 16];
    for chunk in bits.chunks_exact(4) {
        let v = chunk.iter().fold(0usize, |a, &b| (a << 1) | b as usize);
        freq[v] += 1;
    }
    let observed = *freq.iter().max().unwrap() as f64 / stats.blocks as f64;
    let exact = exact_output_dist(&c.code, &BitProbabilities::iid(8, 0.25).unwrap(), 20)
        .unwrap()
        .max();
    let se = (exact * (1.0 - exact) / stats.blocks as f64).sqrt();
    assert!((observed - exact).abs() <= 5.0 * se, "{observed} vs {exact} (se {se})");
}

#[test]
fn dense_path_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for c in starter().iter().filter(|c| c.code.n() <= 128) {
        let n = c.code.n();
        for _ in 0..100 {
            let a = BitVector::from_bits((0..n).map(|_| rng.gen_bool(0.5)));
            let b = BitVector::from_bits((0..n).map(|_| rng.gen_bool(0.5)));
            let lhs = apply_block(&c.code, &a.xor(&b)).unwrap();
            let rhs = apply_block(&c.code, &a).unwrap().xor(&apply_block(&c.code, &b).unwrap());
            assert_eq!(lhs, rhs, "{}", c.entry.name);
        }
    }
}

#[test]
fn cyclic_path_matches_dense_for_large_bundled_codes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for c in starter().iter().filter(|c| c.code.is_cyclic() && c.code.n() > 16) {
        let n = c.code.n();
        for _ in 0..200 {
            let x = BitVector::from_bits((0..n).map(|_| rng.gen_bool(0.5)));
            assert_eq!(
                apply_cyclic_block(&c.code, &x).unwrap(),
                apply_block(&c.code, &x).unwrap(),
                "{}",
                c.entry.name
            );
        }
    }
}

#[test]
fn stream_of_random_code_equals_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.gen_range(2..40);
        let k = rng.gen_range(1..n);
        let code = random_code(&mut rng, n, k);
        let len = rng.gen_range(0..64);
        let input: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let (out, stats) = apply_bytes(&code, &input, Path::Dense).unwrap();
        let in_bits = unpack(&input, input.len() * 8);
        let expect: Vec<bool> = in_bits
            .chunks_exact(n)
            .flat_map(|ch| apply_block(&code, &BitVector::from_bits(ch.iter().copied())).unwrap().iter().collect::<Vec<_>>())
            .collect();
        assert_eq!(stats.out_bits as usize, expect.len());
        assert_eq!(stats.dropped_bits as usize, in_bits.len() % n);
        assert_eq!(out.len(), expect.len().div_ceil(8));
        assert_eq!(unpack(&out, expect.len()), expect);
    }
}
