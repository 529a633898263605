//! Exact output distributions of small correctors under independent,
//! possibly non-identically distributed input bits.

use std::fs;
use std::path::Path;

use crate::bounds::{MinEntropyRate, TotalMinEntropy};
use crate::error::{Error, Result};
use crate::gf2::{BinaryLinearCode, BitVector};

/// Default largest `n` the oracle enumerates (2^20 inputs).
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

/// Relative tolerance under which two output masses count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// `probs[i]` is the probability that input bit `i` is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct BitProbabilities {
    probs: Vec<f64>,
}

impl BitProbabilities {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !(0.0..=1.0).contains(*p))
        {
            return Err(Error::OutOfRange(format!(
                "probability {p} at bit {i} not in [0, 1]"
            )));
        }
        Ok(BitProbabilities { probs })
    }

    pub fn iid(n: usize, p: f64) -> Result<Self> {
        BitProbabilities::new(vec![p; n])
    }

    /// One real per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let probs = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .map(|(line, l)| {
                l.parse::<f64>()
                    .map_err(|e| Error::parse(line, format!("bad probability: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        BitProbabilities::new(probs)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        BitProbabilities::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest bias `max_i |0.5 - p_i|`.
    pub fn max_bias(&self) -> f64 {
        self.probs.iter().map(|p| (0.5 - p).abs()).fold(0.0, f64::max)
    }

    /// Per-bit min-entropy lower bound `-log2(0.5 + δ_max)`; fails if some
    /// bit is deterministic.
    pub fn min_entropy_rate(&self) -> Result<MinEntropyRate> {
        MinEntropyRate::new(-(0.5 + self.max_bias()).log2())
    }

    /// The most probable input: bit `i` is 1 iff `p_i >= 0.5`.
    pub fn most_probable_input(&self) -> BitVector {
        BitVector::from_bits(self.probs.iter().map(|&p| p >= 0.5))
    }
}

/// Probability of each of the `2^k` outputs, indexed with output
/// coordinate 0 as the most significant bit.
#[derive(Clone, Debug)]
pub struct OutputDistribution {
    k: usize,
    mass: Vec<f64>,
}

impl OutputDistribution {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.mass.iter().copied().fold(0.0, f64::max)
    }

    /// Indices whose mass is within the tie tolerance of the maximum.
    pub fn maximizers(&self) -> Vec<usize> {
        let max = self.max();
        let floor = max - TIE_TOLERANCE * max;
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m >= floor)
            .map(|(i, _)| i)
            .collect()
    }
}

fn check_size(code: &BinaryLinearCode, probs: &BitProbabilities, limit: usize) -> Result<()> {
    if probs.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: probs.len(),
        });
    }
    if code.n() > limit {
        return Err(Error::DimensionTooLarge {
            dim: code.n(),
            max_dim: limit,
        });
    }
    Ok(())
}

/// Output index contributed by input coordinate `i` (column `i` of G).
fn column_masks(code: &BinaryLinearCode) -> Vec<u64> {
    let g = code.generator();
    (0..code.n()).map(|i| g.column(i).to_msb_u64()).collect()
}

/// Probability and output index of every assignment to `coords`.
fn half_table(coords: &[usize], probs: &[f64], masks: &[u64]) -> (Vec<f64>, Vec<u64>) {
    let size = 1usize << coords.len();
    let mut p = vec![1.0f64; size];
    let mut out = vec![0u64; size];
    for (b, &c) in coords.iter().enumerate() {
        let half = 1usize << b;
        for m in 0..half {
            let base = p[m];
            p[m | half] = base * probs[c];
            p[m] = base * (1.0 - probs[c]);
            out[m | half] = out[m] ^ masks[c];
        }
    }
    (p, out)
}

/// Exact distribution of `G x` by summing the probability of every input.
/// The input is split into two halves whose partial products are
/// tabulated, so each input probability is a product of two table entries.
pub fn exact_output_dist(
    code: &BinaryLinearCode,
    probs: &BitProbabilities,
    limit: usize,
) -> Result<OutputDistribution> {
    check_size(code, probs, limit)?;
    let n = code.n();
    let masks = column_masks(code);
    let low: Vec<usize> = (0..n / 2).collect();
    let high: Vec<usize> = (n / 2..n).collect();
    let (p_low, o_low) = half_table(&low, probs.probs(), &masks);
    let (p_high, o_high) = half_table(&high, probs.probs(), &masks);
    let size = 1usize << code.k();
    let mut sum = vec![0.0f64; size];
    let mut comp = vec![0.0f64; size];
    for (&ph, &oh) in p_high.iter().zip(&o_high) {
        if ph == 0.0 {
            continue;
        }
        for (&pl, &ol) in p_low.iter().zip(&o_low) {
            let v = ph * pl;
            let idx = (ol ^ oh) as usize;
            let s = sum[idx] + v;
            if sum[idx] >= v {
                comp[idx] += (sum[idx] - s) + v;
            } else {
                comp[idx] += (v - s) + sum[idx];
            }
            sum[idx] = s;
        }
    }
    let mass = sum.iter().zip(&comp).map(|(s, c)| s + c).collect();
    Ok(OutputDistribution { k: code.k(), mass })
}

/// `-log2` of the largest output probability.
pub fn exact_min_entropy(dist: &OutputDistribution) -> Result<TotalMinEntropy> {
    let max = dist.max();
    if max <= 0.0 {
        return Err(Error::Integrity("output distribution has no mass".into()));
    }
    Ok(TotalMinEntropy(-max.log2()))
}

/// Whether the output of the most probable input, `G x_max`, is a most
/// probable output. Ties count as success.
pub fn most_probable_coset_check(
    code: &BinaryLinearCode,
    probs: &BitProbabilities,
    limit: usize,
) -> Result<bool> {
    let dist = exact_output_dist(code, probs, limit)?;
    let predicted = code
        .generator()
        .mat_vec(&probs.most_probable_input())?
        .to_msb_u64() as usize;
    Ok(dist.maximizers().contains(&predicted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::new_bound;
    use crate::gf2::{expand_cyclic, BitMatrix};
    use crate::weights::enumerate_wd;

    fn code(rows: &[&str]) -> BinaryLinearCode {
        let rows: Vec<_> = rows.iter().map(|r| BitVector::from_bit_str(r).unwrap()).collect();
        BinaryLinearCode::new(BitMatrix::from_rows(rows[0].len(), rows).unwrap()).unwrap()
    }

    fn hamming74() -> BinaryLinearCode {
        expand_cyclic(7, &BitVector::from_bit_str("1101").unwrap()).unwrap()
    }

    /// Direct sum over all inputs, one product per input.
    fn naive_dist(code: &BinaryLinearCode, probs: &[f64]) -> Vec<f64> {
        let n = code.n();
        let mut mass = vec![0.0; 1 << code.k()];
        for x in 0u64..1 << n {
            let xv = BitVector::from_bits((0..n).map(|i| (x >> i) & 1 == 1));
            let p: f64 = (0..n)
                .map(|i| if xv.get(i) { probs[i] } else { 1.0 - probs[i] })
                .product();
            let y = code.generator().mat_vec(&xv).unwrap().to_msb_u64() as usize;
            mass[y] += p;
        }
        mass
    }

    #[test]
    fn xor_pair() {
        let c = code(&["11"]);
        let d = exact_output_dist(&c, &BitProbabilities::iid(2, 0.25).unwrap(), 20).unwrap();
        assert!((d.mass()[0] - 0.625).abs() < 1e-15);
        assert!((d.mass()[1] - 0.375).abs() < 1e-15);
        let h = exact_min_entropy(&d).unwrap().value();
        assert!((h - 0.678072).abs() < 1e-6);
    }

    #[test]
    fn identity_uniform() {
        let c = BinaryLinearCode::new(BitMatrix::identity(2)).unwrap();
        let d = exact_output_dist(&c, &BitProbabilities::iid(2, 0.5).unwrap(), 20).unwrap();
        assert!(d.mass().iter().all(|&m| (m - 0.25).abs() < 1e-15));
        assert!((exact_min_entropy(&d).unwrap().value() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass_has_zero_entropy() {
        let c = code(&["110", "011"]);
        let d = exact_output_dist(&c, &BitProbabilities::new(vec![1.0, 0.0, 1.0]).unwrap(), 20)
            .unwrap();
        assert_eq!(exact_min_entropy(&d).unwrap().value(), 0.0);
        assert_eq!(d.mass()[0b11], 1.0);
    }

    #[test]
    fn hamming_iid_meets_bound() {
        let c = hamming74();
        let p = 0.3;
        let d = exact_output_dist(&c, &BitProbabilities::iid(7, p).unwrap(), 20).unwrap();
        let wd = enumerate_wd(&c, 28).unwrap();
        let h = MinEntropyRate::new(-(1.0f64 - p).log2()).unwrap();
        let bound = new_bound(&wd, 4, h).unwrap().value();
        assert!((exact_min_entropy(&d).unwrap().value() - bound).abs() < 1e-12);
        assert!((d.max() - (-bound).exp2()).abs() < 1e-15);
    }

    #[test]
    fn split_tables_match_naive_sum() {
        let c = hamming74();
        let probs = vec![0.9, 0.2, 0.35, 0.5, 0.01, 0.7, 0.44];
        let d = exact_output_dist(&c, &BitProbabilities::new(probs.clone()).unwrap(), 20).unwrap();
        for (a, b) in d.mass().iter().zip(naive_dist(&c, &probs)) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn most_probable_coset_examples() {
        let c = hamming74();
        assert!(most_probable_coset_check(&c, &BitProbabilities::iid(7, 0.3).unwrap(), 20).unwrap());
        let p = BitProbabilities::new(vec![0.9, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2]).unwrap();
        assert!(most_probable_coset_check(&c, &p, 20).unwrap());
    }

    #[test]
    fn refuses_large_inputs() {
        let c = hamming74();
        let err = exact_output_dist(&c, &BitProbabilities::iid(7, 0.1).unwrap(), 6).unwrap_err();
        assert!(matches!(err, Error::DimensionTooLarge { dim: 7, max_dim: 6 }));
        assert!(exact_output_dist(&c, &BitProbabilities::iid(6, 0.1).unwrap(), 20).is_err());
    }

    #[test]
    fn probability_file() {
        let p = BitProbabilities::parse("0.1\n# comment\n0.75\n\n0.5\n").unwrap();
        assert_eq!(p.probs(), &[0.1, 0.75, 0.5]);
        assert!(BitProbabilities::parse("0.1\n1.5\n").is_err());
        assert!((p.max_bias() - 0.4).abs() < 1e-15);
        assert_eq!(p.most_probable_input(), BitVector::from_bit_str("011").unwrap());
    }
}
