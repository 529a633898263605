//! Exact weight distributions of binary linear codes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::BinaryLinearCode;

/// Default largest dimension enumerated directly.
pub const DEFAULT_MAX_DIM: usize = 28;

/// Codeword counts by Hamming weight: `counts[i]` is `A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    n: usize,
    k: usize,
    counts: Vec<BigUint>,
}

impl WeightDistribution {
    /// Validates `A_0 = 1` and that the counts sum to a power of two `2^k`.
    pub fn new(counts: Vec<BigUint>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Integrity("weight distribution has no entries".into()));
        }
        if !counts[0].is_one() {
            return Err(Error::Integrity(format!("A_0 = {}, expected 1", counts[0])));
        }
        let total: BigUint = counts.iter().sum();
        let k = (total.bits() - 1) as usize;
        if total != BigUint::one() << k {
            return Err(Error::Integrity(format!(
                "counts sum to {total}, not a power of two"
            )));
        }
        Ok(WeightDistribution {
            n: counts.len() - 1,
            k,
            counts,
        })
    }

    /// Like [`new`](Self::new) but also requires the sum to be `2^k`.
    pub fn with_dimension(counts: Vec<BigUint>, k: usize) -> Result<Self> {
        let wd = WeightDistribution::new(counts)?;
        if wd.k != k {
            return Err(Error::Integrity(format!(
                "counts sum to 2^{}, expected 2^{k}",
                wd.k
            )));
        }
        Ok(wd)
    }

    pub fn from_u64(counts: &[u64]) -> Result<Self> {
        WeightDistribution::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Smallest nonzero weight with a nonzero count.
    pub fn min_distance(&self) -> Option<usize> {
        (1..=self.n).find(|&i| !self.counts[i].is_zero())
    }

    /// Checks `A_i = 0` for `0 < i < d`.
    pub fn check_min_distance(&self, d: usize) -> Result<()> {
        match self.min_distance() {
            Some(m) if m < d => Err(Error::Integrity(format!(
                "codeword of weight {m} below claimed minimum distance {d}"
            ))),
            _ => Ok(()),
        }
    }

    /// `(i, log2 A_i)` for every nonzero count.
    pub fn log2_counts(&self) -> Vec<(usize, f64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, log2_biguint(c)))
            .collect()
    }

    /// Parses the text format: `n k` on the first data line, then `i count`
    /// pairs in ascending `i`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `n k` header"))?;
        let mut it = header.split_whitespace();
        let parse_usize = |s: Option<&str>, line: usize, what: &str| -> Result<usize> {
            s.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::parse(line, format!("bad {what}: {e}")))
        };
        let n = parse_usize(it.next(), hline, "n")?;
        let k = parse_usize(it.next(), hline, "k")?;
        if it.next().is_some() || k > n {
            return Err(Error::parse(hline, "header must be `n k` with k <= n"));
        }
        let mut counts = vec![BigUint::zero(); n + 1];
        let mut last: Option<usize> = None;
        for (line, l) in lines {
            let mut it = l.split_whitespace();
            let i = parse_usize(it.next(), line, "weight index")?;
            let c: BigUint = it
                .next()
                .ok_or_else(|| Error::parse(line, "missing count"))?
                .parse()
                .map_err(|e| Error::parse(line, format!("bad count: {e}")))?;
            if it.next().is_some() {
                return Err(Error::parse(line, "expected `i count`"));
            }
            if i > n {
                return Err(Error::parse(line, format!("weight {i} exceeds n = {n}")));
            }
            if last.is_some_and(|p| p >= i) {
                return Err(Error::parse(line, "weights must be strictly ascending"));
            }
            last = Some(i);
            counts[i] = c;
        }
        WeightDistribution::with_dimension(counts, k)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        WeightDistribution::parse(&text)
    }

    /// Text form, zero counts omitted.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.k);
        for (i, c) in self.counts.iter().enumerate() {
            if !c.is_zero() {
                writeln!(s, "{i} {c}").unwrap();
            }
        }
        s
    }
}

pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap_or(f64::INFINITY).log2()
    } else {
        let shift = bits - 64;
        let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.log2() + shift as f64
    }
}

/// Gray-code enumeration of the `2^free` words `base + span(rows)`,
/// tallied by weight. Each step XORs one row and recounts.
fn gray_histogram<const W: usize>(base: &[u64], rows: &[[u64; W]], hist: &mut [u64]) {
    let mut cw = [0u64; W];
    cw[..W].copy_from_slice(&base[..W]);
    let weight = |cw: &[u64; W]| cw.iter().map(|w| w.count_ones() as usize).sum::<usize>();
    hist[weight(&cw)] += 1;
    let steps = 1u64 << rows.len();
    for step in 1..steps {
        let row = &rows[step.trailing_zeros() as usize];
        let mut wt = 0usize;
        for j in 0..W {
            cw[j] ^= row[j];
            wt += cw[j].count_ones() as usize;
        }
        hist[wt] += 1;
    }
}

fn gray_histogram_dyn(base: &[u64], rows: &[Vec<u64>], hist: &mut [u64]) {
    let mut cw = base.to_vec();
    hist[cw.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
    let steps = 1u64 << rows.len();
    for step in 1..steps {
        let row = &rows[step.trailing_zeros() as usize];
        let mut wt = 0usize;
        for (c, r) in cw.iter_mut().zip(row) {
            *c ^= r;
            wt += c.count_ones() as usize;
        }
        hist[wt] += 1;
    }
}

fn block_histogram(n: usize, base: &[u64], rows: &[Vec<u64>]) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    fn fixed<const W: usize>(base: &[u64], rows: &[Vec<u64>], hist: &mut [u64]) {
        let rows: Vec<[u64; W]> = rows
            .iter()
            .map(|r| {
                let mut a = [0u64; W];
                a.copy_from_slice(r);
                a
            })
            .collect();
        gray_histogram::<W>(base, &rows, hist);
    }
    match base.len() {
        1 => fixed::<1>(base, rows, &mut hist),
        2 => fixed::<2>(base, rows, &mut hist),
        3 => fixed::<3>(base, rows, &mut hist),
        4 => fixed::<4>(base, rows, &mut hist),
        8 => fixed::<8>(base, rows, &mut hist),
        _ => gray_histogram_dyn(base, rows, &mut hist),
    }
    hist
}

/// Exact weight distribution by visiting all `2^k` codewords in Gray-code
/// order. The message space is split on its top bits into independent
/// blocks whose histograms are summed.
pub fn enumerate_wd(code: &BinaryLinearCode, max_dim: usize) -> Result<WeightDistribution> {
    let (n, k) = (code.n(), code.k());
    if k > max_dim {
        return Err(Error::DimensionTooLarge { dim: k, max_dim });
    }
    let words = n.div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = code
        .generator()
        .rows()
        .iter()
        .map(|r| {
            let mut w = r.words().to_vec();
            w.resize(words, 0);
            w
        })
        .collect();
    let split = if k >= 20 { 8.min(k) } else { 0 };
    let (low, high) = rows.split_at(k - split);
    let hist = (0u64..1 << split)
        .into_par_iter()
        .map(|prefix| {
            let mut base = vec![0u64; words];
            for (b, row) in high.iter().enumerate() {
                if (prefix >> b) & 1 == 1 {
                    for (x, r) in base.iter_mut().zip(row) {
                        *x ^= r;
                    }
                }
            }
            block_histogram(n, &base, low)
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let counts = hist.into_iter().map(BigUint::from).collect();
    let wd = WeightDistribution::with_dimension(counts, k)?;
    if let Some(d) = code.claimed_d() {
        wd.check_min_distance(d)?;
    }
    Ok(wd)
}

/// Krawtchouk values `K_j(i)` for `j = 0..=n` at fixed `i`, by the
/// three-term recurrence `(j+1) K_{j+1} = (n-2i) K_j - (n-j+1) K_{j-1}`.
pub fn krawtchouk_column(n: usize, i: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::one());
    if n == 0 {
        return out;
    }
    out.push(BigInt::from(n as i64 - 2 * i as i64));
    let a = BigInt::from(n as i64 - 2 * i as i64);
    for j in 1..n {
        let next = (&a * &out[j] - BigInt::from((n - j + 1) as u64) * &out[j - 1]) / BigInt::from((j + 1) as u64);
        out.push(next);
    }
    out
}

/// Dual distribution by the MacWilliams identity,
/// `A⊥_j = 2^-k Σ_i A_i K_j(i)`, in exact integers.
pub fn macwilliams(wd: &WeightDistribution, k: usize) -> Result<WeightDistribution> {
    if wd.k != k {
        return Err(Error::Integrity(format!(
            "distribution sums to 2^{}, expected 2^{k}",
            wd.k
        )));
    }
    let n = wd.n;
    let support: Vec<(usize, BigInt)> = wd
        .counts
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, BigInt::from(c.clone())))
        .collect();
    let columns: Vec<(Vec<BigInt>, &BigInt)> = support
        .par_iter()
        .map(|(i, a)| (krawtchouk_column(n, *i), a))
        .collect();
    let divisor = BigInt::one() << k;
    let mut counts = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let sum: BigInt = columns.iter().map(|(col, a)| *a * &col[j]).sum();
        let (q, r) = sum.div_rem(&divisor);
        if !r.is_zero() {
            return Err(Error::Integrity(format!(
                "MacWilliams sum at weight {j} not divisible by 2^{k}"
            )));
        }
        match q.into_parts() {
            (Sign::Minus, _) => {
                return Err(Error::Integrity(format!(
                    "MacWilliams transform gives a negative count at weight {j}"
                )))
            }
            (_, mag) => counts.push(mag),
        }
    }
    WeightDistribution::with_dimension(counts, n - k)
}

/// Where a distribution came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WdSource {
    Attached,
    Enumerated,
    DualMacWilliams,
}

/// Primal distribution for `code`: the attached table if any, else direct
/// enumeration, else enumeration of the dual followed by MacWilliams.
pub fn wd_for_code(
    code: &BinaryLinearCode,
    attached: Option<&WeightDistribution>,
    max_dim: usize,
) -> Result<(WeightDistribution, WdSource)> {
    let (n, k) = (code.n(), code.k());
    if let Some(wd) = attached {
        if wd.n != n || wd.k != k {
            return Err(Error::Integrity(format!(
                "attached distribution is for [{},{}], code is [{n},{k}]",
                wd.n, wd.k
            )));
        }
        if let Some(d) = code.claimed_d() {
            wd.check_min_distance(d)?;
        }
        return Ok((wd.clone(), WdSource::Attached));
    }
    if k <= max_dim {
        return Ok((enumerate_wd(code, max_dim)?, WdSource::Enumerated));
    }
    if n - k <= max_dim {
        let dual_wd = enumerate_wd(&code.dual()?, max_dim)?;
        let wd = macwilliams(&dual_wd, n - k)?;
        if let Some(d) = code.claimed_d() {
            wd.check_min_distance(d)?;
        }
        return Ok((wd, WdSource::DualMacWilliams));
    }
    Err(Error::NoWeightDistribution { n, k, max_dim })
}
