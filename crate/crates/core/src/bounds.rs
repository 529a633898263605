//! Output min-entropy bounds for linear correctors.
//!
//! Both bounds take a lower bound `h_in` on the per-bit min-entropy of
//! independent raw bits and return a lower bound on the total min-entropy
//! of the `k` output bits. With `z = 2^(1 - h_in) - 1`:
//!
//! * minimum-distance bound: `k - log2(1 + z^d 2^k)`
//! * weight-distribution bound: `-log2(2^-k Σ_i A_i z^i)`
//!
//! The weight-distribution series is summed in the log domain because the
//! counts and the powers of `z` span hundreds of binary orders of magnitude.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::weights::WeightDistribution;

/// Terms further than this many bits below the largest one are dropped.
const LOG_SUM_CUTOFF_BITS: f64 = 120.0;

/// Lower end of the bisection bracket for the required input rate.
pub const SOLVER_LOWER: f64 = 1e-12;
const SOLVER_MAX_ITER: usize = 200;

/// Per-bit min-entropy of raw bits, in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MinEntropyRate(f64);

impl MinEntropyRate {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(MinEntropyRate(value))
        } else {
            Err(Error::OutOfRange(format!(
                "min-entropy rate {value} not in (0, 1]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `z = 2^(1-h) - 1`, the per-bit bias term `2δ` of a bit with this
    /// min-entropy.
    pub fn bias_term(self) -> f64 {
        ((1.0 - self.0) * LN_2).exp_m1()
    }

    /// `p = 1 - 2^-h`, the 1-probability of an IID bit with `p < 0.5`.
    pub fn iid_one_probability(self) -> f64 {
        -(-self.0 * LN_2).exp_m1()
    }
}

/// Total min-entropy of a corrector output, in bits.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct TotalMinEntropy(pub f64);

impl TotalMinEntropy {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    OldMinDistance,
    NewWeightDistribution,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::OldMinDistance => "old",
            BoundKind::NewWeightDistribution => "new",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "old" => Ok(BoundKind::OldMinDistance),
            "new" => Ok(BoundKind::NewWeightDistribution),
            other => Err(Error::OutOfRange(format!("unknown bound kind {other:?}"))),
        }
    }
}

/// A lower bound on output min-entropy as a function of the input rate,
/// nondecreasing in `h_in`.
pub trait OutputBound {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn kind(&self) -> BoundKind;
    fn total(&self, h_in: MinEntropyRate) -> TotalMinEntropy;
}

#[derive(Clone, Debug)]
pub struct OldBound {
    n: usize,
    k: usize,
    d: usize,
}

impl OldBound {
    pub fn new(n: usize, k: usize, d: usize) -> Result<Self> {
        if d == 0 || d > n || k > n {
            return Err(Error::OutOfRange(format!(
                "invalid code parameters [{n},{k},{d}]"
            )));
        }
        Ok(OldBound { n, k, d })
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// `log2(1 + 2^x)` without overflow or loss for very negative `x`.
fn log2_1p_exp2(x: f64) -> f64 {
    if x > 60.0 {
        x + (-x).exp2().ln_1p() / LN_2
    } else {
        x.exp2().ln_1p() / LN_2
    }
}

impl OutputBound for OldBound {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn kind(&self) -> BoundKind {
        BoundKind::OldMinDistance
    }

    fn total(&self, h_in: MinEntropyRate) -> TotalMinEntropy {
        let z = h_in.bias_term();
        if z == 0.0 {
            return TotalMinEntropy(self.k as f64);
        }
        let x = self.d as f64 * z.log2() + self.k as f64;
        TotalMinEntropy((self.k as f64 - log2_1p_exp2(x)).clamp(0.0, self.k as f64))
    }
}

/// `max(0, k - log2(1 + z^d 2^k))`.
pub fn old_bound(n: usize, k: usize, d: usize, h_in: MinEntropyRate) -> Result<TotalMinEntropy> {
    Ok(OldBound::new(n, k, d)?.total(h_in))
}

/// `log2 Σ 2^t` over `terms`, anchored at the largest term. The anchor
/// contributes exactly 1 so the remainder goes through `ln_1p`; the
/// remainder itself is a Neumaier-compensated sum.
fn log2_sum_exp2(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let anchor = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if anchor == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut seen_anchor = false;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for t in terms {
        if t == anchor && !seen_anchor {
            seen_anchor = true;
            continue;
        }
        let diff = t - anchor;
        if diff < -LOG_SUM_CUTOFF_BITS {
            continue;
        }
        let v = diff.exp2();
        let s = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - s) + v;
        } else {
            comp += (v - s) + sum;
        }
        sum = s;
    }
    anchor + (sum + comp).ln_1p() / LN_2
}

/// Weight-distribution bound with `log2 A_i` precomputed.
#[derive(Clone, Debug)]
pub struct NewBound {
    n: usize,
    k: usize,
    log_counts: Vec<(usize, f64)>,
}

impl NewBound {
    pub fn new(wd: &WeightDistribution, k: usize) -> Result<Self> {
        if wd.k() != k {
            return Err(Error::Integrity(format!(
                "weight distribution sums to 2^{}, code dimension is {k}",
                wd.k()
            )));
        }
        Ok(NewBound {
            n: wd.n(),
            k,
            log_counts: wd.log2_counts(),
        })
    }
}

impl OutputBound for NewBound {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn kind(&self) -> BoundKind {
        BoundKind::NewWeightDistribution
    }

    fn total(&self, h_in: MinEntropyRate) -> TotalMinEntropy {
        let z = h_in.bias_term();
        let k = self.k as f64;
        if z == 0.0 {
            return TotalMinEntropy(k);
        }
        let log_z = z.log2();
        let terms = self
            .log_counts
            .iter()
            .map(move |&(i, la)| la + i as f64 * log_z - k);
        TotalMinEntropy((-log2_sum_exp2(terms)).clamp(0.0, k))
    }
}

/// `-log2(2^-k Σ_i A_i z^i)` with `z = 2^(1-h_in) - 1`.
pub fn new_bound(wd: &WeightDistribution, k: usize, h_in: MinEntropyRate) -> Result<TotalMinEntropy> {
    Ok(NewBound::new(wd, k)?.total(h_in))
}

/// The same bound evaluated from the dual distribution as the probability
/// of the dual code under IID bits with `p = 1 - 2^-h_in`:
/// `-log2(2^(-n h_in) Σ_i A⊥_i (2^h_in - 1)^i)`.
#[derive(Clone, Debug)]
pub struct DualFormBound {
    n: usize,
    k: usize,
    log_dual_counts: Vec<(usize, f64)>,
}

impl DualFormBound {
    /// `dual_wd` is the distribution of the `[n, n-k]` dual code.
    pub fn new(dual_wd: &WeightDistribution, k: usize) -> Result<Self> {
        let n = dual_wd.n();
        if dual_wd.k() + k != n {
            return Err(Error::Integrity(format!(
                "dual distribution has dimension {}, expected {}",
                dual_wd.k(),
                n as i64 - k as i64
            )));
        }
        Ok(DualFormBound {
            n,
            k,
            log_dual_counts: dual_wd.log2_counts(),
        })
    }
}

impl OutputBound for DualFormBound {
    fn n(&self) -> usize {
        self.n
    }
    fn k(&self) -> usize {
        self.k
    }
    fn kind(&self) -> BoundKind {
        BoundKind::NewWeightDistribution
    }

    fn total(&self, h_in: MinEntropyRate) -> TotalMinEntropy {
        let h = h_in.value();
        let log_w = (h * LN_2).exp_m1().log2();
        let nh = self.n as f64 * h;
        let terms = self
            .log_dual_counts
            .iter()
            .map(move |&(i, la)| la + i as f64 * log_w - nh);
        TotalMinEntropy((-log2_sum_exp2(terms)).clamp(0.0, self.k as f64))
    }
}

/// Required input rate for a target output quality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Requirement {
    pub h_in: MinEntropyRate,
    /// The bound already meets the target at the bottom of the bracket,
    /// so the corrector works at any positive input rate.
    pub below_bracket: bool,
}

/// Total output min-entropy demanded for a per-bit target: every output
/// bit keeps at least `h_out1`, i.e. `k - 1 + h_out1`.
pub fn target_total(k: usize, h_out1: f64) -> f64 {
    k as f64 - 1.0 + h_out1
}

fn check_h_out1(h_out1: f64) -> Result<()> {
    if h_out1 > 0.0 && h_out1 < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("h_out1 {h_out1} not in (0, 1)")))
    }
}

/// Smallest `h_in` whose bound reaches `k - 1 + h_out1`, by bisection on
/// `[1e-12, 1]`. The returned rate always satisfies the target.
pub fn solve_h_in_req(bound: &dyn OutputBound, h_out1: f64) -> Result<Requirement> {
    check_h_out1(h_out1)?;
    let target = target_total(bound.k(), h_out1);
    let eval = |h: f64| bound.total(MinEntropyRate(h)).value();
    let mut lo = SOLVER_LOWER;
    let mut hi = 1.0;
    if eval(lo) >= target {
        return Ok(Requirement {
            h_in: MinEntropyRate(lo),
            below_bracket: true,
        });
    }
    for _ in 0..SOLVER_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Requirement {
        h_in: MinEntropyRate(hi),
        below_bracket: false,
    })
}

/// Extraction efficiency `bound(h_in) / (n h_in)` at a target input rate;
/// fails when the corrector needs more than `h_in` to reach `h_out1`.
pub fn efficiency(bound: &dyn OutputBound, h_out1: f64, h_in: MinEntropyRate) -> Result<f64> {
    let req = solve_h_in_req(bound, h_out1)?;
    if req.h_in.value() > h_in.value() {
        return Err(Error::NotAppropriate {
            h_in: h_in.value(),
            h_in_req: req.h_in.value(),
        });
    }
    Ok(bound.total(h_in).value() / (bound.n() as f64 * h_in.value()))
}
