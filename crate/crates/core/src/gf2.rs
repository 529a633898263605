//! Bit-packed GF(2) vectors, matrices and binary linear codes.
//!
//! Coordinate `i` of a [`BitVector`] lives in bit `i % 64` of word `i / 64`.
//! In hex form coordinate 0 is the most significant bit of the first hex
//! digit, and the last digit is right-padded with zero bits.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = BitVector::zeros(0);
        for b in bits {
            if v.len.is_multiple_of(WORD) {
                v.words.push(0);
            }
            if b {
                v.words[v.len / WORD] |= 1 << (v.len % WORD);
            }
            v.len += 1;
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse(0, format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitVector::from_bits)
    }

    /// Builds a vector from words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = BitVector { len, words };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// GF(2) inner product: parity of the bitwise AND.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Index of the highest set coordinate.
    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD + 63 - w.leading_zeros() as usize)
    }

    /// Copy resized to `len` coordinates, truncating or zero-extending.
    pub fn resized(&self, len: usize) -> BitVector {
        BitVector::from_words(len, self.words.clone())
    }

    /// Value with coordinate 0 as the most significant bit. Requires `len <= 64`.
    pub fn to_msb_u64(&self) -> u64 {
        assert!(self.len <= 64, "vector too long for u64 encoding");
        self.iter().fold(0u64, |acc, b| (acc << 1) | b as u64)
    }

    pub fn from_msb_u64(len: usize, value: u64) -> BitVector {
        assert!(len <= 64);
        BitVector::from_bits((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1))
    }

    pub fn to_hex(&self) -> String {
        const DIGITS: &[u8; 16] = b"0123456789abcdef";
        let nibbles = self.len.div_ceil(4);
        let mut s = String::with_capacity(nibbles);
        for q in 0..nibbles {
            let mut v = 0u8;
            for b in 0..4 {
                let i = 4 * q + b;
                v <<= 1;
                if i < self.len && self.get(i) {
                    v |= 1;
                }
            }
            s.push(DIGITS[v as usize] as char);
        }
        s
    }

    /// Parses the hex form; `len` fixes the number of coordinates and the
    /// padding bits must be zero.
    pub fn from_hex(s: &str, len: usize) -> Result<BitVector> {
        let s = s.trim();
        let nibbles = len.div_ceil(4);
        if s.len() != nibbles {
            return Err(Error::parse(
                0,
                format!("hex string has {} digits, expected {nibbles} for {len} bits", s.len()),
            ));
        }
        let mut v = BitVector::zeros(len);
        for (q, c) in s.chars().enumerate() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::parse(0, format!("invalid hex digit {c:?}")))?;
            for b in 0..4 {
                let i = 4 * q + b;
                let bit = (d >> (3 - b)) & 1 == 1;
                if i < len {
                    v.set(i, bit);
                } else if bit {
                    return Err(Error::parse(0, "nonzero padding bits in hex string"));
                }
            }
        }
        Ok(v)
    }

    /// Parses hex without a fixed length: `4 * digits` coordinates.
    pub fn from_hex_unsized(s: &str) -> Result<BitVector> {
        let s = s.trim();
        BitVector::from_hex(s, 4 * s.len())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BitMatrix")
            .field("rows", &self.rows.len())
            .field("cols", &self.cols)
            .finish()
    }
}

impl BitMatrix {
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
        }
        Ok(BitMatrix { cols, rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = BitVector::zeros(n);
                r.set(i, true);
                r
            })
            .collect();
        BitMatrix { cols: n, rows }
    }

    pub fn empty(cols: usize) -> Self {
        BitMatrix { cols, rows: vec![] }
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    /// Column `c` as a vector of length `num_rows`.
    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(c)))
    }

    pub fn mat_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok(BitVector::from_bits(self.rows.iter().map(|r| r.dot(x))))
    }

    /// Reduced row-echelon form (zero rows dropped) and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            if top == rows.len() {
                break;
            }
            let Some(p) = (top..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(top, p);
            let pivot_row = rows[top].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != top && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            top += 1;
        }
        rows.truncate(top);
        (
            BitMatrix {
                cols: self.cols,
                rows,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {x : M x = 0}.
    pub fn null_space(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (row, &p) in r.rows.iter().zip(&pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix {
            cols: self.cols,
            rows: basis,
        }
    }

    pub fn first_zero_column(&self) -> Option<usize> {
        let mut any = BitVector::zeros(self.cols);
        for r in &self.rows {
            for (a, b) in any.words.iter_mut().zip(&r.words) {
                *a |= b;
            }
        }
        (0..self.cols).find(|&c| !any.get(c))
    }
}

/// Free-function form of [`BitMatrix::rank`].
pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

/// Free-function form of [`BitMatrix::mat_vec`].
pub fn mat_vec(g: &BitMatrix, x: &BitVector) -> Result<BitVector> {
    g.mat_vec(x)
}

/// An `[n, k]` binary linear code given by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct BinaryLinearCode {
    n: usize,
    k: usize,
    gen: BitMatrix,
    claimed_d: Option<usize>,
    name: String,
    family: String,
    cyclic_gen_poly: Option<BitVector>,
}

impl BinaryLinearCode {
    /// Wraps a generator matrix; fails unless it has full row rank.
    pub fn new(gen: BitMatrix) -> Result<Self> {
        let rank = gen.rank();
        if rank != gen.num_rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: gen.num_rows(),
            });
        }
        Ok(BinaryLinearCode {
            n: gen.num_cols(),
            k: gen.num_rows(),
            gen,
            claimed_d: None,
            name: String::new(),
            family: String::new(),
            cyclic_gen_poly: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_family(mut self, family: impl Into<String>) -> Self {
        self.family = family.into();
        self
    }

    pub fn with_claimed_d(mut self, d: Option<usize>) -> Self {
        self.claimed_d = d;
        self
    }

    /// Rejects generators with an all-zero column: such a coordinate never
    /// influences the output.
    pub fn check_no_zero_column(&self) -> Result<()> {
        match self.gen.first_zero_column() {
            Some(column) if self.k > 0 => Err(Error::ZeroColumn { column }),
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn generator(&self) -> &BitMatrix {
        &self.gen
    }
    pub fn claimed_d(&self) -> Option<usize> {
        self.claimed_d
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn family(&self) -> &str {
        &self.family
    }
    pub fn cyclic_gen_poly(&self) -> Option<&BitVector> {
        self.cyclic_gen_poly.as_ref()
    }
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_gen_poly.is_some()
    }
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Generator in reduced row-echelon form; equal for equal codeword sets.
    pub fn canonical_generator(&self) -> BitMatrix {
        self.gen.rref().0
    }

    pub fn same_codewords(&self, other: &BinaryLinearCode) -> bool {
        self.n == other.n && self.k == other.k && self.canonical_generator() == other.canonical_generator()
    }

    /// Encodes a `k`-bit message as `m · G`.
    pub fn encode(&self, message: &BitVector) -> Result<BitVector> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        let mut c = BitVector::zeros(self.n);
        for i in message.ones() {
            c.xor_assign(self.gen.row(i));
        }
        Ok(c)
    }

    /// All `2^k` codewords; only sensible for small `k`.
    pub fn codewords(&self) -> Vec<BitVector> {
        assert!(self.k < 32, "refusing to list 2^{} codewords", self.k);
        let mut out = Vec::with_capacity(1 << self.k);
        let mut c = BitVector::zeros(self.n);
        out.push(c.clone());
        for step in 1u64..(1u64 << self.k) {
            c.xor_assign(self.gen.row(step.trailing_zeros() as usize));
            out.push(c.clone());
        }
        out
    }

    /// The `[n, n-k]` dual code, generated by a parity-check matrix of `self`.
    pub fn dual(&self) -> Result<BinaryLinearCode> {
        let h = self.gen.null_space();
        let name = if self.name.is_empty() {
            String::new()
        } else {
            format!("dual({})", self.name)
        };
        Ok(BinaryLinearCode::new(h)?.with_name(name))
    }
}

pub fn dual(c: &BinaryLinearCode) -> Result<BinaryLinearCode> {
    c.dual()
}

/// Polynomial remainder over GF(2); coefficient `i` is coordinate `i`.
fn poly_rem(num: &BitVector, den: &BitVector, den_deg: usize) -> BitVector {
    let mut r = num.clone();
    while let Some(top) = r.last_one() {
        if top < den_deg {
            break;
        }
        let shift = top - den_deg;
        for i in den.ones() {
            r.flip(i + shift);
        }
    }
    r
}

/// Cyclic code of length `n` generated by `gen_poly` (coefficients
/// low-degree first). Rows are `x^i g(x)` for `i = 0..k`.
pub fn expand_cyclic(n: usize, gen_poly: &BitVector) -> Result<BinaryLinearCode> {
    let degree = gen_poly.last_one().ok_or(Error::ZeroPolynomial)?;
    if degree > n {
        return Err(Error::NotCyclicDivisor { n, degree });
    }
    let g = gen_poly.resized(degree + 1);
    let mut x_n_plus_1 = BitVector::zeros(n + 1);
    x_n_plus_1.set(0, true);
    x_n_plus_1.set(n, true);
    if !poly_rem(&x_n_plus_1, &g, degree).is_zero() {
        return Err(Error::NotCyclicDivisor { n, degree });
    }
    let k = n - degree;
    let rows = (0..k)
        .map(|shift| {
            let mut r = BitVector::zeros(n);
            for i in g.ones() {
                r.set(i + shift, true);
            }
            r
        })
        .collect();
    let mut code = BinaryLinearCode::new(BitMatrix::from_rows(n, rows)?)?;
    code.cyclic_gen_poly = Some(g);
    Ok(code)
}
