//! Applying a corrector to raw bits: dense block multiply, a shift-register
//! path for cyclic codes, and byte-stream processing.

use std::io::{self, BufReader, BufWriter, ErrorKind, Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BinaryLinearCode, BitVector};

/// `y = G x`.
pub fn apply_block(code: &BinaryLinearCode, x: &BitVector) -> Result<BitVector> {
    code.generator().mat_vec(x)
}

/// `y = G x` for a cyclic code, computed bit-serially. The input shifts
/// through a register of `deg g + 1` cells; once the register is full,
/// each further step taps the cells selected by `g` and emits their
/// parity, giving `y_i = sum_m g_m x_{i+m}`.
pub fn apply_cyclic_block(code: &BinaryLinearCode, x: &BitVector) -> Result<BitVector> {
    let g = code.cyclic_gen_poly().ok_or(Error::NotCyclic)?;
    if x.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: x.len(),
        });
    }
    let mut reg = ShiftRegister::new(g);
    let mut y = BitVector::zeros(code.k());
    let mut out = 0;
    for bit in x.iter() {
        if let Some(parity) = reg.push(bit) {
            y.set(out, parity);
            out += 1;
        }
    }
    debug_assert_eq!(out, code.k());
    Ok(y)
}

struct ShiftRegister {
    cells: Vec<u64>,
    taps: Vec<u64>,
    len: usize,
    filled: usize,
}

impl ShiftRegister {
    fn new(g: &BitVector) -> Self {
        let len = g.len();
        ShiftRegister {
            cells: vec![0; len.div_ceil(64)],
            taps: g.words().to_vec(),
            len,
            filled: 0,
        }
    }

    /// Cell `m` holds the bit pushed `len - 1 - m` steps ago.
    fn push(&mut self, bit: bool) -> Option<bool> {
        let w = self.cells.len();
        for j in 0..w {
            let carry = if j + 1 < w { self.cells[j + 1] << 63 } else { 0 };
            self.cells[j] = (self.cells[j] >> 1) | carry;
        }
        if bit {
            let top = self.len - 1;
            self.cells[top / 64] |= 1 << (top % 64);
        }
        self.filled += 1;
        if self.filled < self.len {
            return None;
        }
        let ones: u32 = self
            .cells
            .iter()
            .zip(&self.taps)
            .map(|(c, t)| (c & t).count_ones())
            .sum();
        Some(ones & 1 == 1)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StreamStats {
    pub blocks: u64,
    pub in_bits: u64,
    pub out_bits: u64,
    pub dropped_bits: u64,
}

impl StreamStats {
    /// Input bits consumed per output bit, `n / k` for any nonempty run.
    pub fn throughput_reduction(&self) -> Option<f64> {
        (self.out_bits > 0)
            .then(|| (self.in_bits - self.dropped_bits) as f64 / self.out_bits as f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("stats serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Path {
    Dense,
    Cyclic,
}

struct BitSink<W: Write> {
    out: W,
    byte: u8,
    used: u8,
}

impl<W: Write> BitSink<W> {
    fn push(&mut self, bit: bool) -> io::Result<()> {
        self.byte |= (bit as u8) << (7 - self.used);
        self.used += 1;
        if self.used == 8 {
            self.out.write_all(&[self.byte])?;
            self.byte = 0;
            self.used = 0;
        }
        Ok(())
    }

    fn finish(mut self) -> io::Result<()> {
        if self.used > 0 {
            self.out.write_all(&[self.byte])?;
        }
        self.out.flush()
    }
}

/// Streams bytes through the corrector. Input bits are read MSB first;
/// each `n` bits produce `k` output bits, packed MSB first with the last
/// byte zero-padded. A trailing partial block is dropped.
pub fn apply_stream<R: Read, W: Write>(
    code: &BinaryLinearCode,
    reader: R,
    writer: W,
    path: Path,
) -> Result<StreamStats> {
    if path == Path::Cyclic && !code.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let n = code.n();
    let mut reader = BufReader::new(reader);
    let mut sink = BitSink {
        out: BufWriter::new(writer),
        byte: 0,
        used: 0,
    };
    let mut stats = StreamStats::default();
    let mut block = BitVector::zeros(n);
    let mut fill = 0usize;
    let mut buf = [0u8; 1 << 16];
    loop {
        let got = match reader.read(&mut buf) {
            Ok(0) => break,
            Ok(g) => g,
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(Error::io(format!("reading input at byte {}", stats.in_bits / 8), e)),
        };
        for &byte in &buf[..got] {
            for b in (0..8).rev() {
                block.set(fill, (byte >> b) & 1 == 1);
                fill += 1;
                if fill == n {
                    let y = match path {
                        Path::Dense => apply_block(code, &block)?,
                        Path::Cyclic => apply_cyclic_block(code, &block)?,
                    };
                    for bit in y.iter() {
                        sink.push(bit).map_err(|e| Error::io("writing output", e))?;
                    }
                    stats.blocks += 1;
                    stats.out_bits += y.len() as u64;
                    fill = 0;
                }
            }
        }
        stats.in_bits += 8 * got as u64;
    }
    stats.dropped_bits = fill as u64;
    sink.finish().map_err(|e| Error::io("writing output", e))?;
    Ok(stats)
}

/// Convenience wrapper over in-memory buffers.
pub fn apply_bytes(code: &BinaryLinearCode, input: &[u8], path: Path) -> Result<(Vec<u8>, StreamStats)> {
    let mut out = Vec::new();
    let stats = apply_stream(code, input, &mut out, path)?;
    Ok((out, stats))
}
