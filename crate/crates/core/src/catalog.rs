//! Corrector catalogs, required-input-rate records and the Pareto frontier
//! of optimal extracting correctors.
//!
//! A catalog is a JSON-lines file, one code per line:
//!
//! ```text
//! {"name":"golay23","family":"golay","n":23,"k":12,"d":7,"cyclic":true,
//!  "construction":{"gen_poly":"ae3"},"wd_ref":"wd/golay23.wd"}
//! ```
//!
//! `construction` is either `{"gen_poly": hex}` (coefficients low degree
//! first) or `{"generator": [hex rows]}`. `wd_ref` paths are relative to
//! the catalog file.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    solve_h_in_req, BoundKind, DualFormBound, NewBound, OldBound, OutputBound,
};
use crate::error::{Error, Result};
use crate::gf2::{expand_cyclic, BinaryLinearCode, BitMatrix, BitVector};
use crate::weights::{wd_for_code, WdSource, WeightDistribution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    GenPoly(String),
    Generator(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    #[serde(default)]
    pub family: String,
    pub n: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default)]
    pub cyclic: bool,
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wd_ref: Option<String>,
    /// Inline distribution as `[weight, "decimal count"]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wd: Option<Vec<(usize, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl CatalogEntry {
    /// Expands the construction and checks it against the declared
    /// parameters.
    pub fn build_code(&self) -> Result<BinaryLinearCode> {
        let code = match &self.construction {
            Construction::GenPoly(hex) => {
                let poly = BitVector::from_hex_unsized(hex)?;
                expand_cyclic(self.n, &poly)?
            }
            Construction::Generator(rows) => {
                let rows = rows
                    .iter()
                    .map(|r| BitVector::from_hex(r, self.n))
                    .collect::<Result<Vec<_>>>()?;
                let code = BinaryLinearCode::new(BitMatrix::from_rows(self.n, rows)?)?;
                if self.cyclic && !is_shift_invariant(&code) {
                    return Err(Error::Integrity(format!(
                        "{} is flagged cyclic but not invariant under cyclic shift",
                        self.name
                    )));
                }
                code
            }
        };
        if code.k() != self.k {
            return Err(Error::Integrity(format!(
                "{}: construction has dimension {}, declared {}",
                self.name,
                code.k(),
                self.k
            )));
        }
        code.check_no_zero_column()?;
        Ok(code
            .with_name(self.name.clone())
            .with_family(self.family.clone())
            .with_claimed_d(self.d))
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic || matches!(self.construction, Construction::GenPoly(_))
    }
}

fn is_shift_invariant(code: &BinaryLinearCode) -> bool {
    let g = code.generator();
    let n = code.n();
    let mut rows = g.rows().to_vec();
    for r in g.rows() {
        rows.push(BitVector::from_bits((0..n).map(|i| r.get((i + n - 1) % n))));
    }
    BitMatrix::from_rows(n, rows).map(|m| m.rank()).unwrap_or(0) == code.k()
}

/// A validated catalog entry: its code and any ingested distribution.
#[derive(Clone, Debug)]
pub struct Corrector {
    pub entry: CatalogEntry,
    pub code: BinaryLinearCode,
    pub wd: Option<WeightDistribution>,
}

impl Corrector {
    pub fn from_entry(entry: CatalogEntry, base_dir: &Path) -> Result<Self> {
        let code = entry.build_code()?;
        let wd = match (&entry.wd, &entry.wd_ref) {
            (Some(pairs), _) => Some(inline_wd(entry.n, entry.k, pairs)?),
            (None, Some(rel)) => {
                let path = base_dir.join(rel);
                if path.exists() {
                    Some(WeightDistribution::load(&path)?)
                } else {
                    None
                }
            }
            (None, None) => None,
        };
        if let Some(wd) = &wd {
            if wd.n() != entry.n || wd.k() != entry.k {
                return Err(Error::Integrity(format!(
                    "{}: distribution is for [{},{}], code is [{},{}]",
                    entry.name,
                    wd.n(),
                    wd.k(),
                    entry.n,
                    entry.k
                )));
            }
            if let Some(d) = entry.d {
                wd.check_min_distance(d)?;
            }
        }
        Ok(Corrector { entry, code, wd })
    }

    /// Path the entry expects its distribution at, if any.
    pub fn wd_path(&self, base_dir: &Path) -> Option<PathBuf> {
        self.entry.wd_ref.as_ref().map(|r| base_dir.join(r))
    }

    /// The chosen bound for this corrector. The weight-distribution bound
    /// uses the attached table when present, else enumerates within
    /// `max_dim`.
    pub fn bound(&self, kind: BoundKind, max_dim: usize) -> Result<Box<dyn OutputBound + Send + Sync>> {
        match kind {
            BoundKind::OldMinDistance => {
                let d = self.entry.d.ok_or_else(|| {
                    Error::Integrity(format!("{}: no minimum distance for the old bound", self.entry.name))
                })?;
                Ok(Box::new(OldBound::new(self.code.n(), self.code.k(), d)?))
            }
            BoundKind::NewWeightDistribution => {
                let (wd, _) = self.weight_distribution(max_dim)?;
                Ok(Box::new(NewBound::new(&wd, self.code.k())?))
            }
        }
    }

    pub fn weight_distribution(&self, max_dim: usize) -> Result<(WeightDistribution, WdSource)> {
        wd_for_code(&self.code, self.wd.as_ref(), max_dim)
    }

    /// Bound evaluated from the dual distribution, for cross-checking.
    pub fn dual_form_bound(&self, max_dim: usize) -> Result<DualFormBound> {
        let (wd, _) = self.weight_distribution(max_dim)?;
        let dual = crate::weights::macwilliams(&wd, self.code.k())?;
        DualFormBound::new(&dual, self.code.k())
    }
}

fn inline_wd(n: usize, k: usize, pairs: &[(usize, String)]) -> Result<WeightDistribution> {
    let mut counts = vec![num_bigint::BigUint::default(); n + 1];
    for (i, c) in pairs {
        if *i > n {
            return Err(Error::Integrity(format!("inline weight {i} exceeds n = {n}")));
        }
        counts[*i] = c
            .parse()
            .map_err(|e| Error::Integrity(format!("bad inline count {c:?}: {e}")))?;
    }
    WeightDistribution::with_dimension(counts, k)
}

/// Result of reading a catalog: valid correctors plus per-line rejections.
#[derive(Debug, Default)]
pub struct LoadedCatalog {
    pub correctors: Vec<Corrector>,
    pub rejected: Vec<(usize, Error)>,
}

/// Parses catalog text. In strict mode the first invalid entry is fatal.
pub fn parse_catalog(text: &str, base_dir: &Path, strict: bool) -> Result<LoadedCatalog> {
    let mut out = LoadedCatalog::default();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("//") {
            continue;
        }
        let result = serde_json::from_str::<CatalogEntry>(line)
            .map_err(|e| Error::parse(lineno, e.to_string()))
            .and_then(|entry| Corrector::from_entry(entry, base_dir));
        match result {
            Ok(c) => out.correctors.push(c),
            Err(e) if strict => {
                return Err(match e {
                    Error::Parse { .. } => e,
                    other => Error::parse(lineno, other.to_string()),
                })
            }
            Err(e) => out.rejected.push((lineno, e)),
        }
    }
    Ok(out)
}

pub fn load_catalog(path: &Path, strict: bool) -> Result<LoadedCatalog> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_catalog(&text, path.parent().unwrap_or(Path::new(".")), strict)
}

/// Reads a single-code JSON file (same schema as a catalog line).
pub fn load_code(path: &Path) -> Result<Corrector> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_code(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Parses a single-code JSON object; `wd_ref` resolves against `base_dir`.
pub fn parse_code(text: &str, base_dir: &Path) -> Result<Corrector> {
    let entry: CatalogEntry =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    Corrector::from_entry(entry, base_dir)
}

/// One corrector's position in the (rate, required input rate) plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectorRecord {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub cyclic: bool,
    pub rate: f64,
    pub h_in_req: f64,
    /// Bound value at `h_in_req`; at least `k - 1 + h_out1`.
    pub bound_at_req: f64,
    pub bound_kind: BoundKind,
}

impl CorrectorRecord {
    pub fn efficiency_at_req(&self) -> f64 {
        self.bound_at_req / (self.n as f64 * self.h_in_req)
    }

    /// At least as good on both axes and strictly better on one.
    pub fn dominates(&self, other: &CorrectorRecord) -> bool {
        self.rate >= other.rate
            && self.h_in_req <= other.h_in_req
            && (self.rate > other.rate || self.h_in_req < other.h_in_req)
    }
}

impl Serialize for BoundKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug)]
pub struct Skipped {
    pub name: String,
    pub reason: Error,
}

/// Computes `h_in_req` for every corrector the chosen bound can handle.
/// Trivial codes (`k = 0` or `k = n`) and entries lacking the data the
/// bound needs go to the skip list.
pub fn build_records(
    correctors: &[Corrector],
    kind: BoundKind,
    h_out1: f64,
    max_dim: usize,
) -> (Vec<CorrectorRecord>, Vec<Skipped>) {
    let results: Vec<_> = correctors
        .par_iter()
        .map(|c| {
            let (n, k) = (c.code.n(), c.code.k());
            if k == 0 || k == n {
                return Err(Skipped {
                    name: c.entry.name.clone(),
                    reason: Error::OutOfRange(format!("trivial code [{n},{k}]")),
                });
            }
            let bound = c.bound(kind, max_dim).map_err(|reason| Skipped {
                name: c.entry.name.clone(),
                reason,
            })?;
            let req = solve_h_in_req(bound.as_ref(), h_out1).map_err(|reason| Skipped {
                name: c.entry.name.clone(),
                reason,
            })?;
            Ok(CorrectorRecord {
                name: c.entry.name.clone(),
                n,
                k,
                d: c.entry.d,
                cyclic: c.entry.is_cyclic(),
                rate: k as f64 / n as f64,
                h_in_req: req.h_in.value(),
                bound_at_req: bound.total(req.h_in).value(),
                bound_kind: kind,
            })
        })
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(s) => skipped.push(s),
        }
    }
    (records, skipped)
}

/// Records whose required input rate is below the output target.
pub fn appropriate(records: &[CorrectorRecord], h_out1: f64) -> Vec<CorrectorRecord> {
    records
        .iter()
        .filter(|r| r.h_in_req < h_out1)
        .cloned()
        .collect()
}

pub fn cyclic_only(records: &[CorrectorRecord]) -> Vec<CorrectorRecord> {
    records.iter().filter(|r| r.cyclic).cloned().collect()
}

/// Optimal extracting correctors, sorted by ascending `h_in_req` with
/// strictly increasing rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Frontier {
    records: Vec<CorrectorRecord>,
}

impl Frontier {
    pub fn records(&self) -> &[CorrectorRecord] {
        &self.records
    }

    pub fn min_h_in_req(&self) -> f64 {
        self.records[0].h_in_req
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,n,k,d,rate,h_in_req,bound,efficiency_at_req\n");
        for r in &self.records {
            writeln!(
                s,
                "{},{},{},{},{:.9},{:.9},{},{:.9}",
                r.name,
                r.n,
                r.k,
                r.d.map(|d| d.to_string()).unwrap_or_default(),
                r.rate,
                r.h_in_req,
                r.bound_kind,
                r.efficiency_at_req()
            )
            .unwrap();
        }
        s
    }
}

/// A record survives when no other record has a rate at least as high and
/// a requirement at least as low, one of them strictly. Among identical
/// (rate, requirement) pairs the lexicographically smallest name is kept.
pub fn pareto_frontier(records: &[CorrectorRecord]) -> Result<Frontier> {
    if records.is_empty() {
        return Err(Error::Empty("no correctors to build a frontier from"));
    }
    let mut sorted: Vec<&CorrectorRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.h_in_req
            .total_cmp(&b.h_in_req)
            .then(b.rate.total_cmp(&a.rate))
            .then_with(|| a.name.cmp(&b.name))
    });
    let mut out: Vec<CorrectorRecord> = Vec::new();
    let mut best_rate = f64::NEG_INFINITY;
    for r in sorted {
        if r.rate > best_rate {
            best_rate = r.rate;
            out.push(r.clone());
        }
    }
    Ok(Frontier { records: out })
}

/// The frontier record with the largest `h_in_req <= h_in_target`.
pub fn select_for_target(frontier: &Frontier, h_in_target: f64) -> Result<&CorrectorRecord> {
    frontier
        .records
        .iter()
        .take_while(|r| r.h_in_req.partial_cmp(&h_in_target) != Some(Ordering::Greater))
        .last()
        .ok_or(Error::NoUsableCorrector {
            target: h_in_target,
            min_req: frontier.min_h_in_req(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rec(name: &str, rate: f64, req: f64) -> CorrectorRecord {
        CorrectorRecord {
            name: name.into(),
            n: 100,
            k: (rate * 100.0) as usize,
            d: None,
            cyclic: false,
            rate,
            h_in_req: req,
            bound_at_req: 1.0,
            bound_kind: BoundKind::NewWeightDistribution,
        }
    }

    fn names(f: &Frontier) -> Vec<&str> {
        f.records().iter().map(|r| r.name.as_str()).collect()
    }

    #[test]
    fn appropriate_filter() {
        let rs = vec![rec("a", 0.5, 0.9995), rec("b", 0.5, 0.5)];
        let kept = appropriate(&rs, 0.999);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].name, "b");
        assert!(appropriate(&[], 0.999).is_empty());
    }

    #[test]
    fn frontier_basics() {
        let single = vec![rec("a", 0.5, 0.4)];
        assert_eq!(names(&pareto_frontier(&single).unwrap()), vec!["a"]);
        let pair = vec![rec("a", 0.5, 0.4), rec("b", 0.6, 0.3)];
        assert_eq!(names(&pareto_frontier(&pair).unwrap()), vec!["b"]);
        assert!(matches!(pareto_frontier(&[]), Err(Error::Empty(_))));
    }

    #[test]
    fn frontier_five_records() {
        let rs = vec![
            rec("a", 0.2, 0.1),
            rec("b", 0.4, 0.3),
            rec("c", 0.3, 0.35), // dominated by b
            rec("d", 0.7, 0.6),
            rec("e", 0.6, 0.65), // dominated by d
        ];
        let f = pareto_frontier(&rs).unwrap();
        assert_eq!(names(&f), vec!["a", "b", "d"]);
    }

    #[test]
    fn frontier_ties_keep_smallest_name() {
        let rs = vec![rec("zeta", 0.5, 0.4), rec("alpha", 0.5, 0.4), rec("mid", 0.5, 0.45)];
        assert_eq!(names(&pareto_frontier(&rs).unwrap()), vec!["alpha"]);
    }

    #[test]
    fn selection() {
        let f = pareto_frontier(&[rec("lo", 0.6, 0.3), rec("hi", 0.7, 0.45)]).unwrap();
        assert_eq!(select_for_target(&f, 0.5).unwrap().name, "hi");
        assert_eq!(select_for_target(&f, 0.45).unwrap().name, "hi");
        assert_eq!(select_for_target(&f, 0.4).unwrap().name, "lo");
        match select_for_target(&f, 0.2) {
            Err(Error::NoUsableCorrector { min_req, .. }) => assert_eq!(min_req, 0.3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn entry_validation() {
        let base = Path::new(".");
        let ok = r#"{"name":"h74","n":7,"k":4,"d":3,"construction":{"gen_poly":"d"}}"#;
        let rank_def = r#"{"name":"bad","n":3,"k":2,"construction":{"generator":["c","c"]}}"#;
        let bad_wd = r#"{"name":"w","n":3,"k":1,"construction":{"generator":["e"]},"wd":[[0,"1"],[3,"2"]]}"#;
        let zero_col = r#"{"name":"z","n":3,"k":1,"construction":{"generator":["c"]}}"#;
        let text = [ok, rank_def, bad_wd, zero_col].join("\n");
        let loaded = parse_catalog(&text, base, false).unwrap();
        assert_eq!(loaded.correctors.len(), 1);
        assert!(loaded.correctors[0].code.is_cyclic());
        let lines: Vec<usize> = loaded.rejected.iter().map(|(l, _)| *l).collect();
        assert_eq!(lines, vec![2, 3, 4]);
        assert!(matches!(loaded.rejected[0].1, Error::RankDeficient { .. }));
        assert!(matches!(loaded.rejected[1].1, Error::Integrity(_)));
        assert!(matches!(loaded.rejected[2].1, Error::ZeroColumn { column: 2 }));
        assert!(parse_catalog(&text, base, true).is_err());
    }

    #[test]
    fn cyclic_flag_on_generator_rows_is_checked() {
        let base = Path::new(".");
        // generator rows of cyclic Hamming [7,4]: d0, 68, 34, 1a
        let cyc = r#"{"name":"h","n":7,"k":4,"cyclic":true,"construction":{"generator":["d0","68","34","1a"]}}"#;
        assert_eq!(parse_catalog(cyc, base, true).unwrap().correctors.len(), 1);
        let not = r#"{"name":"x","n":4,"k":2,"cyclic":true,"construction":{"generator":["c0","30"]}}"#;
        assert!(parse_catalog(not, base, true).is_err());
    }
}
