//! File formats: JSON schemas for sequences, measures, solve reports and
//! quadrature rules, plus CSV ingestion for spreadsheet-born moment data.
//!
//! JSON is canonical. All rational values travel as strings — `"p/q"`,
//! integers, or decimals — and parse exactly; nothing is stored through
//! floating point. CSV carries one `i1,...,id,value` row per moment (for
//! measures, `x1,...,xd,density` per atom) with no header row.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use moment_core::solver::{CompletionReport, SolveReport};
use moment_core::{
    format_rational, parse_rational, rational_to_f64, MomentSequence, MultiIndex,
    PartialMomentSequence, QuadratureRule, Rational, SignedMeasure,
};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Sequences
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SequenceFile {
    pub dimension: usize,
    pub degree: u32,
    pub entries: Vec<SequenceEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SequenceEntry {
    pub index: Vec<u32>,
    pub value: String,
}

impl SequenceFile {
    pub fn from_partial(seq: &PartialMomentSequence) -> Self {
        SequenceFile {
            dimension: seq.dimension(),
            degree: seq.degree(),
            entries: seq
                .iter()
                .map(|(index, value)| SequenceEntry {
                    index: index.exponents().to_vec(),
                    value: format_rational(value),
                })
                .collect(),
        }
    }

    pub fn from_sequence(seq: &MomentSequence) -> Self {
        Self::from_partial(&PartialMomentSequence::from_complete(seq))
    }

    pub fn to_partial(&self) -> Result<PartialMomentSequence> {
        if self.dimension == 0 {
            bail!("sequence dimension must be at least 1");
        }
        let mut entries: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for entry in &self.entries {
            if entry.index.len() != self.dimension {
                bail!(
                    "index {:?} does not match dimension {}",
                    entry.index,
                    self.dimension
                );
            }
            let index = MultiIndex::new(entry.index.clone());
            let value = parse_rational(&entry.value)
                .with_context(|| format!("entry {:?}", entry.index))?;
            if entries.insert(index, value).is_some() {
                bail!("duplicate entry for index {:?}", entry.index);
            }
        }
        PartialMomentSequence::new(self.dimension, self.degree, entries)
            .map_err(|e| anyhow!("{e}"))
    }
}

/// Reads a sequence from JSON, or from CSV when the extension is `.csv`.
pub fn read_sequence(path: &Path) -> Result<PartialMomentSequence> {
    if is_csv(path) {
        return read_sequence_csv(path);
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SequenceFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_partial()
}

fn read_sequence_csv(path: &Path) -> Result<PartialMomentSequence> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut entries: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    let mut dimension = None;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() < 2 {
            bail!("row {}: need i1,...,id,value", line + 1);
        }
        let d = record.len() - 1;
        if *dimension.get_or_insert(d) != d {
            bail!("row {}: inconsistent column count", line + 1);
        }
        let mut exps = Vec::with_capacity(d);
        for k in 0..d {
            exps.push(
                record[k]
                    .parse::<u32>()
                    .with_context(|| format!("row {}: exponent {:?}", line + 1, &record[k]))?,
            );
        }
        let value =
            parse_rational(&record[d]).with_context(|| format!("row {} value", line + 1))?;
        if entries.insert(MultiIndex::new(exps), value).is_some() {
            bail!("row {}: duplicate index", line + 1);
        }
    }
    let dimension = dimension.ok_or_else(|| anyhow!("empty CSV sequence"))?;
    let degree = entries
        .keys()
        .map(MultiIndex::total_degree)
        .max()
        .unwrap_or(0);
    PartialMomentSequence::new(dimension, degree, entries).map_err(|e| anyhow!("{e}"))
}

pub fn write_sequence(path: &Path, seq: &MomentSequence, csv_format: bool) -> Result<()> {
    if csv_format {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
        for (index, value) in seq.iter() {
            let mut row: Vec<String> = index.exponents().iter().map(u32::to_string).collect();
            row.push(format_rational(value));
            writer.write_record(&row)?;
        }
        writer.flush()?;
        return Ok(());
    }
    write_json(path, &SequenceFile::from_sequence(seq))
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MeasureFile {
    pub dimension: usize,
    pub atoms: Vec<AtomRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct AtomRecord {
    pub point: Vec<String>,
    pub density: String,
}

impl MeasureFile {
    pub fn from_measure(mu: &SignedMeasure) -> Self {
        MeasureFile {
            dimension: mu.dimension(),
            atoms: mu
                .atoms()
                .iter()
                .map(|atom| AtomRecord {
                    point: atom.point.iter().map(format_rational).collect(),
                    density: format_rational(&atom.density),
                })
                .collect(),
        }
    }

    pub fn to_measure(&self) -> Result<SignedMeasure> {
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for (k, record) in self.atoms.iter().enumerate() {
            let point = record
                .point
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("atom {k} point"))?;
            let density =
                parse_rational(&record.density).with_context(|| format!("atom {k} density"))?;
            atoms.push((point, density));
        }
        SignedMeasure::new(self.dimension, atoms).map_err(|e| anyhow!("{e}"))
    }
}

pub fn read_measure(path: &Path) -> Result<SignedMeasure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: MeasureFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_measure()
}

pub fn write_measure(path: &Path, mu: &SignedMeasure, csv_format: bool) -> Result<()> {
    if csv_format {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
        for atom in mu.atoms() {
            let mut row: Vec<String> = atom.point.iter().map(format_rational).collect();
            row.push(format_rational(&atom.density));
            writer.write_record(&row)?;
        }
        writer.flush()?;
        return Ok(());
    }
    write_json(path, &MeasureFile::from_measure(mu))
}

// ---------------------------------------------------------------------------
// Solve reports
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SolveReportFile {
    pub strategy: String,
    pub measure: MeasureFile,
    pub atoms_added_for_invertibility: Vec<Vec<String>>,
    pub rank_trace: Vec<usize>,
    pub oracle_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completion: Option<CompletionNote>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CompletionNote {
    pub degree: u32,
    pub filled_indices: Vec<Vec<u32>>,
    pub invertible: bool,
}

impl SolveReportFile {
    pub fn new(report: &SolveReport, completion: Option<&CompletionReport>) -> Self {
        SolveReportFile {
            strategy: report.strategy.to_string(),
            measure: MeasureFile::from_measure(&report.measure),
            atoms_added_for_invertibility: report
                .atoms_added_for_invertibility
                .iter()
                .map(|point| point.iter().map(format_rational).collect())
                .collect(),
            rank_trace: report.rank_trace.clone(),
            oracle_verified: report.oracle_verified,
            completion: completion.map(|c| CompletionNote {
                degree: c.sequence.degree(),
                filled_indices: c
                    .filled
                    .iter()
                    .map(|index| index.exponents().to_vec())
                    .collect(),
                invertible: c.invertible,
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// Quadrature rules
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct QuadratureFile {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub precision: u32,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<QuadratureExact>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct QuadratureExact {
    /// Monic node polynomial, ascending coefficients.
    pub node_poly: Vec<String>,
    pub flat_extension: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
    /// `(constant, linear)` of a node's monic quadratic factor, when its
    /// minimal polynomial is quadratic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic_factors: Option<Vec<Option<(String, String)>>>,
}

impl QuadratureFile {
    pub fn from_rule(rule: &QuadratureRule) -> Self {
        let exact_nodes = rule
            .exact_nodes
            .iter()
            .all(Option::is_some)
            .then(|| {
                rule.exact_nodes
                    .iter()
                    .map(|n| format_rational(n.as_ref().expect("all set")))
                    .collect()
            });
        let quadratics = rule
            .quadratic_factors
            .iter()
            .any(Option::is_some)
            .then(|| {
                rule.quadratic_factors
                    .iter()
                    .map(|q| {
                        q.as_ref()
                            .map(|(c, b)| (format_rational(c), format_rational(b)))
                    })
                    .collect()
            });
        QuadratureFile {
            nodes: rule.nodes.clone(),
            weights: rule.weights.clone(),
            precision: rule.precision,
            size: rule.size,
            exact: Some(QuadratureExact {
                node_poly: rule.node_poly.iter().map(format_rational).collect(),
                flat_extension: format_rational(&rule.flat_extension),
                nodes: exact_nodes,
                weights: rule
                    .exact_weights
                    .as_ref()
                    .map(|w| w.iter().map(format_rational).collect()),
                quadratic_factors: quadratics,
            }),
        }
    }
}

pub fn write_quadrature(path: &Path, rule: &QuadratureRule, csv_format: bool) -> Result<()> {
    if csv_format {
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
        for (node, weight) in rule.nodes.iter().zip(&rule.weights) {
            writer.write_record([node.to_string(), weight.to_string()])?;
        }
        writer.flush()?;
        return Ok(());
    }
    write_json(path, &QuadratureFile::from_rule(rule))
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .map(|e| e.eq_ignore_ascii_case("csv"))
        .unwrap_or(false)
}

/// `p/q` with a floating annotation, e.g. `81/47 (~1.7234)`.
pub fn annotated(value: &Rational) -> String {
    let exact = format_rational(value);
    if value.is_integer() {
        return exact;
    }
    format!("{exact} (~{:.6})", rational_to_f64(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use moment_core::monomial_basis;

    fn rat(n: i64, d: i64) -> Rational {
        parse_rational(&format!("{n}/{d}")).unwrap()
    }

    fn fib() -> MomentSequence {
        MomentSequence::from_values(
            2,
            2,
            [1, 1, 2, 3, 5, 8].iter().map(|&v| rat(v, 1)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn sequence_json_round_trip() {
        let file = SequenceFile::from_sequence(&fib());
        let text = serde_json::to_string(&file).unwrap();
        let parsed: SequenceFile = serde_json::from_str(&text).unwrap();
        let partial = parsed.to_partial().unwrap();
        assert_eq!(partial.try_complete().unwrap(), fib());
    }

    #[test]
    fn sequence_rejects_duplicates_and_bad_indices() {
        let mut file = SequenceFile::from_sequence(&fib());
        file.entries.push(SequenceEntry {
            index: vec![0, 0],
            value: "9".into(),
        });
        assert!(file.to_partial().is_err());

        let bad = SequenceFile {
            dimension: 2,
            degree: 1,
            entries: vec![SequenceEntry {
                index: vec![1],
                value: "1".into(),
            }],
        };
        assert!(bad.to_partial().is_err());
    }

    #[test]
    fn measure_round_trip_with_decimals() {
        let file = MeasureFile {
            dimension: 2,
            atoms: vec![
                AtomRecord {
                    point: vec!["0.5".into(), "0.2".into()],
                    density: "-0.01".into(),
                },
                AtomRecord {
                    point: vec!["-1".into(), "4".into()],
                    density: "2".into(),
                },
            ],
        };
        let mu = file.to_measure().unwrap();
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.atoms()[0].density, rat(-1, 100));
        let back = MeasureFile::from_measure(&mu);
        assert_eq!(back.to_measure().unwrap(), mu);
    }

    #[test]
    fn csv_sequence_reads_partial_triangles() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.csv");
        fs::write(&path, "0,0,1\n1,0,2\n0,1,3/2\n").unwrap();
        let partial = read_sequence(&path).unwrap();
        assert_eq!(partial.dimension(), 2);
        assert_eq!(partial.degree(), 1);
        assert!(partial.missing().is_empty());
        assert_eq!(
            partial.get(&MultiIndex::new(vec![0, 1])).unwrap(),
            &rat(3, 2)
        );
    }

    #[test]
    fn sequence_csv_write_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("seq.csv");
        write_sequence(&path, &fib(), true).unwrap();
        let back = read_sequence(&path).unwrap();
        assert_eq!(back.try_complete().unwrap(), fib());
        // Rows follow degree-lex order.
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("0,0,1\n1,0,1\n0,1,2\n2,0,3\n"));
    }

    #[test]
    fn entries_serialize_in_degree_lex_order() {
        let file = SequenceFile::from_sequence(&fib());
        let indices: Vec<Vec<u32>> = file.entries.iter().map(|e| e.index.clone()).collect();
        let expect: Vec<Vec<u32>> = monomial_basis(2, 2)
            .iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        assert_eq!(indices, expect);
    }

    #[test]
    fn annotations() {
        assert_eq!(annotated(&rat(3, 1)), "3");
        assert_eq!(annotated(&rat(3, 4)), "3/4 (~0.750000)");
    }
}
