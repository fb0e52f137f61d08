//! Entity-feature matrix construction from `entity<TAB>feature[<TAB>count]` pair files.
//!
//! Rows are entities, columns are features. Both vocabularies are indexed in
//! lexicographic order of their strings, assigned after feature filtering, so
//! the same multiset of input lines always produces the same matrix.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vocab::Vocab;

/// How repeated or counted pairs are turned into matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    /// Entry is 1 if the pair was observed at all.
    #[default]
    Binary,
    /// Entry is the summed count over all occurrences of the pair.
    Count,
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureMode::Binary => f.write_str("binary"),
            FeatureMode::Count => f.write_str("count"),
        }
    }
}

impl FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(FeatureMode::Binary),
            "count" => Ok(FeatureMode::Count),
            other => Err(Error::InvalidArgument(format!(
                "unknown feature mode {other:?} (expected binary or count)"
            ))),
        }
    }
}

/// Sparse nonnegative entity × feature matrix in CSR layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    entity_vocab: Vocab,
    feature_vocab: Vocab,
    mode: FeatureMode,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl FeatureMatrix {
    /// Builds a matrix from `(entity, feature, count)` triples.
    ///
    /// Counts must be positive. Duplicate pairs are OR-ed in binary mode and
    /// summed in count mode. Features present in fewer than
    /// `min_feature_count` distinct entities are dropped; entities that lose
    /// all their features stay as zero rows.
    pub fn from_pairs<I, E, F>(
        pairs: I,
        mode: FeatureMode,
        min_feature_count: usize,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (E, F, u64)>,
        E: Into<String>,
        F: Into<String>,
    {
        let mut rows: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        for (entity, feature, count) in pairs {
            if count == 0 {
                return Err(Error::InvalidArgument("pair count must be positive".into()));
            }
            let slot = rows
                .entry(entity.into())
                .or_default()
                .entry(feature.into())
                .or_insert(0);
            *slot = slot.saturating_add(count);
        }
        if rows.is_empty() {
            return Err(Error::NoPairs);
        }

        let mut support: HashMap<&str, usize> = HashMap::new();
        for features in rows.values() {
            for feature in features.keys() {
                *support.entry(feature.as_str()).or_insert(0) += 1;
            }
        }
        let feature_vocab = Vocab::sorted(
            support
                .iter()
                .filter(|(_, &n)| n >= min_feature_count)
                .map(|(f, _)| f.to_string()),
        )?;
        let entity_vocab = Vocab::from_names(rows.keys().cloned().collect())?;

        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for features in rows.values() {
            // both maps are lexicographic, so columns come out ascending
            for (feature, &count) in features {
                if let Some(j) = feature_vocab.get(feature) {
                    col_idx.push(j);
                    values.push(match mode {
                        FeatureMode::Binary => 1.0,
                        FeatureMode::Count => count as f64,
                    });
                }
            }
            row_ptr.push(col_idx.len());
        }

        Ok(Self {
            entity_vocab,
            feature_vocab,
            mode,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Builds a matrix from a row-major dense `entities × features` array,
    /// keeping all-zero rows and columns. Index order follows the vocabularies.
    pub fn from_dense(
        entity_vocab: Vocab,
        feature_vocab: Vocab,
        dense: &[f64],
        mode: FeatureMode,
    ) -> Result<Self> {
        let (n, m) = (entity_vocab.len(), feature_vocab.len());
        if dense.len() != n * m {
            return Err(Error::InvalidArgument(format!(
                "expected {} values for a {n}x{m} matrix, got {}",
                n * m,
                dense.len()
            )));
        }
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for row in dense.chunks(m.max(1)).take(n) {
            for (j, &v) in row.iter().enumerate() {
                let valid = match mode {
                    FeatureMode::Binary => v == 0.0 || v == 1.0,
                    FeatureMode::Count => v >= 0.0 && v.is_finite(),
                };
                if !valid {
                    return Err(Error::InvalidArgument(format!("invalid {mode} entry {v}")));
                }
                if v > 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        while row_ptr.len() < n + 1 {
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            entity_vocab,
            feature_vocab,
            mode,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn n_entities(&self) -> usize {
        self.entity_vocab.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_vocab.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn entity_vocab(&self) -> &Vocab {
        &self.entity_vocab
    }

    pub fn feature_vocab(&self) -> &Vocab {
        &self.feature_vocab
    }

    /// Column indices (ascending) and values of entity row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[range.clone()], &self.values[range])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Row-major dense copy, `n_entities * n_features` long.
    pub fn to_dense(&self) -> Vec<f64> {
        let m = self.n_features();
        let mut dense = vec![0.0; self.n_entities() * m];
        for i in 0..self.n_entities() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                dense[i * m + j] = v;
            }
        }
        dense
    }

    /// Per-feature lists of `(entity, value)`, entities ascending.
    pub fn columns(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = vec![Vec::new(); self.n_features()];
        for i in 0..self.n_entities() {
            let (idx, vals) = self.row(i);
            for (&j, &v) in idx.iter().zip(vals) {
                cols[j].push((i, v));
            }
        }
        cols
    }

    /// Sets every stored entry to 1 and switches to binary mode.
    pub fn binarize(&self) -> Self {
        Self {
            mode: FeatureMode::Binary,
            values: vec![1.0; self.values.len()],
            ..self.clone()
        }
    }

    /// Writes `entity<TAB>feature<TAB>value` lines sorted by (row, column).
    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.n_entities() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                writeln!(
                    out,
                    "{}\t{}\t{}",
                    self.entity_vocab.name(i),
                    self.feature_vocab.name(j),
                    v
                )?;
            }
        }
        Ok(())
    }
}

/// Parses a pair file into a [`FeatureMatrix`].
///
/// Each non-empty line is `entity<TAB>feature` or `entity<TAB>feature<TAB>count`
/// with `count` a positive integer. Binary mode validates but ignores counts.
pub fn load_feature_pairs<R: BufRead>(
    source: R,
    mode: FeatureMode,
    min_feature_count: usize,
) -> Result<FeatureMatrix> {
    let mut pairs = Vec::new();
    for (n, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        let lineno = n + 1;
        let parse_err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let (entity, feature, count) = match fields.as_slice() {
            [e, f] => (*e, *f, 1u64),
            [e, f, c] => {
                let count: u64 = c
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(format!("count {c:?} is not a positive integer")))?;
                if count == 0 {
                    return Err(parse_err("count must be positive".into()));
                }
                (*e, *f, count)
            }
            _ => {
                return Err(parse_err(format!(
                    "expected 2 or 3 tab-separated columns, found {}",
                    fields.len()
                )))
            }
        };
        if entity.is_empty() || feature.is_empty() {
            return Err(parse_err("empty entity or feature".into()));
        }
        pairs.push((entity.to_string(), feature.to_string(), count));
    }
    FeatureMatrix::from_pairs(pairs, mode, min_feature_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, mode: FeatureMode, min: usize) -> Result<FeatureMatrix> {
        load_feature_pairs(text.as_bytes(), mode, min)
    }

    #[test]
    fn binary_transcription() {
        let fm = load("e1\tu1\ne1\tu2\ne2\tu2\n", FeatureMode::Binary, 1).unwrap();
        assert_eq!(fm.n_entities(), 2);
        assert_eq!(fm.n_features(), 2);
        assert_eq!(fm.to_dense(), vec![1.0, 1.0, 0.0, 1.0]);
        assert_eq!(fm.entity_vocab().names(), &["e1", "e2"]);
    }

    #[test]
    fn count_mode_sums_duplicates() {
        let fm = load("e1\tu1\t3\ne1\tu1\t2\n", FeatureMode::Count, 1).unwrap();
        assert_eq!(fm.get(0, 0), 5.0);
    }

    #[test]
    fn binary_mode_ors_duplicates() {
        let fm = load("e1\tu1\t3\ne1\tu1\n", FeatureMode::Binary, 1).unwrap();
        assert_eq!(fm.get(0, 0), 1.0);
        assert_eq!(fm.nnz(), 1);
    }

    #[test]
    fn min_count_keeps_empty_entities() {
        let fm = load("e1\tu1\ne2\tu2\n", FeatureMode::Binary, 2).unwrap();
        assert_eq!(fm.n_entities(), 2);
        assert_eq!(fm.n_features(), 0);
        assert_eq!(fm.nnz(), 0);
        assert_eq!(fm.row(0).0.len(), 0);
    }

    #[test]
    fn filter_redensifies_feature_vocab() {
        let fm = load(
            "e1\ta\ne1\tb\ne2\tb\ne2\tc\ne3\tc\n",
            FeatureMode::Binary,
            2,
        )
        .unwrap();
        assert_eq!(fm.feature_vocab().names(), &["b", "c"]);
        assert_eq!(fm.to_dense(), vec![1.0, 0.0, 1.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("e1\tu1\nbad\n", 2),
            ("e1\tu1\t0\n", 1),
            ("e1\tu1\t-2\n", 1),
            ("\ne1\tu1\tx\n", 2),
            ("e1\tu1\t1\textra\n", 1),
        ];
        for (text, expected) in cases {
            match load(text, FeatureMode::Count, 1) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn empty_input_is_no_pairs() {
        let err = load("\n\n", FeatureMode::Binary, 1).unwrap_err();
        assert_eq!(err.to_string(), "no pairs");
    }

    #[test]
    fn crlf_lines_accepted() {
        let fm = load("e1\tu1\r\ne2\tu1\t2\r\n", FeatureMode::Count, 1).unwrap();
        assert_eq!(fm.to_dense(), vec![1.0, 2.0]);
    }

    #[test]
    fn binarize_examples() {
        let fm = load("e1\tu1\t5\ne2\tu2\ne3\tu3\n", FeatureMode::Count, 2).unwrap();
        let b = fm.binarize();
        assert_eq!(b.mode(), FeatureMode::Binary);
        assert_eq!(b.row(0).0.len(), 0);

        let fm = load("e1\tu1\t5\n", FeatureMode::Count, 1).unwrap();
        assert_eq!(fm.binarize().get(0, 0), 1.0);

        let bin = load("e1\tu1\ne2\tu1\n", FeatureMode::Binary, 1).unwrap();
        assert_eq!(bin.binarize(), bin);
    }

    #[test]
    fn tsv_dump_round_trips() {
        let fm = load("b\tz\t2\na\ty\na\tz\t4\n", FeatureMode::Count, 1).unwrap();
        let mut out = Vec::new();
        fm.write_tsv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "a\ty\t1\na\tz\t4\nb\tz\t2\n");
        let again = load(&text, FeatureMode::Count, 1).unwrap();
        assert_eq!(again, fm);
    }

    #[test]
    fn from_dense_keeps_zero_rows_and_columns() {
        let ev = Vocab::sorted(["a", "b"]).unwrap();
        let fv = Vocab::sorted(["x", "y", "z"]).unwrap();
        let fm = FeatureMatrix::from_dense(
            ev.clone(),
            fv.clone(),
            &[0.0, 0.0, 0.0, 1.0, 0.0, 1.0],
            FeatureMode::Binary,
        )
        .unwrap();
        assert_eq!((fm.n_entities(), fm.n_features(), fm.nnz()), (2, 3, 2));
        assert_eq!(fm.to_dense(), vec![0.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(
            FeatureMatrix::from_dense(ev.clone(), fv.clone(), &[2.0; 6], FeatureMode::Binary)
                .is_err()
        );
        assert!(
            FeatureMatrix::from_dense(ev.clone(), fv.clone(), &[1.0; 5], FeatureMode::Binary)
                .is_err()
        );
        let empty =
            FeatureMatrix::from_dense(ev, Vocab::default(), &[], FeatureMode::Binary).unwrap();
        assert_eq!((empty.n_entities(), empty.n_features()), (2, 0));
        assert_eq!(empty.row(1).0.len(), 0);
    }

    #[test]
    fn mode_parses() {
        assert_eq!("count".parse::<FeatureMode>().unwrap(), FeatureMode::Count);
        assert!("tfidf".parse::<FeatureMode>().is_err());
    }
}
