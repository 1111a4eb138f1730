//! JSON files for channels, cq-channels and classical channel pairs.
//!
//! Complex entries are `[re, im]` pairs; matrices are lists of rows.
//! Loaders re-run the constructors' checks, so a bad file is rejected with
//! the violated invariant and its residual.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{CqChannel, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64};
use crate::strategies::ClassicalChannelPair;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChannelFile {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CqChannelFile {
    pub alphabet: Vec<String>,
    pub out_dim: usize,
    pub states: BTreeMap<String, MatrixJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassicalPairFile {
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
    #[serde(rename = "Wbar")]
    pub wbar: Vec<Vec<f64>>,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, shape: (usize, usize), what: &str) -> Result<ComplexMatrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected a {}x{} matrix",
            shape.0, shape.1
        )));
    }
    let data = rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    ComplexMatrix::from_vec(shape.0, shape.1, data)
}

impl ChannelFile {
    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            in_dim: ch.in_dim(),
            out_dim: ch.out_dim(),
            kraus: ch.kraus().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        if self.kraus.is_empty() {
            return Err(Error::Parse("channel file lists no Kraus operators".into()));
        }
        let kraus = self
            .kraus
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_json(m, (self.out_dim, self.in_dim), &format!("Kraus operator {k}")))
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(kraus)
    }
}

impl CqChannelFile {
    pub fn from_channel(ch: &CqChannel) -> Self {
        Self {
            alphabet: ch.alphabet().to_vec(),
            out_dim: ch.out_dim(),
            states: ch
                .alphabet()
                .iter()
                .zip(ch.outputs())
                .map(|(l, s)| (l.clone(), matrix_to_json(s.matrix())))
                .collect(),
        }
    }

    pub fn to_channel(&self) -> Result<CqChannel> {
        let outputs = self
            .alphabet
            .iter()
            .map(|label| {
                let m = self
                    .states
                    .get(label)
                    .ok_or_else(|| Error::Parse(format!("no state for letter '{label}'")))?;
                DensityMatrix::new(matrix_from_json(
                    m,
                    (self.out_dim, self.out_dim),
                    &format!("state '{label}'"),
                )?)
            })
            .collect::<Result<Vec<_>>>()?;
        CqChannel::new(self.alphabet.clone(), outputs)
    }
}

impl ClassicalPairFile {
    pub fn to_pair(&self) -> Result<ClassicalChannelPair> {
        ClassicalChannelPair::new(self.w.clone(), self.wbar.clone())
    }

    pub fn from_pair(p: &ClassicalChannelPair) -> Self {
        Self {
            w: p.w.clone(),
            wbar: p.wbar.clone(),
        }
    }
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_channel(path: &Path) -> Result<KrausChannel> {
    read::<ChannelFile>(path)?.to_channel()
}

pub fn save_channel(path: &Path, ch: &KrausChannel) -> Result<()> {
    write(path, &ChannelFile::from_channel(ch))
}

pub fn load_cq_channel(path: &Path) -> Result<CqChannel> {
    read::<CqChannelFile>(path)?.to_channel()
}

pub fn save_cq_channel(path: &Path, ch: &CqChannel) -> Result<()> {
    write(path, &CqChannelFile::from_channel(ch))
}

pub fn load_classical_pair(path: &Path) -> Result<ClassicalChannelPair> {
    read::<ClassicalPairFile>(path)?.to_pair()
}

pub fn save_classical_pair(path: &Path, p: &ClassicalChannelPair) -> Result<()> {
    write(path, &ClassicalPairFile::from_pair(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ad.json");
        let ch = KrausChannel::amplitude_damping(0.37).unwrap();
        save_channel(&p, &ch).unwrap();
        let back = load_channel(&p).unwrap();
        for (a, b) in ch.kraus().iter().zip(back.kraus()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_non_trace_preserving() {
        let mut f = ChannelFile::from_channel(&KrausChannel::identity(2));
        f.kraus[0][1][1] = [0.9, 0.0];
        match f.to_channel() {
            Err(Error::NotTracePreserving { residual }) => assert!((residual - 0.19).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        f.kraus[0].pop();
        assert!(matches!(f.to_channel(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn cq_round_trip_and_psd_check() {
        let ch = CqChannel::new(
            vec!["a".into(), "b".into()],
            vec![DensityMatrix::basis(2, 0), DensityMatrix::maximally_mixed(2)],
        )
        .unwrap();
        let f = CqChannelFile::from_channel(&ch);
        let back = f.to_channel().unwrap();
        assert_eq!(back.alphabet(), ch.alphabet());
        assert_eq!(back.output(1).matrix(), ch.output(1).matrix());
        let mut bad = f.clone();
        bad.states.insert(
            "a".into(),
            vec![vec![[1.2, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [-0.2, 0.0]]],
        );
        assert!(matches!(bad.to_channel(), Err(Error::InvalidState { .. })));
        let mut missing = f;
        missing.states.remove("b");
        assert!(matches!(missing.to_channel(), Err(Error::Parse(_))));
    }

    #[test]
    fn classical_pair_file() {
        let text = r#"{"W": [[0.9, 0.1], [0.2, 0.8]], "Wbar": [[0.5, 0.5], [0.6, 0.4]]}"#;
        let f: ClassicalPairFile = serde_json::from_str(text).unwrap();
        assert_eq!(f.to_pair().unwrap().inputs(), 2);
        let bad: ClassicalPairFile = serde_json::from_str(r#"{"W": [[0.9, 0.2]], "Wbar": [[0.5, 0.5]]}"#).unwrap();
        match bad.to_pair() {
            Err(Error::InvalidClassicalChannel { invariant, residual }) => {
                assert_eq!(invariant, "row sums equal 1");
                assert!((residual - 0.1).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }
}
