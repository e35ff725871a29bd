//! Persistent record of a classified corpus, stored as JSON.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::Classification;
use crate::isogeny::{verify_imaginary_isogeny, verify_no_isogeny, Decision, NoIsogeny};
use crate::kernel::IntMatrix;
use crate::lattice::LatticeError;

use super::{emit_lattice, parse_lattice, DocumentError, LatticeDocument};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestDocument {
    pub name: String,
    /// Canonical lattice text.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Yes { witness: Vec<Vec<String>> },
    No { reason: String },
    Unknown { candidates_tried: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub left: String,
    pub right: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub seed: u64,
    pub budget: u64,
    pub documents: Vec<ManifestDocument>,
    pub decisions: Vec<DecisionRecord>,
    pub partition: Vec<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot access manifest: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document {name}: {source}")]
    Document { name: String, source: DocumentError },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("record {left} / {right} does not re-verify")]
    Unverified { left: String, right: String },
    #[error("record refers to unknown document {0}")]
    UnknownDocument(String),
    #[error("stored partition does not match the Yes records")]
    Partition,
}

fn reason_code(reason: &NoIsogeny) -> String {
    match reason {
        NoIsogeny::IrrationalRatio(r) => format!("irrational-ratio {r}"),
        NoIsogeny::TrivialSolutionSpace => "trivial-solution-space".into(),
        NoIsogeny::SingularSolutionSpace { dimension } => format!("singular-solution-space {dimension}"),
    }
}

fn parse_reason(code: &str) -> Option<NoIsogeny> {
    let (head, rest) = code.split_once(' ').unwrap_or((code, ""));
    match head {
        // the ratio itself is recomputed on verification
        "irrational-ratio" => Some(NoIsogeny::IrrationalRatio(crate::kernel::ExactScalar::zero())),
        "trivial-solution-space" => Some(NoIsogeny::TrivialSolutionSpace),
        "singular-solution-space" => rest.parse().ok().map(|dimension| NoIsogeny::SingularSolutionSpace { dimension }),
        _ => None,
    }
}

impl CorpusManifest {
    pub fn from_classification(
        docs: &[LatticeDocument],
        classification: &Classification,
        seed: u64,
        budget: u64,
    ) -> Self {
        let name = |i: usize| docs[i].name.clone();
        let decisions = classification
            .decisions
            .iter()
            .map(|d| DecisionRecord {
                left: name(d.left),
                right: name(d.right),
                verdict: match &d.decision {
                    Decision::Yes(u) => Verdict::Yes {
                        witness: (0..u.rows()).map(|i| u.row(i).iter().map(|v| v.to_string()).collect()).collect(),
                    },
                    Decision::No(reason) => Verdict::No { reason: reason_code(reason) },
                    Decision::Unknown { candidates_tried } => Verdict::Unknown { candidates_tried: *candidates_tried },
                },
            })
            .collect();
        CorpusManifest {
            seed,
            budget,
            documents: docs.iter().map(|d| ManifestDocument { name: d.name.clone(), text: emit_lattice(d) }).collect(),
            decisions,
            partition: classification.classes.iter().map(|c| c.iter().map(|&i| name(i)).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ManifestError> {
        Ok(std::fs::write(path, self.to_json())?)
    }

    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Re-parses every document, re-verifies every Yes and No record, and
    /// checks that the partition is the one generated by the Yes records.
    pub fn verify(&self) -> Result<(), ManifestError> {
        let mut lattices = BTreeMap::new();
        for d in &self.documents {
            let doc = parse_lattice(&d.text).map_err(|source| ManifestError::Document { name: d.name.clone(), source })?;
            lattices.insert(d.name.clone(), doc.lattice);
        }
        let get = |n: &str| lattices.get(n).ok_or_else(|| ManifestError::UnknownDocument(n.to_string()));
        let index: BTreeMap<&str, usize> = self.documents.iter().enumerate().map(|(i, d)| (d.name.as_str(), i)).collect();
        let mut parent: Vec<usize> = (0..self.documents.len()).collect();
        fn root(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for rec in &self.decisions {
            let (l, r) = (get(&rec.left)?, get(&rec.right)?);
            let unverified = || ManifestError::Unverified { left: rec.left.clone(), right: rec.right.clone() };
            match &rec.verdict {
                Verdict::Yes { witness } => {
                    let rows: Vec<Vec<BigInt>> = witness
                        .iter()
                        .map(|row| row.iter().map(|v| v.parse::<BigInt>()).collect::<Result<_, _>>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| unverified())?;
                    let u = IntMatrix::from_row_vecs(rows.first().map(Vec::len).unwrap_or(0), &rows);
                    if !verify_imaginary_isogeny(l, r, &u)? {
                        return Err(unverified());
                    }
                    let (a, b) = (root(&mut parent, index[rec.left.as_str()]), root(&mut parent, index[rec.right.as_str()]));
                    parent[a.max(b)] = a.min(b);
                }
                Verdict::No { reason } => {
                    let reason = parse_reason(reason).ok_or_else(unverified)?;
                    if !verify_no_isogeny(l, r, &reason)? {
                        return Err(unverified());
                    }
                }
                Verdict::Unknown { .. } => {}
            }
        }
        let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, d) in self.documents.iter().enumerate() {
            let r = root(&mut parent, i);
            classes.entry(r).or_default().push(d.name.clone());
        }
        let mut expected: Vec<Vec<String>> = classes.into_values().collect();
        let mut stored = self.partition.clone();
        expected.sort();
        stored.sort();
        if expected != stored {
            return Err(ManifestError::Partition);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_corpus;
    use crate::kernel::{ExactScalar, Field};
    use crate::lattice::RealLattice;

    fn corpus() -> Vec<LatticeDocument> {
        let f = Field::Quadratic(2);
        let s = ExactScalar::sqrt_of(f).unwrap();
        vec![
            LatticeDocument::new("a", RealLattice::rectangular(&s, f).unwrap()),
            LatticeDocument::new("b", RealLattice::diamond(&(&s * &ExactScalar::from_int(3)), f).unwrap()),
            LatticeDocument::new("c", RealLattice::rectangular(&(&s + &ExactScalar::one()), f).unwrap()),
        ]
    }

    #[test]
    fn roundtrip_and_verify() {
        let docs = corpus();
        let lattices: Vec<RealLattice> = docs.iter().map(|d| d.lattice.clone()).collect();
        let c = classify_corpus(&lattices, 10).unwrap();
        let m = CorpusManifest::from_classification(&docs, &c, 0, 10);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        m.save(&path).unwrap();
        let loaded = CorpusManifest::load(&path).unwrap();
        assert_eq!(loaded, m);
        loaded.verify().unwrap();
        assert_eq!(loaded.partition, vec![vec!["a".to_string(), "b".to_string()], vec!["c".to_string()]]);
    }

    #[test]
    fn tampered_records_fail() {
        let docs = corpus();
        let lattices: Vec<RealLattice> = docs.iter().map(|d| d.lattice.clone()).collect();
        let c = classify_corpus(&lattices, 10).unwrap();
        let mut m = CorpusManifest::from_classification(&docs, &c, 0, 10);
        m.partition = vec![vec!["a".into(), "b".into(), "c".into()]];
        assert!(matches!(m.verify(), Err(ManifestError::Partition)));
        let mut m = CorpusManifest::from_classification(&docs, &c, 0, 10);
        m.decisions[0].verdict = Verdict::Yes { witness: vec![vec!["2".into()]] };
        assert!(matches!(m.verify(), Err(ManifestError::Unverified { .. })));
    }
}
