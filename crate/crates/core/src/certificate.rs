//! JSON certificate: the decomposition in original vertex labels, the bound
//! report, and the reattachment ledger. Field order is part of the format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{BoundReport, Decomposition, PathSeq};
use crate::graph::Graph;
use crate::pipeline::BoundLedger;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("certificate names vertex {0} which is not in the graph")]
    UnknownLabel(u64),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BoundJson {
    pub kind: String,
    pub allowed: usize,
    pub achieved: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LedgerRecordJson {
    pub vertex: u64,
    pub d: usize,
    pub q: usize,
    pub t: usize,
    pub path_count_after: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LedgerJson {
    pub records: Vec<LedgerRecordJson>,
    pub initial_count: usize,
    pub final_count: usize,
    pub allowed: usize,
    pub seed: u64,
}

/// The on-disk certificate. Vertices are original labels.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub m: usize,
    pub paths: Vec<Vec<u64>>,
    pub bound: BoundJson,
    pub ledger: Option<LedgerJson>,
}

impl Certificate {
    pub fn new(
        g: &Graph,
        d: &Decomposition,
        bound: &BoundReport,
        ledger: Option<&BoundLedger>,
    ) -> Self {
        Certificate {
            n: g.n(),
            m: g.m(),
            paths: d
                .paths
                .iter()
                .map(|p| p.vertices().iter().map(|&v| g.label(v)).collect())
                .collect(),
            bound: BoundJson {
                kind: bound.kind.name().to_string(),
                allowed: bound.allowed,
                achieved: bound.achieved,
                pass: bound.pass,
            },
            ledger: ledger.map(|l| LedgerJson {
                records: l
                    .records
                    .iter()
                    .map(|r| LedgerRecordJson {
                        vertex: g.label(r.vertex),
                        d: r.degree,
                        q: r.cycles_formed,
                        t: r.bundle_paths,
                        path_count_after: r.path_count_after,
                    })
                    .collect(),
                initial_count: l.initial_count,
                final_count: l.final_count,
                allowed: l.allowed,
                seed: l.seed,
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CertificateError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Re-binds the certificate's labelled paths to `g`'s internal ids.
    pub fn decomposition_for(&self, g: &Graph) -> Result<Decomposition, CertificateError> {
        let mut paths = Vec::with_capacity(self.paths.len());
        for p in &self.paths {
            let mut ids = Vec::with_capacity(p.len());
            for &label in p {
                let v = g
                    .vertex_of_label(label)
                    .ok_or(CertificateError::UnknownLabel(label))?;
                ids.push(v);
            }
            paths.push(PathSeq::new_unchecked(ids));
        }
        Ok(Decomposition::new(paths))
    }
}
