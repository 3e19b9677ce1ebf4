use serde::{Deserialize, Serialize};

use super::{CodingSchema, CodingSession};
use crate::{Error, Result};

/// Level-1 confusion counts; rows are annotator A, columns annotator B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub categories: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(categories: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let k = categories.len();
        if counts.len() != k || counts.iter().any(|r| r.len() != k) {
            return Err(Error::Invalid(format!("confusion matrix must be {k}x{k}")));
        }
        Ok(Self { categories, counts })
    }

    pub fn zeros(categories: Vec<String>) -> Self {
        let k = categories.len();
        Self {
            categories,
            counts: vec![vec![0; k]; k],
        }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.categories.len())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.categories.len()).map(|i| self.counts[i][i]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub total: u64,
    pub p_o: f64,
    pub p_e: f64,
    /// Undefined when chance agreement is 1.
    pub kappa: Option<f64>,
    pub matrix: ConfusionMatrix,
}

/// Cross-tabulates level-1 labels of the sentences both sessions labeled.
pub fn confusion(a: &CodingSession, b: &CodingSession, schema: &CodingSchema) -> Result<ConfusionMatrix> {
    if a.schema != b.schema {
        return Err(Error::SchemaMismatch(a.schema.clone(), b.schema.clone()));
    }
    if a.schema != schema.name {
        return Err(Error::SchemaMismatch(a.schema.clone(), schema.name.clone()));
    }
    if a.sample_id != b.sample_id {
        return Err(Error::SampleMismatch(a.sample_id.clone(), b.sample_id.clone()));
    }
    let mut m = ConfusionMatrix::zeros(schema.level1_ids());
    for (id, la) in &a.labels {
        let Some(lb) = b.labels.get(id) else { continue };
        let idx = |l: &str| {
            schema
                .level1_index(l)
                .ok_or_else(|| Error::InvalidLabel(format!("`{l}` is not in schema `{}`", schema.name)))
        };
        m.counts[idx(&la.level1)?][idx(&lb.level1)?] += 1;
    }
    Ok(m)
}

/// Observed agreement, chance agreement and Cohen's kappa.
pub fn agreement(matrix: &ConfusionMatrix) -> Result<AgreementReport> {
    let total = matrix.total();
    if total == 0 {
        return Err(Error::NoJointLabels);
    }
    let n = total as f64;
    let p_o = matrix.trace() as f64 / n;
    let p_e = matrix
        .row_sums()
        .iter()
        .zip(matrix.col_sums())
        .map(|(&r, c)| r as f64 * c as f64)
        .sum::<f64>()
        / (n * n);
    let kappa = (p_e < 1.0).then(|| (p_o - p_e) / (1.0 - p_e));
    Ok(AgreementReport {
        total,
        p_o,
        p_e,
        kappa,
        matrix: matrix.clone(),
    })
}
