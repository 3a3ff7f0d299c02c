use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Provenance attached to a simulated sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub outer: usize,
    pub inner: usize,
    pub max_inner_stderr: f64,
    pub seed: (u64, u64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<usize>,
}

/// A nonempty sample sorted ascending, read as an empirical measure.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDist {
    values: Vec<f64>,
    meta: Option<DistMeta>,
}

impl EmpiricalDist {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample);
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalDist { values, meta: None })
    }

    pub fn with_meta(values: Vec<f64>, meta: DistMeta) -> Result<Self> {
        let mut d = Self::new(values)?;
        d.meta = Some(meta);
        Ok(d)
    }

    /// `n` atoms at `x`.
    pub fn point_mass(x: f64, n: usize) -> Result<Self> {
        Self::new(vec![x; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn meta(&self) -> Option<&DistMeta> {
        self.meta.as_ref()
    }

    /// Number of atoms `≤ x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v <= x)
    }

    /// Right-continuous ECDF.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.len() as f64
    }

    /// Stride subsample of size `k` (deterministic, order preserving).
    pub fn subsample(&self, k: usize) -> EmpiricalDist {
        let n = self.len();
        assert!(k >= 1 && k <= n);
        let values = (0..k)
            .map(|i| self.values[((2 * i + 1) * n) / (2 * k)])
            .collect();
        EmpiricalDist { values, meta: None }
    }

    /// CSV form: a `# meta: {...}` line, a `value` header and one value per
    /// row, ascending.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let meta = match &self.meta {
            Some(m) => serde_json::to_string(m)?,
            None => "{}".to_string(),
        };
        let mut out = String::with_capacity(self.len() * 20 + meta.len() + 16);
        out.push_str("# meta: ");
        out.push_str(&meta);
        out.push_str("\nvalue\n");
        for v in &self.values {
            out.push_str(&format!("{v}\n"));
        }
        w.write_all(out.as_bytes())?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Format("empty file".into()))??;
        let json = first
            .strip_prefix("# meta: ")
            .ok_or_else(|| Error::Format("missing `# meta:` line".into()))?;
        let meta: Option<DistMeta> = if json.trim() == "{}" {
            None
        } else {
            Some(serde_json::from_str(json)?)
        };
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing header".into()))??;
        if header.trim() != "value" {
            return Err(Error::Format(format!(
                "expected `value` header, got `{header}`"
            )));
        }
        let mut values = Vec::new();
        for line in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            values.push(
                line.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad value `{line}`: {e}")))?,
            );
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Format("values not sorted ascending".into()));
        }
        let mut d = EmpiricalDist::new(values)?;
        d.meta = meta;
        Ok(d)
    }
}
