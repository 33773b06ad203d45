//! Experiment results: verdicts, encoded data and CSV sweeps.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use btq_core::hpoly::HPolynomial;
use btq_core::linalg::CMatrix;
use btq_core::scalar::Scalar;
use btq_core::toeplitz::PowerFit;
use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        verdicts.into_iter().fold(Verdict::Pass, |a, b| match (a, b) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub verdict: Verdict,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
}

impl From<PowerFit> for Fit {
    fn from(f: PowerFit) -> Self {
        Fit {
            exponent: f.exponent,
            coefficient: f.coefficient,
            r_squared: f.r_squared,
        }
    }
}

/// One row of an `h` sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h: f64,
    pub entry: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub id: String,
    pub inputs: ExperimentConfig,
    pub data: BTreeMap<String, Value>,
    pub fits: BTreeMap<String, Fit>,
    pub assertions: Vec<Assertion>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRow>,
    /// Kept out of the JSON so that reruns are byte-identical.
    #[serde(skip)]
    pub wall_clock: Duration,
}

impl ExperimentResult {
    pub fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            id: cfg.id.clone(),
            inputs: cfg.clone(),
            data: BTreeMap::new(),
            fits: BTreeMap::new(),
            assertions: Vec::new(),
            verdict: Verdict::Pass,
            sweep: Vec::new(),
            wall_clock: Duration::ZERO,
        }
    }

    pub fn put(&mut self, key: impl Into<String>, value: Value) {
        self.data.insert(key.into(), value);
    }

    pub fn assert(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self.push(name, verdict, detail);
    }

    /// Statistical assertion: a miss is only inconclusive when `small_sample` holds.
    pub fn assert_mc(&mut self, name: impl Into<String>, ok: bool, small_sample: bool, detail: impl Into<String>) {
        let verdict = match (ok, small_sample) {
            (true, _) => Verdict::Pass,
            (false, true) => Verdict::Inconclusive,
            (false, false) => Verdict::Fail,
        };
        self.push(name, verdict, detail);
    }

    pub fn push(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.assertions.push(Assertion {
            name: name.into(),
            verdict,
            detail: detail.into(),
        });
        self.verdict = Verdict::combine(self.assertions.iter().map(|a| a.verdict));
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }

    pub fn sweep_matrix(&mut self, label: &str, h: f64, m: &DMatrix<Complex64>) {
        for ((i, j), z) in m.iter().enumerate().map(|(k, z)| ((k % m.nrows(), k / m.nrows()), z)) {
            self.sweep.push(SweepRow {
                h,
                entry: format!("{label}[{},{}]", i + 1, j + 1),
                re: z.re,
                im: z.im,
            });
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Writes `<path>` as JSON and, when there is a sweep, `<path>.csv`.
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        if !self.sweep.is_empty() {
            let mut csv = std::fs::File::create(path.with_extension("csv"))?;
            writeln!(csv, "h,entry,re,im")?;
            for r in &self.sweep {
                writeln!(csv, "{:e},{},{:e},{:e}", r.h, r.entry, r.re, r.im)?;
            }
        }
        Ok(())
    }
}

pub fn enc_c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn enc_cs<S: Scalar>(z: &Complex<S>) -> Value {
    json!([z.re.to_f64(), z.im.to_f64()])
}

pub fn enc_matrix(m: &DMatrix<Complex64>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| enc_c(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn enc_cmatrix<S: Scalar>(m: &CMatrix<S>) -> Value {
    let n = m.n();
    Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| enc_cs(m.get(i, j))).collect())).collect())
}

/// `[{power, matrix}, …]` for the nonzero coefficients.
pub fn enc_series<S: Scalar>(s: &HPolynomial<CMatrix<S>>) -> Value {
    Value::Array(
        s.iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, m)| json!({"power": k, "matrix": enc_cmatrix(m)}))
            .collect(),
    )
}
