//! Structured results of harness runs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::report::curve_csv;
use crate::spaces::WeightParams;

/// A sampled curve `y(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub x_label: String,
    pub y_label: String,
    #[serde(with = "crate::serde_ext::vec")]
    pub x: Vec<f64>,
    #[serde(with = "crate::serde_ext::vec")]
    pub y: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Measurement {
    Flag(bool),
    /// Infinite values mark divergent quantities.
    Scalar(#[serde(with = "crate::serde_ext")] f64),
    Curve(Curve),
    Text(String),
}

/// How a measured scalar is compared with the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Comparison {
    /// `value < tolerance`
    Below,
    /// `value >= tolerance`
    AtLeast,
    /// `|value - target| < tolerance`
    AbsWithin { target: f64 },
    /// `|value - target| < tolerance |target|`
    RelWithin { target: f64 },
    /// Flag measurement equal to `true`; the tolerance is unused.
    IsTrue,
}

impl Comparison {
    fn holds(&self, value: f64, tolerance: f64) -> bool {
        match *self {
            Comparison::Below => value < tolerance,
            Comparison::AtLeast => value >= tolerance,
            Comparison::AbsWithin { target } => (value - target).abs() < tolerance,
            Comparison::RelWithin { target } => (value - target).abs() < tolerance * target.abs(),
            Comparison::IsTrue => value == 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub criterion: String,
    pub measurement: String,
    pub comparison: Comparison,
    #[serde(with = "crate::serde_ext")]
    pub tolerance: f64,
    /// `None` when the parameters violate the hypotheses of the claim.
    pub pass: Option<bool>,
    pub out_of_hypothesis: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: WeightParams,
    pub measurements: BTreeMap<String, Measurement>,
    pub verdicts: Vec<Verdict>,
    pub provenance: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn new(theorem: &str, params: WeightParams) -> Self {
        Self {
            theorem: theorem.to_string(),
            params,
            measurements: BTreeMap::new(),
            verdicts: Vec::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn scalar(&mut self, name: &str, v: f64) {
        self.measurements.insert(name.to_string(), Measurement::Scalar(v));
    }

    pub fn flag(&mut self, name: &str, v: bool) {
        self.measurements.insert(name.to_string(), Measurement::Flag(v));
    }

    pub fn text(&mut self, name: &str, v: impl Into<String>) {
        self.measurements.insert(name.to_string(), Measurement::Text(v.into()));
    }

    pub fn curve(&mut self, name: &str, x_label: &str, y_label: &str, x: Vec<f64>, y: Vec<f64>) {
        let c = Curve { x_label: x_label.into(), y_label: y_label.into(), x, y };
        self.measurements.insert(name.to_string(), Measurement::Curve(c));
    }

    pub fn provenance(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("provenance values serialize");
        self.provenance.insert(key.to_string(), v);
    }

    /// Scalar value of a measurement; flags read as 0/1.
    pub fn value(&self, name: &str) -> Option<f64> {
        match self.measurements.get(name)? {
            Measurement::Scalar(v) => Some(*v),
            Measurement::Flag(b) => Some(if *b { 1.0 } else { 0.0 }),
            _ => None,
        }
    }

    /// Records a verdict on an existing scalar or flag measurement.
    ///
    /// # Panics
    /// If `measurement` is missing or not scalar-valued; harnesses always
    /// record a measurement before judging it.
    pub fn check(
        &mut self,
        criterion: &str,
        measurement: &str,
        comparison: Comparison,
        tolerance: f64,
        in_hypothesis: bool,
    ) -> Option<bool> {
        let v = self
            .value(measurement)
            .unwrap_or_else(|| panic!("no scalar measurement named {measurement:?}"));
        let pass = in_hypothesis.then(|| comparison.holds(v, tolerance));
        self.verdicts.push(Verdict {
            criterion: criterion.to_string(),
            measurement: measurement.to_string(),
            comparison,
            tolerance,
            pass,
            out_of_hypothesis: !in_hypothesis,
        });
        pass
    }

    /// No in-hypothesis verdict failed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass != Some(false))
    }

    /// At least one verdict was judged.
    pub fn has_judged(&self) -> bool {
        self.verdicts.iter().any(|v| v.pass.is_some())
    }

    pub fn verdict(&self, criterion: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| v.pass == Some(false)).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFunction(e.to_string()))
    }

    /// `(name, csv)` for every curve measurement.
    pub fn curves_csv(&self) -> Vec<(String, String)> {
        self.measurements
            .iter()
            .filter_map(|(name, m)| match m {
                Measurement::Curve(c) => Some((
                    name.clone(),
                    curve_csv(&c.x_label, &c.y_label, c.x.iter().copied().zip(c.y.iter().copied())),
                )),
                _ => None,
            })
            .collect()
    }

    /// Moves the measurements and verdicts of `other` into `self` under
    /// `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for (k, v) in other.measurements {
            self.measurements.insert(format!("{prefix}/{k}"), v);
        }
        for mut v in other.verdicts {
            v.criterion = format!("{prefix}/{}", v.criterion);
            v.measurement = format!("{prefix}/{}", v.measurement);
            self.verdicts.push(v);
        }
        for (k, v) in other.provenance {
            self.provenance.insert(format!("{prefix}/{k}"), v);
        }
    }
}
