use serde::{Deserialize, Serialize};

use crate::spaces::WeightParams;

/// Values of one operator on a grid, as written to disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorReport {
    pub operator: String,
    pub params: Option<WeightParams>,
    pub grid: Vec<f64>,
    #[serde(with = "crate::serde_ext::vec")]
    pub values: Vec<f64>,
    pub schedule: Vec<f64>,
}

impl OperatorReport {
    /// `x,value` rows under a single header line.
    pub fn to_csv(&self) -> String {
        curve_csv("x", "value", self.grid.iter().copied().zip(self.values.iter().copied()))
    }
}

/// Two-column CSV with a header line; values in shortest round-trip form.
pub fn curve_csv(xname: &str, yname: &str, rows: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut out = format!("{xname},{yname}\n");
    for (x, y) in rows {
        out.push_str(&format!("{x:?},{y:?}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let r = OperatorReport {
            operator: "hilbert".into(),
            params: None,
            grid: vec![4.0, 0.1],
            values: vec![0.12, -3e-20],
            schedule: vec![],
        };
        assert_eq!(r.to_csv(), "x,value\n4.0,0.12\n0.1,-3e-20\n");
        let back: OperatorReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
