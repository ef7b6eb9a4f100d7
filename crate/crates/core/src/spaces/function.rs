use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::lattice::LatticeFunction;
use super::piecewise::PiecewiseConstant1D;

/// Either of the two function substrates.
///
/// Serializes to the function-spec JSON format:
/// `{"type": "piecewise_constant", "breakpoints": [...], "values": [...]}` or
/// `{"type": "lattice", "n": 2, "h": 0.0625, "L": 4.0, "values": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionSpec", into = "FunctionSpec")]
pub enum FunctionData {
    Piecewise(PiecewiseConstant1D),
    Lattice(LatticeFunction),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum FunctionSpec {
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    Lattice {
        n: u32,
        h: f64,
        #[serde(rename = "L")]
        extent: f64,
        values: Vec<f64>,
    },
}

impl TryFrom<FunctionSpec> for FunctionData {
    type Error = Error;

    fn try_from(spec: FunctionSpec) -> Result<Self> {
        match spec {
            FunctionSpec::PiecewiseConstant { breakpoints, values } => {
                PiecewiseConstant1D::new(breakpoints, values).map(Self::Piecewise)
            }
            FunctionSpec::Lattice { n, h, extent, values } => {
                LatticeFunction::new(n, h, extent, values).map(Self::Lattice)
            }
        }
    }
}

impl From<FunctionData> for FunctionSpec {
    fn from(f: FunctionData) -> Self {
        match f {
            FunctionData::Piecewise(g) => FunctionSpec::PiecewiseConstant {
                breakpoints: g.breakpoints().to_vec(),
                values: g.values().to_vec(),
            },
            FunctionData::Lattice(g) => FunctionSpec::Lattice {
                n: g.dim(),
                h: g.h(),
                extent: g.extent(),
                values: g.values().to_vec(),
            },
        }
    }
}

impl From<PiecewiseConstant1D> for FunctionData {
    fn from(f: PiecewiseConstant1D) -> Self {
        Self::Piecewise(f)
    }
}

impl From<LatticeFunction> for FunctionData {
    fn from(f: LatticeFunction) -> Self {
        Self::Lattice(f)
    }
}

impl FunctionData {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidFunction(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function data always serializes")
    }

    pub fn dim(&self) -> u32 {
        match self {
            Self::Piecewise(_) => 1,
            Self::Lattice(g) => g.dim(),
        }
    }

    pub fn as_piecewise(&self) -> Option<&PiecewiseConstant1D> {
        match self {
            Self::Piecewise(g) => Some(g),
            Self::Lattice(_) => None,
        }
    }

    pub fn as_lattice(&self) -> Option<&LatticeFunction> {
        match self {
            Self::Lattice(g) => Some(g),
            Self::Piecewise(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Piecewise(g) => g.is_zero(),
            Self::Lattice(g) => g.is_zero(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        match self {
            Self::Piecewise(g) => g.scale(c).into(),
            Self::Lattice(g) => g.scale(c).into(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Piecewise(a), Self::Piecewise(b)) => Ok(a.add(b).into()),
            (Self::Lattice(a), Self::Lattice(b)) => a.add(b).map(Into::into),
            _ => Err(Error::InvalidFunction("cannot add functions of different kinds".into())),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `(int |f|^p |x|^alpha)^{1/p}`, infinite on divergence.
    pub fn weighted_lp_norm(&self, p: f64, alpha: f64) -> f64 {
        match self {
            Self::Piecewise(g) => g.weighted_lp_norm(p, alpha),
            Self::Lattice(g) => g.weighted_lp_norm(p, alpha),
        }
    }

    pub fn weighted_power_integral(&self, p: f64, alpha: f64) -> f64 {
        match self {
            Self::Piecewise(g) => g.weighted_power_integral(p, alpha),
            Self::Lattice(g) => g.weighted_power_integral(p, alpha),
        }
    }

    /// Unweighted `L^s` norm, essential sup for `s = inf`.
    pub fn lebesgue_norm(&self, s: f64) -> f64 {
        match self {
            Self::Piecewise(g) => g.lebesgue_norm(s),
            Self::Lattice(g) => g.lebesgue_norm(s),
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.lebesgue_norm(1.0)
    }

    pub fn restrict_to_annulus(&self, k: i32) -> Self {
        match self {
            Self::Piecewise(g) => g.restrict_to_annulus(k).into(),
            Self::Lattice(g) => g.restrict_to_annulus(k).into(),
        }
    }

    pub fn restrict_to_restricted_annulus(&self, k: i32) -> Self {
        match self {
            Self::Piecewise(g) => g.restrict_to_restricted_annulus(k).into(),
            Self::Lattice(g) => g.restrict_to_restricted_annulus(k).into(),
        }
    }

    pub fn restrict_to_ball(&self, k: i32) -> Self {
        match self {
            Self::Piecewise(g) => g.restrict_to_ball(k).into(),
            Self::Lattice(g) => g.restrict_to_ball(k).into(),
        }
    }

    /// Largest `|x|` in the support (cell centers for lattices).
    pub fn support_radius(&self) -> f64 {
        match self {
            Self::Piecewise(g) => g.support_radius(),
            Self::Lattice(g) => g.support_radius(),
        }
    }

    /// Smallest radius of a nonzero part of `f`, zero if `f` reaches the origin.
    pub fn inner_radius(&self) -> f64 {
        match self {
            Self::Piecewise(g) => g
                .pieces()
                .filter(|&(_, _, v)| v != 0.0)
                .map(|(a, b, _)| if a < 0.0 && b > 0.0 { 0.0 } else { a.abs().min(b.abs()) })
                .fold(f64::INFINITY, f64::min),
            Self::Lattice(g) => g
                .values()
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(i, _)| if g.touches_origin(i) { 0.0 } else { g.center_radius(i) })
                .fold(f64::INFINITY, f64::min),
        }
    }
}
