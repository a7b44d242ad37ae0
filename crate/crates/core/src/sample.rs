use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::Transform;

/// A nonempty list of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SampleVector(Vec<f64>);

impl SampleVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Checks that every observation lies in the domain of `t`.
    pub fn check_domain(&self, t: &Transform) -> Result<()> {
        let domain = t.domain();
        match self.0.iter().position(|&v| !domain.contains(v)) {
            None => Ok(()),
            Some(index) => Err(Error::ObservationOutsideDomain {
                index,
                value: self.0[index],
                domain: domain.to_string(),
            }),
        }
    }
}

impl Deref for SampleVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for SampleVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SampleVector> for Vec<f64> {
    fn from(s: SampleVector) -> Self {
        s.0
    }
}
