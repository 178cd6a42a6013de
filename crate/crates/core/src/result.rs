use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

/// Which route produced a resistance value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    ClosedFormSameRadial,
    ClosedFormSameTransverse,
    Spectral,
    SpectralDoubleSum,
    RecursionTransform,
    OracleFloat,
    OracleRational,
    OracleEigen,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::ClosedFormSameRadial => "closed-radial",
            Method::ClosedFormSameTransverse => "closed-transverse",
            Method::Spectral => "spectral",
            Method::SpectralDoubleSum => "spectral-double",
            Method::RecursionTransform => "rt",
            Method::OracleFloat => "oracle-float",
            Method::OracleRational => "oracle-rational",
            Method::OracleEigen => "oracle-eigen",
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A resistance in ohms together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResistanceResult {
    pub ohms: f64,
    pub method: Method,
    /// Exact value, for the rational oracle.
    #[serde(serialize_with = "serialize_exact", skip_serializing_if = "Option::is_none")]
    pub exact: Option<BigRational>,
    /// The node pair was reversed to put the input column left of the output.
    pub swapped: bool,
    /// Number of mode terms summed (0 for direct solves).
    pub terms: usize,
}

impl ResistanceResult {
    pub(crate) fn new(ohms: f64, method: Method) -> Self {
        ResistanceResult {
            ohms,
            method,
            exact: None,
            swapped: false,
            terms: 0,
        }
    }

    pub(crate) fn with_terms(mut self, terms: usize) -> Self {
        self.terms = terms;
        self
    }

    pub(crate) fn with_swapped(mut self, swapped: bool) -> Self {
        self.swapped = swapped;
        self
    }
}

fn serialize_exact<S: Serializer>(value: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(q) => s.collect_str(q),
        None => s.serialize_none(),
    }
}
