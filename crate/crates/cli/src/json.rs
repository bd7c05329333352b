//! JSON records. Coefficients travel as decimal strings with enough digits
//! to round-trip the run precision.

use serde::{Deserialize, Serialize};

use puiseux::expansion::{Branch, BranchSet};
use puiseux::numeric::{Coeff, Ctx};
use puiseux::triple::{Structure, TripleReport};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

impl ComplexJson {
    pub fn from_coeff(ctx: &Ctx, c: &Coeff, digits: usize) -> Self {
        let c = ctx.chop(c);
        ComplexJson {
            re: c.re_decimal(digits),
            im: c.im_decimal(digits),
        }
    }

    pub fn to_coeff(&self, ctx: &Ctx) -> Result<Coeff, CliError> {
        let part = |s: &str| {
            ctx.float_from_decimal(s)
                .ok_or_else(|| CliError::input(format!("'{s}' is not a decimal number")))
        };
        Ok(Coeff::new(part(&self.re)?, part(&self.im)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub re: String,
    pub im: String,
    /// Power of T.
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentJson {
    pub c: ComplexJson,
    pub d: ComplexJson,
}

fn one() -> u32 {
    1
}

/// One branch (T^r, Σ a_k T^k).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRecordJson {
    pub r: u32,
    pub terms: Vec<TermJson>,
    pub multiplicity: u32,
    pub tangent: TangentJson,
    pub exact: bool,
    pub truncation_order: u32,
    #[serde(default)]
    pub vertical: bool,
    #[serde(default = "one")]
    pub repetition: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<String>,
}

impl BranchRecordJson {
    pub fn from_branch(ctx: &Ctx, b: &Branch, digits: usize) -> Self {
        BranchRecordJson {
            r: b.r,
            terms: b
                .terms
                .iter()
                .map(|(c, e)| {
                    let z = ComplexJson::from_coeff(ctx, c, digits);
                    TermJson {
                        re: z.re,
                        im: z.im,
                        exp: *e,
                    }
                })
                .collect(),
            multiplicity: b.branch_mult,
            tangent: TangentJson {
                c: ComplexJson::from_coeff(ctx, &b.tangent.0, digits),
                d: ComplexJson::from_coeff(ctx, &b.tangent.1, digits),
            },
            exact: b.exact,
            truncation_order: b.truncation_order,
            vertical: b.vertical,
            repetition: b.repetition,
            stop: Some(b.stop.to_string()),
        }
    }

    /// The series as (coefficient, T-exponent) pairs, checked for shape.
    pub fn series(&self, ctx: &Ctx) -> Result<Vec<(Coeff, u32)>, CliError> {
        if self.r == 0 {
            return Err(CliError::input("record has r = 0"));
        }
        if self.terms.windows(2).any(|w| w[0].exp >= w[1].exp) {
            return Err(CliError::input("record exponents must increase"));
        }
        self.terms
            .iter()
            .map(|t| {
                let z = ComplexJson {
                    re: t.re.clone(),
                    im: t.im.clone(),
                };
                Ok((z.to_coeff(ctx)?, t.exp))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchesJson {
    pub point: [ComplexJson; 2],
    pub point_multiplicity: u32,
    pub branches: Vec<BranchRecordJson>,
}

impl BranchesJson {
    pub fn new(ctx: &Ctx, point: &(Coeff, Coeff), set: &BranchSet, digits: usize) -> Self {
        BranchesJson {
            point: [
                ComplexJson::from_coeff(ctx, &point.0, digits),
                ComplexJson::from_coeff(ctx, &point.1, digits),
            ],
            point_multiplicity: set.point_multiplicity,
            branches: set
                .branches
                .iter()
                .map(|b| BranchRecordJson::from_branch(ctx, b, digits))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleJson {
    /// "3-branch", "2+1" or "1+1+1".
    pub structure: String,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_s: Option<u32>,
    pub trace: Vec<String>,
    pub n_423_steps: usize,
    pub transform: String,
    /// The branches below parameterize this polynomial.
    pub normal_form: String,
    pub branches: Vec<BranchRecordJson>,
}

impl TripleJson {
    pub fn new(ctx: &Ctx, rep: &TripleReport, digits: usize) -> Self {
        let (structure, type_s) = match rep.structure {
            Structure::ThreeBranch(s) => ("3-branch", Some(s)),
            Structure::TwoPlusOne => ("2+1", None),
            Structure::OneOneOne => ("1+1+1", None),
        };
        TripleJson {
            structure: structure.to_string(),
            type_s,
            trace: rep.trace.iter().map(|l| l.to_string()).collect(),
            n_423_steps: rep.n_423_steps,
            transform: rep.transform.to_string(),
            normal_form: rep.normal_form.to_canonical_string(),
            branches: rep
                .branches
                .branches
                .iter()
                .map(|b| BranchRecordJson::from_branch(ctx, b, digits))
                .collect(),
        }
    }
}

/// Records from a single record, or from any report with a "branches" list.
pub fn records_from_str(text: &str) -> Result<Vec<BranchRecordJson>, CliError> {
    let bad = |e: serde_json::Error| CliError::input(format!("branch JSON: {e}"));
    let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
    match value.get("branches") {
        Some(list) => serde_json::from_value(list.clone()).map_err(bad),
        None => Ok(vec![serde_json::from_value(value).map_err(bad)?]),
    }
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}
