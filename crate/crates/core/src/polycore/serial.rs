use serde::{Deserialize, Serialize};

use super::rational::{format_ratio, parse_ratio};
use super::{GaussianRational, MultiPoly, PolyError};

/// Text form of a [`MultiPoly`]: the variable header plus one record per term,
/// with exact `p/q` strings for both coefficient parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub vars: Vec<String>,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub re: String,
    pub im: String,
}

impl From<&MultiPoly> for PolyRecord {
    fn from(p: &MultiPoly) -> Self {
        PolyRecord {
            vars: p.vars().to_vec(),
            terms: p
                .terms()
                .iter()
                .map(|(e, c)| TermRecord {
                    exponents: e.clone(),
                    re: format_ratio(&c.re),
                    im: format_ratio(&c.im),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyRecord> for MultiPoly {
    type Error = PolyError;

    fn try_from(r: &PolyRecord) -> Result<Self, PolyError> {
        for (i, v) in r.vars.iter().enumerate() {
            if r.vars[..i].contains(v) {
                return Err(PolyError::BadRecord(format!("duplicate variable `{v}`")));
            }
        }
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in &r.terms {
            if t.exponents.len() != r.vars.len() {
                return Err(PolyError::BadRecord(format!(
                    "term has {} exponents for {} variables",
                    t.exponents.len(),
                    r.vars.len()
                )));
            }
            let c = GaussianRational::new(parse_ratio(&t.re)?, parse_ratio(&t.im)?);
            terms.push((t.exponents.clone(), c));
        }
        Ok(MultiPoly::from_terms(&r.vars, terms))
    }
}

impl MultiPoly {
    pub fn to_record(&self) -> PolyRecord {
        PolyRecord::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("polynomial records always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("polynomial records always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        let r: PolyRecord = serde_json::from_str(s)?;
        MultiPoly::try_from(&r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_layout() {
        let p = MultiPoly::from_terms(
            &["x", "y"],
            [
                (vec![2, 0], GaussianRational::from_int(1)),
                (vec![0, 1], GaussianRational::ratio(-3, 2)),
            ],
        );
        let json = p.to_json();
        assert_eq!(
            json,
            r#"{"vars":["x","y"],"terms":[{"exponents":[0,1],"re":"-3/2","im":"0/1"},{"exponents":[2,0],"re":"1/1","im":"0/1"}]}"#
        );
        let back = MultiPoly::from_json(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(MultiPoly::from_json(r#"{"vars":["x"],"terms":[{"exponents":[1,1],"re":"1","im":"0"}]}"#).is_err());
        assert!(MultiPoly::from_json(r#"{"vars":["x","x"],"terms":[]}"#).is_err());
        assert!(MultiPoly::from_json(r#"{"vars":["x"],"terms":[{"exponents":[1],"re":"1/0","im":"0"}]}"#).is_err());
    }
}
