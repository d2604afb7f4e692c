//! JSON document format for polynomials.
//!
//! ```json
//! {"generators":[{"id":"X"},{"id":"A","time":3}],
//!  "terms":[{"coeff":{"num":"1","den":"2"},"word":[0,1]}]}
//! ```
//!
//! `generators` lists every distinct generator in canonical order; words refer
//! to them by position. Terms appear in canonical order. Numerators and
//! denominators are decimal strings so arbitrarily large values survive.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Generator, NcAlgError, NcPoly, Scalar, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: CoeffDoc,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub generators: Vec<GeneratorDoc>,
    pub terms: Vec<TermDoc>,
}

impl From<&Generator> for GeneratorDoc {
    fn from(g: &Generator) -> Self {
        GeneratorDoc { id: g.id().to_string(), tag: g.tag().map(str::to_string), time: g.time() }
    }
}

impl TryFrom<&GeneratorDoc> for Generator {
    type Error = NcAlgError;
    fn try_from(d: &GeneratorDoc) -> Result<Self, NcAlgError> {
        Generator::try_new(&d.id)
            .map(|g| g.with_tag(d.tag.as_deref()).with_time(d.time))
            .ok_or(NcAlgError::EmptyGeneratorId)
    }
}

impl From<&NcPoly> for PolyDoc {
    fn from(p: &NcPoly) -> Self {
        let gens: Vec<Generator> = p.generators().into_iter().collect();
        let index: BTreeMap<&Generator, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let terms = p
            .terms()
            .map(|(w, c)| TermDoc {
                coeff: CoeffDoc { num: c.numer().to_string(), den: c.denom().to_string() },
                word: w.iter().map(|g| index[g]).collect(),
            })
            .collect();
        PolyDoc { generators: gens.iter().map(GeneratorDoc::from).collect(), terms }
    }
}

impl TryFrom<&PolyDoc> for NcPoly {
    type Error = NcAlgError;
    fn try_from(doc: &PolyDoc) -> Result<Self, NcAlgError> {
        let gens = doc.generators.iter().map(Generator::try_from).collect::<Result<Vec<_>, _>>()?;
        let mut p = NcPoly::zero();
        for t in &doc.terms {
            let num: BigInt = t.coeff.num.parse().map_err(|_| NcAlgError::BadCoefficient(t.coeff.num.clone()))?;
            let den: BigInt = t.coeff.den.parse().map_err(|_| NcAlgError::BadCoefficient(t.coeff.den.clone()))?;
            if den.is_zero() {
                return Err(NcAlgError::BadCoefficient(format!("{}/{}", t.coeff.num, t.coeff.den)));
            }
            let word = t
                .word
                .iter()
                .map(|&i| gens.get(i).cloned().ok_or(NcAlgError::GeneratorRef(i)))
                .collect::<Result<Word, _>>()?;
            p.add_term(word, Scalar::new(num, den));
        }
        Ok(p)
    }
}

pub fn to_json(p: &NcPoly) -> String {
    serde_json::to_string(&PolyDoc::from(p)).expect("polynomial documents always serialize")
}

pub fn from_json(s: &str) -> Result<NcPoly, NcAlgError> {
    let doc: PolyDoc = serde_json::from_str(s).map_err(|e| NcAlgError::Json(e.to_string()))?;
    NcPoly::try_from(&doc)
}
