//! JSON text form of (weighted) meanders.
//!
//! ```json
//! {"n": 3, "start_side": "N", "order": [3, 2, 1], "weights": {"e0N": "1/8", "rootB": "1/4"}}
//! ```
//!
//! Weight keys are canonical region ids (`e<leftmost segment><N|S>`, or
//! `rootB` / `rootW`); weights are `"p/q"` strings. `weights` is optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use super::{Meander, RegionId, Side, WeightedMeander};
use crate::error::{Error, Result};
use crate::rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanderFile {
    pub n: usize,
    pub start_side: String,
    pub order: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedMeander {
    Plain(Meander),
    Weighted(WeightedMeander),
}

impl ParsedMeander {
    pub fn meander(&self) -> &Meander {
        match self {
            ParsedMeander::Plain(m) => m,
            ParsedMeander::Weighted(wm) => &wm.meander,
        }
    }
}

impl MeanderFile {
    pub fn from_meander(m: &Meander) -> MeanderFile {
        MeanderFile {
            n: m.n(),
            start_side: m.start_side.letter().to_string(),
            order: m.order.clone(),
            weights: None,
        }
    }

    pub fn from_weighted(wm: &WeightedMeander) -> MeanderFile {
        let mut file = MeanderFile::from_meander(&wm.meander);
        file.weights = Some(
            wm.weights.iter().map(|(id, w)| (id.to_string(), rational::format(w))).collect(),
        );
        file
    }

    /// Structural decoding only; call the validators for semantic checks.
    pub fn decode(&self) -> Result<ParsedMeander> {
        if self.n != self.order.len() {
            return Err(Error::Parse(format!(
                "n = {} but order has {} entries",
                self.n,
                self.order.len()
            )));
        }
        let meander = Meander { start_side: Side::from_letter(&self.start_side)?, order: self.order.clone() };
        match &self.weights {
            None => Ok(ParsedMeander::Plain(meander)),
            Some(map) => {
                let mut weights = BTreeMap::new();
                for (k, v) in map {
                    let id: RegionId = k.parse()?;
                    weights.insert(id, rational::parse(v)?);
                }
                Ok(ParsedMeander::Weighted(WeightedMeander { meander, weights }))
            }
        }
    }

    pub fn parse(text: &str) -> Result<ParsedMeander> {
        let file: MeanderFile = serde_json::from_str(text)?;
        file.decode()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

pub(crate) fn ser_region_id<S: Serializer>(id: &RegionId, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&id.to_string())
}
