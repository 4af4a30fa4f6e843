//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "var-example",
//!   "space": { "labels": ["E", "F", "G"], "probs": ["1/4", "1/4", "1/2"] },
//!   "assets": [ { "payoff": [1, 1, 1], "price": 1 },
//!               { "payoff": [1, 0, -1], "price": 0 } ],
//!   "acceptance": { "type": "var", "alpha": "1/4" },
//!   "positions": { "shock": ["0", "-1/5", "0"] },
//!   "probes": [ { "base": [0, 0, 0], "direction": [0, -1, 0], "epsilon": "1/10" } ]
//! }
//! ```
//!
//! Rationals are integers or strings `"p/q"`; float literals are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::acceptance::{AcceptanceSet, AnalyticSet, Row};
use crate::error::{Error, Result};
use crate::model::{market_from_assets, FiniteSampleSpace, ProblemInstance};
use crate::rational::{unwrap_vec, wrap_vec, JsonRat, Rat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub probs: Vec<JsonRat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssetJson {
    pub payoff: Vec<JsonRat>,
    pub price: JsonRat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowJson {
    pub phi: Vec<JsonRat>,
    pub rhs: JsonRat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum AcceptanceJson {
    Es {
        alpha: JsonRat,
    },
    Var {
        alpha: JsonRat,
    },
    Scenario {
        event: Vec<usize>,
    },
    Polyhedral {
        rows: Vec<RowJson>,
    },
    Genscen {
        measures: Vec<Vec<JsonRat>>,
        floors: Vec<JsonRat>,
    },
    Utility {
        kind: String,
        a: JsonRat,
        floor: JsonRat,
    },
    Analytic {
        id: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeJson {
    pub base: Vec<JsonRat>,
    pub direction: Vec<JsonRat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<JsonRat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default)]
    pub name: String,
    pub space: SpaceJson,
    pub assets: Vec<AssetJson>,
    pub acceptance: AcceptanceJson,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub positions: BTreeMap<String, Vec<JsonRat>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<ProbeJson>,
}

impl AcceptanceJson {
    pub fn to_acceptance(&self) -> Result<AcceptanceSet> {
        Ok(match self {
            AcceptanceJson::Es { alpha } => AcceptanceSet::ExpectedShortfall {
                alpha: alpha.0.clone(),
            },
            AcceptanceJson::Var { alpha } => AcceptanceSet::ValueAtRisk {
                alpha: alpha.0.clone(),
            },
            AcceptanceJson::Scenario { event } => AcceptanceSet::Scenario {
                event: event.clone(),
            },
            AcceptanceJson::Polyhedral { rows } => AcceptanceSet::Polyhedral {
                rows: rows
                    .iter()
                    .map(|r| Row {
                        phi: unwrap_vec(&r.phi),
                        rhs: r.rhs.0.clone(),
                    })
                    .collect(),
            },
            AcceptanceJson::Genscen { measures, floors } => AcceptanceSet::GeneralizedScenarios {
                measures: measures.iter().map(|q| unwrap_vec(q)).collect(),
                floors: unwrap_vec(floors),
            },
            AcceptanceJson::Utility { kind, a, floor } => {
                if kind != "exp" {
                    return Err(Error::BadParameter(format!(
                        "unsupported utility kind {kind:?}"
                    )));
                }
                AcceptanceSet::ExpUtility {
                    a: a.0.clone(),
                    floor: floor.0.clone(),
                }
            }
            AcceptanceJson::Analytic { id } => AcceptanceSet::Analytic(AnalyticSet::from_id(id)?),
        })
    }

    pub fn from_acceptance(acc: &AcceptanceSet) -> Self {
        match acc {
            AcceptanceSet::ExpectedShortfall { alpha } => AcceptanceJson::Es {
                alpha: JsonRat(alpha.clone()),
            },
            AcceptanceSet::ValueAtRisk { alpha } => AcceptanceJson::Var {
                alpha: JsonRat(alpha.clone()),
            },
            AcceptanceSet::Scenario { event } => AcceptanceJson::Scenario {
                event: event.clone(),
            },
            AcceptanceSet::Polyhedral { rows } => AcceptanceJson::Polyhedral {
                rows: rows
                    .iter()
                    .map(|r| RowJson {
                        phi: wrap_vec(&r.phi),
                        rhs: JsonRat(r.rhs.clone()),
                    })
                    .collect(),
            },
            AcceptanceSet::GeneralizedScenarios { measures, floors } => AcceptanceJson::Genscen {
                measures: measures.iter().map(|q| wrap_vec(q)).collect(),
                floors: wrap_vec(floors),
            },
            AcceptanceSet::ExpUtility { a, floor } => AcceptanceJson::Utility {
                kind: "exp".into(),
                a: JsonRat(a.clone()),
                floor: JsonRat(floor.clone()),
            },
            AcceptanceSet::Analytic(which) => AcceptanceJson::Analytic {
                id: which.id().into(),
            },
        }
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("instance file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        InstanceFile::parse(&text)
    }

    pub fn to_instance(&self) -> Result<ProblemInstance> {
        let probs = unwrap_vec(&self.space.probs);
        let space = match &self.space.labels {
            Some(labels) => FiniteSampleSpace::new(labels.clone(), probs)?,
            None => FiniteSampleSpace::with_probs(probs)?,
        };
        let assets: Vec<(Vec<Rat>, Rat)> = self
            .assets
            .iter()
            .map(|a| (unwrap_vec(&a.payoff), a.price.0.clone()))
            .collect();
        let market = market_from_assets(&space, &assets)?;
        let acceptance = self.acceptance.to_acceptance()?;
        let name = if self.name.is_empty() {
            "instance"
        } else {
            &self.name
        };
        let inst = ProblemInstance::new(name, space, market, acceptance)?;
        for (key, v) in &self.positions {
            if v.len() != inst.n_atoms() {
                return Err(Error::DimensionMismatch(format!(
                    "position {key:?} has {} entries",
                    v.len()
                )));
            }
        }
        Ok(inst)
    }

    pub fn from_instance(inst: &ProblemInstance) -> Self {
        let assets = (0..inst.n_assets())
            .map(|i| AssetJson {
                payoff: wrap_vec(&inst.market.asset_payoff(i)),
                price: JsonRat(inst.market.prices()[i].clone()),
            })
            .collect();
        InstanceFile {
            name: inst.name.clone(),
            space: SpaceJson {
                labels: Some(inst.space.labels().to_vec()),
                probs: wrap_vec(inst.space.probs()),
            },
            assets,
            acceptance: AcceptanceJson::from_acceptance(&inst.acceptance),
            positions: BTreeMap::new(),
            probes: Vec::new(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn named_positions(&self) -> BTreeMap<String, Vec<Rat>> {
        self.positions
            .iter()
            .map(|(k, v)| (k.clone(), unwrap_vec(v)))
            .collect()
    }
}

/// Reads a position argument: `0`, a vector such as `(1,0,-1/2)`, a name
/// from `named`, or a sum of labelled atom indicators such as `-1F` or
/// `1/2E+G`.
pub fn parse_position(
    text: &str,
    space: &FiniteSampleSpace,
    named: &BTreeMap<String, Vec<Rat>>,
) -> Result<Vec<Rat>> {
    let n = space.n_atoms();
    let t = text.trim();
    if t == "0" {
        return Ok(vec![Rat::from_integer(0.into()); n]);
    }
    if let Some(v) = named.get(t) {
        return Ok(v.clone());
    }
    if t.starts_with(['(', '[']) || t.contains(',') {
        let v = crate::rational::parse_vec(t)?;
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "position {t:?} has {} entries, expected {n}",
                v.len()
            )));
        }
        return Ok(v);
    }
    if n == 1 {
        if let Ok(r) = crate::rational::parse_rat(t) {
            return Ok(vec![r]);
        }
    }
    parse_indicator_sum(t, space)
}

fn parse_indicator_sum(t: &str, space: &FiniteSampleSpace) -> Result<Vec<Rat>> {
    let bad = || Error::InvalidInput(format!("cannot read position {t:?}"));
    let mut out = vec![Rat::from_integer(0.into()); space.n_atoms()];
    let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    if chars.is_empty() {
        return Err(bad());
    }
    while i < chars.len() {
        let mut sign = 1;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/' || chars[i] == '.') {
            i += 1;
        }
        let coeff: String = chars[start..i].iter().collect();
        let label_start = i;
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        let label: String = chars[label_start..i].iter().collect();
        if label.is_empty() {
            return Err(bad());
        }
        let atom = space
            .atom_index(&label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown atom label {label:?}")))?;
        let mut c = if coeff.is_empty() {
            Rat::from_integer(1.into())
        } else {
            crate::rational::parse_rat(&coeff)?
        };
        if sign < 0 {
            c = -c;
        }
        out[atom] += c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::FixtureId;
    use crate::rational::{int, rat};

    const P2_JSON: &str = r#"{
        "name": "var",
        "space": { "labels": ["E", "F", "G"], "probs": ["1/4", "1/4", "1/2"] },
        "assets": [ { "payoff": [1, 1, 1], "price": 1 }, { "payoff": [1, 0, -1], "price": 0 } ],
        "acceptance": { "type": "var", "alpha": "1/4" },
        "positions": { "shock": ["0", "-1/5", "0"] }
    }"#;

    #[test]
    fn reads_var_instance() {
        let f = InstanceFile::parse(P2_JSON).unwrap();
        let inst = f.to_instance().unwrap();
        assert_eq!(inst.compiled, FixtureId::P2VarLsc.build().compiled);
        let named = f.named_positions();
        assert_eq!(named["shock"], vec![int(0), rat(-1, 5), int(0)]);
    }

    #[test]
    fn rejects_float_literals() {
        let text = P2_JSON.replace("\"1/4\" }", "0.25 }");
        assert!(matches!(
            InstanceFile::parse(&text),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn every_acceptance_tag_parses() {
        for (json, ok) in [
            (r#"{"type":"es","alpha":"1/2"}"#, true),
            (r#"{"type":"scenario","event":[0,1]}"#, true),
            (
                r#"{"type":"polyhedral","rows":[{"phi":[1,0,0],"rhs":0}]}"#,
                true,
            ),
            (
                r#"{"type":"genscen","measures":[["1/3","1/3","1/3"]],"floors":["-1"]}"#,
                true,
            ),
            (
                r#"{"type":"utility","kind":"exp","a":"1","floor":"0"}"#,
                true,
            ),
            (
                r#"{"type":"utility","kind":"power","a":"1","floor":"0"}"#,
                false,
            ),
            (r#"{"type":"analytic","id":"nope"}"#, false),
        ] {
            let acc: AcceptanceJson = serde_json::from_str(json).unwrap();
            assert_eq!(acc.to_acceptance().is_ok(), ok, "{json}");
        }
    }

    #[test]
    fn fixtures_round_trip_through_json() {
        for f in FixtureId::ALL {
            let inst = f.build();
            let text = InstanceFile::from_instance(&inst).to_json_string();
            let back = InstanceFile::parse(&text).unwrap().to_instance().unwrap();
            assert_eq!(back.compiled, inst.compiled);
            assert_eq!(back.market, inst.market);
        }
    }

    #[test]
    fn position_forms() {
        let s = crate::fixtures::p2_space();
        let none = BTreeMap::new();
        assert_eq!(parse_position("0", &s, &none).unwrap(), vec![int(0); 3]);
        assert_eq!(
            parse_position("-1F", &s, &none).unwrap(),
            vec![int(0), int(-1), int(0)]
        );
        assert_eq!(
            parse_position("1/2E-G", &s, &none).unwrap(),
            vec![rat(1, 2), int(0), int(-1)]
        );
        assert_eq!(
            parse_position("(1,0,-1/2)", &s, &none).unwrap(),
            vec![int(1), int(0), rat(-1, 2)]
        );
        assert!(parse_position("(1,0)", &s, &none).is_err());
        assert!(parse_position("-1Q", &s, &none).is_err());
    }
}
