use super::expr::{FormExpr, Node};
use crate::exactq::{parse_cyc, PuiseuxSeries};
use crate::{Error, Result};
use serde_json::{json, Value};

impl FormExpr {
    pub fn to_json(&self) -> Value {
        match self.node() {
            Node::Eis1(k) => json!({"tag": "EIS1", "k": k}),
            Node::Delta => json!({"tag": "DELTA"}),
            Node::DeltaInverse => json!({"tag": "DELTA_INV"}),
            Node::EisN { k, c, d, n } => json!({"tag": "EISN", "k": k, "c": c, "d": d, "N": n}),
            Node::Expansion { leaf, weight, level } => {
                json!({"tag": "EXPANSION", "weight": weight, "level": level, "series": leaf.series.to_json()})
            }
            Node::Const(c) => json!({"tag": "CONST", "value": c.to_string()}),
            Node::Sum { weight, terms } => json!({
                "tag": "SUM",
                "weight": weight,
                "terms": terms.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            }),
            Node::Product(fs) => json!({
                "tag": "PRODUCT",
                "factors": fs.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
            }),
            Node::Scale(c, f) => json!({"tag": "SCALE", "scalar": c.to_string(), "child": f.to_json()}),
            Node::Slash { atom, a, b, d } => json!({"tag": "SLASH", "matrix": [a, b, d], "child": atom.to_json()}),
            Node::Mu { a, b, d } => json!({"tag": "MU", "matrix": [a, b, d]}),
            Node::Serre(g) => json!({"tag": "SERRE", "child": g.to_json()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<FormExpr> {
        let bad = |what: &str| Error::Parse(format!("form: {}", what));
        let int = |key: &str| v[key].as_i64().ok_or_else(|| bad(key));
        let triple = || -> Result<(i64, i64, i64)> {
            let m = v["matrix"].as_array().filter(|m| m.len() == 3).ok_or_else(|| bad("matrix"))?;
            let e: Vec<i64> = m.iter().filter_map(|x| x.as_i64()).collect();
            if e.len() != 3 || e[0] <= 0 || e[2] <= 0 {
                return Err(bad("matrix"));
            }
            Ok((e[0], e[1], e[2]))
        };
        let child = || FormExpr::from_json(&v["child"]);
        let tag = v["tag"].as_str().ok_or_else(|| bad("tag"))?;
        Ok(match tag {
            "EIS1" => super::eisenstein(int("k")?)?,
            "DELTA" => super::delta(),
            "DELTA_INV" => super::delta_inverse(),
            "EISN" => super::eis_n(int("k")?, int("c")?, int("d")?, int("N")? as u64)?,
            "EXPANSION" => {
                FormExpr::expansion(PuiseuxSeries::from_json(&v["series"])?, int("weight")?, int("level")? as u64)
            }
            "CONST" => FormExpr::constant(parse_cyc(v["value"].as_str().ok_or_else(|| bad("value"))?)?),
            "SUM" => {
                let terms = v["terms"]
                    .as_array()
                    .ok_or_else(|| bad("terms"))?
                    .iter()
                    .map(FormExpr::from_json)
                    .collect::<Result<Vec<_>>>()?;
                let w = int("weight")?;
                for t in &terms {
                    if t.weight() != w {
                        return Err(Error::WeightMismatch(w, t.weight()));
                    }
                }
                FormExpr::sum(w, terms)
            }
            "PRODUCT" => FormExpr::product(
                v["factors"]
                    .as_array()
                    .ok_or_else(|| bad("factors"))?
                    .iter()
                    .map(FormExpr::from_json)
                    .collect::<Result<Vec<_>>>()?,
            ),
            "SCALE" => child()?.scale(&parse_cyc(v["scalar"].as_str().ok_or_else(|| bad("scalar"))?)?),
            "SLASH" => {
                let (a, b, d) = triple()?;
                FormExpr::slash_node(child()?, a, b, d)
            }
            "MU" => {
                let (a, b, d) = triple()?;
                FormExpr::mu_node(a, b, d)
            }
            "SERRE" => child()?.serre(),
            other => return Err(bad(&format!("unknown tag {}", other))),
        })
    }
}
