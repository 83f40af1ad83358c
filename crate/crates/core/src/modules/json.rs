use serde::{Deserialize, Serialize};

use crate::cartan::{CartanDatum, Weight};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfield::ExactScalar;

use super::WeightModule;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpaceJson {
    pub weight: Weight,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub op: String,
    pub i: usize,
    pub weight: Weight,
    pub matrix: Vec<Vec<ExactScalar>>,
}

/// Deterministic JSON form of a module: weights ascending, blocks by (op, i, weight).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub cartan: String,
    pub qpower: i64,
    pub highest_weight: Option<Weight>,
    pub truncation_depth: Option<usize>,
    pub spaces: Vec<WeightSpaceJson>,
    pub blocks: Vec<BlockJson>,
}

impl ModuleJson {
    pub fn from_module(m: &WeightModule) -> Self {
        let spaces = m
            .weights()
            .iter()
            .map(|w| WeightSpaceJson {
                weight: w.clone(),
                labels: m.labels()[m.weight_range(w)].to_vec(),
            })
            .collect();
        let mut blocks = Vec::new();
        for (op, raise) in [("E", true), ("F", false)] {
            for i in 0..m.rank() {
                for w in m.weights() {
                    let b = if raise { m.e_block(i, w) } else { m.f_block(i, w) };
                    if let Some(b) = b {
                        blocks.push(BlockJson {
                            op: op.into(),
                            i,
                            weight: w.clone(),
                            matrix: (0..b.rows()).map(|r| b.row(r).to_vec()).collect(),
                        });
                    }
                }
            }
        }
        ModuleJson {
            cartan: m.datum.name.clone(),
            qpower: m.qpower,
            highest_weight: m.highest_weight.as_ref().map(|(w, _)| w.clone()),
            truncation_depth: m.truncation_depth,
            spaces,
            blocks,
        }
    }

    pub fn to_module(&self) -> Result<WeightModule> {
        let datum = CartanDatum::from_name(&self.cartan)?;
        let dims = self.spaces.iter().map(|s| (s.weight.clone(), s.labels.len())).collect();
        let labels = self.spaces.iter().flat_map(|s| s.labels.iter().cloned()).collect();
        let mut m = WeightModule::with_spaces(datum, self.qpower, dims, labels);
        for b in &self.blocks {
            let cols = b.matrix.first().map_or(0, Vec::len);
            let mat = Matrix::from_rows(b.matrix.clone(), cols);
            match b.op.as_str() {
                "E" => m.set_e_block(b.i, &b.weight, mat)?,
                "F" => m.set_f_block(b.i, &b.weight, mat)?,
                o => return Err(Error::Parse(format!("unknown operator '{}'", o))),
            }
        }
        if let Some(hw) = &self.highest_weight {
            let g = m.weight_range(hw).start;
            m.highest_weight = Some((hw.clone(), g));
        }
        m.truncation_depth = self.truncation_depth;
        Ok(m)
    }
}

impl WeightModule {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ModuleJson::from_module(self)).expect("module serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::irreducible;

    #[test]
    fn round_trip() {
        let a2 = CartanDatum::from_name("A2").unwrap();
        let m = irreducible(&a2, &Weight(vec![1, 1])).unwrap();
        let j = ModuleJson::from_module(&m);
        let text = serde_json::to_string(&j).unwrap();
        let back: ModuleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let m2 = back.to_module().unwrap();
        for w in m.weights() {
            for i in 0..2 {
                assert_eq!(m.e_block(i, w), m2.e_block(i, w));
                assert_eq!(m.f_block(i, w), m2.f_block(i, w));
            }
        }
    }
}
