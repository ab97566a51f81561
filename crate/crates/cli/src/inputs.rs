//! Loading `--in` documents. Each file is classified by its keys.

use std::path::Path;
use std::sync::Arc;

use polycal::catalog::GeodesicNet;
use polycal::io::{Bundle, ChainJson, ComplexJson, GroupDescriptor, VarifoldJson};
use polycal::{BoundaryRegion, EmbeddedComplex, PolyhedralVarifold, SolverConfig};
use serde::Deserialize;
use serde_json::Value;

use crate::Failure;

#[derive(Debug, Deserialize)]
pub struct GroupNormRequest {
    pub group: GroupDescriptor,
    #[serde(default)]
    pub coords: Option<Vec<i64>>,
    #[serde(default)]
    pub value: Option<Value>,
    #[serde(default)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Default)]
pub struct Inputs {
    pub complex: Option<ComplexJson>,
    pub varifold: Option<VarifoldJson>,
    pub chain: Option<ChainJson>,
    pub groupnorm: Option<GroupNormRequest>,
    pub net: Option<GeodesicNet>,
    pub radius: Option<f64>,
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path, value: Value) -> Result<T, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn set<T>(slot: &mut Option<T>, value: T, what: &str, path: &Path) -> Result<(), Failure> {
    if slot.is_some() {
        return Err(Failure::Input(format!(
            "{}: a second {what} was supplied",
            path.display()
        )));
    }
    *slot = Some(value);
    Ok(())
}

impl Inputs {
    pub fn load(paths: &[impl AsRef<Path>]) -> Result<Self, Failure> {
        let mut inputs = Inputs::default();
        for path in paths {
            let path = path.as_ref();
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let value: Value =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            inputs.absorb(path, value)?;
        }
        Ok(inputs)
    }

    fn absorb(&mut self, path: &Path, value: Value) -> Result<(), Failure> {
        let has = |k: &str| value.get(k).is_some();
        if has("complex") {
            let bundle: Bundle = parse(path, value)?;
            set(&mut self.complex, bundle.complex, "complex", path)?;
            if let Some(v) = bundle.varifold {
                set(&mut self.varifold, v, "varifold", path)?;
            }
            if let Some(c) = bundle.chain {
                set(&mut self.chain, c, "chain", path)?;
            }
            if bundle.radius.is_some() {
                self.radius = bundle.radius;
            }
        } else if has("vertices") && has("simplices") {
            let c = parse(path, value)?;
            set(&mut self.complex, c, "complex", path)?;
        } else if has("weights") && has("dimension") {
            let v = parse(path, value)?;
            set(&mut self.varifold, v, "varifold", path)?;
        } else if has("terms") && has("group") {
            let c = parse(path, value)?;
            set(&mut self.chain, c, "chain", path)?;
        } else if has("group") {
            let g = parse(path, value)?;
            set(&mut self.groupnorm, g, "group-norm request", path)?;
        } else if has("rays") {
            let n = parse(path, value)?;
            set(&mut self.net, n, "geodesic net", path)?;
        } else {
            return Err(Failure::Input(format!("{}: unrecognized document", path.display())));
        }
        Ok(())
    }

    pub fn complex(&self) -> Result<(&ComplexJson, Arc<EmbeddedComplex>), Failure> {
        let json = self
            .complex
            .as_ref()
            .ok_or_else(|| Failure::Input("no complex supplied".into()))?;
        Ok((json, json.build()?))
    }

    pub fn varifold(&self) -> Result<(Arc<EmbeddedComplex>, PolyhedralVarifold, BoundaryRegion), Failure> {
        let (json, complex) = self.complex()?;
        let v = self
            .varifold
            .as_ref()
            .ok_or_else(|| Failure::Input("no varifold supplied".into()))?
            .build(&complex)?;
        let gamma = json.gamma(&complex, v.dim())?;
        Ok((complex, v, gamma))
    }
}

pub fn solver_config(path: Option<&Path>, seed: u64) -> Result<Option<SolverConfig>, Failure> {
    let Some(path) = path else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let explicit_seed = value.get("seed").is_some();
    let mut cfg: SolverConfig = parse(path, value)?;
    if !explicit_seed {
        cfg.seed = seed;
    }
    Ok(Some(cfg))
}
