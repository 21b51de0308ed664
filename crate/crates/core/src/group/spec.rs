use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One free abelian factor `Z^rank` of the ambient free product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub name: String,
    pub rank: usize,
    pub peripheral: bool,
    #[serde(rename = "generators")]
    pub generator_names: Vec<String>,
}

impl Factor {
    pub fn new(name: &str, peripheral: bool, generators: &[&str]) -> Self {
        Factor {
            name: name.to_string(),
            rank: generators.len(),
            peripheral,
            generator_names: generators.iter().map(|g| g.to_string()).collect(),
        }
    }
}

/// Position of a generator: factor index and coordinate inside that factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenId {
    pub factor: usize,
    pub coord: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    factors: Vec<Factor>,
}

/// The ambient group `G = A_0 * A_1 * ... * A_{m-1}` with each `A_i` free
/// abelian. Peripheral factors are the subgroups collapsed in the coned-off
/// graph; non-peripheral factors must be infinite cyclic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<Factor>,
    generators: Vec<GenId>,
    by_name: HashMap<String, GenId>,
}

impl GroupSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Config("a group needs at least one factor".into()));
        }
        let mut by_name = HashMap::new();
        let mut generators = Vec::new();
        for (fi, f) in factors.iter().enumerate() {
            if f.rank == 0 {
                return Err(Error::Config(format!("factor `{}` has rank 0", f.name)));
            }
            if f.generator_names.len() != f.rank {
                return Err(Error::Config(format!(
                    "factor `{}` has rank {} but {} generator names",
                    f.name,
                    f.rank,
                    f.generator_names.len()
                )));
            }
            if !f.peripheral && f.rank != 1 {
                return Err(Error::Config(format!(
                    "non-peripheral factor `{}` must have rank 1 (got {})",
                    f.name, f.rank
                )));
            }
            for (ci, g) in f.generator_names.iter().enumerate() {
                if g.is_empty() || g == "1" || g.contains(|c: char| c.is_whitespace() || c == '^') {
                    return Err(Error::Config(format!("invalid generator name `{g}`")));
                }
                let id = GenId { factor: fi, coord: ci };
                if by_name.insert(g.clone(), id).is_some() {
                    return Err(Error::Config(format!("duplicate generator name `{g}`")));
                }
                generators.push(id);
            }
        }
        Ok(GroupSpec { factors, generators, by_name })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("group config: {e}")))?;
        GroupSpec::new(file.factors)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        GroupSpec::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = SpecFile { factors: self.factors.clone() };
        serde_json::to_string_pretty(&file).expect("group spec serializes")
    }

    /// `F_2 = <a> * <b>`, no peripheral subgroups.
    pub fn free_group() -> Self {
        GroupSpec::new(vec![Factor::new("A", false, &["a"]), Factor::new("B", false, &["b"])])
            .expect("valid builtin")
    }

    /// `Z^2 * Z = <s,t | [s,t]> * <u>` with the `Z^2` factor peripheral.
    pub fn z2_star_z() -> Self {
        GroupSpec::new(vec![Factor::new("P", true, &["s", "t"]), Factor::new("C", false, &["u"])])
            .expect("valid builtin")
    }

    /// `Z^2 * Z^2 = <s,t> * <v,w>` with both factors peripheral.
    pub fn z2_star_z2() -> Self {
        GroupSpec::new(vec![Factor::new("P", true, &["s", "t"]), Factor::new("Q", true, &["v", "w"])])
            .expect("valid builtin")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &Factor {
        &self.factors[i]
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn rank(&self, factor: usize) -> usize {
        self.factors[factor].rank
    }

    pub fn is_peripheral(&self, factor: usize) -> bool {
        self.factors[factor].peripheral
    }

    pub fn peripheral_factors(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.factors.len()).filter(|&i| self.factors[i].peripheral)
    }

    /// Generators in canonical order: factor order, then coordinate order.
    pub fn generators(&self) -> &[GenId] {
        &self.generators
    }

    /// |X|, the size of the finite generating set.
    pub fn x_count(&self) -> usize {
        self.generators.len()
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn generator_name(&self, id: GenId) -> &str {
        &self.factors[id.factor].generator_names[id.coord]
    }
}
