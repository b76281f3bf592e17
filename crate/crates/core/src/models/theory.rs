//! Theories as a finite state space plus a selection function θ ↦ σ(θ).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{canonical_permute, is_fully_symmetric_model, permute_class, FiniteModel, ModelJson};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Theory {
    state_space: Vec<FiniteModel>,
    selection: BTreeMap<String, BTreeSet<usize>>,
}

/// `{"space": [model, ...], "selection": {"theta1": [indices...]}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryJson {
    pub space: Vec<ModelJson>,
    pub selection: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GpcReport {
    pub fixed: bool,
    pub permutable: bool,
    /// General permutability is open to adopt only for permutable theories.
    pub general_permutability_admissible: bool,
    /// Fixed theories are generally permutable whatever the interpretation.
    pub general_permutability_forced: bool,
    /// fixity without permutability, impossible for a correct implementation
    pub violation: bool,
}

impl Theory {
    pub fn new(state_space: Vec<FiniteModel>, selection: BTreeMap<String, BTreeSet<usize>>) -> Result<Self> {
        if let Some(first) = state_space.first() {
            if let Some(bad) = state_space.iter().position(|m| !m.same_signature(first)) {
                return Err(Error::IllFormedTheory(format!(
                    "model {bad} does not share the domain and signature of model 0"
                )));
            }
        }
        for (theta, chosen) in &selection {
            if let Some(&i) = chosen.iter().find(|&&i| i >= state_space.len()) {
                return Err(Error::IllFormedTheory(format!("{theta} selects index {i} outside the state space")));
            }
        }
        Ok(Theory { state_space, selection })
    }

    pub fn from_json(json: &TheoryJson) -> Result<Self> {
        let space = json.space.iter().map(ModelJson::to_model).collect::<Result<Vec<_>>>()?;
        let selection = json.selection.iter().map(|(k, v)| (k.clone(), v.iter().copied().collect())).collect();
        Theory::new(space, selection)
    }

    pub fn to_json(&self) -> TheoryJson {
        TheoryJson {
            space: self.state_space.iter().map(FiniteModel::to_json).collect(),
            selection: self.selection.iter().map(|(k, v)| (k.clone(), v.iter().copied().collect())).collect(),
        }
    }

    pub fn state_space(&self) -> &[FiniteModel] {
        &self.state_space
    }

    pub fn selection(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.selection
    }

    pub fn selected(&self, theta: &str) -> Option<Vec<&FiniteModel>> {
        self.selection.get(theta).map(|idx| idx.iter().map(|&i| &self.state_space[i]).collect())
    }

    /// Every σ(θ) is closed under permutes. A permute of a selected model that
    /// is missing from the state space makes the theory ill-formed.
    pub fn is_permutable(&self) -> Result<bool> {
        let space: BTreeSet<&FiniteModel> = self.state_space.iter().collect();
        let mut closed = true;
        for (theta, chosen) in &self.selection {
            let selected: BTreeSet<&FiniteModel> = chosen.iter().map(|&i| &self.state_space[i]).collect();
            for &m in &selected {
                for permute in permute_class(m)? {
                    if !space.contains(&permute) {
                        return Err(Error::IllFormedTheory(format!(
                            "a permute of a model selected by {theta} is absent from the state space"
                        )));
                    }
                    closed &= selected.contains(&permute);
                }
            }
        }
        Ok(closed)
    }

    /// Every selected model is fully symmetric.
    pub fn has_fixity(&self) -> Result<bool> {
        for chosen in self.selection.values() {
            for &i in chosen {
                if !is_fully_symmetric_model(&self.state_space[i])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Classifies the theory and checks fixity ⇒ permutability. Ill-formed
    /// theories count as non-permutable.
    pub fn gpc_check(&self) -> Result<GpcReport> {
        let fixed = self.has_fixity()?;
        let permutable = match self.is_permutable() {
            Ok(p) => p,
            Err(Error::IllFormedTheory(_)) => false,
            Err(e) => return Err(e),
        };
        Ok(GpcReport {
            fixed,
            permutable,
            general_permutability_admissible: permutable,
            general_permutability_forced: fixed,
            violation: fixed && !permutable,
        })
    }

    /// Each σ(θ) collapsed to one canonical representative per permute class.
    pub fn quotient_selection(&self) -> Result<BTreeMap<String, Vec<FiniteModel>>> {
        if !self.is_permutable()? {
            return Err(Error::Precondition("quotient requires a permutable theory".into()));
        }
        let mut out = BTreeMap::new();
        for (theta, chosen) in &self.selection {
            let mut reps: BTreeMap<String, FiniteModel> = BTreeMap::new();
            for &i in chosen {
                let rep = canonical_permute(&self.state_space[i])?;
                reps.insert(rep.serialized(), rep);
            }
            out.insert(theta.clone(), reps.into_values().collect());
        }
        Ok(out)
    }
}
