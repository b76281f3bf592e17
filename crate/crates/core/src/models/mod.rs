//! Finite relational models ⟨S, R⟩ and their permutes.
//!
//! A domain permutation P acts on a model by s ∈ PR_i iff P⁻¹(s) ∈ R_i,
//! i.e. every tuple is mapped entrywise through P. Domain elements are held
//! as 0-based indices into the ordered domain list; permutations act on
//! 1-based positions as everywhere else in the crate.

mod formula;
mod sexpr;
mod theory;

pub use formula::{satisfies, state_description, structure_description, Formula, Term};
pub use sexpr::parse_formula;
pub use theory::{GpcReport, Theory, TheoryJson};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_ordered, Strategy};
use crate::symgroup::{Permutation, SymmetricGroup, N_MAX};

/// Largest domain for which permute classes are enumerated.
pub const MAX_DOMAIN: usize = N_MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<usize>>,
}

impl Relation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Vec<usize>>) -> Self {
        Relation { arity, tuples: tuples.into_iter().collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<usize>> {
        &self.tuples
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.tuples.contains(tuple)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteModel {
    domain: Vec<String>,
    relations: BTreeMap<String, Relation>,
}

impl FiniteModel {
    pub fn new(domain: Vec<String>, relations: BTreeMap<String, Relation>) -> Result<Self> {
        let unique: BTreeSet<&String> = domain.iter().collect();
        if unique.len() != domain.len() {
            return Err(Error::Model("domain names must be distinct".into()));
        }
        for (name, rel) in &relations {
            for t in &rel.tuples {
                if t.len() != rel.arity {
                    return Err(Error::Model(format!(
                        "tuple {t:?} of {name} has length {} but arity is {}",
                        t.len(),
                        rel.arity
                    )));
                }
                if t.iter().any(|&e| e >= domain.len()) {
                    return Err(Error::Model(format!("tuple {t:?} of {name} leaves the domain")));
                }
            }
        }
        Ok(FiniteModel { domain, relations })
    }

    /// Convenience constructor taking tuples by element name.
    pub fn from_names(domain: &[&str], relations: &[(&str, usize, &[&[&str]])]) -> Result<Self> {
        let domain: Vec<String> = domain.iter().map(|s| s.to_string()).collect();
        let mut rels = BTreeMap::new();
        for &(name, arity, tuples) in relations {
            let tuples = tuples
                .iter()
                .map(|t| t.iter().map(|x| index_of(&domain, x)).collect::<Result<Vec<_>>>())
                .collect::<Result<BTreeSet<_>>>()?;
            rels.insert(name.to_string(), Relation { arity, tuples });
        }
        FiniteModel::new(domain, rels)
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|x| x == name)
    }

    pub fn to_json(&self) -> ModelJson {
        ModelJson {
            domain: self.domain.clone(),
            relations: self
                .relations
                .iter()
                .map(|(name, rel)| {
                    let tuples =
                        rel.tuples.iter().map(|t| t.iter().map(|&e| self.domain[e].clone()).collect()).collect();
                    (name.clone(), RelationJson { arity: rel.arity, tuples })
                })
                .collect(),
        }
    }

    /// Canonical serialisation, used to order members of a permute class.
    pub fn serialized(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("model JSON is always serialisable")
    }

    /// Same domain and same relation signature.
    pub fn same_signature(&self, other: &FiniteModel) -> bool {
        self.domain == other.domain
            && self.relations.len() == other.relations.len()
            && self.relations.iter().zip(&other.relations).all(|((n1, r1), (n2, r2))| n1 == n2 && r1.arity == r2.arity)
    }
}

fn index_of(domain: &[String], name: &str) -> Result<usize> {
    domain.iter().position(|x| x == name).ok_or_else(|| Error::Model(format!("'{name}' is not in the domain")))
}

/// `{"domain": [...], "relations": {"R": {"arity": 2, "tuples": [["a1","a2"]]}}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub domain: Vec<String>,
    pub relations: BTreeMap<String, RelationJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationJson {
    pub arity: usize,
    pub tuples: Vec<Vec<String>>,
}

impl ModelJson {
    pub fn to_model(&self) -> Result<FiniteModel> {
        let mut rels = BTreeMap::new();
        for (name, rel) in &self.relations {
            let tuples = rel
                .tuples
                .iter()
                .map(|t| t.iter().map(|x| index_of(&self.domain, x)).collect::<Result<Vec<_>>>())
                .collect::<Result<BTreeSet<_>>>()?;
            rels.insert(name.clone(), Relation { arity: rel.arity, tuples });
        }
        FiniteModel::new(self.domain.clone(), rels)
    }
}

/// Stretches an m-ary relation to arity n = |S| by letting the extra places
/// range over the whole domain.
pub fn pad_relation(name: &str, model: &FiniteModel) -> Result<Relation> {
    let rel = model.relation(name).ok_or_else(|| Error::Model(format!("unknown relation {name}")))?;
    let n = model.size();
    if rel.arity > n {
        return Err(Error::Model(format!("arity {} exceeds domain size {n}", rel.arity)));
    }
    let extra = n - rel.arity;
    let mut tuples = BTreeSet::new();
    for t in &rel.tuples {
        for tail in all_tuples(n, extra) {
            let mut padded = t.clone();
            padded.extend(tail);
            tuples.insert(padded);
        }
    }
    Ok(Relation { arity: n, tuples })
}

/// All tuples of the given length over `0..n`, lexicographically.
pub fn all_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// The permute ⟨S, PR⟩.
pub fn apply_perm(p: &Permutation, model: &FiniteModel) -> Result<FiniteModel> {
    if p.degree() != model.size() {
        return Err(Error::InvalidPermutation(format!(
            "permutation of degree {} is not a bijection of a {}-element domain",
            p.degree(),
            model.size()
        )));
    }
    let relations = model
        .relations
        .iter()
        .map(|(name, rel)| {
            let tuples = rel.tuples.iter().map(|t| t.iter().map(|&e| p.apply0(e)).collect()).collect();
            (name.clone(), Relation { arity: rel.arity, tuples })
        })
        .collect();
    Ok(FiniteModel { domain: model.domain.clone(), relations })
}

fn domain_group(model: &FiniteModel) -> Result<Option<SymmetricGroup>> {
    match model.size() {
        0 => Ok(None),
        n if n > MAX_DOMAIN => Err(Error::Capability(format!("domain of {n} exceeds {MAX_DOMAIN}"))),
        n => Ok(Some(SymmetricGroup::new(n)?)),
    }
}

/// Every distinct permute of `model`, in canonical order.
pub fn permute_class(model: &FiniteModel) -> Result<BTreeSet<FiniteModel>> {
    let Some(group) = domain_group(model)? else {
        return Ok(BTreeSet::from([model.clone()]));
    };
    let elements = group.elements();
    let permutes =
        map_ordered(Strategy::default(), elements.len(), |i| apply_perm(&elements[i], model).expect("degree matches"));
    Ok(permutes.into_iter().collect())
}

/// Has some non-identity symmetry.
pub fn is_symmetric_model(model: &FiniteModel) -> Result<bool> {
    let Some(group) = domain_group(model)? else {
        return Ok(false);
    };
    for p in group.elements().iter().filter(|p| !p.is_identity()) {
        if apply_perm(p, model)? == *model {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every permutation is a symmetry.
pub fn is_fully_symmetric_model(model: &FiniteModel) -> Result<bool> {
    let Some(group) = domain_group(model)? else {
        return Ok(true);
    };
    // the adjacent transpositions generate the group
    for g in group.generators() {
        if apply_perm(&g, model)? != *model {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lexicographically least serialised member of the permute class.
pub fn canonical_permute(model: &FiniteModel) -> Result<FiniteModel> {
    Ok(permute_class(model)?.into_iter().min_by_key(FiniteModel::serialized).expect("class contains the model itself"))
}

/// All models over `domain` with the given relation signature.
pub fn enumerate_models(domain: &[String], signature: &[(String, usize)]) -> Result<Vec<FiniteModel>> {
    let slots: Vec<(&String, usize, Vec<Vec<usize>>)> =
        signature.iter().map(|(name, arity)| (name, *arity, all_tuples(domain.len(), *arity))).collect();
    let total_bits: usize = slots.iter().map(|(_, _, t)| t.len()).sum();
    if total_bits > 20 {
        return Err(Error::Capability(format!("2^{total_bits} models is too many to enumerate")));
    }
    let mut out = Vec::with_capacity(1 << total_bits);
    for mask in 0u64..(1u64 << total_bits) {
        let mut bit = 0;
        let mut relations = BTreeMap::new();
        for (name, arity, tuples) in &slots {
            let chosen = tuples.iter().enumerate().filter(|(i, _)| mask >> (bit + i) & 1 == 1).map(|(_, t)| t.clone());
            relations.insert((*name).clone(), Relation::new(*arity, chosen));
            bit += tuples.len();
        }
        out.push(FiniteModel::new(domain.to_vec(), relations)?);
    }
    Ok(out)
}
