//! Tag weighting of resources: plain tag frequency (TF) and the TF-IxF family,
//! where the inverse frequency is taken over resources (IRF), users (IUF) or
//! bookmarks (IBF).

use std::fmt;
use std::io;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::store::{EntityKind, Folksonomy, ResourceId, TagId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Tf,
    TfIrf,
    TfIuf,
    TfIbf,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Tf, Scheme::TfIrf, Scheme::TfIuf, Scheme::TfIbf];
    pub const INVERSE: [Scheme; 3] = [Scheme::TfIrf, Scheme::TfIuf, Scheme::TfIbf];

    /// Entity kind the inverse frequency is computed over; `None` for TF.
    pub fn entity(self) -> Option<EntityKind> {
        match self {
            Scheme::Tf => None,
            Scheme::TfIrf => Some(EntityKind::Resources),
            Scheme::TfIuf => Some(EntityKind::Users),
            Scheme::TfIbf => Some(EntityKind::Bookmarks),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Tf => "tf",
            Scheme::TfIrf => "tf-irf",
            Scheme::TfIuf => "tf-iuf",
            Scheme::TfIbf => "tf-ibf",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tf" => Ok(Scheme::Tf),
            "tf-irf" => Ok(Scheme::TfIrf),
            "tf-iuf" => Ok(Scheme::TfIuf),
            "tf-ibf" => Ok(Scheme::TfIbf),
            other => Err(Error::InvalidConfig(format!("unknown weighting scheme {other:?}"))),
        }
    }
}

/// `ln(n_total / n_tag)`: zero when the tag occurs in every entity.
pub fn inverse_frequency(n_tag: u64, n_total: u64) -> Result<f64> {
    if n_tag == 0 || n_tag > n_total {
        return Err(Error::InverseFrequencyDomain { n_tag, n_total });
    }
    if n_tag == n_total {
        return Ok(0.0);
    }
    Ok((n_total as f64 / n_tag as f64).ln())
}

/// Sparse tag weights of one resource, sorted by tag id, no zero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedVector {
    pub resource: ResourceId,
    pub scheme: Scheme,
    pub entries: Vec<(TagId, f64)>,
}

impl WeightedVector {
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn get(&self, tag: TagId) -> f64 {
        self.entries
            .binary_search_by_key(&tag, |&(t, _)| t)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: f64) -> WeightedVector {
        WeightedVector {
            entries: self.entries.iter().map(|&(t, w)| (t, w * factor)).collect(),
            ..self.clone()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vectorizer {
    pub scheme: Scheme,
    /// L2-normalize non-empty vectors.
    pub normalize: bool,
}

impl Vectorizer {
    pub fn new(scheme: Scheme) -> Self {
        Vectorizer { scheme, normalize: true }
    }

    pub fn normalize(mut self, on: bool) -> Self {
        self.normalize = on;
        self
    }

    pub fn vectorize(&self, f: &Folksonomy, resource: ResourceId) -> Result<WeightedVector> {
        if resource.index() >= f.n_resources() as usize {
            return Err(Error::UnknownResource(format!("#{}", resource.0)));
        }
        let mut entries = Vec::with_capacity(f.resource_tags(resource).len());
        for (&tag, &tf) in f.resource_tags(resource) {
            let weight = match self.scheme.entity() {
                None => tf as f64,
                Some(kind) => {
                    let ixf = inverse_frequency(f.frequencies(tag).get(kind), f.total(kind))?;
                    tf as f64 * ixf
                }
            };
            if weight != 0.0 {
                entries.push((tag, weight));
            }
        }
        let mut v = WeightedVector { resource, scheme: self.scheme, entries };
        if self.normalize {
            let norm = v.norm();
            if norm > 0.0 {
                v.entries.iter_mut().for_each(|(_, w)| *w /= norm);
            }
        }
        Ok(v)
    }

    pub fn vectorize_by_name(&self, f: &Folksonomy, resource: &str) -> Result<WeightedVector> {
        let id = f
            .resource_id(resource)
            .ok_or_else(|| Error::UnknownResource(resource.to_owned()))?;
        self.vectorize(f, id)
    }

    pub fn vectorize_all(&self, f: &Folksonomy, resources: &[ResourceId]) -> Result<Vec<WeightedVector>> {
        resources.iter().map(|&r| self.vectorize(f, r)).collect()
    }
}

pub fn vectorize(f: &Folksonomy, resource: ResourceId, scheme: Scheme) -> Result<WeightedVector> {
    Vectorizer::new(scheme).vectorize(f, resource)
}

/// Writes `resource_id tag:weight tag:weight ...` lines, pairs sorted by tag name.
pub fn write_vectors<W: io::Write>(f: &Folksonomy, vectors: &[WeightedVector], mut out: W) -> Result<()> {
    for v in vectors {
        let mut pairs: Vec<(&str, f64)> = v.entries.iter().map(|&(t, w)| (f.tag_name(t), w)).collect();
        pairs.sort_by(|a, b| a.0.cmp(b.0));
        write!(out, "{}", f.resource_name(v.resource))?;
        for (tag, w) in pairs {
            write!(out, " {tag}:{w:.6}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
