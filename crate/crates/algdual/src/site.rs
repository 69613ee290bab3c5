//! Finite full subcategories of the category of realized algebras:
//! objects, all hom-sets, composition, and binary coproduct witnesses.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{coproduct_presentation, AlgebraError, FPPresentation};
use crate::realize::{
    coproduct_injection, homs_model_to_model, realize, RealizeError, SiteObject,
};
use crate::theory::TheoryPresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteMode {
    /// Every binary coproduct of sample objects is realized and
    /// matched to a sample object; the witness table is total.
    Closed,
    /// Coproducts that land in the sample are recorded, the rest are
    /// absent; downstream end-based values are approximations.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub src: usize,
    pub dst: usize,
    pub map: Vec<usize>,
}

/// A sample object realizing the coproduct of an object pair, with the
/// two injections as carrier maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductWitness {
    pub object: usize,
    pub incl1: Vec<usize>,
    pub incl2: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum SiteError {
    #[error("presentation `{name}` failed to realize: {source}")]
    Realize {
        name: String,
        source: RealizeError,
    },
    #[error("coproduct of `{left}` and `{right}` failed to realize: {source}")]
    CoproductRealize {
        left: String,
        right: String,
        source: RealizeError,
    },
    #[error("closed mode: coproduct of `{left}` and `{right}` escapes the sample")]
    CoproductEscapes { left: String, right: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteSample {
    pub theory: Arc<TheoryPresentation>,
    pub names: Vec<String>,
    pub objects: Vec<Arc<SiteObject>>,
    /// All morphisms, sorted by (src, dst, map); hence each coslice is
    /// a contiguous ascending id range per target.
    pub morphisms: Vec<Morphism>,
    /// `hom_sets[src][dst]` lists morphism ids in canonical order.
    pub hom_sets: Vec<Vec<Vec<usize>>>,
    pub identities: Vec<usize>,
    pub mode: SiteMode,
    pub coproducts: BTreeMap<(usize, usize), CoproductWitness>,
    morphism_index: HashMap<(usize, usize, Vec<usize>), usize>,
}

impl SiteSample {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_id(&self, src: usize, dst: usize, map: &[usize]) -> Option<usize> {
        self.morphism_index
            .get(&(src, dst, map.to_vec()))
            .copied()
    }

    /// `second ∘ first`, if the composite is listed.
    pub fn compose(&self, first: usize, second: usize) -> Option<usize> {
        let f = &self.morphisms[first];
        let s = &self.morphisms[second];
        if f.dst != s.src {
            return None;
        }
        let map: Vec<usize> = f.map.iter().map(|&v| s.map[v]).collect();
        self.morphism_id(f.src, s.dst, &map)
    }

    /// Morphism ids with source `b`, in canonical order. This indexes
    /// the coslice over which ends at `b` are formed.
    pub fn coslice(&self, b: usize) -> Vec<usize> {
        self.hom_sets[b].iter().flatten().copied().collect()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Realizes each presentation, enumerates every hom-set, and records
/// coproduct witnesses per the requested mode.
pub fn build_site(
    theory: Arc<TheoryPresentation>,
    presentations: &[(String, FPPresentation)],
    bound: usize,
    mode: SiteMode,
) -> Result<SiteSample, SiteError> {
    let mut objects = Vec::with_capacity(presentations.len());
    let mut names = Vec::with_capacity(presentations.len());
    for (name, pres) in presentations {
        let obj = realize(pres, bound).map_err(|source| SiteError::Realize {
            name: name.clone(),
            source,
        })?;
        names.push(name.clone());
        objects.push(Arc::new(obj));
    }

    let n = objects.len();
    let mut morphisms = Vec::new();
    let mut hom_sets = vec![vec![Vec::new(); n]; n];
    for src in 0..n {
        for dst in 0..n {
            let maps = homs_model_to_model(&objects[src], &objects[dst])?;
            for map in maps {
                hom_sets[src][dst].push(morphisms.len());
                morphisms.push(Morphism { src, dst, map });
            }
        }
    }
    let morphism_index: HashMap<(usize, usize, Vec<usize>), usize> = morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| ((m.src, m.dst, m.map.clone()), i))
        .collect();
    let identities: Vec<usize> = (0..n)
        .map(|i| {
            let id_map: Vec<usize> = (0..objects[i].model.size).collect();
            morphism_index[&(i, i, id_map)]
        })
        .collect();

    let mut coproducts = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let pres = coproduct_presentation(&objects[i].presentation, &objects[j].presentation)?;
            let realized = match realize(&pres, bound) {
                Ok(r) => r,
                Err(source) => match mode {
                    SiteMode::Closed => {
                        return Err(SiteError::CoproductRealize {
                            left: names[i].clone(),
                            right: names[j].clone(),
                            source,
                        })
                    }
                    SiteMode::Truncated => continue,
                },
            };
            match match_into_sample(&realized, &objects) {
                Some((object, iso)) => {
                    let raw1 = coproduct_injection(&objects[i], &realized, 0)?;
                    let raw2 =
                        coproduct_injection(&objects[j], &realized, objects[i].presentation.generators)?;
                    let incl1 = raw1.iter().map(|&v| iso[v]).collect();
                    let incl2 = raw2.iter().map(|&v| iso[v]).collect();
                    coproducts.insert(
                        (i, j),
                        CoproductWitness {
                            object,
                            incl1,
                            incl2,
                        },
                    );
                }
                None => {
                    if mode == SiteMode::Closed {
                        return Err(SiteError::CoproductEscapes {
                            left: names[i].clone(),
                            right: names[j].clone(),
                        });
                    }
                }
            }
        }
    }

    Ok(SiteSample {
        theory,
        names,
        objects,
        morphisms,
        hom_sets,
        identities,
        mode,
        coproducts,
        morphism_index,
    })
}

/// Exhaustive search for an invertible homomorphism onto a sample
/// object; carriers are small by construction.
fn match_into_sample(
    realized: &SiteObject,
    objects: &[Arc<SiteObject>],
) -> Option<(usize, Vec<usize>)> {
    for (k, candidate) in objects.iter().enumerate() {
        if candidate.model.size != realized.model.size {
            continue;
        }
        let maps = homs_model_to_model(realized, candidate).ok()?;
        for map in maps {
            let mut seen = vec![false; candidate.model.size];
            if map.iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
                return Some((k, map));
            }
        }
    }
    None
}

/// A structural defect found by `check_site`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SiteViolation {
    MissingIdentity {
        object: usize,
    },
    CompositeNotListed {
        first: usize,
        second: usize,
    },
    HomSetIncomplete {
        src: usize,
        dst: usize,
        stored: usize,
        enumerated: usize,
    },
    CoproductTableNotTotal {
        pair: (usize, usize),
    },
    CoproductLawFails {
        pair: (usize, usize),
        cocone: (usize, usize),
        matches: usize,
    },
}

/// Verifies identities, closure under composition, hom-set
/// completeness, and the coproduct-law witnesses.
pub fn check_site(site: &SiteSample) -> Vec<SiteViolation> {
    let mut violations = Vec::new();
    let n = site.object_count();

    for (i, &id) in site.identities.iter().enumerate() {
        let m = &site.morphisms[id];
        let is_identity =
            m.src == i && m.dst == i && m.map.iter().enumerate().all(|(a, &b)| a == b);
        if !is_identity {
            violations.push(SiteViolation::MissingIdentity { object: i });
        }
    }

    for first in 0..site.morphisms.len() {
        for second in 0..site.morphisms.len() {
            if site.morphisms[first].dst != site.morphisms[second].src {
                continue;
            }
            if site.compose(first, second).is_none() {
                violations.push(SiteViolation::CompositeNotListed { first, second });
            }
        }
    }

    for src in 0..n {
        for dst in 0..n {
            match homs_model_to_model(&site.objects[src], &site.objects[dst]) {
                Ok(maps) => {
                    let stored: Vec<&Vec<usize>> = site.hom_sets[src][dst]
                        .iter()
                        .map(|&id| &site.morphisms[id].map)
                        .collect();
                    if stored.len() != maps.len()
                        || stored.iter().zip(&maps).any(|(a, b)| **a != *b)
                    {
                        violations.push(SiteViolation::HomSetIncomplete {
                            src,
                            dst,
                            stored: stored.len(),
                            enumerated: maps.len(),
                        });
                    }
                }
                Err(_) => violations.push(SiteViolation::HomSetIncomplete {
                    src,
                    dst,
                    stored: site.hom_sets[src][dst].len(),
                    enumerated: 0,
                }),
            }
        }
    }

    for i in 0..n {
        for j in 0..n {
            match site.coproducts.get(&(i, j)) {
                None => {
                    if site.mode == SiteMode::Closed {
                        violations.push(SiteViolation::CoproductTableNotTotal { pair: (i, j) });
                    }
                }
                Some(w) => {
                    for x in 0..n {
                        for &g in &site.hom_sets[i][x] {
                            for &f in &site.hom_sets[j][x] {
                                let g_map = &site.morphisms[g].map;
                                let f_map = &site.morphisms[f].map;
                                let matches = site.hom_sets[w.object][x]
                                    .iter()
                                    .filter(|&&h| {
                                        let h_map = &site.morphisms[h].map;
                                        w.incl1.iter().zip(g_map.iter()).all(|(&v, &gv)| h_map[v] == gv)
                                            && w.incl2
                                                .iter()
                                                .zip(f_map.iter())
                                                .all(|(&v, &fv)| h_map[v] == fv)
                                    })
                                    .count();
                                if matches != 1 {
                                    violations.push(SiteViolation::CoproductLawFails {
                                        pair: (i, j),
                                        cocone: (g, f),
                                        matches,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    violations
}
