//! Copresheaves on a site sample, natural transformations, and
//! exponential objects.
//!
//! The exponential `(Q ⊸ R)(B)` is the set of end families: one
//! function `Q(X) -> R(X)` per morphism `g: B -> X` of the sample,
//! compatible with the site's composition. It is computed three ways:
//! by direct enumeration (`exp_end`), through coproducts when `Q` is
//! representable (`exp_repr`), and through function spaces when `Q` is
//! constant (`exp_const`). All three expose their projection data as
//! precomputed family tables, so they can be compared element by
//! element.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{homs_fp_to_model, pow_saturating, AlgebraError, FPPresentation, Tuples};
use crate::realize::{coproduct_injection, realize, RealizeError, SiteObject};
use crate::site::SiteSample;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum PresheafError {
    #[error("end enumeration budget exceeded at object {object}: {estimate} candidate components > {budget}")]
    BudgetExceeded {
        object: usize,
        estimate: u64,
        budget: u64,
    },
    #[error("transposition is not uniquely characterized at object {object}, element {element}: {matches} matching exponential elements")]
    TransposeAmbiguous {
        object: usize,
        element: usize,
        matches: usize,
    },
    #[error("constructed map is not natural at morphism {morphism}")]
    NotNatural { morphism: usize },
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal defect: {0}")]
    Internal(String),
}

/// A functor from the site sample to finite sets: a finite value set
/// per object and a total function per morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Copresheaf {
    pub site: Arc<SiteSample>,
    pub sizes: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    /// Indexed by morphism id: value set at the source to value set at
    /// the target.
    pub actions: Vec<Vec<usize>>,
}

impl Copresheaf {
    /// Identity actions are identities and actions compose
    /// functorially, exhaustively over the finite site.
    pub fn check_functorial(&self) -> Result<(), PresheafError> {
        for (i, &id) in self.site.identities.iter().enumerate() {
            if self.actions[id].iter().enumerate().any(|(a, &b)| a != b) {
                return Err(PresheafError::Internal(format!(
                    "identity action at object {i} is not the identity"
                )));
            }
        }
        for first in 0..self.site.morphisms.len() {
            for second in 0..self.site.morphisms.len() {
                if self.site.morphisms[first].dst != self.site.morphisms[second].src {
                    continue;
                }
                let composite = self.site.compose(first, second).ok_or_else(|| {
                    PresheafError::Internal("site is not closed under composition".into())
                })?;
                let left = &self.actions[composite];
                for v in 0..self.sizes[self.site.morphisms[first].src] {
                    if left[v] != self.actions[second][self.actions[first][v]] {
                        return Err(PresheafError::NotNatural {
                            morphism: composite,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Componentwise map between two copresheaves over the same site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTransform {
    pub components: Vec<Vec<usize>>,
}

impl NatTransform {
    /// Every naturality square over every site morphism commutes.
    pub fn check_natural(
        &self,
        source: &Copresheaf,
        target: &Copresheaf,
    ) -> Result<(), PresheafError> {
        for (m, morphism) in source.site.morphisms.iter().enumerate() {
            for v in 0..source.sizes[morphism.src] {
                let around = target.actions[m][self.components[morphism.src][v]];
                let below = self.components[morphism.dst][source.actions[m][v]];
                if around != below {
                    return Err(PresheafError::NotNatural { morphism: m });
                }
            }
        }
        Ok(())
    }
}

/// The forgetful copresheaf: each object's own carrier, morphisms as
/// themselves.
pub fn forgetful_r(site: &Arc<SiteSample>) -> Copresheaf {
    Copresheaf {
        site: site.clone(),
        sizes: site.objects.iter().map(|o| o.model.size).collect(),
        labels: site.objects.iter().map(|o| o.labels.clone()).collect(),
        actions: site.morphisms.iter().map(|m| m.map.clone()).collect(),
    }
}

/// The representable copresheaf of a presentation: hom-sets as
/// generator-image tuples, with postcomposition actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Yoneda {
    pub copresheaf: Copresheaf,
    /// Per object, per element, the generator-image tuple of the hom.
    pub tuples: Vec<Vec<Vec<usize>>>,
}

pub fn yoneda(
    presentation: &FPPresentation,
    site: &Arc<SiteSample>,
) -> Result<Yoneda, PresheafError> {
    let mut tuples = Vec::with_capacity(site.object_count());
    for obj in &site.objects {
        tuples.push(homs_fp_to_model(presentation, &obj.model)?);
    }
    let sizes: Vec<usize> = tuples.iter().map(Vec::len).collect();
    let labels: Vec<Vec<String>> = tuples
        .iter()
        .map(|ts| ts.iter().map(|t| format!("{t:?}")).collect())
        .collect();
    let mut actions = Vec::with_capacity(site.morphisms.len());
    for m in &site.morphisms {
        let mut action = Vec::with_capacity(tuples[m.src].len());
        for t in &tuples[m.src] {
            let image: Vec<usize> = t.iter().map(|&v| m.map[v]).collect();
            let pos = tuples[m.dst]
                .binary_search(&image)
                .map_err(|_| PresheafError::Internal("postcomposition left the hom-set".into()))?;
            action.push(pos);
        }
        actions.push(action);
    }
    Ok(Yoneda {
        copresheaf: Copresheaf {
            site: site.clone(),
            sizes,
            labels,
            actions,
        },
        tuples,
    })
}

/// The constant copresheaf on a finite set: all values the set, all
/// actions the identity.
pub fn constant(set_size: usize, site: &Arc<SiteSample>) -> Copresheaf {
    Copresheaf {
        site: site.clone(),
        sizes: vec![set_size; site.object_count()],
        labels: vec![(0..set_size).map(|i| format!("c{i}")).collect(); site.object_count()],
        actions: site
            .morphisms
            .iter()
            .map(|_| (0..set_size).collect())
            .collect(),
    }
}

/// Pointwise Cartesian product; pairs are encoded as
/// `left * |Q(b)| + right`.
pub fn product(p: &Copresheaf, q: &Copresheaf) -> Copresheaf {
    let site = p.site.clone();
    let sizes: Vec<usize> = p
        .sizes
        .iter()
        .zip(&q.sizes)
        .map(|(&a, &b)| a * b)
        .collect();
    let labels = sizes
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            (0..n)
                .map(|v| {
                    let (i, j) = (v / q.sizes[b].max(1), v % q.sizes[b].max(1));
                    format!("({},{})", p.labels[b][i], q.labels[b][j])
                })
                .collect()
        })
        .collect();
    let actions = site
        .morphisms
        .iter()
        .enumerate()
        .map(|(m, morphism)| {
            let (src, dst) = (morphism.src, morphism.dst);
            (0..sizes[src])
                .map(|v| {
                    let (i, j) = (v / q.sizes[src].max(1), v % q.sizes[src].max(1));
                    p.actions[m][i] * q.sizes[dst] + q.actions[m][j]
                })
                .collect()
        })
        .collect();
    Copresheaf {
        site,
        sizes,
        labels,
        actions,
    }
}

pub fn pair_index(q_size: usize, left: usize, right: usize) -> usize {
    left * q_size + right
}

/// One function `Q(X) -> R(X)` per coslice morphism `g: B -> X`, in
/// the site's canonical coslice order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndFamily {
    pub components: Vec<Vec<usize>>,
}

/// An exponential object together with its full projection data: for
/// every base object, every element's end family.
#[derive(Debug, Clone)]
pub struct Exponential {
    pub object: Copresheaf,
    pub families: Vec<Vec<EndFamily>>,
}

impl Exponential {
    /// Elements whose family equals `family` (more than one signals a
    /// truncated, non-jointly-monic presentation).
    pub fn matching_elements(&self, b: usize, family: &EndFamily) -> Vec<usize> {
        self.families[b]
            .iter()
            .enumerate()
            .filter(|(_, f)| *f == family)
            .map(|(i, _)| i)
            .collect()
    }

    /// Position of the identity component inside the coslice of `b`.
    pub fn identity_position(&self, b: usize) -> usize {
        let site = &self.object.site;
        site.coslice(b)
            .iter()
            .position(|&g| g == site.identities[b])
            .expect("coslice contains the identity")
    }
}

/// The compatibility constraints within one coslice: for `g: B -> X`
/// at position `a` and `h: X -> X'`, the component at `h ∘ g` is
/// forced on the image of `Q(h)`.
struct Constraint {
    g_pos: usize,
    composite_pos: usize,
    /// Morphism id of `h`.
    bridge: usize,
}

fn coslice_constraints(site: &SiteSample, coslice: &[usize]) -> Vec<Constraint> {
    let mut constraints = Vec::new();
    for (a, &g) in coslice.iter().enumerate() {
        let x = site.morphisms[g].dst;
        for (h, morphism) in site.morphisms.iter().enumerate() {
            if morphism.src != x {
                continue;
            }
            let composite = site
                .compose(g, h)
                .expect("site closed under composition");
            let b_pos = coslice
                .binary_search(&composite)
                .expect("composite stays in the coslice");
            constraints.push(Constraint {
                g_pos: a,
                composite_pos: b_pos,
                bridge: h,
            });
        }
    }
    constraints
}

fn constraint_holds(
    q: &Copresheaf,
    r: &Copresheaf,
    site: &SiteSample,
    coslice: &[usize],
    c: &Constraint,
    components: &[Vec<usize>],
) -> bool {
    // R(h) ∘ φ_g = φ_{h∘g} ∘ Q(h) over Q(X).
    let g = coslice[c.g_pos];
    let x = site.morphisms[g].dst;
    let phi_g = &components[c.g_pos];
    let phi_hg = &components[c.composite_pos];
    (0..q.sizes[x]).all(|v| r.actions[c.bridge][phi_g[v]] == phi_hg[q.actions[c.bridge][v]])
}

/// Direct enumeration of `(Q ⊸ R)` over the sample: every end family,
/// found by backtracking over components in canonical order.
pub fn exp_end(
    q: &Copresheaf,
    r: &Copresheaf,
    budget: u64,
) -> Result<Exponential, PresheafError> {
    let site = q.site.clone();
    let mut families: Vec<Vec<EndFamily>> = Vec::with_capacity(site.object_count());

    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let mut estimate: u64 = 1;
        for &g in &coslice {
            let x = site.morphisms[g].dst;
            estimate = estimate.saturating_mul(pow_saturating(r.sizes[x], q.sizes[x]));
        }
        if estimate > budget {
            return Err(PresheafError::BudgetExceeded {
                object: b,
                estimate,
                budget,
            });
        }
        let constraints = coslice_constraints(&site, &coslice);
        let mut found = Vec::new();
        let mut partial: Vec<Vec<usize>> = Vec::with_capacity(coslice.len());
        enumerate_families(
            q,
            r,
            &site,
            &coslice,
            &constraints,
            &mut partial,
            &mut found,
        );
        families.push(found);
    }

    assemble_exponential(&site, families)
}

fn enumerate_families(
    q: &Copresheaf,
    r: &Copresheaf,
    site: &SiteSample,
    coslice: &[usize],
    constraints: &[Constraint],
    partial: &mut Vec<Vec<usize>>,
    found: &mut Vec<EndFamily>,
) {
    let depth = partial.len();
    if depth == coslice.len() {
        found.push(EndFamily {
            components: partial.clone(),
        });
        return;
    }
    let x = site.morphisms[coslice[depth]].dst;
    for candidate in Tuples::new(r.sizes[x], q.sizes[x]) {
        partial.push(candidate);
        let ok = constraints
            .iter()
            .filter(|c| c.g_pos.max(c.composite_pos) == depth)
            .all(|c| constraint_holds(q, r, site, coslice, c, partial));
        if ok {
            enumerate_families(q, r, site, coslice, constraints, partial, found);
        }
        partial.pop();
    }
}

/// Builds the copresheaf structure over enumerated families: the
/// action of `h: B -> B'` reindexes a family along the coslice map
/// `g' ↦ g' ∘ h`.
pub(crate) fn assemble_exponential(
    site: &Arc<SiteSample>,
    families: Vec<Vec<EndFamily>>,
) -> Result<Exponential, PresheafError> {
    let sizes: Vec<usize> = families.iter().map(Vec::len).collect();
    let index: Vec<HashMap<&EndFamily, usize>> = families
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, f)| (f, i)).collect())
        .collect();
    let mut actions = Vec::with_capacity(site.morphisms.len());
    for (h, morphism) in site.morphisms.iter().enumerate() {
        let (src, dst) = (morphism.src, morphism.dst);
        let src_coslice = site.coslice(src);
        let dst_coslice = site.coslice(dst);
        let mut action = Vec::with_capacity(sizes[src]);
        for family in &families[src] {
            let mut moved = Vec::with_capacity(dst_coslice.len());
            for &gp in &dst_coslice {
                let composite = site
                    .compose(h, gp)
                    .ok_or_else(|| PresheafError::Internal("composite missing".into()))?;
                let pos = src_coslice
                    .binary_search(&composite)
                    .map_err(|_| PresheafError::Internal("composite outside coslice".into()))?;
                moved.push(family.components[pos].clone());
            }
            let moved = EndFamily { components: moved };
            let target = index[dst].get(&moved).copied().ok_or_else(|| {
                PresheafError::Internal(
                    "action image is not an enumerated end family".into(),
                )
            })?;
            action.push(target);
        }
        actions.push(action);
    }
    let labels = families
        .iter()
        .map(|fs| (0..fs.len()).map(|i| format!("φ{i}")).collect())
        .collect();
    Ok(Exponential {
        object: Copresheaf {
            site: site.clone(),
            sizes,
            labels,
            actions,
        },
        families,
    })
}

/// `(y(C) ⊸ R)` computed through coproducts: the value at `B` is the
/// carrier of `B ⊗ C`, and the projection at `g: B -> X`,
/// `f ∈ [C, X]` is the map out of the coproduct with components `g`
/// and `f`.
#[derive(Debug, Clone)]
pub struct ReprExp {
    pub exp: Exponential,
    /// Per object `B`, the realized `B ⊗ C`.
    pub bcs: Vec<Arc<SiteObject>>,
    /// First-summand injections `B -> B ⊗ C`.
    pub incl1: Vec<Vec<usize>>,
    /// Images of `C`'s generators in each `B ⊗ C`.
    pub incl2_gens: Vec<Vec<usize>>,
    /// `y(C)`, fixing the `[C, X]` element order used by families.
    pub yon: Yoneda,
}

pub fn exp_repr(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
) -> Result<ReprExp, PresheafError> {
    let yon = yoneda(c, site)?;
    let mut bcs = Vec::with_capacity(site.object_count());
    let mut incl1 = Vec::with_capacity(site.object_count());
    let mut incl2_gens = Vec::with_capacity(site.object_count());
    for obj in &site.objects {
        let pres = crate::algebra::coproduct_presentation(&obj.presentation, c)?;
        let bc = realize(&pres, bound)?;
        incl1.push(coproduct_injection(obj, &bc, 0)?);
        incl2_gens.push(bc.generator_images[obj.presentation.generators..].to_vec());
        bcs.push(Arc::new(bc));
    }

    // Families: the (g, f)-projection of w ∈ B⊗C is {g, f}(w).
    let mut families: Vec<Vec<EndFamily>> = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let b_obj = &site.objects[b];
        let mut per_element: Vec<EndFamily> = (0..bcs[b].model.size)
            .map(|_| EndFamily {
                components: Vec::with_capacity(coslice.len()),
            })
            .collect();
        for &g in &coslice {
            let morphism = &site.morphisms[g];
            let x = morphism.dst;
            let x_model = &site.objects[x].model;
            // Component of w at g is the function f ↦ {g,f}(w) over [C, X].
            let mut maps = Vec::with_capacity(yon.tuples[x].len());
            for f_tuple in &yon.tuples[x] {
                let mut images: Vec<usize> = b_obj
                    .generator_images
                    .iter()
                    .map(|&v| morphism.map[v])
                    .collect();
                images.extend_from_slice(f_tuple);
                maps.push(bcs[b].expand_tuple(&images, x_model)?);
            }
            for (w, fam) in per_element.iter_mut().enumerate() {
                fam.components.push(maps.iter().map(|m| m[w]).collect());
            }
        }
        families.push(per_element);
    }

    // Copresheaf structure: B ⊗ C is functorial in B through the
    // universal property.
    let sizes: Vec<usize> = bcs.iter().map(|bc| bc.model.size).collect();
    let mut actions = Vec::with_capacity(site.morphisms.len());
    for morphism in &site.morphisms {
        let (src, dst) = (morphism.src, morphism.dst);
        let src_obj = &site.objects[src];
        let mut images: Vec<usize> = src_obj
            .generator_images
            .iter()
            .map(|&v| incl1[dst][morphism.map[v]])
            .collect();
        images.extend_from_slice(&incl2_gens[dst]);
        actions.push(bcs[src].expand_tuple(&images, &bcs[dst].model)?);
    }
    let labels: Vec<Vec<String>> = bcs.iter().map(|bc| bc.labels.clone()).collect();
    let object = Copresheaf {
        site: site.clone(),
        sizes,
        labels,
        actions,
    };
    Ok(ReprExp {
        exp: Exponential { object, families },
        bcs,
        incl1,
        incl2_gens,
        yon,
    })
}

/// `(γ*(S) ⊸ R)` in closed form: all functions `S -> R(B)`, acted on
/// by postcomposition.
pub fn exp_const(
    set_size: usize,
    r: &Copresheaf,
    budget: u64,
) -> Result<Exponential, PresheafError> {
    let site = r.site.clone();
    let mut families: Vec<Vec<EndFamily>> = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let estimate = pow_saturating(r.sizes[b], set_size);
        if estimate > budget {
            return Err(PresheafError::BudgetExceeded {
                object: b,
                estimate,
                budget,
            });
        }
        let coslice = site.coslice(b);
        let mut per_element = Vec::new();
        for tuple in Tuples::new(r.sizes[b], set_size) {
            let components = coslice
                .iter()
                .map(|&g| tuple.iter().map(|&v| r.actions[g][v]).collect())
                .collect();
            per_element.push(EndFamily { components });
        }
        families.push(per_element);
    }
    assemble_exponential(&site, families)
}

/// Exponential transpose in the first variable: `k : P × Q -> R`
/// yields `P -> Q ⊸ R`, each element sent to the unique exponential
/// element whose projections match the partially applied pairing.
pub fn transpose_first(
    k: &NatTransform,
    p: &Copresheaf,
    q: &Copresheaf,
    exp: &Exponential,
) -> Result<NatTransform, PresheafError> {
    transpose_impl(k, p, q, exp, false)
}

/// The twisted transpose: `k : P × Q -> R` yields `Q -> P ⊸ R`.
pub fn transpose_second(
    k: &NatTransform,
    p: &Copresheaf,
    q: &Copresheaf,
    exp: &Exponential,
) -> Result<NatTransform, PresheafError> {
    transpose_impl(k, p, q, exp, true)
}

fn transpose_impl(
    k: &NatTransform,
    p: &Copresheaf,
    q: &Copresheaf,
    exp: &Exponential,
    twisted: bool,
) -> Result<NatTransform, PresheafError> {
    let site = p.site.clone();
    let (outer, inner) = if twisted { (q, p) } else { (p, q) };
    let mut components = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let mut component = Vec::with_capacity(outer.sizes[b]);
        for x_elt in 0..outer.sizes[b] {
            let mut family = Vec::with_capacity(coslice.len());
            for &g in &coslice {
                let x = site.morphisms[g].dst;
                let moved = outer.actions[g][x_elt];
                let part: Vec<usize> = (0..inner.sizes[x])
                    .map(|y| {
                        let pair = if twisted {
                            pair_index(q.sizes[x], y, moved)
                        } else {
                            pair_index(q.sizes[x], moved, y)
                        };
                        k.components[x][pair]
                    })
                    .collect();
                family.push(part);
            }
            let family = EndFamily {
                components: family,
            };
            let matches = exp.matching_elements(b, &family);
            if matches.len() != 1 {
                return Err(PresheafError::TransposeAmbiguous {
                    object: b,
                    element: x_elt,
                    matches: matches.len(),
                });
            }
            component.push(matches[0]);
        }
        components.push(component);
    }
    let result = NatTransform { components };
    result.check_natural(outer, &exp.object)?;
    Ok(result)
}

/// Recovers the pairing from a transpose: evaluation of the
/// exponential elements along the map.
pub fn untranspose_first(
    i: &NatTransform,
    p: &Copresheaf,
    q: &Copresheaf,
    exp: &Exponential,
) -> NatTransform {
    let site = p.site.clone();
    let components = (0..site.object_count())
        .map(|x| {
            let id_pos = exp.identity_position(x);
            (0..p.sizes[x] * q.sizes[x])
                .map(|pair| {
                    let (a, b) = (pair / q.sizes[x].max(1), pair % q.sizes[x].max(1));
                    exp.families[x][i.components[x][a]].components[id_pos][b]
                })
                .collect()
        })
        .collect();
    NatTransform { components }
}

/// The evaluation pairing `(Q ⊸ R) × Q -> R` of an end-style
/// exponential: apply the identity component.
pub fn evaluation(exp: &Exponential, q: &Copresheaf) -> NatTransform {
    let site = q.site.clone();
    let components = (0..site.object_count())
        .map(|x| {
            let id_pos = exp.identity_position(x);
            (0..exp.object.sizes[x] * q.sizes[x])
                .map(|pair| {
                    let (w, v) = (pair / q.sizes[x].max(1), pair % q.sizes[x].max(1));
                    exp.families[x][w].components[id_pos][v]
                })
                .collect()
        })
        .collect();
    NatTransform { components }
}

/// The canonical map into the double dual: the twisted transpose of
/// the evaluation pairing. Returns `(P ⊸ R, (P ⊸ R) ⊸ R, δ)`.
pub fn dirac(
    p: &Copresheaf,
    r: &Copresheaf,
    budget: u64,
) -> Result<(Exponential, Exponential, NatTransform), PresheafError> {
    let inner = exp_end(p, r, budget)?;
    let ev = evaluation(&inner, p);
    let outer = exp_end(&inner.object, r, budget)?;
    let delta = transpose_second(&ev, &inner.object, p, &outer)?;
    Ok((inner, outer, delta))
}

/// Checks that two exponential constructions present the same object:
/// matching family tables element by element must give mutually
/// inverse bijections commuting with the actions.
pub fn exponentials_isomorphic(a: &Exponential, b: &Exponential) -> Result<Vec<Vec<usize>>, String> {
    let site = &a.object.site;
    let mut forward: Vec<Vec<usize>> = Vec::with_capacity(site.object_count());
    for obj in 0..site.object_count() {
        if a.object.sizes[obj] != b.object.sizes[obj] {
            return Err(format!(
                "sizes differ at object {obj}: {} vs {}",
                a.object.sizes[obj], b.object.sizes[obj]
            ));
        }
        let mut map = Vec::with_capacity(a.object.sizes[obj]);
        let mut hit = vec![false; b.object.sizes[obj]];
        for (e, family) in a.families[obj].iter().enumerate() {
            let matches = b.matching_elements(obj, family);
            if matches.len() != 1 {
                return Err(format!(
                    "element {e} at object {obj} has {} counterparts",
                    matches.len()
                ));
            }
            if std::mem::replace(&mut hit[matches[0]], true) {
                return Err(format!("match at object {obj} is not injective"));
            }
            map.push(matches[0]);
        }
        forward.push(map);
    }
    for (m, morphism) in site.morphisms.iter().enumerate() {
        for v in 0..a.object.sizes[morphism.src] {
            if forward[morphism.dst][a.object.actions[m][v]]
                != b.object.actions[m][forward[morphism.src][v]]
            {
                return Err(format!("actions disagree at morphism {m}"));
            }
        }
    }
    Ok(forward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsupport::{boolean_site, modn_presentation, rings_site};
    use crate::site::SiteMode;

    fn mul_pairing(site: &Arc<SiteSample>, r: &Copresheaf) -> NatTransform {
        let mul = site.theory.op_index("mul").unwrap();
        let components = (0..site.object_count())
            .map(|x| {
                let n = r.sizes[x];
                (0..n * n)
                    .map(|pair| {
                        site.objects[x].model.apply(mul, &[pair / n, pair % n])
                    })
                    .collect()
            })
            .collect();
        NatTransform { components }
    }

    #[test]
    fn forgetful_is_functorial() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let r = forgetful_r(&site);
        assert_eq!(r.sizes, vec![1, 2, 6]);
        r.check_functorial().unwrap();
    }

    #[test]
    fn yoneda_hom_sets_and_actions() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let c = modn_presentation(&site.theory, 2);
        let y = yoneda(&c, &site).unwrap();
        // Ring maps Z/2 -> Z/1, Z/2, Z/6: one, one, none.
        assert_eq!(y.copresheaf.sizes, vec![1, 1, 0]);
        y.copresheaf.check_functorial().unwrap();
    }

    #[test]
    fn yoneda_lemma_by_enumeration() {
        // Nat(y(C), R) has exactly |R(C)| elements.
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let c = modn_presentation(&site.theory, 2);
        let y = yoneda(&c, &site).unwrap();
        let r = forgetful_r(&site);
        let per_object: Vec<Vec<Vec<usize>>> = (0..site.object_count())
            .map(|b| Tuples::new(r.sizes[b], y.copresheaf.sizes[b]).collect())
            .collect();
        let mut count = 0usize;
        let mut idx = vec![0usize; site.object_count()];
        loop {
            let components: Vec<Vec<usize>> = idx
                .iter()
                .enumerate()
                .map(|(b, &i)| per_object[b][i].clone())
                .collect();
            let nt = NatTransform { components };
            if nt.check_natural(&y.copresheaf, &r).is_ok() {
                count += 1;
            }
            let mut b = 0;
            loop {
                if b == idx.len() {
                    break;
                }
                idx[b] += 1;
                if idx[b] < per_object[b].len() {
                    break;
                }
                idx[b] = 0;
                b += 1;
            }
            if b == idx.len() {
                break;
            }
        }
        assert_eq!(count, 2);
    }

    #[test]
    fn constant_one_exponential_recovers_r() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let r = forgetful_r(&site);
        let e = exp_end(&constant(1, &site), &r, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.object.sizes, r.sizes);
        let ec = exp_const(1, &r, DEFAULT_BUDGET).unwrap();
        exponentials_isomorphic(&e, &ec).unwrap();
        e.object.check_functorial().unwrap();
    }

    #[test]
    fn constant_zero_exponential_is_terminal() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let r = forgetful_r(&site);
        let e = exp_end(&constant(0, &site), &r, DEFAULT_BUDGET).unwrap();
        assert_eq!(e.object.sizes, vec![1, 1, 1]);
    }

    #[test]
    fn exp_const_matches_end_of_constant() {
        let site = rings_site(&[1, 2], SiteMode::Closed);
        let r = forgetful_r(&site);
        let via_end = exp_end(&constant(2, &site), &r, DEFAULT_BUDGET).unwrap();
        let closed_form = exp_const(2, &r, DEFAULT_BUDGET).unwrap();
        exponentials_isomorphic(&via_end, &closed_form).unwrap();
    }

    #[test]
    fn repr_exponential_matches_end_on_ring_site() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let c = modn_presentation(&site.theory, 2);
        let repr = exp_repr(&c, &site, 400).unwrap();
        assert_eq!(repr.exp.object.sizes, vec![1, 2, 2]);
        repr.exp.object.check_functorial().unwrap();
        let y = yoneda(&c, &site).unwrap();
        let r = forgetful_r(&site);
        let end = exp_end(&y.copresheaf, &r, DEFAULT_BUDGET).unwrap();
        exponentials_isomorphic(&repr.exp, &end).unwrap();
    }

    #[test]
    fn repr_exponential_matches_end_on_boolean_site() {
        let site = boolean_site();
        let c = FPPresentation::new(site.theory.clone(), 0, Vec::new()).unwrap();
        let repr = exp_repr(&c, &site, 50).unwrap();
        assert_eq!(repr.exp.object.sizes, vec![2]);
        let y = yoneda(&c, &site).unwrap();
        let r = forgetful_r(&site);
        let end = exp_end(&y.copresheaf, &r, DEFAULT_BUDGET).unwrap();
        exponentials_isomorphic(&repr.exp, &end).unwrap();
    }

    #[test]
    fn end_enumeration_matches_exhaustive_filter() {
        let site = rings_site(&[1, 2], SiteMode::Closed);
        let q = forgetful_r(&site);
        let r = forgetful_r(&site);
        let e = exp_end(&q, &r, DEFAULT_BUDGET).unwrap();
        for b in 0..site.object_count() {
            let coslice = site.coslice(b);
            // Independent route: full product of components, filtered.
            let mut expected = Vec::new();
            let spaces: Vec<Vec<Vec<usize>>> = coslice
                .iter()
                .map(|&g| {
                    let x = site.morphisms[g].dst;
                    Tuples::new(r.sizes[x], q.sizes[x]).collect()
                })
                .collect();
            let mut idx = vec![0usize; coslice.len()];
            'outer: loop {
                let comps: Vec<Vec<usize>> = idx
                    .iter()
                    .enumerate()
                    .map(|(p, &i)| spaces[p][i].clone())
                    .collect();
                let mut ok = true;
                for (a, &g) in coslice.iter().enumerate() {
                    let x = site.morphisms[g].dst;
                    for (h, m) in site.morphisms.iter().enumerate() {
                        if m.src != x {
                            continue;
                        }
                        let comp = site.compose(g, h).unwrap();
                        let cpos = coslice.iter().position(|&c| c == comp).unwrap();
                        for v in 0..q.sizes[x] {
                            if r.actions[h][comps[a][v]] != comps[cpos][q.actions[h][v]] {
                                ok = false;
                            }
                        }
                    }
                }
                if ok {
                    expected.push(EndFamily { components: comps });
                }
                let mut p = coslice.len();
                while p > 0 {
                    p -= 1;
                    idx[p] += 1;
                    if idx[p] < spaces[p].len() {
                        break;
                    }
                    idx[p] = 0;
                    if p == 0 {
                        break 'outer;
                    }
                }
                if coslice.is_empty() {
                    break;
                }
            }
            // Both routes enumerate in lex order on later positions;
            // compare as sets.
            let mut got = e.families[b].clone();
            got.sort_by(|x, y| x.components.cmp(&y.components));
            expected.sort_by(|x, y| x.components.cmp(&y.components));
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn transpose_of_evaluation_is_identity() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let c = modn_presentation(&site.theory, 2);
        let q = yoneda(&c, &site).unwrap().copresheaf;
        let r = forgetful_r(&site);
        let e = exp_end(&q, &r, DEFAULT_BUDGET).unwrap();
        let ev = evaluation(&e, &q);
        ev.check_natural(&product(&e.object, &q), &r).unwrap();
        let t = transpose_first(&ev, &e.object, &q, &e).unwrap();
        for (b, comp) in t.components.iter().enumerate() {
            assert!(comp.iter().enumerate().all(|(i, &v)| i == v), "object {b}");
        }
    }

    #[test]
    fn transpose_round_trip_through_multiplication() {
        let site = rings_site(&[1, 2], SiteMode::Closed);
        let p = forgetful_r(&site);
        let q = forgetful_r(&site);
        let r = forgetful_r(&site);
        let k = mul_pairing(&site, &r);
        k.check_natural(&product(&p, &q), &r).unwrap();
        let e = exp_end(&q, &r, DEFAULT_BUDGET).unwrap();
        let j = transpose_first(&k, &p, &q, &e).unwrap();
        let back = untranspose_first(&j, &p, &q, &e);
        assert_eq!(back, k);
    }

    #[test]
    fn dirac_triangle_for_multiplication() {
        // With i, j the two transposes of k, the double-dual map
        // satisfies δ(p)_g ∘ i_X = j(p)_g pointwise.
        let site = rings_site(&[1, 2], SiteMode::Closed);
        let p = forgetful_r(&site);
        let q = forgetful_r(&site);
        let r = forgetful_r(&site);
        let k = mul_pairing(&site, &r);
        let (inner, outer, delta) = dirac(&p, &r, DEFAULT_BUDGET).unwrap();
        let i = transpose_second(&k, &p, &q, &inner).unwrap();
        let e_q = exp_end(&q, &r, DEFAULT_BUDGET).unwrap();
        let j = transpose_first(&k, &p, &q, &e_q).unwrap();
        for b in 0..site.object_count() {
            let coslice = site.coslice(b);
            for (pos, &g) in coslice.iter().enumerate() {
                let x = site.morphisms[g].dst;
                for pe in 0..p.sizes[b] {
                    for qe in 0..q.sizes[x] {
                        let lhs = outer.families[b][delta.components[b][pe]].components[pos]
                            [i.components[x][qe]];
                        let rhs =
                            e_q.families[b][j.components[b][pe]].components[pos][qe];
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let site = rings_site(&[1, 2, 6], SiteMode::Closed);
        let r = forgetful_r(&site);
        let err = exp_end(&r, &r, 1).unwrap_err();
        assert!(matches!(err, PresheafError::BudgetExceeded { .. }));
    }
}
