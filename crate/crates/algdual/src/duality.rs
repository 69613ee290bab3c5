//! The canonical pairing `γ*(C) × y(C) -> R`, its transposes, the
//! structure-respecting subobjects of the exponential, and the duality
//! isomorphism checks.
//!
//! Subexponentials are enumerated directly from per-component
//! homomorphism lists rather than by filtering the full end; the two
//! routes retain exactly the same families, but the direct route stays
//! feasible when the full end does not fit any budget.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{is_homomorphism, pow_saturating, AlgebraError, FPPresentation, Tuples};
use crate::presheaf::{
    exp_end, exp_repr, forgetful_r, transpose_first, transpose_second, yoneda, constant,
    Copresheaf, EndFamily, Exponential, NatTransform, PresheafError, ReprExp,
};
use crate::realize::{homs_model_to_model, realize, RealizeError, SiteObject};
use crate::site::{SiteMode, SiteSample};

#[derive(Debug, Error)]
pub enum DualityError {
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("structure map defect: {0}")]
    Structure(String),
    #[error("subexponential budget exceeded at object {object}: {estimate} > {budget}")]
    BudgetExceeded {
        object: usize,
        estimate: u64,
        budget: u64,
    },
}

/// A copresheaf whose values carry algebra structure, witnessed by a
/// realized carrier per site object. Actions must be homomorphisms.
#[derive(Debug, Clone)]
pub struct AlgebraicCopresheaf {
    pub copresheaf: Copresheaf,
    pub carriers: Vec<Arc<SiteObject>>,
}

impl AlgebraicCopresheaf {
    pub fn new(
        copresheaf: Copresheaf,
        carriers: Vec<Arc<SiteObject>>,
    ) -> Result<Self, DualityError> {
        for (b, carrier) in carriers.iter().enumerate() {
            if carrier.model.size != copresheaf.sizes[b] {
                return Err(DualityError::Structure(format!(
                    "carrier size mismatch at object {b}"
                )));
            }
        }
        for (m, morphism) in copresheaf.site.morphisms.iter().enumerate() {
            if !is_homomorphism(
                &carriers[morphism.src].model,
                &carriers[morphism.dst].model,
                &copresheaf.actions[m],
            ) {
                return Err(DualityError::Structure(format!(
                    "action {m} is not a homomorphism"
                )));
            }
        }
        Ok(AlgebraicCopresheaf {
            copresheaf,
            carriers,
        })
    }
}

/// `R` with each site object as its own carrier.
pub fn forgetful_algebraic(site: &Arc<SiteSample>) -> Result<AlgebraicCopresheaf, DualityError> {
    AlgebraicCopresheaf::new(forgetful_r(site), site.objects.clone())
}

/// `γ*(C)` for a realized `C`: the constant copresheaf with `C`'s
/// structure at every object.
pub fn constant_algebraic(
    c_obj: &Arc<SiteObject>,
    site: &Arc<SiteSample>,
) -> Result<AlgebraicCopresheaf, DualityError> {
    AlgebraicCopresheaf::new(
        constant(c_obj.model.size, site),
        vec![c_obj.clone(); site.object_count()],
    )
}

/// `R ⊗ γ*(C)`, computed coordinatewise: value at `B` is `B ⊗ C`.
pub fn repr_algebraic(repr: &ReprExp) -> Result<AlgebraicCopresheaf, DualityError> {
    AlgebraicCopresheaf::new(repr.exp.object.clone(), repr.bcs.clone())
}

/// The structure map `ρ: R -> R ⊗ γ*(C)` with component `incl₁`.
pub fn incl1_structure(repr: &ReprExp) -> NatTransform {
    NatTransform {
        components: repr.incl1.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubPredicate {
    THom,
    RAlgebra,
}

/// A subobject of an exponential cut out by a componentwise predicate
/// on end families.
#[derive(Debug, Clone)]
pub struct SubExponential {
    pub exp: Exponential,
    pub predicate: SubPredicate,
}

/// All homomorphisms between two realized carriers, as total maps in
/// canonical order. Brute-forces the function space when small enough
/// to give a generator-free route; otherwise expands generator-image
/// tuples.
fn t_homs(source: &SiteObject, target: &SiteObject) -> Result<Vec<Vec<usize>>, DualityError> {
    const BRUTE_CAP: u64 = 100_000;
    if pow_saturating(target.model.size, source.model.size) <= BRUTE_CAP {
        let mut out = Vec::new();
        for map in Tuples::new(target.model.size, source.model.size) {
            if is_homomorphism(&source.model, &target.model, &map) {
                out.push(map);
            }
        }
        Ok(out)
    } else {
        Ok(homs_model_to_model(source, target)?)
    }
}

/// `(X ⊸_T R)`: end families all of whose components are
/// homomorphisms.
pub fn hom_t_sub(
    x: &AlgebraicCopresheaf,
    r: &AlgebraicCopresheaf,
    budget: u64,
) -> Result<SubExponential, DualityError> {
    constrained_sub(x, r, None, SubPredicate::THom, budget)
}

/// `(X ⊸_R R)` for an R-algebra `X` with structure `rho: R -> X`:
/// homomorphism families that restrict to the identity along `rho`.
pub fn hom_r_sub(
    x: &AlgebraicCopresheaf,
    r: &AlgebraicCopresheaf,
    rho: &NatTransform,
    budget: u64,
) -> Result<SubExponential, DualityError> {
    rho.check_natural(&r.copresheaf, &x.copresheaf)?;
    for (b, component) in rho.components.iter().enumerate() {
        if !is_homomorphism(&r.carriers[b].model, &x.carriers[b].model, component) {
            return Err(DualityError::Structure(format!(
                "structure map at object {b} is not a homomorphism"
            )));
        }
    }
    constrained_sub(x, r, Some(rho), SubPredicate::RAlgebra, budget)
}

fn constrained_sub(
    x: &AlgebraicCopresheaf,
    r: &AlgebraicCopresheaf,
    rho: Option<&NatTransform>,
    predicate: SubPredicate,
    budget: u64,
) -> Result<SubExponential, DualityError> {
    let site = x.copresheaf.site.clone();
    // Candidate components at codomain X, shared across positions.
    let mut per_object: Vec<Vec<Vec<usize>>> = Vec::with_capacity(site.object_count());
    for obj in 0..site.object_count() {
        let mut homs = t_homs(&x.carriers[obj], &r.carriers[obj])?;
        if let Some(rho) = rho {
            homs.retain(|phi| {
                rho.components[obj]
                    .iter()
                    .enumerate()
                    .all(|(v, &img)| phi[img] == v)
            });
        }
        per_object.push(homs);
    }

    let mut families: Vec<Vec<EndFamily>> = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let mut estimate: u64 = 1;
        for &g in &coslice {
            let x_obj = site.morphisms[g].dst;
            estimate = estimate.saturating_mul(per_object[x_obj].len() as u64);
        }
        if estimate > budget {
            return Err(DualityError::BudgetExceeded {
                object: b,
                estimate,
                budget,
            });
        }
        let mut found = Vec::new();
        let mut partial: Vec<Vec<usize>> = Vec::new();
        backtrack_sub(
            &x.copresheaf,
            &r.copresheaf,
            &site,
            &coslice,
            &per_object,
            &mut partial,
            &mut found,
        );
        families.push(found);
    }
    let exp = crate::presheaf::assemble_exponential(&site, families)?;
    Ok(SubExponential { exp, predicate })
}

fn backtrack_sub(
    q: &Copresheaf,
    r: &Copresheaf,
    site: &SiteSample,
    coslice: &[usize],
    candidates: &[Vec<Vec<usize>>],
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
    for candidate in &candidates[x] {
        partial.push(candidate.clone());
        if compatible_so_far(q, r, site, coslice, partial) {
            backtrack_sub(q, r, site, coslice, candidates, partial, found);
        }
        partial.pop();
    }
}

/// Compatibility constraints touching the last assigned position.
fn compatible_so_far(
    q: &Copresheaf,
    r: &Copresheaf,
    site: &SiteSample,
    coslice: &[usize],
    partial: &[Vec<usize>],
) -> bool {
    let depth = partial.len() - 1;
    for (a, &g) in coslice.iter().enumerate().take(partial.len()) {
        let x = site.morphisms[g].dst;
        for (h, morphism) in site.morphisms.iter().enumerate() {
            if morphism.src != x {
                continue;
            }
            let composite = site.compose(g, h).expect("site closed under composition");
            let b_pos = coslice
                .binary_search(&composite)
                .expect("composite stays in the coslice");
            if a.max(b_pos) != depth || b_pos >= partial.len() {
                continue;
            }
            for v in 0..q.sizes[x] {
                if r.actions[h][partial[a][v]] != partial[b_pos][q.actions[h][v]] {
                    return false;
                }
            }
        }
    }
    true
}

/// Forward and inverse tables of a verified componentwise bijection.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Witness {
    pub forward: Vec<usize>,
    pub inverse: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ComponentReport {
    pub object: String,
    pub lhs_size: usize,
    pub rhs_size: usize,
    pub bijective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TheoremReport {
    pub theorem: String,
    pub mode: String,
    pub components: Vec<ComponentReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub pass: bool,
}

fn mode_string(site: &SiteSample) -> String {
    match site.mode {
        SiteMode::Closed => "exact".to_owned(),
        SiteMode::Truncated => "approximate".to_owned(),
    }
}

/// Collects per-object forward maps into witnessed bijection reports.
fn bijection_component(
    site: &SiteSample,
    b: usize,
    lhs_size: usize,
    rhs_size: usize,
    forward: Option<Vec<usize>>,
) -> ComponentReport {
    let (bijective, witness) = match forward {
        Some(fwd) if lhs_size == rhs_size => {
            let mut inverse = vec![usize::MAX; rhs_size];
            let mut ok = true;
            for (a, &img) in fwd.iter().enumerate() {
                if inverse[img] != usize::MAX {
                    ok = false;
                    break;
                }
                inverse[img] = a;
            }
            if ok {
                (true, Some(Witness {
                    forward: fwd,
                    inverse,
                }))
            } else {
                (false, None)
            }
        }
        _ => (false, None),
    };
    ComponentReport {
        object: site.names[b].clone(),
        lhs_size,
        rhs_size,
        bijective,
        witness,
    }
}

fn finish_report(theorem: &str, site: &SiteSample, components: Vec<ComponentReport>, notes: Vec<String>) -> TheoremReport {
    let pass = components.iter().all(|c| c.bijective) && notes.is_empty();
    TheoremReport {
        theorem: theorem.to_owned(),
        mode: mode_string(site),
        components,
        notes,
        pass,
    }
}

/// The pairing `k: γ*(C) × y(C) -> R` (evaluation), with both
/// transposes. Requires `C` itself realizable.
#[derive(Debug)]
pub struct PairingInstance {
    pub site: Arc<SiteSample>,
    pub c_obj: Arc<SiteObject>,
    pub gamma: Copresheaf,
    pub y: crate::presheaf::Yoneda,
    pub r: Copresheaf,
    pub k: NatTransform,
    /// `γ*(C) ⊸ R` as the function-space closed form.
    pub exp_gamma: Exponential,
    /// `y(C) ⊸ R` as the full end.
    pub exp_y: Exponential,
    pub i: NatTransform,
    pub j: NatTransform,
    pub approximate: bool,
}

pub fn pairing(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<PairingInstance, DualityError> {
    let c_obj = Arc::new(realize(c, bound)?);
    let n = c_obj.model.size;
    let gamma = constant(n, site);
    let y = yoneda(c, site)?;
    let r = forgetful_r(site);

    // k_B(c, f) = f(c): expand each hom tuple to a total map on C.
    let mut components = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let y_size = y.copresheaf.sizes[b];
        let maps: Vec<Vec<usize>> = y.tuples[b]
            .iter()
            .map(|t| c_obj.expand_tuple(t, &site.objects[b].model))
            .collect::<Result<_, _>>()?;
        let mut comp = Vec::with_capacity(n * y_size);
        for c_elt in 0..n {
            for f_idx in 0..y_size {
                comp.push(maps[f_idx][c_elt]);
            }
        }
        components.push(comp);
    }
    let k = NatTransform { components };
    let prod = crate::presheaf::product(&gamma, &y.copresheaf);
    k.check_natural(&prod, &r)?;

    // First-variable homomorphy: for fixed f, c ↦ f(c) commutes with
    // every operation.
    for b in 0..site.object_count() {
        for f_idx in 0..y.copresheaf.sizes[b] {
            let restricted: Vec<usize> = (0..n)
                .map(|c_elt| k.components[b][c_elt * y.copresheaf.sizes[b] + f_idx])
                .collect();
            if !is_homomorphism(&c_obj.model, &site.objects[b].model, &restricted) {
                return Err(DualityError::Structure(format!(
                    "pairing is not a homomorphism in the first variable at object {b}"
                )));
            }
        }
    }

    let exp_gamma = crate::presheaf::exp_const(n, &r, budget)?;
    let exp_y = exp_end(&y.copresheaf, &r, budget)?;
    let i = transpose_second(&k, &gamma, &y.copresheaf, &exp_gamma)?;
    let j = transpose_first(&k, &gamma, &y.copresheaf, &exp_y)?;
    Ok(PairingInstance {
        site: site.clone(),
        c_obj,
        gamma,
        y,
        r,
        k,
        exp_gamma,
        exp_y,
        i,
        j,
        approximate: site.mode == SiteMode::Truncated,
    })
}

/// `i_B: [C, B] -> Hom(C, R(B))` is a bijection onto the
/// homomorphisms, the latter enumerated without reference to `C`'s
/// generators where feasible.
pub fn check_prop1(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
) -> Result<TheoremReport, DualityError> {
    let c_obj = Arc::new(realize(c, bound)?);
    let y = yoneda(c, site)?;
    let mut components = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let expanded: Vec<Vec<usize>> = y.tuples[b]
            .iter()
            .map(|t| c_obj.expand_tuple(t, &site.objects[b].model))
            .collect::<Result<_, _>>()?;
        let homs = t_homs(&c_obj, &site.objects[b])?;
        let forward: Option<Vec<usize>> = expanded
            .iter()
            .map(|m| homs.iter().position(|h| h == m))
            .collect();
        components.push(bijection_component(
            site,
            b,
            expanded.len(),
            homs.len(),
            forward,
        ));
    }
    Ok(finish_report("prop1", site, components, Vec::new()))
}

/// `j_B = incl₂`: the projection equations `p_f ∘ π_g ∘ incl₂ = f`
/// hold on every generator, and the induced end family is the unique
/// one satisfying the transposition equations.
pub fn check_prop2(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<TheoremReport, DualityError> {
    let repr = exp_repr(c, site, bound)?;
    let r = forgetful_r(site);
    let end = exp_end(&repr.yon.copresheaf, &r, budget)?;
    let mut components = Vec::with_capacity(site.object_count());
    let mut notes = Vec::new();
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let mut unique = 0usize;
        let mut ok = true;
        for gen in 0..c.generators {
            let w = repr.incl2_gens[b][gen];
            // Target family from the hom-set alone: the pairing's
            // transpose at the generator.
            let target = EndFamily {
                components: coslice
                    .iter()
                    .map(|&g| {
                        let x = site.morphisms[g].dst;
                        repr.yon.tuples[x].iter().map(|t| t[gen]).collect()
                    })
                    .collect(),
            };
            if repr.exp.families[b][w] != target {
                ok = false;
                notes.push(format!(
                    "projection equations fail at object {} generator {gen}",
                    site.names[b]
                ));
            }
            let matches = end.matching_elements(b, &target);
            if matches.len() == 1 {
                unique += 1;
            } else {
                ok = false;
                notes.push(format!(
                    "uniqueness fails at object {} generator {gen}: {} matches",
                    site.names[b],
                    matches.len()
                ));
            }
        }
        components.push(ComponentReport {
            object: site.names[b].clone(),
            lhs_size: c.generators,
            rhs_size: unique,
            bijective: ok,
            witness: None,
        });
    }
    Ok(finish_report("prop2", site, components, notes))
}

/// `j̄_B: B ⊗ C -> (y(C) ⊸ R)(B)` is bijective: the coproduct
/// projection tables realize every end family exactly once.
pub fn check_thm3(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<TheoremReport, DualityError> {
    let repr = exp_repr(c, site, bound)?;
    let r = forgetful_r(site);
    let end = exp_end(&repr.yon.copresheaf, &r, budget)?;
    let mut components = Vec::with_capacity(site.object_count());
    let mut notes = Vec::new();
    let mut forwards: Vec<Vec<usize>> = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let mut forward = Vec::with_capacity(repr.exp.object.sizes[b]);
        let mut total = true;
        for w in 0..repr.exp.object.sizes[b] {
            let matches = end.matching_elements(b, &repr.exp.families[b][w]);
            if matches.len() == 1 {
                forward.push(matches[0]);
            } else {
                total = false;
                break;
            }
        }
        let fwd = if total { Some(forward.clone()) } else { None };
        components.push(bijection_component(
            site,
            b,
            repr.exp.object.sizes[b],
            end.object.sizes[b],
            fwd,
        ));
        forwards.push(forward);
    }
    // The bijections must also commute with the copresheaf actions.
    if components.iter().all(|c| c.bijective) {
        for (m, morphism) in site.morphisms.iter().enumerate() {
            for w in 0..repr.exp.object.sizes[morphism.src] {
                if forwards[morphism.dst][repr.exp.object.actions[m][w]]
                    != end.object.actions[m][forwards[morphism.src][w]]
                {
                    notes.push(format!("actions disagree at morphism {m}"));
                }
            }
        }
    }
    Ok(finish_report("thm3", site, components, notes))
}

/// Shared data for Thms. 4, 5, 6: the coproduct presentation of
/// `R ⊗ γ*(C)`, its R-algebra structure, and the ⊸_R dual `Y`.
pub struct DualData {
    pub repr: ReprExp,
    pub y_sub: SubExponential,
    pub r: Copresheaf,
    /// Per object, positions of identity components in the coslice.
    pub id_pos: Vec<usize>,
}

pub fn dual_data(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<DualData, DualityError> {
    let repr = exp_repr(c, site, bound)?;
    let x_alg = repr_algebraic(&repr)?;
    let r_alg = forgetful_algebraic(site)?;
    let rho = incl1_structure(&repr);
    let y_sub = hom_r_sub(&x_alg, &r_alg, &rho, budget)?;
    let r = forgetful_r(site);
    let id_pos = (0..site.object_count())
        .map(|b| {
            site.coslice(b)
                .iter()
                .position(|&g| g == site.identities[b])
                .expect("identity in coslice")
        })
        .collect();
    Ok(DualData {
        repr,
        y_sub,
        r,
        id_pos,
    })
}

/// The family `g ↦ {id_X, g∘f}` of `f ∈ [C, B]`, used by both the
/// Thm. 4 map and the Thm. 5 Dirac map.
fn universal_family(
    data: &DualData,
    site: &SiteSample,
    b: usize,
    f_tuple: &[usize],
) -> Result<EndFamily, DualityError> {
    let coslice = site.coslice(b);
    let mut components = Vec::with_capacity(coslice.len());
    for &g in &coslice {
        let morphism = &site.morphisms[g];
        let x = morphism.dst;
        let mut images: Vec<usize> = site.objects[x].generator_images.clone();
        images.extend(f_tuple.iter().map(|&v| morphism.map[v]));
        components.push(data.repr.bcs[x].expand_tuple(&images, &site.objects[x].model)?);
    }
    Ok(EndFamily { components })
}

/// `i: y(C) -> (R ⊗ γ*C) ⊸_R R` is a componentwise bijection.
pub fn check_thm4(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<TheoremReport, DualityError> {
    let data = dual_data(c, site, bound, budget)?;
    let mut components = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let forward = thm4_forward(&data, site, b)?;
        components.push(bijection_component(
            site,
            b,
            data.repr.yon.copresheaf.sizes[b],
            data.y_sub.exp.object.sizes[b],
            forward,
        ));
    }
    Ok(finish_report("thm4", site, components, Vec::new()))
}

/// Maps each `f ∈ [C, B]` to its family's index in `Y(B)`, or `None`
/// if some family is missing or ambiguous there.
fn thm4_forward(
    data: &DualData,
    site: &SiteSample,
    b: usize,
) -> Result<Option<Vec<usize>>, DualityError> {
    let mut forward = Vec::with_capacity(data.repr.yon.tuples[b].len());
    for f_tuple in &data.repr.yon.tuples[b] {
        let family = universal_family(data, site, b, f_tuple)?;
        let matches = data.y_sub.exp.matching_elements(b, &family);
        if matches.len() != 1 {
            return Ok(None);
        }
        forward.push(matches[0]);
    }
    Ok(Some(forward))
}

/// `δ_{y(C)}: y(C) -> (y(C) ⊸ R) ⊸_R R` is a componentwise
/// bijection; the evaluation route through the projection tables must
/// agree with the universal-map route, and the section-1 triangle
/// `(i ⊸ R) ∘ δ = j` must hold.
pub fn check_thm5(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<TheoremReport, DualityError> {
    let data = dual_data(c, site, bound, budget)?;
    let mut components = Vec::with_capacity(site.object_count());
    let mut notes = Vec::new();
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let mut forward = Vec::new();
        let mut total = true;
        for (f_idx, f_tuple) in data.repr.yon.tuples[b].iter().enumerate() {
            // Route 1: the universal map {id_X, g∘f} componentwise.
            let family = universal_family(&data, site, b, f_tuple)?;
            // Route 2: evaluation through the projection tables:
            // δ(f)_g(w) = π_{id_X}(w) at g∘f.
            let eval_family = EndFamily {
                components: coslice
                    .iter()
                    .map(|&g| {
                        let morphism = &site.morphisms[g];
                        let x = morphism.dst;
                        let gf: Vec<usize> =
                            f_tuple.iter().map(|&v| morphism.map[v]).collect();
                        let gf_idx = data.repr.yon.tuples[x]
                            .binary_search(&gf)
                            .expect("composite hom in hom-set");
                        (0..data.repr.exp.object.sizes[x])
                            .map(|w| {
                                data.repr.exp.families[x][w].components[data.id_pos[x]][gf_idx]
                            })
                            .collect()
                    })
                    .collect(),
            };
            if family != eval_family {
                notes.push(format!(
                    "evaluation and universal-map routes disagree at {} element {f_idx}",
                    site.names[b]
                ));
            }
            let matches = data.y_sub.exp.matching_elements(b, &family);
            if matches.len() == 1 {
                forward.push(matches[0]);
            } else {
                total = false;
            }
        }
        let fwd = if total { Some(forward) } else { None };
        components.push(bijection_component(
            site,
            b,
            data.repr.yon.copresheaf.sizes[b],
            data.y_sub.exp.object.sizes[b],
            fwd,
        ));
    }
    // Triangle (i ⊸ R) ∘ δ = j, on generators: f(c) = {g,f}(incl₂(c)).
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        for gen in 0..c.generators {
            let w = data.repr.incl2_gens[b][gen];
            for (pos, &g) in coslice.iter().enumerate() {
                let x = site.morphisms[g].dst;
                for (f_idx, f_tuple) in data.repr.yon.tuples[x].iter().enumerate() {
                    if data.repr.exp.families[b][w].components[pos][f_idx] != f_tuple[gen] {
                        notes.push(format!(
                            "triangle identity fails at {} generator {gen}",
                            site.names[b]
                        ));
                    }
                }
            }
        }
    }
    Ok(finish_report("thm5", site, components, notes))
}

/// `δ_{R⊗γ*C}: B ⊗ C -> (((R⊗γ*C) ⊸_R R) ⊸ R)(B)` is bijective;
/// additionally the factorization `(s ⊸ R) ∘ δ = (i ⊸ R) ∘ j̄` and
/// the splitting identity `(δ_X ⊸_R R) ∘ δ_Y = id` hold.
pub fn check_thm6(
    c: &FPPresentation,
    site: &Arc<SiteSample>,
    bound: usize,
    budget: u64,
) -> Result<TheoremReport, DualityError> {
    let data = dual_data(c, site, bound, budget)?;
    let full_end = exp_end(&data.y_sub.exp.object, &data.r, budget)?;
    let mut notes = Vec::new();

    // δ(w)_g(φ) = φ_{id_X}((g ⊗ C)(w)).
    let mut forwards: Vec<Option<Vec<usize>>> = Vec::with_capacity(site.object_count());
    let mut components = Vec::with_capacity(site.object_count());
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        let mut forward = Vec::new();
        let mut total = true;
        for w in 0..data.repr.exp.object.sizes[b] {
            let family = EndFamily {
                components: coslice
                    .iter()
                    .map(|&g| {
                        let x = site.morphisms[g].dst;
                        let moved = data.repr.exp.object.actions[g][w];
                        (0..data.y_sub.exp.object.sizes[x])
                            .map(|phi| {
                                data.y_sub.exp.families[x][phi].components[data.id_pos[x]][moved]
                            })
                            .collect()
                    })
                    .collect(),
            };
            let matches = full_end.matching_elements(b, &family);
            if matches.len() == 1 {
                forward.push(matches[0]);
            } else {
                total = false;
                break;
            }
        }
        let fwd = if total { Some(forward) } else { None };
        components.push(bijection_component(
            site,
            b,
            data.repr.exp.object.sizes[b],
            full_end.object.sizes[b],
            fwd.clone(),
        ));
        forwards.push(fwd);
    }

    // Factorization: δ(w)_g(i_X(f)) = {g, f}(w) for every f ∈ [C, X].
    for b in 0..site.object_count() {
        let coslice = site.coslice(b);
        for (pos, &g) in coslice.iter().enumerate() {
            let x = site.morphisms[g].dst;
            let Some(i_x) = thm4_forward(&data, site, x)? else {
                notes.push(format!("thm4 map not available at {}", site.names[x]));
                continue;
            };
            for w in 0..data.repr.exp.object.sizes[b] {
                let moved = data.repr.exp.object.actions[g][w];
                for (f_idx, &phi) in i_x.iter().enumerate() {
                    let lhs =
                        data.y_sub.exp.families[x][phi].components[data.id_pos[x]][moved];
                    let rhs = data.repr.exp.families[b][w].components[pos][f_idx];
                    if lhs != rhs {
                        notes.push(format!(
                            "factorization fails at {} morphism {g}",
                            site.names[b]
                        ));
                    }
                }
            }
        }
    }

    // Splitting: (δ_X ⊸_R R) ∘ δ_Y = id on Y.
    if forwards.iter().all(Option::is_some) {
        for b in 0..site.object_count() {
            let coslice = site.coslice(b);
            for y_elt in 0..data.y_sub.exp.object.sizes[b] {
                for (pos, &g) in coslice.iter().enumerate() {
                    let x = site.morphisms[g].dst;
                    let fwd_x = forwards[x].as_ref().expect("checked above");
                    let moved_y = data.y_sub.exp.object.actions[g][y_elt];
                    for w in 0..data.repr.exp.object.sizes[x] {
                        let lhs = full_end.families[x][fwd_x[w]].components[data.id_pos[x]]
                            [moved_y];
                        let rhs = data.y_sub.exp.families[b][y_elt].components[pos][w];
                        if lhs != rhs {
                            notes.push(format!(
                                "splitting identity fails at {} element {y_elt}",
                                site.names[b]
                            ));
                        }
                    }
                }
            }
        }
    }
    notes.sort();
    notes.dedup();
    Ok(finish_report("thm6", site, components, notes))
}
