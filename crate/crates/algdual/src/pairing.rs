//! Complete pairings between algebras for two theories, and the
//! concrete instances: finite Stone duality, the object classifier,
//! and the dual-numbers isomorphism over modular rings.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    check_axioms, eval_term, is_homomorphism, pow_saturating, AlgebraError, AxiomCheck,
    FPPresentation, FiniteAlgebra, Tuples,
};
use crate::duality::{check_thm3, ComponentReport, DualityError, TheoremReport, Witness};
use crate::presheaf::{exp_repr, PresheafError};
use crate::realize::RealizeError;
use crate::site::{SiteMode, SiteSample};
use crate::theory::{numeral, TheoryPresentation};

#[derive(Debug, Error)]
pub enum PairingError {
    #[error("budget exceeded: instance needs {estimate} candidate functions > {budget}")]
    Budget { estimate: u64, budget: u64 },
    #[error("site has no object named {0}")]
    MissingObject(String),
    #[error("pairing structure defect: {0}")]
    Structure(String),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A pairing `k: P × Q -> R` between an algebra for one theory and an
/// algebra for another, with `R` carrying both structures.
#[derive(Debug, Clone)]
pub struct CompletePairingSpec {
    pub name: String,
    pub p: Arc<FiniteAlgebra>,
    pub q: Arc<FiniteAlgebra>,
    /// `R` with `P`'s theory structure.
    pub r1: Arc<FiniteAlgebra>,
    /// `R` with `Q`'s theory structure (same carrier).
    pub r2: Arc<FiniteAlgebra>,
    /// `k[p][q]`.
    pub k: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CompleteReport {
    pub name: String,
    pub p_size: usize,
    pub q_size: usize,
    pub r_size: usize,
    pub bimorphism: bool,
    pub commuting: bool,
    /// `|P ⊸_{T1} R|`, the codomain of `j`.
    pub p_dual_size: usize,
    /// `|Q ⊸_{T2} R|`, the codomain of `i`.
    pub q_dual_size: usize,
    pub i_iso: bool,
    pub j_iso: bool,
    pub dirac_p_iso: bool,
    pub dirac_q_iso: bool,
    pub pass: bool,
}

fn all_homs_brute(
    dom: &FiniteAlgebra,
    cod: &FiniteAlgebra,
    budget: u64,
) -> Result<Vec<Vec<usize>>, PairingError> {
    let estimate = pow_saturating(cod.size, dom.size);
    if estimate > budget {
        return Err(PairingError::Budget { estimate, budget });
    }
    Ok(Tuples::new(cod.size, dom.size)
        .filter(|map| is_homomorphism(dom, cod, map))
        .collect())
}

/// The two `R` structures commute: every operation of one theory,
/// applied componentwise, is a homomorphism for the other.
fn structures_commute(r1: &FiniteAlgebra, r2: &FiniteAlgebra) -> bool {
    for op1 in 0..r1.theory.ops.len() {
        let n = r1.theory.ops[op1].arity;
        for op2 in 0..r2.theory.ops.len() {
            let m = r2.theory.ops[op2].arity;
            for flat in Tuples::new(r1.size, n * m) {
                // flat[j * n + l] is row j, column l.
                let lhs_args: Vec<usize> = (0..n)
                    .map(|l| {
                        let col: Vec<usize> = (0..m).map(|j| flat[j * n + l]).collect();
                        r2.apply(op2, &col)
                    })
                    .collect();
                let lhs = r1.apply(op1, &lhs_args);
                let rhs_args: Vec<usize> = (0..m)
                    .map(|j| r1.apply(op1, &flat[j * n..(j + 1) * n]))
                    .collect();
                let rhs = r2.apply(op2, &rhs_args);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Gives a hom-set the pointwise structure of `structure`'s theory;
/// fails if the hom-set is not closed under it.
fn pointwise_algebra(
    homs: &[Vec<usize>],
    structure: &FiniteAlgebra,
) -> Result<FiniteAlgebra, PairingError> {
    let theory = structure.theory.clone();
    let mut tables = Vec::with_capacity(theory.ops.len());
    let dom = homs.first().map(Vec::len).unwrap_or(0);
    for (op, decl) in theory.ops.iter().enumerate() {
        let mut table = Vec::new();
        for args in Tuples::new(homs.len(), decl.arity) {
            let combined: Vec<usize> = (0..dom)
                .map(|v| {
                    let at_v: Vec<usize> = args.iter().map(|&h| homs[h][v]).collect();
                    structure.apply(op, &at_v)
                })
                .collect();
            let pos = homs
                .binary_search(&combined)
                .map_err(|_| {
                    PairingError::Structure(
                        "hom-set is not closed under the pointwise structure".into(),
                    )
                })?;
            table.push(pos);
        }
        tables.push(table);
    }
    Ok(FiniteAlgebra::new(theory, homs.len(), tables)?)
}

fn bijective(forward: &[usize], rhs_size: usize) -> bool {
    if forward.len() != rhs_size {
        return false;
    }
    let mut hit = vec![false; rhs_size];
    forward
        .iter()
        .all(|&v| !std::mem::replace(&mut hit[v], true))
}

/// Checks that the transposes `i` and `j` of the pairing, restricted
/// to structure-respecting maps, are bijections, and that both derived
/// double-dual maps are bijections too.
pub fn check_complete(
    spec: &CompletePairingSpec,
    budget: u64,
) -> Result<CompleteReport, PairingError> {
    if spec.r1.size != spec.r2.size {
        return Err(PairingError::Structure(
            "the two structures on R have different carriers".into(),
        ));
    }
    // Bimorphism: rows are homomorphisms into r1's structure applied
    // to P, columns into r2's applied to Q.
    let mut bimorphism = true;
    for q_elt in 0..spec.q.size {
        let row: Vec<usize> = (0..spec.p.size).map(|p_elt| spec.k[p_elt][q_elt]).collect();
        if !is_homomorphism(&spec.p, &spec.r1, &row) {
            bimorphism = false;
        }
    }
    for p_elt in 0..spec.p.size {
        if !is_homomorphism(&spec.q, &spec.r2, &spec.k[p_elt]) {
            bimorphism = false;
        }
    }
    let commuting = structures_commute(&spec.r1, &spec.r2);

    let hom_p_r1 = all_homs_brute(&spec.p, &spec.r1, budget)?;
    let hom_q_r2 = all_homs_brute(&spec.q, &spec.r2, budget)?;

    // i: P -> Q ⊸_{T2} R sends p to its row; j sends q to its column.
    let i_forward: Option<Vec<usize>> = (0..spec.p.size)
        .map(|p_elt| hom_q_r2.iter().position(|h| *h == spec.k[p_elt]))
        .collect();
    let j_forward: Option<Vec<usize>> = (0..spec.q.size)
        .map(|q_elt| {
            let col: Vec<usize> = (0..spec.p.size).map(|p_elt| spec.k[p_elt][q_elt]).collect();
            hom_p_r1.iter().position(|h| *h == col)
        })
        .collect();
    let i_iso = i_forward.as_deref().is_some_and(|f| bijective(f, hom_q_r2.len()));
    let j_iso = j_forward.as_deref().is_some_and(|f| bijective(f, hom_p_r1.len()));

    // Dirac maps: evaluation into the double dual, with the pointwise
    // structure on the inner dual.
    let dirac_p_iso = dirac_iso(spec.p.size, &hom_p_r1, &spec.r2, budget)?;
    let dirac_q_iso = dirac_iso(spec.q.size, &hom_q_r2, &spec.r1, budget)?;

    let pass = bimorphism && commuting && i_iso && j_iso && dirac_p_iso && dirac_q_iso;
    Ok(CompleteReport {
        name: spec.name.clone(),
        p_size: spec.p.size,
        q_size: spec.q.size,
        r_size: spec.r1.size,
        bimorphism,
        commuting,
        p_dual_size: hom_p_r1.len(),
        q_dual_size: hom_q_r2.len(),
        i_iso,
        j_iso,
        dirac_p_iso,
        dirac_q_iso,
        pass,
    })
}

/// `δ: P -> (P ⊸_{T1} R) ⊸_{T2} R` by evaluation: bijective?
fn dirac_iso(
    p_size: usize,
    inner: &[Vec<usize>],
    other_structure: &FiniteAlgebra,
    budget: u64,
) -> Result<bool, PairingError> {
    let inner_alg = pointwise_algebra(inner, other_structure)?;
    let outer = all_homs_brute(&inner_alg, other_structure, budget)?;
    let forward: Option<Vec<usize>> = (0..p_size)
        .map(|p_elt| {
            let eval: Vec<usize> = inner.iter().map(|h| h[p_elt]).collect();
            outer.iter().position(|h| *h == eval)
        })
        .collect();
    Ok(forward.as_deref().is_some_and(|f| bijective(f, outer.len())))
}

/// Finite Stone duality: `P` the powerset Boolean algebra of an
/// `n`-element set, `Q` the set itself, `R = 2` with Boolean and
/// trivial structure, `k` the membership pairing.
pub fn stone_instance(n: usize) -> Result<CompletePairingSpec, PairingError> {
    if n > 4 {
        return Err(PairingError::Budget {
            estimate: pow_saturating(2, 1usize << n),
            budget: pow_saturating(2, 16),
        });
    }
    let boolean = Arc::new(TheoryPresentation::boolean_algebras());
    let initial = Arc::new(TheoryPresentation::initial());
    let size = 1usize << n;
    let mask = size - 1;
    let p = Arc::new(bitmask_boolean(boolean.clone(), size, mask)?);
    if let AxiomCheck::Counterexample { .. } = check_axioms(&p)? {
        return Err(PairingError::Structure("powerset tables violate an axiom".into()));
    }
    let q = Arc::new(FiniteAlgebra::new(initial.clone(), n, Vec::new())?);
    let r1 = Arc::new(bitmask_boolean(boolean, 2, 1)?);
    let r2 = Arc::new(FiniteAlgebra::new(initial, 2, Vec::new())?);
    let k = (0..size)
        .map(|s| (0..n).map(|c| (s >> c) & 1).collect())
        .collect();
    Ok(CompletePairingSpec {
        name: format!("stone_{n}"),
        p,
        q,
        r1,
        r2,
        k,
    })
}

/// Boolean algebra on bitmasks below `size` (a power of two).
fn bitmask_boolean(
    theory: Arc<TheoryPresentation>,
    size: usize,
    mask: usize,
) -> Result<FiniteAlgebra, PairingError> {
    let mut tables = Vec::new();
    for decl in &theory.ops {
        let table = Tuples::new(size, decl.arity)
            .map(|args| match decl.symbol.as_str() {
                "zero" => 0,
                "one" => mask,
                "and" => args[0] & args[1],
                "or" => args[0] | args[1],
                "not" => !args[0] & mask,
                other => unreachable!("unknown Boolean op {other}"),
            })
            .collect();
        tables.push(table);
    }
    Ok(FiniteAlgebra::new(theory, size, tables)?)
}

/// The object-classifier instance: over the initial theory with `C`
/// the one-point set, `j̄_B: B + 1 -> B ⊔ 1` is a bijection and the
/// added point projects to the identity family.
pub fn object_classifier_instance(
    site: &Arc<SiteSample>,
    bound: usize,
) -> Result<TheoremReport, PairingError> {
    if !site.theory.ops.is_empty() {
        return Err(PairingError::Structure(
            "object classifier requires the initial theory".into(),
        ));
    }
    let c = FPPresentation::new(site.theory.clone(), 1, Vec::new())?;
    let repr = exp_repr(&c, site, bound)?;
    let mut components = Vec::with_capacity(site.object_count());
    let mut notes = Vec::new();
    for b in 0..site.object_count() {
        let n = site.objects[b].model.size;
        let added = repr.incl2_gens[b][0];
        // j̄ on B + 1: the coproduct injection on B, the added point
        // as the extra element.
        let mut forward: Vec<usize> = repr.incl1[b].clone();
        forward.push(added);
        let rhs = repr.exp.object.sizes[b];
        let ok = rhs == n + 1 && bijective(&forward, rhs);
        let witness = if ok {
            let mut inverse = vec![0; rhs];
            for (a, &img) in forward.iter().enumerate() {
                inverse[img] = a;
            }
            Some(Witness { forward, inverse })
        } else {
            None
        };
        components.push(ComponentReport {
            object: site.names[b].clone(),
            lhs_size: n + 1,
            rhs_size: rhs,
            bijective: ok,
            witness,
        });
        // Added point: its f-coordinate at every g is f's own point.
        let coslice = site.coslice(b);
        for (pos, &g) in coslice.iter().enumerate() {
            let x = site.morphisms[g].dst;
            for (f_idx, f_tuple) in repr.yon.tuples[x].iter().enumerate() {
                if repr.exp.families[b][added].components[pos][f_idx] != f_tuple[0] {
                    notes.push(format!(
                        "added point is not the identity family at {}",
                        site.names[b]
                    ));
                }
            }
        }
    }
    notes.sort();
    notes.dedup();
    let pass = components.iter().all(|c| c.bijective) && notes.is_empty();
    Ok(TheoremReport {
        theorem: "object_classifier".to_owned(),
        mode: match site.mode {
            SiteMode::Closed => "exact".to_owned(),
            SiteMode::Truncated => "approximate".to_owned(),
        },
        components,
        notes,
        pass,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct KlComponent {
    pub modulus: usize,
    pub carrier: usize,
    pub expected: usize,
    pub bijective: bool,
    pub ring_iso: bool,
    pub coproduct_structure: bool,
    pub thm3_lhs_agrees: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct KlReport {
    pub instances: Vec<KlComponent>,
    pub pass: bool,
}

/// For each modulus `m`, the coproduct of `Z/m` with the dual numbers
/// has carrier `m²`, and `(a, b) ↦ a + b·e` is a ring isomorphism
/// from the dual-number pair ring onto it, agreeing with the
/// coproduct structure maps.
pub fn kl_instance(
    site: &Arc<SiteSample>,
    moduli: &[usize],
    bound: usize,
    budget: u64,
) -> Result<KlReport, PairingError> {
    let theory = site.theory.clone();
    let dual = FPPresentation::parse(theory.clone(), 1, &[("(mul x0 x0)", "zero")])?;
    let repr = exp_repr(&dual, site, bound)?;
    let thm3 = check_thm3(&dual, site, bound, budget)?;
    let add = theory.op_index("add").ok_or_else(|| {
        PairingError::Structure("theory has no add operation".into())
    })?;
    let mul = theory.op_index("mul").ok_or_else(|| {
        PairingError::Structure("theory has no mul operation".into())
    })?;
    let mut instances = Vec::with_capacity(moduli.len());
    for &m in moduli {
        let name = format!("mod{m}");
        let b = site
            .object_index(&name)
            .ok_or_else(|| PairingError::MissingObject(name.clone()))?;
        let b_model = &site.objects[b].model;
        let bc = &repr.bcs[b];
        let e_elt = repr.incl2_gens[b][0];

        // Numeral embedding of 0..m-1 into the realized carrier.
        let mut numerals = Vec::with_capacity(m);
        for a in 0..m {
            numerals.push(eval_term(&numeral(&theory, a), &[], b_model)?);
        }
        let embeds = bijective(&numerals, b_model.size);

        // (a, b) ↦ incl₁(a) + incl₁(b)·e, indexed as a·m + b.
        let mut forward = Vec::with_capacity(m * m);
        for a in 0..m {
            for b2 in 0..m {
                let x = repr.incl1[b][numerals[a]];
                let y = repr.incl1[b][numerals[b2]];
                forward.push(bc.model.apply(add, &[x, bc.model.apply(mul, &[y, e_elt])]));
            }
        }
        let carrier = bc.model.size;
        let is_bijective = embeds && bijective(&forward, carrier);

        // The domain as a ring in its own right: dual-number pairs
        // over modular arithmetic.
        let pair_ring = dual_pair_ring(&theory, m)?;
        let ring_iso = is_bijective && is_homomorphism(&pair_ring, &bc.model, &forward);

        // Agreement with the coproduct structure: first coordinate
        // through incl₁, (0, 1) to the adjoined generator.
        let mut coproduct_structure = true;
        for a in 0..m {
            if forward[a * m] != repr.incl1[b][numerals[a]] {
                coproduct_structure = false;
            }
        }
        if m > 1 && forward[1] != e_elt {
            coproduct_structure = false;
        }
        let thm3_lhs_agrees = thm3
            .components
            .iter()
            .find(|c| c.object == name)
            .is_some_and(|c| c.lhs_size == carrier);

        instances.push(KlComponent {
            modulus: m,
            carrier,
            expected: m * m,
            bijective: is_bijective,
            ring_iso,
            coproduct_structure,
            thm3_lhs_agrees,
        });
    }
    let pass = instances.iter().all(|i| {
        i.carrier == i.expected
            && i.bijective
            && i.ring_iso
            && i.coproduct_structure
            && i.thm3_lhs_agrees
    });
    Ok(KlReport { instances, pass })
}

/// The ring of dual-number pairs over `Z/m`: `(a,b) = a + b·ε` with
/// `ε² = 0`, encoded as `a·m + b`.
fn dual_pair_ring(
    theory: &Arc<TheoryPresentation>,
    m: usize,
) -> Result<FiniteAlgebra, PairingError> {
    let size = m * m;
    let mut tables = Vec::new();
    for decl in &theory.ops {
        let table = Tuples::new(size, decl.arity)
            .map(|args| {
                let parts: Vec<(usize, usize)> =
                    args.iter().map(|&v| (v / m, v % m)).collect();
                let (a, b) = match decl.symbol.as_str() {
                    "zero" => (0, 0),
                    "one" => (1 % m, 0),
                    "add" => (
                        (parts[0].0 + parts[1].0) % m,
                        (parts[0].1 + parts[1].1) % m,
                    ),
                    "mul" => (
                        (parts[0].0 * parts[1].0) % m,
                        (parts[0].0 * parts[1].1 + parts[0].1 * parts[1].0) % m,
                    ),
                    "neg" => ((m - parts[0].0) % m, (m - parts[0].1) % m),
                    other => unreachable!("unknown ring op {other}"),
                };
                a * m + b
            })
            .collect();
        tables.push(table);
    }
    let ring = FiniteAlgebra::new(theory.clone(), size, tables)?;
    if let AxiomCheck::Counterexample { .. } = check_axioms(&ring)? {
        return Err(PairingError::Structure(
            "dual-number pair tables violate a ring axiom".into(),
        ));
    }
    Ok(ring)
}
