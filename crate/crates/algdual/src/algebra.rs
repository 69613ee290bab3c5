//! Finite models of equational theories and finitely presented
//! algebras: term evaluation, axiom checking, homomorphism
//! enumeration, and coproducts of presentations.

use std::sync::Arc;

use thiserror::Error;

use crate::theory::{Equation, Term, TheoryError, TheoryPresentation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable x{0} is unbound in the assignment")]
    UnboundVar(usize),
    #[error("operation index {0} out of range for the theory")]
    UnknownOp(usize),
    #[error("operation table for `{0}` has the wrong length")]
    BadTable(String),
    #[error("table entry out of carrier range in `{0}`")]
    TableRange(String),
    #[error("theories differ: `{0}` vs `{1}`")]
    TheoryMismatch(String, String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// An explicit finite model: carrier `0..size` plus a total table per
/// operation, stored row-major over argument tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub theory: Arc<TheoryPresentation>,
    pub size: usize,
    pub tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new(
        theory: Arc<TheoryPresentation>,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        if tables.len() != theory.ops.len() {
            return Err(AlgebraError::BadTable("<table count>".into()));
        }
        for (op, table) in theory.ops.iter().zip(&tables) {
            if table.len() != size.pow(op.arity as u32) {
                return Err(AlgebraError::BadTable(op.symbol.clone()));
            }
            if table.iter().any(|&v| v >= size) {
                return Err(AlgebraError::TableRange(op.symbol.clone()));
            }
        }
        Ok(FiniteAlgebra {
            theory,
            size,
            tables,
        })
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        self.tables[op][idx]
    }
}

/// Structural recursion through the model's tables.
pub fn eval_term(t: &Term, assignment: &[usize], algebra: &FiniteAlgebra) -> Result<usize, AlgebraError> {
    match t {
        Term::Var(i) => assignment
            .get(*i)
            .copied()
            .ok_or(AlgebraError::UnboundVar(*i)),
        Term::App(op, args) => {
            if *op >= algebra.theory.ops.len() {
                return Err(AlgebraError::UnknownOp(*op));
            }
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_term(a, assignment, algebra)?);
            }
            Ok(algebra.apply(*op, &vals))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomCheck {
    Pass,
    Counterexample {
        axiom: usize,
        assignment: Vec<usize>,
    },
}

/// Exhaustively evaluates every axiom under every assignment, in
/// canonical mixed-radix order, returning the first violation.
pub fn check_axioms(algebra: &FiniteAlgebra) -> Result<AxiomCheck, AlgebraError> {
    for (idx, axiom) in algebra.theory.axioms.iter().enumerate() {
        let vars = axiom.var_span();
        for assignment in Tuples::new(algebra.size, vars) {
            let l = eval_term(&axiom.lhs, &assignment, algebra)?;
            let r = eval_term(&axiom.rhs, &assignment, algebra)?;
            if l != r {
                return Ok(AxiomCheck::Counterexample {
                    axiom: idx,
                    assignment,
                });
            }
        }
    }
    Ok(AxiomCheck::Pass)
}

/// A finitely presented algebra: generator count plus relations over
/// variables `x0..x{generators-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPPresentation {
    pub theory: Arc<TheoryPresentation>,
    pub generators: usize,
    pub relations: Vec<Equation>,
}

impl FPPresentation {
    pub fn new(
        theory: Arc<TheoryPresentation>,
        generators: usize,
        relations: Vec<Equation>,
    ) -> Result<Self, AlgebraError> {
        for rel in &relations {
            theory.check_term(&rel.lhs)?;
            theory.check_term(&rel.rhs)?;
            if rel.var_span() > generators {
                return Err(AlgebraError::UnboundVar(rel.var_span() - 1));
            }
        }
        Ok(FPPresentation {
            theory,
            generators,
            relations,
        })
    }

    pub fn parse(
        theory: Arc<TheoryPresentation>,
        generators: usize,
        relations: &[(&str, &str)],
    ) -> Result<Self, AlgebraError> {
        let rels = relations
            .iter()
            .map(|(l, r)| {
                Ok(Equation {
                    lhs: theory.parse_term(l)?,
                    rhs: theory.parse_term(r)?,
                })
            })
            .collect::<Result<Vec<_>, TheoryError>>()?;
        Self::new(theory, generators, rels)
    }

    /// The presentation with no generators and no relations.
    pub fn initial(theory: Arc<TheoryPresentation>) -> Self {
        FPPresentation {
            theory,
            generators: 0,
            relations: Vec::new(),
        }
    }
}

fn same_theory(a: &TheoryPresentation, b: &TheoryPresentation) -> Result<(), AlgebraError> {
    if a != b {
        return Err(AlgebraError::TheoryMismatch(a.name.clone(), b.name.clone()));
    }
    Ok(())
}

/// All generator-image tuples under which every relation of `presentation`
/// holds in `model`, in lexicographic order. Each tuple determines a
/// unique homomorphism out of the presented algebra.
pub fn homs_fp_to_model(
    presentation: &FPPresentation,
    model: &FiniteAlgebra,
) -> Result<Vec<Vec<usize>>, AlgebraError> {
    same_theory(&presentation.theory, &model.theory)?;
    let mut out = Vec::new();
    'tuples: for tuple in Tuples::new(model.size, presentation.generators) {
        for rel in &presentation.relations {
            if eval_term(&rel.lhs, &tuple, model)? != eval_term(&rel.rhs, &tuple, model)? {
                continue 'tuples;
            }
        }
        out.push(tuple);
    }
    Ok(out)
}

/// Generators of the second summand are shifted past the first; the
/// two shift maps are the coproduct injections.
pub fn coproduct_presentation(
    c1: &FPPresentation,
    c2: &FPPresentation,
) -> Result<FPPresentation, AlgebraError> {
    same_theory(&c1.theory, &c2.theory)?;
    let mut relations = c1.relations.clone();
    for rel in &c2.relations {
        relations.push(Equation {
            lhs: shift_vars(&rel.lhs, c1.generators),
            rhs: shift_vars(&rel.rhs, c1.generators),
        });
    }
    Ok(FPPresentation {
        theory: c1.theory.clone(),
        generators: c1.generators + c2.generators,
        relations,
    })
}

pub fn shift_vars(t: &Term, by: usize) -> Term {
    match t {
        Term::Var(i) => Term::Var(i + by),
        Term::App(op, args) => Term::App(*op, args.iter().map(|a| shift_vars(a, by)).collect()),
    }
}

/// A total carrier map commuting with every operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: Arc<FiniteAlgebra>,
    pub target: Arc<FiniteAlgebra>,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        map: Vec<usize>,
    ) -> Result<Self, AlgebraError> {
        same_theory(&source.theory, &target.theory)?;
        let h = Homomorphism {
            source,
            target,
            map,
        };
        if !h.is_valid() {
            return Err(AlgebraError::BadTable("<not a homomorphism>".into()));
        }
        Ok(h)
    }

    pub fn is_valid(&self) -> bool {
        if self.map.len() != self.source.size {
            return false;
        }
        if self.map.iter().any(|&v| v >= self.target.size.max(1)) {
            return false;
        }
        is_homomorphism(&self.source, &self.target, &self.map)
    }
}

/// Does `map` commute with every operation of the shared theory?
pub fn is_homomorphism(source: &FiniteAlgebra, target: &FiniteAlgebra, map: &[usize]) -> bool {
    for (op, decl) in source.theory.ops.iter().enumerate() {
        for args in Tuples::new(source.size, decl.arity) {
            let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
            if map[source.apply(op, &args)] != target.apply(op, &image) {
                return false;
            }
        }
    }
    true
}

/// Iterator over all tuples in `0..base` of the given length, in
/// lexicographic (counting) order. Yields the empty tuple once when
/// `len` is 0, and nothing when `base` is 0 and `len > 0`.
pub struct Tuples {
    base: usize,
    current: Option<Vec<usize>>,
}

impl Tuples {
    pub fn new(base: usize, len: usize) -> Self {
        let current = if base == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Tuples { base, current }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.current.as_mut()?;
        let item = current.clone();
        let mut i = current.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            current[i] += 1;
            if current[i] < self.base {
                break;
            }
            current[i] = 0;
        }
        Some(item)
    }
}

/// `base.pow(len)` saturating at `u64::MAX`, for budget estimates.
pub fn pow_saturating(base: usize, len: usize) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..len {
        acc = acc.saturating_mul(base as u64);
    }
    acc
}
