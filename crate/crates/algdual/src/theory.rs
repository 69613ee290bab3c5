//! Equational theories: operation signatures, terms, and a catalog of
//! built-in theories.
//!
//! Terms are written in a prefix s-expression syntax: `(mul x0 x0)`,
//! variables `x<k>`, nullary operations as bare symbols.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

/// A term over a theory's signature. Operation symbols are stored as
/// indices into the owning theory's `ops` list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Largest variable index plus one, or 0 for a ground term.
    pub fn var_span(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_span).max().unwrap_or(0),
        }
    }

    /// Total order used wherever a canonical least term is needed:
    /// size first, then the structural order (variables before
    /// applications, applications by symbol index and arguments).
    pub fn canonical_cmp(&self, other: &Term) -> std::cmp::Ordering {
        self.size().cmp(&other.size()).then_with(|| self.cmp(other))
    }

    pub fn display(&self, theory: &TheoryPresentation) -> String {
        let mut out = String::new();
        self.write_sexpr(theory, &mut out);
        out
    }

    fn write_sexpr(&self, theory: &TheoryPresentation, out: &mut String) {
        match self {
            Term::Var(i) => {
                let _ = write!(out, "x{i}");
            }
            Term::App(op, args) => {
                let sym = &theory.ops[*op].symbol;
                if args.is_empty() {
                    out.push_str(sym);
                } else {
                    out.push('(');
                    out.push_str(sym);
                    for a in args {
                        out.push(' ');
                        a.write_sexpr(theory, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub symbol: String,
    pub arity: usize,
}

/// A pair of terms asserted equal under all variable assignments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn var_span(&self) -> usize {
        self.lhs.var_span().max(self.rhs.var_span())
    }
}

/// A finitary algebraic theory: named operations with arities and
/// equational axioms over a finite variable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryPresentation {
    pub name: String,
    pub ops: Vec<OpDecl>,
    pub axioms: Vec<Equation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("operation `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("malformed term syntax: {0}")]
    Syntax(String),
    #[error("term is not well-formed: {0}")]
    Malformed(String),
    #[error("unknown built-in theory `{0}`")]
    UnknownBuiltin(String),
}

impl TheoryPresentation {
    pub fn new(
        name: &str,
        ops: &[(&str, usize)],
        axioms: &[(&str, &str)],
    ) -> Result<Self, TheoryError> {
        let mut theory = TheoryPresentation {
            name: name.to_owned(),
            ops: ops
                .iter()
                .map(|(s, a)| OpDecl {
                    symbol: (*s).to_owned(),
                    arity: *a,
                })
                .collect(),
            axioms: Vec::new(),
        };
        for i in 0..theory.ops.len() {
            for j in i + 1..theory.ops.len() {
                if theory.ops[i].symbol == theory.ops[j].symbol {
                    return Err(TheoryError::DuplicateSymbol(theory.ops[i].symbol.clone()));
                }
            }
        }
        for (lhs, rhs) in axioms {
            let eq = Equation {
                lhs: theory.parse_term(lhs)?,
                rhs: theory.parse_term(rhs)?,
            };
            theory.axioms.push(eq);
        }
        Ok(theory)
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.symbol == symbol)
    }

    pub fn nullary_ops(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops
            .iter()
            .enumerate()
            .filter(|(_, o)| o.arity == 0)
            .map(|(i, _)| i)
    }

    /// Checks arities throughout `t`.
    pub fn check_term(&self, t: &Term) -> Result<(), TheoryError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let decl = self
                    .ops
                    .get(*op)
                    .ok_or_else(|| TheoryError::Malformed(format!("op index {op} out of range")))?;
                if decl.arity != args.len() {
                    return Err(TheoryError::ArityMismatch {
                        symbol: decl.symbol.clone(),
                        expected: decl.arity,
                        got: args.len(),
                    });
                }
                for a in args {
                    self.check_term(a)?;
                }
                Ok(())
            }
        }
    }

    /// Parses the strict prefix s-expression syntax.
    pub fn parse_term(&self, input: &str) -> Result<Term, TheoryError> {
        let tokens = tokenize(input)?;
        let mut pos = 0;
        let t = self.parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(TheoryError::Syntax(format!(
                "trailing input after term in `{input}`"
            )));
        }
        self.check_term(&t)?;
        Ok(t)
    }

    fn parse_tokens(&self, tokens: &[Token], pos: &mut usize) -> Result<Term, TheoryError> {
        let tok = tokens
            .get(*pos)
            .ok_or_else(|| TheoryError::Syntax("unexpected end of input".into()))?;
        *pos += 1;
        match tok {
            Token::Open => {
                let head = match tokens.get(*pos) {
                    Some(Token::Atom(s)) => s.clone(),
                    _ => return Err(TheoryError::Syntax("expected symbol after `(`".into())),
                };
                *pos += 1;
                let op = self
                    .op_index(&head)
                    .ok_or_else(|| TheoryError::UnknownSymbol(head.clone()))?;
                let mut args = Vec::new();
                loop {
                    match tokens.get(*pos) {
                        Some(Token::Close) => {
                            *pos += 1;
                            break;
                        }
                        Some(_) => args.push(self.parse_tokens(tokens, pos)?),
                        None => return Err(TheoryError::Syntax("missing `)`".into())),
                    }
                }
                Ok(Term::App(op, args))
            }
            Token::Close => Err(TheoryError::Syntax("unexpected `)`".into())),
            Token::Atom(s) => {
                if let Some(idx) = parse_var(s) {
                    Ok(Term::Var(idx))
                } else {
                    let op = self
                        .op_index(s)
                        .ok_or_else(|| TheoryError::UnknownSymbol(s.clone()))?;
                    if self.ops[op].arity != 0 {
                        return Err(TheoryError::ArityMismatch {
                            symbol: s.clone(),
                            expected: self.ops[op].arity,
                            got: 0,
                        });
                    }
                    Ok(Term::App(op, Vec::new()))
                }
            }
        }
    }

    pub fn builtin(name: &str) -> Result<Arc<TheoryPresentation>, TheoryError> {
        let t = match name {
            "commutative_rings" => Self::commutative_rings(),
            "boolean_algebras" => Self::boolean_algebras(),
            "initial" => Self::initial(),
            "pointed_sets" => Self::pointed_sets(),
            "monoids" => Self::monoids(),
            other => return Err(TheoryError::UnknownBuiltin(other.to_owned())),
        };
        Ok(Arc::new(t))
    }

    pub fn commutative_rings() -> TheoryPresentation {
        Self::new(
            "commutative_rings",
            &[("zero", 0), ("one", 0), ("add", 2), ("mul", 2), ("neg", 1)],
            &[
                ("(add (add x0 x1) x2)", "(add x0 (add x1 x2))"),
                ("(add x0 x1)", "(add x1 x0)"),
                ("(add x0 zero)", "x0"),
                ("(add x0 (neg x0))", "zero"),
                ("(mul (mul x0 x1) x2)", "(mul x0 (mul x1 x2))"),
                ("(mul x0 x1)", "(mul x1 x0)"),
                ("(mul x0 one)", "x0"),
                ("(mul x0 (add x1 x2))", "(add (mul x0 x1) (mul x0 x2))"),
            ],
        )
        .expect("catalog theory is well-formed")
    }

    pub fn boolean_algebras() -> TheoryPresentation {
        Self::new(
            "boolean_algebras",
            &[("zero", 0), ("one", 0), ("and", 2), ("or", 2), ("not", 1)],
            &[
                ("(and x0 x1)", "(and x1 x0)"),
                ("(or x0 x1)", "(or x1 x0)"),
                ("(and (and x0 x1) x2)", "(and x0 (and x1 x2))"),
                ("(or (or x0 x1) x2)", "(or x0 (or x1 x2))"),
                ("(and x0 (or x0 x1))", "x0"),
                ("(or x0 (and x0 x1))", "x0"),
                ("(and x0 (or x1 x2))", "(or (and x0 x1) (and x0 x2))"),
                ("(or x0 (and x1 x2))", "(and (or x0 x1) (or x0 x2))"),
                ("(and x0 (not x0))", "zero"),
                ("(or x0 (not x0))", "one"),
                ("(and x0 one)", "x0"),
                ("(or x0 zero)", "x0"),
            ],
        )
        .expect("catalog theory is well-formed")
    }

    /// The empty signature: models are bare sets.
    pub fn initial() -> TheoryPresentation {
        Self::new("initial", &[], &[]).expect("catalog theory is well-formed")
    }

    pub fn pointed_sets() -> TheoryPresentation {
        Self::new("pointed_sets", &[("pt", 0)], &[]).expect("catalog theory is well-formed")
    }

    pub fn monoids() -> TheoryPresentation {
        Self::new(
            "monoids",
            &[("e", 0), ("op", 2)],
            &[
                ("(op (op x0 x1) x2)", "(op x0 (op x1 x2))"),
                ("(op x0 e)", "x0"),
                ("(op e x0)", "x0"),
            ],
        )
        .expect("catalog theory is well-formed")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(input: &str) -> Result<Vec<Token>, TheoryError> {
    let mut tokens = Vec::new();
    let mut atom = String::new();
    for c in input.chars() {
        match c {
            '(' | ')' => {
                if !atom.is_empty() {
                    tokens.push(Token::Atom(std::mem::take(&mut atom)));
                }
                tokens.push(if c == '(' { Token::Open } else { Token::Close });
            }
            c if c.is_whitespace() => {
                if !atom.is_empty() {
                    tokens.push(Token::Atom(std::mem::take(&mut atom)));
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' => atom.push(c),
            other => return Err(TheoryError::Syntax(format!("bad character `{other}`"))),
        }
    }
    if !atom.is_empty() {
        tokens.push(Token::Atom(atom));
    }
    if tokens.is_empty() {
        return Err(TheoryError::Syntax("empty term".into()));
    }
    Ok(tokens)
}

fn parse_var(s: &str) -> Option<usize> {
    let rest = s.strip_prefix('x')?;
    if rest.is_empty() || rest.chars().any(|c| !c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// The right-nested sum `one + (one + ...)` with `n` summands (`zero`
/// when `n` is 0), over a theory with `zero`, `one` and `add`.
pub fn numeral(theory: &TheoryPresentation, n: usize) -> Term {
    let zero = theory.op_index("zero").expect("theory has zero");
    let one = theory.op_index("one").expect("theory has one");
    let add = theory.op_index("add").expect("theory has add");
    if n == 0 {
        return Term::App(zero, Vec::new());
    }
    let mut t = Term::App(one, Vec::new());
    for _ in 1..n {
        t = Term::App(add, vec![Term::App(one, Vec::new()), t]);
    }
    t
}
