//! A small text language for phase-space operator expressions.
//!
//! Grammar (EBNF):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor | '.' factor)*
//! factor := scalar | 'i' | 'hbar' | 'a' | 'a~' | 'W' | 'x' | 'p'
//!         | 'Dx(' expr ')' | 'Dp(' expr ')' | 'Lap(' expr ')'
//!         | '(' expr ')' | '-' factor
//! scalar := integer ('/' integer)?
//! ```
//!
//! `*` is star composition, `.` is the pointwise product, unary minus binds
//! tighter than `*`/`.` which bind tighter than `+`/`-`. `a~` is the ASCII
//! spelling of the conjugate ladder symbol a*. Every additive term must
//! contain exactly one W, and ladder symbols must occur in even numbers per
//! term (each lone a or a~ carries an irrational 1/√2).

use std::fmt;

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::op::{DiffOpExpr, OpMonomial};
use crate::poly::PolySymbol;
use crate::scalar::{ci, cre, format_rational, CRat, Rational};
use crate::star::{bopp, star_poly, BoppSide};

/// Line/column of a token, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DslError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("semantic error at {pos}: {msg}")]
    Semantic { pos: Pos, msg: String },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. } | DslError::Semantic { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    A,
    ATilde,
    X,
    P,
    I,
    Hbar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    pub node: Node,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Scalar(CRat),
    Sym(Symbol),
    W,
    Star(Box<ExprAst>, Box<ExprAst>),
    Point(Box<ExprAst>, Box<ExprAst>),
    Sum(Box<ExprAst>, Box<ExprAst>),
    Diff(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
    Dx(Box<ExprAst>),
    Dp(Box<ExprAst>),
    Lap(Box<ExprAst>),
}

impl ExprAst {
    fn new(node: Node, pos: Pos) -> Self {
        ExprAst { node, pos }
    }
}

// ---------------------------------------------------------------- lexer --

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Plus,
    Minus,
    Star,
    Dot,
    Slash,
    LParen,
    RParen,
    Int(BigInt),
    Ident(String),
    ATilde,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Plus => write!(f, "'+'"),
            TokenKind::Minus => write!(f, "'-'"),
            TokenKind::Star => write!(f, "'*'"),
            TokenKind::Dot => write!(f, "'.'"),
            TokenKind::Slash => write!(f, "'/'"),
            TokenKind::LParen => write!(f, "'('"),
            TokenKind::RParen => write!(f, "')'"),
            TokenKind::Int(n) => write!(f, "integer {n}"),
            TokenKind::Ident(s) => write!(f, "'{s}'"),
            TokenKind::ATilde => write!(f, "'a~'"),
            TokenKind::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    pos: Pos,
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let mut tokens = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = text.chars().peekable();

    while let Some(&ch) = chars.peek() {
        let pos = Pos { line, col };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '.' | '/' | '(' | ')' => {
                chars.next();
                col += 1;
                let kind = match ch {
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '.' => TokenKind::Dot,
                    '/' => TokenKind::Slash,
                    '(' => TokenKind::LParen,
                    _ => TokenKind::RParen,
                };
                tokens.push(Token { kind, pos });
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let value: BigInt = digits.parse().expect("digits parse as BigInt");
                tokens.push(Token { kind: TokenKind::Int(value), pos });
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        name.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                // 'a' immediately followed by '~' is the conjugate ladder token
                if name == "a" && chars.peek() == Some(&'~') {
                    chars.next();
                    col += 1;
                    tokens.push(Token { kind: TokenKind::ATilde, pos });
                } else {
                    tokens.push(Token { kind: TokenKind::Ident(name), pos });
                }
            }
            other => {
                return Err(DslError::Syntax {
                    pos,
                    msg: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        pos: Pos { line, col },
    });
    Ok(tokens)
}

// --------------------------------------------------------------- parser --

struct Parser {
    tokens: Vec<Token>,
    index: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.index]
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.index].clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        tok
    }

    /// Position to blame for an unexpected token: the token itself, or for
    /// end-of-input the last real token so the report never points past the
    /// offending region.
    fn blame_pos(&self) -> Pos {
        let tok = self.peek();
        if tok.kind == TokenKind::Eof && self.index > 0 {
            self.tokens[self.index - 1].pos
        } else {
            tok.pos
        }
    }

    fn expect_rparen(&mut self) -> Result<(), DslError> {
        if self.peek().kind == TokenKind::RParen {
            self.advance();
            Ok(())
        } else {
            Err(DslError::Syntax {
                pos: self.blame_pos(),
                msg: format!("expected ')', found {}", self.peek().kind),
            })
        }
    }

    fn parse_expr(&mut self) -> Result<ExprAst, DslError> {
        let mut lhs = self.parse_term()?;
        loop {
            let op = self.peek().kind.clone();
            match op {
                TokenKind::Plus | TokenKind::Minus => {
                    let op_pos = self.peek().pos;
                    self.advance();
                    let rhs = self.parse_term()?;
                    let node = if op == TokenKind::Plus {
                        Node::Sum(Box::new(lhs), Box::new(rhs))
                    } else {
                        Node::Diff(Box::new(lhs), Box::new(rhs))
                    };
                    lhs = ExprAst::new(node, op_pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<ExprAst, DslError> {
        let mut lhs = self.parse_factor()?;
        loop {
            let op = self.peek().kind.clone();
            match op {
                TokenKind::Star | TokenKind::Dot => {
                    let op_pos = self.peek().pos;
                    self.advance();
                    let rhs = self.parse_factor()?;
                    let node = if op == TokenKind::Star {
                        Node::Star(Box::new(lhs), Box::new(rhs))
                    } else {
                        Node::Point(Box::new(lhs), Box::new(rhs))
                    };
                    lhs = ExprAst::new(node, op_pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<ExprAst, DslError> {
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Minus => {
                self.advance();
                let inner = self.parse_factor()?;
                Ok(ExprAst::new(Node::Neg(Box::new(inner)), tok.pos))
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.parse_expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Int(numer) => {
                self.advance();
                let value = if self.peek().kind == TokenKind::Slash {
                    let slash_pos = self.peek().pos;
                    self.advance();
                    match self.peek().kind.clone() {
                        TokenKind::Int(denom) => {
                            self.advance();
                            if denom.is_zero() {
                                return Err(DslError::Syntax {
                                    pos: slash_pos,
                                    msg: "zero denominator in scalar".into(),
                                });
                            }
                            Rational::new(numer, denom)
                        }
                        other => {
                            return Err(DslError::Syntax {
                                pos: self.blame_pos(),
                                msg: format!("expected integer denominator, found {other}"),
                            })
                        }
                    }
                } else {
                    Rational::from_integer(numer)
                };
                Ok(ExprAst::new(Node::Scalar(cre(value)), tok.pos))
            }
            TokenKind::ATilde => {
                self.advance();
                Ok(ExprAst::new(Node::Sym(Symbol::ATilde), tok.pos))
            }
            TokenKind::Ident(name) => {
                self.advance();
                let node = match name.as_str() {
                    "W" => Node::W,
                    "x" => Node::Sym(Symbol::X),
                    "p" => Node::Sym(Symbol::P),
                    "i" => Node::Sym(Symbol::I),
                    "a" => Node::Sym(Symbol::A),
                    "hbar" => Node::Sym(Symbol::Hbar),
                    "Dx" | "Dp" | "Lap" => {
                        if self.peek().kind != TokenKind::LParen {
                            return Err(DslError::Syntax {
                                pos: self.blame_pos(),
                                msg: format!("expected '(' after {name}"),
                            });
                        }
                        self.advance();
                        let inner = Box::new(self.parse_expr()?);
                        self.expect_rparen()?;
                        match name.as_str() {
                            "Dx" => Node::Dx(inner),
                            "Dp" => Node::Dp(inner),
                            _ => Node::Lap(inner),
                        }
                    }
                    _ => {
                        return Err(DslError::Syntax {
                            pos: tok.pos,
                            msg: format!("unknown symbol '{name}'"),
                        })
                    }
                };
                Ok(ExprAst::new(node, tok.pos))
            }
            _ => Err(DslError::Syntax {
                pos: self.blame_pos(),
                msg: format!("expected a factor, found {}", tok.kind),
            }),
        }
    }
}

/// Parse source text into an AST. Errors carry the 1-based line/column of
/// the offending token (or of the last token for premature end of input).
pub fn parse(text: &str) -> Result<ExprAst, DslError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, index: 0 };
    let ast = parser.parse_expr()?;
    if parser.peek().kind != TokenKind::Eof {
        return Err(DslError::Syntax {
            pos: parser.peek().pos,
            msg: format!("unexpected {} after expression", parser.peek().kind),
        });
    }
    Ok(ast)
}

// ----------------------------------------------------------- elaborator --

/// Intermediate value: either a W-free coefficient or an operator applied
/// to the single W of the chain. `half` counts pending 1/√2 factors from
/// ladder symbols; even counts are folded into the coefficients eagerly, so
/// after normalization half ∈ {0, 1}.
enum Value {
    Coef { poly: PolySymbol, half: u32 },
    Op { expr: DiffOpExpr, half: u32 },
}

impl Value {
    fn normalize(self) -> Value {
        match self {
            Value::Coef { poly, half } if half >= 2 => {
                let factor = cre(Rational::new(
                    BigInt::one(),
                    BigInt::from(1u32) << (half / 2),
                ));
                Value::Coef { poly: poly.scale(&factor), half: half % 2 }
            }
            Value::Op { expr, half } if half >= 2 => {
                let factor = cre(Rational::new(
                    BigInt::one(),
                    BigInt::from(1u32) << (half / 2),
                ));
                Value::Op { expr: expr.scale(&factor), half: half % 2 }
            }
            v => v,
        }
    }
}

fn unpaired_ladder(pos: Pos) -> DslError {
    DslError::Semantic {
        pos,
        msg: "odd number of ladder symbols leaves an irrational 1/\u{221a}2; \
              pair each a with a~ (e.g. a~ * W * a)"
            .into(),
    }
}

fn two_w(pos: Pos, context: &str) -> DslError {
    DslError::Semantic {
        pos,
        msg: format!("more than one W in a single {context}"),
    }
}

fn elaborate_node(ast: &ExprAst, hbar: &Rational) -> Result<Value, DslError> {
    let pos = ast.pos;
    let value = match &ast.node {
        Node::W => Value::Op { expr: DiffOpExpr::identity(hbar.clone()), half: 0 },
        Node::Scalar(c) => Value::Coef { poly: PolySymbol::constant(c.clone()), half: 0 },
        Node::Sym(sym) => match sym {
            Symbol::X => Value::Coef { poly: PolySymbol::x(), half: 0 },
            Symbol::P => Value::Coef { poly: PolySymbol::p(), half: 0 },
            Symbol::I => Value::Coef { poly: PolySymbol::constant(ci()), half: 0 },
            Symbol::Hbar => Value::Coef {
                poly: PolySymbol::constant(cre(hbar.clone())),
                half: 0,
            },
            Symbol::A => Value::Coef {
                poly: crate::star::Ladder::Annihilate.scaled_poly(),
                half: 1,
            },
            Symbol::ATilde => Value::Coef {
                poly: crate::star::Ladder::Create.scaled_poly(),
                half: 1,
            },
        },
        Node::Neg(inner) => match elaborate_node(inner, hbar)? {
            Value::Coef { poly, half } => Value::Coef { poly: -poly, half },
            Value::Op { expr, half } => Value::Op { expr: -expr, half },
        },
        Node::Sum(l, r) | Node::Diff(l, r) => {
            let negate_rhs = matches!(ast.node, Node::Diff(..));
            let lv = elaborate_node(l, hbar)?;
            let mut rv = elaborate_node(r, hbar)?;
            if negate_rhs {
                rv = match rv {
                    Value::Coef { poly, half } => Value::Coef { poly: -poly, half },
                    Value::Op { expr, half } => Value::Op { expr: -expr, half },
                };
            }
            match (lv, rv) {
                (Value::Coef { poly: a, half: ha }, Value::Coef { poly: b, half: hb }) => {
                    if ha != hb {
                        return Err(unpaired_ladder(pos));
                    }
                    Value::Coef { poly: a + b, half: ha }
                }
                (Value::Op { expr: a, half: ha }, Value::Op { expr: b, half: hb }) => {
                    if ha != hb {
                        return Err(unpaired_ladder(pos));
                    }
                    Value::Op { expr: a + b, half: ha }
                }
                _ => {
                    return Err(DslError::Semantic {
                        pos,
                        msg: "every additive term must contain exactly one W".into(),
                    })
                }
            }
        }
        Node::Star(l, r) => {
            let lv = elaborate_node(l, hbar)?;
            let rv = elaborate_node(r, hbar)?;
            match (lv, rv) {
                (Value::Coef { poly: f, half: hf }, Value::Coef { poly: g, half: hg }) => {
                    Value::Coef { poly: star_poly(&f, &g, hbar), half: hf + hg }
                }
                // f ⋆ (E W) = bopp_L(f) ∘ E applied to W
                (Value::Coef { poly: f, half: hf }, Value::Op { expr, half: he }) => Value::Op {
                    expr: bopp(&f, BoppSide::Left, hbar)
                        .compose(&expr)
                        .expect("same hbar"),
                    half: hf + he,
                },
                // (E W) ⋆ g = bopp_R(g) ∘ E applied to W
                (Value::Op { expr, half: he }, Value::Coef { poly: g, half: hg }) => Value::Op {
                    expr: bopp(&g, BoppSide::Right, hbar)
                        .compose(&expr)
                        .expect("same hbar"),
                    half: he + hg,
                },
                (Value::Op { .. }, Value::Op { .. }) => {
                    return Err(two_w(pos, "star chain"))
                }
            }
        }
        Node::Point(l, r) => {
            let lv = elaborate_node(l, hbar)?;
            let rv = elaborate_node(r, hbar)?;
            match (lv, rv) {
                (Value::Coef { poly: a, half: ha }, Value::Coef { poly: b, half: hb }) => {
                    Value::Coef { poly: a * b, half: ha + hb }
                }
                (Value::Coef { poly: q, half: hq }, Value::Op { expr, half: he })
                | (Value::Op { expr, half: he }, Value::Coef { poly: q, half: hq }) => Value::Op {
                    expr: DiffOpExpr::from_poly(&q, hbar.clone())
                        .compose(&expr)
                        .expect("same hbar"),
                    half: hq + he,
                },
                (Value::Op { .. }, Value::Op { .. }) => {
                    return Err(two_w(pos, "pointwise product"))
                }
            }
        }
        Node::Dx(inner) | Node::Dp(inner) | Node::Lap(inner) => {
            let differential = match &ast.node {
                Node::Dx(_) => DiffOpExpr::dx(hbar.clone()),
                Node::Dp(_) => DiffOpExpr::dp(hbar.clone()),
                _ => DiffOpExpr::laplacian(hbar.clone()),
            };
            match elaborate_node(inner, hbar)? {
                Value::Op { expr, half } => Value::Op {
                    expr: differential.compose(&expr).expect("same hbar"),
                    half,
                },
                // on a W-free subexpression the derivative acts on the
                // polynomial itself
                Value::Coef { poly, half } => {
                    let out = match &ast.node {
                        Node::Dx(_) => poly.diff_x(),
                        Node::Dp(_) => poly.diff_p(),
                        _ => poly.diff_x().diff_x() + poly.diff_p().diff_p(),
                    };
                    Value::Coef { poly: out, half }
                }
            }
        }
    };
    Ok(value.normalize())
}

/// Lower an AST onto the star-engine primitives at the given ħ.
pub fn elaborate(ast: &ExprAst, hbar: &Rational) -> Result<DiffOpExpr, DslError> {
    match elaborate_node(ast, hbar)? {
        Value::Op { expr, half: 0 } => Ok(expr),
        Value::Op { .. } => Err(unpaired_ladder(ast.pos)),
        Value::Coef { .. } => Err(DslError::Semantic {
            pos: ast.pos,
            msg: "expression contains no W".into(),
        }),
    }
}

/// Convenience: parse and elaborate in one go.
pub fn parse_expr(text: &str, hbar: &Rational) -> Result<DiffOpExpr, DslError> {
    elaborate(&parse(text)?, hbar)
}

/// Parse a W-free polynomial (e.g. a Hamiltonian in a config file).
pub fn parse_poly(text: &str, hbar: &Rational) -> Result<PolySymbol, DslError> {
    let ast = parse(text)?;
    match elaborate_node(&ast, hbar)? {
        Value::Coef { poly, half: 0 } => Ok(poly),
        Value::Coef { .. } => Err(unpaired_ladder(ast.pos)),
        Value::Op { .. } => Err(DslError::Semantic {
            pos: ast.pos,
            msg: "expected a W-free polynomial expression".into(),
        }),
    }
}

// -------------------------------------------------------------- printer --

/// Canonical text form of a normal-ordered operator: terms in graded
/// lexicographic order, complex coefficients split into a real and an
/// imaginary term, factors joined by the pointwise product so the output
/// re-parses to the identical expression.
pub fn format(expr: &DiffOpExpr) -> String {
    let mut pieces: Vec<(bool, String)> = Vec::new();
    for (mono, coeff) in expr.terms() {
        for (value, imag) in [(&coeff.re, false), (&coeff.im, true)] {
            if value.is_zero() {
                continue;
            }
            pieces.push((value < &Rational::zero(), render_term(value, imag, mono)));
        }
    }
    if pieces.is_empty() {
        return "0 . W".into();
    }
    let mut out = String::new();
    for (idx, (negative, body)) in pieces.iter().enumerate() {
        if idx == 0 {
            if *negative {
                out.push_str("- ");
            }
        } else if *negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(body);
    }
    out
}

fn render_term(value: &Rational, imag: bool, mono: &OpMonomial) -> String {
    let mut factors: Vec<String> = Vec::new();
    let magnitude = if value < &Rational::zero() {
        -value.clone()
    } else {
        value.clone()
    };
    if !magnitude.is_one() {
        factors.push(format_rational(&magnitude));
    }
    if imag {
        factors.push("i".into());
    }
    for _ in 0..mono.x_pow {
        factors.push("x".into());
    }
    for _ in 0..mono.p_pow {
        factors.push("p".into());
    }
    let mut core = String::from("W");
    for _ in 0..mono.dp_ord {
        core = format!("Dp({core})");
    }
    for _ in 0..mono.dx_ord {
        core = format!("Dx({core})");
    }
    factors.push(core);
    factors.join(" . ")
}
