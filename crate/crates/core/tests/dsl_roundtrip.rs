//! Round-trip and precedence coverage for the expression DSL.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wigner_core::dsl::{self, ExprAst, Node, Pos, Symbol};
use wigner_core::op::default_hbar;
use wigner_core::scalar::{crat, rat, CRat};
use wigner_core::{DiffOpExpr, OpMonomial, Rational};

fn h1() -> Rational {
    default_hbar()
}

/// 200 random normal-form operators: format → parse → elaborate must be the
/// identity, and the printed text must be a fixed point after one cycle.
#[test]
fn format_parse_round_trip_on_200_random_operators() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd51_0_f00d);
    for case in 0..200 {
        let expr = random_expr(&mut rng);
        let text = dsl::format(&expr);
        let back = dsl::parse_expr(&text, &h1())
            .unwrap_or_else(|e| panic!("case {case}: `{text}` failed to parse: {e}"));
        assert_eq!(back, expr, "case {case}: round trip changed `{text}`");
        assert_eq!(dsl::format(&back), text, "case {case}: not a fixed point");
    }
}

fn random_expr(rng: &mut ChaCha8Rng) -> DiffOpExpr {
    let n_terms = rng.gen_range(0..=7);
    let mut e = DiffOpExpr::zero(h1());
    for _ in 0..n_terms {
        let mono = OpMonomial::new(
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
            rng.gen_range(0..=3),
        );
        let re = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
        let im = if rng.gen_bool(0.4) {
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
        } else {
            rat(0, 1)
        };
        e.add_term(mono, CRat::new(re, im));
    }
    e
}

/// Semantic-level round trip of expressions the engine produces: currents,
/// brackets, generators (already covered per-generator in unit tests, here
/// across ħ values since the printed text has no ħ of its own).
#[test]
fn round_trip_is_hbar_stable() {
    for hb in [h1(), rat(1, 2), rat(7, 3)] {
        let e = wigner_core::moyal_bracket(
            &(wigner_core::PolySymbol::x().pow(4) + wigner_core::PolySymbol::harmonic_oscillator()),
            &hb,
        )
        .unwrap();
        let text = dsl::format(&e);
        let back = dsl::parse_expr(&text, &hb).unwrap();
        assert_eq!(back, e);
    }
}

// ------------------------------------------------------------ precedence --

/// Exhaustively enumerate ASTs up to depth 4 over a small atom/operator set,
/// print them with minimal parentheses, and require the parser to recover
/// the identical tree. This pins the whole precedence table: unary minus
/// over '*'/'.' over '+'/'-', with left association at each level.
#[test]
fn precedence_table_is_total_up_to_depth_4() {
    let atoms: Vec<ExprAst> = vec![
        ast(Node::W),
        ast(Node::Sym(Symbol::X)),
        ast(Node::Scalar(crat(2, 1))),
    ];

    let mut by_depth: Vec<Vec<ExprAst>> = vec![atoms.clone()];
    for depth in 1..=2 {
        let prev: Vec<ExprAst> = by_depth[..depth]
            .iter()
            .flatten()
            .cloned()
            .collect();
        let mut level = Vec::new();
        for l in &prev {
            level.push(ast(Node::Neg(Box::new(l.clone()))));
            level.push(ast(Node::Dx(Box::new(l.clone()))));
            for r in &prev {
                level.push(ast(Node::Diff(Box::new(l.clone()), Box::new(r.clone()))));
                level.push(ast(Node::Star(Box::new(l.clone()), Box::new(r.clone()))));
                level.push(ast(Node::Point(Box::new(l.clone()), Box::new(r.clone()))));
            }
        }
        by_depth.push(level);
    }

    // depths 1..=3 exhaustively
    let mut checked = 0usize;
    for level in &by_depth {
        for e in level {
            check_round_trip(e);
            checked += 1;
        }
    }

    // depth 4: one extra operator layer over the depth-3 population,
    // pairing against a fixed panel of right operands to stay tractable.
    let panel: Vec<ExprAst> = by_depth[1].iter().take(8).cloned().collect();
    for l in &by_depth[2] {
        check_round_trip(&ast(Node::Neg(Box::new(l.clone()))));
        check_round_trip(&ast(Node::Dx(Box::new(l.clone()))));
        checked += 2;
        for r in &panel {
            for node in [
                Node::Diff(Box::new(l.clone()), Box::new(r.clone())),
                Node::Star(Box::new(l.clone()), Box::new(r.clone())),
                Node::Point(Box::new(l.clone()), Box::new(r.clone())),
            ] {
                check_round_trip(&ast(node));
                checked += 1;
            }
        }
    }
    assert!(checked > 50_000, "enumeration unexpectedly small: {checked}");
}

fn ast(node: Node) -> ExprAst {
    // positions are irrelevant for the structural comparison
    ExprAst { node, pos: Pos { line: 1, col: 1 } }
}

fn check_round_trip(e: &ExprAst) {
    let text = print_min_parens(e, 0);
    let parsed = dsl::parse(&text)
        .unwrap_or_else(|err| panic!("`{text}` failed to parse: {err}"));
    assert!(
        structurally_equal(e, &parsed),
        "`{text}` parsed to a different tree"
    );
}

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Sum(..) | Node::Diff(..) => 1,
        Node::Star(..) | Node::Point(..) => 2,
        Node::Neg(..) => 3,
        _ => 4,
    }
}

/// Minimal-parenthesis printer: parens only where the child's precedence
/// would otherwise re-associate.
fn print_min_parens(e: &ExprAst, _level: u8) -> String {
    let prec = precedence(&e.node);
    let wrap = |child: &ExprAst, strict: bool| -> String {
        let child_prec = precedence(&child.node);
        let needs = if strict { child_prec <= prec } else { child_prec < prec };
        let inner = print_min_parens(child, 0);
        if needs {
            format!("({inner})")
        } else {
            inner
        }
    };
    match &e.node {
        Node::W => "W".into(),
        Node::Sym(Symbol::X) => "x".into(),
        Node::Sym(Symbol::P) => "p".into(),
        Node::Sym(Symbol::I) => "i".into(),
        Node::Sym(Symbol::Hbar) => "hbar".into(),
        Node::Sym(Symbol::A) => "a".into(),
        Node::Sym(Symbol::ATilde) => "a~".into(),
        Node::Scalar(c) => wigner_core::scalar::format_rational(&c.re),
        Node::Sum(l, r) => format!("{} + {}", wrap(l, false), wrap(r, true)),
        Node::Diff(l, r) => format!("{} - {}", wrap(l, false), wrap(r, true)),
        Node::Star(l, r) => format!("{} * {}", wrap(l, false), wrap(r, true)),
        Node::Point(l, r) => format!("{} . {}", wrap(l, false), wrap(r, true)),
        Node::Neg(inner) => format!("-{}", wrap(inner, false)),
        Node::Dx(inner) => format!("Dx({})", print_min_parens(inner, 0)),
        Node::Dp(inner) => format!("Dp({})", print_min_parens(inner, 0)),
        Node::Lap(inner) => format!("Lap({})", print_min_parens(inner, 0)),
    }
}

fn structurally_equal(a: &ExprAst, b: &ExprAst) -> bool {
    match (&a.node, &b.node) {
        (Node::W, Node::W) => true,
        (Node::Sym(s), Node::Sym(t)) => s == t,
        (Node::Scalar(c), Node::Scalar(d)) => c == d,
        (Node::Sum(al, ar), Node::Sum(bl, br))
        | (Node::Diff(al, ar), Node::Diff(bl, br))
        | (Node::Star(al, ar), Node::Star(bl, br))
        | (Node::Point(al, ar), Node::Point(bl, br)) => {
            structurally_equal(al, bl) && structurally_equal(ar, br)
        }
        (Node::Neg(ai), Node::Neg(bi))
        | (Node::Dx(ai), Node::Dx(bi))
        | (Node::Dp(ai), Node::Dp(bi))
        | (Node::Lap(ai), Node::Lap(bi)) => structurally_equal(ai, bi),
        _ => false,
    }
}
