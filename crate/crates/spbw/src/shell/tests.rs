use proptest::prelude::*;

use super::ast::{FileAst, Image, QuadRule, RingExpr, Span, Stmt, VarRule};
use super::elab::{elaborate, ElabOptions, MapValue, RingValue};
use super::presets::CATALOG;
use super::{parse_ast, run_command, run_with_report, DeclError, ShellError};
use crate::expr::Expr;
use crate::finring::Elem;
use crate::spbwalg::{check_pbw_confluence, parse_poly};

fn elab(text: &str) -> Result<super::Presentation, ShellError> {
    elaborate(text, &ElabOptions::default())
}

fn run(args: &[&str]) -> (i32, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let code = run_command(&argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn presets_elaborate_and_confluence_matches_catalog() {
    for p in CATALOG {
        let pres = elab(p.source).unwrap_or_else(|e| panic!("{}: {e}", p.name));
        match p.confluent {
            None => assert!(pres.extensions.is_empty(), "{}", p.name),
            Some(c) => {
                let ext = pres.active_extension().unwrap();
                let rep = check_pbw_confluence(ext).unwrap();
                assert_eq!(rep.confluent, c, "{}: {rep:?}", p.name);
                if !c {
                    assert!(rep.first_divergence.is_some());
                }
            }
        }
    }
}

#[test]
fn quantum_plane_file() {
    let pres = elab("ring F = GF(5);\nextension A over F { vars x1, x2; x2*x1 = (3)*x1*x2; }").unwrap();
    let ext = pres.active_extension().unwrap();
    assert_eq!(ext.quad(1, 0).d, Elem(3));
    let p = parse_poly(ext, "x2").unwrap().mul(&parse_poly(ext, "x1").unwrap()).unwrap();
    assert_eq!(p.format(), "(3)*x1*x2");
}

#[test]
fn six_map_example_passes_arity_checks() {
    let p = CATALOG.iter().find(|p| p.name == "f4z2-six").unwrap();
    let pres = elab(p.source).unwrap();
    let ext = pres.active_extension().unwrap();
    assert_eq!(ext.nvars(), 6);
    assert_eq!(pres.maps.len(), 6);
    assert!(ext.sigmas().iter().all(|s| s.is_injective()));
}

#[test]
fn wrong_orientation_is_rejected() {
    let e = elab("ring F = GF(5);\nextension A over F { vars x1, x2; x1*x2 = x2*x1; }").unwrap_err();
    assert!(matches!(e, ShellError::RelationNotLowerTriangular { ref relation, pos } if relation == "x1*x2" && pos.line == 2), "{e}");
}

#[test]
fn names_must_be_declared_once_and_before_use() {
    let e = elab("endo s on R { }\nring R = Zmod(4);").unwrap_err();
    assert!(matches!(e, ShellError::UnresolvedName { ref name, .. } if name == "R"));
    let e = elab("ring R = Zmod(4);\nring R = Zmod(2);").unwrap_err();
    assert!(matches!(e, ShellError::DuplicateDeclaration { ref name, pos } if name == "R" && pos.line == 2));
    let e = elab("ring id = Zmod(4);").unwrap_err();
    assert!(matches!(e, ShellError::DuplicateDeclaration { .. }));
    let e = elab("ring R = Zmod(4);\nextension A over R { vars x; y: sigma id; }").unwrap_err();
    assert!(matches!(e, ShellError::UnresolvedName { ref name, .. } if name == "y"));
    let e = elab("use no-such-preset;").unwrap_err();
    assert!(matches!(e, ShellError::UnknownPreset(_)));
    let e = elab("ring R = Zmod(4);\nactive A;").unwrap_err();
    assert!(matches!(e, ShellError::UnresolvedName { .. }));
}

#[test]
fn syntax_errors_carry_positions() {
    let e = elab("ring R = Zmod(4);\n  ring S = frob(3);").unwrap_err();
    let ShellError::Syntax(s) = e else { panic!("{e}") };
    assert_eq!(s.pos.line, 2);
    let e = elab("ring R = Zmod(4)\nendo s on R { x -> }").unwrap_err();
    assert!(matches!(e, ShellError::Syntax(ref s) if s.pos.line == 2 && s.pos.col == 20), "{e}");
}

#[test]
fn moduli_and_relations_are_evaluated() {
    let pres = elab("ring F = GF(9, b^2 + b + 2);\nring K = quotient(F, t, t^2 - b);").unwrap();
    let Some(RingValue::Finite(k)) = pres.ring("K") else { panic!() };
    assert_eq!(k.card(), 81);
    let t = k.generator("t").unwrap();
    assert_eq!(k.mul(t, t), k.generator("b").unwrap());
    // b has order 8
    let f = match pres.ring("F") {
        Some(RingValue::Finite(f)) => f.clone(),
        _ => panic!(),
    };
    let b = f.generator("b").unwrap();
    assert_eq!((1..=8).find(|&k| f.pow(b, k) == f.one()), Some(8));

    let e = elab("ring F = GF(5);\nextension A over F { vars x, y; y*x = x*y*x; }").unwrap_err();
    assert!(matches!(e, ShellError::Declaration { .. }), "{e}");
    let e = elab("ring F = GF(5);\nextension A over F { vars x, y; y*x = y*x + 1; }").unwrap_err();
    assert!(matches!(*decl_source(&e), DeclError::Invalid(_)), "{e}");
    let e = elab("ring F = GF(5);\nextension A over F { vars x, y; y*x = x*2*y; }").unwrap_err();
    assert!(matches!(*decl_source(&e), DeclError::Invalid(_)), "{e}");
    let pres = elab("ring F = GF(5);\nextension A over F { vars x, y; y*x = 2*x*y - 3*x + 4; }").unwrap();
    let q = pres.active_extension().unwrap().quad(1, 0).clone();
    assert_eq!((q.d, q.lin.clone(), q.r0), (Elem(2), vec![Elem(2), Elem(0)], Elem(4)));
}

fn decl_source(e: &ShellError) -> Box<DeclError> {
    match e {
        ShellError::Declaration { source, .. } => source.clone(),
        other => panic!("not a declaration error: {other}"),
    }
}

#[test]
fn maps_and_derivations_resolve() {
    let pres = elab(
        "ring K = quotient(Zmod(2), t, t^2);\nendo s on K { t -> t }\nderiv d on K sigma s { t -> 1 }\n\
         extension A over K { vars x; x: sigma s, delta d; }",
    )
    .unwrap();
    assert!(matches!(pres.maps[1].value, MapValue::Deriv(_)));
    let ext = pres.active_extension().unwrap();
    let t = parse_poly(ext, "t").unwrap();
    let x = parse_poly(ext, "x").unwrap();
    assert_eq!(x.mul(&t).unwrap().format(), "(t)*x + (1)");

    let e = elab("ring R = Zmod(4);\nendo s on R { }\nderiv d on R sigma r { }").unwrap_err();
    assert!(matches!(e, ShellError::UnresolvedName { ref name, .. } if name == "r"));
    let e = elab("ring R = quotient(Zmod(2), t, t^2);\nendo s on R { t -> 1 }").unwrap_err();
    assert!(matches!(e, ShellError::Declaration { .. }));
}

#[test]
fn symbolic_rings_cannot_carry_extensions() {
    let e = elab("ring T = triangular(Int, 2);\nextension A over T { vars x; }").unwrap_err();
    assert!(matches!(e, ShellError::Declaration { .. }), "{e}");
    let pres = elab("ring T = triangular(Int, 2);\nendo s on T { e11 -> e11, e12 -> 3*e12, e22 -> e22 }").unwrap();
    assert!(matches!(pres.maps[0].value, MapValue::SymEndo(_)));
}

#[test]
fn use_splices_presets_and_active_selects() {
    let pres = elab(
        "use f4z2-ext;\nextension B over R { vars y; }\nactive A;",
    )
    .unwrap();
    assert_eq!(pres.extensions.len(), 2);
    assert_eq!(pres.active_extension().unwrap().name(), "A");
}

#[test]
fn cli_examples() {
    let (code, text) = run(&["mul", "--preset", "qplane5", "y", "x"]);
    assert_eq!((code, text.trim()), (0, "(2)*x*y"));
    let (code, text) = run(&["check-compat", "--preset", "s2z4", "--mode", "both"]);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("witness Sigma for s3"), "{text}");
    let (code, _) = run(&["verify", "--preset", "f4z2-ext", "--thm", "ann-subsets", "--trials", "20", "--seed", "7", "--degree", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn cli_exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["ring-info"]).0, 2);
    assert_eq!(run(&["ring-info", "--preset", "missing"]).0, 2);
    assert_eq!(run(&["mul", "--preset", "qplane5", "y", "w"]).0, 2);
    assert_eq!(run(&["nilpoly", "--preset", "f4z2-ext", "z*x1 + a*z*x2"]).0, 0);
    assert_eq!(run(&["nilpoly", "--preset", "f4z2-ext", "a*x1"]).0, 1);
    assert_eq!(run(&["verify", "--preset", "broken-zyx", "--thm", "confluence"]).0, 1);
    assert_eq!(run(&["verify", "--preset", "s2z4", "--thm", "ann-element"]).0, 1);
    assert_eq!(run(&["nass", "--preset", "f4z2", "--cap", "8"]).0, 2);
    assert_eq!(run(&["presets"]).0, 0);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn reports_are_deterministic() {
    let args: Vec<String> = ["verify", "--preset", "f4z2-ext", "--thm", "armendariz", "--trials", "40", "--seed", "3"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (c1, d1) = run_with_report(&args, &mut Vec::new());
    let (c2, d2) = run_with_report(&args, &mut Vec::new());
    assert_eq!((c1, c2), (0, 0));
    let (d1, d2) = (d1.unwrap(), d2.unwrap());
    assert_eq!(d1.results_json(), d2.results_json());
    assert_eq!(d1.input_digest, d2.input_digest);
    assert_eq!(d1.seed, 3);
}

#[test]
fn nass_report_on_matrix_preset() {
    let args: Vec<String> = ["nass", "--preset", "mat-kt2"].iter().map(|s| s.to_string()).collect();
    let (code, doc) = run_with_report(&args, &mut Vec::new());
    assert_eq!(code, 0);
    let doc = doc.unwrap();
    let primes = doc.results[0]["primes"].as_array().unwrap();
    assert_eq!(primes.len(), 1);
    assert_eq!(primes[0]["equals_nilradical"], serde_json::json!(true));
    assert!(!primes[0]["generators"].as_array().unwrap().is_empty());
}

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "z", "t", "x1", "x2", "R", "s"]).prop_map(String::from)
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0u64..40).prop_map(Expr::int), ident().prop_map(Expr::Ident)];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), 0u32..5).prop_map(|(a, k)| Expr::pow(a, k)),
            prop::collection::vec(prop::collection::vec(inner, 2), 2).prop_map(Expr::Matrix),
        ]
    })
}

fn ring_expr() -> impl Strategy<Value = RingExpr> {
    let leaf = prop_oneof![
        (2u64..50).prop_map(RingExpr::Zmod),
        (2u64..50).prop_map(|q| RingExpr::Gf(q, None)),
        (2u64..50, expr()).prop_map(|(q, e)| RingExpr::Gf(q, Some(e))),
        Just(RingExpr::Int),
        ident().prop_map(RingExpr::Ref),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), ident(), expr()).prop_map(|(b, v, m)| RingExpr::Quotient(Box::new(b), v, m)),
            (inner.clone(), 1usize..4).prop_map(|(b, n)| RingExpr::Triangular(Box::new(b), n)),
            (inner.clone(), 1usize..4).prop_map(|(b, n)| RingExpr::Matrices(Box::new(b), n)),
            inner.clone().prop_map(|b| RingExpr::Trivial(Box::new(b))),
            prop::collection::vec(inner.clone(), 1..4).prop_map(RingExpr::Product),
            (inner, ident()).prop_map(|(b, v)| RingExpr::Polyring(Box::new(b), v)),
        ]
    })
}

fn images() -> impl Strategy<Value = Vec<Image>> {
    prop::collection::vec((ident(), expr()).prop_map(|(generator, value)| Image { generator, value }), 0..3)
}

fn stmt() -> impl Strategy<Value = Stmt> {
    let sp = Span::default();
    prop_oneof![
        (ident(), ring_expr()).prop_map(move |(name, value)| Stmt::Ring { name, value, span: sp }),
        (ident(), ident(), images()).prop_map(move |(name, ring, images)| Stmt::Endo { name, ring, images, span: sp }),
        (ident(), ident(), ident(), images())
            .prop_map(move |(name, ring, sigma, images)| Stmt::Deriv { name, ring, sigma, images, span: sp }),
        (
            ident(),
            ident(),
            prop::collection::vec(ident(), 1..4),
            prop::collection::vec((ident(), ident(), prop::option::of(ident())), 0..3),
            prop::collection::vec((ident(), ident(), expr()), 0..3),
        )
            .prop_map(move |(name, ring, vars, rules, quads)| Stmt::Extension {
                name,
                ring,
                vars,
                rules: rules
                    .into_iter()
                    .map(|(var, sigma, delta)| VarRule { var, sigma, delta, span: sp })
                    .collect(),
                quads: quads
                    .into_iter()
                    .map(|(left, right, rhs)| QuadRule { left, right, rhs, span: sp })
                    .collect(),
                span: sp,
            }),
        prop::sample::select(CATALOG.iter().map(|p| p.name).collect::<Vec<_>>())
            .prop_map(move |p| Stmt::Use { preset: p.to_string(), span: sp }),
        ident().prop_map(move |name| Stmt::Active { name, span: sp }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parser_round_trip(stmts in prop::collection::vec(stmt(), 0..6)) {
        let ast = FileAst { stmts };
        let printed = ast.to_string();
        let reparsed = parse_ast(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(&reparsed, &ast, "{}", printed);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}
