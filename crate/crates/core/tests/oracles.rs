//! Independent numerical oracles for the symbolic paths.

use antiexact::forms::{flat, sharp, DifferentialForm, Metric, VectorField};
use antiexact::frobenius::integrability_test;
use antiexact::homotopy::{geometric_decompose, homotopy};
use antiexact::parser::{parse_form, parse_scalar};
use antiexact::random::{random_form, random_polynomial, PolyShape};
use antiexact::scalar_expr::{probably_equal, probably_zero};
use antiexact::verify::{check_identity, quadrature_h_oracle, sample_points, VerificationPolicy};
use antiexact::{rational, Chart, ScalarExpr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn positive_box(n: usize) -> Chart {
    Chart::with_uniform_box(vec![rational(1, 1); n], rational(1, 2), rational(3, 2)).unwrap()
}

const TRANSCENDENTAL: [&str; 6] = [
    "exp(x*y) * ln(x^2 + y)",
    "(x + y^2)^(1/2) / (1 + x*y)",
    "x^(-3/2) * exp(-y) + ln(x)^2",
    "int01(t, exp(t*x*y))",
    "exp(exp(x) - y) * y^(1/3)",
    "ln(int01(t, 1 + t*x*y)) * x",
];

#[test]
fn derivatives_match_central_differences() {
    let c = positive_box(2);
    let policy = VerificationPolicy::default().with_samples(10);
    let h = 1e-5;
    for text in TRANSCENDENTAL {
        let e = parse_scalar(text, 2).unwrap();
        for i in 0..2 {
            let de = e.differentiate(i);
            for p in sample_points(&c, &policy).unwrap() {
                let mut hi = p.clone();
                let mut lo = p.clone();
                hi[i] += h;
                lo[i] -= h;
                let fd = (e.evaluate(&hi).unwrap() - e.evaluate(&lo).unwrap()) / (2.0 * h);
                let exact = de.evaluate(&p).unwrap();
                assert!(
                    (fd - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                    "d/dx{i} of {text} at {p:?}: {exact} vs {fd}"
                );
            }
        }
    }
}

#[test]
fn probable_equality_is_reflexive_and_symmetric() {
    let c = positive_box(2);
    let exprs: Vec<ScalarExpr> = TRANSCENDENTAL.iter().map(|t| parse_scalar(t, 2).unwrap()).collect();
    for a in &exprs {
        assert!(probably_equal(a, a, &c).unwrap());
        for b in &exprs {
            assert_eq!(probably_equal(a, b, &c).unwrap(), probably_equal(b, a, &c).unwrap());
        }
    }
    // Same function, different structure.
    let a = parse_scalar("ln(x*y)", 2).unwrap();
    let b = parse_scalar("ln(x) + ln(y)", 2).unwrap();
    assert!(probably_equal(&a, &b, &c).unwrap() && probably_equal(&b, &a, &c).unwrap());
    let q = parse_scalar("(x + 1)^-1 * (x + 1) - 1", 2).unwrap();
    assert!(probably_zero(&q, &c).unwrap());
}

#[test]
fn symbolic_h_matches_quadrature_on_examples() {
    let c = Chart::origin(2).unwrap();
    let policy = VerificationPolicy::default();
    for text in ["x*dx", "x*dy - y*dx", "(x + y^2)*dx", "2*dx^dy", "3*x*dx^dy", "exp(x)*dy + ln(2 + y)*dx"] {
        let a = parse_form(text, 2).unwrap();
        let ha = homotopy(&a, &c).unwrap();
        for p in sample_points(&c, &policy).unwrap() {
            let symbolic = ha.evaluate(&p).unwrap();
            let oracle = quadrature_h_oracle(&a, &c, &p).unwrap();
            for (s, o) in symbolic.iter().zip(&oracle) {
                assert!((s - o).abs() <= 1e-8 * o.abs().max(1.0), "{text} at {p:?}: {s} vs {o}");
            }
        }
    }
}

#[test]
fn decomposition_holds_numerically_for_transcendental_forms() {
    let c = positive_box(2);
    let policy = VerificationPolicy::default();
    for text in ["exp(x*y)*dx + ln(x)*dy", "x^(1/2)*dy - int01(t, exp(t*y))*dx", "exp(x)*dx^dy"] {
        let a = parse_form(text, 2).unwrap();
        let d = geometric_decompose(&a, &c).unwrap();
        let r = check_identity(&d.reassemble(), &a, &c, &policy).unwrap();
        assert!(r.pass, "{text}: {r:?}");
        let hh = homotopy(&d.antiexact_part, &c).unwrap();
        let zero = DifferentialForm::zero(2, a.degree() - 1);
        assert!(check_identity(&hh, &zero, &c, &policy).unwrap().pass, "{text}");
    }
}

#[test]
fn sharp_inverts_flat() {
    let c = positive_box(3);
    let policy = VerificationPolicy::default();
    let mut r = ChaCha8Rng::seed_from_u64(21);
    let shape = PolyShape::default();
    let f = VectorField::new((0..3).map(|_| random_polynomial(&mut r, 3, shape)).collect());
    let metrics = [
        Metric::euclidean(3),
        Metric::diagonal(vec![
            parse_scalar("1 + x^2", 3).unwrap(),
            parse_scalar("exp(y)", 3).unwrap(),
            ScalarExpr::integer(2),
        ]),
        Metric::from_matrix(vec![
            vec![ScalarExpr::integer(2), ScalarExpr::var(0), ScalarExpr::zero()],
            vec![ScalarExpr::var(0), ScalarExpr::integer(3), ScalarExpr::one()],
            vec![ScalarExpr::zero(), ScalarExpr::one(), ScalarExpr::integer(4)],
        ])
        .unwrap(),
    ];
    for g in &metrics {
        g.validate(&c, &sample_points(&c, &policy).unwrap()).unwrap();
        let back = sharp(&flat(&f, g).unwrap(), g).unwrap();
        let pair = antiexact::verify::check_with(&c, &policy, |p| Ok((back.evaluate(p)?, f.evaluate(p)?))).unwrap();
        assert!(pair.pass, "{g:?}: {pair:?}");
    }
}

#[test]
fn integrability_is_invariant_under_nonvanishing_rescaling() {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let c = Chart::origin(3).unwrap();
    let forms = [
        parse_form("z*dx + dy", 3).unwrap(),
        parse_form("y*z*dx + x*z*dy + x*y*dz", 3).unwrap(),
        random_form(&mut r, 3, 1, PolyShape::default()),
    ];
    for omega in &forms {
        let verdict = integrability_test(omega, &c).unwrap();
        for _ in 0..10 {
            // 1 + p² + q² never vanishes.
            let p = random_polynomial(&mut r, 3, PolyShape::default());
            let q = random_polynomial(&mut r, 3, PolyShape::default());
            let mu = ScalarExpr::one() + &p * &p + &q * &q.scale(&rational(r.gen_range(1..4), 1));
            assert_eq!(integrability_test(&omega.mul_scalar(&mu), &c).unwrap(), verdict);
        }
    }
}
