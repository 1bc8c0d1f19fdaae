use algebroid_core::{Chart, Poly, Rational};
use proptest::prelude::*;

fn chart() -> Chart {
    Chart::new(["x", "y", "z"]).unwrap()
}

/// Expression tree used as an independent oracle for the parser.
#[derive(Debug, Clone)]
enum Expr {
    Num(i64, i64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn render(&self, names: &[&str]) -> String {
        match self {
            Expr::Num(n, 1) => format!("{n}"),
            Expr::Num(n, d) => format!("{n}/{d}"),
            Expr::Var(i) => names[*i].to_string(),
            Expr::Add(a, b) => format!("({} + {})", a.render(names), b.render(names)),
            Expr::Sub(a, b) => format!("({} - {})", a.render(names), b.render(names)),
            Expr::Mul(a, b) => format!("{}*{}", a.render(names), b.render(names)),
            Expr::Pow(a, k) => format!("({})^{k}", a.render(names)),
        }
    }

    fn eval(&self, pt: &[Rational]) -> Rational {
        match self {
            Expr::Num(n, d) => Rational::new(*n, *d),
            Expr::Var(i) => pt[*i].clone(),
            Expr::Add(a, b) => a.eval(pt) + b.eval(pt),
            Expr::Sub(a, b) => a.eval(pt) - b.eval(pt),
            Expr::Mul(a, b) => a.eval(pt) * b.eval(pt),
            Expr::Pow(a, k) => {
                let v = a.eval(pt);
                (0..*k).fold(Rational::ONE, |acc, _| acc * v.clone())
            }
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-9i64..10, 1i64..5).prop_map(|(n, d)| Expr::Num(n, d)),
        (0usize..3).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(a.into(), b.into())),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(a.into(), b.into())),
            (inner, 0u32..4).prop_map(|(a, k)| Expr::Pow(a.into(), k)),
        ]
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..21, 1i64..7).prop_map(|(n, d)| Rational::new(n, d))
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(rational(), 3)
}

fn poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(
        (proptest::collection::vec(0u8..4, 3), -50i64..51, 1i64..9),
        0..6,
    )
    .prop_map(|terms| {
        let mut p = Poly::zero(3);
        for (e, n, d) in terms {
            p.add_assign_ref(&Poly::monomial(e.into_iter().collect(), Rational::new(n, d)));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_then_eval_matches_tree_walk(e in expr(), pt in point()) {
        let c = chart();
        let src = e.render(&["x", "y", "z"]);
        let p = c.parse(&src).unwrap();
        let named = [("x", pt[0].clone()), ("y", pt[1].clone()), ("z", pt[2].clone())];
        prop_assert_eq!(c.eval_at(&p, &named).unwrap(), e.eval(&pt));
    }

    #[test]
    fn print_parse_round_trip(p in poly()) {
        let c = chart();
        let s = c.print(&p);
        prop_assert_eq!(c.parse(&s).unwrap(), p.clone());
        prop_assert_eq!(c.print(&c.parse(&s).unwrap()), s);
    }

    #[test]
    fn ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn partial_is_a_derivation(p in poly(), q in poly(), i in 0usize..3, j in 0usize..3) {
        let lhs = (&p * &q).partial(i);
        let rhs = &(&p.partial(i) * &q) + &(&p * &q.partial(i));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(p.partial(i).partial(j), p.partial(j).partial(i));
    }

    #[test]
    fn eval_is_a_homomorphism(p in poly(), q in poly(), pt in point()) {
        prop_assert_eq!((&p * &q).eval(&pt), p.eval(&pt) * q.eval(&pt));
        prop_assert_eq!((&p + &q).eval(&pt), p.eval(&pt) + q.eval(&pt));
    }
}
