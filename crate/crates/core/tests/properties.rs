use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use polarbranch::diagram::Part;
use polarbranch::{
    predict, BivariatePoly, CanonicalRep, CharSequence, ContinuedFraction, LatticePoint, NewtonDiagram, PuiseuxSeries,
};
use proptest::prelude::*;

fn char_strategy(max_b0: u64) -> impl Strategy<Value = Vec<u64>> {
    (2..=max_b0, proptest::collection::vec(1..=40u64, 1..12)).prop_map(|(b0, steps)| {
        let mut b = vec![b0];
        let mut e = b0;
        for s in steps {
            if e == 1 {
                break;
            }
            let next = b.last().unwrap() + s;
            if next.gcd(&e) < e {
                e = next.gcd(&e);
                b.push(next);
            }
        }
        // close the chain with a unit gcd when the steps ran out
        if e > 1 {
            let mut next = b.last().unwrap() + 1;
            while next.gcd(&e) != 1 {
                next += 1;
            }
            b.push(next);
        }
        b
    })
}

fn diagram_strategy(max: u64) -> impl Strategy<Value = NewtonDiagram> {
    proptest::collection::vec((0..=max, 0..=max), 1..7)
        .prop_map(|pts| NewtonDiagram::from_support(pts.into_iter().map(|(x, y)| LatticePoint::new(x, y))).unwrap())
}

fn poly_strategy() -> impl Strategy<Value = BivariatePoly> {
    proptest::collection::vec(((0..4u64, 0..4u64), -5..=5i64), 1..6)
        .prop_map(|terms| BivariatePoly::from_int_terms(&terms))
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn derived_data_of_characteristics(b in char_strategy(64)) {
        let c = CharSequence::from_u64s(&b).unwrap();
        for i in 1..=c.h() {
            prop_assert_eq!(c.n(i) * c.e(i), c.e(i - 1).clone());
            prop_assert_eq!(c.m(i) * c.e(i), c.b(i).clone());
            prop_assert!(c.m(i).gcd(c.n(i)) == BigInt::from(1));
        }
        // b̄_1 = b_1, b̄_{l+1} = n_l b̄_l + b_{l+1} - b_l
        let mut bbar = c.b(1).clone();
        for l in 1..=c.h() {
            prop_assert_eq!(c.bbar(l).unwrap(), &bbar);
            if l < c.h() {
                bbar = c.n(l) * &bbar + c.b(l + 1) - c.b(l);
            }
        }
        let rebuilt: Vec<BigInt> = std::iter::once(c.b(0).clone()).chain((1..=c.h()).map(|i| c.m(i) * c.e(i))).collect();
        prop_assert_eq!(rebuilt.as_slice(), c.bs());
    }

    #[test]
    fn convergents_interleave((m, n) in (2..1_000_000i64).prop_flat_map(|m| (Just(m), 1..m))) {
        let cf = ContinuedFraction::expand(&m.into(), &n.into()).unwrap();
        let v = q(m, n);
        prop_assert_eq!(cf.value(), v.clone());
        let s = cf.s() as isize;
        for i in (0..=s).step_by(2) {
            prop_assert!(cf.convergent(i) <= v);
            if i + 2 <= s {
                prop_assert!(cf.convergent(i) < cf.convergent(i + 2));
            }
        }
        for i in (1..=s).step_by(2) {
            prop_assert!(cf.convergent(i) >= v);
            if i + 2 <= s {
                prop_assert!(cf.convergent(i) > cf.convergent(i + 2));
            }
        }
        let even = cf.to_even_length();
        prop_assert_eq!(even.s() % 2, 0);
        prop_assert_eq!(even.value(), v);
    }

    #[test]
    fn lattice_derivatives_compose(d in diagram_strategy(40), k in 0..45u64, l in 0..45u64) {
        let dk = d.symbolic_derivative(k).unwrap();
        prop_assert_eq!(dk.symbolic_derivative(l).unwrap(), d.symbolic_derivative(k + l).unwrap());
        prop_assert_eq!(d.derivative_closed_form(k + l), d.symbolic_derivative(k + l).unwrap());
    }

    #[test]
    fn initial_parts_add(a in diagram_strategy(30), b in diagram_strategy(30), wx in 1..20i64, wy in 1..20i64) {
        let w = (q(wx, 1), q(wy, 1));
        let w = (&w.0, &w.1);
        let sum = a.minkowski_sum(&b);
        let lhs = sum.initial_part(w).unwrap();
        let rhs = &a.initial_part(w).unwrap() + &b.initial_part(w).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn corner_points_lie_on_the_polygon(d in diagram_strategy(60)) {
        for long in [false, true] {
            let rep = d.canonical_rep(long);
            prop_assert_eq!(rep.to_diagram(), d.clone());
            for p in rep.corner_points() {
                prop_assert!(d.on_polygon(&p), "{} not on {}", p, d);
            }
        }
        let long = d.canonical_rep(true);
        prop_assert_eq!(long.to_short().to_long(), long);
    }

    #[test]
    fn y_derivatives_compose(f in poly_strategy(), k in 0..3u64, l in 0..3u64) {
        let deg = f.deg_y().unwrap_or(0);
        prop_assume!(k + l <= deg);
        let a = f.derivative_y(k).unwrap().derivative_y(l).unwrap();
        prop_assert_eq!(a, f.derivative_y(k + l).unwrap());
    }

    #[test]
    fn hat_transform_is_multiplicative(
        f in poly_strategy(),
        g in poly_strategy(),
        denom in 1..4u64,
        terms in proptest::collection::vec((1..9u64, -3..=3i64), 0..3),
    ) {
        let lambda = PuiseuxSeries::from_int_terms(denom, &terms);
        let lhs = f.mul(&g).hat_transform(denom, &lambda).unwrap();
        let rhs = f.hat_transform(denom, &lambda).unwrap().mul(&g.hat_transform(denom, &lambda).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn minimal_polynomials_annihilate_their_root(
        denom in 2..7u64,
        terms in proptest::collection::vec((1..25u64, -3..=3i64), 1..4),
    ) {
        let a = PuiseuxSeries::from_int_terms(denom, &terms).reduce();
        prop_assume!(!a.terms().is_empty() && a.terms().keys().all(|&i| i >= a.denom()));
        let f = a.min_poly(None).unwrap();
        prop_assert_eq!(f.deg_y(), Some(a.index()));
        prop_assert!(f.eval_series(&a).terms().is_empty());
        // a steepest edge of height n from (0,n)
        let d = f.diagram_of().unwrap();
        prop_assert!(d.certified);
        let d = d.diagram;
        prop_assert_eq!(&d.first_vertex().y, &BigInt::from(a.index()));
    }

    #[test]
    fn multiplicities_are_conserved(b in char_strategy(40), kk in 1..40u64) {
        let c = CharSequence::from_u64s(&b).unwrap();
        let k = 1 + kk % (b[0] - 1);
        let p = predict(&c, k).unwrap();
        prop_assert_eq!(p.total_multiplicity(), BigInt::from(b[0] - k));
        let contacts: Vec<BigRational> = p.groups.iter().map(|g| c.exponent(g.index)).collect();
        prop_assert!(contacts.windows(2).all(|w| w[0] < w[1]));
        for f in p.factors() {
            prop_assert_eq!(&f.contact_with_f, &c.exponent(f.group));
        }
        prop_assert_eq!(p.to_json().to_string(), predict(&c, k).unwrap().to_json().to_string());
    }

    #[test]
    fn group_parts_come_from_the_lattice_derivative(b in char_strategy(48), kk in 1..48u64) {
        let c = CharSequence::from_u64s(&b).unwrap();
        let k = 1 + kk % (b[0] - 1);
        let p = predict(&c, k).unwrap();
        for g in &p.groups {
            let d = NewtonDiagram::elementary(c.m(g.index).clone(), c.n(g.index).clone());
            let lattice = d.symbolic_derivative(g.t).unwrap().canonical_rep(true);
            prop_assert_eq!(&g.derivative, &lattice);
            let z: Vec<Part> = g.factors.iter().filter_map(|f| f.part.clone()).collect();
            prop_assert_eq!(CanonicalRep::from_parts(z, true), lattice);
        }
    }
}
