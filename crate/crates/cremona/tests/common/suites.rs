//! The six property-suite bodies, shared between the standalone property
//! tests and the acceptance run.

use rand::Rng;

use cremona::{
    build_perm, build_perm_seeded, parse_map_expr, parse_word, BirationalTuple, CremonaElement,
    FieldSpec, GroupWord, PointTable, RationalFunction,
};

use super::{random_element, random_nonzero_poly, random_poly, random_ratfun, rng};

fn domains() -> Vec<FieldSpec> {
    vec![
        FieldSpec::Rational,
        FieldSpec::Prime(2),
        FieldSpec::Prime(5),
        FieldSpec::Prime(7),
        FieldSpec::finite(2, 2).unwrap(),
        FieldSpec::finite(3, 2).unwrap(),
    ]
}

pub fn frac_eq_equivalence(cases: usize) {
    let mut rng = rng(0x5e1f);
    let domains = domains();
    for case in 0..cases {
        let domain = &domains[case % domains.len()];
        let f = random_ratfun(&mut rng, 2, domain);
        // equivalent forms: blow up numerator and denominator together
        let m1 = random_nonzero_poly(&mut rng, 2, domain, 2, 2);
        let m2 = random_nonzero_poly(&mut rng, 2, domain, 2, 2);
        let g =
            RationalFunction::new(f.num().mul(&m1).unwrap(), f.den().mul(&m1).unwrap()).unwrap();
        let h =
            RationalFunction::new(f.num().mul(&m2).unwrap(), f.den().mul(&m2).unwrap()).unwrap();
        assert!(f.eq(&f).unwrap(), "reflexive");
        assert!(f.eq(&g).unwrap() && g.eq(&f).unwrap(), "symmetric");
        assert!(g.eq(&h).unwrap(), "transitive through the common source");
        // a genuinely different function stays different
        let shifted = f
            .add(&RationalFunction::constant(2, domain.from_i64(1)))
            .unwrap();
        assert!(!f.eq(&shifted).unwrap());
    }
}

pub fn ring_axioms(cases: usize) {
    let mut rng = rng(0xa210);
    let domains = domains();
    for case in 0..cases {
        let domain = &domains[case % domains.len()];
        let a = random_poly(&mut rng, 2, domain, 3, 3);
        let b = random_poly(&mut rng, 2, domain, 3, 3);
        let c = random_poly(&mut rng, 2, domain, 3, 3);
        let add_assoc_l = a.add(&b).unwrap().add(&c).unwrap();
        let add_assoc_r = a.add(&b.add(&c).unwrap()).unwrap();
        assert_eq!(add_assoc_l, add_assoc_r, "addition associates");
        assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap(), "addition commutes");
        let mul_assoc_l = a.mul(&b).unwrap().mul(&c).unwrap();
        let mul_assoc_r = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_eq!(mul_assoc_l, mul_assoc_r, "multiplication associates");
        assert_eq!(
            a.mul(&b).unwrap(),
            b.mul(&a).unwrap(),
            "multiplication commutes"
        );
        let dist_l = a.mul(&b.add(&c).unwrap()).unwrap();
        let dist_r = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        assert_eq!(dist_l, dist_r, "multiplication distributes");
        assert!(a.sub(&a).unwrap().is_zero(), "additive inverse");
    }
}

pub fn composition_associativity(cases: usize) {
    let mut rng = rng(0xc0de);
    let domain = FieldSpec::Rational;
    for _ in 0..cases {
        let f = random_element(&mut rng, &domain);
        let g = random_element(&mut rng, &domain);
        let h = random_element(&mut rng, &domain);
        let left = h.compose(&g).unwrap().compose(&f).unwrap();
        let right = h.compose(&g.compose(&f).unwrap()).unwrap();
        assert!(
            left.forward().tuple_eq(right.forward()).unwrap(),
            "associativity of composition"
        );
    }
}

fn finite_pool(domain: &FieldSpec) -> Vec<CremonaElement> {
    let field = domain.to_string();
    let make = |f: &str, i: &str| {
        CremonaElement::new(
            parse_map_expr(&format!("[{f}] over {field}")).unwrap(),
            parse_map_expr(&format!("[{i}] over {field}")).unwrap(),
        )
        .unwrap()
    };
    vec![
        make("1/x, 1/y", "1/x, 1/y"),
        make("y, x", "y, x"),
        make("x + 1, y + 2", "x - 1, y - 2"),
        make("x, y + x^2", "x, y - x^2"),
        make("x + y, y", "x - y, y"),
    ]
}

pub fn eval_composition_compatibility() {
    let mut checked = 0u64;
    for p in [3u64, 5] {
        for m in 1..=2u32 {
            let field = FieldSpec::finite(p, m).unwrap();
            let table = PointTable::new(field, 2, PointTable::DEFAULT_CAP).unwrap();
            let pool = finite_pool(&FieldSpec::Prime(p));
            for f in &pool {
                for g in &pool {
                    let gf = g.compose(f).unwrap();
                    for idx in 0..table.len() {
                        let x = table.point_at(idx);
                        if f.in_singular_set(&x).unwrap() {
                            continue;
                        }
                        let fx = f.forward().eval_point(&x).unwrap();
                        if g.in_singular_set(&fx).unwrap() || gf.in_singular_set(&x).unwrap() {
                            continue;
                        }
                        let direct = gf.forward().eval_point(&x).unwrap();
                        let chained = g.forward().eval_point(&fx).unwrap();
                        assert_eq!(direct, chained, "eval must commute with composition");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 10_000, "exhaustive sweep covered {checked} points");
}

pub fn permutation_bijectivity(cases: usize) {
    let mut rng = rng(0xb1ec);
    let shapes = [(2u64, 1u32), (3, 1), (5, 1), (2, 2), (3, 2)];
    for case in 0..cases {
        let (p, m) = shapes[case % shapes.len()];
        let e = random_element(&mut rng, &FieldSpec::Prime(p));
        let field = FieldSpec::finite(p, m).unwrap();
        let table = PointTable::new(field, 2, PointTable::DEFAULT_CAP).unwrap();
        let rep = if rng.gen_bool(0.5) {
            build_perm(&e, &table).unwrap()
        } else {
            build_perm_seeded(&e, &table, rng.gen()).unwrap()
        };
        let mut sorted: Vec<u32> = rep.perm().to_vec();
        sorted.sort_unstable();
        let straight: Vec<u32> = (0..table.len() as u32).collect();
        assert_eq!(sorted, straight, "image is all of the point set");
        // regular points land off the singular set of the inverse
        let back = e.inverted();
        for idx in 0..table.len() {
            let x = table.point_at(idx);
            if e.in_singular_set(&x).unwrap() {
                continue;
            }
            let y = table.point_at(rep.perm()[idx as usize] as u64);
            assert!(
                !back.in_singular_set(&y).unwrap(),
                "image of a regular point is regular for the inverse"
            );
        }
    }
}

pub fn tuple_round_trip(cases: usize) {
    let mut rng = rng(0x70ad);
    let domains = domains();
    for case in 0..cases {
        let domain = &domains[case % domains.len()];
        let d = rng.gen_range(1..=3);
        let coords: Vec<RationalFunction> = (0..d)
            .map(|_| {
                let num = random_poly(&mut rng, d, domain, 3, 2);
                let den = random_nonzero_poly(&mut rng, d, domain, 2, 2);
                RationalFunction::new(num, den).unwrap()
            })
            .collect();
        let tuple = BirationalTuple::new(coords).unwrap();
        let text = cremona::render_tuple(&tuple);
        let back = parse_map_expr(&text).unwrap();
        assert!(
            tuple.tuple_eq(&back).unwrap(),
            "tuple round-trip failed for {text}"
        );
        assert_eq!(back.domain(), tuple.domain());
    }
}

pub fn word_round_trip(cases: usize) {
    let mut rng = rng(0x30cd);
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    for _ in 0..cases {
        let len = rng.gen_range(0..=12);
        let letters: Vec<(usize, bool)> = (0..len)
            .map(|_| (rng.gen_range(0..names.len()), rng.gen_bool(0.5)))
            .collect();
        let word = GroupWord::from_letters(letters);
        let text = word.display_with(&names);
        let back = parse_word(&text, &names).unwrap();
        assert_eq!(word, back, "word round-trip failed for {text}");
    }
}
