use std::sync::Arc;

use proptest::prelude::*;

use eulerstack::gen::{Flavor, Gen, RichOptions};
use eulerstack::groupcat::{hom_kernel_quotient, GroupExpr, WeightFunction};
use eulerstack::json::{
    from_str, function_from_desc, function_to_desc, morphism_from_parts, morphism_to_inline_desc,
    stack_from_desc, stack_to_desc, to_string_pretty, FunctionDesc, MorphismDesc, StackDesc,
};
use eulerstack::pushpull::{compose, pullback, pushforward_naive, validate_morphism};
use eulerstack::rational::int;
use eulerstack::strata::{
    chi_naive_weighted, chi_weighted, cf_pointwise, ConstructibleFn, Operand, PointwiseOp,
};

fn gen() -> impl Strategy<Value = Gen> {
    (any::<u64>(), 0u64..1 << 20).prop_map(|(seed, case)| Gen::new(seed, case))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_char_and_orbifold_weight_multiply(mut g in gen()) {
        let a = g.group_expr(Flavor::Any);
        let b = g.group_expr(Flavor::Any);
        let ab = GroupExpr::product(vec![a.clone(), b.clone()]);
        prop_assert_eq!(ab.euler_char(), a.euler_char() * b.euler_char());
        if let (Ok(x), Ok(y)) = (a.orbifold_weight(), b.orbifold_weight()) {
            prop_assert_eq!(ab.orbifold_weight().unwrap(), x * y);
        }
    }

    #[test]
    fn orbifold_weight_counts_conjugation_orbits(mut g in gen()) {
        let grp = g.finite_group(24);
        let n = grp.order();
        let mut seen = vec![false; n];
        let mut orbits = 0;
        for x in 0..n {
            if !seen[x] {
                orbits += 1;
                for y in 0..n {
                    seen[grp.mul(grp.mul(y, x), grp.inv(y))] = true;
                }
            }
        }
        let o = GroupExpr::finite(grp.clone()).orbifold_weight().unwrap();
        prop_assert_eq!(o, orbits);
        if grp.is_abelian() {
            prop_assert_eq!(o as usize, n);
        }
    }

    #[test]
    fn hom_counting_identities(mut g in gen()) {
        let target = g.finite_group(24);
        let h = g.hom_into(&target, 0.5, false);
        let (k, i, c) = hom_kernel_quotient(&h);
        prop_assert_eq!(k * i, h.source().order());
        prop_assert_eq!(i * c, h.target().order());
        prop_assert_eq!(h.apply(h.source().identity()), h.target().identity());
    }

    #[test]
    fn double_cosets_partition_the_group(mut g in gen()) {
        let grp = g.finite_group(24);
        let a = g.subgroup_of(&grp);
        let b = g.subgroup_of(&grp);
        let cosets = grp.double_cosets(&a, &b).unwrap();
        prop_assert_eq!(cosets.iter().map(|c| c.1).sum::<usize>(), grp.order());
        for (beta, size) in cosets {
            let conj: Vec<usize> = b.iter().map(|&y| grp.mul(grp.mul(beta, y), grp.inv(beta))).collect();
            let meet = a.iter().filter(|x| conj.contains(x)).count();
            prop_assert_eq!(size, a.len() * b.len() / meet);
        }
    }

    #[test]
    fn naive_weighted_chi_is_linear(mut g in gen()) {
        let s = Arc::new(g.stack(8, Flavor::Any, false));
        let f = g.function(&s, false);
        let h = g.function(&s, false);
        let (a, b) = (g.rational(), g.rational());
        let comb = f.scale(&a).add(&h.scale(&b)).unwrap();
        let lhs = chi_naive_weighted(&comb).unwrap();
        let rhs = a * chi_naive_weighted(&f).unwrap() + b * chi_naive_weighted(&h).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weighted_chi_is_additive_over_partitions(mut g in gen()) {
        let s = Arc::new(g.stack(8, Flavor::NoGl, false));
        let f = g.function(&s, false);
        let mask: Vec<bool> = (0..s.len()).map(|_| g.chance(0.5)).collect();
        let part = |keep: bool| {
            let values = f.values().iter().zip(&mask).map(|(v, &m)| if m == keep { v.clone() } else { int(0) }).collect();
            ConstructibleFn::from_parts(s.clone(), values, int(0))
        };
        for w in [WeightFunction::Naive, WeightFunction::E, WeightFunction::InvE, WeightFunction::O] {
            if let (Ok(x), Ok(y), Ok(z)) = (chi_weighted(&f, &w), chi_weighted(&part(true), &w), chi_weighted(&part(false), &w)) {
                prop_assert_eq!(x, y + z);
            }
        }
    }

    #[test]
    fn weighted_chi_multiplies_on_products(mut g in gen()) {
        let s = Arc::new(g.stack(3, Flavor::NoGl, false));
        let t = Arc::new(g.stack(3, Flavor::NoGl, false));
        let st = Arc::new(s.product(&t));
        for w in [WeightFunction::Naive, WeightFunction::E, WeightFunction::InvE, WeightFunction::O] {
            let one = |x: &Arc<_>| ConstructibleFn::constant(Arc::clone(x), int(1));
            if let (Ok(x), Ok(y)) = (chi_weighted(&one(&s), &w), chi_weighted(&one(&t), &w)) {
                prop_assert_eq!(chi_weighted(&one(&st), &w).unwrap(), x * y);
            }
        }
    }

    #[test]
    fn constructible_functions_form_an_ideal(mut g in gen()) {
        let s = Arc::new(g.stack(8, Flavor::Any, true));
        let f = g.function(&s, false);
        let l = g.lcf(&s);
        let p = cf_pointwise(PointwiseOp::Mul, &f, Operand::Fn(&l)).unwrap();
        prop_assert!(p.is_constructible());
        let q = cf_pointwise(PointwiseOp::Mul, &l, Operand::Fn(&f)).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn pullback_respects_products_and_composition(mut g in gen()) {
        let h = Arc::new(g.finite_stack(4, 24, false, "h"));
        let psi = g.rich_morphism_into(&h, &RichOptions::default(), "g");
        let phi = g.rich_morphism_into(psi.source(), &RichOptions::default(), "f");
        let (a, b) = (g.function(&h, false), g.function(&h, false));
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(pullback(&psi, &ab).unwrap(), pullback(&psi, &a).unwrap().mul(&pullback(&psi, &b).unwrap()).unwrap());
        let both = compose(&phi, &psi).unwrap();
        prop_assert_eq!(pullback(&both, &a).unwrap(), pullback(&phi, &pullback(&psi, &a).unwrap()).unwrap());
    }

    #[test]
    fn generated_morphisms_validate(mut g in gen()) {
        let t = Arc::new(g.stack(4, Flavor::Any, false));
        let m = g.lean_morphism_into(&t, Flavor::Any);
        prop_assert!(validate_morphism(&m).is_ok());
        let t = Arc::new(g.finite_stack(4, 24, false, "t"));
        let m = g.rich_morphism_into(&t, &RichOptions::default(), "s");
        prop_assert!(validate_morphism(&m).is_ok());
        let f = g.function(m.source(), false);
        let pushed = pushforward_naive(&m, &f).unwrap();
        prop_assert_eq!(chi_naive_weighted(&pushed).unwrap(), chi_naive_weighted(&f).unwrap());
    }

    #[test]
    fn descriptors_round_trip(mut g in gen()) {
        let remainder = g.chance(0.5);
        let s = Arc::new(g.stack(8, Flavor::Any, remainder));
        let d: StackDesc = from_str(&to_string_pretty(&stack_to_desc(&s))).unwrap();
        let back = Arc::new(stack_from_desc(&d).unwrap());
        prop_assert_eq!(&back, &s);

        let f = g.lcf(&s);
        let d: FunctionDesc = from_str(&to_string_pretty(&function_to_desc(&f, None))).unwrap();
        prop_assert_eq!(function_from_desc(&d, back).unwrap(), f);

        let h = Arc::new(g.finite_stack(4, 24, true, "h"));
        let rem = g.finite_group(24);
        let m = g.rich_morphism_into(&h, &RichOptions { remainder: Some(rem), ..RichOptions::default() }, "s");
        let d: MorphismDesc = from_str(&to_string_pretty(&morphism_to_inline_desc(&m))).unwrap();
        let back = morphism_from_parts(&d, m.source().clone(), m.target().clone()).unwrap();
        prop_assert_eq!(back, m);
    }
}
