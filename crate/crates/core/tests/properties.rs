use proptest::collection::vec;
use proptest::prelude::*;
use qkit::fuzzy::{luk_basis_eval, luk_partition};
use qkit::morphology::{dilate, erode, image_leq, translate, Grid, GridMode, Image, StructuringElement};
use qkit::qmodule::{vector_from_text, vector_to_text, FreeModule, QModule, ResiduatedModule};
use qkit::transform::{kernel_from_text, kernel_to_text, Kernel};
use qkit::{ChainQuantale, MonoidTable, PowersetQuantale, Quantale, Rational, UnitQuantale, UnitTnorm};

fn chain() -> impl Strategy<Value = ChainQuantale> {
    (1u32..=40, any::<bool>()).prop_map(|(d, l)| {
        if l {
            ChainQuantale::lukasiewicz(d).unwrap()
        } else {
            ChainQuantale::godel(d).unwrap()
        }
    })
}

/// A chain with `count` elements drawn from it.
fn chain_with(count: usize) -> impl Strategy<Value = (ChainQuantale, Vec<u32>)> {
    chain().prop_flat_map(move |q| {
        let d = q.denominator();
        (Just(q), vec(0..=d, count))
    })
}

proptest! {
    #[test]
    fn chain_residuation((q, v) in chain_with(3)) {
        let (x, y, z) = (v[0], v[1], v[2]);
        let below = q.leq(&q.mul(&x, &y), &z);
        prop_assert_eq!(below, q.leq(&x, &q.rres(&z, &y)));
        prop_assert_eq!(below, q.leq(&y, &q.lres(&x, &z)));
    }

    #[test]
    fn chain_product_is_monoid((q, v) in chain_with(3)) {
        let (x, y, z) = (v[0], v[1], v[2]);
        prop_assert_eq!(q.mul(&q.mul(&x, &y), &z), q.mul(&x, &q.mul(&y, &z)));
        prop_assert_eq!(q.mul(&x, &q.unit()), x);
        prop_assert_eq!(q.mul(&x, &q.join(&y, &z)), q.join(&q.mul(&x, &y), &q.mul(&x, &z)));
    }

    #[test]
    fn float_residuation(
        x in 0.0f64..=1.0,
        y in 0.0f64..=1.0,
        z in 0.0f64..=1.0,
        t in prop_oneof![Just(UnitTnorm::Lukasiewicz), Just(UnitTnorm::Godel), Just(UnitTnorm::Product)],
    ) {
        let q = UnitQuantale::new(t);
        let r = q.rres(&z, &y);
        prop_assert!(q.leq(&q.mul(&r, &y), &z));
        if q.leq(&q.mul(&x, &y), &z) {
            prop_assert!(q.leq(&x, &r));
        }
    }

    #[test]
    fn powerset_of_s3_is_associative(a in 0u64..64, b in 0u64..64, c in 0u64..64) {
        let q = PowersetQuantale::new(MonoidTable::symmetric_group(3).unwrap());
        prop_assert_eq!(q.mul(&q.mul(&a, &b), &c), q.mul(&a, &q.mul(&b, &c)));
        let r = q.rres(&c, &b);
        prop_assert!(q.leq(&q.mul(&r, &b), &c));
        let l = q.lres(&a, &c);
        prop_assert!(q.leq(&q.mul(&a, &l), &c));
    }

    #[test]
    fn luk_basis_sums_to_one(n in 2usize..12, num in 0i64..=1000) {
        let x = Rational::new(num, 1000);
        let sum: Rational = (0..n).map(|k| luk_basis_eval(n, k, x).unwrap()).sum();
        prop_assert_eq!(sum, Rational::from_integer(1));
        let xf = num as f64 / 1000.0;
        let sumf: f64 = (0..n).map(|k| luk_basis_eval(n, k, xf).unwrap()).sum();
        prop_assert!((sumf - 1.0).abs() < 1e-9);
    }

    #[test]
    fn module_residuals((q, v) in chain_with(13)) {
        let m = FreeModule::new(q.clone(), 6);
        let (s, a, b) = (v[0], v[1..7].to_vec(), v[7..13].to_vec());
        let sa = m.act(&s, &a);
        prop_assert_eq!(m.leq(&sa, &b), m.leq(&a, &m.ldiv(&s, &b)));
        prop_assert_eq!(m.leq(&sa, &b), q.leq(&s, &m.vdiv(&b, &a)));
        let c = m.vdiv(&b, &a);
        prop_assert!(m.leq(&m.act(&c, &a), &b));
    }

    #[test]
    fn transform_adjunction((q, v) in chain_with(5 * 3 + 5 + 3)) {
        let k = Kernel::new(q.clone(), 5, 3, v[..15].to_vec()).unwrap();
        let (f, g) = (&v[15..20], &v[20..23]);
        let m = FreeModule::new(q.clone(), 3);
        let mx = FreeModule::new(q, 5);
        let hf = k.apply_direct(f);
        let lg = k.apply_inverse(g);
        prop_assert_eq!(m.leq(&hf, &g.to_vec()), mx.leq(&f.to_vec(), &lg));
        prop_assert_eq!(k.apply_direct(&k.apply_inverse(&hf)), hf);
    }

    #[test]
    fn kernel_and_vector_text((q, v) in chain_with(12)) {
        let k = Kernel::new(q.clone(), 4, 3, v.clone()).unwrap();
        let back = kernel_from_text(&kernel_to_text(&k)).unwrap();
        prop_assert!(back.same_entries(&k));
        prop_assert_eq!(back.quantale(), &q);
        let (q2, w) = vector_from_text(&vector_to_text(&q, &v)).unwrap();
        prop_assert_eq!((q2, w), (q, v));
    }

    #[test]
    fn morphology_on_a_torus(
        px in vec(0u32..=12, 30),
        py in vec(0u32..=12, 30),
        a in vec(((-2i64..=2, -2i64..=2), 0u32..=12), 1..5),
        dx in -6i64..6,
        dy in -6i64..6,
    ) {
        let q = ChainQuantale::lukasiewicz(12).unwrap();
        let g = Grid::new(6, 5, GridMode::Wrap).unwrap();
        let x = Image::new(g, px).unwrap();
        let y = Image::new(g, py).unwrap();
        let se = StructuringElement::new(a);
        prop_assert_eq!(
            image_leq(&q, &dilate(&q, &x, &se), &y),
            image_leq(&q, &x, &erode(&q, &y, &se))
        );
        prop_assert_eq!(dilate(&q, &translate(&x, dx, dy, 0), &se), translate(&dilate(&q, &x, &se), dx, dy, 0));
        prop_assert_eq!(erode(&q, &translate(&y, dx, dy, 0), &se), translate(&erode(&q, &y, &se), dx, dy, 0));
    }

    #[test]
    fn luk_partition_upper_pair(m in 1usize..4, n in 2usize..6, seed in vec(0u32..1000, 17)) {
        let l = m * (n - 1) + 1;
        let p = luk_partition(n, l).unwrap();
        let d = p.kernel().quantale().denominator();
        let f: Vec<u32> = (0..l).map(|j| seed[j % seed.len()] % (d + 1)).collect();
        let up = p.f_up(&f).unwrap();
        let rec = p.f_up_inverse(&up).unwrap();
        prop_assert!(rec.iter().zip(&f).all(|(r, x)| r >= x));
        prop_assert_eq!(p.f_up(&rec).unwrap(), up.clone());
        prop_assert_eq!(p.f_up(&p.f_up_inverse(&up).unwrap()).unwrap(), up);
    }
}
