use std::collections::HashSet;

use hermpic_core::abgrp::{tate_cohomology, AbGroup};
use hermpic_core::hermforms::{
    isomorphic, make_form, pich, pich_bruteforce, product_formula_check, tensor, verify_five_term,
    HermitianLine, LineModule,
};
use hermpic_core::pnpic::pic_p;
use hermpic_core::ringsinv::{spec_components, Elem, RingWithInvolution};
use hermpic_core::unitsnorm::{hermitian_units, norm_fixed_quotient, unit_group};
use hermpic_core::Limits;

const RINGS: &[&str] = &[
    "finite:zmod2",
    "finite:zmod5",
    "finite:zmod8",
    "finite:zmod12",
    "finite:zmod16",
    "finite:zmod27",
    "finite:zmod60",
    "finite:gf2^2",
    "finite:gf3^2",
    "finite:gf2^3",
    "finite:gf3^2:frob=1",
    "finite:gf5^2:frob=1",
    "finite:gf2^4:frob=2",
    "finite:zmod3,zmod3:swap",
    "finite:zmod4,zmod4:swap",
    "finite:gf2^2,gf2^2:swap",
    "finite:gf5,gf5:swap",
    "finite:gf3^2,gf3^2:swap:frob=1,1",
    "finite:gf3^2,zmod5:frob=1,0",
    "finite:zmod3,zmod3,zmod7:perm=1,0,2",
];

fn ring(s: &str) -> RingWithInvolution {
    RingWithInvolution::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn lim() -> Limits {
    Limits::default()
}

fn all_elements(r: &RingWithInvolution) -> Vec<Elem> {
    let f = r.as_finite().unwrap();
    f.elements(1 << 20).unwrap().map(Elem::Finite).collect()
}

#[test]
fn involution_is_a_ring_automorphism_of_order_two() {
    for s in RINGS {
        let r = ring(s);
        let f = r.as_finite().unwrap();
        let xs = all_elements(&r);
        if xs.len() > 400 {
            continue;
        }
        for x in &xs {
            let Elem::Finite(a) = x else { unreachable!() };
            assert_eq!(f.involution(&f.involution(a)), *a, "{s}");
            for y in &xs {
                let Elem::Finite(b) = y else { unreachable!() };
                assert_eq!(f.involution(&f.mul(a, b)), f.mul(&f.involution(a), &f.involution(b)));
                assert_eq!(f.involution(&f.add(a, b)), f.add(&f.involution(a), &f.involution(b)));
            }
        }
        assert_eq!(f.involution(&f.one()), f.one());
    }
}

#[test]
fn norms_are_fixed() {
    for s in RINGS {
        let r = ring(s);
        for u in r.units(1 << 20).unwrap() {
            let n = r.norm(&u);
            assert_eq!(r.involution(&n), n, "{s}: N({u})");
        }
    }
}

#[test]
fn unit_group_presentations_match_counts() {
    for s in RINGS {
        let r = ring(s);
        let u = unit_group(&r, &lim()).unwrap();
        assert_eq!(u.group.order(), Some(u.order() as u64), "{s}");
        for (j, g) in u.generators().iter().enumerate() {
            // the action on coordinates is λ on elements
            let image = u.log(&r.involution(g)).unwrap();
            assert_eq!(image, u.group.act(&u.group.generator(j)), "{s}");
        }
    }
}

#[test]
fn hermitian_units_contain_the_twisted_coboundaries() {
    for s in RINGS {
        let r = ring(s);
        let units = r.units(1 << 20).unwrap();
        let herm: HashSet<Elem> = hermitian_units(&r, &lim()).unwrap().elements.into_iter().collect();
        let inv = |a: &Elem| units.iter().find(|x| r.mul(a, x) == r.one()).unwrap().clone();
        let cob: HashSet<Elem> = units.iter().map(|u| r.mul(u, &inv(&r.involution(u)))).collect();
        assert!(cob.is_subset(&herm), "{s}");
        let h1 = tate_cohomology(&unit_group(&r, &lim()).unwrap().group).h1;
        assert_eq!(cob == herm, h1.group().is_trivial(), "{s}");
        assert_eq!(herm.len() / cob.len(), h1.group().order().unwrap() as usize, "{s}");
    }
}

#[test]
fn trivial_involution_gives_units_mod_squares() {
    for s in RINGS {
        let r = ring(s);
        if !r.has_trivial_involution() {
            continue;
        }
        let units = r.units(1 << 20).unwrap();
        let squares: HashSet<Elem> = units.iter().map(|u| r.mul(u, u)).collect();
        let q = norm_fixed_quotient(&r, &lim()).unwrap();
        assert_eq!(q.group().order(), Some((units.len() / squares.len()) as u64), "{s}");
    }
}

#[test]
fn assembled_pich_agrees_with_enumeration() {
    for s in RINGS {
        let r = ring(s);
        let p = pich(&r, &lim()).unwrap();
        let b = pich_bruteforce(&r, &lim()).unwrap();
        assert!(p.group.isomorphic(&b.group), "{s}: {} vs {}", p.group, b.group);
        assert!(p.warnings.is_empty(), "{s}");
        assert!(verify_five_term(&r, &lim()).unwrap().all_exact(), "{s}");
        // isomorphism classes of forms on R biject with the kernel term
        assert_eq!(b.classes.len() as u64, p.kernel.group().order().unwrap(), "{s}");
        for (j, line) in p.generators.iter().enumerate() {
            assert_eq!(p.classify(line).unwrap(), p.group.generator(j), "{s}");
        }
    }
}

#[test]
fn trivial_involution_pich_is_two_torsion() {
    for s in RINGS {
        let r = ring(s);
        if !r.has_trivial_involution() {
            continue;
        }
        let g = pich(&r, &lim()).unwrap().group;
        assert!(g.torsion().iter().all(|&d| d == 2) && g.rank() == 0, "{s}: {g}");
    }
}

fn iso(a: &HermitianLine, b: &HermitianLine) -> bool {
    isomorphic(a, b, &lim()).unwrap().isomorphic
}

#[test]
fn tensor_and_isomorphism_are_compatible() {
    for s in ["finite:zmod5", "finite:zmod8", "finite:gf3^2:frob=1", "finite:zmod3,zmod3:swap", "finite:zmod12"] {
        let r = ring(s);
        let fixed: Vec<Elem> = r
            .units(1 << 20)
            .unwrap()
            .into_iter()
            .filter(|u| r.involution(u) == *u)
            .collect();
        let forms: Vec<_> = fixed
            .iter()
            .map(|a| make_form(&r, LineModule::Free, a.clone(), &lim()).unwrap())
            .collect();
        let unit = make_form(&r, LineModule::Free, r.one(), &lim()).unwrap();
        for a in &forms {
            assert!(iso(a, a));
            assert!(iso(&tensor(&unit, a).unwrap(), a));
            for b in &forms {
                assert_eq!(iso(a, b), iso(b, a));
                let ab = tensor(a, b).unwrap();
                assert!(iso(&ab, &tensor(b, a).unwrap()));
                for c in &forms {
                    assert!(iso(&tensor(&ab, c).unwrap(), &tensor(a, &tensor(b, c).unwrap()).unwrap()));
                    if iso(a, b) {
                        assert!(iso(&tensor(a, c).unwrap(), &tensor(b, c).unwrap()));
                        assert_eq!(iso(a, c), iso(b, c));
                    }
                }
            }
        }
    }
}

#[test]
fn products_go_to_products() {
    let pairs = [
        ("finite:zmod3", "finite:zmod5"),
        ("finite:zmod2", "finite:zmod3"),
        ("finite:gf2^2", "finite:zmod5"),
        ("finite:gf3^2:frob=1", "finite:zmod8"),
        ("finite:zmod3,zmod3:swap", "finite:zmod7"),
    ];
    for (a, b) in pairs {
        let c = product_formula_check(&ring(a), &ring(b), &lim()).unwrap();
        assert!(c.holds, "{a} x {b}: {c:?}");
    }
}

#[test]
fn pic_p_shift_rank_counts_free_orbits() {
    for s in RINGS {
        let r = ring(s);
        let p = pic_p(&r, &lim()).unwrap();
        let orbits = spec_components(&r).free_orbits().len();
        assert_eq!(p.shift_rank(), orbits, "{s}");
        assert_eq!(p.group.rank(), orbits, "{s}");
        if r.has_trivial_involution() {
            assert!(p.group.isomorphic(&p.hermitian.group), "{s}");
        }
        let degrees_ok = (0..p.group.ngens()).all(|j| {
            let e = p.element(&p.group.generator(j));
            let a = &spec_components(&r).action;
            (0..a.len()).all(|c| e.degrees[a[c]] == -e.degrees[c])
        });
        assert!(degrees_ok, "{s}");
    }
    assert_eq!(pic_p(&ring("finite:zmod3,zmod3:swap"), &lim()).unwrap().group, AbGroup::free(1));
}
