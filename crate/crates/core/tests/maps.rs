//! Chain-level identities of the maps between graphs: edge deletion,
//! glueing, splitting, and the verification report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use koszul_edge::classes::{
    component_exponents, delete_edge_u, delete_edge_v, figure_eight_split, glue_map, split_map, star, StarSpec,
};
use koszul_edge::verify::run_suite;
use koszul_edge::{default_box, ChainElement, EdgeSet, Field, Graph, HomologyEngine, Multidegree, QuotientSpec, Suite};

const Q: Field = Field::Rational;

fn random_chain(rng: &mut ChaCha8Rng, g: &Graph, degree: usize) -> ChainElement {
    let n = g.vertex_count();
    let mut z = ChainElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut set = EdgeSet::EMPTY;
        while set.len() < degree.min(g.edge_count()) {
            set = set.with(rng.gen_range(0..g.edge_count()));
        }
        let mono = Multidegree((0..n).map(|_| rng.gen_range(0..=1)).collect());
        z = z.add(&ChainElement::term(Q.from_i64(rng.gen_range(-3..=3)), mono, set));
    }
    z
}

#[test]
fn v_kills_the_image_of_u_and_recovers_the_cofactor() {
    let g = Graph::cycle(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let e = rng.gen_range(0..g.edge_count());
        let small = g.delete_edge(e).unwrap().0;
        let degree = rng.gen_range(0..=3);
        let z = random_chain(&mut rng, &small, degree);
        assert!(delete_edge_v(&delete_edge_u(&z, &g, e), &g, e).is_zero());
        // v(e ∧ u(z)) = z
        let e_chain = ChainElement::wedge_of_edges(Q, 6, &[e]).unwrap();
        assert_eq!(delete_edge_v(&e_chain.wedge(&delete_edge_u(&z, &g, e)), &g, e), z);
    }
}

/// With `z = e ∧ v(z) + z₂`: `v(z ∧ w) = v(z) ∧ w₂ + (−1)^{|z|} z₂ ∧ v(w)`.
#[test]
fn v_product_rule() {
    let g = Graph::cycle(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let e = rng.gen_range(0..g.edge_count());
        let p = rng.gen_range(0..=2);
        let z = random_chain(&mut rng, &g, p);
        let degree = rng.gen_range(0..=2);
        let w = random_chain(&mut rng, &g, degree);
        let free_part = |c: &ChainElement| {
            let e_chain = ChainElement::wedge_of_edges(Q, 5, &[e]).unwrap();
            c.sub(&e_chain.wedge(&delete_edge_u(&delete_edge_v(c, &g, e), &g, e)))
        };
        let (z1, z2) = (delete_edge_u(&delete_edge_v(&z, &g, e), &g, e), free_part(&z));
        let (w1, w2) = (delete_edge_u(&delete_edge_v(&w, &g, e), &g, e), free_part(&w));
        let second = z2.wedge(&w1);
        let expected = z1.wedge(&w2).add(&if p % 2 == 0 { second } else { second.neg() });
        let got = delete_edge_u(&delete_edge_v(&z.wedge(&w), &g, e), &g, e);
        assert_eq!(got, expected);
    }
}

#[test]
fn u_and_v_commute_with_the_differential_up_to_sign() {
    let g = Graph::cycle(5).unwrap();
    let none = QuotientSpec::none();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let e = rng.gen_range(0..g.edge_count());
        let small = g.delete_edge(e).unwrap().0;
        let degree = rng.gen_range(0..=3);
        let z = random_chain(&mut rng, &small, degree);
        assert_eq!(delete_edge_u(&z.differential(&small, &none), &g, e), delete_edge_u(&z, &g, e).differential(&g, &none));
        let degree = rng.gen_range(1..=3);
        let big = random_chain(&mut rng, &g, degree);
        let lhs = delete_edge_v(&big.differential(&g, &none), &g, e);
        let rhs = delete_edge_v(&big, &g, e).differential(&small, &none).neg();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn glueing_sends_cycles_to_cycles() {
    let p5 = Graph::path(5).unwrap();
    let engine = HomologyEngine::new(p5.clone(), Q);
    for (i, mu) in engine.strata_in_box(&default_box(&p5)) {
        for z in engine.homology(i, &mu).unwrap().representatives() {
            let (gm, image) = glue_map(&z, &p5, 0, 4).unwrap();
            assert_eq!(gm.glued.edge_count(), 4);
            assert!(image.differential(&gm.glued, &QuotientSpec::none()).is_zero());
        }
    }
}

#[test]
fn split_of_a_center_star_has_sign_set_by_the_alpha_side() {
    let (g, assignment, sm) = figure_eight_split(4, 4).unwrap();
    let split = HomologyEngine::new(sm.split.clone(), Q);
    let a = sm.split.neighbors(sm.alpha);
    let b = sm.split.neighbors(sm.beta);
    for r in [vec![a[0]], a.clone()] {
        for s in [vec![b[0]], b.clone()] {
            let leaves: Vec<usize> = r.iter().chain(&s).copied().collect();
            let z = star(&g, Q, &StarSpec::new(assignment.gamma, leaves)).unwrap();
            let (_, out) = split_map(&z, &g, &assignment).unwrap();
            let prod = star(&sm.split, Q, &StarSpec::new(sm.alpha, r.clone()))
                .unwrap()
                .wedge(&star(&sm.split, Q, &StarSpec::new(sm.beta, s.clone())).unwrap());
            let expected = if r.len() % 2 == 0 { prod } else { prod.neg() };
            assert!(split.components_are_boundaries(&out.sub(&expected)).unwrap(), "r={r:?} s={s:?}");
        }
    }
}

/// `β^k v_{rα+k, rβ} = α^k v_{rα, rβ+k}` between components of one split.
#[test]
fn split_components_are_linked() {
    let (g, assignment, sm) = figure_eight_split(4, 4).unwrap();
    let glued = HomologyEngine::new(g.clone(), Q);
    let split = HomologyEngine::new(sm.split.clone(), Q);
    let mut pairs = 0;
    for (i, mu) in glued.strata_in_box(&default_box(&g)) {
        if mu.get(assignment.gamma) < 2 {
            continue;
        }
        for z in glued.homology(i, &mu).unwrap().representatives() {
            let (_, out) = split_map(&z, &g, &assignment).unwrap();
            let comps = component_exponents(&out, &sm);
            for (ra, rb, hi) in &comps {
                for (ra2, rb2, lo) in &comps {
                    if ra > ra2 && ra + rb == ra2 + rb2 {
                        let (mut l, mut r) = (hi.clone(), lo.clone());
                        for _ in 0..ra - ra2 {
                            l = l.mul_var(sm.beta);
                            r = r.mul_var(sm.alpha);
                        }
                        assert!(split.classes_equal(&l, &r).unwrap());
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 0);
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    for suite in [Suite::Paths, Suite::Kunneth, Suite::Trees] {
        let a = run_suite(suite, Q).unwrap().without_timing().to_json();
        let b = run_suite(suite, Q).unwrap().without_timing().to_json();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
