//! Frozen dimensions and ranks for the standard configurations, each
//! cross-checked against the Bareiss oracle in `support` before being
//! asserted as a fixture.  If the library's elimination and the oracle ever
//! disagree, these fail before any theorem check gets to use the numbers.

mod support;

use cb_core::cb::{cb_propagation, Split};
use cb_core::detloci::{det_cb_check, rho_matrix};
use cb_core::koszul::{GradedComplex, KoszulVariant};
use cb_core::scenario::{
    build_det_eleven_points, build_line_grid, build_twisted_cubic, ELEVEN_COLLINEAR_PAIR,
};
use cb_core::vanishing::{h0, Condition, LinearSystem};
use cb_core::Field;
use support::bareiss_rank;

fn jet_conditions(sc: &cb_core::cb::CIScenario, order: usize) -> Vec<Condition> {
    let w = sc.excess().expect("scenario has an excess curve");
    vec![Condition::subvariety_jet(w.param().clone(), order)]
}

#[test]
fn cubics_constrained_by_double_jets_vanish() {
    // Degree-3 forms with order-2 jets along the twisted cubic: the
    // condition matrix has full rank 20, so only the zero form remains.
    let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
    let conds = jet_conditions(&sc, 2);
    let sys = LinearSystem::compile(Field::Q, 3, 3, &conds).unwrap();
    assert_eq!(bareiss_rank(sys.matrix()), 20);
    assert_eq!(sys.rank(), 20);
    assert_eq!(h0(Field::Q, 3, 3, &conds).unwrap(), 0);
}

#[test]
fn quartics_through_the_cubic_count() {
    // h0(I_C(4)) on P^3: 35 coefficients, 13 independent conditions.
    let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
    let conds = jet_conditions(&sc, 1);
    let sys = LinearSystem::compile(Field::Q, 3, 4, &conds).unwrap();
    assert_eq!(bareiss_rank(sys.matrix()), 13);
    assert_eq!(sys.solution_dim(), 22);
}

#[test]
fn grid_complex_ranks() {
    // 2x3 grid, full Koszul at t = 6: D_1 has the rank of the degree-6
    // piece of the ideal of the six points, and the homology is
    // concentrated in position 0 with dimension #Z.
    let sc = build_line_grid(Field::Q, 2, 3, 11).unwrap();
    let cx = GradedComplex::build(&sc, 6, KoszulVariant::Full).unwrap();
    assert_eq!(cx.term_dim(0), 28);
    assert_eq!(bareiss_rank(cx.differential(1)), 22);
    // The top term (degree-1 forms) injects: rank = dim = 3.
    assert_eq!(bareiss_rank(cx.differential(2)), 3);
    assert_eq!(cx.homology_dims(), vec![0, 0, 6]);
    let z_conds: Vec<Condition> =
        sc.points().iter().map(|z| Condition::point(z.clone())).collect();
    let point_sys = LinearSystem::compile(Field::Q, 2, 6, &z_conds).unwrap();
    assert_eq!(bareiss_rank(point_sys.matrix()), 6);
}

#[test]
fn twisted_cubic_full_complex_ranks_at_six() {
    // Term dimensions 84 / 74 / 10 / 0 and differential ranks 62 / 10: the
    // graded homology [0, 0, 2, 22] records the excess curve (h1 > 0) and a
    // cokernel far above #Z = 3.
    let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
    let cx = GradedComplex::build(&sc, 6, KoszulVariant::Full).unwrap();
    assert_eq!(
        (cx.term_dim(0), cx.term_dim(1), cx.term_dim(2), cx.term_dim(3)),
        (84, 74, 10, 0)
    );
    assert_eq!(bareiss_rank(cx.differential(1)), 62);
    assert_eq!(bareiss_rank(cx.differential(2)), 10);
    assert_eq!(cx.homology_dims(), vec![0, 0, 2, 22]);
}

#[test]
fn twisted_cubic_skoda_complex_ranks_at_six() {
    let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();

    // Position 0 carries order-2 jets: 84 coefficients minus 47 independent
    // jet conditions.
    let jets2 = jet_conditions(&sc, 2);
    let jet_sys = LinearSystem::compile(Field::Q, 3, 6, &jets2).unwrap();
    assert_eq!(bareiss_rank(jet_sys.matrix()), 47);

    let cx = GradedComplex::build(&sc, 6, KoszulVariant::Skoda).unwrap();
    assert_eq!(
        (cx.term_dim(0), cx.term_dim(1), cx.term_dim(2), cx.term_dim(3)),
        (37, 44, 10, 0)
    );
    assert_eq!(bareiss_rank(cx.differential(1)), 34);
    assert_eq!(bareiss_rank(cx.differential(2)), 10);
    assert_eq!(cx.homology_dims(), vec![0, 0, 0, 3]);
    // Tail: the image of D_1 fills the jet-plus-points space exactly.
    assert_eq!(cx.tail_image_rank(), 34);
    assert_eq!(cx.skoda_tail_target_dim().unwrap(), 34);
}

#[test]
fn naive_witness_is_a_quintic_through_the_rest() {
    // The failing omission at degree 5 with order-1 jets yields a witness
    // vanishing along C and at the other points but not at the omitted one.
    let sc = build_twisted_cubic(Field::Q, 5, &[1, 2, 3], 7).unwrap();
    let jets1 = jet_conditions(&sc, 1);
    let rep = cb_propagation(&sc, &jets1, 5, 0).unwrap();
    assert!(!rep.holds);
    let w = rep.witness.as_ref().expect("failure carries a witness");
    assert_eq!(w.degree(), 5);
    assert!(!w.evaluate(&sc.points()[0]).unwrap().is_zero());
    for z in &sc.points()[1..] {
        assert!(w.evaluate(z).unwrap().is_zero());
    }
    let pulled = sc.excess().unwrap().param().pullback(w).unwrap();
    assert!(pulled.is_zero());
}

#[test]
fn eleven_point_cubic_counts() {
    // Cubics through all eleven points: just the triangle cubic.  Removing
    // the collinear pair frees exactly one more cubic.
    let sc = build_det_eleven_points(Field::Q, 3, true).unwrap();
    let all: Vec<Condition> =
        sc.points().iter().map(|z| Condition::point(z.clone())).collect();
    let sys_all = LinearSystem::compile(Field::Q, 2, 3, &all).unwrap();
    assert_eq!(bareiss_rank(sys_all.matrix()), 9);
    assert_eq!(sys_all.solution_dim(), 1);

    let keep: Vec<Condition> = sc
        .points()
        .iter()
        .enumerate()
        .filter(|(i, _)| !ELEVEN_COLLINEAR_PAIR.contains(i))
        .map(|(_, z)| Condition::point(z.clone()))
        .collect();
    let sys_rest = LinearSystem::compile(Field::Q, 2, 3, &keep).unwrap();
    assert_eq!(bareiss_rank(sys_rest.matrix()), 8);
    assert_eq!(sys_rest.solution_dim(), 2);

    // The kernel points of the designated pair coincide, so the evaluation
    // matrix on lines of P^1 drops to rank 1.
    let pair: Vec<_> =
        ELEVEN_COLLINEAR_PAIR.iter().map(|&i| sc.points()[i].clone()).collect();
    let rho = rho_matrix(sc.matrix(), &pair, 1).unwrap();
    assert_eq!(bareiss_rank(&rho), 1);

    let rep = det_cb_check(&sc).unwrap();
    assert_eq!((rep.c1, rep.c2), (1, 1));
}

#[test]
fn split_complement_is_exact() {
    let s = Split::new(11, ELEVEN_COLLINEAR_PAIR.to_vec()).unwrap();
    assert_eq!(s.z2().len(), 9);
    assert!(!s.z2().contains(&3));
    assert!(!s.z2().contains(&7));
}
