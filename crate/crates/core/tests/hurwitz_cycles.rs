mod common;

use common::{labelled_double_hurwitz_number, rd};
use trophurwitz::hurwitz::{
    hurwitz_cycle, hurwitz_fan, hurwitz_fan_via_recession, marked_hurwitz_cycle, marked_hurwitz_fan, HurwitzOptions,
    HurwitzParams, Refinement,
};
use trophurwitz::json::{complex_from_str, complex_to_string};
use trophurwitz::linalg::q;
use trophurwitz::moduli::MarkedTree;
use trophurwitz::par::Workers;
use trophurwitz::polyhedra::{check_balancing, cycles_equal, degree};

const W: Workers = Workers(0);

fn opts() -> HurwitzOptions {
    HurwitzOptions::with_workers(W)
}

#[test]
fn zero_dimensional_degrees_match_factorizations() {
    for x in [vec![1, 1, -1, -1], vec![1, 1, 1, -3], vec![2, 1, -1, -2], vec![2, 1, -1, -1, -1], vec![3, 2, -2, -3]] {
        let d = degree(&hurwitz_fan(0, &rd(&x), &opts()).unwrap()).unwrap();
        assert_eq!(d, labelled_double_hurwitz_number(&x).into(), "x = {x:?}");
    }
}

#[test]
fn generic_degree_equals_fan_degree() {
    let x = rd(&[2, 1, -1, -1, -1]);
    let g = hurwitz_cycle(&HurwitzParams::generic(x.clone(), 0).unwrap(), &opts()).unwrap();
    let f = hurwitz_fan(0, &x, &opts()).unwrap();
    assert_eq!(degree(&g).unwrap(), degree(&f).unwrap());
}

#[test]
fn recession_fan_of_generic_cycle_is_the_fan() {
    for x in [rd(&[1, 1, 1, 1, -4]), rd(&[3, -1, 2, -2, -2])] {
        let a = hurwitz_fan(1, &x, &opts()).unwrap();
        let b = hurwitz_fan_via_recession(1, &x, &opts()).unwrap();
        assert!(cycles_equal(&a, &b, W).unwrap());
    }
}

#[test]
fn marked_weights_share_factor_two() {
    let p = HurwitzParams::new(rd(&[1, 1, 1, 1, 1, -5]), 1, vec![q(0), q(1), q(2)]).unwrap();
    let m = marked_hurwitz_cycle(&p, &opts()).unwrap();
    assert!(m.weights.iter().all(|w| w % 2 == 0.into()));
    assert!(check_balancing(&m, W).unwrap().balanced);
}

#[test]
fn marked_fan_is_balanced() {
    let m = marked_hurwitz_fan(1, &rd(&[2, 1, -1, -1, -1]), &opts()).unwrap();
    assert!(check_balancing(&m, W).unwrap().balanced);
}

#[test]
fn unrefined_cells_are_coarser() {
    let p = HurwitzParams::new(rd(&[2, 2, 6, -5, -4, -1]), 2, vec![q(0), q(1)]).unwrap();
    let coarse = HurwitzOptions { refinement: Refinement::None, ..opts() };
    let a = hurwitz_cycle(&p, &coarse).unwrap();
    let b = hurwitz_cycle(&p, &opts()).unwrap();
    assert!(a.num_maximal() < b.num_maximal());
}

#[test]
fn restriction_to_one_cone() {
    let p = HurwitzParams::new(rd(&[2, 2, 6, -5, -4, -1]), 2, vec![q(0), q(1)]).unwrap();
    let t = MarkedTree::from_subsets(6, &[&[1, 2], &[4, 5, 6], &[5, 6]]).unwrap();
    let o = HurwitzOptions { restrict: Some(t), refinement: Refinement::None, ..opts() };
    assert_eq!(marked_hurwitz_cycle(&p, &o).unwrap().num_maximal(), 6);
}

#[test]
fn json_roundtrip_preserves_balancing() {
    let h = hurwitz_cycle(&HurwitzParams::generic(rd(&[1, 1, 1, 1, -4]), 1).unwrap(), &opts()).unwrap();
    let s = complex_to_string(&h);
    let back = complex_from_str(&s).unwrap();
    assert_eq!(back, h);
    assert!(check_balancing(&back, W).unwrap().balanced);
}
