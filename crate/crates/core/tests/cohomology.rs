mod common;

use common::*;
use linf_core::cochain::{bracket, ArityWindow, Cochain};
use linf_core::deform::{cohomology, stable_arity, Counts};
use linf_core::Error;

fn up_to(n: u32) -> ArityWindow {
    ArityWindow::up_to(n).unwrap()
}

#[test]
fn dimensions_are_two_l_minus_two() {
    for l in 1..=5u32 {
        for d in [qe(l), qf(l)] {
            let h = cohomology(&d, up_to(l + 4)).unwrap();
            let n = l as usize - 1;
            assert_eq!(h.dimension(), Counts { even: n, odd: n }, "L={l}");
            assert_eq!(h.dimension().total(), 2 * n);
        }
    }
}

#[test]
fn per_arity_ranks_are_consistent() {
    for l in 1..=4u32 {
        let h = cohomology(&qe(l), up_to(l + 4)).unwrap();
        let mut total = Counts::default();
        for a in h.dimensions() {
            assert_eq!(a.cohomology.total() + a.coboundaries.total(), a.cocycles.total(), "arity {}", a.arity);
            if a.arity <= h.stable_arity() {
                total.even += a.cohomology.even;
                total.odd += a.cohomology.odd;
            }
        }
        assert_eq!(total, h.dimension());
    }
}

#[test]
fn delta_basis_consists_of_cocycles_outside_the_coboundaries() {
    let h = cohomology(&qe(3), up_to(7)).unwrap();
    let d = h.codifferential().clone();
    for c in h.delta_basis() {
        assert!(bracket(&d, c, h.window()).unwrap().truncate(up_to(h.stable_arity())).is_zero());
        let s = h.split(c).unwrap();
        assert_eq!(s.delta.len(), 1);
        assert!(s.non_cocycle.is_zero());
    }
    for c in h.coboundary_basis() {
        let s = h.split(c).unwrap();
        assert!(s.delta.is_empty());
    }
}

#[test]
fn preimages_map_onto_coboundaries() {
    let h = cohomology(&qf(3), up_to(7)).unwrap();
    for (b, p) in h.coboundary_basis().iter().zip(h.preimages()) {
        let image = bracket(h.codifferential(), p, h.window()).unwrap();
        assert_eq!(image.truncate(up_to(h.stable_arity())), b.truncate(up_to(h.stable_arity())));
    }
}

#[test]
fn split_reconstructs_its_input() {
    let h = cohomology(&qe(3), up_to(7)).unwrap();
    let c = sum(&[(2, h_e(1, 3)), (1, pf(4)), (-3, pe(2)), (1, pe(5))]);
    let s = h.split(&c).unwrap();
    let mut rebuilt = bracket(h.codifferential(), &s.preimage, h.window()).unwrap().add(&s.non_cocycle).unwrap();
    for (&i, x) in &s.delta {
        rebuilt = rebuilt.add(&h.delta_basis()[i].scale(x)).unwrap();
    }
    let k = up_to(stable_arity(h.codifferential(), up_to(h.stable_arity())));
    assert_eq!(rebuilt.truncate(k), c.truncate(k));
}

#[test]
fn zero_two_psi1_deltas() {
    let h = cohomology(&psi02(1), up_to(2)).unwrap();
    assert_eq!(h.delta_basis(), [phi02(1, 1), phi02(2, 1)]);
    assert_eq!(h.dimension(), Counts { even: 2, odd: 0 });
}

#[test]
fn zero_two_trivial_differential() {
    let h = cohomology(&Cochain::zero(&plane_odd()), up_to(2)).unwrap();
    assert_eq!(h.dimension(), Counts { even: 4, odd: 2 });
    assert!(h.coboundary_basis().is_empty());
}

#[test]
fn stable_arity_of_a_window() {
    assert_eq!(stable_arity(&qe(3), up_to(7)), 5);
    assert_eq!(stable_arity(&psi02(1), up_to(2)), 2);
    assert_eq!(stable_arity(&Cochain::zero(&line_odd()), up_to(1)), 1);
}

#[test]
fn rejects_non_codifferentials() {
    let d = pe(2);
    assert!(matches!(cohomology(&d, up_to(4)), Err(Error::NotCodifferential(_))));
    let d = qe(2).add(&qf(1)).unwrap();
    assert!(matches!(cohomology(&d, up_to(4)), Err(Error::NotCodifferential(_))));
}
