mod common;

use ordinary_primes::galois::{BlockSystem, Extremum, PermGroupAction, Permutation};
use ordinary_primes::polygon::rational;

#[test]
fn fixtures() {
    common::checks::galois_fixtures().unwrap();
}

#[test]
fn klein_chebotarev_fraction() {
    let g = PermGroupAction::parse("(0 1)(2 3);(0 2)(1 3)", 4).unwrap();
    assert_eq!(g.order().unwrap(), 4);
    assert_eq!(g.chebotarev_fraction(Permutation::bisects).unwrap(), rational(3, 4));
}

#[test]
fn cyclic_six_subgroup_slopes() {
    // the full rotation group has a 6-cycle; its index-2 subgroup does not
    assert_eq!(PermGroupAction::cyclic(6).slope().unwrap(), rational(0, 1));
    let sub = PermGroupAction::parse("(0 2 4)(1 3 5)", 6).unwrap();
    assert_eq!(sub.lambda(Extremum::Max).unwrap(), 3);
    // every nontrivial element has two 3-cycles, so λ′ = 3 as well
    assert_eq!(sub.slope_prime().unwrap(), rational(1, 2));
    assert_eq!(PermGroupAction::trivial(6).slope_prime().unwrap(), rational(5, 6));
}

#[test]
fn block_action_of_dihedral() {
    // D8 on the vertices of a square permutes the two diagonals
    let g = PermGroupAction::parse("(0 1 2 3);(1 3)", 4).unwrap();
    let blocks = vec![vec![0, 2], vec![1, 3]];
    let induced = g.induced_block_action(&blocks).unwrap();
    assert_eq!(induced.degree(), 2);
    assert_eq!(induced.order().unwrap(), 2);
    let sys = BlockSystem::new(4, &blocks).unwrap();
    assert_eq!(sys.block_size(), 2);
    assert!(sys.induced(&Permutation::parse("(1 3)", 4).unwrap()).unwrap().is_identity());
}

#[test]
fn slope_is_monotone_in_subgroups() {
    // a smaller group has shorter orbits, so a larger slope
    let full = PermGroupAction::symmetric(4);
    let d8 = PermGroupAction::dihedral(4);
    let klein = PermGroupAction::klein_regular();
    let triv = PermGroupAction::trivial(4);
    let s: Vec<_> = [&full, &d8, &klein, &triv].iter().map(|g| g.slope().unwrap()).collect();
    assert!(s.windows(2).all(|w| w[0] <= w[1]), "{s:?}");
}
