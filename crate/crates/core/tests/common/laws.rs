//! Semiring and order laws for slope multisets, each run over `CASES`
//! deterministic random cases.

use num_traits::Zero;
use ordinary_primes::polygon::{Rational, SlopeMultiset};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::{leq_oracle, multiset, nonempty_multiset, raised_pair, runner};

pub type Law = fn() -> Result<(), String>;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

fn triple() -> impl Strategy<Value = (SlopeMultiset, SlopeMultiset, SlopeMultiset)> {
    (multiset(), multiset(), multiset())
}

pub fn oplus_commutative() -> Result<(), String> {
    run((multiset(), multiset()), |(s, t)| {
        prop_assert_eq!(s.oplus(&t), t.oplus(&s));
        Ok(())
    })
}

pub fn otimes_commutative() -> Result<(), String> {
    run((multiset(), multiset()), |(s, t)| {
        prop_assert_eq!(s.otimes(&t), t.otimes(&s));
        Ok(())
    })
}

pub fn oplus_associative() -> Result<(), String> {
    run(triple(), |(s, t, u)| {
        prop_assert_eq!(s.oplus(&t).oplus(&u), s.oplus(&t.oplus(&u)));
        Ok(())
    })
}

pub fn otimes_associative() -> Result<(), String> {
    run(triple(), |(s, t, u)| {
        prop_assert_eq!(s.otimes(&t).otimes(&u), s.otimes(&t.otimes(&u)));
        Ok(())
    })
}

pub fn distributive() -> Result<(), String> {
    run(triple(), |(s, t, u)| {
        prop_assert_eq!(s.otimes(&t.oplus(&u)), s.otimes(&t).oplus(&s.otimes(&u)));
        prop_assert_eq!(t.oplus(&u).otimes(&s), t.otimes(&s).oplus(&u.otimes(&s)));
        Ok(())
    })
}

pub fn neutral_elements() -> Result<(), String> {
    run(multiset(), |s| {
        let zero = SlopeMultiset::empty();
        let one = SlopeMultiset::unit();
        prop_assert_eq!(s.oplus(&zero), s.clone());
        prop_assert_eq!(s.otimes(&one), s.clone());
        prop_assert_eq!(s.otimes(&zero), zero);
        prop_assert_eq!(s.dual().dual(), s.clone());
        Ok(())
    })
}

pub fn rank_homomorphism() -> Result<(), String> {
    run((multiset(), multiset()), |(s, t)| {
        prop_assert_eq!(s.oplus(&t).rank(), s.rank() + t.rank());
        prop_assert_eq!(s.otimes(&t).rank(), s.rank() * t.rank());
        prop_assert_eq!(s.dual().rank(), s.rank());
        Ok(())
    })
}

pub fn integral_laws() -> Result<(), String> {
    run((multiset(), multiset()), |(s, t)| {
        let rank = |m: &SlopeMultiset| Rational::from_integer(m.rank().into());
        prop_assert_eq!(s.oplus(&t).integral(), s.integral() + t.integral());
        prop_assert_eq!(s.otimes(&t).integral(), rank(&t) * s.integral() + rank(&s) * t.integral());
        prop_assert_eq!(s.dual().integral() + s.integral(), Rational::zero());
        Ok(())
    })
}

pub fn leq_matches_definition() -> Result<(), String> {
    let same_rank = (1usize..5).prop_flat_map(|n| {
        let v = || prop::collection::vec(super::slope(), n).prop_map(SlopeMultiset::new);
        (v(), v())
    });
    run(same_rank, |(s, t)| {
        prop_assert_eq!(s.leq(&t), leq_oracle(&s, &t));
        prop_assert!(s.leq(&s));
        Ok(())
    })
}

pub fn order_monotone() -> Result<(), String> {
    run((raised_pair(false), multiset()), |((s, s2), t)| {
        prop_assert!(leq_oracle(&s, &s2), "generator produced {} !<= {}", s, s2);
        prop_assert!(s.leq(&s2));
        prop_assert!(s.oplus(&t).leq(&s2.oplus(&t)));
        prop_assert!(s.otimes(&t).leq(&s2.otimes(&t)));
        Ok(())
    })
}

/// With equal endpoints the involution keeps the order.
pub fn dual_under_equal_endpoints() -> Result<(), String> {
    run((raised_pair(true), nonempty_multiset()), |((s, s2), _)| {
        prop_assert!(s.same_endpoint(&s2));
        prop_assert!(s.leq(&s2));
        prop_assert!(s.dual().leq(&s2.dual()));
        prop_assert!(s.leq_strict(&s2) && s.dual().leq_strict(&s2.dual()));
        Ok(())
    })
}

pub const ALL: &[(&str, Law)] = &[
    ("oplus commutative", oplus_commutative),
    ("otimes commutative", otimes_commutative),
    ("oplus associative", oplus_associative),
    ("otimes associative", otimes_associative),
    ("distributive", distributive),
    ("neutral elements and involution", neutral_elements),
    ("rank homomorphism", rank_homomorphism),
    ("integral laws", integral_laws),
    ("leq matches partial sums", leq_matches_definition),
    ("order monotone under oplus/otimes", order_monotone),
    ("dual keeps order at equal endpoints", dual_under_equal_endpoints),
];
