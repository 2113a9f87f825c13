mod common;

use autoreduce::frame::{self, HullMode};
use autoreduce::linalg::{
    nullspace_basis, rank, rref, simplex_feasible_nonneg, simplex_maximize, solve_linear,
    Constraint, LpOutcome, LpProblem, Matrix, Relation,
};
use autoreduce::oracles::{
    equiv_exact, equiv_up_to, redundancy_bruteforce, EquivQuery, EquivVerdict,
};
use autoreduce::rational::{self, int, ratio, Rational};
use autoreduce::table::{check_consistency_nullspace, make_consistent, ObservationTable};
use autoreduce::{format, reduce, Theory, Word};
use common::rng;
use num::{One, Zero};
use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeSet;

fn theory_from(k: u8) -> Theory {
    [Theory::Convex, Theory::Linear, Theory::Conic][k as usize % 3]
}

fn random_matrix(r: &mut common::Rand, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if r.gen_bool(0.6) {
                m[(i, j)] = ratio(r.gen_range(-5..=5), r.gen_range(1..=4));
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn obs_is_linear_in_the_state_vector(seed in any::<u64>(), k in 0u8..3) {
        let mut r = rng(seed);
        let aut = common::small_automaton(&mut r, theory_from(k));
        let u = common::state_vector(&mut r, &aut);
        let v = common::state_vector(&mut r, &aut);
        let (alpha, beta) = (ratio(r.gen_range(-3..=3), 2), ratio(r.gen_range(-3..=3), 5));
        let mix = u.combine(&alpha, &v, &beta);
        for w in Word::all_up_to(aut.alphabet().len(), 4) {
            prop_assert_eq!(aut.obs(&mix, &w), &alpha * aut.obs(&u, &w) + &beta * aut.obs(&v, &w));
        }
    }

    #[test]
    fn obs_of_prefixed_word_steps_first(seed in any::<u64>(), k in 0u8..3) {
        let mut r = rng(seed);
        let aut = common::small_automaton(&mut r, theory_from(k));
        let v = common::state_vector(&mut r, &aut);
        for w in Word::all_up_to(aut.alphabet().len(), 3) {
            for a in 0..aut.alphabet().len() {
                prop_assert_eq!(aut.obs(&v, &w.prepend(a)), aut.obs(&aut.step_index(&v, a), &w));
            }
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), k in 0u8..3) {
        let aut = common::small_automaton(&mut rng(seed), theory_from(k));
        let text = format::emit(&aut);
        let back = format::parse(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &aut);
        prop_assert_eq!(format::emit(&back), text);
    }

    #[test]
    fn words_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let aut = common::small_automaton(&mut r, Theory::Convex);
        for w in common::words(&mut r, aut.alphabet().len(), 6) {
            prop_assert_eq!(aut.parse_word(&aut.render_word(&w)).unwrap(), w);
        }
    }

    #[test]
    fn rref_and_nullspace_invariants(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let m = random_matrix(&mut rng(seed), rows, cols);
        let (r, pivots) = rref(&m);
        prop_assert_eq!(rref(&r).0, r.clone());
        prop_assert_eq!(rank(&m), pivots.len());
        for (i, &p) in pivots.iter().enumerate() {
            let unit: Vec<Rational> = (0..rows).map(|k| if k == i { int(1) } else { int(0) }).collect();
            prop_assert_eq!(r.column(p), unit);
        }
        let kernel = nullspace_basis(&m);
        prop_assert_eq!(kernel.len(), cols - pivots.len());
        for x in &kernel {
            prop_assert!(m.mul_vec(x).iter().all(Zero::is_zero));
        }
        let mut stacked = Matrix::zeros(0, cols);
        for x in &kernel {
            stacked = stacked.with_row(x).unwrap();
        }
        prop_assert_eq!(rank(&stacked), kernel.len());
    }

    #[test]
    fn solve_linear_reproduces_the_right_hand_side(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, rows, cols);
        let x0: Vec<Rational> = (0..cols).map(|_| ratio(r.gen_range(-3..=3), r.gen_range(1..=3))).collect();
        let b = m.mul_vec(&x0);
        let x = solve_linear(&m, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn simplex_optimum_is_feasible_and_dominates(seed in any::<u64>(), vars in 1usize..5, rows in 0usize..5) {
        let mut r = rng(seed);
        let free: BTreeSet<usize> = (0..vars).filter(|_| r.gen_bool(0.3)).collect();
        let x0: Vec<Rational> = (0..vars)
            .map(|j| {
                let lo = if free.contains(&j) { -3 } else { 0 };
                ratio(r.gen_range(lo..=3), r.gen_range(1..=3))
            })
            .collect();
        let mut constraints = Vec::new();
        for j in 0..vars {
            let mut e = vec![int(0); vars];
            e[j] = int(1);
            constraints.push(Constraint { coefficients: e.clone(), relation: Relation::Le, bound: int(5) });
            if free.contains(&j) {
                constraints.push(Constraint { coefficients: e, relation: Relation::Ge, bound: int(-5) });
            }
        }
        for _ in 0..rows {
            let c: Vec<Rational> = (0..vars).map(|_| ratio(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
            let at = rational::dot(&c, &x0);
            let slack = ratio(r.gen_range(0..=3), 2);
            let (relation, bound) = match r.gen_range(0..3) {
                0 => (Relation::Le, at + slack),
                1 => (Relation::Ge, at - slack),
                _ => (Relation::Eq, at),
            };
            constraints.push(Constraint { coefficients: c, relation, bound });
        }
        let objective: Vec<Rational> = (0..vars).map(|_| ratio(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
        let nonneg = (0..vars).filter(|j| !free.contains(j)).collect();
        let problem = LpProblem::new(objective.clone(), constraints, nonneg).unwrap();
        prop_assert!(problem.is_feasible(&x0));
        match simplex_maximize(&problem) {
            LpOutcome::Optimum { value, point } => {
                prop_assert!(problem.is_feasible(&point));
                prop_assert_eq!(&value, &rational::dot(&objective, &point));
                prop_assert!(value >= rational::dot(&objective, &x0));
            }
            other => prop_assert!(false, "expected an optimum, got {:?}", other),
        }
    }

    #[test]
    fn nonnegative_feasibility_returns_a_solution(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..6) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, rows, cols);
        let x0: Vec<Rational> = (0..cols).map(|_| ratio(r.gen_range(0..=3), r.gen_range(1..=3))).collect();
        let b = m.mul_vec(&x0);
        let x = simplex_feasible_nonneg(&m, &b).unwrap();
        prop_assert!(x.iter().all(rational::is_nonnegative));
        prop_assert_eq!(m.mul_vec(&x), b.clone());
        // Shifting one entry below what any nonnegative x can reach makes it infeasible.
        if (0..cols).all(|j| m[(0, j)] >= int(0)) {
            let mut worse = b;
            worse[0] = int(-1);
            prop_assert!(simplex_feasible_nonneg(&m, &worse).is_none());
        }
    }

    #[test]
    fn frame_generates_and_is_minimal(seed in any::<u64>(), dim in 1usize..5, count in 1usize..9) {
        let mut r = rng(seed);
        let pts = common::conic_points(&mut r, dim, count);
        let gens = frame::conical_frame(&pts);
        let basis = pts.select_columns(&gens);
        for c in 0..pts.cols() {
            let target = pts.column(c);
            if gens.contains(&c) {
                prop_assert!(!frame::membership_oracle(&pts, c, HullMode::Conic));
            } else {
                let x = simplex_feasible_nonneg(&basis, &target).unwrap();
                prop_assert_eq!(basis.mul_vec(&x), target);
            }
        }
    }

    #[test]
    fn extreme_points_are_idempotent(seed in any::<u64>(), dim in 1usize..5, count in 1usize..9) {
        let mut r = rng(seed);
        let pts = common::points(&mut r, dim, count, false);
        let vertices = frame::convex_extreme_points(&pts);
        let again = frame::convex_extreme_points(&pts.select_columns(&vertices));
        prop_assert_eq!(again, (0..vertices.len()).collect::<Vec<_>>());
        // no vertex is the midpoint of two others
        for &i in &vertices {
            for &j in &vertices {
                for &k in &vertices {
                    if i != j && j < k && i != k {
                        let mid: Vec<Rational> = pts.column(j).iter().zip(pts.column(k))
                            .map(|(a, b)| (a + b) / int(2)).collect();
                        prop_assert_ne!(pts.column(i), mid);
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_columns_keep_tables_consistent(seed in any::<u64>(), k in 0u8..3) {
        let aut = common::small_automaton(&mut rng(seed), theory_from(k));
        let table = make_consistent(&aut);
        let mut words = table.words().to_vec();
        for a in 0..aut.alphabet().len() {
            for e in table.words() {
                let w = e.prepend(a);
                if !words.contains(&w) {
                    words.push(w);
                }
            }
        }
        let bigger = ObservationTable::build(&aut, words).unwrap();
        for a in 0..aut.alphabet().len() {
            prop_assert!(check_consistency_nullspace(&bigger, a).is_consistent());
        }
    }

    #[test]
    fn reduction_is_deterministic_and_theory_preserving(seed in any::<u64>(), k in 0u8..3) {
        let aut = common::small_automaton(&mut rng(seed), theory_from(k));
        let first = reduce(&aut).unwrap();
        let second = reduce(&aut).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert!(first.reduced.num_states() <= aut.num_states());
        // the reduced automaton passed the same validation as any parsed document
        let reparsed = format::parse(format::emit(&first.reduced).as_bytes()).unwrap();
        prop_assert_eq!(&reparsed, &first.reduced);
        for q in 0..aut.num_states() {
            prop_assert!(first.rewrite.expansion_vector(q).check(aut.theory()).is_ok());
        }
    }

    #[test]
    fn redundant_states_are_removed(seed in any::<u64>(), k in 0u8..3) {
        let aut = common::small_automaton(&mut rng(seed), theory_from(k));
        let redundant = aut
            .states()
            .iter()
            .filter(|s| redundancy_bruteforce(&aut, s).unwrap().is_some())
            .count();
        let result = reduce(&aut).unwrap();
        prop_assert_eq!(redundant > 0, result.reduced.num_states() < aut.num_states());
        if aut.theory() != Theory::Convex {
            // for linear and conic automata every non-base state is redundant
            prop_assert!(aut.num_states() - result.reduced.num_states() <= redundant);
        }
    }

    #[test]
    fn exact_equality_implies_bounded_equality(seed in any::<u64>(), linear in any::<bool>()) {
        let mut r = rng(seed);
        let theory = if linear { Theory::Linear } else { Theory::Convex };
        let aut = common::small_automaton(&mut r, theory);
        let u = common::state_vector(&mut r, &aut);
        let v = common::state_vector(&mut r, &aut);
        let q = EquivQuery::new(&aut, u, &aut, v).unwrap();
        match equiv_exact(&q).unwrap() {
            EquivVerdict::Equal => prop_assert_eq!(equiv_up_to(&q, 9), EquivVerdict::Equal),
            EquivVerdict::Counterexample(w) => {
                prop_assert!(!q.difference(&w).is_zero());
                for shorter in Word::all_up_to(aut.alphabet().len(), w.len()) {
                    if shorter == w {
                        break;
                    }
                    prop_assert!(q.difference(&shorter).is_zero());
                }
            }
        }
    }
}

#[test]
fn equal_rows_on_consistent_tables_mean_equal_languages() {
    for name in [
        "tetra.json",
        "three_chains.json",
        "square.json",
        "single.json",
        "linear.json",
        "conic.json",
    ] {
        let aut = common::load(name);
        let table = make_consistent(&aut);
        // every pair of combinations with equal rows differs by a kernel vector of Mᵀ
        let mut kernel_of = table.matrix().transpose();
        if aut.theory() == Theory::Convex {
            kernel_of = kernel_of.with_row(&vec![int(1); aut.num_states()]).unwrap();
        }
        let words = Word::all_up_to(aut.alphabet().len(), 10);
        for d in nullspace_basis(&kernel_of) {
            let plus: Vec<Rational> = d
                .iter()
                .map(|x| if x > &int(0) { x.clone() } else { int(0) })
                .collect();
            let minus: Vec<Rational> = d
                .iter()
                .map(|x| if x < &int(0) { -x } else { int(0) })
                .collect();
            let (t, s) = (
                autoreduce::StateVector(plus),
                autoreduce::StateVector(minus),
            );
            assert_eq!(table.extended_row(&t), table.extended_row(&s), "{name}");
            for w in &words {
                assert_eq!(
                    aut.obs(&t, w),
                    aut.obs(&s, w),
                    "{name}: {}",
                    aut.render_word(w)
                );
            }
        }
    }
}

#[test]
fn shifted_columns_keep_fixture_tables_consistent() {
    for name in [
        "tetra.json",
        "three_chains.json",
        "square.json",
        "single.json",
        "linear.json",
        "conic.json",
    ] {
        let aut = common::load(name);
        let table = make_consistent(&aut);
        let mut words = table.words().to_vec();
        for a in 0..aut.alphabet().len() {
            for e in table.words() {
                let w = e.prepend(a);
                if !words.contains(&w) {
                    words.push(w);
                }
            }
        }
        let bigger = ObservationTable::build(&aut, words).unwrap();
        for a in 0..aut.alphabet().len() {
            assert!(
                check_consistency_nullspace(&bigger, a).is_consistent(),
                "{name}"
            );
        }
    }
}

#[test]
fn unit_interval_and_sums_hold_after_reduction() {
    for seed in 0..40 {
        let aut = common::small_automaton(&mut rng(seed), Theory::Convex);
        let reduced = reduce(&aut).unwrap().reduced;
        for d in reduced.deltas() {
            for i in 0..d.rows() {
                let sum: Rational = d.row(i).iter().cloned().sum();
                assert!(sum.is_one());
                assert!(d.row(i).iter().all(rational::in_unit_interval));
            }
        }
    }
}
