//! Seeded random automata and point sets shared by the integration tests.
#![allow(dead_code)]

use autoreduce::linalg::{simplex_feasible_nonneg, Matrix};
use autoreduce::rational::{int, ratio, Rational};
use autoreduce::{Automaton, StateVector, Theory, Word};
use num::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn load(name: &str) -> Automaton {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    autoreduce::format::parse(&std::fs::read(path).unwrap()).unwrap()
}

/// `d` units (d ≤ 6) spread over up to three of `n` entries.
pub fn distribution(rng: &mut Rand, n: usize) -> Vec<Rational> {
    let d: i64 = rng.gen_range(1..=6);
    let support = rng.gen_range(1..=n.min(3));
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(rng);
    let mut units = vec![0i64; n];
    for _ in 0..d {
        units[targets[rng.gen_range(0..support)]] += 1;
    }
    units.into_iter().map(|u| ratio(u, d)).collect()
}

fn weight(rng: &mut Rand, theory: Theory) -> Rational {
    if rng.gen_bool(0.55) {
        return Rational::zero();
    }
    let num = match theory {
        Theory::Linear => rng.gen_range(-4..=4),
        _ => rng.gen_range(0..=4),
    };
    ratio(num, rng.gen_range(1..=6))
}

fn output(rng: &mut Rand, theory: Theory) -> Rational {
    let d = rng.gen_range(1..=6);
    match theory {
        Theory::Convex => ratio(rng.gen_range(0..=d), d),
        Theory::Linear => ratio(rng.gen_range(-6..=6), d),
        Theory::Conic => ratio(rng.gen_range(0..=6), d),
    }
}

/// Coefficients of a combination of `k` earlier states.
fn combination(rng: &mut Rand, theory: Theory, k: usize) -> Vec<Rational> {
    match theory {
        Theory::Convex => distribution(rng, k),
        _ => {
            let mut c = vec![Rational::zero(); k];
            let picks = rng.gen_range(1..=k.min(3));
            for _ in 0..picks {
                let j = rng.gen_range(0..k);
                let num = match theory {
                    Theory::Linear => rng.gen_range(-2..=2),
                    _ => rng.gen_range(0..=2),
                };
                c[j] = ratio(num, rng.gen_range(1..=3));
            }
            c
        }
    }
}

/// A random automaton with `n` states over `letters` letters. Some states
/// (chosen at random, then shuffled into place) are built as combinations of
/// others so that reductions have something to remove.
pub fn automaton(rng: &mut Rand, theory: Theory, n: usize, letters: usize) -> Automaton {
    let independent = rng.gen_range(1..=n);
    let mut out = Vec::with_capacity(n);
    let mut rows: Vec<Vec<Vec<Rational>>> = vec![Vec::with_capacity(n); letters];
    for _ in 0..independent {
        out.push(output(rng, theory));
        for rows_a in rows.iter_mut() {
            rows_a.push(match theory {
                Theory::Convex => distribution(rng, n),
                _ => (0..n).map(|_| weight(rng, theory)).collect(),
            });
        }
    }
    for k in independent..n {
        let c = combination(rng, theory, k);
        out.push(combine(&c, |j| std::slice::from_ref(&out[j])).remove(0));
        for rows_a in rows.iter_mut() {
            let row = combine(&c, |j| &rows_a[j]);
            rows_a.push(row);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    // state `perm[i]` of the construction becomes state `i`
    let mut inverse = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let out: Vec<Rational> = perm.iter().map(|&p| out[p].clone()).collect();
    let delta = rows
        .iter()
        .map(|rows_a| {
            let mut m = Matrix::zeros(n, n);
            for (i, &p) in perm.iter().enumerate() {
                for (q, w) in rows_a[p].iter().enumerate() {
                    m[(i, inverse[q])] = w.clone();
                }
            }
            m
        })
        .collect();
    let alphabet = ["a", "b", "c"][..letters]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let states = (1..=n).map(|i| format!("q{i}")).collect();
    Automaton::new(theory, alphabet, states, out, delta, false).unwrap()
}

fn combine<'a>(c: &[Rational], row: impl Fn(usize) -> &'a [Rational]) -> Vec<Rational> {
    let mut acc: Vec<Rational> = Vec::new();
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let r = row(j);
        if acc.is_empty() {
            acc = vec![Rational::zero(); r.len()];
        }
        for (x, y) in acc.iter_mut().zip(r) {
            *x += cj * y;
        }
    }
    if acc.is_empty() {
        acc = vec![Rational::zero(); row(0).len()];
    }
    acc
}

/// Automaton with random size (n ≤ 6) and alphabet (|A| ≤ 2).
pub fn small_automaton(rng: &mut Rand, theory: Theory) -> Automaton {
    let n = rng.gen_range(1..=6);
    let letters = rng.gen_range(1..=2);
    automaton(rng, theory, n, letters)
}

/// Up to `max` distinct words of length at most 3.
pub fn words(rng: &mut Rand, letters: usize, max: usize) -> Vec<Word> {
    let pool = Word::all_up_to(letters, 3);
    let count = rng.gen_range(1..=max);
    let mut picked: Vec<Word> = pool
        .choose_multiple(rng, count.min(pool.len()))
        .cloned()
        .collect();
    picked.dedup();
    picked
}

/// A random combination of states valid in the automaton's theory.
pub fn state_vector(rng: &mut Rand, aut: &Automaton) -> StateVector {
    let n = aut.num_states();
    match aut.theory() {
        Theory::Convex => StateVector(distribution(rng, n)),
        theory => {
            let mut v = combination(rng, theory, n);
            if v.iter().all(Zero::is_zero) {
                v[rng.gen_range(0..n)] = int(1);
            }
            StateVector(v)
        }
    }
}

/// `count` distinct points in ℚ^dim with small numerators and denominators.
pub fn points(rng: &mut Rand, dim: usize, count: usize, nonnegative: bool) -> Matrix {
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    while cols.len() < count {
        let p: Vec<Rational> = (0..dim)
            .map(|_| {
                let lo = if nonnegative { 0 } else { -4 };
                ratio(rng.gen_range(lo..=4), rng.gen_range(1..=3))
            })
            .collect();
        if !cols.contains(&p) {
            cols.push(p);
        }
    }
    Matrix::from_columns(dim, &cols).unwrap()
}

fn same_ray(p: &[Rational], q: &[Rational]) -> bool {
    let lead = |v: &[Rational]| v.iter().find(|x| !x.is_zero()).map(|x| x.abs());
    match (lead(p), lead(q)) {
        (Some(a), Some(b)) => p.iter().zip(q).all(|(x, y)| x / &a == y / &b),
        _ => false,
    }
}

/// True when no nonzero point is a positive multiple of another and no
/// nontrivial nonnegative combination of the nonzero points vanishes.
pub fn pointed_without_repeated_rays(m: &Matrix) -> bool {
    let nonzero: Vec<Vec<Rational>> = (0..m.cols())
        .map(|j| m.column(j))
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    for i in 0..nonzero.len() {
        for j in 0..i {
            if same_ray(&nonzero[i], &nonzero[j]) {
                return false;
            }
        }
    }
    if nonzero.is_empty() {
        return true;
    }
    let lifted = Matrix::from_columns(m.rows(), &nonzero).unwrap();
    let lifted = autoreduce::frame::lift(&lifted);
    let mut target = vec![Rational::zero(); m.rows()];
    target.push(int(1));
    simplex_feasible_nonneg(&lifted, &target).is_none()
}

/// A point set for conic tests: half the time drawn from the nonnegative
/// orthant, otherwise general points re-drawn until the cone is pointed.
/// In one dimension a pointed cone has a single ray, so at most two points.
pub fn conic_points(rng: &mut Rand, dim: usize, count: usize) -> Matrix {
    let count = if dim == 1 { count.min(2) } else { count };
    if rng.gen_bool(0.5) {
        for _ in 0..50 {
            let m = points(rng, dim, count, false);
            if pointed_without_repeated_rays(&m) {
                return m;
            }
        }
    }
    loop {
        let m = points(rng, dim, count, true);
        if pointed_without_repeated_rays(&m) {
            return m;
        }
    }
}
