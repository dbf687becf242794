//! Randomized checks shared by the property tests and the acceptance run.
//! Each returns the first counterexample found.
//!
//! `ensure!` negates its condition on purpose so that NaN fails a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcrit_core::cuts::{cut_anticommute, cut_commute, enumerate_bipartitions};
use qcrit_core::graph::{build_graph, complement, independence_number, max_clique, Relation};
use qcrit_core::pauli::Letter;
use qcrit_core::states::{
    anticommuting_unit_combination, evaluate_q, expectation, mix, random_mixed_state,
    random_product_state, random_pure_state,
};
use qcrit_core::{PauliString, QuantumState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub const TOL: f64 = 1e-8;

pub type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn random_state<R: Rng>(width: usize, rng: &mut R) -> QuantumState {
    if rng.gen_bool(0.5) {
        random_pure_state(width, rng).unwrap()
    } else {
        let rank = rng.gen_range(1..=1usize << width);
        random_mixed_state(width, rank, rng).unwrap()
    }
}

fn unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let v: Vec<f64> = (0..n)
        .map(|_| rng.sample(rand_distr::StandardNormal))
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Squared expectations of a mutually anticommuting family sum to at most 1.
pub fn anticommuting_families(trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..trials {
        let width = rng.gen_range(1..=5);
        let family = anticommuting_family(width, &mut rng);
        let state = random_state(width, &mut rng);
        let s: f64 = family
            .iter()
            .map(|p| expectation(&state, p).unwrap().powi(2))
            .sum();
        ensure!(s <= 1.0 + TOL, "sum {s} for {family:?}");
    }
    Ok(())
}

/// `(Σ v_i O_i)^2 = I` for unit `v` and anticommuting `O_i`.
pub fn unit_combinations(trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..trials {
        let width = rng.gen_range(1..=4);
        let family = anticommuting_family(width, &mut rng);
        let v = unit_vector(family.len(), &mut rng);
        let m = anticommuting_unit_combination(&family, &v).unwrap();
        let dim = m.nrows();
        let err = (&m * &m - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        ensure!(err <= TOL, "deviation {err} for {family:?}");
    }
    Ok(())
}

/// Q of a mixture never exceeds the larger endpoint, on an 11-point weight grid.
pub fn mixtures(pairs: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..pairs {
        let width = rng.gen_range(2..=4);
        let sigma = random_sigma(width, rng.gen_range(1..=12), &mut rng);
        let a = random_state(width, &mut rng);
        let b = random_state(width, &mut rng);
        let qa = evaluate_q(&a, &sigma).unwrap().value;
        let qb = evaluate_q(&b, &sigma).unwrap().value;
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let m = mix(&[a.clone(), b.clone()], &[p, 1.0 - p]).unwrap();
            let q = evaluate_q(&m, &sigma).unwrap().value;
            ensure!(q <= qa.max(qb) + TOL, "p={p}: {q} > max({qa}, {qb})");
        }
    }
    Ok(())
}

/// Cut-anticommuting families are bounded by 1 on states product across the cut.
pub fn cut_product_states(trials: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for trial in 0..trials {
        let width = rng.gen_range(2..=6);
        let cuts = enumerate_bipartitions(width).unwrap();
        let part = cuts[rng.gen_range(0..cuts.len())].clone();
        let target = rng.gen_range(2..=8);
        // Pauli restrictions always either commute or anticommute blockwise,
        // so the pairwise side condition holds by construction.
        let family = greedy_family(width, target, &mut rng, |a, b| {
            cut_anticommute(a, b, &part).unwrap()
        });
        let state = random_product_state(&part, trial as u64).unwrap();
        let s: f64 = family
            .iter()
            .map(|p| expectation(&state, p).unwrap().powi(2))
            .sum();
        ensure!(s <= 1.0 + TOL, "sum {s} across {part} for {family:?}");
    }
    Ok(())
}

/// Exactly one of cut-commute and cut-anticommute holds, the graphs are
/// complements, and refining a cut only adds anticommuting pairs.
pub fn duality_and_refinement(instances: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..instances {
        let width = rng.gen_range(2..=6);
        let sigma = random_sigma(width, rng.gen_range(1..=14), &mut rng);
        let coarse = random_partition(width, &mut rng);
        let fine = random_refinement(&coarse, &mut rng);
        ensure!(fine.refines(&coarse), "{fine} does not refine {coarse}");
        for a in sigma.members() {
            for b in sigma.members() {
                let anti = cut_anticommute(a, b, &coarse).unwrap();
                ensure!(
                    anti != cut_commute(a, b, &coarse).unwrap(),
                    "{a} {b} on {coarse}"
                );
                ensure!(
                    !anti || cut_anticommute(a, b, &fine).unwrap(),
                    "{a} {b} anticommute on {coarse} but not on {fine}"
                );
            }
        }
        let comm = build_graph(&sigma, &coarse, Relation::Commute).unwrap();
        let anti = build_graph(&sigma, &coarse, Relation::Anticommute).unwrap();
        ensure!(
            complement(&comm).edges() == anti.edges(),
            "graphs are not complements"
        );
        let w = max_clique(&comm).unwrap().size;
        ensure!(
            w == independence_number(&anti).unwrap().size,
            "clique and independence differ"
        );
        let fine_g = build_graph(&sigma, &fine, Relation::Commute).unwrap();
        ensure!(
            max_clique(&fine_g).unwrap().size <= w,
            "bound grew under refinement of {coarse}"
        );
    }
    Ok(())
}

pub fn matrices_anticommute(a: &PauliString, b: &PauliString) -> Result<bool, String> {
    let (ma, mb) = (a.to_matrix().unwrap(), b.to_matrix().unwrap());
    let (ab, ba) = (&ma * &mb, &mb * &ma);
    let anti = (&ab + &ba).iter().all(|z| z.norm() < 1e-12);
    let comm = (&ab - &ba).iter().all(|z| z.norm() < 1e-12);
    ensure!(anti != comm, "{a} and {b} neither commute nor anticommute");
    Ok(anti)
}

pub fn all_strings(width: usize) -> Vec<PauliString> {
    let letters = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    (0..4usize.pow(width as u32))
        .map(|mut k| {
            let mut ls = Vec::with_capacity(width);
            for _ in 0..width {
                ls.push(letters[k % 4]);
                k /= 4;
            }
            PauliString::from_letters(&ls).unwrap()
        })
        .collect()
}

/// Bitwise commutation agrees with matrix products: every pair up to width 3,
/// `samples` random pairs at width 4.
pub fn symplectic_vs_matrix(samples: usize) -> Outcome {
    for width in 1..=3 {
        let strings = all_strings(width);
        for a in &strings {
            for b in &strings {
                ensure!(
                    a.anticommutes(b).unwrap() == matrices_anticommute(a, b)?,
                    "{a} {b}"
                );
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..samples {
        let (a, b) = (random_pauli(4, &mut rng), random_pauli(4, &mut rng));
        ensure!(
            a.anticommutes(&b).unwrap() == matrices_anticommute(&a, &b)?,
            "{a} {b}"
        );
    }
    Ok(())
}
