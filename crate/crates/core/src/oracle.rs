//! Numerical cross-check of graph bounds.
//!
//! The oracle maximizes `Q` directly over pure states: over products of
//! per-block pure states for a partition, or over all pure states. Pure
//! states suffice because mixing never increases `Q`. Results are lower
//! bounds on the true maxima; certification comes from the graph side.
//!
//! For a pure state `ψ` the gradient of `Q(ψ) = Σ_s ⟨ψ|s|ψ⟩²` with respect to
//! `ψ̄` is `G = 4 Σ_s ⟨s⟩ s ψ`, in the sense `dQ = Re⟨δ, G⟩`. It is projected
//! onto the tangent space of the unit sphere (of the active block, for
//! products) and followed with a backtracking line search.

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::bound_for_partition;
use crate::cuts::Partition;
use crate::error::{Error, Result};
use crate::pauli::OperatorSet;
use crate::states::{self, local_index, PauliAction, QuantumState};

/// Largest block the product optimizer accepts.
pub const BLOCK_SIZE_CAP: usize = 6;
/// Width cap for [`maximize_q_global`].
pub const GLOBAL_WIDTH_CAP: usize = 10;
/// `gap` at or below this counts as saturation.
pub const SATURATION_TOL: f64 = 1e-3;
/// `oracle_value` above `graph_bound` by more than this is a soundness violation.
pub const SOUNDNESS_TOL: f64 = 1e-6;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;
const INNER_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            restarts: 64,
            max_iterations: 2000,
            convergence_tol: 1e-9,
            seed: 0,
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0
            || self.max_iterations == 0
            || self.convergence_tol.is_nan()
            || self.convergence_tol <= 0.0
        {
            return Err(Error::InvalidArgument(
                "restarts, max_iterations and convergence_tol must be positive".into(),
            ));
        }
        Ok(())
    }

    fn rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_value: f64,
    pub best_state: QuantumState,
    /// Ascent steps spent by the best restart.
    pub iterations_used: usize,
    pub converged: bool,
    /// `Q` after every sweep of the best restart, starting value first.
    pub history: Vec<f64>,
}

fn actions_for(sigma: &OperatorSet) -> Vec<PauliAction> {
    sigma.members().iter().map(PauliAction::new).collect()
}

/// Expectations and the ascent direction `G = 4 Σ ⟨s⟩ s ψ`.
fn gradient(
    actions: &[PauliAction],
    psi: &[Complex64],
    scratch: &mut [Complex64],
) -> (f64, Vec<Complex64>) {
    let mut g = vec![Complex64::new(0.0, 0.0); psi.len()];
    let mut q = 0.0;
    for a in actions {
        let e = a.expectation_pure(psi);
        q += e * e;
        if e != 0.0 {
            a.apply_into(psi, scratch);
            for (gi, si) in g.iter_mut().zip(scratch.iter()) {
                *gi += si * (4.0 * e);
            }
        }
    }
    (q, g)
}

/// Best value, final point, steps used, converged flag, value history.
type Run<T> = (f64, T, usize, bool, Vec<f64>);

fn normalize(v: &mut [Complex64]) -> bool {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !n.is_finite() || n <= 1e-300 {
        return false;
    }
    v.iter_mut().for_each(|c| *c /= n);
    true
}

/// Projects `g` onto the tangent space at unit vector `phi`.
fn tangent(phi: &[Complex64], g: &mut [Complex64]) -> f64 {
    let overlap: Complex64 = phi.iter().zip(g.iter()).map(|(p, x)| p.conj() * x).sum();
    for (x, p) in g.iter_mut().zip(phi) {
        *x -= p * overlap;
    }
    g.iter().map(|c| c.norm_sqr()).sum()
}

/// Backtracking ascent step from `phi` along `dir` on the unit sphere.
///
/// Step sizes halve from 1. Once a step meets the Armijo condition, halving
/// continues only while it keeps improving `Q`; the best step is returned.
fn line_search(
    phi: &[Complex64],
    dir: &[Complex64],
    dir_sq: f64,
    q0: f64,
    eval: &mut dyn FnMut(&[Complex64]) -> f64,
) -> Option<(Vec<Complex64>, f64)> {
    let mut t = 1.0;
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    while t >= MIN_STEP {
        let mut cand: Vec<_> = phi.iter().zip(dir).map(|(p, d)| p + d * t).collect();
        if normalize(&mut cand) {
            let q = eval(&cand);
            match &best {
                Some((_, qb)) if q <= *qb => break,
                _ if q >= q0 + ARMIJO * t * dir_sq => best = Some((cand, q)),
                _ => {}
            }
        }
        t *= 0.5;
    }
    best
}

struct ProductProblem<'a> {
    part: &'a Partition,
    actions: Vec<PauliAction>,
    /// `local[k][idx]`: index into block `k`'s factor for global index `idx`.
    local: Vec<Vec<usize>>,
    dim: usize,
}

impl ProductProblem<'_> {
    fn global(&self, factors: &[Vec<Complex64>]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|idx| {
                factors
                    .iter()
                    .zip(&self.local)
                    .map(|(f, l)| f[l[idx]])
                    .product()
            })
            .collect()
    }

    fn q(&self, factors: &[Vec<Complex64>]) -> f64 {
        states::q_of_amplitudes(&self.actions, &self.global(factors))
    }

    /// One round of projected gradient steps on block `k`. Returns the number
    /// of accepted steps.
    fn improve_block(
        &self,
        factors: &mut [Vec<Complex64>],
        k: usize,
        q: &mut f64,
        budget: usize,
    ) -> usize {
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.dim];
        let mut steps = 0;
        while steps < budget.min(INNER_STEPS) {
            let psi = self.global(factors);
            let (q_now, g) = gradient(&self.actions, &psi, &mut scratch);
            // contract the global gradient with the other blocks' factors
            let mut gb = vec![Complex64::new(0.0, 0.0); factors[k].len()];
            for idx in 0..self.dim {
                let rest: Complex64 = factors
                    .iter()
                    .zip(&self.local)
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, (f, l))| f[l[idx]])
                    .product();
                gb[self.local[k][idx]] += rest.conj() * g[idx];
            }
            let dir_sq = tangent(&factors[k], &mut gb);
            if dir_sq < 1e-24 {
                break;
            }
            let mut eval = |cand: &[Complex64]| {
                let mut trial = factors.to_vec();
                trial[k] = cand.to_vec();
                self.q(&trial)
            };
            match line_search(&factors[k], &gb, dir_sq, q_now, &mut eval) {
                Some((next, q_next)) => {
                    let gain = q_next - q_now;
                    factors[k] = next;
                    *q = q_next;
                    steps += 1;
                    if gain <= 1e-14 {
                        break;
                    }
                }
                None => break,
            }
        }
        steps
    }
}

fn check_config(sigma: &OperatorSet, part: &Partition) -> Result<()> {
    if sigma.width() != part.width() {
        return Err(Error::WidthMismatch {
            expected: part.width(),
            found: sigma.width(),
        });
    }
    if part.width() > states::PURE_WIDTH_CAP {
        return Err(Error::cap(
            "pure state width",
            part.width(),
            states::PURE_WIDTH_CAP,
        ));
    }
    if let Some(b) = part.blocks().iter().map(Vec::len).max() {
        if b > BLOCK_SIZE_CAP {
            return Err(Error::cap("block size", b, BLOCK_SIZE_CAP));
        }
    }
    Ok(())
}

/// Largest `Q` found over states that are products of pure states across
/// the blocks of `part`, by cyclic block-coordinate ascent from random
/// product starts.
pub fn maximize_q_product(
    sigma: &OperatorSet,
    part: &Partition,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    check_config(sigma, part)?;
    cfg.validate()?;
    let width = part.width();
    let dim = 1usize << width;
    let problem = ProductProblem {
        part,
        actions: actions_for(sigma),
        local: part
            .blocks()
            .iter()
            .map(|b| (0..dim).map(|idx| local_index(idx, b, width)).collect())
            .collect(),
        dim,
    };

    let mut best: Option<Run<Vec<Vec<Complex64>>>> = None;
    for r in 0..cfg.restarts {
        let mut rng = cfg.rng(r);
        let mut factors: Vec<Vec<Complex64>> = problem
            .part
            .blocks()
            .iter()
            .map(|b| states::random_vector(1usize << b.len(), &mut rng))
            .collect();
        let mut q = problem.q(&factors);
        let mut history = vec![q];
        let mut used = 0;
        let mut converged = false;
        while used < cfg.max_iterations {
            let start = q;
            let mut moved = 0;
            for k in 0..factors.len() {
                let budget = cfg.max_iterations - used;
                if budget == 0 {
                    break;
                }
                let s = problem.improve_block(&mut factors, k, &mut q, budget);
                used += s;
                moved += s;
            }
            history.push(q);
            if moved == 0 || q - start <= cfg.convergence_tol * start.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if best.as_ref().is_none_or(|b| q > b.0) {
            best = Some((q, factors, used, converged, history));
        }
    }
    let (_, factors, used, converged, history) = best.expect("at least one restart");
    let state = QuantumState::pure_normalized(width, problem.global(&factors))?;
    let value = states::evaluate_q(&state, sigma)?.value;
    Ok(OracleResult {
        best_value: value,
        best_state: state,
        iterations_used: used,
        converged,
        history,
    })
}

/// Largest `Q` found over all pure states.
///
/// Each step tries the self-consistent update `ψ ← normalize(Σ ⟨s⟩ s ψ)` and
/// keeps it only if `Q` strictly increases; otherwise a projected gradient
/// step with backtracking is taken.
pub fn maximize_q_global(sigma: &OperatorSet, cfg: &OracleConfig) -> Result<OracleResult> {
    let width = sigma.width();
    if width > GLOBAL_WIDTH_CAP {
        return Err(Error::cap("global search width", width, GLOBAL_WIDTH_CAP));
    }
    cfg.validate()?;
    let dim = 1usize << width;
    let actions = actions_for(sigma);
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];

    let mut best: Option<Run<Vec<Complex64>>> = None;
    for r in 0..cfg.restarts {
        let mut rng = cfg.rng(r);
        let mut psi = states::random_vector(dim, &mut rng);
        let mut q = states::q_of_amplitudes(&actions, &psi);
        let mut history = vec![q];
        let mut used = 0;
        let mut converged = false;
        while used < cfg.max_iterations {
            used += 1;
            let (q_now, mut g) = gradient(&actions, &psi, &mut scratch);
            let mut fixed: Vec<Complex64> = g.iter().map(|c| c * 0.25).collect();
            let tol = cfg.convergence_tol * q_now.abs().max(1.0);
            if normalize(&mut fixed) {
                let qf = states::q_of_amplitudes(&actions, &fixed);
                if qf > q_now + tol {
                    psi = fixed;
                    q = qf;
                    history.push(q);
                    continue;
                }
            }
            // fixed-point step stalled or went downhill
            let dir_sq = tangent(&psi, &mut g);
            let mut eval = |c: &[Complex64]| states::q_of_amplitudes(&actions, c);
            let step = if dir_sq > 1e-24 {
                line_search(&psi, &g, dir_sq, q_now, &mut eval)
            } else {
                None
            };
            match step {
                Some((p, qn)) => {
                    psi = p;
                    q = qn;
                    history.push(q);
                    if q - q_now <= tol {
                        converged = true;
                        break;
                    }
                }
                None => {
                    converged = true;
                    break;
                }
            }
        }
        if best.as_ref().is_none_or(|b| q > b.0) {
            best = Some((q, psi, used, converged, history));
        }
    }
    let (_, psi, used, converged, history) = best.expect("at least one restart");
    let state = QuantumState::pure_normalized(width, psi)?;
    let value = states::evaluate_q(&state, sigma)?.value;
    Ok(OracleResult {
        best_value: value,
        best_state: state,
        iterations_used: used,
        converged,
        history,
    })
}

/// Graph bound versus numerical maximum for one partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub partition: Partition,
    pub graph_bound: usize,
    pub oracle_value: f64,
    pub gap: f64,
    /// `gap <= 1e-3`: the bound is attained numerically.
    pub sat: bool,
    /// `oracle_value > graph_bound + 1e-6`: one of the two sides is wrong.
    pub violation: bool,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn verify_bound(
    sigma: &OperatorSet,
    part: &Partition,
    cfg: &OracleConfig,
) -> Result<Verification> {
    let bound = bound_for_partition(sigma, part)?.bound;
    let res = maximize_q_product(sigma, part, cfg)?;
    let gap = bound as f64 - res.best_value;
    let sat = gap <= SATURATION_TOL;
    let violation = res.best_value > bound as f64 + SOUNDNESS_TOL;
    let note = if violation {
        Some("soundness violation: oracle exceeds graph bound".to_string())
    } else if !sat {
        Some(format!(
            "restarts exhausted after {} starts without reaching the bound",
            cfg.restarts
        ))
    } else {
        None
    };
    Ok(Verification {
        partition: part.clone(),
        graph_bound: bound,
        oracle_value: res.best_value,
        gap,
        sat,
        violation,
        converged: res.converged,
        note,
    })
}
