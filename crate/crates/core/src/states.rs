//! Small dense quantum states and the criterion value `Q`.
//!
//! Basis index convention: qubit 0 is the most significant bit, so the basis
//! label `"011"` is index 3 and the GHZ state of three qubits has amplitudes
//! at indices 0 and 7.
//!
//! Pauli strings act on pure states bitwise. A string with index-space masks
//! `(xm, zm)` maps `|b⟩` to `i^{n_y} (-1)^{|b ∧ zm|} |b ⊕ xm⟩`, where `n_y` is
//! the number of `y` sites. Expectations never build the `2^N × 2^N` operator.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cuts::Partition;
use crate::error::{Error, Result};
use crate::pauli::{OperatorSet, PauliString};

/// Default width cap for expectations on pure states.
pub const PURE_WIDTH_CAP: usize = 12;
/// Default width cap for expectations on density operators.
pub const MIXED_WIDTH_CAP: usize = 8;
/// Width cap for [`common_eigenstate`].
pub const EIGENSTATE_WIDTH_CAP: usize = 10;

const NORM_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub enum StateForm {
    Pure(Vec<Complex64>),
    Mixed(DMatrix<Complex64>),
}

/// A pure state vector or a density operator on `width` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    width: usize,
    form: StateForm,
}

fn dim_of(width: usize) -> Result<usize> {
    if width == 0 {
        return Err(Error::InvalidState("width must be positive".into()));
    }
    if width > 30 {
        return Err(Error::cap("state width", width, 30));
    }
    Ok(1usize << width)
}

impl QuantumState {
    /// Pure state; the squared norm must be within 1e-10 of 1.
    pub fn pure(width: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = dim_of(width)?;
        if amplitudes.len() != dim {
            return Err(Error::InvalidState(format!(
                "expected {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(QuantumState {
            width,
            form: StateForm::Pure(amplitudes),
        })
    }

    /// Normalizes `amplitudes` first. Fails on a zero vector.
    pub fn pure_normalized(width: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::pure(width, amplitudes)
    }

    /// Density operator; checks shape, Hermiticity and unit trace (1e-10).
    /// Positivity is checked separately by [`QuantumState::validate`].
    pub fn mixed(width: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = dim_of(width)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "expected {dim}x{dim} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        Ok(QuantumState {
            width,
            form: StateForm::Mixed(matrix),
        })
    }

    /// Computational basis state from a bit string such as `"0110"`.
    pub fn basis(bits: &str) -> Result<Self> {
        let width = bits.len();
        let dim = dim_of(width)?;
        let mut index = 0usize;
        for (pos, c) in bits.chars().enumerate() {
            index = (index << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::IllegalCharacter {
                            ch: c,
                            position: pos,
                        });
                    }
                };
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::pure(width, amps)
    }

    pub fn maximally_mixed(width: usize) -> Result<Self> {
        let dim = dim_of(width)?;
        let m = DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self::mixed(width, m)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn form(&self) -> &StateForm {
        &self.form
    }

    pub fn is_pure_form(&self) -> bool {
        matches!(self.form, StateForm::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        match &self.form {
            StateForm::Pure(v) => Some(v),
            StateForm::Mixed(_) => None,
        }
    }

    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        match &self.form {
            StateForm::Pure(v) => {
                let col = DMatrix::from_column_slice(v.len(), 1, v);
                &col * col.adjoint()
            }
            StateForm::Mixed(m) => m.clone(),
        }
    }

    /// Full validation, including positivity (eigenvalues ≥ -1e-8).
    pub fn validate(&self) -> Result<()> {
        match &self.form {
            StateForm::Pure(v) => Self::pure(self.width, v.clone()).map(|_| ()),
            StateForm::Mixed(m) => {
                Self::mixed(self.width, m.clone())?;
                let eig = m.clone().symmetric_eigenvalues();
                let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
                if min < -PSD_TOL {
                    return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
                }
                Ok(())
            }
        }
    }

    pub fn to_file(&self) -> StateFile {
        let pairs = |it: &mut dyn Iterator<Item = Complex64>| it.map(|c| [c.re, c.im]).collect();
        match &self.form {
            StateForm::Pure(v) => StateFile {
                width: self.width,
                kind: StateKind::Pure,
                amplitudes: Some(pairs(&mut v.iter().copied())),
                matrix: None,
            },
            StateForm::Mixed(m) => {
                let dim = m.nrows();
                let mut row_major = (0..dim)
                    .flat_map(|r| (0..dim).map(move |c| (r, c)))
                    .map(|(r, c)| m[(r, c)]);
                StateFile {
                    width: self.width,
                    kind: StateKind::Mixed,
                    amplitudes: None,
                    matrix: Some(pairs(&mut row_major)),
                }
            }
        }
    }

    pub fn from_file(file: &StateFile) -> Result<Self> {
        let dim = dim_of(file.width)?;
        let to_c = |v: &[[f64; 2]]| {
            v.iter()
                .map(|p| Complex64::new(p[0], p[1]))
                .collect::<Vec<_>>()
        };
        match file.kind {
            StateKind::Pure => {
                let a = file.amplitudes.as_ref().ok_or_else(|| {
                    Error::InvalidState("pure state file without amplitudes".into())
                })?;
                Self::pure(file.width, to_c(a))
            }
            StateKind::Mixed => {
                let m = file
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::InvalidState("mixed state file without matrix".into()))?;
                if m.len() != dim * dim {
                    return Err(Error::InvalidState(format!(
                        "expected {} matrix entries, got {}",
                        dim * dim,
                        m.len()
                    )));
                }
                Self::mixed(file.width, DMatrix::from_row_slice(dim, dim, &to_c(m)))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("state file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidState(format!("bad state file: {e}")))?;
        Self::from_file(&file)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

/// On-disk state format. Complex numbers are `[re, im]` pairs; the matrix is
/// row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub width: usize,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

/// Reverses qubit order so that qubit 0 lands on the top index bit.
fn index_mask(mask: u64, width: usize) -> usize {
    (0..width).fold(0usize, |m, k| {
        m | ((((mask >> k) & 1) as usize) << (width - 1 - k))
    })
}

/// Index-space action data of a Pauli string: flip mask, sign mask, `i^{n_y}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    flip: usize,
    sign: usize,
    global: Complex64,
}

impl PauliAction {
    pub(crate) fn new(p: &PauliString) -> Self {
        let w = p.width();
        let global = match (p.x_support() & p.z_support()).count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliAction {
            flip: index_mask(p.x_support(), w),
            sign: index_mask(p.z_support(), w),
            global,
        }
    }

    #[inline]
    fn phase(&self, b: usize) -> Complex64 {
        if (b & self.sign).count_ones() % 2 == 1 {
            -self.global
        } else {
            self.global
        }
    }

    /// `out = P v`.
    pub(crate) fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (b, &a) in v.iter().enumerate() {
            out[b ^ self.flip] = self.phase(b) * a;
        }
    }

    pub(crate) fn expectation_pure(&self, v: &[Complex64]) -> f64 {
        v.iter()
            .enumerate()
            .map(|(b, &a)| (v[b ^ self.flip].conj() * self.phase(b) * a).re)
            .sum()
    }

    fn expectation_mixed(&self, m: &DMatrix<Complex64>) -> f64 {
        (0..m.nrows())
            .map(|b| (m[(b, b ^ self.flip)] * self.phase(b)).re)
            .sum()
    }
}

/// `P|ψ⟩` for a pure amplitude vector.
pub fn apply_pauli(p: &PauliString, v: &[Complex64]) -> Result<Vec<Complex64>> {
    if v.len() != 1usize << p.width() {
        return Err(Error::WidthMismatch {
            expected: p.width(),
            found: v.len().trailing_zeros() as usize,
        });
    }
    let mut out = vec![ZERO; v.len()];
    PauliAction::new(p).apply_into(v, &mut out);
    Ok(out)
}

/// `tr(ρ p)`, clamped to `[-1, 1]` against rounding.
pub fn expectation(state: &QuantumState, p: &PauliString) -> Result<f64> {
    expectation_capped(state, p, PURE_WIDTH_CAP, MIXED_WIDTH_CAP)
}

pub fn expectation_capped(
    state: &QuantumState,
    p: &PauliString,
    pure_cap: usize,
    mixed_cap: usize,
) -> Result<f64> {
    if p.width() != state.width {
        return Err(Error::WidthMismatch {
            expected: state.width,
            found: p.width(),
        });
    }
    let act = PauliAction::new(p);
    let e = match &state.form {
        StateForm::Pure(v) => {
            if state.width > pure_cap {
                return Err(Error::cap("pure state width", state.width, pure_cap));
            }
            act.expectation_pure(v)
        }
        StateForm::Mixed(m) => {
            if state.width > mixed_cap {
                return Err(Error::cap("mixed state width", state.width, mixed_cap));
            }
            act.expectation_mixed(m)
        }
    };
    Ok(e.clamp(-1.0, 1.0))
}

/// Expectation and its square for one member of σ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contribution {
    pub operator: PauliString,
    pub expectation: f64,
    pub squared: f64,
}

/// The criterion value: sum of squared expectations over σ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QValue {
    pub value: f64,
    pub contributions: Vec<Contribution>,
}

pub fn evaluate_q(state: &QuantumState, sigma: &OperatorSet) -> Result<QValue> {
    let mut contributions = Vec::with_capacity(sigma.len());
    for p in sigma.members() {
        let e = expectation(state, p)?;
        contributions.push(Contribution {
            operator: *p,
            expectation: e,
            squared: e * e,
        });
    }
    let value = contributions.iter().map(|c| c.squared).sum();
    Ok(QValue {
        value,
        contributions,
    })
}

/// Q for a raw pure amplitude vector (no validation, no caps).
pub(crate) fn q_of_amplitudes(actions: &[PauliAction], v: &[Complex64]) -> f64 {
    actions
        .iter()
        .map(|a| {
            let e = a.expectation_pure(v);
            e * e
        })
        .sum()
}

/// Reference states addressable by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedState {
    Ghz,
    W,
    Smolin,
    /// Computational basis state given as a bit string.
    Basis(String),
}

impl NamedState {
    /// Parses `ghz`, `w`, `smolin` or `basis:<bits>`.
    pub fn parse(text: &str) -> Result<NamedState> {
        match text {
            "ghz" => Ok(NamedState::Ghz),
            "w" => Ok(NamedState::W),
            "smolin" => Ok(NamedState::Smolin),
            other => match other.strip_prefix("basis:") {
                Some(bits) if !bits.is_empty() => Ok(NamedState::Basis(bits.to_string())),
                _ => Err(Error::InvalidArgument(format!(
                    "unknown state name {other:?}"
                ))),
            },
        }
    }
}

pub fn named_state(name: &NamedState, width: usize) -> Result<QuantumState> {
    let unsupported =
        |why: &str| Error::InvalidArgument(format!("{name:?} at width {width}: {why}"));
    match name {
        NamedState::Ghz => {
            if width < 2 {
                return Err(unsupported("needs at least 2 qubits"));
            }
            let dim = dim_of(width)?;
            let mut v = vec![ZERO; dim];
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            v[0] = h;
            v[dim - 1] = h;
            QuantumState::pure(width, v)
        }
        NamedState::W => {
            if width < 2 {
                return Err(unsupported("needs at least 2 qubits"));
            }
            let dim = dim_of(width)?;
            let mut v = vec![ZERO; dim];
            let a = Complex64::new(1.0 / (width as f64).sqrt(), 0.0);
            for k in 0..width {
                v[1 << k] = a;
            }
            QuantumState::pure(width, v)
        }
        NamedState::Smolin => {
            if width != 4 {
                return Err(unsupported("defined for 4 qubits only"));
            }
            smolin()
        }
        NamedState::Basis(bits) => {
            if bits.len() != width {
                return Err(unsupported("bit string length differs"));
            }
            QuantumState::basis(bits)
        }
    }
}

/// Uniform mixture of `|Φ_k⟩⟨Φ_k| ⊗ |Φ_k⟩⟨Φ_k|` over the four Bell states, on
/// qubit pairs {0,1} and {2,3}.
fn smolin() -> Result<QuantumState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell: [[f64; 4]; 4] = [
        [h, 0.0, 0.0, h],
        [h, 0.0, 0.0, -h],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
    ];
    let mut rho = DMatrix::from_element(16, 16, ZERO);
    for b in &bell {
        let pair = DMatrix::from_fn(4, 1, |r, _| Complex64::new(b[r], 0.0));
        let both = pair.kronecker(&pair);
        rho += &both * both.adjoint() * Complex64::new(0.25, 0.0);
    }
    QuantumState::mixed(4, rho)
}

/// Convex combination, returned in mixed form.
pub fn mix(states: &[QuantumState], weights: &[f64]) -> Result<QuantumState> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} states but {} weights",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| **w < 0.0 || !w.is_finite()) {
        return Err(Error::InvalidWeights(format!("weight {w} is negative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let width = states[0].width;
    let dim = dim_of(width)?;
    let mut rho = DMatrix::from_element(dim, dim, ZERO);
    for (s, &w) in states.iter().zip(weights) {
        if s.width != width {
            return Err(Error::WidthMismatch {
                expected: width,
                found: s.width,
            });
        }
        rho += s.density_matrix() * Complex64::new(w, 0.0);
    }
    // trace drift from rounding is at the 1e-16 level
    QuantumState::mixed(width, rho)
}

fn check_family(ops: &[PauliString], width_cap: usize) -> Result<usize> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty operator list".into()))?;
    let width = first.width();
    if width > width_cap {
        return Err(Error::cap("operator width", width, width_cap));
    }
    for p in ops {
        if p.width() != width {
            return Err(Error::WidthMismatch {
                expected: width,
                found: p.width(),
            });
        }
        if p.is_identity() {
            return Err(Error::InvalidArgument("identity operator in family".into()));
        }
    }
    Ok(width)
}

/// A pure state that is a ±1 eigenvector of every operator in a commuting
/// family.
///
/// Starting from `|0…0⟩`, each projector `(1 ± P)/2` is applied in turn.
/// `+` is used unless it (nearly) annihilates the vector, in which case `-`
/// is used: the two projections sum to the current vector, so at least one
/// survives, and commuting projectors preserve earlier eigenvalues.
pub fn common_eigenstate(ops: &[PauliString]) -> Result<QuantumState> {
    let width = check_family(ops, EIGENSTATE_WIDTH_CAP)?;
    for (i, p) in ops.iter().enumerate() {
        for q in &ops[i + 1..] {
            if p.anticommutes(q)? {
                return Err(Error::NotCommuting(p.to_string(), q.to_string()));
            }
        }
    }
    let dim = 1usize << width;
    let mut v = vec![ZERO; dim];
    v[0] = ONE;
    let mut pv = vec![ZERO; dim];
    for p in ops {
        PauliAction::new(p).apply_into(&v, &mut pv);
        let plus: Vec<_> = v.iter().zip(&pv).map(|(a, b)| (a + b) * 0.5).collect();
        let minus: Vec<_> = v.iter().zip(&pv).map(|(a, b)| (a - b) * 0.5).collect();
        let n_plus: f64 = plus.iter().map(|c| c.norm_sqr()).sum();
        let n_minus: f64 = minus.iter().map(|c| c.norm_sqr()).sum();
        let (next, n) = if n_plus >= 1e-6 || n_plus >= n_minus {
            (plus, n_plus)
        } else {
            (minus, n_minus)
        };
        if n < 1e-12 {
            return Err(Error::Internal(format!(
                "projection onto {p} annihilated the state"
            )));
        }
        let s = n.sqrt();
        v = next.into_iter().map(|c| c / s).collect();
    }
    let state = QuantumState::pure_normalized(width, v)?;
    for p in ops {
        let e = expectation_capped(&state, p, EIGENSTATE_WIDTH_CAP, 0)?;
        if (e.abs() - 1.0).abs() > 1e-8 {
            return Err(Error::Internal(format!(
                "{p} has expectation {e} on the constructed state"
            )));
        }
    }
    Ok(state)
}

/// Normalized vector of i.i.d. complex normals (Haar-distributed).
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(width: usize, rng: &mut R) -> Result<QuantumState> {
    let dim = dim_of(width)?;
    QuantumState::pure_normalized(width, random_vector(dim, rng))
}

/// Random density operator `G G† / tr(G G†)` with `G` a `dim × rank` complex
/// Gaussian matrix.
pub fn random_mixed_state<R: Rng + ?Sized>(
    width: usize,
    rank: usize,
    rng: &mut R,
) -> Result<QuantumState> {
    let dim = dim_of(width)?;
    let rank = rank.max(1);
    let g = DMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    // enforce exact Hermiticity after division
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    QuantumState::mixed(width, rho)
}

/// Tensor product of per-block vectors laid out on the partition's qubits.
/// `factors[k]` belongs to `part.blocks()[k]`, its first qubit most significant.
pub fn product_amplitudes(part: &Partition, factors: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    if factors.len() != part.block_count() {
        return Err(Error::InvalidArgument(format!(
            "{} factors for {} blocks",
            factors.len(),
            part.block_count()
        )));
    }
    let width = part.width();
    for (b, f) in part.blocks().iter().zip(factors) {
        if f.len() != 1usize << b.len() {
            return Err(Error::InvalidArgument(format!(
                "factor of length {} for a block of {} qubits",
                f.len(),
                b.len()
            )));
        }
    }
    let dim = dim_of(width)?;
    let mut out = vec![ONE; dim];
    for (idx, amp) in out.iter_mut().enumerate() {
        for (b, f) in part.blocks().iter().zip(factors) {
            *amp *= f[local_index(idx, b, width)];
        }
    }
    Ok(out)
}

/// Bits of global index `idx` on the qubits of `block`, packed in block order.
pub(crate) fn local_index(idx: usize, block: &[usize], width: usize) -> usize {
    block
        .iter()
        .fold(0usize, |l, &q| (l << 1) | ((idx >> (width - 1 - q)) & 1))
}

/// Product of independent Haar-random pure states, one per block.
pub fn random_product_state(part: &Partition, seed: u64) -> Result<QuantumState> {
    if part.width() > PURE_WIDTH_CAP {
        return Err(Error::cap("pure state width", part.width(), PURE_WIDTH_CAP));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors: Vec<_> = part
        .blocks()
        .iter()
        .map(|b| random_vector(1usize << b.len(), &mut rng))
        .collect();
    QuantumState::pure_normalized(part.width(), product_amplitudes(part, &factors)?)
}

/// `Σ v_i O_i` for pairwise anticommuting `O_i` and a real unit vector `v`.
pub fn anticommuting_unit_combination(
    ops: &[PauliString],
    v: &[f64],
) -> Result<DMatrix<Complex64>> {
    let width = check_family(ops, crate::pauli::MATRIX_WIDTH_CAP)?;
    if ops.len() != v.len() {
        return Err(Error::InvalidArgument(format!(
            "{} operators but {} coefficients",
            ops.len(),
            v.len()
        )));
    }
    let norm: f64 = v.iter().map(|x| x * x).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidArgument(format!(
            "coefficient vector has squared norm {norm}"
        )));
    }
    for (i, p) in ops.iter().enumerate() {
        for q in &ops[i + 1..] {
            if !p.anticommutes(q)? {
                return Err(Error::NotAnticommuting(p.to_string(), q.to_string()));
            }
        }
    }
    let dim = 1usize << width;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for (p, &c) in ops.iter().zip(v) {
        m += p.to_matrix()? * Complex64::new(c, 0.0);
    }
    Ok(m)
}
