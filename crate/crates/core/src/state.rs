//! Joint coin–position state of the walker on a finite, guarded lattice.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|alpha|^2 + |beta|^2 = 1` for initial coin states.
pub const NORM_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A lattice able to host `half_width` steps of a walk started at the
/// origin.
///
/// Positions run over `[-(N+1), N+1]`, i.e. `2N+3` cells. The outermost two
/// are guard cells which stay empty for as long as `t <= N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    half_width: usize,
}

impl LatticeSpec {
    pub fn new(half_width: usize) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::InvalidParameter("lattice half-width must be at least 1".into()));
        }
        Ok(Self { half_width })
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn padded_size(&self) -> usize {
        2 * self.half_width + 3
    }

    /// Zero-based index of position 0.
    pub fn origin_index(&self) -> usize {
        self.half_width + 1
    }

    /// Largest `|x|` with a cell on this lattice (the guard cells).
    pub fn limit(&self) -> i64 {
        self.half_width as i64 + 1
    }

    pub fn position_index(&self, x: i64) -> Result<usize> {
        let limit = self.limit();
        if x < -limit || x > limit {
            return Err(Error::PositionOutOfRange { x, limit });
        }
        Ok((x + limit) as usize)
    }

    pub fn position(&self, index: usize) -> i64 {
        index as i64 - self.limit()
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let limit = self.limit();
        -limit..=limit
    }
}

/// Amplitudes `alpha_x(t)` (heads) and `beta_x(t)` (tails) over a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    heads: Vec<Complex64>,
    tails: Vec<Complex64>,
    lattice: LatticeSpec,
    time: usize,
}

/// Walker at the origin with coin state `alpha|H> + beta|T>`.
pub fn initial_state(alpha: Complex64, beta: Complex64, lattice: LatticeSpec) -> Result<WalkerState> {
    check_normalized(alpha, beta)?;
    let mut state = WalkerState::zero(lattice);
    let mid = lattice.origin_index();
    state.heads[mid] = alpha;
    state.tails[mid] = beta;
    Ok(state)
}

pub(crate) fn check_normalized(alpha: Complex64, beta: Complex64) -> Result<()> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    let deficit = 1.0 - norm;
    // written so that NaN fails the check
    if !(deficit.abs() <= NORM_TOL) {
        return Err(Error::NotNormalized { norm, deficit });
    }
    Ok(())
}

impl WalkerState {
    pub fn zero(lattice: LatticeSpec) -> Self {
        let n = lattice.padded_size();
        Self {
            heads: vec![ZERO; n],
            tails: vec![ZERO; n],
            lattice,
            time: 0,
        }
    }

    /// Builds a state from full-lattice amplitude rows. No normalization
    /// is enforced.
    pub fn from_amplitudes(
        heads: Vec<Complex64>,
        tails: Vec<Complex64>,
        lattice: LatticeSpec,
        time: usize,
    ) -> Result<Self> {
        let n = lattice.padded_size();
        if heads.len() != n || tails.len() != n {
            return Err(Error::InvalidInput(format!(
                "amplitude rows have lengths {} and {}, lattice needs {n}",
                heads.len(),
                tails.len()
            )));
        }
        Ok(Self { heads, tails, lattice, time })
    }

    pub fn heads(&self) -> &[Complex64] {
        &self.heads
    }

    pub fn tails(&self) -> &[Complex64] {
        &self.tails
    }

    pub fn lattice(&self) -> LatticeSpec {
        self.lattice
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub(crate) fn rows_mut(&mut self) -> (&mut [Complex64], &mut [Complex64]) {
        (&mut self.heads, &mut self.tails)
    }

    pub(crate) fn set_time(&mut self, time: usize) {
        self.time = time;
    }

    /// `(alpha_x, beta_x)` at position `x`.
    pub fn amplitudes_at(&self, x: i64) -> Result<(Complex64, Complex64)> {
        let i = self.lattice.position_index(x)?;
        Ok((self.heads[i], self.tails[i]))
    }

    pub fn probability_at(&self, x: i64) -> Result<f64> {
        let (a, b) = self.amplitudes_at(x)?;
        Ok(a.norm_sqr() + b.norm_sqr())
    }

    pub fn total_probability(&self) -> f64 {
        self.heads
            .iter()
            .zip(&self.tails)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    /// Per-position probabilities over the whole padded lattice.
    pub fn distribution(&self) -> ProbabilityDistribution {
        let probs = self
            .heads
            .iter()
            .zip(&self.tails)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        ProbabilityDistribution {
            positions: self.lattice.positions().collect(),
            probs,
            time: self.time,
        }
    }

    /// Guard-free column vector over positions `-N..=N`: the heads block
    /// followed by the tails block, `4N+2` entries.
    pub fn window_column(&self) -> Vec<Complex64> {
        let n = self.lattice.padded_size();
        self.heads[1..n - 1]
            .iter()
            .chain(&self.tails[1..n - 1])
            .copied()
            .collect()
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.heads.iter_mut().chain(out.tails.iter_mut()).for_each(|a| *a *= factor);
        out
    }
}

/// Probabilities `P(x, t)` at strictly increasing positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    positions: Vec<i64>,
    probs: Vec<f64>,
    time: usize,
}

impl ProbabilityDistribution {
    pub fn new(positions: Vec<i64>, probs: Vec<f64>, time: usize) -> Result<Self> {
        if positions.len() != probs.len() {
            return Err(Error::InvalidInput(format!(
                "{} positions but {} probabilities",
                positions.len(),
                probs.len()
            )));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("positions must be strictly increasing".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidInput(format!("probability {p} is not a finite nonnegative number")));
        }
        Ok(Self { positions, probs, time })
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, f64)> + ExactSizeIterator + '_ {
        self.positions.iter().copied().zip(self.probs.iter().copied())
    }

    pub fn get(&self, x: i64) -> Option<f64> {
        self.positions.binary_search(&x).ok().map(|i| self.probs[i])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Restriction to positions with `|x| <= half_width`.
    pub fn window(&self, half_width: usize) -> Self {
        let h = half_width as i64;
        let (positions, probs) = self.iter().filter(|(x, _)| x.abs() <= h).unzip();
        Self { positions, probs, time: self.time }
    }

    /// The distribution of the reflected walk, `x -> -x`.
    pub fn mirrored(&self) -> Self {
        let (positions, probs) = self.iter().rev().map(|(x, p)| (-x, p)).unzip();
        Self { positions, probs, time: self.time }
    }

    /// Max-abs elementwise difference, defined only for identical position
    /// sets.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.positions != other.positions {
            return Err(Error::InvalidInput("distributions cover different positions".into()));
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}
