//! Coin-then-shift evolution.
//!
//! Two engines advance a walk:
//!
//! * the amplitude recurrence on the guarded lattice ([`Walk`], [`evolve`]),
//!   `O(n)` per step; this is the production path;
//! * the dense step unitary `U = S (C ⊗ I)` on the `4N+2`-dimensional
//!   guard-free window ([`build_step_unitary`], [`evolve_dense`]), used as an
//!   oracle for the recurrence.
//!
//! The dense shift is cyclic, while the recurrence lattice has zero guard
//! cells. They agree only while no amplitude reaches the window boundary,
//! so both engines refuse to run more than `N` steps.

use num_complex::Complex64;

use crate::coin::{make_coin, CoinMatrix, CoinParams, UNITARY_TOL};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::state::{check_normalized, initial_state, LatticeSpec, ProbabilityDistribution, WalkerState};

/// Largest window half-width the dense oracle accepts.
pub const DENSE_MAX_HALF_WIDTH: usize = 200;

/// Agreement bound between the recurrence and dense engines.
pub const ORACLE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One coin-then-shift step from `(src_h, src_t)` into `(dst_h, dst_t)`.
fn advance(
    coin: &CoinMatrix,
    src_h: &[Complex64],
    src_t: &[Complex64],
    dst_h: &mut [Complex64],
    dst_t: &mut [Complex64],
) {
    let [[c00, c01], [c10, c11]] = *coin.entries();
    let n = src_h.len();
    for m in 1..n - 1 {
        dst_h[m] = c00 * src_h[m - 1] + c01 * src_t[m - 1];
        dst_t[m] = c10 * src_h[m + 1] + c11 * src_t[m + 1];
    }
    dst_h[0] = ZERO;
    dst_t[0] = ZERO;
    dst_h[n - 1] = ZERO;
    dst_t[n - 1] = ZERO;
}

/// A walk in progress: the current state plus a scratch buffer that the
/// recurrence writes into before the two are swapped.
#[derive(Debug, Clone)]
pub struct Walk {
    state: WalkerState,
    scratch_h: Vec<Complex64>,
    scratch_t: Vec<Complex64>,
    coin: CoinMatrix,
}

impl Walk {
    /// The coin is used as given; no unitarity check is made here.
    pub fn new(state: WalkerState, coin: CoinMatrix) -> Self {
        let n = state.lattice().padded_size();
        Self {
            state,
            scratch_h: vec![ZERO; n],
            scratch_t: vec![ZERO; n],
            coin,
        }
    }

    pub fn state(&self) -> &WalkerState {
        &self.state
    }

    pub fn into_state(self) -> WalkerState {
        self.state
    }

    pub fn coin(&self) -> &CoinMatrix {
        &self.coin
    }

    /// Steps left before amplitude would reach the guard cells.
    pub fn remaining(&self) -> usize {
        self.state.lattice().half_width().saturating_sub(self.state.time())
    }

    pub fn step(&mut self) -> Result<()> {
        self.check_room(1)?;
        let t = self.state.time();
        {
            let (h, tl) = self.state.rows_mut();
            advance(&self.coin, h, tl, &mut self.scratch_h, &mut self.scratch_t);
            h.swap_with_slice(&mut self.scratch_h);
            tl.swap_with_slice(&mut self.scratch_t);
        }
        self.state.set_time(t + 1);
        Ok(())
    }

    pub fn run(&mut self, steps: usize) -> Result<()> {
        self.check_room(steps)?;
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }

    fn check_room(&self, requested: usize) -> Result<()> {
        if requested > self.remaining() {
            return Err(Error::LatticeExhausted {
                time: self.state.time(),
                requested,
                half_width: self.state.lattice().half_width(),
            });
        }
        Ok(())
    }
}

pub fn step_recurrence(state: &WalkerState, coin: &CoinMatrix) -> Result<WalkerState> {
    let mut walk = Walk::new(state.clone(), *coin);
    walk.step()?;
    Ok(walk.into_state())
}

pub fn evolve(state: &WalkerState, coin: &CoinMatrix, steps: usize) -> Result<WalkerState> {
    let mut walk = Walk::new(state.clone(), *coin);
    walk.run(steps)?;
    Ok(walk.into_state())
}

/// Walk of `steps` steps from `(alpha|H> + beta|T>) ⊗ |0>` on a lattice of
/// half-width `steps`. The result covers all `2·steps + 3` lattice cells,
/// guard cells included.
pub fn run_walk(params: &CoinParams, alpha: Complex64, beta: Complex64, steps: usize) -> Result<ProbabilityDistribution> {
    run_walk_on(LatticeSpec::new(steps)?, params, alpha, beta, steps)
}

/// As [`run_walk`] but on a caller-chosen lattice, which may be wider than
/// `steps`.
pub fn run_walk_on(
    lattice: LatticeSpec,
    params: &CoinParams,
    alpha: Complex64,
    beta: Complex64,
    steps: usize,
) -> Result<ProbabilityDistribution> {
    let state = initial_state(alpha, beta, lattice)?;
    Ok(evolve(&state, &make_coin(params), steps)?.distribution())
}

fn check_half_width(half_width: usize) -> Result<()> {
    if half_width == 0 {
        return Err(Error::InvalidParameter("window half-width must be at least 1".into()));
    }
    if half_width > DENSE_MAX_HALF_WIDTH {
        return Err(Error::InvalidParameter(format!(
            "dense oracle is limited to half-width {DENSE_MAX_HALF_WIDTH}, got {half_width}"
        )));
    }
    Ok(())
}

/// `(2N+1)`-cyclic down-shift: `M|x> = |x+1>`, with `|N>` wrapping to `|-N>`.
fn cyclic_shift(half_width: usize) -> DenseMatrix {
    let dim = 2 * half_width + 1;
    DenseMatrix::from_fn(dim, dim, |r, c| {
        if r == (c + 1) % dim {
            Complex64::new(1.0, 0.0)
        } else {
            ZERO
        }
    })
}

/// `S = |H><H| ⊗ M + |T><T| ⊗ Mᵀ` over the window `-N..=N`.
pub fn build_shift_matrix(half_width: usize) -> Result<DenseMatrix> {
    check_half_width(half_width)?;
    let m = cyclic_shift(half_width);
    let one = Complex64::new(1.0, 0.0);
    let proj_h = DenseMatrix::from_fn(2, 2, |r, c| if r == 0 && c == 0 { one } else { ZERO });
    let proj_t = DenseMatrix::from_fn(2, 2, |r, c| if r == 1 && c == 1 { one } else { ZERO });
    Ok(proj_h.kron(&m).add(&proj_t.kron(&m.transpose())))
}

/// Dense single-step operator `S (C ⊗ I)` on the guard-free window.
#[derive(Debug, Clone, PartialEq)]
pub struct StepUnitary {
    matrix: DenseMatrix,
    window_half_width: usize,
}

impl StepUnitary {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn window_half_width(&self) -> usize {
        self.window_half_width
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, column: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(column)
    }

    pub fn unitarity_deviation(&self) -> f64 {
        self.matrix.unitarity_deviation()
    }
}

pub fn build_step_unitary(coin: &CoinMatrix, half_width: usize) -> Result<StepUnitary> {
    let deviation = coin.unitarity_deviation();
    if !(deviation <= UNITARY_TOL) {
        return Err(Error::NonUnitaryCoin { deviation });
    }
    let shift = build_shift_matrix(half_width)?;
    let c = DenseMatrix::from_fn(2, 2, |r, k| coin.entry(r, k));
    let lifted = c.kron(&DenseMatrix::identity(2 * half_width + 1));
    Ok(StepUnitary {
        matrix: shift.matmul(&lifted),
        window_half_width: half_width,
    })
}

/// `(alpha|H> + beta|T>) ⊗ |0>` as a `4N+2` column.
pub fn initial_column(alpha: Complex64, beta: Complex64, half_width: usize) -> Vec<Complex64> {
    let dim = 2 * half_width + 1;
    let mut col = vec![ZERO; 2 * dim];
    col[half_width] = alpha;
    col[dim + half_width] = beta;
    col
}

/// Per-position probabilities of a window column.
pub fn column_distribution(column: &[Complex64], half_width: usize, time: usize) -> ProbabilityDistribution {
    let dim = 2 * half_width + 1;
    assert_eq!(column.len(), 2 * dim, "column does not match the window");
    let h = half_width as i64;
    let probs = (0..dim).map(|i| column[i].norm_sqr() + column[dim + i].norm_sqr()).collect();
    ProbabilityDistribution::new((-h..=h).collect(), probs, time)
        .expect("window positions are increasing and probabilities nonnegative")
}

fn check_dense_run(alpha: Complex64, beta: Complex64, half_width: usize, steps: usize) -> Result<()> {
    check_half_width(half_width)?;
    check_normalized(alpha, beta)?;
    if steps > half_width {
        return Err(Error::LatticeExhausted { time: 0, requested: steps, half_width });
    }
    Ok(())
}

/// Amplitude column after `steps` applications of the dense step unitary.
pub fn evolve_dense_column(
    alpha: Complex64,
    beta: Complex64,
    coin: &CoinMatrix,
    half_width: usize,
    steps: usize,
) -> Result<Vec<Complex64>> {
    check_dense_run(alpha, beta, half_width, steps)?;
    let u = build_step_unitary(coin, half_width)?;
    let mut col = initial_column(alpha, beta, half_width);
    for _ in 0..steps {
        col = u.apply(&col);
    }
    Ok(col)
}

pub fn evolve_dense(
    alpha: Complex64,
    beta: Complex64,
    coin: &CoinMatrix,
    half_width: usize,
    steps: usize,
) -> Result<ProbabilityDistribution> {
    let col = evolve_dense_column(alpha, beta, coin, half_width, steps)?;
    Ok(column_distribution(&col, half_width, steps))
}

/// Worst amplitude disagreement between the two engines at one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiscrepancy {
    pub t: usize,
    pub max_abs: f64,
    /// Position of the worst entry.
    pub position: i64,
    /// 0 for the heads amplitude, 1 for tails.
    pub coin_index: usize,
}

impl StepDiscrepancy {
    pub fn within(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }
}

/// Runs the recurrence (with `recurrence_coin`) and the dense oracle (with
/// `dense_coin`) side by side for `max_steps` steps on a window of the same
/// half-width, reporting the amplitude discrepancy at every `t` from 0.
///
/// The two coins are normally identical; passing different ones lets a
/// caller check that a corrupted engine is caught.
pub fn compare_engines(
    recurrence_coin: &CoinMatrix,
    dense_coin: &CoinMatrix,
    alpha: Complex64,
    beta: Complex64,
    max_steps: usize,
) -> Result<Vec<StepDiscrepancy>> {
    check_dense_run(alpha, beta, max_steps, max_steps)?;
    let u = build_step_unitary(dense_coin, max_steps)?;
    let lattice = LatticeSpec::new(max_steps)?;
    let mut walk = Walk::new(initial_state(alpha, beta, lattice)?, *recurrence_coin);
    let mut col = initial_column(alpha, beta, max_steps);
    let dim = 2 * max_steps + 1;

    let mut report = Vec::with_capacity(max_steps + 1);
    for t in 0..=max_steps {
        if t > 0 {
            walk.step()?;
            col = u.apply(&col);
        }
        let fast = walk.state().window_column();
        let mut worst = StepDiscrepancy { t, max_abs: 0.0, position: 0, coin_index: 0 };
        for (i, (a, b)) in fast.iter().zip(&col).enumerate() {
            let d = (a - b).norm();
            // NaN must register as a failure
            if d > worst.max_abs || d.is_nan() {
                worst.max_abs = if d.is_nan() { f64::INFINITY } else { d };
                worst.position = (i % dim) as i64 - max_steps as i64;
                worst.coin_index = i / dim;
            }
        }
        report.push(worst);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn head() -> (Complex64, Complex64) {
        (c(1.0, 0.0), c(0.0, 0.0))
    }

    fn coin_deg(t: f64, p1: f64, p2: f64) -> CoinMatrix {
        make_coin(&CoinParams::from_degrees(t, p1, p2, true).unwrap())
    }

    #[test]
    fn first_step_from_head() {
        let p = CoinParams::new(0.7, 0.4, 1.1).unwrap();
        let (a, b) = head();
        let s0 = initial_state(a, b, LatticeSpec::new(3).unwrap()).unwrap();
        let s1 = step_recurrence(&s0, &make_coin(&p)).unwrap();
        assert_eq!(s1.time(), 1);
        let (h, _) = s1.amplitudes_at(1).unwrap();
        let (_, t) = s1.amplitudes_at(-1).unwrap();
        assert!((h - c(p.theta().cos(), 0.0)).norm() < 1e-15);
        assert!((t - Complex64::from_polar(p.theta().sin(), p.phi2())).norm() < 1e-15);
        assert!(s1.probability_at(0).unwrap() == 0.0);
    }

    #[test]
    fn grover_swaps_and_returns() {
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let s0 = initial_state(a, b, LatticeSpec::new(4).unwrap()).unwrap();
        let coin = coin_deg(90.0, 0.0, 0.0);
        let s1 = step_recurrence(&s0, &coin).unwrap();
        let (h1, _) = s1.amplitudes_at(1).unwrap();
        let (_, t1) = s1.amplitudes_at(-1).unwrap();
        assert!((h1 - b).norm() < 1e-15);
        assert!((t1 - a).norm() < 1e-15);
        let s2 = evolve(&s0, &coin, 2).unwrap();
        let (h0, t0) = s2.amplitudes_at(0).unwrap();
        assert!((h0 - a).norm() < 1e-15 && (t0 - b).norm() < 1e-15);
        assert!((s2.probability_at(0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pauli_z_runs_to_the_corners() {
        let (a, b) = (c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2));
        let s0 = initial_state(a, b, LatticeSpec::new(7).unwrap()).unwrap();
        for t in 0..=7usize {
            let s = evolve(&s0, &coin_deg(0.0, 0.0, 0.0), t).unwrap();
            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            let (h, _) = s.amplitudes_at(t as i64).unwrap();
            let (_, tl) = s.amplitudes_at(-(t as i64)).unwrap();
            assert!((h - a).norm() < 1e-15);
            assert!((tl - b * sign).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_steps_is_identity() {
        let s0 = initial_state(c(0.6, 0.0), c(0.0, 0.8), LatticeSpec::new(2).unwrap()).unwrap();
        assert_eq!(evolve(&s0, &coin_deg(12.0, 34.0, 56.0), 0).unwrap(), s0);
    }

    #[test]
    fn refuses_to_run_past_the_lattice() {
        let (a, b) = head();
        let s0 = initial_state(a, b, LatticeSpec::new(2).unwrap()).unwrap();
        let coin = coin_deg(45.0, 0.0, 0.0);
        let s2 = evolve(&s0, &coin, 2).unwrap();
        assert!(matches!(
            step_recurrence(&s2, &coin),
            Err(Error::LatticeExhausted { time: 2, requested: 1, half_width: 2 })
        ));
        assert!(evolve(&s0, &coin, 3).is_err());
    }

    #[test]
    fn guard_cells_stay_empty() {
        let s0 = initial_state(c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2), LatticeSpec::new(30).unwrap()).unwrap();
        let mut walk = Walk::new(s0, coin_deg(20.0, 50.0, 80.0));
        for _ in 0..30 {
            walk.step().unwrap();
            let s = walk.state();
            let n = s.lattice().padded_size();
            for i in [0, n - 1] {
                assert_eq!(s.heads()[i], ZERO);
                assert_eq!(s.tails()[i], ZERO);
            }
        }
    }

    #[test]
    fn shift_matrix_for_two() {
        let s = build_shift_matrix(2).unwrap();
        // ones as printed for the 10x10 example, (row, col)
        let ones = [(0, 4), (1, 0), (2, 1), (3, 2), (4, 3), (5, 6), (6, 7), (7, 8), (8, 9), (9, 5)];
        for r in 0..10 {
            for col in 0..10 {
                let want = if ones.contains(&(r, col)) { 1.0 } else { 0.0 };
                assert_eq!(s.get(r, col), c(want, 0.0), "entry ({r}, {col})");
            }
        }
        assert!(build_shift_matrix(0).is_err());
    }

    #[test]
    fn shift_is_a_permutation() {
        for n in 1..12 {
            assert!(build_shift_matrix(n).unwrap().is_permutation());
        }
    }

    #[test]
    fn shift_moves_heads_right() {
        let s = build_shift_matrix(3).unwrap();
        let col = initial_column(c(1.0, 0.0), ZERO, 3);
        let moved = s.mul_vec(&col);
        assert_eq!(moved[4], c(1.0, 0.0));
        assert_eq!(moved.iter().filter(|v| **v != ZERO).count(), 1);
    }

    #[test]
    fn dense_hadamard_two_steps() {
        let (a, b) = head();
        let d = evolve_dense(a, b, &coin_deg(45.0, 0.0, 0.0), 2, 2).unwrap();
        let want = [(-2, 0.25), (-1, 0.0), (0, 0.5), (1, 0.0), (2, 0.25)];
        for (x, p) in want {
            assert!((d.get(x).unwrap() - p).abs() < 1e-15, "P({x})");
        }
    }

    #[test]
    fn dense_zero_steps() {
        let d = evolve_dense(c(0.6, 0.0), c(0.8, 0.0), &coin_deg(10.0, 20.0, 30.0), 4, 0).unwrap();
        assert_eq!(d.len(), 9);
        assert!((d.get(0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dense_refuses_wraparound() {
        let (a, b) = head();
        let coin = coin_deg(45.0, 0.0, 0.0);
        assert!(matches!(evolve_dense(a, b, &coin, 3, 4), Err(Error::LatticeExhausted { .. })));
        assert!(evolve_dense(a, b, &coin, DENSE_MAX_HALF_WIDTH + 1, 1).is_err());
    }

    #[test]
    fn dense_rejects_non_unitary_coin() {
        let bad = CoinMatrix::from_entries([[c(1.0, 0.0), ZERO], [ZERO, ZERO]]);
        assert!(matches!(build_step_unitary(&bad, 2), Err(Error::NonUnitaryCoin { .. })));
    }

    #[test]
    fn step_unitary_is_unitary() {
        for n in [1, 2, 5, 20, 50] {
            let u = build_step_unitary(&coin_deg(33.0, 70.0, 10.0), n).unwrap();
            assert!(u.unitarity_deviation() <= 1e-10, "N={n}");
        }
    }

    #[test]
    fn compare_engines_agrees_and_catches_corruption() {
        let (a, b) = (c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2));
        let coin = coin_deg(45.0, 0.0, 0.0);
        let report = compare_engines(&coin, &coin, a, b, 12).unwrap();
        assert_eq!(report.len(), 13);
        assert!(report.iter().all(|r| r.within(ORACLE_TOL)));

        let mut e = *coin.entries();
        e[0][0] += c(1e-6, 0.0);
        let bad = CoinMatrix::from_entries(e);
        let report = compare_engines(&bad, &coin, a, b, 12).unwrap();
        assert!(report[0].within(ORACLE_TOL));
        assert!(report.iter().any(|r| !r.within(ORACLE_TOL)));
    }
}
