//! The general three-parameter coin and its named special cases.
//!
//! A coin is fixed by a rotation angle `theta` and two phases `phi1`,
//! `phi2`. In the coin basis (index 0 = |H>, index 1 = |T>) it reads
//!
//! ```text
//! [ cos θ             e^{iφ₁} sin θ         ]
//! [ e^{iφ₂} sin θ    -e^{i(φ₁+φ₂)} cos θ    ]
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for the unitarity invariant of a coin.
pub const UNITARY_TOL: f64 = 1e-12;

/// Whether constructors reduce angles into their canonical ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleMode {
    #[default]
    Normalize,
    Raw,
}

/// Rotation and phase angles of the general coin, in radians.
///
/// [`CoinParams::new`] reduces `theta` into `[0, 2π)` and both phases into
/// `[0, π)`. [`CoinParams::raw`] keeps the angles as given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    theta: f64,
    phi1: f64,
    phi2: f64,
}

fn reduce(angle: f64, period: f64) -> f64 {
    let r = angle.rem_euclid(period);
    // rem_euclid rounds up to `period` for tiny negative inputs
    if r >= period {
        0.0
    } else {
        r
    }
}

fn check_finite(theta: f64, phi1: f64, phi2: f64) -> Result<()> {
    for (name, v) in [("theta", theta), ("phi1", phi1), ("phi2", phi2)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

impl CoinParams {
    pub fn new(theta: f64, phi1: f64, phi2: f64) -> Result<Self> {
        check_finite(theta, phi1, phi2)?;
        Ok(Self {
            theta: reduce(theta, TAU),
            phi1: reduce(phi1, PI),
            phi2: reduce(phi2, PI),
        })
    }

    /// Angles taken verbatim. Phases in `[π, 2π)` give coins that the
    /// normalizing constructor cannot express.
    pub fn raw(theta: f64, phi1: f64, phi2: f64) -> Result<Self> {
        check_finite(theta, phi1, phi2)?;
        Ok(Self { theta, phi1, phi2 })
    }

    pub fn with_mode(theta: f64, phi1: f64, phi2: f64, mode: AngleMode) -> Result<Self> {
        match mode {
            AngleMode::Normalize => Self::new(theta, phi1, phi2),
            AngleMode::Raw => Self::raw(theta, phi1, phi2),
        }
    }

    pub fn from_degrees(theta: f64, phi1: f64, phi2: f64, normalize: bool) -> Result<Self> {
        let mode = if normalize { AngleMode::Normalize } else { AngleMode::Raw };
        Self::with_mode(theta.to_radians(), phi1.to_radians(), phi2.to_radians(), mode)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi1(&self) -> f64 {
        self.phi1
    }

    pub fn phi2(&self) -> f64 {
        self.phi2
    }

    pub fn degrees(&self) -> (f64, f64, f64) {
        (self.theta.to_degrees(), self.phi1.to_degrees(), self.phi2.to_degrees())
    }
}

/// A 2×2 complex matrix acting on the coin space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    entries: [[Complex64; 2]; 2],
}

impl CoinMatrix {
    /// Wraps arbitrary entries without checking unitarity.
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Self::from_entries([[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self::from_entries(out)
    }

    pub fn determinant(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let e = &self.entries;
        Self::from_entries([[e[0][0] * k, e[0][1] * k], [e[1][0] * k, e[1][1] * k]])
    }

    /// Max-abs entry of `M†M − I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let g = self.adjoint().matmul(self);
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let id = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g.entries[r][c] - id).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }
}

/// Builds the general coin for `params`.
pub fn make_coin(params: &CoinParams) -> CoinMatrix {
    let (s, c) = params.theta.sin_cos();
    let e1 = Complex64::from_polar(1.0, params.phi1);
    let e2 = Complex64::from_polar(1.0, params.phi2);
    let e12 = Complex64::from_polar(1.0, params.phi1 + params.phi2);
    CoinMatrix::from_entries([[Complex64::new(c, 0.0), e1 * s], [e2 * s, -e12 * c]])
}

pub fn check_unitary(m: &CoinMatrix, tol: f64) -> bool {
    m.is_unitary(tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedCoin {
    Hadamard,
    Grover,
    Fourier,
}

impl NamedCoin {
    pub const ALL: [NamedCoin; 3] = [NamedCoin::Hadamard, NamedCoin::Grover, NamedCoin::Fourier];

    pub fn name(self) -> &'static str {
        match self {
            NamedCoin::Hadamard => "hadamard",
            NamedCoin::Grover => "grover",
            NamedCoin::Fourier => "fourier",
        }
    }

    pub fn params(self) -> CoinParams {
        let (theta, phi1, phi2) = match self {
            NamedCoin::Hadamard => (FRAC_PI_4, 0.0, 0.0),
            NamedCoin::Grover => (FRAC_PI_2, 0.0, 0.0),
            NamedCoin::Fourier => (FRAC_PI_4, FRAC_PI_2, FRAC_PI_2),
        };
        CoinParams { theta, phi1, phi2 }
    }
}

impl fmt::Display for NamedCoin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedCoin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim();
        NamedCoin::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(key))
            .ok_or_else(|| Error::UnknownCoin {
                name: s.to_string(),
                valid: NamedCoin::ALL.map(NamedCoin::name).join(", "),
            })
    }
}

pub fn named_coin(name: &str) -> Result<CoinParams> {
    name.parse::<NamedCoin>().map(NamedCoin::params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs_diff(a: &CoinMatrix, b: &CoinMatrix) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for col in 0..2 {
                worst = worst.max((a.entry(r, col) - b.entry(r, col)).norm());
            }
        }
        worst
    }

    #[test]
    fn hadamard_entries() {
        let m = make_coin(&named_coin("hadamard").unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = CoinMatrix::from_entries([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]);
        assert!(max_abs_diff(&m, &want) < 1e-15);
    }

    #[test]
    fn theta_zero_is_pauli_z() {
        let m = make_coin(&CoinParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!(m.entry(0, 0), c(1.0, 0.0));
        assert_eq!(m.entry(0, 1).norm(), 0.0);
        assert_eq!(m.entry(1, 0).norm(), 0.0);
        assert_eq!(m.entry(1, 1), c(-1.0, 0.0));
    }

    #[test]
    fn theta_ninety_is_pauli_x() {
        let m = make_coin(&CoinParams::from_degrees(90.0, 0.0, 0.0, true).unwrap());
        let want = CoinMatrix::from_entries([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        assert!(max_abs_diff(&m, &want) < 1e-15);
    }

    #[test]
    fn named_coin_angles() {
        let h = named_coin("hadamard").unwrap();
        assert_eq!((h.theta(), h.phi1(), h.phi2()), (FRAC_PI_4, 0.0, 0.0));
        let g = named_coin("grover").unwrap();
        assert_eq!((g.theta(), g.phi1(), g.phi2()), (FRAC_PI_2, 0.0, 0.0));
        let f = named_coin("fourier").unwrap();
        assert_eq!((f.theta(), f.phi1(), f.phi2()), (FRAC_PI_4, FRAC_PI_2, FRAC_PI_2));
    }

    #[test]
    fn unknown_coin_lists_options() {
        let err = named_coin("pauli").unwrap_err();
        let msg = err.to_string();
        for name in ["hadamard", "grover", "fourier"] {
            assert!(msg.contains(name), "{msg}");
        }
    }

    #[test]
    fn non_finite_angles_rejected() {
        assert!(matches!(CoinParams::new(f64::NAN, 0.0, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(CoinParams::raw(0.0, f64::INFINITY, 0.0), Err(Error::InvalidParameter(_))));
        assert!(CoinParams::new(0.0, 0.0, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn normalization_ranges() {
        let p = CoinParams::new(-0.5, 4.0, -1e-300).unwrap();
        assert!((p.theta() - (TAU - 0.5)).abs() < 1e-15);
        assert!((p.phi1() - (4.0 - PI)).abs() < 1e-15);
        assert!(p.phi2() >= 0.0 && p.phi2() < PI);
        let raw = CoinParams::raw(-0.5, 4.0, 0.0).unwrap();
        assert_eq!((raw.theta(), raw.phi1()), (-0.5, 4.0));
    }

    #[test]
    fn projector_is_not_unitary() {
        let m = CoinMatrix::from_entries([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!(!check_unitary(&m, 1e-12));
    }

    #[test]
    fn oblique_coin_is_unitary() {
        let p = CoinParams::from_degrees(33.0, 70.0, 10.0, true).unwrap();
        let m = make_coin(&p);
        // explicit M†M, independent of CoinMatrix::matmul
        let e = m.entries();
        for r in 0..2 {
            for col in 0..2 {
                let g = e[0][r].conj() * e[0][col] + e[1][r].conj() * e[1][col];
                let id = if r == col { 1.0 } else { 0.0 };
                assert!((g - id).norm() < 1e-12);
            }
        }
        assert!(check_unitary(&m, 1e-12));
    }

    fn angle() -> impl Strategy<Value = f64> {
        -20.0f64..20.0
    }

    proptest! {
        #[test]
        fn coin_is_unitary(t in angle(), p1 in angle(), p2 in angle()) {
            let m = make_coin(&CoinParams::raw(t, p1, p2).unwrap());
            prop_assert!(m.is_unitary(UNITARY_TOL));
        }

        #[test]
        fn determinant_is_minus_phase(t in angle(), p1 in angle(), p2 in angle()) {
            let p = CoinParams::new(t, p1, p2).unwrap();
            let det = make_coin(&p).determinant();
            let want = -Complex64::from_polar(1.0, p.phi1() + p.phi2());
            prop_assert!((det - want).norm() < 1e-12);
        }

        #[test]
        fn half_turn_flips_sign(t in 0.0f64..PI, p1 in 0.0f64..PI, p2 in 0.0f64..PI) {
            let a = make_coin(&CoinParams::new(t, p1, p2).unwrap());
            let b = make_coin(&CoinParams::new(t + PI, p1, p2).unwrap());
            // θ+π is itself rounded, so agreement is to a few ulps
            prop_assert!(max_abs_diff(&b, &a.scale(Complex64::new(-1.0, 0.0))) < 2e-15);
        }

        #[test]
        fn normalized_angles_in_range(t in -1e3f64..1e3, p1 in -1e3f64..1e3, p2 in -1e3f64..1e3) {
            let p = CoinParams::new(t, p1, p2).unwrap();
            prop_assert!((0.0..TAU).contains(&p.theta()));
            prop_assert!((0.0..PI).contains(&p.phi1()));
            prop_assert!((0.0..PI).contains(&p.phi2()));
        }
    }
}
