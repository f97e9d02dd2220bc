//! Eigenmodes of two capacitively-coupled grounded transmission-line
//! resonators.
//!
//! The coupling capacitor scatters travelling waves like a fixed
//! semi-transparent mirror with frequency-dependent reflectivity, and the
//! allowed mode frequencies satisfy
//!
//! ```text
//! ω_c/ω = tan(ω d_L/v₀) + tan(ω d_R/v₀)
//! ```
//!
//! or, equivalently, the pole-free phase form
//!
//! ```text
//! cos(k d - δ(ω)) = |r(ω)| cos(2 k ξ),   k = ω/v₀.
//! ```
//!
//! The solver scans the phase form (continuous through the tangent poles,
//! where genuine modes can sit) on a pole-partitioned grid and refines each
//! bracket with Brent's method.

use crate::error::Error;
use crate::math as m;
use crate::numerics;
use crate::params::CoupledPair;

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// Effective reflection and transmission amplitudes of the coupling
/// capacitor at one frequency. Unitary: |r|² + |t|² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub reflection: Complex64,
    pub transmission: Complex64,
}

impl ScatteringAmplitudes {
    pub fn refl_abs(&self) -> f64 {
        self.reflection.norm()
    }

    pub fn trans_abs(&self) -> f64 {
        self.transmission.norm()
    }

    /// Phase angle δ with cos δ = -|r| and sin δ = |t|; lies in (π/2, π].
    pub fn phase(&self) -> f64 {
        libm::atan2(self.trans_abs(), -self.refl_abs())
    }
}

/// One solved eigenmode of the coupled pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    /// Mode index; 0 labels the lowest positive root.
    pub index: usize,
    /// Angular frequency, rad/s.
    pub omega: f64,
    /// Wavenumber k = ω/v₀, 1/m.
    pub wavenumber: f64,
    /// Mode-function normalization constant (dimensionless).
    pub normalization: f64,
    /// |r(ω)| of the coupling capacitor at this mode.
    pub refl_abs: f64,
    /// Phase angle δ at this mode, rad.
    pub phase: f64,
    /// |cos(kd - δ) - |r|cos(2kξ)| left after refinement.
    pub residual: f64,
}

/// Even-order expansion of a mode frequency in the capacitor displacement,
/// ω(ξ) ≈ ω⁽⁰⁾ + ω⁽²⁾ξ² + ω⁽⁴⁾ξ⁴ (odd orders vanish identically).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    /// Centered frequency ω⁽⁰⁾, rad/s.
    pub omega0: f64,
    /// Quadratic coefficient, rad/(s·m²); sign -(-1)ⁿ.
    pub omega2: f64,
    /// Quartic coefficient, rad/(s·m⁴); sign +(-1)ⁿ.
    pub omega4: f64,
    /// Displacement range where the quadratic truncation is trusted, m.
    pub validity_extent: f64,
}

impl Expansion {
    /// ω⁽⁰⁾ + ω⁽²⁾ξ².
    pub fn eval_quadratic(&self, displacement: f64) -> f64 {
        self.omega0 + self.omega2 * displacement * displacement
    }

    /// ω⁽⁰⁾ + ω⁽²⁾ξ² + ω⁽⁴⁾ξ⁴.
    pub fn eval_quartic(&self, displacement: f64) -> f64 {
        let s = displacement * displacement;
        self.omega0 + self.omega2 * s + self.omega4 * s * s
    }
}

/// |r| as a function of x = ω_c/2ω, stable for large x.
fn refl_abs_of_x(x: f64) -> f64 {
    if x > 1.0 {
        let inv = 1.0 / x;
        1.0 / m::sqrt(1.0 + inv * inv)
    } else {
        x / m::sqrt(1.0 + x * x)
    }
}

/// Amplitude pair (a_L, a_R) of the two mode-function branches,
/// u(x<0) = a_L sin(k(x+d_L)), u(x>0) = a_R sin(k(x-d_R)).
#[derive(Debug, Clone, Copy)]
struct BranchAmplitudes {
    left: f64,
    right: f64,
}

// both cosines below this count as a shared tangent pole (node-at-capacitor
// modes of the centered pair)
const DOUBLE_POLE_EPS: f64 = 1e-8;

impl CoupledPair {
    /// Effective mirror amplitudes of the coupling capacitor at `omega`.
    pub fn scattering(&self, omega: f64) -> Result<ScatteringAmplitudes, Error> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::NonPositiveFrequency { omega });
        }
        let x = self.coupling_freq() / (2.0 * omega);
        let denom = 1.0 + x * x;
        Ok(ScatteringAmplitudes {
            reflection: Complex64::new(x * x / denom, x / denom),
            transmission: Complex64::new(-x / denom, -1.0 / denom),
        })
    }

    fn refl_abs_at(&self, omega: f64) -> f64 {
        refl_abs_of_x(self.coupling_freq() / (2.0 * omega))
    }

    fn phase_at(&self, omega: f64) -> f64 {
        let x = self.coupling_freq() / (2.0 * omega);
        let r = refl_abs_of_x(x);
        let t = if x > 1.0 {
            let inv = 1.0 / x;
            inv / m::sqrt(1.0 + inv * inv)
        } else {
            1.0 / m::sqrt(1.0 + x * x)
        };
        libm::atan2(t, -r)
    }

    /// Pole-free residual cos(kd - δ) - |r|cos(2kξ); zero exactly at the
    /// normal-mode frequencies (including those on the tangent poles).
    pub fn phase_residual(&self, omega: f64) -> f64 {
        let k = omega / self.wave_speed();
        m::cos(k * self.total_len() - self.phase_at(omega))
            - self.refl_abs_at(omega) * m::cos(2.0 * k * self.displacement())
    }

    /// Tangent-form residual ω_c/ω - tan(kd_L) - tan(kd_R); diverges on the
    /// tangent poles, useful as an independent diagnostic elsewhere.
    pub fn tan_residual(&self, omega: f64) -> f64 {
        let k = omega / self.wave_speed();
        self.coupling_freq() / omega - m::tan(k * self.left_len()) - m::tan(k * self.right_len())
    }

    /// Tangent poles of both segments below `hi`, sorted ascending.
    fn tangent_poles(&self, hi: f64) -> Vec<f64> {
        let v = self.wave_speed();
        let mut poles = Vec::new();
        for len in [self.left_len(), self.right_len()] {
            let spacing = PI * v / len;
            let mut p = 0.5 * spacing;
            while p < hi {
                poles.push(p);
                p += spacing;
            }
        }
        poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        poles
    }

    /// All mode frequencies on (0, hi).
    ///
    /// The tangent-form residual is strictly decreasing between consecutive
    /// tangent poles (from +∞ down to -∞), so every inter-pole cell holds
    /// exactly one root. A coincident pole of both segments is itself an
    /// eigenfrequency: the capacitor sits on a node there and the phase-form
    /// residual vanishes identically.
    fn roots_below(&self, hi: f64) -> Vec<f64> {
        let poles = self.tangent_poles(hi);
        let mut roots: Vec<f64> = Vec::new();

        let mut edges: Vec<f64> = Vec::new();
        edges.push(0.0);
        let mut idx = 0;
        while idx < poles.len() {
            let p = poles[idx];
            // coincident pole pair: an exact eigenfrequency, and only one
            // cell boundary
            if idx + 1 < poles.len() && (poles[idx + 1] - p) <= 1e-12 * p {
                roots.push(p);
                idx += 2;
            } else {
                idx += 1;
            }
            edges.push(p);
        }
        edges.push(hi);
        edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * *a);

        for cell in edges.windows(2) {
            let (lo_edge, hi_edge) = (cell[0], cell[1]);
            let width = hi_edge - lo_edge;
            if width <= 0.0 {
                continue;
            }
            let inset = (1e-11 * width).max(1e-306);
            let a = if lo_edge == 0.0 {
                // below the first root the residual is dominated by ω_c/ω
                1e-12 * width.min(m::sqrt(self.coupling_freq() * self.wave_speed() / self.total_len()))
            } else {
                lo_edge + inset
            };
            let b = hi_edge - inset;
            if !(b > a) {
                continue;
            }
            let f = |w: f64| self.tan_residual(w);
            let (fa, fb) = (f(a), f(b));
            if fa > 0.0 && fb < 0.0 {
                if let Ok(r) = numerics::brent(f, a, b, numerics::ROOT_REL_TOL, 300) {
                    roots.push(r);
                }
            } else if fa > 0.0 && fb > 0.0 && hi_edge < hi {
                // root crowded against the upper pole beyond bracketing
                // resolution: degenerate to the pole frequency
                roots.push(hi_edge);
            }
            // fa < 0 can only happen in the cell truncated by `hi`, where
            // the root (if any) lies beyond the ceiling
        }
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * *x);
        roots
    }

    /// First `n_max + 1` positive normal-mode frequencies, ascending.
    ///
    /// Numerically degenerate pairs (|Δω| < 1e-9·ω) are ordered so that the
    /// mode continuous at the capacitor takes the odd index.
    pub fn solve_modes(&self, n_max: usize) -> Result<Vec<Mode>, Error> {
        let v = self.wave_speed();
        let d = self.total_len();
        let target = n_max + 1;
        let mut hi = (target as f64 + 2.5) * PI * v / d;

        let mut roots: Vec<f64> = Vec::new();
        for _attempt in 0..8 {
            roots = self.roots_below(hi);
            if roots.len() >= target {
                break;
            }
            hi *= 1.7;
        }
        if roots.len() < target {
            return Err(Error::RootNotBracketed { lo: 0.0, hi });
        }
        roots.truncate(target);

        let mut modes: Vec<Mode> = roots
            .iter()
            .enumerate()
            .map(|(i, &w)| self.mode_at(i, w))
            .collect();

        // order numerically degenerate pairs by capacitor continuity:
        // the continuous mode carries the odd index
        let mut i = 0;
        while i + 1 < modes.len() {
            let (lo_m, hi_m) = (modes[i], modes[i + 1]);
            if (hi_m.omega - lo_m.omega) < 1e-9 * hi_m.omega && i % 2 == 0 {
                let jump_lo = m::fabs(self.mode_jump(&lo_m));
                let jump_hi = m::fabs(self.mode_jump(&hi_m));
                if jump_lo < jump_hi {
                    modes.swap(i, i + 1);
                    modes[i].index = i;
                    modes[i + 1].index = i + 1;
                }
                i += 2;
            } else {
                i += 1;
            }
        }
        Ok(modes)
    }

    fn mode_at(&self, index: usize, omega: f64) -> Mode {
        Mode {
            index,
            omega,
            wavenumber: omega / self.wave_speed(),
            normalization: self.normalization_at(omega),
            refl_abs: self.refl_abs_at(omega),
            phase: self.phase_at(omega),
            residual: m::fabs(self.phase_residual(omega)),
        }
    }

    /// Normalization constant N of the mode at frequency `omega`.
    ///
    /// N vanishes in the node-at-capacitor limit while the mode function
    /// itself stays regular; see [`CoupledPair::mode_function`].
    fn normalization_at(&self, omega: f64) -> f64 {
        let amps = self.branch_amplitudes(omega);
        let k = omega / self.wave_speed();
        let cl = m::cos(k * self.left_len());
        let cr = m::cos(k * self.right_len());
        if m::fabs(cl) >= m::fabs(cr) {
            amps.left * cl
        } else {
            amps.right * cr
        }
    }

    /// Branch amplitudes of the normalized mode function at `omega`,
    /// computed in the pole-safe rearrangement of the closed-form N.
    fn branch_amplitudes(&self, omega: f64) -> BranchAmplitudes {
        let v = self.wave_speed();
        let d = self.total_len();
        let w_c = self.coupling_freq();
        let k = omega / v;
        let (d_l, d_r) = (self.left_len(), self.right_len());
        let (kdl, kdr) = (k * d_l, k * d_r);
        let (cl, cr) = (m::cos(kdl), m::cos(kdr));
        let front = 2.0 * (1.0 + v / (w_c * d));
        let cap_term = w_c / (k * k * v * d);

        if m::fabs(cl) <= m::fabs(cr) {
            let ratio = cl / cr;
            let denom = d_l / d + (d_r / d) * ratio * ratio + cap_term * cl * cl;
            let left = m::sqrt(front / denom);
            let right = if m::fabs(cl) < DOUBLE_POLE_EPS && m::fabs(cr) < DOUBLE_POLE_EPS {
                -left * m::sin(kdl) / m::sin(kdr)
            } else {
                left * ratio
            };
            BranchAmplitudes { left, right }
        } else {
            let ratio = cr / cl;
            let denom = (d_l / d) * ratio * ratio + d_r / d + cap_term * cr * cr;
            let right = m::sqrt(front / denom);
            let left = right * ratio;
            BranchAmplitudes { left, right }
        }
    }

    /// Normalized mode function u(x) on -d_L ≤ x ≤ d_R.
    ///
    /// The left branch covers x < 0, the right branch x ≥ 0; both vanish at
    /// the grounded ends and generally disagree at the capacitor (the jump
    /// carries the capacitor charge).
    pub fn mode_function(&self, mode: &Mode, x: f64) -> Result<f64, Error> {
        if !(-self.left_len()..=self.right_len()).contains(&x) {
            return Err(Error::OutOfDomain {
                value: x,
                lo: -self.left_len(),
                hi: self.right_len(),
            });
        }
        let amps = self.branch_amplitudes(mode.omega);
        let k = mode.wavenumber;
        Ok(if x < 0.0 {
            amps.left * m::sin(k * (x + self.left_len()))
        } else {
            amps.right * m::sin(k * (x - self.right_len()))
        })
    }

    /// Spatial derivative u'(x) of the normalized mode function. The
    /// derivative is continuous at the capacitor (current conservation),
    /// unlike u itself.
    pub fn mode_slope(&self, mode: &Mode, x: f64) -> Result<f64, Error> {
        if !(-self.left_len()..=self.right_len()).contains(&x) {
            return Err(Error::OutOfDomain {
                value: x,
                lo: -self.left_len(),
                hi: self.right_len(),
            });
        }
        let amps = self.branch_amplitudes(mode.omega);
        let k = mode.wavenumber;
        Ok(if x < 0.0 {
            amps.left * k * m::cos(k * (x + self.left_len()))
        } else {
            amps.right * k * m::cos(k * (x - self.right_len()))
        })
    }

    /// Mode-function discontinuity Δu = u(0⁺) - u(0⁻) at the capacitor.
    pub fn mode_jump(&self, mode: &Mode) -> f64 {
        let amps = self.branch_amplitudes(mode.omega);
        let k = mode.wavenumber;
        -amps.right * m::sin(k * self.right_len()) - amps.left * m::sin(k * self.left_len())
    }

    /// Centered frequency ω_n⁽⁰⁾ of the displacement expansion.
    ///
    /// Odd modes sit exactly at nπv₀/d; even modes solve the self-consistent
    /// phase-pullback ω = (n+1)πv₀/d - (2v₀/d)·arccos|r(ω)|.
    pub fn mode_omega0(&self, n: usize) -> Result<f64, Error> {
        let v = self.wave_speed();
        let d = self.total_len();
        if n % 2 == 1 {
            return Ok(n as f64 * PI * v / d);
        }
        let base = (n as f64 + 1.0) * PI * v / d;
        let w_c = self.coupling_freq();
        let step = move |w: f64| {
            let r = refl_abs_of_x(w_c / (2.0 * w.max(f64::MIN_POSITIVE)));
            base - (2.0 * v / d) * m::acos(r)
        };
        // damped iteration: the bare map loses contraction in the
        // strong-coupling limit of the fundamental mode
        numerics::fixed_point(move |w| 0.5 * (w + step(w)), base, 1e-14, 500)
    }

    /// Even-order displacement expansion of mode `n` about ξ = 0.
    pub fn expand_mode(&self, n: usize) -> Result<Expansion, Error> {
        let v = self.wave_speed();
        let d = self.total_len();
        let w_c = self.coupling_freq();
        let omega0 = self.mode_omega0(n)?;
        let par = if n % 2 == 0 { 1.0 } else { -1.0 };
        let omega2 = -(par / d) * omega0 * w_c / v;
        let omega4 = (par / d)
            * (omega0 * m::cube(w_c) / (12.0 * m::cube(v)))
            * (1.0 + 4.0 * omega0 * omega0 / (w_c * w_c));
        let validity_extent = v * m::quartic_root(12e-2)
            / m::quartic_root(omega0 * m::cube(w_c) + 4.0 * m::cube(omega0) * w_c);
        Ok(Expansion {
            omega0,
            omega2,
            omega4,
            validity_extent,
        })
    }
}
