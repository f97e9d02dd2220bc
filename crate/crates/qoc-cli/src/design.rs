//! Constrained design search: maximize the normalized coupling |g_nm|/Ω_m
//! over a subset of {bias flux, coupling capacitance, loop area ratio},
//! subject to the validity-regime gates and an optional amplitude floor.
//!
//! The search is coordinate-wise: a coarse grid per free axis followed by
//! golden-section refinement, plus a bisection onto the feasibility
//! boundary when the amplitude constraint binds. Objectives are smooth and
//! monotone along each axis over the feasible region, so this is both
//! simple and reliable.

use crate::spec::SystemSpecFile;

use qoc_core::analog::CouplingReport;
use qoc_core::validity::{maximal_amplitude, MaximalAmplitude};
use qoc_core::PhysicalConstants;

/// Free axes of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParam {
    /// Bias flux Φ⁰/Φ₀.
    BiasFlux,
    /// Coupling capacitance C_c (F), searched on a log axis.
    CouplingCap,
    /// Loop area ratio A/(d_B·s₁).
    AreaRatio,
}

impl FreeParam {
    pub fn name(&self) -> &'static str {
        match self {
            FreeParam::BiasFlux => "bias_flux_over_phi0",
            FreeParam::CouplingCap => "coupling_cap_F",
            FreeParam::AreaRatio => "area_over_db_s1",
        }
    }

    fn log_axis(&self) -> bool {
        matches!(self, FreeParam::CouplingCap)
    }
}

/// Search constraints; the defaults encode the validity regime of the
/// effective-length model.
#[derive(Debug, Clone, Copy)]
pub struct DesignConstraints {
    /// Gate on L_J0/(ℓ_A·D_A).
    pub max_lj0_ratio: f64,
    /// Gate on C_J/(c_A·D_A).
    pub max_cj_ratio: f64,
    /// Optional floor on the maximal quadrature amplitude X*_nm.
    pub min_x_star: Option<f64>,
    /// Bias-flux search window, Φ₀ units.
    pub bias_bounds: (f64, f64),
    /// Coupling-capacitance search window, F.
    pub coupling_cap_bounds: (f64, f64),
    /// Loop-area-ratio search window.
    pub area_ratio_bounds: (f64, f64),
}

impl Default for DesignConstraints {
    fn default() -> Self {
        DesignConstraints {
            max_lj0_ratio: 1e-2,
            max_cj_ratio: 1e-1,
            min_x_star: None,
            bias_bounds: (0.0, 0.45),
            coupling_cap_bounds: (1e-16, 1e-13),
            area_ratio_bounds: (1e-4, 1e-2),
        }
    }
}

/// Search outcome.
#[derive(Debug, Clone)]
pub struct DesignResult {
    pub report: CouplingReport,
    pub x_star: Option<f64>,
    pub argmax: Vec<(FreeParam, f64)>,
    /// Constraint active at the optimum, when one is.
    pub binding_constraint: Option<String>,
}

#[derive(Debug)]
pub enum DesignError {
    /// No feasible point in the search window.
    Infeasible,
    /// The fixed part of the spec violates a validity gate.
    GateViolated { what: &'static str, ratio: f64, max: f64 },
    /// No free parameter was requested.
    NoFreeParameters,
    Core(qoc_core::Error),
}

impl std::fmt::Display for DesignError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignError::Infeasible => write!(f, "no feasible point in the search window"),
            DesignError::GateViolated { what, ratio, max } => {
                write!(f, "base spec violates the {what} gate: {ratio:e} > {max:e}")
            }
            DesignError::NoFreeParameters => write!(f, "design search needs ≥ 1 free parameter"),
            DesignError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DesignError {}

const COARSE_POINTS: usize = 64;
const GOLDEN_ITERS: usize = 80;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

struct Evaluator<'a> {
    spec: &'a SystemSpecFile,
    free: &'a [FreeParam],
    constraints: &'a DesignConstraints,
    n: usize,
    m: usize,
    constants: PhysicalConstants,
}

struct PointEval {
    objective: f64,
    report: CouplingReport,
    x_star: Option<f64>,
}

impl<'a> Evaluator<'a> {
    /// |g|/Ω at the assignment, or None when infeasible or unsolvable.
    fn eval(&self, values: &[f64]) -> Option<PointEval> {
        let mut modified = self.spec.clone();
        let mut bias_override = None;
        for (param, &value) in self.free.iter().zip(values) {
            match param {
                FreeParam::BiasFlux => bias_override = Some(value),
                FreeParam::CouplingCap => modified.resonator_a.coupling_cap_f = value,
                FreeParam::AreaRatio => {
                    let g = &mut modified.loop_geometry;
                    let d_b = modified.resonator_b.length_m;
                    g.width_m = value * d_b * g.near_edge_m / (g.far_edge_m - g.near_edge_m);
                }
            }
        }
        let sys = modified.build(bias_override, self.constants).ok()?;
        let report = sys.coupling_strength(self.n, self.m).ok()?;
        let x_star = match maximal_amplitude(&sys, self.n, self.m).ok()? {
            MaximalAmplitude::Bounded(x) => Some(x),
            MaximalAmplitude::Unconstrained => None,
        };
        if let (Some(min), Some(x)) = (self.constraints.min_x_star, x_star) {
            if x < min {
                return None;
            }
        }
        Some(PointEval {
            objective: report.normalized.abs(),
            report,
            x_star,
        })
    }

    fn objective(&self, values: &[f64]) -> f64 {
        self.eval(values).map(|p| p.objective).unwrap_or(f64::NEG_INFINITY)
    }

    fn bounds(&self, param: FreeParam) -> (f64, f64) {
        match param {
            FreeParam::BiasFlux => self.constraints.bias_bounds,
            FreeParam::CouplingCap => self.constraints.coupling_cap_bounds,
            FreeParam::AreaRatio => self.constraints.area_ratio_bounds,
        }
    }
}

fn axis_grid(lo: f64, hi: f64, log_axis: bool, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            if log_axis {
                10f64.powf(lo.log10() + t * (hi.log10() - lo.log10()))
            } else {
                lo + t * (hi - lo)
            }
        })
        .collect()
}

/// Maximize |g_nm|/Ω_m over the free parameters.
pub fn design_search(
    spec: &SystemSpecFile,
    free: &[FreeParam],
    constraints: &DesignConstraints,
    n: usize,
    m: usize,
    constants: PhysicalConstants,
) -> Result<DesignResult, DesignError> {
    if free.is_empty() {
        return Err(DesignError::NoFreeParameters);
    }
    // the regime gates depend only on the fixed circuit, never on the free
    // axes searched here
    let base = spec
        .build(Some(0.0), constants)
        .map_err(DesignError::Core)?;
    let gates = base.regime_gates();
    if gates.inductance_ratio > constraints.max_lj0_ratio {
        return Err(DesignError::GateViolated {
            what: "SQUID inductance",
            ratio: gates.inductance_ratio,
            max: constraints.max_lj0_ratio,
        });
    }
    if gates.capacitance_ratio > constraints.max_cj_ratio {
        return Err(DesignError::GateViolated {
            what: "junction capacitance",
            ratio: gates.capacitance_ratio,
            max: constraints.max_cj_ratio,
        });
    }

    let eval = Evaluator {
        spec,
        free,
        constraints,
        n,
        m,
        constants,
    };

    // start each axis at its midpoint; the first coarse scan replaces it
    let mut current: Vec<f64> = free
        .iter()
        .map(|p| {
            let (lo, hi) = eval.bounds(*p);
            if p.log_axis() {
                10f64.powf(0.5 * (lo.log10() + hi.log10()))
            } else {
                0.5 * (lo + hi)
            }
        })
        .collect();
    let mut best = f64::NEG_INFINITY;

    for _pass in 0..3 {
        let mut improved = false;
        for (axis, param) in free.iter().enumerate() {
            let (lo, hi) = eval.bounds(*param);
            let grid = axis_grid(lo, hi, param.log_axis(), COARSE_POINTS);
            let score_at = |x: f64, current: &[f64]| {
                let mut values = current.to_vec();
                values[axis] = x;
                eval.objective(&values)
            };

            // coarse scan
            let mut best_idx = None;
            let mut best_axis = f64::NEG_INFINITY;
            for (i, &x) in grid.iter().enumerate() {
                let s = score_at(x, &current);
                if s > best_axis {
                    best_axis = s;
                    best_idx = Some(i);
                }
            }
            let Some(best_idx) = best_idx else { continue };
            if best_axis == f64::NEG_INFINITY {
                continue;
            }
            let mut axis_x = grid[best_idx];

            // golden-section refinement inside the bracketing interval
            let mut a = grid[best_idx.saturating_sub(1)];
            let mut b = grid[(best_idx + 1).min(grid.len() - 1)];
            if b > a {
                let mut x1 = b - INV_PHI * (b - a);
                let mut x2 = a + INV_PHI * (b - a);
                let mut f1 = score_at(x1, &current);
                let mut f2 = score_at(x2, &current);
                for _ in 0..GOLDEN_ITERS {
                    if f1 < f2 {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + INV_PHI * (b - a);
                        f2 = score_at(x2, &current);
                    } else {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - INV_PHI * (b - a);
                        f1 = score_at(x1, &current);
                    }
                }
                let refined = if f1 > f2 { x1 } else { x2 };
                if score_at(refined, &current) > best_axis {
                    axis_x = refined;
                    best_axis = score_at(refined, &current);
                }
            }

            // when the amplitude floor cuts the axis, walk onto the
            // feasibility boundary: the objective is monotone there
            if constraints.min_x_star.is_some() {
                let upper_neighbor = grid.get(best_idx + 1).copied();
                if let Some(infeasible) = upper_neighbor {
                    if score_at(infeasible, &current) == f64::NEG_INFINITY {
                        let mut lo_x = axis_x;
                        let mut hi_x = infeasible;
                        for _ in 0..200 {
                            let mid = 0.5 * (lo_x + hi_x);
                            if score_at(mid, &current) > f64::NEG_INFINITY {
                                lo_x = mid;
                            } else {
                                hi_x = mid;
                            }
                        }
                        if score_at(lo_x, &current) > best_axis {
                            axis_x = lo_x;
                            best_axis = score_at(lo_x, &current);
                        }
                    }
                }
            }

            if best_axis > best {
                best = best_axis;
                improved = true;
            }
            current[axis] = axis_x;
        }
        if !improved {
            break;
        }
    }

    let Some(point) = eval.eval(&current) else {
        return Err(DesignError::Infeasible);
    };

    let binding_constraint = identify_binding(&eval, free, &current, point.x_star);
    Ok(DesignResult {
        report: point.report,
        x_star: point.x_star,
        argmax: free.iter().copied().zip(current).collect(),
        binding_constraint,
    })
}

fn identify_binding(
    eval: &Evaluator<'_>,
    free: &[FreeParam],
    values: &[f64],
    x_star: Option<f64>,
) -> Option<String> {
    if let (Some(min), Some(x)) = (eval.constraints.min_x_star, x_star) {
        if (x - min).abs() <= 1e-3 * min {
            return Some(format!("min_x_star = {min}"));
        }
    }
    for (param, &value) in free.iter().zip(values) {
        let (lo, hi) = eval.bounds(*param);
        let span = (hi - lo).abs().max(f64::MIN_POSITIVE);
        if (value - lo).abs() <= 1e-6 * span {
            return Some(format!("{} lower bound = {lo:e}", param.name()));
        }
        if (value - hi).abs() <= 1e-6 * span {
            return Some(format!("{} upper bound = {hi:e}", param.name()));
        }
    }
    None
}
