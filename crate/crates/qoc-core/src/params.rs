//! Physical constants, unit conventions, and the circuit specification
//! records shared by the solver modules.
//!
//! Conventions: strict SI units, angular frequencies (rad/s) everywhere,
//! and external flux passed as the dimensionless ratio Φ/Φ₀.

use crate::error::Error;
use crate::math as m;

use core::f64::consts::PI;

/// Fundamental constants bundled so a whole calculation shares one set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Magnetic flux quantum h/2e, Wb.
    pub flux_quantum: f64,
    /// Vacuum permeability, H/m.
    pub mu0: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
}

impl PhysicalConstants {
    /// 2019 SI values (μ₀ kept at its defined classical value 4π×10⁻⁷ H/m).
    pub const fn si() -> Self {
        PhysicalConstants {
            hbar: 1.054_571_817e-34,
            flux_quantum: 2.067_833_848e-15,
            mu0: 4.0e-7 * PI,
            boltzmann: 1.380_649e-23,
        }
    }

    /// Planck constant h = 2πħ, J·s.
    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }

    /// Φ₀/2π, the flux scale of the Josephson relations, Wb.
    pub fn reduced_flux_quantum(&self) -> f64 {
        self.flux_quantum / (2.0 * PI)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::si()
    }
}

/// Reject non-positive or non-finite spec entries with a named error.
pub(crate) fn require_positive(what: &'static str, value: f64) -> Result<f64, Error> {
    if !value.is_finite() {
        Err(Error::NonFinite { what })
    } else if value <= 0.0 {
        Err(Error::NonPositive { what, value })
    } else {
        Ok(value)
    }
}

/// `|cos(πΦ/Φ₀)|` threshold below which the flux counts as half-integer.
///
/// Keeps the tunable inductance below ~10¹² × its zero-flux value; failing
/// loudly beats returning an astronomically large inductance.
pub const HALF_FLUX_COS_GUARD: f64 = 1e-12;

/// `|cos(πΦ/Φ₀)|`, the flux-modulation factor of a symmetric SQUID.
pub(crate) fn flux_cos_abs(flux_ratio: f64) -> f64 {
    m::fabs(m::cos(PI * flux_ratio))
}

/// One uniform transmission-line segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionLine {
    length: f64,
    cap_per_len: f64,
    ind_per_len: f64,
}

impl TransmissionLine {
    pub fn new(length: f64, cap_per_len: f64, ind_per_len: f64) -> Result<Self, Error> {
        Ok(TransmissionLine {
            length: require_positive("transmission-line length", length)?,
            cap_per_len: require_positive("capacitance per unit length", cap_per_len)?,
            ind_per_len: require_positive("inductance per unit length", ind_per_len)?,
        })
    }

    /// Segment length, m.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Capacitance per unit length, F/m.
    pub fn cap_per_len(&self) -> f64 {
        self.cap_per_len
    }

    /// Inductance per unit length, H/m.
    pub fn ind_per_len(&self) -> f64 {
        self.ind_per_len
    }

    /// Wave speed v₀ = 1/√(ℓc), m/s.
    pub fn wave_speed(&self) -> f64 {
        1.0 / m::sqrt(self.ind_per_len * self.cap_per_len)
    }

    /// Characteristic impedance Z₀ = √(ℓ/c), Ω.
    pub fn impedance(&self) -> f64 {
        m::sqrt(self.ind_per_len / self.cap_per_len)
    }

    /// Total distributed capacitance c·d, F.
    pub fn total_cap(&self) -> f64 {
        self.cap_per_len * self.length
    }

    /// Total distributed inductance ℓ·d, H.
    pub fn total_ind(&self) -> f64 {
        self.ind_per_len * self.length
    }
}

/// Symmetric two-junction SQUID, reduced to a single effective junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squid {
    josephson_energy: f64,
    junction_cap: f64,
}

impl Squid {
    /// `josephson_energy` is the per-junction energy E_J0 (J);
    /// `junction_cap` the total effective capacitance C_J (F).
    pub fn new(josephson_energy: f64, junction_cap: f64) -> Result<Self, Error> {
        Ok(Squid {
            josephson_energy: require_positive("Josephson energy", josephson_energy)?,
            junction_cap: require_positive("junction capacitance", junction_cap)?,
        })
    }

    /// Per-junction Josephson energy E_J0, J.
    pub fn josephson_energy(&self) -> f64 {
        self.josephson_energy
    }

    /// Effective junction capacitance C_J, F.
    pub fn junction_cap(&self) -> f64 {
        self.junction_cap
    }

    /// Zero-flux effective inductance L_J0 = (Φ₀/2π)²/(2E_J0), H.
    pub fn zero_flux_inductance(&self, constants: &PhysicalConstants) -> f64 {
        let phi_r = constants.reduced_flux_quantum();
        phi_r * phi_r / (2.0 * self.josephson_energy)
    }

    /// Flux-tuned effective inductance L_J = L_J0·|sec(πΦ/Φ₀)|, H.
    ///
    /// Even and Φ₀-periodic in the flux; diverges at half-integer flux.
    pub fn effective_inductance(
        &self,
        constants: &PhysicalConstants,
        flux_ratio: f64,
    ) -> Result<f64, Error> {
        let cos_abs = flux_cos_abs(flux_ratio);
        if cos_abs < HALF_FLUX_COS_GUARD {
            return Err(Error::HalfQuantumFlux { flux_ratio });
        }
        Ok(self.zero_flux_inductance(constants) / cos_abs)
    }

    /// SQUID plasma frequency ω_J = 1/√(C_J·L_J(Φ)), rad/s.
    pub fn plasma_frequency(
        &self,
        constants: &PhysicalConstants,
        flux_ratio: f64,
    ) -> Result<f64, Error> {
        let l_j = self.effective_inductance(constants, flux_ratio)?;
        Ok(1.0 / m::sqrt(self.junction_cap * l_j))
    }
}

/// Two grounded transmission-line resonators joined by a coupling capacitor.
///
/// The segments share their per-length densities; only the lengths differ.
/// The capacitor sits at x = 0, the grounded ends at x = -d_L and x = +d_R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledPair {
    left_len: f64,
    right_len: f64,
    coupling_cap: f64,
    cap_per_len: f64,
    ind_per_len: f64,
}

impl CoupledPair {
    pub fn new(
        left_len: f64,
        right_len: f64,
        coupling_cap: f64,
        cap_per_len: f64,
        ind_per_len: f64,
    ) -> Result<Self, Error> {
        let pair = CoupledPair {
            left_len: require_positive("left segment length", left_len)?,
            right_len: require_positive("right segment length", right_len)?,
            coupling_cap: require_positive("coupling capacitance", coupling_cap)?,
            cap_per_len: require_positive("capacitance per unit length", cap_per_len)?,
            ind_per_len: require_positive("inductance per unit length", ind_per_len)?,
        };
        if !pair.coupling_freq().is_finite() {
            return Err(Error::DegenerateSpec {
                what: "characteristic coupling frequency is not finite",
            });
        }
        Ok(pair)
    }

    /// Symmetric pair of total length `total` with the capacitor displaced by
    /// `displacement` from the center.
    pub fn symmetric(
        total: f64,
        displacement: f64,
        coupling_cap: f64,
        cap_per_len: f64,
        ind_per_len: f64,
    ) -> Result<Self, Error> {
        require_positive("total length", total)?;
        if m::fabs(displacement) >= total / 2.0 {
            return Err(Error::OutOfDomain {
                value: displacement,
                lo: -total / 2.0,
                hi: total / 2.0,
            });
        }
        CoupledPair::new(
            total / 2.0 + displacement,
            total / 2.0 - displacement,
            coupling_cap,
            cap_per_len,
            ind_per_len,
        )
    }

    pub fn left_len(&self) -> f64 {
        self.left_len
    }

    pub fn right_len(&self) -> f64 {
        self.right_len
    }

    pub fn coupling_cap(&self) -> f64 {
        self.coupling_cap
    }

    pub fn cap_per_len(&self) -> f64 {
        self.cap_per_len
    }

    pub fn ind_per_len(&self) -> f64 {
        self.ind_per_len
    }

    /// Total length d = d_L + d_R, m.
    pub fn total_len(&self) -> f64 {
        self.left_len + self.right_len
    }

    /// Capacitor displacement ξ = (d_L - d_R)/2 from the center, m.
    pub fn displacement(&self) -> f64 {
        0.5 * (self.left_len - self.right_len)
    }

    /// Wave speed v₀, m/s.
    pub fn wave_speed(&self) -> f64 {
        1.0 / m::sqrt(self.ind_per_len * self.cap_per_len)
    }

    /// Characteristic impedance Z₀, Ω.
    pub fn impedance(&self) -> f64 {
        m::sqrt(self.ind_per_len / self.cap_per_len)
    }

    /// Characteristic frequency of the capacitive coupling
    /// ω_c = 1/(Z₀·C_c), rad/s.
    pub fn coupling_freq(&self) -> f64 {
        1.0 / (self.impedance() * self.coupling_cap)
    }

    /// Total capacitance C_Σ = c₀d + C_c, F.
    pub fn total_cap(&self) -> f64 {
        self.cap_per_len * self.total_len() + self.coupling_cap
    }
}

/// Resonator A: two SQUID-terminated transmission lines of combined bare
/// length d_A, capacitively coupled at the midpoint, with both SQUID loops
/// held at a common bias flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorA {
    line: TransmissionLine,
    coupling_cap: f64,
    squid: Squid,
    bias_ratio: f64,
}

impl ResonatorA {
    /// `line.length()` is the bare length d_A; `bias_ratio` the common bias
    /// flux Φ⁰/Φ₀. Construction rejects half-integer bias flux outright.
    pub fn new(
        line: TransmissionLine,
        coupling_cap: f64,
        squid: Squid,
        bias_ratio: f64,
    ) -> Result<Self, Error> {
        if !bias_ratio.is_finite() {
            return Err(Error::NonFinite { what: "bias flux" });
        }
        if flux_cos_abs(bias_ratio) < HALF_FLUX_COS_GUARD {
            return Err(Error::HalfQuantumFlux { flux_ratio: bias_ratio });
        }
        Ok(ResonatorA {
            line,
            coupling_cap: require_positive("coupling capacitance", coupling_cap)?,
            squid,
            bias_ratio,
        })
    }

    pub fn line(&self) -> &TransmissionLine {
        &self.line
    }

    pub fn coupling_cap(&self) -> f64 {
        self.coupling_cap
    }

    pub fn squid(&self) -> &Squid {
        &self.squid
    }

    /// Common bias flux Φ⁰/Φ₀.
    pub fn bias_ratio(&self) -> f64 {
        self.bias_ratio
    }

    /// Total effective length D_A = d_A + 2(Φ₀/2π)²/(ℓ_A·E_J0), m.
    ///
    /// This is the flux-independent reference length of the linearized
    /// model; both virtual end extensions enter at their nominal value.
    pub fn total_effective_length(&self, constants: &PhysicalConstants) -> f64 {
        let phi_r = constants.reduced_flux_quantum();
        self.line.length()
            + 2.0 * phi_r * phi_r / (self.line.ind_per_len() * self.squid.josephson_energy())
    }

    /// L_J0/(ℓ_A·D_A): must stay below 1e-2 for the effective-length model.
    pub fn inductance_gate_ratio(&self, constants: &PhysicalConstants) -> f64 {
        self.squid.zero_flux_inductance(constants)
            / (self.line.ind_per_len() * self.total_effective_length(constants))
    }

    /// C_J/(c_A·D_A): must stay below 1e-1 for the effective-length model.
    pub fn capacitance_gate_ratio(&self, constants: &PhysicalConstants) -> f64 {
        self.squid.junction_cap()
            / (self.line.cap_per_len() * self.total_effective_length(constants))
    }
}

/// Resonator B: a single uniform transmission line, open at both ends,
/// spanning z ∈ [-d_B/2, d_B/2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorB {
    line: TransmissionLine,
}

impl ResonatorB {
    pub fn new(line: TransmissionLine) -> Self {
        ResonatorB { line }
    }

    pub fn line(&self) -> &TransmissionLine {
        &self.line
    }

    /// Total capacitance C_Σ,B = c_B·d_B, F.
    pub fn total_cap(&self) -> f64 {
        self.line.total_cap()
    }
}

/// Placement of one SQUID loop next to resonator B.
///
/// The loop spans `near_edge < s < far_edge` transversally and has width
/// `width` along the line; its mirror image sits at -`squid_position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopGeometry {
    squid_position: f64,
    near_edge: f64,
    far_edge: f64,
    width: f64,
}

impl LoopGeometry {
    pub fn new(
        squid_position: f64,
        near_edge: f64,
        far_edge: f64,
        width: f64,
    ) -> Result<Self, Error> {
        require_positive("loop position", squid_position)?;
        require_positive("loop near edge", near_edge)?;
        require_positive("loop width", width)?;
        if !(far_edge > near_edge) {
            return Err(Error::NonPositive {
                what: "loop radial extent (far edge minus near edge)",
                value: far_edge - near_edge,
            });
        }
        Ok(LoopGeometry {
            squid_position,
            near_edge,
            far_edge,
            width,
        })
    }

    /// Loop center position z₀ along resonator B, m.
    pub fn squid_position(&self) -> f64 {
        self.squid_position
    }

    pub fn near_edge(&self) -> f64 {
        self.near_edge
    }

    pub fn far_edge(&self) -> f64 {
        self.far_edge
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Enclosed area A = w·(s₂ - s₁), m².
    pub fn area(&self) -> f64 {
        self.width * (self.far_edge - self.near_edge)
    }
}

/// Parameters of a reference membrane-in-the-middle optical cavity, used
/// for the coupling-strength comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityBaseline {
    pub cavity_len: f64,
    pub reflectivity: f64,
    pub wavelength: f64,
    pub membrane_mass: f64,
    pub mech_freq: f64,
}

impl CavityBaseline {
    pub fn new(
        cavity_len: f64,
        reflectivity: f64,
        wavelength: f64,
        membrane_mass: f64,
        mech_freq: f64,
    ) -> Result<Self, Error> {
        require_positive("cavity length", cavity_len)?;
        require_positive("membrane reflectivity", reflectivity)?;
        require_positive("wavelength", wavelength)?;
        require_positive("membrane mass", membrane_mass)?;
        require_positive("mechanical frequency", mech_freq)?;
        if reflectivity >= 1.0 {
            return Err(Error::OutOfDomain {
                value: reflectivity,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(CavityBaseline {
            cavity_len,
            reflectivity,
            wavelength,
            membrane_mass,
            mech_freq,
        })
    }
}
