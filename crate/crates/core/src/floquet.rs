//! Floquet–Lindblad generator for the driven two-level working fluid.
//!
//! Everything lives in the frame rotating at the drive frequency, where the
//! polaron-dressed system Hamiltonian is `(δ/2)σ_z + (Ω_r/2)σ_x` with
//! eigenvalues `±Ω'/2`. Matrices use the bare basis ordered `(|e⟩, |g⟩)`.
//!
//! A coupling operator `X` splits into dressed components `S(ω)` with
//! `ω ∈ {0, +Ω', −Ω'}`; a component oscillating as `e^{−iωt}` is taken at the
//! rate `G(ω + qω_l)`, where `q` accounts for the `e^{∓iω_l t}` picked up by
//! the hot-channel operators in the rotating frame. Channel 1 (drive-dressed
//! cold coupling) carries no such factor.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::bath::{BathLabel, BathSpec};
use crate::error::{Error, Result};
use crate::numerics::Numerics;
use crate::polaron::PolaronParams;
use crate::spectrum::LineSpectrum;

pub type Op = Matrix2<Complex64>;
pub type SuperOp = Matrix4<Complex64>;

/// Components whose operator norm falls below this are dropped.
pub const ZERO_OPERATOR_TOL: f64 = 1e-14;
/// `Ω_r/|δ|` at or below which the machine counts as weakly driven.
pub const WEAK_DRIVING_RATIO: f64 = 0.05;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `σ₊ = |e⟩⟨g|`.
pub fn sigma_plus() -> Op {
    Op::new(c(0.0), c(1.0), c(0.0), c(0.0))
}

/// `σ₋ = |g⟩⟨e|`.
pub fn sigma_minus() -> Op {
    sigma_plus().adjoint()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineParams {
    pub omega0: f64,
    pub omega_l: f64,
    /// Bare Rabi frequency `Ω`.
    pub rabi: f64,
    pub cold: BathSpec,
    pub hot: BathSpec,
}

impl MachineParams {
    pub fn new(omega0: f64, omega_l: f64, rabi: f64, cold: BathSpec, hot: BathSpec) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::InvalidMachine(format!("omega0 must be positive, got {omega0}")));
        }
        if !(omega_l > 0.0 && omega_l.is_finite()) {
            return Err(Error::InvalidMachine(format!("omega_l must be positive, got {omega_l}")));
        }
        if !(rabi >= 0.0 && rabi.is_finite()) {
            return Err(Error::InvalidMachine(format!("Omega must be nonnegative, got {rabi}")));
        }
        if cold.label() != BathLabel::Cold || hot.label() != BathLabel::Hot {
            return Err(Error::InvalidMachine("baths must be labelled (cold, hot)".into()));
        }
        Ok(Self {
            omega0,
            omega_l,
            rabi,
            cold,
            hot,
        })
    }

    /// `δ = ω₀ − ω_l`.
    pub fn delta(&self) -> f64 {
        self.omega0 - self.omega_l
    }

    pub fn polaron(&self) -> PolaronParams {
        PolaronParams::new(&self.cold, self.rabi)
    }

    pub fn omega_r(&self) -> f64 {
        self.polaron().omega_r
    }

    pub fn is_weakly_driven(&self) -> bool {
        self.omega_r() <= WEAK_DRIVING_RATIO * self.delta().abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedBasis {
    /// `Ω' = √(δ² + Ω_r²)`.
    pub omega_prime: f64,
    /// Mixing angle with `tan θ = Ω_r/δ`; `π/2` on resonance.
    pub theta: f64,
    /// Upper dressed state (energy `+Ω'/2`).
    pub plus: [f64; 2],
    /// Lower dressed state (energy `−Ω'/2`).
    pub minus: [f64; 2],
    /// `δ = Ω_r = 0`: no splitting, the basis is arbitrary.
    pub degenerate: bool,
}

impl DressedBasis {
    pub fn from_detuning(delta: f64, omega_r: f64) -> Self {
        let omega_prime = delta.hypot(omega_r);
        let theta = omega_r.atan2(delta);
        let (s, co) = (0.5 * theta).sin_cos();
        Self {
            omega_prime,
            theta,
            plus: [co, s],
            minus: [-s, co],
            degenerate: omega_prime == 0.0,
        }
    }

    pub fn projector_plus(&self) -> Op {
        projector(self.plus)
    }

    pub fn projector_minus(&self) -> Op {
        projector(self.minus)
    }

    /// Rotating-frame Hamiltonian `(Ω'/2)(Π₊ − Π₋)`.
    pub fn hamiltonian(&self) -> Op {
        (self.projector_plus() - self.projector_minus()) * c(0.5 * self.omega_prime)
    }
}

fn projector(v: [f64; 2]) -> Op {
    Op::new(c(v[0] * v[0]), c(v[0] * v[1]), c(v[1] * v[0]), c(v[1] * v[1]))
}

pub fn dressed_basis(params: &MachineParams) -> DressedBasis {
    DressedBasis::from_detuning(params.delta(), params.omega_r())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    /// Drive-dressed cold coupling, spectrum `G̃₁`.
    One,
    /// Mixed hot/cold coupling, spectrum `G̃₂`.
    Two,
}

impl Channel {
    pub fn index(self) -> usize {
        match self {
            Channel::One => 1,
            Channel::Two => 2,
        }
    }
}

/// Which bare operator a component was projected from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Raising,
    Lowering,
}

/// Sign of a quasi-frequency: `+1`, `0` or `−1` in units of `Ω'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quasi {
    Plus,
    Zero,
    Minus,
}

impl Quasi {
    /// `sgn(ω)` with `sgn(0) = +1`.
    pub fn sgn(self) -> f64 {
        match self {
            Quasi::Minus => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicComponent {
    pub channel: Channel,
    pub source: Source,
    pub q: i32,
    pub quasi: Quasi,
    /// Quasi-frequency `ω ∈ {0, ±Ω'}`.
    pub omega: f64,
    pub op: Op,
}

impl HarmonicComponent {
    pub fn rate_frequency(&self, omega_l: f64) -> f64 {
        self.omega + self.q as f64 * omega_l
    }
}

/// Dressed components of each channel's coupling operators.
pub fn fourier_decompose(basis: &DressedBasis) -> Vec<HarmonicComponent> {
    let sources = [
        (Channel::One, Source::Raising, 0),
        (Channel::One, Source::Lowering, 0),
        (Channel::Two, Source::Raising, -1),
        (Channel::Two, Source::Lowering, 1),
    ];
    let mut out = Vec::new();
    for (channel, source, q) in sources {
        let x = match source {
            Source::Raising => sigma_plus(),
            Source::Lowering => sigma_minus(),
        };
        out.extend(project_components(channel, source, q, &x, basis));
    }
    out
}

fn project_components(channel: Channel, source: Source, q: i32, x: &Op, basis: &DressedBasis) -> Vec<HarmonicComponent> {
    let pp = basis.projector_plus();
    let pm = basis.projector_minus();
    let w = basis.omega_prime;
    let parts = if basis.degenerate {
        vec![(Quasi::Zero, 0.0, *x)]
    } else {
        vec![
            (Quasi::Zero, 0.0, pp * x * pp + pm * x * pm),
            (Quasi::Plus, w, pm * x * pp),
            (Quasi::Minus, -w, pp * x * pm),
        ]
    };
    parts
        .into_iter()
        .filter(|(_, _, op)| op.iter().map(|z| z.norm()).fold(0.0, f64::max) >= ZERO_OPERATOR_TOL)
        .map(|(quasi, omega, op)| HarmonicComponent {
            channel,
            source,
            q,
            quasi,
            omega,
            op,
        })
        .collect()
}

/// Entrywise max deviation of `Σ_ω S(ω)` from the bare operator, per source.
pub fn completeness_error(components: &[HarmonicComponent]) -> f64 {
    let mut worst: f64 = 0.0;
    for ch in [Channel::One, Channel::Two] {
        for (src, bare) in [(Source::Raising, sigma_plus()), (Source::Lowering, sigma_minus())] {
            let sum: Op = components
                .iter()
                .filter(|c| c.channel == ch && c.source == src)
                .fold(Op::zeros(), |acc, c| acc + c.op);
            worst = worst.max((sum - bare).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    worst
}

/// Column-stacking vectorization: index `i + 2j` holds `ρ_ij`.
pub fn vectorize(rho: &Op) -> Vector4<Complex64> {
    Vector4::new(rho[(0, 0)], rho[(1, 0)], rho[(0, 1)], rho[(1, 1)])
}

pub fn unvectorize(v: &Vector4<Complex64>) -> Op {
    Op::new(v[0], v[2], v[1], v[3])
}

fn kron(a: &Op, b: &Op) -> SuperOp {
    SuperOp::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// Superoperator of `D[S]ρ = SρS† − ½{S†S, ρ}`.
pub fn dissipator(s: &Op) -> SuperOp {
    let id = Op::identity();
    let sds = s.adjoint() * s;
    kron(&s.conjugate(), s) - (kron(&id, &sds) + kron(&sds.transpose(), &id)) * c(0.5)
}

/// Superoperator of `−i[H, ρ]`.
pub fn commutator(h: &Op) -> SuperOp {
    let id = Op::identity();
    (kron(&id, h) - kron(&h.transpose(), &id)) * Complex64::new(0.0, -1.0)
}

/// A component together with its rate and dissipator.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTerm {
    pub component: HarmonicComponent,
    pub rate_frequency: f64,
    pub rate: f64,
    pub superop: SuperOp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    pub matrix: SuperOp,
    pub terms: Vec<LindbladTerm>,
    /// Dressed upper-state projector used for current bookkeeping.
    pub projector_plus: Op,
    pub all_rates_zero: bool,
}

impl Liouvillian {
    /// Max deviation of `vec(I)ᵀ L` from zero.
    pub fn trace_preservation_error(&self) -> f64 {
        let id = Vector4::new(c(1.0), c(0.0), c(0.0), c(1.0));
        (self.matrix.transpose() * id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.matrix.norm()
    }
}

/// Assembles `L = Σ G_i(ω + qω_l) D[S]`. The secular generator has no
/// coherent part in the interaction picture.
pub fn build_liouvillian(
    components: &[HarmonicComponent],
    basis: &DressedBasis,
    omega_l: f64,
    g1: &LineSpectrum,
    g2: &LineSpectrum,
    merge_tol: f64,
) -> Liouvillian {
    let grouped = group_degenerate(components, omega_l, merge_tol);
    let mut matrix = SuperOp::zeros();
    let mut terms = Vec::with_capacity(grouped.len());
    for comp in grouped {
        let nu = comp.rate_frequency(omega_l);
        let rate = match comp.channel {
            Channel::One => g1.evaluate(nu),
            Channel::Two => g2.evaluate(nu),
        };
        let superop = dissipator(&comp.op) * c(rate);
        matrix += superop;
        terms.push(LindbladTerm {
            component: comp,
            rate_frequency: nu,
            rate,
            superop,
        });
    }
    let all_rates_zero = terms.iter().all(|t| t.rate == 0.0);
    Liouvillian {
        matrix,
        terms,
        projector_plus: basis.projector_plus(),
        all_rates_zero,
    }
}

/// Merges components of the same channel and source operator whose rate
/// frequencies coincide, summing their operators.
fn group_degenerate(components: &[HarmonicComponent], omega_l: f64, tol: f64) -> Vec<HarmonicComponent> {
    let mut out: Vec<HarmonicComponent> = Vec::new();
    for comp in components {
        let nu = comp.rate_frequency(omega_l);
        match out.iter_mut().find(|o| {
            o.channel == comp.channel && o.source == comp.source && (o.rate_frequency(omega_l) - nu).abs() <= tol
        }) {
            Some(o) => o.op += comp.op,
            None => out.push(comp.clone()),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rho: Op,
    /// `‖Lρ̄‖ / ‖L‖` (Frobenius norms).
    pub residual: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    /// `‖ρ − ρ†‖` of the raw solution before symmetrization.
    pub hermiticity_error: f64,
}

/// Unique `ρ̄` with `Lρ̄ = 0`, `Tr ρ̄ = 1`.
pub fn steady_state(l: &Liouvillian, rank_tol: f64) -> Result<SteadyState> {
    let norm = l.norm();
    if norm == 0.0 {
        return Err(Error::NoSteadyState);
    }
    let sv = l.matrix.singular_values();
    let smax = sv.max();
    let kernel_dim = sv.iter().filter(|&&s| s <= rank_tol * smax).count();
    if kernel_dim > 1 {
        return Err(Error::NonUniqueKernel(kernel_dim));
    }
    let mut a = l.matrix;
    let scale = c(smax);
    a[(0, 0)] = scale;
    a[(0, 1)] = c(0.0);
    a[(0, 2)] = c(0.0);
    a[(0, 3)] = scale;
    let b = Vector4::new(scale, c(0.0), c(0.0), c(0.0));
    let x = a.lu().solve(&b).ok_or(Error::SingularSystem)?;
    let raw = unvectorize(&x);
    let hermiticity_error = (raw - raw.adjoint()).norm();
    let mut rho = (raw + raw.adjoint()) * c(0.5);
    let tr = rho.trace().re;
    rho /= c(tr);
    let residual = (l.matrix * vectorize(&rho)).norm() / norm;
    let (p, d, off) = (rho[(0, 0)].re, rho[(1, 1)].re, rho[(0, 1)].norm());
    let min_eigenvalue = 0.5 * (p + d) - (0.25 * (p - d) * (p - d) + off * off).sqrt();
    Ok(SteadyState {
        rho,
        residual,
        trace_error: (rho.trace() - c(1.0)).norm(),
        min_eigenvalue,
        hermiticity_error,
    })
}

/// Convenience: `Ω_r`, basis, components and generator in one go.
pub fn assemble(params: &MachineParams, g1: &LineSpectrum, g2: &LineSpectrum, numerics: &Numerics) -> Liouvillian {
    let basis = dressed_basis(params);
    let comps = fourier_decompose(&basis);
    build_liouvillian(&comps, &basis, params.omega_l, g1, g2, numerics.merge_tol)
}
