//! Exact complex linear algebra for 2x2 and 4x4 matrices, plus the
//! two-level thermal-state machinery used by every other module.
//!
//! All types are immutable values and all operations are pure functions,
//! so everything here is safe to share across threads.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on |Tr(rho) - 1|.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor for 2x2 positivity.
pub const PSD_TOL_DIM2: f64 = 1e-12;
/// Eigenvalue floor for 4x4 positivity (roundoff budget for 16-term sums).
pub const PSD_TOL_DIM4: f64 = 1e-10;
/// Probability below which a post-selection branch counts as vanishing.
pub const VANISHING_PROBABILITY: f64 = 1e-15;

/// Dense complex square matrix of compile-time dimension `N` (2 or 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize> {
    entries: [[C64; N]; N],
}

/// 2x2 complex matrix (system operators).
pub type Mat2 = Matrix<2>;
/// 4x4 complex matrix (control (x) system operators).
pub type Mat4 = Matrix<4>;

impl<const N: usize> Matrix<N> {
    pub fn zero() -> Self {
        Self { entries: [[C64::new(0.0, 0.0); N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(entries: [[C64; N]; N]) -> Self {
        Self { entries }
    }

    /// Diagonal matrix from real entries.
    pub fn from_diagonal(diag: [f64; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = C64::new(diag[i], 0.0);
        }
        m
    }

    /// Outer product |ket><ket|.
    pub fn outer(ket: &[C64; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row][col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut m = *self;
        for row in m.entries.iter_mut() {
            for e in row.iter_mut() {
                *e *= factor;
            }
        }
        m
    }

    /// Largest entrywise absolute value of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.entries[i][j] - other.entries[i][j]).norm());
            }
        }
        worst
    }

    /// Largest entrywise absolute value.
    pub fn max_norm(&self) -> f64 {
        self.max_abs_diff(&Self::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Largest entrywise |A - A^dagger|.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// M rho M^dagger.
    pub fn sandwich(&self, rho: &Self) -> Self {
        *self * *rho * self.adjoint()
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, other: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] += other.entries[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, other: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] -= other.entries[i][j];
            }
        }
        m
    }
}

impl<const N: usize> Neg for Matrix<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, other: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for k in 0..N {
                let a = self.entries[i][k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..N {
                    m.entries[i][j] += a * other.entries[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Mul<C64> for Matrix<N> {
    type Output = Self;
    fn mul(self, factor: C64) -> Self {
        let mut m = self;
        for row in m.entries.iter_mut() {
            for e in row.iter_mut() {
                *e *= factor;
            }
        }
        m
    }
}

/// Kronecker product, first factor owning the most significant index
/// (basis order |a b> = |a> (x) |b>).
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    m
}

/// Eigenvalues of a 2x2 Hermitian matrix via the closed-form quadratic,
/// ascending.
pub fn hermitian_eigenvalues_2(m: &Mat2) -> [f64; 2] {
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let mid = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = (half_gap * half_gap + m.get(0, 1).norm_sqr()).sqrt();
    [mid - radius, mid + radius]
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order and the corresponding
/// eigenvectors as the columns of a unitary matrix.
pub fn hermitian_eigen<const N: usize>(m: &Matrix<N>) -> ([f64; N], Matrix<N>) {
    let mut a = *m;
    let mut v = Matrix::<N>::identity();
    let frob_sqr: f64 = (0..N)
        .flat_map(|i| (0..N).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j).norm_sqr())
        .sum();
    let stop = (frob_sqr.max(1e-300)) * 1e-32;

    for _sweep in 0..60 {
        let off_sqr: f64 = (0..N)
            .flat_map(|p| ((p + 1)..N).map(move |q| (p, q)))
            .map(|(p, q)| a.get(p, q).norm_sqr())
            .sum();
        if off_sqr <= stop {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a.get(p, q);
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                // Strip the phase of a_pq, then apply the real Jacobi angle
                // that annihilates the (p,q) element.
                let phase = apq / abs;
                let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut r = Matrix::<N>::identity();
                r.set(p, p, C64::new(c, 0.0));
                r.set(p, q, C64::new(s, 0.0));
                r.set(q, p, -phase.conj() * s);
                r.set(q, q, phase.conj() * c);

                a = r.adjoint() * a * r;
                v = v * r;
            }
        }
    }

    let mut order: [usize; N] = [0; N];
    for (i, slot) in order.iter_mut().enumerate() {
        *slot = i;
    }
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));

    let mut values = [0.0; N];
    let mut vectors = Matrix::<N>::zero();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a.get(src, src).re;
        for row in 0..N {
            vectors.set(row, dst, v.get(row, src));
        }
    }
    (values, vectors)
}

/// Hermitian square root of a positive-semidefinite matrix; eigenvalues
/// below zero (roundoff) are clamped.
pub fn sqrt_psd<const N: usize>(m: &Matrix<N>) -> Matrix<N> {
    let (values, vectors) = hermitian_eigen(m);
    let mut scaled = Matrix::<N>::zero();
    for col in 0..N {
        let root = values[col].max(0.0).sqrt();
        for row in 0..N {
            scaled.set(row, col, vectors.get(row, col) * root);
        }
    }
    scaled * vectors.adjoint()
}

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2,
/// clamped into [0, 1] against roundoff.
pub fn uhlmann_fidelity<const N: usize>(rho: &Matrix<N>, sigma: &Matrix<N>) -> f64 {
    let root = sqrt_psd(rho);
    let inner = root * *sigma * root;
    let (values, _) = hermitian_eigen(&inner);
    let trace_root: f64 = values.iter().map(|&l| l.max(0.0).sqrt()).sum();
    (trace_root * trace_root).clamp(0.0, 1.0)
}

fn psd_tolerance(dim: usize) -> f64 {
    if dim <= 2 {
        PSD_TOL_DIM2
    } else {
        PSD_TOL_DIM4
    }
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize> {
    mat: Matrix<N>,
}

/// Single-qubit state.
pub type Dm2 = DensityMatrix<2>;
/// Control (x) system state.
pub type Dm4 = DensityMatrix<4>;

impl<const N: usize> DensityMatrix<N> {
    /// Validates all state invariants before wrapping the matrix.
    pub fn new(mat: Matrix<N>) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::NonFiniteEntries);
        }
        let herm = mat.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let trace = mat.trace();
        let trace_dev = (trace - C64::new(1.0, 0.0)).norm();
        if trace_dev > TRACE_TOL {
            return Err(Error::NotUnitTrace(trace_dev));
        }
        let min_eig = if N == 2 {
            let m2 = Mat2::from_rows([
                [mat.get(0, 0), mat.get(0, 1)],
                [mat.get(1, 0), mat.get(1, 1)],
            ]);
            hermitian_eigenvalues_2(&m2)[0]
        } else {
            hermitian_eigen(&mat).0[0]
        };
        if min_eig < -psd_tolerance(N) {
            return Err(Error::NotPositiveSemidefinite(min_eig));
        }
        Ok(Self { mat })
    }

    /// Pure state |ket><ket| from a normalized ket.
    pub fn pure(ket: &[C64; N]) -> Result<Self> {
        let norm_sqr: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        let dev = (norm_sqr.sqrt() - 1.0).abs();
        if dev > 1e-12 {
            return Err(Error::UnnormalizedKet(dev));
        }
        Self::new(Matrix::outer(ket))
    }

    pub fn mat(&self) -> &Matrix<N> {
        &self.mat
    }

    /// Population of basis level `n` (real by Hermiticity).
    pub fn population(&self, n: usize) -> f64 {
        self.mat.get(n, n).re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }
}

impl Dm2 {
    /// Diagonal state from populations (p0, p1), p0 + p1 = 1.
    pub fn from_populations(p0: f64, p1: f64) -> Result<Self> {
        Self::new(Mat2::from_diagonal([p0, p1]))
    }
}

/// |0>, |1> and the conjugate basis (|0> +/- |1>)/sqrt(2) as kets.
pub fn ket_zero() -> [C64; 2] {
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
}

pub fn ket_one() -> [C64; 2] {
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
}

pub fn ket_plus() -> [C64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(r, 0.0), C64::new(r, 0.0)]
}

pub fn ket_minus() -> [C64; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [C64::new(r, 0.0), C64::new(-r, 0.0)]
}

/// The |+><+| control state used by the switch.
pub fn plus_state() -> Dm2 {
    Dm2::pure(&ket_plus()).expect("|+> is normalized")
}

/// Two-level Hamiltonian H = Omega |1><1| with energy gap `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    omega: f64,
}

impl Hamiltonian {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidEnergyGap(omega));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::from_diagonal([0.0, self.omega])
    }
}

impl Default for Hamiltonian {
    /// The natural-unit gap Omega = 1 used throughout.
    fn default() -> Self {
        Self { omega: 1.0 }
    }
}

/// Reservoir temperature in dual parameterization: inverse temperature
/// beta, or the excited population E_C = e^{-beta*Omega}/(1 + e^{-beta*Omega})
/// of the matching thermal state. beta = +inf encodes E_C = 0 exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    beta: f64,
}

impl ThermalSpec {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::InvalidInverseTemperature(beta));
        }
        Ok(Self { beta })
    }

    /// Inverse parameterization through the excited population of the
    /// thermal state of `h`; e_c = 0 maps to beta = +inf.
    pub fn from_excited_population(e_c: f64, h: &Hamiltonian) -> Result<Self> {
        if !(0.0..0.5).contains(&e_c) {
            return Err(Error::InvalidExcitedPopulation(e_c));
        }
        if e_c == 0.0 {
            return Ok(Self { beta: f64::INFINITY });
        }
        let beta = ((1.0 - e_c) / e_c).ln() / h.omega();
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// E_C for the thermal state of `h`: 1/(1 + e^{beta*Omega}).
    pub fn excited_population(&self, h: &Hamiltonian) -> f64 {
        1.0 / (1.0 + (self.beta * h.omega()).exp())
    }

    /// Partition function Z = 1 + e^{-beta*Omega}.
    pub fn partition_function(&self, h: &Hamiltonian) -> f64 {
        1.0 + (-self.beta * h.omega()).exp()
    }
}

/// Equilibrium state diag(1, e^{-beta*Omega})/Z of the reservoir.
pub fn thermal_state(spec: &ThermalSpec, h: &Hamiltonian) -> Dm2 {
    let z = spec.partition_function(h);
    let excited = (-spec.beta() * h.omega()).exp() / z;
    Dm2::from_populations(1.0 / z, excited).expect("thermal populations form a valid state")
}

/// Mean energy Tr(rho H) = Omega <1|rho|1>.
pub fn energy(rho: &Dm2, h: &Hamiltonian) -> f64 {
    h.omega() * rho.population(1)
}

/// Kronecker product of states, control factor first.
pub fn tensor(control: &Dm2, system: &Dm2) -> Dm4 {
    Dm4::new(kron(control.mat(), system.mat())).expect("tensor of valid states is valid")
}

/// Rank-1 projector on the control factor, described by its ket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlProjector {
    ket: [C64; 2],
}

impl ControlProjector {
    pub fn new(ket: [C64; 2]) -> Result<Self> {
        let norm_sqr: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        let dev = (norm_sqr.sqrt() - 1.0).abs();
        if dev > 1e-12 {
            return Err(Error::UnnormalizedKet(dev));
        }
        Ok(Self { ket })
    }

    pub fn zero() -> Self {
        Self { ket: ket_zero() }
    }

    pub fn one() -> Self {
        Self { ket: ket_one() }
    }

    pub fn plus() -> Self {
        Self { ket: ket_plus() }
    }

    pub fn minus() -> Self {
        Self { ket: ket_minus() }
    }

    pub fn ket(&self) -> &[C64; 2] {
        &self.ket
    }
}

/// Projects the control factor of a joint state onto `projector` and traces
/// the control out: returns the branch probability Tr[(P (x) I) joint] and
/// the normalized conditional system state.
///
/// Branches with probability below [`VANISHING_PROBABILITY`] are signalled
/// as [`Error::VanishingBranch`]; no conditional state exists there.
pub fn partial_trace_system(
    joint: &Dm4,
    projector: &ControlProjector,
) -> Result<(f64, Dm2)> {
    let k = projector.ket();
    let mut cond = Mat2::zero();
    for m in 0..2 {
        for n in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                for c in 0..2 {
                    // P_{ac} J[(c,m),(a,n)] summed over the control indices.
                    acc += k[a] * k[c].conj() * joint.mat().get(2 * c + m, 2 * a + n);
                }
            }
            cond.set(m, n, acc);
        }
    }
    let prob = cond.trace().re;
    if prob < VANISHING_PROBABILITY {
        return Err(Error::VanishingBranch(prob));
    }
    let state = Dm2::new(cond.scale(1.0 / prob))?;
    Ok((prob.min(1.0), state))
}

/// Unconditional reduced system state Tr_c(joint).
pub fn trace_out_control(joint: &Dm4) -> Dm2 {
    let mut reduced = Mat2::zero();
    for m in 0..2 {
        for n in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..2 {
                acc += joint.mat().get(2 * a + m, 2 * a + n);
            }
            reduced.set(m, n, acc);
        }
    }
    Dm2::new(reduced).expect("partial trace of a valid state is valid")
}
