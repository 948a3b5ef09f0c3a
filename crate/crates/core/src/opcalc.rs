//! Finite truncations and the operational calculus on them.
//!
//! A truncation keeps the first N eigenvalues of a point spectrum
//! (multiplicities expanded) and realizes the operator either on the
//! standard basis, where everything is diagonal and exact, or conjugated by
//! a seeded random similarity S with prescribed condition number, which
//! models a non-orthogonal eigenbasis. Functions of the operator are formed
//! by applying the scalar function to the eigenvalues and conjugating back,
//! so F(A) = S diag(F(lambda)) S^-1; spectral projections are indicator
//! functions under the same rule.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::spectrum::{Multiplicity, RegionSpec, SampleError, SpectrumSpec};

/// Hard cap on truncation dimension; dense linear algebra above this size
/// is outside the intended envelope.
pub const MAX_TRUNCATION: usize = 2048;

/// exp(z) with clean underflow: once the real part drives the magnitude to
/// zero the phase no longer matters, even when t * Im z overflowed. The
/// naive route would produce 0 * cos(inf) = NaN for deeply damped modes
/// with huge imaginary parts.
pub fn cexp(z: Complex64) -> Complex64 {
    let mag = z.re.exp();
    if mag == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(mag, z.im)
}

// ── errors ──────────────────────────────────────────────────────────────────

#[derive(Debug, Error)]
pub enum OpcalcError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("truncation needs a nonempty point spectrum")]
    EmptySpectrum,
    #[error("requested dimension {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("eigenvalue #{index} ({value}) is not finite at this truncation size")]
    NonFinite { index: usize, value: String },
    #[error("infinite multiplicities cannot be expanded into a finite truncation")]
    InfiniteMultiplicity,
    #[error("similarity condition number must be >= 1, got {kappa}")]
    BadKappa { kappa: f64 },
    #[error("negative time {t}: the semigroup is only defined for t >= 0")]
    NegativeTime { t: f64 },
    #[error("function is singular on the truncated spectrum: {0}")]
    Singular(String),
    #[error("eigenvalue computation did not converge")]
    EigenFailure,
}

// ── truncated operators ─────────────────────────────────────────────────────

#[derive(Clone, Copy, Debug)]
pub struct TruncationOptions {
    /// Number of retained modes after multiplicity expansion.
    pub n: usize,
    /// Condition number of the random similarity; 1 keeps the operator
    /// diagonal on the standard basis.
    pub kappa: f64,
    pub seed: u64,
}

impl Default for TruncationOptions {
    fn default() -> Self {
        TruncationOptions {
            n: 64,
            kappa: 1.0,
            seed: 42,
        }
    }
}

/// S = q1 diag(sigma) q2^T with orthogonal factors, so the inverse and the
/// condition number are exact by construction.
#[derive(Clone, Debug)]
struct Similarity {
    kappa: f64,
    s: DMatrix<f64>,
    s_inv: DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    eigenvalues: Vec<Complex64>,
    similarity: Option<Similarity>,
    pub seed: u64,
}

/// Largest dimension (after multiplicity expansion) that materializes with
/// finite f64 entries, up to `cap`. Exponential imaginary parts overflow
/// quickly, so callers should clamp their size schedules with this.
pub fn max_finite_dimension(spec: &SpectrumSpec, cap: usize) -> Result<usize, OpcalcError> {
    let mut finite_len = 0usize;
    for p in &spec.finite {
        match p.mult {
            Multiplicity::Finite(k) => finite_len += k as usize,
            Multiplicity::Infinite => return Err(OpcalcError::InfiniteMultiplicity),
        }
        if !p.value().is_finite() {
            return Ok(finite_len.saturating_sub(1).min(cap));
        }
    }
    if spec.tails.is_empty() {
        return Ok(finite_len.min(cap));
    }
    let mut per_round = 0usize;
    for t in &spec.tails {
        match t.mult {
            Multiplicity::Finite(k) => per_round += k as usize,
            Multiplicity::Infinite => return Err(OpcalcError::InfiniteMultiplicity),
        }
    }
    let mut dim = finite_len;
    let mut round = 0u64;
    while dim < cap {
        if spec
            .tails
            .iter()
            .any(|t| !t.value_at(t.n0 + round).is_finite())
        {
            break;
        }
        dim += per_round;
        round += 1;
    }
    Ok(dim.min(cap))
}

/// Builds the truncation holding the first `n` modes of the spectrum.
/// Finite-only spectra are clamped to their total dimension.
pub fn build_truncation(
    spec: &SpectrumSpec,
    opts: &TruncationOptions,
) -> Result<TruncatedOperator, OpcalcError> {
    if opts.n == 0 {
        return Err(OpcalcError::EmptySpectrum);
    }
    if opts.n > MAX_TRUNCATION {
        return Err(OpcalcError::TooLarge {
            n: opts.n,
            cap: MAX_TRUNCATION,
        });
    }
    if !(opts.kappa >= 1.0) || !opts.kappa.is_finite() {
        return Err(OpcalcError::BadKappa { kappa: opts.kappa });
    }

    // enough sampling rounds for the multiplicity-expanded length
    let mut per_round = 0usize;
    for t in &spec.tails {
        match t.mult {
            Multiplicity::Finite(k) => per_round += k as usize,
            Multiplicity::Infinite => return Err(OpcalcError::InfiniteMultiplicity),
        }
    }
    let mut finite_len = 0usize;
    for p in &spec.finite {
        match p.mult {
            Multiplicity::Finite(k) => finite_len += k as usize,
            Multiplicity::Infinite => return Err(OpcalcError::InfiniteMultiplicity),
        }
    }
    let rounds = if per_round == 0 {
        0
    } else {
        opts.n.saturating_sub(finite_len).div_ceil(per_round)
    };
    let sampled = spec.sample_eigenvalues(rounds)?;

    let mut eigenvalues = Vec::with_capacity(opts.n);
    'outer: for (z, mult) in sampled {
        let copies = match mult {
            Multiplicity::Finite(k) => k,
            Multiplicity::Infinite => return Err(OpcalcError::InfiniteMultiplicity),
        };
        for _ in 0..copies {
            if eigenvalues.len() == opts.n {
                break 'outer;
            }
            if !z.is_finite() {
                return Err(OpcalcError::NonFinite {
                    index: eigenvalues.len(),
                    value: format!("{z}"),
                });
            }
            eigenvalues.push(z);
        }
    }
    if eigenvalues.is_empty() {
        return Err(OpcalcError::EmptySpectrum);
    }

    let similarity = if opts.kappa > 1.0 {
        Some(make_similarity(eigenvalues.len(), opts.kappa, opts.seed))
    } else {
        None
    };
    Ok(TruncatedOperator {
        eigenvalues,
        similarity,
        seed: opts.seed,
    })
}

fn seeded_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let gauss = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gauss.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix signs so the factorization is unique and the draw unbiased
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

fn make_similarity(n: usize, kappa: f64, seed: u64) -> Similarity {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q1 = seeded_orthogonal(n, &mut rng);
    let q2 = seeded_orthogonal(n, &mut rng);
    // geometric singular value profile from 1 to kappa
    let sigma: Vec<f64> = (0..n)
        .map(|i| {
            if n == 1 {
                1.0
            } else {
                kappa.powf(i as f64 / (n - 1) as f64)
            }
        })
        .collect();
    let mut s = q1.clone();
    let mut s_inv_left = q2.clone();
    for j in 0..n {
        for i in 0..n {
            s[(i, j)] *= sigma[j];
            s_inv_left[(i, j)] /= sigma[j];
        }
    }
    // s = q1 D q2^T, s_inv = q2 D^-1 q1^T
    let s = s * q2.transpose();
    let s_inv = s_inv_left * q1.transpose();
    Similarity { kappa, s, s_inv }
}

impl TruncatedOperator {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn is_diagonal(&self) -> bool {
        self.similarity.is_none()
    }

    /// Condition number of the eigenbasis similarity (1 for the diagonal
    /// model).
    pub fn condition_number(&self) -> f64 {
        self.similarity.as_ref().map_or(1.0, |s| s.kappa)
    }

    /// Certified bound on the norms of all spectral projections: every
    /// E(delta) = S P S^-1 with an orthogonal projection P, so cond(S) is
    /// an upper bound; the diagonal model is exactly 1.
    pub fn measure_bound(&self) -> f64 {
        self.condition_number()
    }

    /// sup Re over the retained eigenvalues.
    pub fn spectral_bound_trunc(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

// ── matrix values ───────────────────────────────────────────────────────────

#[derive(Clone, Debug)]
pub enum MatrixValue {
    Diagonal(Vec<Complex64>),
    Dense(DMatrix<Complex64>),
}

impl MatrixValue {
    pub fn dimension(&self) -> usize {
        match self {
            MatrixValue::Diagonal(d) => d.len(),
            MatrixValue::Dense(m) => m.nrows(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match self {
            MatrixValue::Diagonal(d) => {
                DMatrix::from_diagonal(&DVector::from_column_slice(d))
            }
            MatrixValue::Dense(m) => m.clone(),
        }
    }

    /// Spectral norm: exact for diagonal values, largest singular value for
    /// dense ones.
    pub fn operator_norm(&self) -> f64 {
        match self {
            MatrixValue::Diagonal(d) => d.iter().map(|z| z.norm()).fold(0.0, f64::max),
            MatrixValue::Dense(m) => {
                let sv = m.clone().svd(false, false).singular_values;
                sv.iter().copied().fold(0.0, f64::max)
            }
        }
    }

    pub fn mul(&self, other: &MatrixValue) -> MatrixValue {
        match (self, other) {
            (MatrixValue::Diagonal(a), MatrixValue::Diagonal(b)) => {
                MatrixValue::Diagonal(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            _ => MatrixValue::Dense(self.to_dense() * other.to_dense()),
        }
    }

    pub fn sub(&self, other: &MatrixValue) -> MatrixValue {
        match (self, other) {
            (MatrixValue::Diagonal(a), MatrixValue::Diagonal(b)) => {
                MatrixValue::Diagonal(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => MatrixValue::Dense(self.to_dense() - other.to_dense()),
        }
    }

    pub fn scale(&self, c: Complex64) -> MatrixValue {
        match self {
            MatrixValue::Diagonal(d) => {
                MatrixValue::Diagonal(d.iter().map(|z| z * c).collect())
            }
            MatrixValue::Dense(m) => MatrixValue::Dense(m.map(|z| z * c)),
        }
    }

    pub fn mul_vec(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        match self {
            MatrixValue::Diagonal(d) => {
                DVector::from_iterator(d.len(), d.iter().zip(v.iter()).map(|(a, b)| a * b))
            }
            MatrixValue::Dense(m) => m * v,
        }
    }

    /// Eigenvalues of the value, in no particular order.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, OpcalcError> {
        match self {
            MatrixValue::Diagonal(d) => Ok(d.clone()),
            MatrixValue::Dense(m) => {
                let schur = m
                    .clone()
                    .try_schur(1e-12, 100_000)
                    .ok_or(OpcalcError::EigenFailure)?;
                let (_, t) = schur.unpack();
                Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
            }
        }
    }
}

// ── scalar functions and the calculus ───────────────────────────────────────

/// Scalar functions applied through the operational calculus.
#[derive(Clone, Debug)]
pub enum CalcFunction {
    /// F(lambda) = lambda
    Identity,
    /// F(lambda) = exp(t lambda)
    Exp { t: f64 },
    /// F(lambda) = lambda exp(t lambda), the semigroup derivative symbol
    LambdaExp { t: f64 },
    /// F(lambda) = sum_k coeffs[k] lambda^k
    Polynomial { coeffs: Vec<Complex64> },
    /// F = characteristic function of the region
    Indicator { region: RegionSpec },
    /// F(lambda) = 1 / (lambda - mu)
    Resolvent { mu: Complex64 },
}

impl CalcFunction {
    pub fn eval(&self, lambda: Complex64) -> Complex64 {
        match self {
            CalcFunction::Identity => lambda,
            CalcFunction::Exp { t } => cexp(lambda * *t),
            CalcFunction::LambdaExp { t } => lambda * cexp(lambda * *t),
            CalcFunction::Polynomial { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in coeffs.iter().rev() {
                    acc = acc * lambda + c;
                }
                acc
            }
            CalcFunction::Indicator { region } => {
                if region.contains(lambda) {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            CalcFunction::Resolvent { mu } => Complex64::new(1.0, 0.0) / (lambda - mu),
        }
    }

    fn check_applicable(&self, eigenvalues: &[Complex64]) -> Result<(), OpcalcError> {
        if let CalcFunction::Resolvent { mu } = self {
            for z in eigenvalues {
                if (z - mu).norm() < 1e-12 {
                    return Err(OpcalcError::Singular(format!(
                        "resolvent point {mu} touches eigenvalue {z}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// F(A) for the truncation: apply F to each eigenvalue and conjugate by the
/// similarity when one is present.
pub fn apply_borel_function(
    op: &TruncatedOperator,
    f: &CalcFunction,
) -> Result<MatrixValue, OpcalcError> {
    f.check_applicable(&op.eigenvalues)?;
    let values: Vec<Complex64> = op.eigenvalues.iter().map(|z| f.eval(*z)).collect();
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(OpcalcError::Singular(format!(
                "function value at eigenvalue #{i} ({}) is not finite",
                op.eigenvalues[i]
            )));
        }
    }
    Ok(conjugate(op, values))
}

fn conjugate(op: &TruncatedOperator, diag: Vec<Complex64>) -> MatrixValue {
    match &op.similarity {
        None => MatrixValue::Diagonal(diag),
        Some(sim) => {
            let n = diag.len();
            // S D: scale columns of S by the diagonal
            let mut sd = DMatrix::<Complex64>::zeros(n, n);
            for j in 0..n {
                for i in 0..n {
                    sd[(i, j)] = Complex64::new(sim.s[(i, j)], 0.0) * diag[j];
                }
            }
            let s_inv_c = sim.s_inv.map(|x| Complex64::new(x, 0.0));
            MatrixValue::Dense(sd * s_inv_c)
        }
    }
}

/// T(t) = exp(tA) for t >= 0.
pub fn semigroup_at(op: &TruncatedOperator, t: f64) -> Result<MatrixValue, OpcalcError> {
    if t < 0.0 || !t.is_finite() {
        return Err(OpcalcError::NegativeTime { t });
    }
    apply_borel_function(op, &CalcFunction::Exp { t })
}

/// Projection E({Re lambda >= threshold}) onto the high-real-part modes.
pub fn re_superlevel_projection(op: &TruncatedOperator, threshold: f64) -> MatrixValue {
    let diag: Vec<Complex64> = op
        .eigenvalues
        .iter()
        .map(|z| {
            if z.re >= threshold {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    conjugate(op, diag)
}

/// Norm of the semigroup restricted to the deep modes,
/// ||E({Re < threshold}) T(t)||.
pub fn semigroup_tail_norm(
    op: &TruncatedOperator,
    t: f64,
    threshold: f64,
) -> Result<f64, OpcalcError> {
    if t < 0.0 || !t.is_finite() {
        return Err(OpcalcError::NegativeTime { t });
    }
    let diag: Vec<Complex64> = op
        .eigenvalues
        .iter()
        .map(|z| {
            if z.re < threshold {
                cexp(z * t)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    for v in &diag {
        if !v.is_finite() {
            return Err(OpcalcError::Singular(
                "semigroup entry overflow in tail norm".into(),
            ));
        }
    }
    Ok(conjugate(op, diag).operator_norm())
}

/// Certified decay certificate for the tail of the semigroup when the
/// spectrum below the cutoff satisfies Re lambda <= -depth: the restricted
/// semigroup norm is at most 4 M e^{-t depth}.
pub fn tail_bound(measure_bound: f64, t: f64, depth: f64) -> f64 {
    4.0 * measure_bound * (-t * depth).exp()
}

// ── spectral measure: masses and bounds ─────────────────────────────────────

/// Scalar measures <E({lambda}) f, g> for each retained mode, in eigenvalue
/// order. Repeated eigenvalues contribute separate entries; group by value
/// to obtain the atomic masses of the measure.
pub fn singleton_masses(
    op: &TruncatedOperator,
    f: &DVector<Complex64>,
    g: &DVector<Complex64>,
) -> Vec<Complex64> {
    match &op.similarity {
        None => f
            .iter()
            .zip(g.iter())
            .map(|(a, b)| a * b.conj())
            .collect(),
        Some(sim) => {
            let n = op.eigenvalues.len();
            let s_inv_c = sim.s_inv.map(|x| Complex64::new(x, 0.0));
            let u = &s_inv_c * f; // coordinates of f in the eigenbasis
            let mut out = Vec::with_capacity(n);
            for k in 0..n {
                // <S e_k, g> = column k of S against conj(g)
                let mut col_dot = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    col_dot += Complex64::new(sim.s[(i, k)], 0.0) * g[i].conj();
                }
                out.push(u[k] * col_dot);
            }
            out
        }
    }
}

/// Total variation of the scalar measure <E(.) f, g>: masses grouped by
/// distinct eigenvalue, absolute values summed.
pub fn total_variation(
    op: &TruncatedOperator,
    f: &DVector<Complex64>,
    g: &DVector<Complex64>,
) -> f64 {
    grouped_masses(op, f, g)
        .into_iter()
        .map(|(_, m)| m.norm())
        .sum()
}

fn grouped_masses(
    op: &TruncatedOperator,
    f: &DVector<Complex64>,
    g: &DVector<Complex64>,
) -> Vec<(Complex64, Complex64)> {
    let masses = singleton_masses(op, f, g);
    let mut atoms: Vec<(Complex64, Complex64)> = Vec::new();
    for (z, m) in op.eigenvalues.iter().zip(masses) {
        if let Some(entry) = atoms.iter_mut().find(|(w, _)| w == z) {
            entry.1 += m;
        } else {
            atoms.push((*z, m));
        }
    }
    atoms
}

/// Observed maximum of ||E(delta)|| over singleton sets, real-part-ordered
/// prefixes and seeded random subsets. The certified bound remains
/// `measure_bound()`; this estimate shows how much of it is attained.
pub fn estimate_measure_bound(op: &TruncatedOperator, random_subsets: usize, seed: u64) -> f64 {
    let n = op.dimension();
    let Some(sim) = &op.similarity else {
        return 1.0;
    };
    let mut best: f64 = 0.0;

    // singletons, exact: ||S e_k (e_k)^T S^-1|| = |S e_k| |rows_k(S^-1)|
    for k in 0..n {
        let mut col = 0.0f64;
        let mut row = 0.0f64;
        for i in 0..n {
            col += sim.s[(i, k)] * sim.s[(i, k)];
            row += sim.s_inv[(k, i)] * sim.s_inv[(k, i)];
        }
        best = best.max(col.sqrt() * row.sqrt());
    }

    // prefixes of the spectrum ordered by decreasing real part
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        op.eigenvalues[j]
            .re
            .partial_cmp(&op.eigenvalues[i].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let mut mask = vec![false; n];
    for chunk in order.chunks(1.max(n / 16)) {
        for &k in chunk {
            mask[k] = true;
        }
        best = best.max(projection_norm(sim, &mask));
    }

    // seeded random subsets
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..random_subsets {
        let mut mask = vec![false; n];
        let mut any = false;
        let mut all = true;
        for m in mask.iter_mut() {
            *m = rng.gen::<bool>();
            any |= *m;
            all &= *m;
        }
        if !any || all {
            continue;
        }
        best = best.max(projection_norm(sim, &mask));
    }
    best.max(1.0)
}

/// ||S P S^-1|| for the coordinate projection P given by the mask, via
/// power iteration on (S P S^-1)^T (S P S^-1) with matrix-free products.
fn projection_norm(sim: &Similarity, mask: &[bool]) -> f64 {
    let n = mask.len();
    let apply = |v: &DVector<f64>| -> DVector<f64> {
        // w = S P S^-1 v
        let mut x = &sim.s_inv * v;
        for (i, keep) in mask.iter().enumerate() {
            if !keep {
                x[i] = 0.0;
            }
        }
        &sim.s * x
    };
    let apply_t = |v: &DVector<f64>| -> DVector<f64> {
        let mut x = sim.s.transpose() * v;
        for (i, keep) in mask.iter().enumerate() {
            if !keep {
                x[i] = 0.0;
            }
        }
        sim.s_inv.transpose() * x
    };
    let mut v = DVector::from_element(n, 1.0);
    for i in 0..n {
        v[i] += (i as f64 * 0.7).sin() * 0.1;
    }
    v /= v.norm();
    let mut value = 0.0f64;
    for _ in 0..80 {
        let w = apply_t(&apply(&v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = w / norm;
        let new_value = norm.sqrt();
        let done = (new_value - value).abs() <= 1e-10 * new_value.max(1.0);
        v = next;
        value = new_value;
        if done {
            break;
        }
    }
    value
}

// ── calculus bound checks ───────────────────────────────────────────────────

/// Quantities entering the two-sided norm estimate and the variation
/// inequalities, together with their pass flags.
#[derive(Clone, Debug)]
pub struct BoundsCheck {
    pub sup_f: f64,
    pub norm_fa: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub variation: f64,
    pub variation_bound: f64,
    pub variation_ok: bool,
    pub integral: f64,
    pub integral_bound: f64,
    pub integral_ok: bool,
    pub measure_bound: f64,
}

impl BoundsCheck {
    pub fn all_ok(&self) -> bool {
        self.lower_ok && self.upper_ok && self.variation_ok && self.integral_ok
    }
}

/// Checks, on the truncation, that the calculus respects its certified
/// bounds with M = measure_bound():
///   sup |F| <= ||F(A)|| <= 4 M sup |F|,
///   var<E(.)f, g> <= 4 M ||f|| ||g||,
///   integral of |F| over delta against |<E(.)f, g>| <= 4 M ||E(delta) F(A) f|| ||g||.
pub fn check_calculus_bounds(
    op: &TruncatedOperator,
    f: &CalcFunction,
    delta: &RegionSpec,
    fvec: &DVector<Complex64>,
    gvec: &DVector<Complex64>,
    tol_rel: f64,
) -> Result<BoundsCheck, OpcalcError> {
    let m = op.measure_bound();
    let fa = apply_borel_function(op, f)?;
    let sup_f = op
        .eigenvalues
        .iter()
        .map(|z| f.eval(*z).norm())
        .fold(0.0, f64::max);
    let norm_fa = fa.operator_norm();
    let tol = tol_rel * (1.0 + sup_f.max(norm_fa));

    let variation = total_variation(op, fvec, gvec);
    let variation_bound = 4.0 * m * fvec.norm() * gvec.norm();

    // restricted integral of |F| against the variation of <E(.)f, g>
    let integral: f64 = grouped_masses(op, fvec, gvec)
        .into_iter()
        .filter(|(z, _)| delta.contains(*z))
        .map(|(z, mass)| f.eval(z).norm() * mass.norm())
        .sum();
    let e_delta = apply_borel_function(
        op,
        &CalcFunction::Indicator {
            region: delta.clone(),
        },
    )?;
    let efa_f = e_delta.mul_vec(&fa.mul_vec(fvec));
    let integral_bound = 4.0 * m * efa_f.norm() * gvec.norm();
    let itol = tol_rel * (1.0 + integral.max(integral_bound));

    Ok(BoundsCheck {
        sup_f,
        norm_fa,
        lower_ok: sup_f <= norm_fa + tol,
        upper_ok: norm_fa <= 4.0 * m * sup_f + tol,
        variation,
        variation_bound,
        variation_ok: variation <= variation_bound + tol_rel * (1.0 + variation_bound),
        integral,
        integral_bound,
        integral_ok: integral <= integral_bound + itol,
        measure_bound: m,
    })
}

/// Deterministic pseudo-random complex vector on the unit sphere.
pub fn seeded_vector(n: usize, seed: u64) -> DVector<Complex64> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_fn(n, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let norm = v.norm();
    if norm > 0.0 {
        v /= Complex64::new(norm, 0.0);
    }
    v
}

// ── tests ───────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{FinitePoint, GrowthTerm, ImSign, TailFamily};
    use approx::assert_relative_eq;

    fn diag_op(values: &[Complex64]) -> TruncatedOperator {
        TruncatedOperator {
            eigenvalues: values.to_vec(),
            similarity: None,
            seed: 0,
        }
    }

    fn twisted_op(values: &[Complex64], kappa: f64, seed: u64) -> TruncatedOperator {
        TruncatedOperator {
            eigenvalues: values.to_vec(),
            similarity: Some(make_similarity(values.len(), kappa, seed)),
            seed,
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Scaling-and-squaring Taylor exponential, the independent oracle for
    /// the conjugation route.
    fn expm_taylor(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = a.nrows();
        let norm1: f64 = (0..n)
            .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let s = norm1.log2().ceil().max(0.0) as u32 + 1;
        let small = a.map(|z| z / 2f64.powi(s as i32));
        let mut result = DMatrix::<Complex64>::identity(n, n);
        let mut term = DMatrix::<Complex64>::identity(n, n);
        for k in 1..=30 {
            term = (&term * &small).map(|z| z / k as f64);
            result += &term;
        }
        for _ in 0..s {
            result = &result * &result;
        }
        result
    }

    #[test]
    fn resolvent_frozen_example() {
        let op = diag_op(&[c(-1.0, 0.0), c(-2.0, 0.0)]);
        let r = apply_borel_function(
            &op,
            &CalcFunction::Resolvent { mu: c(0.0, 0.0) },
        )
        .unwrap();
        match r {
            MatrixValue::Diagonal(d) => {
                assert_eq!(d, vec![c(-1.0, 0.0), c(-0.5, 0.0)]);
            }
            other => panic!("expected diagonal, got {other:?}"),
        }
        // a resolvent point on the spectrum is rejected
        let err = apply_borel_function(
            &op,
            &CalcFunction::Resolvent { mu: c(-1.0, 0.0) },
        )
        .unwrap_err();
        assert!(matches!(err, OpcalcError::Singular(_)));
    }

    #[test]
    fn indicator_keeps_left_of_omega() {
        let op = diag_op(&[c(-1.0, 0.0), c(-2.0, 0.0)]);
        let p = apply_borel_function(
            &op,
            &CalcFunction::Indicator {
                region: RegionSpec::HalfPlane { omega: -1.5 },
            },
        )
        .unwrap();
        match p {
            MatrixValue::Diagonal(d) => assert_eq!(d, vec![c(0.0, 0.0), c(1.0, 0.0)]),
            other => panic!("expected diagonal, got {other:?}"),
        }
        // the complementary superlevel projection keeps the other mode
        let q = re_superlevel_projection(&op, -1.5);
        match q {
            MatrixValue::Diagonal(d) => assert_eq!(d, vec![c(1.0, 0.0), c(0.0, 0.0)]),
            other => panic!("expected diagonal, got {other:?}"),
        }
    }

    #[test]
    fn semigroup_euler_identity() {
        let op = diag_op(&[c(-1.0, 0.0), c(-1.0, std::f64::consts::PI)]);
        let t1 = semigroup_at(&op, 1.0).unwrap();
        match t1 {
            MatrixValue::Diagonal(d) => {
                assert_relative_eq!(d[0].re, (-1.0f64).exp(), max_relative = 1e-14);
                assert_relative_eq!(d[1].re, -(-1.0f64).exp(), max_relative = 1e-12);
                assert!(d[1].im.abs() < 1e-15);
            }
            other => panic!("expected diagonal, got {other:?}"),
        }
        assert!(semigroup_at(&op, -0.5).is_err());
    }

    #[test]
    fn conjugated_exponential_matches_taylor_oracle() {
        let values = [
            c(-0.3, 0.2),
            c(-0.6, -0.4),
            c(-0.9, 0.8),
            c(-1.2, 0.0),
            c(-1.5, 1.0),
            c(-1.8, -1.3),
        ];
        let op = twisted_op(&values, 10.0, 7);
        let a = apply_borel_function(&op, &CalcFunction::Identity).unwrap();
        let oracle = expm_taylor(&a.to_dense().map(|z| z * 1.3));
        let fast = semigroup_at(&op, 1.3).unwrap().to_dense();
        let err = (&oracle - &fast).norm() / oracle.norm();
        assert!(err < 1e-10, "relative deviation {err}");
    }

    #[test]
    fn truncation_expands_multiplicities_in_order() {
        let spec = SpectrumSpec {
            label: "m".into(),
            finite: vec![FinitePoint {
                re: 5.0,
                im: 0.0,
                mult: Multiplicity::Finite(2),
            }],
            tails: vec![TailFamily {
                re: GrowthTerm::Power { c: -1.0, p: 1.0 },
                im: GrowthTerm::Constant { c: 0.0 },
                im_sign: ImSign::Plus,
                n0: 1,
                mult: Multiplicity::Finite(3),
            }],
            ..Default::default()
        };
        let op = build_truncation(
            &spec,
            &TruncationOptions {
                n: 8,
                kappa: 1.0,
                seed: 1,
            },
        )
        .unwrap();
        let expect = [5.0, 5.0, -1.0, -1.0, -1.0, -2.0, -2.0, -2.0];
        let got: Vec<f64> = op.eigenvalues().iter().map(|z| z.re).collect();
        assert_eq!(got, expect);

        // prefix property: a smaller truncation is a prefix of a larger one
        let small = build_truncation(
            &spec,
            &TruncationOptions {
                n: 5,
                kappa: 1.0,
                seed: 1,
            },
        )
        .unwrap();
        assert_eq!(&op.eigenvalues()[..5], small.eigenvalues());
    }

    #[test]
    fn truncation_rejects_overflowing_tails() {
        // im = e^n overflows past n ~ 709
        let spec = SpectrumSpec {
            label: "overflow".into(),
            tails: vec![TailFamily {
                re: GrowthTerm::Power { c: -1.0, p: 2.0 },
                im: GrowthTerm::Exp { c: 1.0, r: 1.0 },
                im_sign: ImSign::Plus,
                n0: 1,
                mult: Multiplicity::Finite(1),
            }],
            ..Default::default()
        };
        let err = build_truncation(
            &spec,
            &TruncationOptions {
                n: 1024,
                kappa: 1.0,
                seed: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, OpcalcError::NonFinite { .. }));
        let cap = max_finite_dimension(&spec, 2048).unwrap();
        assert!((700..710).contains(&cap), "cap {cap}");
        assert!(build_truncation(
            &spec,
            &TruncationOptions {
                n: cap,
                kappa: 1.0,
                seed: 1,
            }
        )
        .is_ok());
    }

    #[test]
    fn infinite_multiplicity_is_not_materializable() {
        let spec = SpectrumSpec {
            finite: vec![FinitePoint {
                re: 0.0,
                im: 0.0,
                mult: Multiplicity::Infinite,
            }],
            ..Default::default()
        };
        assert!(matches!(
            build_truncation(&spec, &TruncationOptions::default()),
            Err(OpcalcError::InfiniteMultiplicity)
        ));
    }

    #[test]
    fn similarity_is_seed_deterministic_with_exact_inverse() {
        let values: Vec<Complex64> = (1..=16).map(|k| c(-(k as f64), 0.0)).collect();
        let a = twisted_op(&values, 10.0, 42);
        let b = twisted_op(&values, 10.0, 42);
        let d = twisted_op(&values, 10.0, 43);
        let sa = &a.similarity.as_ref().unwrap().s;
        let sb = &b.similarity.as_ref().unwrap().s;
        let sd = &d.similarity.as_ref().unwrap().s;
        assert_eq!(sa, sb);
        assert_ne!(sa, sd);

        // exact inverse by construction
        let sim = a.similarity.as_ref().unwrap();
        let prod = &sim.s * &sim.s_inv;
        let eye = DMatrix::<f64>::identity(16, 16);
        assert!((prod - eye).norm() < 1e-12);

        // condition number equals kappa
        let sv = sim.s.clone().svd(false, false).singular_values;
        let smax = sv.iter().copied().fold(0.0f64, f64::max);
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        assert_relative_eq!(smax / smin, 10.0, max_relative = 1e-10);
    }

    #[test]
    fn masses_sum_to_the_inner_product() {
        let values: Vec<Complex64> = (1..=12).map(|k| c(-(k as f64), 0.3 * k as f64)).collect();
        for op in [diag_op(&values), twisted_op(&values, 8.0, 5)] {
            let f = seeded_vector(12, 100);
            let g = seeded_vector(12, 101);
            let total: Complex64 = singleton_masses(&op, &f, &g).into_iter().sum();
            let direct: Complex64 = f
                .iter()
                .zip(g.iter())
                .map(|(a, b)| a * b.conj())
                .sum();
            assert!((total - direct).norm() < 1e-10, "{total} vs {direct}");
        }
    }

    #[test]
    fn projection_norm_matches_svd_oracle() {
        let values: Vec<Complex64> = (1..=24).map(|k| c(-(k as f64), 0.0)).collect();
        let op = twisted_op(&values, 25.0, 11);
        let sim = op.similarity.as_ref().unwrap();
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..12 {
            let mask: Vec<bool> = (0..24).map(|_| rng.gen::<bool>()).collect();
            if !mask.iter().any(|&b| b) {
                continue;
            }
            // oracle: dense SVD of S P S^-1
            let mut p = DMatrix::<f64>::zeros(24, 24);
            for (i, keep) in mask.iter().enumerate() {
                if *keep {
                    p[(i, i)] = 1.0;
                }
            }
            let dense = &sim.s * p * &sim.s_inv;
            let sv = dense.svd(false, false).singular_values;
            let oracle = sv.iter().copied().fold(0.0f64, f64::max);
            let fast = projection_norm(sim, &mask);
            assert_relative_eq!(fast, oracle, max_relative = 1e-6);
        }
    }

    #[test]
    fn measure_bound_certified_vs_observed() {
        let values: Vec<Complex64> = (1..=32).map(|k| c(-(k as f64), k as f64)).collect();
        let diag = diag_op(&values);
        assert_eq!(diag.measure_bound(), 1.0);
        assert_eq!(estimate_measure_bound(&diag, 50, 1), 1.0);

        let op = twisted_op(&values, 10.0, 9);
        let observed = estimate_measure_bound(&op, 200, 1);
        assert!(observed >= 1.0);
        assert!(
            observed <= op.measure_bound() * (1.0 + 1e-8),
            "observed {observed} exceeds certified {}",
            op.measure_bound()
        );
        // a twisted basis genuinely inflates some projection
        assert!(observed > 1.5, "observed only {observed}");
    }

    #[test]
    fn calculus_bounds_hold_on_both_models() {
        let values: Vec<Complex64> = (1..=20)
            .map(|k| c(-(k as f64) * 0.3, 0.2 * k as f64))
            .collect();
        let delta = RegionSpec::HalfPlane { omega: -2.0 };
        for op in [diag_op(&values), twisted_op(&values, 10.0, 21)] {
            for f in [
                CalcFunction::Exp { t: 0.7 },
                CalcFunction::Identity,
                CalcFunction::Resolvent { mu: c(1.0, 1.0) },
                CalcFunction::Polynomial {
                    coeffs: vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.0)],
                },
            ] {
                let fv = seeded_vector(20, 7);
                let gv = seeded_vector(20, 8);
                let check =
                    check_calculus_bounds(&op, &f, &delta, &fv, &gv, 1e-9).unwrap();
                assert!(check.all_ok(), "{f:?}: {check:?}");
            }
        }
    }

    #[test]
    fn diagonal_norm_is_exact_sup() {
        let values = [c(-1.0, 3.0), c(-0.5, 0.0), c(-2.0, -1.0)];
        let op = diag_op(&values);
        let t = semigroup_at(&op, 2.0).unwrap();
        let expect = values
            .iter()
            .map(|z| (z * 2.0).exp().norm())
            .fold(0.0f64, f64::max);
        assert_relative_eq!(t.operator_norm(), expect, max_relative = 1e-14);
    }

    #[test]
    fn dense_eigenvalues_recover_the_spectrum() {
        let values: Vec<Complex64> = (1..=10).map(|k| c(-(k as f64), 0.5 * k as f64)).collect();
        let op = twisted_op(&values, 5.0, 3);
        let a = apply_borel_function(&op, &CalcFunction::Identity).unwrap();
        let mut eigs = a.eigenvalues().unwrap();
        let mut expect = values.clone();
        let key = |z: &Complex64| (z.re, z.im);
        eigs.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        expect.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (e, x) in eigs.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-8, "{e} vs {x}");
        }
    }

    #[test]
    fn tail_norm_and_bound() {
        // eigenvalues -1, ..., -40; cutting below -10 leaves sup e^{-11 t}
        let values: Vec<Complex64> = (1..=40).map(|k| c(-(k as f64), 0.0)).collect();
        let op = diag_op(&values);
        let t = 1.0;
        let measured = semigroup_tail_norm(&op, t, -10.0).unwrap();
        assert_relative_eq!(measured, (-11.0f64).exp(), max_relative = 1e-12);
        let bound = tail_bound(op.measure_bound(), t, 10.0);
        assert!(measured <= bound);
        assert_relative_eq!(bound, 4.0 * (-10.0f64).exp(), max_relative = 1e-12);
    }
}
