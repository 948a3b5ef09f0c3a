//! Numerical probes that cross-check symbolic verdicts on truncations.
//!
//! Every decision made by the classifier is falsifiable on finite sections:
//! norm continuity shows up as a decaying difference modulus, the
//! differentiability onset as a divergence pattern in ||A T(t)|| across
//! growing truncations, compactness as singular value decay, the growth
//! bound as the slope of log ||T(t)||, and the spectral mapping identity as
//! an eigenvalue match. `cross_validate` runs the probes against the
//! symbolic report and records pass, fail or skip for each comparison.

use serde::{Deserialize, Serialize};

use crate::classifier::{
    full_report, ClassifierError, ClassifyOptions, CheckStatus, Tri, VerdictKind,
};
use crate::opcalc::{
    apply_borel_function, build_truncation, max_finite_dimension, semigroup_at, CalcFunction,
    OpcalcError, TruncatedOperator, TruncationOptions, MAX_TRUNCATION,
};
use crate::spectrum::SpectrumSpec;
use thiserror::Error;

// ── configuration ───────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Representative time for moduli and singular value probes.
    pub t_ref: f64,
    /// Largest time used by the growth probe.
    pub t_max: f64,
    /// Decreasing step sizes for the continuity modulus.
    pub h_schedule: Vec<f64>,
    /// Truncation sizes; clamped to what materializes with finite entries.
    pub n_schedule: Vec<usize>,
    /// Singular value ranks inspected by the compactness probe.
    pub r_schedule: Vec<usize>,
    /// Times checked by the spectral mapping probe.
    pub mapping_times: Vec<f64>,
    /// Basis condition number used by the spectral mapping probe.
    pub mapping_kappa: f64,
    /// Dimension used by the spectral mapping probe.
    pub mapping_dim: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Basis condition number for the remaining probes; 1 keeps them exact.
    pub kappa: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            t_ref: 1.0,
            t_max: 5.0,
            h_schedule: vec![1e-1, 1e-2, 1e-3, 1e-4],
            n_schedule: vec![64, 256, 1024],
            r_schedule: vec![0, 5, 10, 20, 40],
            mapping_times: vec![0.0, 0.5, 1.0, 3.0],
            mapping_kappa: 10.0,
            mapping_dim: 48,
            tolerance: 1e-8,
            seed: 42,
            kappa: 1.0,
        }
    }
}

// ── probe results ───────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sample {
    pub series: String,
    pub x: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeResult {
    pub name: String,
    pub verdict: Tri,
    pub detail: String,
    pub samples: Vec<Sample>,
}

/// Renders samples as CSV with a fixed header; the x column carries the
/// probe's independent variable (a time, a step size or a dimension).
pub fn samples_to_csv(samples: &[Sample]) -> String {
    let mut out = String::from("series,t_or_h_or_N,value\n");
    for s in samples {
        out.push_str(&format!("{},{:e},{:e}\n", s.series, s.x, s.value));
    }
    out
}

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Opcalc(#[from] OpcalcError),
}

// ── individual probes ───────────────────────────────────────────────────────

/// ||T(t + h) - T(t)||, the continuity modulus at time t and step h.
pub fn norm_continuity_modulus(
    op: &TruncatedOperator,
    t: f64,
    h: f64,
) -> Result<f64, OpcalcError> {
    let a = semigroup_at(op, t + h)?;
    let b = semigroup_at(op, t)?;
    Ok(a.sub(&b).operator_norm())
}

/// Decides continuity of t -> T(t) in operator norm at `t_ref` by driving
/// the step size down. Discontinuity on a truncation is only visible while
/// the step still resolves the largest imaginary part (h |Im| >= pi), so
/// that verdict is restricted to resolvable steps.
pub fn norm_continuity_probe(
    spec: &SpectrumSpec,
    cfg: &ProbeConfig,
) -> Result<ProbeResult, VerifierError> {
    let name = format!("norm_continuity at t = {}", cfg.t_ref);
    let cap = max_finite_dimension(spec, MAX_TRUNCATION)?;
    let mut sizes: Vec<usize> = cfg
        .n_schedule
        .iter()
        .copied()
        .filter(|&n| n <= cap)
        .collect();
    if sizes.is_empty() && cap >= 1 {
        sizes.push(cap.min(cfg.n_schedule.iter().copied().max().unwrap_or(64)));
    }
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return Ok(ProbeResult {
            name,
            verdict: Tri::Indeterminate,
            detail: "no truncation size materializes".into(),
            samples: Vec::new(),
        });
    }
    let mut hs = cfg.h_schedule.clone();
    hs.sort_by(|a, b| b.partial_cmp(a).unwrap());

    // moduli[i][j] = ||T(t_ref + hs[j]) - T(t_ref)|| at dimension sizes[i]
    let mut samples = Vec::new();
    let mut moduli: Vec<Vec<f64>> = Vec::new();
    let mut im_max_top = 0.0f64;
    let mut max_norm_top = 0.0f64;
    for &n in &sizes {
        let op = build_truncation(
            spec,
            &TruncationOptions {
                n,
                kappa: cfg.kappa,
                seed: cfg.seed,
            },
        )?;
        let mut row = Vec::with_capacity(hs.len());
        for &h in &hs {
            let m = norm_continuity_modulus(&op, cfg.t_ref, h)?;
            samples.push(Sample {
                series: format!("modulus_n{}", op.dimension()),
                x: h,
                value: m,
            });
            row.push(m);
        }
        if n == *sizes.last().expect("nonempty") {
            im_max_top = op
                .eigenvalues()
                .iter()
                .map(|z| z.im.abs())
                .fold(0.0f64, f64::max);
            max_norm_top = semigroup_at(&op, cfg.t_ref)?.operator_norm();
        }
        moduli.push(row);
    }

    let top = moduli.last().expect("nonempty");
    let first = top[0];
    let last = *top.last().expect("nonempty");
    let resolvable: Vec<(f64, f64)> = hs
        .iter()
        .zip(top)
        .filter(|(h, _)| *h * im_max_top >= std::f64::consts::PI)
        .map(|(h, m)| (*h, *m))
        .collect();

    // decay on a single truncation is only evidence about the full operator
    // once the modulus curve has stopped moving with the dimension; a curve
    // still growing in N is a resolution artifact
    let converged = if spec.tails.is_empty() {
        true
    } else if moduli.len() >= 2 {
        let prev = &moduli[moduli.len() - 2];
        top.iter()
            .zip(prev)
            .all(|(a, b)| *a <= 1.5 * b + cfg.tolerance * max_norm_top.max(1.0))
    } else {
        false
    };
    let continuous = converged
        && (last <= (cfg.tolerance * max_norm_top).max(1e-2 * first) || first == 0.0);
    let discontinuous = resolvable.len() >= 2
        && resolvable[resolvable.len() - 1].1 >= 0.25 * resolvable[0].1
        && resolvable[0].1 > 0.0;

    let (verdict, detail) = if discontinuous {
        (
            Tri::No,
            format!(
                "modulus stays at {:.3e} of its initial value over resolvable steps",
                resolvable[resolvable.len() - 1].1 / resolvable[0].1
            ),
        )
    } else if continuous {
        (
            Tri::Yes,
            format!("modulus decayed from {first:.3e} to {last:.3e}"),
        )
    } else if !converged {
        (
            Tri::Indeterminate,
            format!(
                "modulus still moves with the dimension at sizes {sizes:?}; \
                 resolution limited"
            ),
        )
    } else {
        (
            Tri::Indeterminate,
            format!("modulus went from {first:.3e} to {last:.3e}; no clear decision"),
        )
    };
    Ok(ProbeResult {
        name,
        verdict,
        detail,
        samples,
    })
}

/// Tracks ||A T(t)|| across a ladder of truncation sizes. Divergence
/// (every consecutive ratio at least 2) indicates that T is not
/// differentiable at time t; a settled tail (final ratio at most 1.05)
/// indicates that it is.
pub fn differentiability_probe(
    spec: &SpectrumSpec,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<ProbeResult, VerifierError> {
    let cap = max_finite_dimension(spec, MAX_TRUNCATION)?;
    let mut sizes: Vec<usize> = Vec::new();
    if let Some(&n0) = cfg.n_schedule.first() {
        sizes.push((n0 / 16).max(4));
        sizes.push((n0 / 4).max(4));
    }
    sizes.extend(cfg.n_schedule.iter().copied());
    sizes.retain(|&n| n <= cap && n >= 1);
    sizes.dedup();

    let mut samples = Vec::new();
    let mut values = Vec::new();
    for &n in &sizes {
        let op = build_truncation(
            spec,
            &TruncationOptions {
                n,
                kappa: 1.0,
                seed: cfg.seed,
            },
        )?;
        let d = apply_borel_function(&op, &CalcFunction::LambdaExp { t })?.operator_norm();
        samples.push(Sample {
            series: format!("derivative_norm_t{t}"),
            x: n as f64,
            value: d,
        });
        values.push(d);
    }
    if values.len() < 2 {
        return Ok(ProbeResult {
            name: format!("differentiability at t = {t}"),
            verdict: Tri::Indeterminate,
            detail: "not enough truncation sizes materialize".into(),
            samples,
        });
    }
    let ratios: Vec<f64> = values
        .windows(2)
        .map(|w| if w[0] > 1e-300 { w[1] / w[0] } else { f64::NAN })
        .collect();
    let divergent = ratios.iter().all(|r| *r >= 2.0);
    let settled = ratios.last().is_some_and(|r| *r <= 1.05 && r.is_finite());
    let (verdict, detail) = if divergent {
        (
            Tri::No,
            format!("derivative norm grows by factors {ratios:.3?} across sizes"),
        )
    } else if settled {
        (
            Tri::Yes,
            format!(
                "derivative norm settles at {:.6e} (final ratio {:.4})",
                values[values.len() - 1],
                ratios[ratios.len() - 1]
            ),
        )
    } else {
        (
            Tri::Indeterminate,
            format!("ratios {ratios:.3?} are neither divergent nor settled"),
        )
    };
    Ok(ProbeResult {
        name: format!("differentiability at t = {t}"),
        verdict,
        detail,
        samples,
    })
}

/// Ranks the singular values of T(t); fast decay across the rank schedule
/// marks a compact section, a flat profile marks a non-compact one.
pub fn compactness_probe(
    op: &TruncatedOperator,
    t: f64,
    cfg: &ProbeConfig,
) -> Result<ProbeResult, OpcalcError> {
    let tv = semigroup_at(op, t)?;
    let mut sv: Vec<f64> = match &tv {
        crate::opcalc::MatrixValue::Diagonal(d) => d.iter().map(|z| z.norm()).collect(),
        dense => {
            let m = dense.to_dense();
            m.svd(false, false).singular_values.iter().copied().collect()
        }
    };
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut samples = Vec::new();
    let mut last_ratio = None;
    for &r in &cfg.r_schedule {
        if r >= sv.len() {
            continue;
        }
        let ratio = if sv[0] > 0.0 { sv[r] / sv[0] } else { 0.0 };
        samples.push(Sample {
            series: format!("sv_ratio_t{t}"),
            x: r as f64,
            value: ratio,
        });
        last_ratio = Some((r, ratio));
    }
    let (verdict, detail) = match last_ratio {
        Some((r, ratio)) if r > 0 && ratio <= 0.1 => (
            Tri::Yes,
            format!("singular value {r} has decayed to {ratio:.3e} of the top"),
        ),
        Some((r, ratio)) if r > 0 && ratio >= 0.5 => (
            Tri::No,
            format!("singular value {r} still holds {ratio:.3e} of the top"),
        ),
        Some((r, ratio)) => (
            Tri::Indeterminate,
            format!("singular value ratio {ratio:.3e} at rank {r} is inconclusive"),
        ),
        None => (
            Tri::Indeterminate,
            "the rank schedule does not fit the truncation".into(),
        ),
    };
    Ok(ProbeResult {
        name: format!("compactness at t = {t}"),
        verdict,
        detail,
        samples,
    })
}

/// Empirical growth bound log ||T(t_max)|| / t_max.
pub fn growth_estimate(op: &TruncatedOperator, t_max: f64) -> Result<f64, OpcalcError> {
    Ok(semigroup_at(op, t_max)?.operator_norm().ln() / t_max)
}

/// Greedy eigenvalue match between T(t) and {exp(t lambda)}; returns the
/// worst matching distance over the configured times.
pub fn spectral_mapping_mismatch(
    op: &TruncatedOperator,
    times: &[f64],
) -> Result<f64, OpcalcError> {
    let mut worst = 0.0f64;
    for &t in times {
        let tv = semigroup_at(op, t)?;
        let mut computed = tv.eigenvalues()?;
        let mut predicted: Vec<num_complex::Complex64> =
            op.eigenvalues().iter().map(|z| crate::opcalc::cexp(z * t)).collect();
        predicted.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
        for p in predicted {
            let (idx, dist) = computed
                .iter()
                .enumerate()
                .map(|(i, c)| (i, (c - p).norm()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("dimension mismatch in spectral mapping");
            worst = worst.max(dist);
            computed.swap_remove(idx);
        }
    }
    Ok(worst)
}

// ── cross validation ────────────────────────────────────────────────────────

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Agreement {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    pub max_dimension: usize,
    pub agreements: Vec<Agreement>,
    pub probes: Vec<ProbeResult>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.agreements
            .iter()
            .all(|a| a.status != CheckStatus::Fail)
    }
}

fn agreement(name: &str, status: CheckStatus, detail: String) -> Agreement {
    Agreement {
        name: name.into(),
        status,
        detail,
    }
}

fn skip(name: &str, why: &str) -> Agreement {
    agreement(name, CheckStatus::Skipped, why.into())
}

/// Compares the numerical probes against the symbolic report, returning a
/// pass/fail/skip per comparison. Probes that cannot run (nothing
/// materializes, or a regularity premise fails) are skipped, never failed.
pub fn cross_validate(
    spec: &SpectrumSpec,
    cfg: &ProbeConfig,
) -> Result<VerificationReport, VerifierError> {
    let report = full_report(spec, &ClassifyOptions::default())?;
    let mut agreements = Vec::new();
    let mut probes = Vec::new();

    let cap = match max_finite_dimension(spec, MAX_TRUNCATION) {
        Ok(c) => c,
        Err(e) => {
            for name in [
                "growth_bound",
                "norm_continuity",
                "differentiability",
                "compactness",
                "spectral_mapping",
            ] {
                agreements.push(skip(name, &format!("not materializable: {e}")));
            }
            return Ok(VerificationReport {
                label: spec.label.clone(),
                max_dimension: 0,
                agreements,
                probes,
            });
        }
    };
    let usable: Vec<usize> = cfg
        .n_schedule
        .iter()
        .copied()
        .filter(|&n| n <= cap)
        .collect();
    let largest_requested = cfg.n_schedule.iter().copied().max().unwrap_or(64);
    let top_n = usable
        .last()
        .copied()
        .or_else(|| (cap >= 1).then(|| cap.min(largest_requested)));
    let Some(top_n) = top_n else {
        for name in [
            "growth_bound",
            "norm_continuity",
            "differentiability",
            "compactness",
            "spectral_mapping",
        ] {
            agreements.push(skip(
                name,
                &format!("no configured size materializes (cap {cap})"),
            ));
        }
        return Ok(VerificationReport {
            label: spec.label.clone(),
            max_dimension: cap,
            agreements,
            probes,
        });
    };

    let op = build_truncation(
        spec,
        &TruncationOptions {
            n: top_n,
            kappa: cfg.kappa,
            seed: cfg.seed,
        },
    )
    .map_err(VerifierError::Opcalc)?;

    let generates = report
        .get(VerdictKind::Generates)
        .map(|v| v.answer)
        .unwrap_or(Tri::Indeterminate);

    // growth bound
    if generates == Tri::Yes {
        let omega_hat = growth_estimate(&op, cfg.t_max)?;
        let s_trunc = op.spectral_bound_trunc();
        let slack = op.measure_bound().ln() / cfg.t_max + cfg.tolerance;
        let status = if (omega_hat - s_trunc).abs() <= slack {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        probes.push(ProbeResult {
            name: "growth_bound".into(),
            verdict: if status == CheckStatus::Pass {
                Tri::Yes
            } else {
                Tri::No
            },
            detail: format!("estimate {omega_hat:.9} vs truncated bound {s_trunc:.9}"),
            samples: vec![Sample {
                series: "omega_hat".into(),
                x: cfg.t_max,
                value: omega_hat,
            }],
        });
        agreements.push(agreement(
            "growth_bound",
            status,
            format!(
                "|{omega_hat:.9} - {s_trunc:.9}| vs allowance {slack:.3e} at dimension {top_n}"
            ),
        ));
    } else {
        agreements.push(skip(
            "growth_bound",
            "generation fails; no finite growth bound to match",
        ));
    }

    // norm continuity
    if generates == Tri::Yes {
        let probe = norm_continuity_probe(spec, cfg)?;
        let expected = report
            .get(VerdictKind::ImmediateNormContinuity)
            .map(|v| v.answer)
            .unwrap_or(Tri::Indeterminate);
        agreements.push(compare("norm_continuity", expected, &probe));
        probes.push(probe);
    } else {
        agreements.push(skip("norm_continuity", "generation fails"));
    }

    // differentiability onset
    if generates == Tri::Yes {
        let imm = report
            .get(VerdictKind::ImmediateDifferentiability)
            .map(|v| v.answer)
            .unwrap_or(Tri::Indeterminate);
        let ev = report.get(VerdictKind::EventualDifferentiability);
        let ev_answer = ev.map(|v| v.answer).unwrap_or(Tri::Indeterminate);
        let t0 = ev.and_then(|v| v.witness_t0());
        if imm == Tri::Yes {
            let probe = differentiability_probe(spec, 0.1, cfg)?;
            agreements.push(compare("differentiability", Tri::Yes, &probe));
            probes.push(probe);
        } else if ev_answer == Tri::Yes {
            match t0 {
                Some(t0) if t0 > 0.0 => {
                    let before = differentiability_probe(spec, 0.5 * t0, cfg)?;
                    let after = differentiability_probe(spec, 1.5 * t0, cfg)?;
                    let status = match (before.verdict, after.verdict) {
                        (Tri::No, Tri::Yes) => CheckStatus::Pass,
                        (Tri::Indeterminate, _) | (_, Tri::Indeterminate) => {
                            CheckStatus::Skipped
                        }
                        _ => CheckStatus::Fail,
                    };
                    agreements.push(agreement(
                        "differentiability",
                        status,
                        format!(
                            "onset t0 = {t0}: divergent before ({:?}), settled after ({:?})",
                            before.verdict, after.verdict
                        ),
                    ));
                    probes.push(before);
                    probes.push(after);
                }
                _ => agreements.push(skip(
                    "differentiability",
                    "eventual verdict carries no usable onset",
                )),
            }
        } else if ev_answer == Tri::No {
            let probe = differentiability_probe(spec, cfg.t_max / 2.0, cfg)?;
            agreements.push(compare("differentiability", Tri::No, &probe));
            probes.push(probe);
        } else {
            agreements.push(skip("differentiability", "symbolic verdict indeterminate"));
        }
    } else {
        agreements.push(skip("differentiability", "generation fails"));
    }

    // compactness of the semigroup
    if generates == Tri::Yes {
        if spec.tails.is_empty() {
            agreements.push(skip(
                "compactness",
                "finite spectra make every truncation compact; probe uninformative",
            ));
        } else {
            let probe = compactness_probe(&op, cfg.t_ref, cfg)?;
            let expected = report
                .get(VerdictKind::ImmediatelyCompactSemigroup)
                .map(|v| v.answer)
                .unwrap_or(Tri::Indeterminate);
            agreements.push(compare("compactness", expected, &probe));
            probes.push(probe);
        }
    } else {
        agreements.push(skip("compactness", "generation fails"));
    }

    // spectral mapping on a conditioned basis
    if generates == Tri::Yes {
        let dim = cfg.mapping_dim.min(cap).max(1);
        let map_op = build_truncation(
            spec,
            &TruncationOptions {
                n: dim,
                kappa: cfg.mapping_kappa,
                seed: cfg.seed,
            },
        )?;
        let mismatch = spectral_mapping_mismatch(&map_op, &cfg.mapping_times)?;
        let scale = map_op
            .eigenvalues()
            .iter()
            .flat_map(|z| {
                cfg.mapping_times
                    .iter()
                    .map(move |t| crate::opcalc::cexp(z * *t).norm())
            })
            .fold(1.0f64, f64::max);
        let allowed = cfg.tolerance * scale * dim as f64;
        let status = if mismatch <= allowed {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        probes.push(ProbeResult {
            name: "spectral_mapping".into(),
            verdict: if status == CheckStatus::Pass {
                Tri::Yes
            } else {
                Tri::No
            },
            detail: format!("worst eigenvalue mismatch {mismatch:.3e}"),
            samples: vec![Sample {
                series: "mapping_mismatch".into(),
                x: dim as f64,
                value: mismatch,
            }],
        });
        agreements.push(agreement(
            "spectral_mapping",
            status,
            format!("mismatch {mismatch:.3e} vs allowance {allowed:.3e} at dimension {dim}"),
        ));
    } else {
        agreements.push(skip("spectral_mapping", "generation fails"));
    }

    Ok(VerificationReport {
        label: spec.label.clone(),
        max_dimension: cap,
        agreements,
        probes,
    })
}

fn compare(name: &str, expected: Tri, probe: &ProbeResult) -> Agreement {
    let status = match (expected, probe.verdict) {
        (Tri::Yes, Tri::Yes) | (Tri::No, Tri::No) => CheckStatus::Pass,
        (_, Tri::Indeterminate) | (Tri::Indeterminate, _) => CheckStatus::Skipped,
        _ => CheckStatus::Fail,
    };
    agreement(
        name,
        status,
        format!(
            "symbolic {expected:?} vs probe {:?} ({})",
            probe.verdict, probe.detail
        ),
    )
}

// ── tests ───────────────────────────────────────────────────────────────────
