//! Named example spectra covering the classification landscape.
//!
//! These are the specimens used by the demo suite, the cross-validation
//! tests and the documentation. Each sits in a different cell of the
//! regularity lattice: some are analytic, some only eventually
//! differentiable, some merely norm continuous, some not even generators.

use crate::spectrum::{
    FinitePoint, GrowthTerm, ImSign, Multiplicity, RegionSpec, SpectrumSpec, TailFamily,
};

fn tail(re: GrowthTerm, im: GrowthTerm, n0: u64) -> TailFamily {
    TailFamily {
        re,
        im,
        im_sign: ImSign::Plus,
        n0,
        mult: Multiplicity::Finite(1),
    }
}

fn point(re: f64, im: f64) -> FinitePoint {
    FinitePoint {
        re,
        im,
        mult: Multiplicity::Finite(1),
    }
}

fn tail_spec(label: &str, re: GrowthTerm, im: GrowthTerm) -> SpectrumSpec {
    SpectrumSpec {
        label: label.into(),
        tails: vec![tail(re, im, 1)],
        ..Default::default()
    }
}

/// All demo spectra, in a stable order.
pub fn demo_specs() -> Vec<SpectrumSpec> {
    vec![
        // analytic: eigenvalues on the ray -n + i n inside a left sector
        tail_spec(
            "diagonal_line",
            GrowthTerm::Power { c: -1.0, p: 1.0 },
            GrowthTerm::Power { c: 1.0, p: 1.0 },
        ),
        // eventually differentiable with onset t = 1, immediately compact
        tail_spec(
            "log_line",
            GrowthTerm::Log { c: -1.0, p: 1.0 },
            GrowthTerm::Power { c: 1.0, p: 1.0 },
        ),
        // norm continuity fails: a vertical line of eigenvalues
        tail_spec(
            "vertical_line",
            GrowthTerm::Constant { c: -1.0 },
            GrowthTerm::Power { c: 1.0, p: 1.0 },
        ),
        // immediately differentiable but not Gevrey: re decays like -n^2
        // while im explodes exponentially
        tail_spec(
            "parabola_exp_im",
            GrowthTerm::Power { c: -1.0, p: 2.0 },
            GrowthTerm::Exp { c: 1.0, r: 1.0 },
        ),
        // eventually differentiable with onset ln 2, not immediately
        tail_spec(
            "line_dyadic_im",
            GrowthTerm::Power { c: -1.0, p: 1.0 },
            GrowthTerm::Exp { c: 1.0, r: std::f64::consts::LN_2 },
        ),
        // self-adjoint-like decay on the real axis: analytic and compact
        tail_spec(
            "real_decay",
            GrowthTerm::Power { c: -1.0, p: 1.0 },
            GrowthTerm::Constant { c: 0.0 },
        ),
        // Gevrey of order exactly 2 (Roumieu), Beurling above 2
        tail_spec(
            "gevrey2_line",
            GrowthTerm::Power { c: -1.0, p: 1.0 },
            GrowthTerm::Power { c: 1.0, p: 2.0 },
        ),
        SpectrumSpec {
            label: "single_point".into(),
            finite: vec![point(-1.0, 0.0)],
            ..Default::default()
        },
        SpectrumSpec {
            label: "origin_only".into(),
            finite: vec![FinitePoint {
                re: 0.0,
                im: 0.0,
                mult: Multiplicity::Infinite,
            }],
            ..Default::default()
        },
        SpectrumSpec {
            label: "two_points".into(),
            finite: vec![point(-1.0, 0.0), point(-2.0, 3.0)],
            ..Default::default()
        },
        // compact operator: eigenvalues slide down to the listed origin
        SpectrumSpec {
            label: "decay_to_zero".into(),
            finite: vec![point(0.0, 0.0)],
            tails: vec![tail(
                GrowthTerm::Exp { c: -1.0, r: -0.5 },
                GrowthTerm::Constant { c: 0.0 },
                1,
            )],
            ..Default::default()
        },
        // infinite multiplicities block both compactness notions
        SpectrumSpec {
            label: "infinite_mult_line".into(),
            tails: vec![TailFamily {
                mult: Multiplicity::Infinite,
                ..tail(
                    GrowthTerm::Power { c: -1.0, p: 1.0 },
                    GrowthTerm::Constant { c: 0.0 },
                    1,
                )
            }],
            ..Default::default()
        },
        SpectrumSpec {
            label: "half_plane_region".into(),
            regions: vec![RegionSpec::HalfPlane { omega: -1.0 }],
            ..Default::default()
        },
        SpectrumSpec {
            label: "log_region".into(),
            regions: vec![RegionSpec::Log { a: 0.0, b: 1.0 }],
            ..Default::default()
        },
        SpectrumSpec {
            label: "power_region".into(),
            regions: vec![RegionSpec::Power {
                a: 0.0,
                b: 1.0,
                beta: 2.0,
            }],
            ..Default::default()
        },
        SpectrumSpec {
            label: "strip_region".into(),
            regions: vec![RegionSpec::Strip { h: 1.0 }],
            ..Default::default()
        },
        // not a generator: real parts rise without bound
        tail_spec(
            "rising_line",
            GrowthTerm::Power { c: 1.0, p: 1.0 },
            GrowthTerm::Power { c: 1.0, p: 1.0 },
        ),
    ]
}

pub fn by_label(label: &str) -> Option<SpectrumSpec> {
    demo_specs().into_iter().find(|s| s.label == label)
}

pub fn labels() -> Vec<String> {
    demo_specs().into_iter().map(|s| s.label).collect()
}

// ── tests ───────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_distinct() {
        let specs = demo_specs();
        assert!(specs.len() >= 15);
        let mut seen = std::collections::BTreeSet::new();
        for s in &specs {
            s.validate().unwrap_or_else(|e| panic!("{}: {e}", s.label));
            assert!(seen.insert(s.label.clone()), "duplicate label {}", s.label);
            // serialization round trip preserves the spec
            let back = SpectrumSpec::parse(&s.to_json()).unwrap();
            assert_eq!(&back, s);
        }
    }

    #[test]
    fn lookup_by_label() {
        assert!(by_label("log_line").is_some());
        assert!(by_label("no_such_label").is_none());
        assert_eq!(labels().len(), demo_specs().len());
    }
}
