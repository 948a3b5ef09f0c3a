//! Symbolic spectrum descriptions.
//!
//! A spectrum is a finite list of explicit points, a list of asymptotic
//! eigenvalue families ("tails") indexed by n >= n0, and optionally solid
//! regions of the plane. Tails are built from a small grammar of growth
//! terms so that suprema, limits and region membership stay decidable.

use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

// ── growth terms ────────────────────────────────────────────────────────────

/// One-parameter family of real sequences: constants, powers `c n^p`,
/// logarithms `c (ln(n+1))^p` and exponentials `c e^{r n}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthTerm {
    Constant { c: f64 },
    Power { c: f64, p: f64 },
    Log { c: f64, p: f64 },
    Exp { c: f64, r: f64 },
}

/// Monotonicity of a growth term over n >= 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
    Flat,
}

impl GrowthTerm {
    pub fn eval(&self, n: u64) -> f64 {
        self.eval_x(n as f64)
    }

    /// Evaluation at a real argument, used by grid scans.
    pub fn eval_x(&self, x: f64) -> f64 {
        match *self {
            GrowthTerm::Constant { c } => c,
            GrowthTerm::Power { c, p } => c * x.powf(p),
            GrowthTerm::Log { c, p } => c * (x + 1.0).ln().powf(p),
            GrowthTerm::Exp { c, r } => c * (r * x).exp(),
        }
    }

    /// ln |term(n)|, computed without materializing the value, so
    /// exponential families never overflow. Returns None when the term is
    /// identically zero.
    pub fn log_abs(&self, n: u64) -> Option<f64> {
        let x = n as f64;
        match *self {
            GrowthTerm::Constant { c } => (c != 0.0).then(|| c.abs().ln()),
            GrowthTerm::Power { c, p } => (c != 0.0).then(|| c.abs().ln() + p * x.ln()),
            GrowthTerm::Log { c, p } => {
                (c != 0.0).then(|| c.abs().ln() + p * (x + 1.0).ln().ln())
            }
            GrowthTerm::Exp { c, r } => (c != 0.0).then(|| c.abs().ln() + r * x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            GrowthTerm::Constant { c }
            | GrowthTerm::Power { c, .. }
            | GrowthTerm::Log { c, .. }
            | GrowthTerm::Exp { c, .. } => c == 0.0,
        }
    }

    /// Limit as n -> inf, as an extended real.
    pub fn limit(&self) -> f64 {
        match *self {
            GrowthTerm::Constant { c } => c,
            GrowthTerm::Power { c, p } | GrowthTerm::Log { c, p } => {
                if c == 0.0 || p == 0.0 {
                    if p == 0.0 {
                        c
                    } else {
                        0.0
                    }
                } else if c > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
            GrowthTerm::Exp { c, r } => {
                if c == 0.0 || r == 0.0 {
                    c
                } else if r < 0.0 {
                    0.0
                } else if c > 0.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn direction(&self) -> Monotone {
        let (c, growing) = match *self {
            GrowthTerm::Constant { .. } => return Monotone::Flat,
            GrowthTerm::Power { c, p } | GrowthTerm::Log { c, p } => {
                if p == 0.0 || c == 0.0 {
                    return Monotone::Flat;
                }
                (c, true)
            }
            GrowthTerm::Exp { c, r } => {
                if r == 0.0 || c == 0.0 {
                    return Monotone::Flat;
                }
                (c, r > 0.0)
            }
        };
        // a growing base scaled by c > 0 increases; every other combination
        // mirrors accordingly
        match (c > 0.0, growing) {
            (true, true) | (false, false) => Monotone::Increasing,
            (true, false) | (false, true) => Monotone::Decreasing,
        }
    }

    /// Supremum over {n, n+1, ...}; exact because the term is monotone.
    pub fn sup_from(&self, n0: u64) -> f64 {
        self.eval(n0).max(self.limit())
    }

    pub fn inf_from(&self, n0: u64) -> f64 {
        self.eval(n0).min(self.limit())
    }

    /// Limit of |term(n)|.
    pub fn abs_limit(&self) -> f64 {
        let l = self.limit();
        if l.is_infinite() {
            f64::INFINITY
        } else {
            l.abs()
        }
    }

    /// Supremum of |term(n)| over {n0, n0+1, ...}.
    pub fn abs_sup_from(&self, n0: u64) -> f64 {
        self.eval(n0).abs().max(self.abs_limit())
    }

    /// First index n >= n0 with term(n) < threshold, assuming the term is
    /// decreasing. Uses the closed-form inverse and a local integer walk.
    pub(crate) fn first_below(&self, n0: u64, threshold: f64) -> Option<u64> {
        if self.direction() != Monotone::Decreasing {
            return (self.eval(n0) < threshold).then_some(n0);
        }
        if self.limit() >= threshold {
            return None;
        }
        // approximate crossing from the closed-form inverse of each shape
        let guess = match *self {
            GrowthTerm::Constant { .. } => n0 as f64,
            GrowthTerm::Power { c, p } => (threshold / c).powf(1.0 / p),
            GrowthTerm::Log { c, p } => ((threshold / c).powf(1.0 / p)).exp() - 1.0,
            GrowthTerm::Exp { c, r } => (threshold / c).ln() / r,
        };
        let mut n = if guess.is_finite() && guess > n0 as f64 {
            (guess as u64).saturating_sub(4).max(n0)
        } else {
            n0
        };
        // walk forward to the true first crossing; the guess may sit near
        // u64::MAX when the crossing lies beyond the representable range
        let mut budget = 1u64 << 40;
        while self.eval(n) >= threshold {
            if n == u64::MAX {
                return None;
            }
            n = n.saturating_add(1).max(n.saturating_add(n >> 4));
            budget >>= 1;
            if budget == 0 {
                return None;
            }
        }
        // back off to the exact boundary
        while n > n0 && self.eval(n - 1) < threshold {
            n -= 1;
        }
        Some(n)
    }

    fn validate(&self, path: &str, allow_negative_power: bool) -> Result<(), SpecError> {
        let bad = |constraint: &str| SpecError::Invalid {
            path: path.to_string(),
            constraint: constraint.to_string(),
        };
        match *self {
            GrowthTerm::Constant { c } => {
                if !c.is_finite() {
                    return Err(bad("Constant.c must be finite"));
                }
            }
            GrowthTerm::Power { c, p } => {
                if !c.is_finite() || !p.is_finite() {
                    return Err(bad("Power parameters must be finite"));
                }
                if p < 0.0 && !allow_negative_power {
                    return Err(bad("Power.p must be >= 0"));
                }
            }
            GrowthTerm::Log { c, p } => {
                if !c.is_finite() || !p.is_finite() {
                    return Err(bad("Log parameters must be finite"));
                }
                if p < 0.0 && !allow_negative_power {
                    return Err(bad("Log.p must be >= 0"));
                }
            }
            GrowthTerm::Exp { c, r } => {
                if !c.is_finite() || !r.is_finite() {
                    return Err(bad("Exp parameters must be finite"));
                }
            }
        }
        Ok(())
    }
}

// ── multiplicities and tails ────────────────────────────────────────────────

/// Geometric multiplicity of an eigenvalue; "inf" marks eigenspaces of
/// infinite dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn is_finite(&self) -> bool {
        matches!(self, Multiplicity::Finite(_))
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(k) => s.serialize_u64(*k),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

struct MultVisitor;

impl Visitor<'_> for MultVisitor {
    type Value = Multiplicity;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a positive integer or \"inf\"")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Multiplicity, E> {
        if v == 0 {
            Err(E::custom("mult must be a positive integer or \"inf\""))
        } else {
            Ok(Multiplicity::Finite(v))
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Multiplicity, E> {
        if v <= 0 {
            Err(E::custom("mult must be a positive integer or \"inf\""))
        } else {
            Ok(Multiplicity::Finite(v as u64))
        }
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Multiplicity, E> {
        if v == "inf" {
            Ok(Multiplicity::Infinite)
        } else {
            Err(E::custom("mult must be a positive integer or \"inf\""))
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(MultVisitor)
    }
}

fn default_mult() -> Multiplicity {
    Multiplicity::Finite(1)
}

/// Sign pattern applied to the imaginary growth term.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImSign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "alternating")]
    Alternating,
}

/// Eigenvalue family lambda_n = re(n) + i * sign(n) * im(n) for n >= n0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailFamily {
    pub re: GrowthTerm,
    pub im: GrowthTerm,
    #[serde(default)]
    pub im_sign: ImSign,
    pub n0: u64,
    #[serde(default = "default_mult")]
    pub mult: Multiplicity,
}

impl TailFamily {
    pub fn value_at(&self, n: u64) -> Complex64 {
        let sign = match self.im_sign {
            ImSign::Plus => 1.0,
            ImSign::Minus => -1.0,
            ImSign::Alternating => {
                if (n - self.n0) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        Complex64::new(self.re.eval(n), sign * self.im.eval(n))
    }

    /// Whether the family, viewed as a point set, is bounded.
    pub fn is_bounded(&self) -> bool {
        self.re.limit().is_finite() && self.im.abs_limit().is_finite()
    }

    fn validate(&self, idx: usize) -> Result<(), SpecError> {
        self.re.validate(&format!("tails[{idx}].re"), false)?;
        self.im.validate(&format!("tails[{idx}].im"), false)?;
        if self.n0 < 1 {
            return Err(SpecError::Invalid {
                path: format!("tails[{idx}].n0"),
                constraint: "n0 must be >= 1".to_string(),
            });
        }
        Ok(())
    }
}

/// Explicitly listed eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinitePoint {
    pub re: f64,
    pub im: f64,
    #[serde(default = "default_mult")]
    pub mult: Multiplicity,
}

impl FinitePoint {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

// ── regions ─────────────────────────────────────────────────────────────────

/// Solid subsets of the plane used both as spectrum components and as
/// containment targets for the classifier.
///
/// `HalfPlane` is {Re z <= omega}. `Log` is {Re z <= a - b ln |Im z|} with the
/// boundary read as +inf on the real axis. `Power` is
/// {Re z <= a - b |Im z|^(1/beta)}, which on the real axis degenerates to
/// {Re z <= a}. `Strip` is {|Im z| <= h}. Geometry lives in `regions`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionSpec {
    HalfPlane { omega: f64 },
    Log { a: f64, b: f64 },
    Power { a: f64, b: f64, beta: f64 },
    Strip { h: f64 },
    Union(Vec<RegionSpec>),
}

impl RegionSpec {
    fn validate(&self, path: &str) -> Result<(), SpecError> {
        let bad = |constraint: &str| SpecError::Invalid {
            path: path.to_string(),
            constraint: constraint.to_string(),
        };
        match self {
            RegionSpec::HalfPlane { omega } => {
                if !omega.is_finite() {
                    return Err(bad("HalfPlane.omega must be finite"));
                }
            }
            RegionSpec::Log { a, b } => {
                if !a.is_finite() {
                    return Err(bad("LogRegion.a must be finite"));
                }
                if !(*b > 0.0) || !b.is_finite() {
                    return Err(bad("LogRegion.b must be > 0"));
                }
            }
            RegionSpec::Power { a, b, beta } => {
                if !a.is_finite() {
                    return Err(bad("PowerRegion.a must be finite"));
                }
                if !(*b > 0.0) || !b.is_finite() {
                    return Err(bad("PowerRegion.b must be > 0"));
                }
                if !(*beta >= 1.0) || !beta.is_finite() {
                    return Err(bad("PowerRegion.beta must be >= 1"));
                }
            }
            RegionSpec::Strip { h } => {
                if !(*h > 0.0) || !h.is_finite() {
                    return Err(bad("HorizontalStrip.h must be > 0"));
                }
            }
            RegionSpec::Union(items) => {
                if items.is_empty() {
                    return Err(bad("FiniteUnion must be nonempty"));
                }
                for (i, item) in items.iter().enumerate() {
                    item.validate(&format!("{path}.union[{i}]"))?;
                }
            }
        }
        Ok(())
    }
}

// ── the spectrum spec ───────────────────────────────────────────────────────

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub finite: Vec<FinitePoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tails: Vec<TailFamily>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RegionSpec>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed spectrum spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {constraint}")]
    Invalid { path: String, constraint: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("spectrum has region components; only point spectra can be sampled")]
    RegionsNotSamplable,
}

/// Three-valued answers. `Indeterminate` is reserved for questions the
/// decision procedures cannot settle; it is never a guessed yes or no.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    Yes,
    No,
    Indeterminate,
}

impl Tri {
    pub fn is_yes(&self) -> bool {
        matches!(self, Tri::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Tri::No)
    }
}

/// Outcome of a superlevel-set boundedness query.
#[derive(Clone, Debug, Serialize)]
pub struct SuperlevelResult {
    pub bounded: Tri,
    /// Enclosing radius when bounded (may be absent for region components
    /// whose radius is reported in the note instead).
    pub radius: Option<f64>,
    /// Sample points escaping every ball, when unbounded.
    pub escape: Vec<Complex64>,
    pub note: String,
}

/// Extent of one spectrum component inside a superlevel set {Re >= b}.
#[derive(Clone, Debug)]
pub(crate) enum PartExtent {
    Empty,
    Bounded { radius: Option<f64>, note: String },
    Unbounded { escape: Vec<Complex64>, why: String },
}

impl SpectrumSpec {
    pub fn parse(input: &str) -> Result<Self, SpecError> {
        let spec: SpectrumSpec = serde_json::from_str(input)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum specs always serialize")
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        for (i, p) in self.finite.iter().enumerate() {
            if !p.re.is_finite() || !p.im.is_finite() {
                return Err(SpecError::Invalid {
                    path: format!("finite[{i}]"),
                    constraint: "point coordinates must be finite".to_string(),
                });
            }
        }
        for (i, t) in self.tails.iter().enumerate() {
            t.validate(i)?;
        }
        for (i, r) in self.regions.iter().enumerate() {
            r.validate(&format!("regions[{i}]"))?;
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.tails.is_empty() && self.regions.is_empty()
    }

    pub fn is_pure_point(&self) -> bool {
        self.regions.is_empty()
    }

    /// All finite points followed by the first `count` terms of every tail.
    /// Tails are interleaved round-robin so that the result for `count` is a
    /// prefix of the result for `count + 1`.
    pub fn sample_eigenvalues(
        &self,
        count: usize,
    ) -> Result<Vec<(Complex64, Multiplicity)>, SampleError> {
        if !self.regions.is_empty() {
            return Err(SampleError::RegionsNotSamplable);
        }
        let mut out = Vec::with_capacity(self.finite.len() + count * self.tails.len());
        for p in &self.finite {
            out.push((p.value(), p.mult));
        }
        for k in 0..count as u64 {
            for t in &self.tails {
                out.push((t.value_at(t.n0 + k), t.mult));
            }
        }
        Ok(out)
    }

    /// sup Re over the described set, as an extended real. The empty
    /// spectrum yields -inf.
    pub fn spectral_bound(&self) -> f64 {
        let mut s = f64::NEG_INFINITY;
        for p in &self.finite {
            s = s.max(p.re);
        }
        for t in &self.tails {
            s = s.max(t.re.sup_from(t.n0));
        }
        for r in &self.regions {
            s = s.max(r.sup_re());
        }
        s
    }

    /// Decides whether {lambda in spectrum : Re lambda >= b} is a bounded
    /// set, with an enclosing radius or escaping sample points as witness.
    pub fn superlevel_bounded(&self, b: f64) -> SuperlevelResult {
        let mut radius: f64 = 0.0;
        let mut saw_radius = false;
        let mut notes: Vec<String> = Vec::new();

        let mut parts: Vec<PartExtent> = Vec::new();
        for p in &self.finite {
            if p.re >= b {
                parts.push(PartExtent::Bounded {
                    radius: Some(p.value().norm()),
                    note: String::new(),
                });
            }
        }
        for (i, t) in self.tails.iter().enumerate() {
            parts.push(tail_superlevel(t, b, i));
        }
        for r in &self.regions {
            parts.push(r.superlevel_part(b));
        }

        for part in parts {
            match part {
                PartExtent::Empty => {}
                PartExtent::Bounded { radius: r, note } => {
                    if let Some(r) = r {
                        radius = radius.max(r);
                        saw_radius = true;
                    }
                    if !note.is_empty() {
                        notes.push(note);
                    }
                }
                PartExtent::Unbounded { escape, why } => {
                    return SuperlevelResult {
                        bounded: Tri::No,
                        radius: None,
                        escape,
                        note: why,
                    };
                }
            }
        }
        SuperlevelResult {
            bounded: Tri::Yes,
            radius: saw_radius.then_some(radius),
            escape: Vec::new(),
            note: if notes.is_empty() {
                format!("superlevel set at b = {b} is bounded")
            } else {
                notes.join("; ")
            },
        }
    }
}

/// Superlevel extent of one tail family. The qualifying index set
/// {n : re(n) >= b} is empty, a finite block, or cofinite, depending on
/// where the monotone re term sits relative to b.
fn tail_superlevel(t: &TailFamily, b: f64, idx: usize) -> PartExtent {
    let lim = t.re.limit();
    let dir = t.re.direction();
    let infinitely_many =
        lim > b || (lim == b && matches!(dir, Monotone::Decreasing | Monotone::Flat));

    if infinitely_many {
        if lim == f64::INFINITY {
            let escape = escape_points(t, |n| t.re.eval(n) >= b);
            return PartExtent::Unbounded {
                escape,
                why: format!("tails[{idx}]: Re lambda_n -> +inf on the superlevel set"),
            };
        }
        if t.im.abs_limit().is_infinite() {
            let escape = escape_points(t, |n| t.re.eval(n) >= b);
            return PartExtent::Unbounded {
                escape,
                why: format!(
                    "tails[{idx}]: infinitely many terms with Re >= {b} and |Im| -> inf"
                ),
            };
        }
        // both coordinates stay bounded on a cofinite qualifying set
        let r_re = t.re.eval(t.n0).abs().max(lim.abs());
        let r_im = t.im.abs_sup_from(t.n0);
        return PartExtent::Bounded {
            radius: Some(r_re.hypot(r_im)),
            note: String::new(),
        };
    }

    // finitely many qualifying indices; locate the crossing when the re term
    // decays through b
    match dir {
        Monotone::Decreasing if t.re.eval(t.n0) >= b => {
            let Some(end) = t.re.first_below(t.n0, b) else {
                // the crossing exists (the limit sits below b) but its index
                // is not representable; Re is trapped in [b, re(n0)] on the
                // qualifying block, so only the imaginary extent can escape
                let max_abs_re = t.re.eval(t.n0).abs().max(b.abs());
                let radius = max_abs_re.hypot(t.im.abs_sup_from(t.n0));
                return PartExtent::Bounded {
                    radius: radius.is_finite().then_some(radius),
                    note: if radius.is_finite() {
                        String::new()
                    } else {
                        format!(
                            "tails[{idx}]: qualifying block ends beyond the \
                             representable index range, no finite radius"
                        )
                    },
                };
            };
            if end <= t.n0 {
                return PartExtent::Empty;
            }
            let last = end - 1;
            let max_abs_re = t.re.eval(t.n0).abs().max(t.re.eval(last).abs());
            let max_abs_im = t.im.eval(t.n0).abs().max(t.im.eval(last).abs());
            let radius = max_abs_re.hypot(max_abs_im);
            PartExtent::Bounded {
                radius: radius.is_finite().then_some(radius),
                note: if radius.is_finite() {
                    String::new()
                } else {
                    format!("tails[{idx}]: finite qualifying block, radius exceeds f64")
                },
            }
        }
        _ => PartExtent::Empty,
    }
}

/// Three points of the family with growing modulus, restricted to indices
/// accepted by `qualifies`. Used as unboundedness witnesses.
fn escape_points(t: &TailFamily, qualifies: impl Fn(u64) -> bool) -> Vec<Complex64> {
    let mut out = Vec::new();
    let mut n = t.n0;
    let mut target = 1.0f64;
    let mut steps = 0u32;
    while out.len() < 3 && steps < 4096 {
        steps += 1;
        if qualifies(n) {
            let v = t.value_at(n);
            if v.is_finite() && v.norm() >= target {
                target = v.norm() * 4.0 + 1.0;
                out.push(v);
            }
        }
        n = n.saturating_add(1 + n / 2);
    }
    out
}

// ── tests ───────────────────────────────────────────────────────────────────
