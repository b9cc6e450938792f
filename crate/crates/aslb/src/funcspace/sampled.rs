//! Uniform-grid samples of a real function on an interval — the universal
//! graph representation shared by every downstream module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::families::{TakagiSpec, WeierstrassSpec};
use crate::funcspace::zigzag::{build_zigzag, PiecewiseLinearFunction, ZigzagSpec};

/// Pointwise evaluation of a real function, with an optional high-resolution
/// offset path for probing far below one ulp of the base coordinate.
pub trait PointEval: Sync {
    fn value(&self, t: f64) -> f64;

    /// Evaluate at `base + delta`. The default forms the sum; families with an
    /// exact modular-reduction path override this.
    fn value_at_offset(&self, base: f64, delta: f64) -> f64 {
        self.value(base + delta)
    }

    /// Smallest offset step around `base` that evaluation can resolve when the
    /// offsets of interest span `span`.
    fn offset_resolution(&self, base: f64, span: f64) -> f64 {
        let _ = span;
        4.0 * ulp(base)
    }
}

/// Distance from |x| to the next representable double.
pub fn ulp(x: f64) -> f64 {
    let ax = x.abs().max(f64::MIN_POSITIVE);
    let next = f64::from_bits(ax.to_bits() + 1);
    next - ax
}

impl PointEval for WeierstrassSpec {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }
}

impl PointEval for TakagiSpec {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }

    fn value_at_offset(&self, base: f64, delta: f64) -> f64 {
        self.eval_offset(base, delta)
    }

    fn offset_resolution(&self, base: f64, span: f64) -> f64 {
        if self.has_exact_offset_path() {
            (span.abs() * 2f64.powi(-50)).max(f64::MIN_POSITIVE)
        } else {
            4.0 * ulp(base)
        }
    }
}

impl PointEval for PiecewiseLinearFunction {
    fn value(&self, t: f64) -> f64 {
        self.eval(t)
    }
}

/// Closure adapter so tests and the CLI can sample ad-hoc functions.
pub struct FnEval<F: Fn(f64) -> f64 + Sync>(pub F);

impl<F: Fn(f64) -> f64 + Sync> PointEval for FnEval<F> {
    fn value(&self, t: f64) -> f64 {
        (self.0)(t)
    }
}

/// Closed-form generating families that can be reconstructed from metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySpec {
    Weierstrass(WeierstrassSpec),
    Takagi(TakagiSpec),
    Zigzag(ZigzagSpec),
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Weierstrass(w) => WeierstrassSpec::new(w.a, w.b, w.truncation_tol).map(|_| ()),
            FamilySpec::Takagi(t) => TakagiSpec::new(t.a, t.b, t.truncation_tol).map(|_| ()),
            FamilySpec::Zigzag(z) => ZigzagSpec::new(z.s, z.variant, z.m_max).map(|_| ()),
        }
    }

    pub fn evaluator(&self) -> Result<Box<dyn PointEval + Send>> {
        self.validate()?;
        Ok(match self {
            FamilySpec::Weierstrass(w) => Box::new(*w),
            FamilySpec::Takagi(t) => Box::new(*t),
            FamilySpec::Zigzag(z) => Box::new(build_zigzag(z)?),
        })
    }

    /// Hölder exponent α = -log_b(a) for the lacunary families.
    pub fn alpha(&self) -> Option<f64> {
        match self {
            FamilySpec::Weierstrass(w) => Some(w.alpha()),
            FamilySpec::Takagi(t) => Some(t.alpha()),
            FamilySpec::Zigzag(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FamilySpec::Weierstrass(w) => format!("weierstrass(a={:?},b={:?})", w.a, w.b),
            FamilySpec::Takagi(t) => format!("takagi(a={:?},b={:?})", t.a, t.b),
            FamilySpec::Zigzag(z) => format!(
                "zigzag(s={:?},{},m_max={})",
                z.s,
                match z.variant {
                    crate::funcspace::ZigzagVariant::Plain => "plain",
                    crate::funcspace::ZigzagVariant::LogCorrected => "log_corrected",
                },
                z.m_max
            ),
        }
    }
}

/// Provenance descriptor carried by every sampled function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionMeta {
    pub label: String,
    pub family: Option<FamilySpec>,
}

impl FunctionMeta {
    pub fn custom(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            family: None,
        }
    }
}

/// Uniform-grid samples: value i is taken at `t_i = domain_lo + i·step`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub domain_lo: f64,
    pub domain_hi: f64,
    pub step: f64,
    pub values: Vec<f64>,
    pub meta: FunctionMeta,
}

impl SampledFunction {
    pub fn new(domain_lo: f64, step: f64, values: Vec<f64>, meta: FunctionMeta) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid step {step} must be positive"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InvalidParameter(
                "a sampled function needs at least 2 values".into(),
            ));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite sample at index {bad}"
            )));
        }
        let domain_hi = domain_lo + (values.len() - 1) as f64 * step;
        if !(domain_lo < domain_hi) {
            return Err(Error::InvalidParameter("degenerate domain".into()));
        }
        Ok(Self {
            domain_lo,
            domain_hi,
            step,
            values,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid abscissa of sample `i`.
    pub fn t(&self, i: usize) -> f64 {
        self.domain_lo + i as f64 * self.step
    }

    /// Inclusive index range of grid points falling inside `[lo, hi]`, or
    /// `None` when no grid point does. Rounding drift from the division is
    /// repaired by local index walks so membership is decided by `t(i)` itself.
    pub fn index_range(&self, lo: f64, hi: f64) -> Option<(usize, usize)> {
        if !(lo <= hi) || hi < self.domain_lo || lo > self.domain_hi {
            return None;
        }
        let mut first = if lo <= self.domain_lo {
            0usize
        } else {
            ((lo - self.domain_lo) / self.step).ceil() as usize
        };
        while first > 0 && self.t(first - 1) >= lo {
            first -= 1;
        }
        while first < self.len() && self.t(first) < lo {
            first += 1;
        }
        if first >= self.len() {
            return None;
        }
        let mut last = if hi >= self.domain_hi {
            self.len() - 1
        } else {
            (((hi - self.domain_lo) / self.step).floor() as usize).min(self.len() - 1)
        };
        while last + 1 < self.len() && self.t(last + 1) <= hi {
            last += 1;
        }
        while self.t(last) > hi {
            if last == 0 {
                return None;
            }
            last -= 1;
        }
        if last < first {
            return None;
        }
        Some((first, last))
    }

    /// Reconstruct the generating evaluator from metadata, when present.
    pub fn evaluator(&self) -> Option<Box<dyn PointEval + Send>> {
        self.meta
            .family
            .as_ref()
            .and_then(|f| f.evaluator().ok())
    }

    pub fn value_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

/// Linear-interpolation evaluator over grid samples — the fallback when no
/// closed-form generator is recorded in the metadata.
pub struct GridEval<'a>(pub &'a SampledFunction);

impl PointEval for GridEval<'_> {
    fn value(&self, t: f64) -> f64 {
        let f = self.0;
        if t <= f.domain_lo {
            return f.values[0];
        }
        if t >= f.domain_hi {
            return f.values[f.len() - 1];
        }
        let x = (t - f.domain_lo) / f.step;
        let i = (x.floor() as usize).min(f.len() - 2);
        let frac = x - i as f64;
        f.values[i] + frac * (f.values[i + 1] - f.values[i])
    }

    fn offset_resolution(&self, _base: f64, _span: f64) -> f64 {
        self.0.step
    }
}

/// Sample a generator on a uniform `n_samples`-point grid over `[lo, hi]`.
pub fn sample_function(
    gen: &dyn PointEval,
    lo: f64,
    hi: f64,
    n_samples: usize,
    meta: FunctionMeta,
) -> Result<SampledFunction> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "domain [{lo}, {hi}] must be a nondegenerate finite interval"
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidParameter(format!(
            "n_samples = {n_samples} must be at least 2"
        )));
    }
    let step = (hi - lo) / (n_samples - 1) as f64;
    let values: Vec<f64> = (0..n_samples)
        .map(|i| gen.value(lo + i as f64 * step))
        .collect();
    SampledFunction::new(lo, step, values, meta)
}

/// Sample a closed-form family, recording it in the metadata so downstream
/// consumers can re-evaluate off-grid.
pub fn sample_family(spec: &FamilySpec, lo: f64, hi: f64, n_samples: usize) -> Result<SampledFunction> {
    let eval = spec.evaluator()?;
    sample_function(
        eval.as_ref(),
        lo,
        hi,
        n_samples,
        FunctionMeta {
            label: spec.label(),
            family: Some(spec.clone()),
        },
    )
}

/// Grid proxy for osc(f, J): max minus min over samples with t_i in the
/// interval. For an α-Hölder input this underestimates the true oscillation
/// by at most C·stepᵅ.
pub fn oscillation(f: &SampledFunction, interval: (f64, f64)) -> Result<f64> {
    let (lo, hi) = interval;
    let (first, last) = f
        .index_range(lo, hi)
        .ok_or(Error::EmptyInterval { lo, hi })?;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in &f.values[first..=last] {
        min = min.min(v);
        max = max.max(v);
    }
    Ok(max - min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(lo: f64, hi: f64, n: usize) -> SampledFunction {
        sample_function(&FnEval(|t| t), lo, hi, n, FunctionMeta::custom("identity")).unwrap()
    }

    #[test]
    fn identity_three_samples() {
        let f = identity(0.0, 1.0, 3);
        assert_eq!(f.values, vec![0.0, 0.5, 1.0]);
        assert_eq!(f.step, 0.5);
        assert_eq!(f.domain_hi, 1.0);
    }

    #[test]
    fn one_sample_is_an_error() {
        let r = sample_function(&FnEval(|t| t), 0.0, 1.0, 1, FunctionMeta::custom("x"));
        assert!(r.is_err());
    }

    #[test]
    fn grid_length_invariant() {
        // values.len() == floor((hi - lo)/step) + 1 for representative grids
        for n in [2usize, 3, 7, 100, 1001] {
            let f = identity(-0.3, 2.7, n);
            let implied = ((f.domain_hi - f.domain_lo) / f.step).floor() as usize + 1;
            assert!(implied == f.len() || implied + 1 == f.len(), "n = {n}");
        }
    }

    #[test]
    fn takagi_sup_on_dense_dyadic_grid() {
        // Classical Takagi (a = 1/2, b = 2) has sup = 2/3.
        let spec = FamilySpec::Takagi(TakagiSpec::new(0.5, 2.0, 1e-12).unwrap());
        let f = sample_family(&spec, 0.0, 1.0, (1 << 10) + 1).unwrap();
        let (_, max) = f.value_range();
        assert!(max <= 2.0 / 3.0 + 1e-9);
        assert!(max > 2.0 / 3.0 - 1e-3);
        assert!(f.values.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn oscillation_basics() {
        let f = identity(0.0, 1.0, 101);
        assert_eq!(oscillation(&f, (0.0, 1.0)).unwrap(), 1.0);
        let c = sample_function(
            &FnEval(|_| 5.0),
            0.0,
            1.0,
            11,
            FunctionMeta::custom("const"),
        )
        .unwrap();
        assert_eq!(oscillation(&c, (0.2, 0.9)).unwrap(), 0.0);
        assert!(matches!(
            oscillation(&f, (0.5001, 0.5049)),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn takagi_oscillation_full_interval() {
        let spec = FamilySpec::Takagi(TakagiSpec::new(0.5, 2.0, 1e-12).unwrap());
        let f = sample_family(&spec, 0.0, 1.0, (1 << 14) + 1).unwrap();
        let osc = oscillation(&f, (0.0, 1.0)).unwrap();
        assert!((osc - 2.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn oscillation_subadditive_under_graph_sums() {
        // osc(g+h, J) <= osc(g, J) + osc(h, J) on seeded random subintervals.
        let n = 2049;
        let g = sample_family(
            &FamilySpec::Takagi(TakagiSpec::new(0.5, 2.0, 1e-10).unwrap()),
            0.0,
            1.0,
            n,
        )
        .unwrap();
        let h = sample_function(
            &FnEval(|t: f64| (17.0 * t).sin()),
            0.0,
            1.0,
            n,
            FunctionMeta::custom("sin17"),
        )
        .unwrap();
        let mut sum = g.clone();
        for (v, w) in sum.values.iter_mut().zip(&h.values) {
            *v += w;
        }
        let mut state = 12345u64;
        let mut rng = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let a = rng();
            let b = a + rng() * (1.0 - a);
            if g.index_range(a, b).is_none() {
                continue;
            }
            let lhs = oscillation(&sum, (a, b)).unwrap();
            let rhs = oscillation(&g, (a, b)).unwrap() + oscillation(&h, (a, b)).unwrap();
            assert!(lhs <= rhs + 1e-12);
        }
    }

    #[test]
    fn index_range_edges() {
        let f = identity(0.0, 1.0, 11);
        assert_eq!(f.index_range(0.0, 1.0), Some((0, 10)));
        assert_eq!(f.index_range(0.05, 0.25), Some((1, 2)));
        assert_eq!(f.index_range(1.5, 2.0), None);
        // (0.301, 0.399) straddles no grid point of the 0.1-step grid.
        assert_eq!(f.index_range(0.301, 0.399), None);
    }
}
