//! p-energy of the zigzag: Σ (a_m + a_{m+1})^q / (a_m − a_{m+1})^{q−1},
//! the discrete form of ∫|f'|^q. Finiteness decides Sobolev membership W^{1,q}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::zigzag::ZigzagSpec;
use crate::linreg::fit_line;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnergyReport {
    pub q: f64,
    pub m_max: u64,
    pub partial_sums: Vec<f64>,
    pub verdict: EnergyVerdict,
    /// Fitted tail exponent κ of the terms (t_m ~ m^{-κ}).
    pub kappa: f64,
    /// When κ ≈ 1: fitted log-power λ of m·t_m ~ log^λ m.
    pub lambda: Option<f64>,
    pub margin: f64,
}

/// Partial sums of the q-energy up to `m_max`, with a convergence verdict.
///
/// The verdict compares the fitted tail exponent κ against the m⁻¹ divergence
/// boundary with the given margin; near the boundary a second fit of
/// log(m·t_m) against log log m separates log-corrected convergent tails
/// (λ < −1) from genuinely divergent ones.
pub fn p_energy(spec: &ZigzagSpec, q: f64, m_max: u64, margin: f64) -> Result<EnergyReport> {
    if !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must be >= 1")));
    }
    ZigzagSpec::new(spec.s, spec.variant, spec.m_max)?;
    let m_min = spec.m_min();
    if m_max < m_min + 8 {
        return Err(Error::InvalidParameter(format!(
            "m_max = {m_max} leaves no tail to fit (need >= {})",
            m_min + 8
        )));
    }

    let term = |m: u64| -> f64 {
        let am = spec.amplitude(m);
        let am1 = spec.amplitude(m + 1);
        (am + am1).powf(q) / (am - am1).powf(q - 1.0)
    };

    let mut partial_sums = Vec::with_capacity((m_max - m_min + 1) as usize);
    let mut acc = 0.0;
    for m in m_min..=m_max {
        acc += term(m);
        partial_sums.push(acc);
    }

    // Fit the tail exponent over the top decade of m, on ~64 log-spaced points.
    let lo = (m_max / 10).max(m_min + 1);
    let points = 64usize;
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    let mut ys_log = Vec::with_capacity(points);
    for i in 0..points {
        let frac = i as f64 / (points - 1) as f64;
        let m = (lo as f64 * (m_max as f64 / lo as f64).powf(frac)).round() as u64;
        let m = m.clamp(lo, m_max);
        let t = term(m);
        if t <= 0.0 {
            continue;
        }
        xs.push((m as f64).ln());
        ys.push(-t.ln());
        ys_log.push(((m as f64) * t).ln());
    }
    let kappa_fit = fit_line(&xs, &ys);
    let kappa = kappa_fit.slope;

    let (verdict, lambda) = if kappa >= 1.0 + margin {
        (EnergyVerdict::Converging, None)
    } else if kappa <= 1.0 - margin {
        (EnergyVerdict::Diverging, None)
    } else {
        // Borderline: t_m ≈ c/m · log^λ m.
        let xs2: Vec<f64> = xs.iter().map(|lx| lx.ln()).collect();
        let lam = fit_line(&xs2, &ys_log).slope;
        if lam < -1.0 - margin {
            (EnergyVerdict::Converging, Some(lam))
        } else if lam > -1.0 + margin {
            (EnergyVerdict::Diverging, Some(lam))
        } else {
            (EnergyVerdict::Inconclusive, Some(lam))
        }
    };

    Ok(EnergyReport {
        q,
        m_max,
        partial_sums,
        verdict,
        kappa,
        lambda,
        margin,
    })
}
