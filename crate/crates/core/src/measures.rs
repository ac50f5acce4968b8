//! Negativity, the CCNR score, state classification, and the scan for
//! distillability sudden death in a time series of scores.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quantum::{realign, DensityMatrix};

/// Default threshold separating numerical zero from a positive score.
pub const CLASSIFICATION_TOL: f64 = 1e-9;

/// `(‖ρ^{T_B}‖₁ − 1) / 2`, clamped at zero.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = rho.partial_transpose(1)?;
    Ok(((pt.trace_norm()? - 1.0) / 2.0).max(0.0))
}

/// `‖R(ρ − ρ_A ⊗ ρ_B)‖₁ − √((1 − Tr ρ_A²)(1 − Tr ρ_B²))`.
///
/// Positive values certify entanglement; non-positive values are inconclusive.
pub fn ccnr_score(rho: &DensityMatrix) -> Result<f64> {
    let (ra, rb) = rho.reduced_pair()?;
    let corr = rho.matrix() - &ra.matrix().kron(rb.matrix());
    let dims = (ra.dim(), rb.dim());
    let bound = ((1.0 - ra.purity()) * (1.0 - rb.purity())).max(0.0).sqrt();
    Ok(realign(&corr, dims)?.trace_norm()? - bound)
}

/// Plain realignment criterion `‖R(ρ)‖₁ − 1`.
pub fn realignment_score(rho: &DensityMatrix) -> Result<f64> {
    let [da, db] = rho.dims() else {
        return Err(domain(format!("expected a bipartite state, got dims {:?}", rho.dims())));
    };
    Ok(realign(rho.matrix(), (*da, *db))?.trace_norm()? - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementScores {
    /// Negativity.
    pub n1: f64,
    /// CCNR score; may be negative.
    pub n2: f64,
}

impl EntanglementScores {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(Self { n1: negativity(rho)?, n2: ccnr_score(rho)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    FreeEntangled,
    BoundEntangled,
    Undetected,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::FreeEntangled => "free_entangled",
            Classification::BoundEntangled => "bound_entangled",
            Classification::Undetected => "undetected",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        [Classification::FreeEntangled, Classification::BoundEntangled, Classification::Undetected]
            .into_iter()
            .find(|c| c.label() == s)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify(scores: &EntanglementScores) -> Classification {
    classify_with(scores, CLASSIFICATION_TOL)
}

pub fn classify_with(scores: &EntanglementScores, tau: f64) -> Classification {
    if scores.n1 > tau {
        Classification::FreeEntangled
    } else if scores.n2 > tau {
        Classification::BoundEntangled
    } else {
        Classification::Undetected
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DsdEvent {
    /// Negativity reaches zero while the CCNR score still certifies entanglement.
    FreeToBound { t: f64, n2: f64 },
    /// Neither score is above threshold on `[start, end]`.
    DetectionGap { start: f64, end: f64 },
}

impl DsdEvent {
    pub fn time(&self) -> f64 {
        match *self {
            DsdEvent::FreeToBound { t, .. } => t,
            DsdEvent::DetectionGap { start, .. } => start,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DsdOptions {
    pub tau: f64,
    /// Largest apex value for a V-shaped minimum of `n1` to count as a
    /// touch of zero. `None` uses `max(tau, 1e-3 · max n1)`.
    pub touch_tolerance: Option<f64>,
}

impl Default for DsdOptions {
    fn default() -> Self {
        Self { tau: CLASSIFICATION_TOL, touch_tolerance: None }
    }
}

fn lerp(t0: f64, t1: f64, y0: f64, y1: f64, t: f64) -> f64 {
    if t1 == t0 {
        return y0;
    }
    y0 + (y1 - y0) * (t - t0) / (t1 - t0)
}

/// Time in `[t0, t1]` where the line through `(t0, y0)` and `(t1, y1)` hits `level`.
fn crossing(t0: f64, t1: f64, y0: f64, y1: f64, level: f64) -> f64 {
    if y1 == y0 {
        return t1;
    }
    t0 + (t1 - t0) * (y0 - level) / (y0 - y1)
}

/// Locate DSD events and CCNR detection gaps in a sampled score series.
///
/// `n1` can vanish at an isolated instant between two grid points without any
/// sample reaching zero; such V-shaped minima are found by intersecting the
/// secants on either side.
pub fn scan_dsd(series: &[(f64, EntanglementScores)], opts: &DsdOptions) -> Result<Vec<DsdEvent>> {
    if series.len() < 2 {
        return Err(domain("a DSD scan needs at least two samples"));
    }
    if series.iter().any(|(t, s)| !t.is_finite() || !s.n1.is_finite() || !s.n2.is_finite()) {
        return Err(domain("series contains non-finite values"));
    }
    for w in series.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(domain(format!("series is not strictly increasing in t at t = {}", w[1].0)));
        }
    }

    let tau = opts.tau;
    let t: Vec<f64> = series.iter().map(|s| s.0).collect();
    let n1: Vec<f64> = series.iter().map(|s| s.1.n1).collect();
    let n2: Vec<f64> = series.iter().map(|s| s.1.n2).collect();
    let n2_at = |x: f64| -> f64 {
        let k = t.partition_point(|&ti| ti <= x).clamp(1, t.len() - 1);
        lerp(t[k - 1], t[k], n2[k - 1], n2[k], x)
    };

    let mut events = Vec::new();

    for i in 1..t.len() {
        if n1[i - 1] > tau && n1[i] <= tau {
            let at = crossing(t[i - 1], t[i], n1[i - 1], n1[i], tau);
            let n2v = n2_at(at);
            if n2v > tau {
                events.push(DsdEvent::FreeToBound { t: at, n2: n2v });
            }
        }
    }

    let max_n1 = n1.iter().copied().fold(0.0, f64::max);
    let touch_tol = opts.touch_tolerance.unwrap_or((1e-3 * max_n1).max(tau));
    for i in 2..t.len().saturating_sub(2) {
        let is_min = n1[i] <= n1[i - 1] && n1[i] < n1[i + 1];
        if !is_min || n1[i] <= tau || n1[i - 1] <= tau || n1[i + 1] <= tau {
            continue;
        }
        let left = (n1[i - 1] - n1[i - 2]) / (t[i - 1] - t[i - 2]);
        let right = (n1[i + 2] - n1[i + 1]) / (t[i + 2] - t[i + 1]);
        if !(left < 0.0 && right > 0.0) {
            continue;
        }
        let at = (n1[i + 1] - n1[i - 1] + left * t[i - 1] - right * t[i + 1]) / (left - right);
        if !(t[i - 1]..=t[i + 1]).contains(&at) {
            continue;
        }
        let apex = n1[i - 1] + left * (at - t[i - 1]);
        let n2v = n2_at(at);
        if apex <= touch_tol && n2v > tau {
            events.push(DsdEvent::FreeToBound { t: at, n2: n2v });
        }
    }

    let gap_level = |k: usize| n1[k].max(n2[k]) - tau;
    let mut open: Option<f64> = None;
    for k in 0..t.len() {
        let g = gap_level(k);
        match (open, g <= 0.0) {
            (None, true) => {
                let start = if k == 0 { t[0] } else { crossing(t[k - 1], t[k], gap_level(k - 1), g, 0.0) };
                open = Some(start);
            }
            (Some(start), false) => {
                let end = crossing(t[k - 1], t[k], gap_level(k - 1), g, 0.0);
                events.push(DsdEvent::DetectionGap { start, end });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        events.push(DsdEvent::DetectionGap { start, end: t[t.len() - 1] });
    }

    events.sort_by(|a, b| a.time().total_cmp(&b.time()));
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::states::{jurkowski_state, JurkowskiParams};
    use num_complex::Complex64;

    fn s(n1: f64, n2: f64) -> EntanglementScores {
        EntanglementScores { n1, n2 }
    }

    fn entangled_pair() -> DensityMatrix {
        let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let psi = [a, zero, zero, zero, a, zero, zero, zero, a];
        DensityMatrix::pure(&psi, vec![3, 3]).unwrap()
    }

    #[test]
    fn negativity_values() {
        let mixed = DensityMatrix::maximally_mixed(vec![3, 3]).unwrap();
        assert!(negativity(&mixed).unwrap().abs() < 1e-12);
        assert!((negativity(&entangled_pair()).unwrap() - 1.0).abs() < 1e-9);
        let rho = jurkowski_state(&JurkowskiParams::new(1.0, 1.0, 0.3).unwrap());
        assert!(negativity(&rho).unwrap().abs() < 1e-10);
    }

    #[test]
    fn ccnr_of_maximally_mixed_product() {
        let mixed = DensityMatrix::maximally_mixed(vec![3, 3]).unwrap();
        assert!((ccnr_score(&mixed).unwrap() + 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ccnr_of_family() {
        let sep = jurkowski_state(&JurkowskiParams::new(1.0, 1.0, 1.0).unwrap());
        assert!(ccnr_score(&sep).unwrap().abs() < 1e-10);
        let bound = jurkowski_state(&JurkowskiParams::new(1.0, 1.0, 0.1).unwrap());
        assert!(ccnr_score(&bound).unwrap() > 0.05);
    }

    #[test]
    fn realignment_score_of_entangled_pair() {
        // ‖R(|Φ⟩⟨Φ|)‖₁ = d for the maximally entangled state.
        assert!((realignment_score(&entangled_pair()).unwrap() - 2.0).abs() < 1e-9);
        let bad = DensityMatrix::new(ComplexMatrix::identity(27).scale_real(1.0 / 27.0), vec![3, 3, 3]).unwrap();
        assert!(realignment_score(&bad).is_err());
        assert!(negativity(&bad).is_err());
    }

    #[test]
    fn classification_rules() {
        assert_eq!(classify(&s(0.2, -0.1)), Classification::FreeEntangled);
        assert_eq!(classify(&s(0.0, 0.05)), Classification::BoundEntangled);
        assert_eq!(classify(&s(0.0, -0.02)), Classification::Undetected);
        assert_eq!(classify(&s(1e-10, 1e-10)), Classification::Undetected);
        for c in [Classification::FreeEntangled, Classification::BoundEntangled, Classification::Undetected] {
            assert_eq!(Classification::from_label(c.label()), Some(c));
        }
    }

    #[test]
    fn constant_series_has_no_events() {
        let series: Vec<_> = (0..50).map(|k| (k as f64 * 0.1, s(0.1, 0.05))).collect();
        assert!(scan_dsd(&series, &DsdOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn scan_rejects_bad_series() {
        let opts = DsdOptions::default();
        assert!(scan_dsd(&[(0.0, s(0.1, 0.1))], &opts).is_err());
        assert!(scan_dsd(&[(1.0, s(0.1, 0.1)), (0.5, s(0.1, 0.1))], &opts).is_err());
        assert!(scan_dsd(&[(0.0, s(0.1, 0.1)), (0.0, s(0.1, 0.1))], &opts).is_err());
    }

    #[test]
    fn detection_gap_spans_the_dip() {
        let tau = CLASSIFICATION_TOL;
        // n1 = 0 throughout; n2 drops to exactly tau at t = 2 and is back at tau at t = 4.
        let n2 = [0.1, 0.05, tau, -0.02, tau, 0.05, 0.1];
        let series: Vec<_> = n2.iter().enumerate().map(|(k, &v)| (k as f64, s(0.0, v))).collect();
        let events = scan_dsd(&series, &DsdOptions::default()).unwrap();
        assert_eq!(events, vec![DsdEvent::DetectionGap { start: 2.0, end: 4.0 }]);
    }

    #[test]
    fn threshold_crossing_is_interpolated() {
        let series = vec![(0.0, s(0.2, 0.1)), (1.0, s(0.1, 0.1)), (2.0, s(0.0, 0.1)), (3.0, s(0.0, 0.1))];
        let events = scan_dsd(&series, &DsdOptions::default()).unwrap();
        assert_eq!(events.len(), 1);
        let DsdEvent::FreeToBound { t, n2 } = events[0] else { panic!("{events:?}") };
        assert!((t - 2.0).abs() < 1e-6);
        assert!((n2 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn v_shaped_touch_between_samples() {
        // n1 = |t − 1.234| sampled on a 0.1 grid never reaches zero.
        let series: Vec<_> = (0..30)
            .map(|k| {
                let t = k as f64 * 0.1;
                (t, s((t - 1.234).abs(), 0.08))
            })
            .collect();
        let events = scan_dsd(&series, &DsdOptions::default()).unwrap();
        assert_eq!(events.len(), 1);
        assert!((events[0].time() - 1.234).abs() < 1e-9);
    }

    #[test]
    fn smooth_minimum_is_not_a_touch() {
        let series: Vec<_> = (0..30)
            .map(|k| {
                let t = k as f64 * 0.1;
                (t, s(0.05 + (t - 1.5).powi(2), 0.08))
            })
            .collect();
        assert!(scan_dsd(&series, &DsdOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn touch_without_ccnr_support_is_not_dsd() {
        let series: Vec<_> = (0..30)
            .map(|k| {
                let t = k as f64 * 0.1;
                (t, s((t - 1.234).abs(), -0.1))
            })
            .collect();
        assert!(scan_dsd(&series, &DsdOptions::default()).unwrap().is_empty());
    }
}
