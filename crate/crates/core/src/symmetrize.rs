//! Spherical rearrangement of weighted samples and the volume transfer `eta`.
//!
//! A function on a domain is represented by weighted samples `(value,
//! measure)`. Its decreasing (increasing) rearrangement is the radial
//! function on the model ball of equal volume that puts the largest
//! (smallest) values at the center. Sorting the samples and stacking their
//! measures as concentric shells realizes the rearrangement exactly, so all
//! `L^s` norms are preserved.

use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::math::{self, neumaier_sum};
use crate::spaceform::{ball_volume, radius_from_volume, shell_volume, sn, sphere_area, CumulativeInverter};

/// Finitely many `(value, measure)` pairs with positive measures.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSampleSet {
    values: Vec<f64>,
    measures: Vec<f64>,
    total: f64,
}

impl WeightedSampleSet {
    pub fn new<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let mut values = Vec::new();
        let mut measures = Vec::new();
        for (v, m) in pairs {
            if !v.is_finite() {
                return Err(domain("sample values must be finite"));
            }
            if !(m > 0.0 && m.is_finite()) {
                return Err(domain("sample measures must be positive"));
            }
            values.push(v);
            measures.push(m);
        }
        let total = neumaier_sum(measures.iter().copied());
        Ok(Self { values, measures, total })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().copied().zip(self.measures.iter().copied())
    }

    /// `mu_f(t)`: total measure of the samples with value `> t`.
    pub fn superlevel_measure(&self, t: f64) -> f64 {
        neumaier_sum(self.iter().filter(|&(v, _)| v > t).map(|(_, m)| m))
    }

    /// `(sum |v|^s m)^(1/s)`.
    pub fn ls_norm(&self, s: f64) -> Result<f64> {
        check_exponent(s)?;
        let sum = neumaier_sum(self.iter().map(|(v, m)| math::powf(v.abs(), s) * m));
        Ok(math::powf(sum, 1.0 / s))
    }

    /// `sum v m`.
    pub fn integral(&self) -> f64 {
        neumaier_sum(self.iter().map(|(v, m)| v * m))
    }
}

/// Free-function form of [`WeightedSampleSet::superlevel_measure`].
pub fn superlevel_measure(samples: &WeightedSampleSet, t: f64) -> f64 {
    samples.superlevel_measure(t)
}

fn check_exponent(s: f64) -> Result<()> {
    if s >= 1.0 && s.is_finite() {
        Ok(())
    } else {
        Err(domain("L^s norms need s >= 1"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    None,
    NonIncreasing,
    NonDecreasing,
}

/// Radial step function on the model ball `B(R*)` of `M_kappa^n`.
///
/// Shell `k` is `radii[k-1] < r <= radii[k]` (with `radii[-1] = 0`) and
/// carries `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    n: usize,
    kappa: f64,
    radii: Vec<f64>,
    values: Vec<f64>,
    monotonicity: Monotonicity,
}

impl RadialFunction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Outer radius of every shell.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    /// Radius `R*` of the supporting ball.
    pub fn outer_radius(&self) -> f64 {
        *self.radii.last().unwrap_or(&0.0)
    }

    /// Value at radius `r`; `None` outside the ball.
    pub fn eval(&self, r: f64) -> Option<f64> {
        if !(r >= 0.0) || r > self.outer_radius() {
            return None;
        }
        let k = self.radii.partition_point(|&rk| rk < r);
        self.values.get(k.min(self.values.len() - 1)).copied()
    }

    fn shell_measures(&self) -> Result<Vec<f64>> {
        let mut inner = 0.0;
        let mut out = Vec::with_capacity(self.radii.len());
        for &outer in &self.radii {
            out.push(shell_volume(self.n, self.kappa, inner, outer)?);
            inner = outer;
        }
        Ok(out)
    }

    /// `L^s` norm against the model volume `|S^{n-1}| sn_kappa^(n-1) dr`.
    pub fn ls_norm(&self, s: f64) -> Result<f64> {
        check_exponent(s)?;
        let shells = self.shell_measures()?;
        let sum = neumaier_sum(self.values.iter().zip(&shells).map(|(v, m)| math::powf(v.abs(), s) * m));
        Ok(math::powf(sum, 1.0 / s))
    }

    /// `int f dmu` over the ball.
    pub fn integral(&self) -> Result<f64> {
        let shells = self.shell_measures()?;
        Ok(neumaier_sum(self.values.iter().zip(&shells).map(|(v, m)| v * m)))
    }
}

fn rearrange(
    samples: &WeightedSampleSet,
    n: usize,
    kappa: f64,
    monotonicity: Monotonicity,
) -> Result<RadialFunction> {
    if samples.is_empty() {
        return Err(domain("cannot rearrange an empty sample set"));
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    // Stable sort: tied values keep their input order and fill adjacent shells.
    match monotonicity {
        Monotonicity::NonIncreasing => {
            order.sort_by(|&a, &b| samples.values[b].total_cmp(&samples.values[a]))
        }
        _ => order.sort_by(|&a, &b| samples.values[a].total_cmp(&samples.values[b])),
    }
    let mut inverter = CumulativeInverter::new(n, kappa)?;
    let mut radii = Vec::with_capacity(order.len());
    let mut values = Vec::with_capacity(order.len());
    let mut cumulative = 0.0;
    let mut comp = 0.0;
    for &i in &order {
        // Compensated running sum of the measures.
        let m = samples.measures[i];
        let t = cumulative + m;
        comp += if cumulative.abs() >= m { (cumulative - t) + m } else { (m - t) + cumulative };
        cumulative = t;
        radii.push(inverter.advance(cumulative + comp)?);
        values.push(samples.values[i]);
    }
    Ok(RadialFunction { n, kappa, radii, values, monotonicity })
}

/// Decreasing (Schwarz) rearrangement `f^*` on the model ball of equal volume.
pub fn rearrange_decreasing(samples: &WeightedSampleSet, n: usize, kappa: f64) -> Result<RadialFunction> {
    rearrange(samples, n, kappa, Monotonicity::NonIncreasing)
}

/// Increasing rearrangement `f_*`: smallest values at the center.
pub fn rearrange_increasing(samples: &WeightedSampleSet, n: usize, kappa: f64) -> Result<RadialFunction> {
    rearrange(samples, n, kappa, Monotonicity::NonDecreasing)
}

/// Largest violation of `f_*(s) >= f(s)` for a non-decreasing `f`.
///
/// `f_*` is constant on each shell and `f` is largest at the outer radius of
/// the shell, so checking the outer radii covers the whole ball. A value
/// `<= 0` means the domination holds everywhere.
pub fn increasing_dominance_gap<F: Fn(f64) -> f64>(rearranged: &RadialFunction, f: F) -> f64 {
    rearranged.radii.iter().zip(&rearranged.values).map(|(&r, &v)| f(r) - v).fold(f64::NEG_INFINITY, f64::max)
}

/// Largest violation of `f^*(s) <= f(s)` for a non-increasing `f`.
pub fn decreasing_dominance_gap<F: Fn(f64) -> f64>(rearranged: &RadialFunction, f: F) -> f64 {
    rearranged.radii.iter().zip(&rearranged.values).map(|(&r, &v)| v - f(r)).fold(f64::NEG_INFINITY, f64::max)
}

/// Volume transfer between model spaces: `|B(eta(r))|_target = |B(r)|_source`.
///
/// `source` is the curvature of the space the domain lives in and `target`
/// the comparison curvature, with `source <= target <= 0`, so that
/// `eta(r) >= r`.
#[derive(Debug, Clone)]
pub struct EtaTransfer {
    n: usize,
    source: f64,
    target: f64,
    cache: Option<EtaCache>,
}

#[derive(Debug, Clone)]
struct EtaCache {
    step: f64,
    eta: Vec<f64>,
    slope: Vec<f64>,
}

impl EtaTransfer {
    pub fn new(n: usize, source: f64, target: f64) -> Result<Self> {
        if n < 2 {
            return Err(domain("dimension must be at least 2"));
        }
        if !(source <= target && target <= 0.0) {
            return Err(domain(alloc::format!(
                "eta needs source <= target <= 0, got source={source}, target={target}"
            )));
        }
        Ok(Self { n, source, target, cache: None })
    }

    /// Tabulates `eta` and `eta'` on `nodes + 1` points of `[0, r_max]`;
    /// later evaluations inside that range use cubic Hermite interpolation.
    pub fn with_cache(mut self, r_max: f64, nodes: usize) -> Result<Self> {
        if self.is_identity() {
            return Ok(self);
        }
        if !(r_max > 0.0) || nodes < 2 {
            return Err(domain("eta cache needs r_max > 0 and at least two nodes"));
        }
        let step = r_max / nodes as f64;
        let mut inverter = CumulativeInverter::new(self.n, self.target)?;
        let mut eta = Vec::with_capacity(nodes + 1);
        let mut slope = Vec::with_capacity(nodes + 1);
        eta.push(0.0);
        slope.push(1.0);
        let mut volume = 0.0;
        for i in 1..=nodes {
            let (r0, r1) = (step * (i - 1) as f64, step * i as f64);
            volume += shell_volume(self.n, self.source, r0, r1)?;
            let e = inverter.advance(volume)?;
            eta.push(e);
            slope.push(sphere_area(self.n, self.source, r1) / sphere_area(self.n, self.target, e));
        }
        self.cache = Some(EtaCache { step, eta, slope });
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> f64 {
        self.source
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    /// `eta(r)`.
    pub fn eta(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(domain("eta needs r >= 0"));
        }
        if self.is_identity() || r == 0.0 {
            return Ok(r);
        }
        if let Some(c) = &self.cache {
            let last = c.eta.len() - 1;
            let x = r / c.step;
            if x <= last as f64 {
                let i = (math::floor(x) as usize).min(last - 1);
                let t = x - i as f64;
                let (y0, y1) = (c.eta[i], c.eta[i + 1]);
                let (d0, d1) = (c.slope[i], c.slope[i + 1]);
                let t2 = t * t;
                let t3 = t2 * t;
                return Ok((2.0 * t3 - 3.0 * t2 + 1.0) * y0
                    + (t3 - 2.0 * t2 + t) * c.step * d0
                    + (-2.0 * t3 + 3.0 * t2) * y1
                    + (t3 - t2) * c.step * d1);
            }
        }
        radius_from_volume(self.n, self.target, ball_volume(self.n, self.source, r)?)
    }

    /// `eta'(r) = |dB_r|_source / |dB_eta(r)|_target`.
    pub fn eta_derivative(&self, r: f64) -> Result<f64> {
        if self.is_identity() || r == 0.0 {
            return Ok(1.0);
        }
        let e = self.eta(r)?;
        Ok(sphere_area(self.n, self.source, r) / sphere_area(self.n, self.target, e))
    }

    /// `max(eta'(r), sn_target(eta(r)) / sn_target(r))`.
    pub fn distortion(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(1.0);
        }
        let e = self.eta(r)?;
        let d = self.eta_derivative(r)?;
        Ok(d.max(sn(self.target, e) / sn(self.target, r)))
    }
}

/// Free-function form of [`EtaTransfer::eta`].
pub fn eta_transfer(transfer: &EtaTransfer, r: f64) -> Result<f64> {
    transfer.eta(r)
}

/// Free-function form of [`EtaTransfer::eta_derivative`].
pub fn eta_derivative(transfer: &EtaTransfer, r: f64) -> Result<f64> {
    transfer.eta_derivative(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn two_valued() -> WeightedSampleSet {
        WeightedSampleSet::new([(2.0, PI / 2.0), (1.0, PI / 2.0)]).unwrap()
    }

    #[test]
    fn superlevel_examples() {
        let c = WeightedSampleSet::new([(5.0, 1.0), (5.0, 2.0)]).unwrap();
        assert_eq!(c.superlevel_measure(4.0), 3.0);
        assert_eq!(c.superlevel_measure(5.0), 0.0);
        let s = WeightedSampleSet::new([(1.0, 0.5), (2.0, 0.5)]).unwrap();
        assert_eq!(superlevel_measure(&s, 1.5), 0.5);
        assert_eq!(s.superlevel_measure(f64::NEG_INFINITY), s.total_measure());
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(WeightedSampleSet::new([(1.0, 0.0)]).is_err());
        assert!(WeightedSampleSet::new([(f64::NAN, 1.0)]).is_err());
        let empty = WeightedSampleSet::new([]).unwrap();
        assert!(rearrange_decreasing(&empty, 2, 0.0).is_err());
    }

    #[test]
    fn two_valued_rearrangements() {
        let s = two_valued();
        let dec = rearrange_decreasing(&s, 2, 0.0).unwrap();
        let inc = rearrange_increasing(&s, 2, 0.0).unwrap();
        let half = 0.5_f64.sqrt();
        assert!((dec.radii()[0] - half).abs() < 1e-12);
        assert!((dec.outer_radius() - 1.0).abs() < 1e-12);
        assert_eq!(dec.eval(0.5), Some(2.0));
        assert_eq!(dec.eval(0.9), Some(1.0));
        assert_eq!(inc.eval(0.5), Some(1.0));
        assert_eq!(inc.eval(0.9), Some(2.0));
        assert_eq!(inc.eval(1.0), Some(2.0));
        assert_eq!(dec.eval(0.0), Some(2.0));
        assert_eq!(dec.eval(1.5), None);
        for s_exp in [1.0, 2.0] {
            let a = s.ls_norm(s_exp).unwrap();
            assert!((dec.ls_norm(s_exp).unwrap() - a).abs() < 1e-12 * a);
            assert!((inc.ls_norm(s_exp).unwrap() - a).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn constant_function_is_fixed() {
        let s = WeightedSampleSet::new((0..10).map(|i| (3.0, 0.1 + i as f64 * 0.01))).unwrap();
        let dec = rearrange_decreasing(&s, 3, -1.0).unwrap();
        assert!(dec.values().iter().all(|&v| v == 3.0));
        assert_eq!(dec.monotonicity(), Monotonicity::NonIncreasing);
    }

    #[test]
    fn l1_norm_simple() {
        let s = WeightedSampleSet::new([(2.0, 3.0)]).unwrap();
        assert_eq!(s.ls_norm(1.0).unwrap(), 6.0);
        assert!(s.ls_norm(0.5).is_err());
    }

    #[test]
    fn eta_examples() {
        let id = EtaTransfer::new(2, -1.0, -1.0).unwrap();
        assert_eq!(id.eta(0.7).unwrap(), 0.7);
        assert_eq!(id.eta_derivative(0.7).unwrap(), 1.0);
        let t = EtaTransfer::new(2, -1.0, 0.0).unwrap();
        let e = t.eta(1.0).unwrap();
        assert!((e - 2.0 * 0.5_f64.sinh()).abs() < 1e-10);
        assert!((e - 1.042191).abs() < 1e-6);
        let d = t.eta_derivative(1.0).unwrap();
        assert!((d - 0.5_f64.cosh()).abs() < 1e-10);
        assert!((d - 1.127626).abs() < 1e-6);
        assert!(EtaTransfer::new(2, 0.0, -1.0).is_err());
    }

    #[test]
    fn eta_cache_matches_direct() {
        let direct = EtaTransfer::new(3, -1.0, -0.25).unwrap();
        let cached = direct.clone().with_cache(4.0, 2048).unwrap();
        for i in 1..50 {
            let r = 0.0813 * i as f64;
            let a = direct.eta(r).unwrap();
            let b = cached.eta(r).unwrap();
            assert!((a - b).abs() < 1e-10 * a, "r={r}: {a} vs {b}");
        }
        // Beyond the table the direct inversion takes over.
        assert!((cached.eta(5.0).unwrap() - direct.eta(5.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn dominance_gap_of_exact_shells() {
        let s = WeightedSampleSet::new([(1.0, 1.0), (2.0, 1.0)]).unwrap();
        let inc = rearrange_increasing(&s, 2, 0.0).unwrap();
        // f(r) = r^2 pi is below the shell values at the shell's outer radius.
        assert!(increasing_dominance_gap(&inc, |r| PI * r * r) <= 1e-12);
        assert!(increasing_dominance_gap(&inc, |r| 10.0 * r) > 0.0);
    }
}
