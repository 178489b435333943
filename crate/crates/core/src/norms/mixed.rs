use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::Grid1D;

/// Which variable the outer integral runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormOrder {
    /// `L^p_t L^q_x`: inner norm in space, outer in time.
    TimeOuter,
    /// `L^q_x L^p_t`: inner norm in time, outer in space.
    SpaceOuter,
}

/// Real samples `F(t_i, x_j)` on a uniform time lattice times a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    times: Vec<f64>,
    dt: f64,
    xgrid: Arc<Grid1D>,
    /// Row-major, one row per time sample.
    values: Vec<f64>,
}

impl SpaceTimeField {
    pub fn new(times: Vec<f64>, dt: f64, xgrid: Arc<Grid1D>, values: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(LabError::DimensionMismatch("empty time grid".into()));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(LabError::InvalidGrid(format!("time step must be positive, got {dt}")));
        }
        if values.len() != times.len() * xgrid.len() {
            return Err(LabError::DimensionMismatch(format!(
                "{} samples for a {}x{} space-time grid",
                values.len(),
                times.len(),
                xgrid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::NonFinite("space-time field"));
        }
        Ok(Self { times, dt, xgrid, values })
    }

    /// Samples `f(t, x)` on `times × xgrid`.
    pub fn from_fn(times: Vec<f64>, dt: f64, xgrid: Arc<Grid1D>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values =
            times.iter().flat_map(|&t| xgrid.points().iter().map(move |&x| (t, x))).map(|(t, x)| f(t, x)).collect();
        Self::new(times, dt, xgrid, values)
    }

    pub fn from_rows(times: Vec<f64>, dt: f64, xgrid: Arc<Grid1D>, rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(times, dt, xgrid, rows.into_iter().flatten().collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn xgrid(&self) -> &Arc<Grid1D> {
        &self.xgrid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn nt(&self) -> usize {
        self.times.len()
    }

    pub fn nx(&self) -> usize {
        self.xgrid.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let nx = self.nx();
        &self.values[i * nx..(i + 1) * nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.nx())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.nx() + j]
    }

    /// `x ↦ max_t |F(t, x)|`.
    pub fn sup_in_time(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.nx()];
        for row in self.rows() {
            for (o, v) in out.iter_mut().zip(row) {
                *o = o.max(v.abs());
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { values: self.values.iter().map(|&v| f(v)).collect(), ..self.clone() }
    }
}

/// Weighted `ℓ^p` of `|values|`; `p = ∞` is the maximum.
pub(crate) fn weighted_lp(values: impl Iterator<Item = f64>, weights: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        return values.fold(0.0, |m, v| m.max(v.abs()));
    }
    let pairs: Vec<(f64, f64)> = values.zip(weights).map(|(v, w)| (v.abs(), w)).collect();
    let peak = pairs.iter().fold(0.0f64, |m, (v, _)| m.max(*v));
    if peak == 0.0 {
        return 0.0;
    }
    let sum: f64 = pairs.iter().map(|(v, w)| w * (v / peak).powf(p)).sum();
    peak * sum.powf(1.0 / p)
}

pub(crate) fn check_exponent(name: &str, p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(LabError::InvalidExponent(format!("{name} = {p} must lie in [1, ∞]")));
    }
    Ok(())
}

/// Riemann-sum realization of the iterated norm.
///
/// `p` is always the time exponent and `q` the space exponent; `order`
/// decides which integral is outermost. Infinite exponents become maxima
/// over the samples.
pub fn mixed_norm(field: &SpaceTimeField, p: f64, q: f64, order: NormOrder) -> Result<f64> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let wx = field.xgrid.weights();
    let dt = field.dt;
    Ok(match order {
        NormOrder::TimeOuter => {
            let inner: Vec<f64> =
                field.rows().map(|row| weighted_lp(row.iter().copied(), wx.iter().copied(), q)).collect();
            weighted_lp(inner.into_iter(), std::iter::repeat(dt), p)
        }
        NormOrder::SpaceOuter => {
            let nx = field.nx();
            let inner: Vec<f64> = (0..nx)
                .map(|j| weighted_lp((0..field.nt()).map(|i| field.get(i, j)), std::iter::repeat(dt), p))
                .collect();
            weighted_lp(inner.into_iter(), wx.iter().copied(), q)
        }
    })
}

/// Norming weight for a discrete weighted `ℓ^r`: returns `v ≥ 0` with
/// `Σ w v |y| = ‖y‖_r` and `‖v‖_{r'} = 1`.
fn norming_weight(y: &[f64], w: &[f64], r: f64) -> Vec<f64> {
    let norm = weighted_lp(y.iter().copied(), w.iter().copied(), r);
    if norm == 0.0 {
        return vec![0.0; y.len()];
    }
    if r.is_infinite() {
        let (imax, _) =
            y.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
        let mut v = vec![0.0; y.len()];
        v[imax] = 1.0 / w[imax];
        return v;
    }
    if r == 1.0 {
        return y.iter().map(|v| if *v == 0.0 { 0.0 } else { 1.0 }).collect();
    }
    y.iter().map(|v| (v.abs() / norm).powf(r - 1.0)).collect()
}

/// The dual extremizer of `‖F‖_{L^p_t L^q_x}`: a nonnegative field `V` with
/// `∫∫ V |F| = ‖F‖_{L^p_t L^q_x}` and `‖V‖_{L^{p'}_t L^{q'}_x} = 1`.
pub fn norming_field(field: &SpaceTimeField, p: f64, q: f64) -> Result<SpaceTimeField> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    let wx = field.xgrid.weights();
    let inner: Vec<f64> = field.rows().map(|row| weighted_lp(row.iter().copied(), wx.iter().copied(), q)).collect();
    let outer = norming_weight(&inner, &vec![field.dt; inner.len()], p);
    let values = field
        .rows()
        .zip(&outer)
        .flat_map(|(row, &a)| norming_weight(row, wx, q).into_iter().map(move |v| a * v))
        .collect();
    SpaceTimeField::new(field.times.clone(), field.dt, field.xgrid.clone(), values)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::norms::conjugate;

    fn unit_times(n: usize) -> (Vec<f64>, f64) {
        let dt = 1.0 / n as f64;
        ((0..n).map(|i| i as f64 * dt).collect(), dt)
    }

    #[test]
    fn constant_field_l2() {
        let (times, dt) = unit_times(10);
        let f = SpaceTimeField::from_fn(times, dt, Arc::new(Grid1D::torus(16).unwrap()), |_, _| 3.0).unwrap();
        let n = mixed_norm(&f, 2.0, 2.0, NormOrder::TimeOuter).unwrap();
        assert!((n - 3.0 * (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((mixed_norm(&f, f64::INFINITY, f64::INFINITY, NormOrder::TimeOuter).unwrap() - 3.0).abs() < 1e-15);
        let n = mixed_norm(&f, f64::INFINITY, 2.0, NormOrder::TimeOuter).unwrap();
        assert!((n - 3.0 * (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn half_interval_indicator() {
        // hand integration: (∫_0^{1/2} (∫_T c² dx)^{2} dt)^{1/4} = c (1/2)^{1/4} (2π)^{1/2}
        let (times, dt) = unit_times(64);
        let c = 1.7;
        let f = SpaceTimeField::from_fn(
            times,
            dt,
            Arc::new(Grid1D::torus(16).unwrap()),
            |t, _| {
                if t < 0.5 {
                    c
                } else {
                    0.0
                }
            },
        )
        .unwrap();
        let n = mixed_norm(&f, 4.0, 2.0, NormOrder::TimeOuter).unwrap();
        assert!((n - c * 0.5f64.powf(0.25) * (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_exponents() {
        let (times, dt) = unit_times(2);
        let f = SpaceTimeField::from_fn(times, dt, Arc::new(Grid1D::torus(4).unwrap()), |_, _| 1.0).unwrap();
        assert!(mixed_norm(&f, 0.5, 2.0, NormOrder::TimeOuter).is_err());
    }

    #[test]
    fn norming_field_attains_the_norm() {
        let (times, dt) = unit_times(12);
        let grid = Arc::new(Grid1D::torus(20).unwrap());
        let f =
            SpaceTimeField::from_fn(times, dt, grid.clone(), |t, x| 1.0 + (3.0 * t).sin() * x.cos() + 0.5 * t).unwrap();
        for (p, q) in [(4.0, 2.0), (2.0, f64::INFINITY), (f64::INFINITY, 1.0), (3.0, 1.5), (1.0, 1.0)] {
            let v = norming_field(&f, p, q).unwrap();
            let pairing: f64 = v
                .rows()
                .zip(f.rows())
                .map(|(vr, fr)| {
                    vr.iter().zip(fr).zip(grid.weights()).map(|((a, b), w)| a * b.abs() * w).sum::<f64>() * dt
                })
                .sum();
            let norm = mixed_norm(&f, p, q, NormOrder::TimeOuter).unwrap();
            assert!((pairing - norm).abs() < 1e-10 * norm, "({p},{q}) {pairing} vs {norm}");
            let dual = mixed_norm(&v, conjugate(p), conjugate(q), NormOrder::TimeOuter).unwrap();
            assert!((dual - 1.0).abs() < 1e-10, "({p},{q}) dual norm {dual}");
        }
    }
}
