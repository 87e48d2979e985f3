//! Piecewise-polynomial interpolants on sorted knots.
//!
//! Every interpolant returns `(value, first derivative, second derivative)`
//! and extrapolates with the boundary polynomial outside its knot range.

use crate::error::{Error, Result};

fn check_knots(x: &[f64], lens: &[usize]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::DegenerateInput("need at least two knots".into()));
    }
    if lens.iter().any(|&l| l != x.len()) {
        return Err(Error::DegenerateInput(
            "knot and value arrays differ in length".into(),
        ));
    }
    if x.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateInput(
            "knots must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn locate(x: &[f64], t: f64) -> usize {
    match x.partition_point(|&k| k <= t) {
        0 => 0,
        i if i >= x.len() => x.len() - 2,
        i => i - 1,
    }
}

fn poly_eval(c: &[f64], t: f64, h: f64) -> (f64, f64, f64) {
    let mut v = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for (k, ck) in c.iter().enumerate().rev() {
        let kf = k as f64;
        v = v * t + ck;
        if k >= 1 {
            d1 = d1 * t + kf * ck;
        }
        if k >= 2 {
            d2 = d2 * t + kf * (kf - 1.0) * ck;
        }
    }
    (v, d1 / h, d2 / (h * h))
}

/// Natural cubic spline (zero second derivative at both ends).
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_knots(&x, &[y.len()])?;
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the interior second-derivative system.
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 0..k {
                let h0 = x[i + 1] - x[i];
                let h1 = x[i + 2] - x[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((y[i + 2] - y[i + 1]) / h1 - (y[i + 1] - y[i]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { x, y, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let v = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d1 = (self.y[i + 1] - self.y[i]) / h
            + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        let d2 = a * m0 + b * m1;
        (v, d1, d2)
    }
}

/// Piecewise cubic Hermite interpolant from values and slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicHermite {
    x: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
}

impl CubicHermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        check_knots(&x, &[y.len(), dy.len()])?;
        Ok(Self { x, y, dy })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn slopes(&self) -> &[f64] {
        &self.dy
    }

    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (d0, d1) = (h * self.dy[i], h * self.dy[i + 1]);
        let c = [
            y0,
            d0,
            -3.0 * y0 - 2.0 * d0 + 3.0 * y1 - d1,
            2.0 * y0 + d0 - 2.0 * y1 + d1,
        ];
        poly_eval(&c, s, h)
    }
}

/// Piecewise quintic Hermite interpolant from values, slopes and curvatures.
#[derive(Debug, Clone, PartialEq)]
pub struct QuinticHermite {
    x: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
    d2y: Vec<f64>,
}

const Q_BASIS: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
    [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
    [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
    [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
    [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
    [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
];

impl QuinticHermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, dy: Vec<f64>, d2y: Vec<f64>) -> Result<Self> {
        check_knots(&x, &[y.len(), dy.len(), d2y.len()])?;
        Ok(Self { x, y, dy, d2y })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let w = [
            self.y[i],
            h * self.dy[i],
            h * h * self.d2y[i],
            self.y[i + 1],
            h * self.dy[i + 1],
            h * h * self.d2y[i + 1],
        ];
        let mut c = [0.0; 6];
        for (wk, basis) in w.iter().zip(Q_BASIS.iter()) {
            for (ck, bk) in c.iter_mut().zip(basis) {
                *ck += wk * bk;
            }
        }
        poly_eval(&c, s, h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
    }

    #[test]
    fn natural_spline_reproduces_lines() {
        let x = grid(0.0, 3.0, 17);
        let y: Vec<f64> = x.iter().map(|t| 2.0 - 0.5 * t).collect();
        let s = CubicSpline::natural(x, y).unwrap();
        for t in [0.0, 0.31, 1.7, 2.99] {
            let (v, d1, d2) = s.eval(t);
            assert!((v - (2.0 - 0.5 * t)).abs() < 1e-14);
            assert!((d1 + 0.5).abs() < 1e-13);
            assert!(d2.abs() < 1e-12);
        }
    }

    #[test]
    fn spline_interior_accuracy() {
        let x = grid(0.0, 2.0, 200);
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::natural(x, y).unwrap();
        let (v, d1, _) = s.eval(1.003);
        assert!((v - 1.003f64.sin()).abs() < 1e-9);
        assert!((d1 - 1.003f64.cos()).abs() < 1e-6);
    }

    #[test]
    fn hermite_cubic_exact_for_cubics() {
        let f = |t: f64| t * t * t - 2.0 * t;
        let df = |t: f64| 3.0 * t * t - 2.0;
        let x = grid(-1.0, 1.0, 3);
        let h = CubicHermite::new(
            x.clone(),
            x.iter().map(|&t| f(t)).collect(),
            x.iter().map(|&t| df(t)).collect(),
        )
        .unwrap();
        let (v, d, dd) = h.eval(0.123);
        assert!((v - f(0.123)).abs() < 1e-14);
        assert!((d - df(0.123)).abs() < 1e-13);
        assert!((dd - 6.0 * 0.123).abs() < 1e-12);
    }

    #[test]
    fn quintic_exact_for_quintics() {
        let f = |t: f64| t.powi(5) - t * t + 1.0;
        let df = |t: f64| 5.0 * t.powi(4) - 2.0 * t;
        let d2f = |t: f64| 20.0 * t.powi(3) - 2.0;
        let x = grid(0.0, 2.0, 2);
        let q = QuinticHermite::new(
            x.clone(),
            x.iter().map(|&t| f(t)).collect(),
            x.iter().map(|&t| df(t)).collect(),
            x.iter().map(|&t| d2f(t)).collect(),
        )
        .unwrap();
        for t in [0.2, 0.77, 1.5] {
            let (v, d, dd) = q.eval(t);
            assert!((v - f(t)).abs() < 1e-13);
            assert!((d - df(t)).abs() < 1e-12);
            assert!((dd - d2f(t)).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(CubicSpline::natural(vec![0.0, 0.0, 1.0], vec![1.0; 3]).is_err());
    }
}
