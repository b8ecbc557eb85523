use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidConfig("quadrature order must be >= 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `int_0^1 f(t) dt` over `panels` equal panels.
    pub fn integrate_unit<F>(&self, panels: usize, mut f: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let h = 1.0 / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let a = p as f64 * h;
            let mut sum = Complex64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                sum += *w * f(a + 0.5 * h * (x + 1.0))?;
            }
            total += 0.5 * h * sum;
        }
        Ok(total)
    }

    /// Panel doubling until successive results differ by less than `tol`.
    pub fn integrate_adaptive<F>(&self, tol: f64, max_panels: usize, mut f: F) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let mut panels = 1;
        let mut prev = self.integrate_unit(panels, &mut f)?;
        while panels < max_panels {
            panels *= 2;
            let next = self.integrate_unit(panels, &mut f)?;
            if (next - prev).norm() < tol {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Quadrature(format!(
            "no agreement to {tol:e} with {max_panels} panels of order {}",
            self.order()
        )))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
