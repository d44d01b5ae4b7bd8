//! Central finite differences on uniform grids.
//!
//! Interior nodes use the fourth-order five-point stencils; the two
//! outermost layers fall back to second order and are excluded from every
//! residual norm in this crate (see [`BOUNDARY_LAYERS`]).

use num_complex::Complex64;

use super::grid::GridFunction;

/// Number of nodes at each end where the stencils lose fourth-order accuracy.
pub const BOUNDARY_LAYERS: usize = 2;

/// First derivative of uniformly spaced samples.
pub fn derivative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 3 {
        return out;
    }
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = if i >= 2 && i + 2 < n {
            (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) / (12.0 * h)
        } else {
            (values[i + 1] - values[i - 1]) / (2.0 * h)
        };
    }
    out
}

/// Second derivative of uniformly spaced samples.
pub fn second_derivative(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 4 {
        return out;
    }
    let h2 = h * h;
    out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h2;
    out[n - 1] = (2.0 * values[n - 1] - 5.0 * values[n - 2] + 4.0 * values[n - 3] - values[n - 4]) / h2;
    for i in 1..n - 1 {
        out[i] = if i >= 2 && i + 2 < n {
            (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i] + 16.0 * values[i + 1]
                - values[i + 2])
                / (12.0 * h2)
        } else {
            (values[i - 1] - 2.0 * values[i] + values[i + 1]) / h2
        };
    }
    out
}

pub fn grid_derivative(f: &GridFunction) -> GridFunction {
    let d = derivative(f.values(), f.grid().spacing());
    GridFunction::new(*f.grid(), d).expect("same length")
}

pub fn grid_second_derivative(f: &GridFunction) -> GridFunction {
    let d = second_derivative(f.values(), f.grid().spacing());
    GridFunction::new(*f.grid(), d).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grid;

    #[test]
    fn fourth_order_on_sine() {
        for &n in &[201usize, 401] {
            let g = Grid::new(0.0, 3.0, n).unwrap();
            let f = GridFunction::from_real_fn(g, f64::sin);
            let d = grid_derivative(&f);
            let d2 = grid_second_derivative(&f);
            let h = g.spacing();
            let mut e1: f64 = 0.0;
            let mut e2: f64 = 0.0;
            for i in 2..n - 2 {
                let x = g.point(i);
                e1 = e1.max((d.values()[i].re - x.cos()).abs());
                e2 = e2.max((d2.values()[i].re + x.sin()).abs());
            }
            assert!(e1 < h.powi(4), "first derivative error {e1}");
            assert!(e2 < h.powi(4), "second derivative error {e2}");
        }
    }
}
