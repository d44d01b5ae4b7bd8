//! Streaming log-sum-exp with Kahan-compensated accumulation.

/// Accumulates `Σ wₖ e^{eₖ}` as `e^{max}·sum` so that large exponents never overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSum {
    max: f64,
    sum: f64,
    comp: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            comp: 0.0,
        }
    }

    /// Adds `e^{exponent}`.
    pub fn add(&mut self, exponent: f64) {
        self.add_weighted(1.0, exponent);
    }

    /// Adds `weight·e^{exponent}`.
    pub fn add_weighted(&mut self, weight: f64, exponent: f64) {
        if exponent > self.max {
            self.rescale(exponent);
        }
        self.kahan(weight * (exponent - self.max).exp());
    }

    /// Shifts the reference exponent up to `max`.
    pub fn rescale(&mut self, max: f64) {
        if max <= self.max {
            return;
        }
        let s = if self.max == f64::NEG_INFINITY {
            0.0
        } else {
            (self.max - max).exp()
        };
        self.sum *= s;
        self.comp *= s;
        self.max = max;
    }

    fn kahan(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    /// Adds another accumulator's total.
    pub fn merge(&mut self, other: &LogSum) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        self.rescale(other.max);
        let s = (other.max - self.max).exp();
        self.kahan(other.sum * s);
        self.kahan(-other.comp * s);
    }

    pub fn max_exponent(&self) -> f64 {
        self.max
    }

    /// The sum divided by `e^{max}`.
    pub fn mantissa(&self) -> f64 {
        self.sum - self.comp
    }

    /// Natural log of the (positive) total.
    pub fn ln(&self) -> f64 {
        self.max + self.mantissa().ln()
    }

    pub fn value(&self) -> f64 {
        self.mantissa() * self.max.exp()
    }
}
