/// Streaming mean and co-moment accumulator for vector observations.
///
/// Partial accumulators combine with the pairwise update of Chan, Golub and
/// LeVeque, so merging substreams in a fixed order reproduces results
/// bit-for-bit regardless of how the work was scheduled.
#[derive(Debug, Clone)]
pub struct MomentAccumulator {
    pub count: u64,
    pub mean: Vec<f64>,
    /// Row-major `dim × dim` sums of centered products.
    pub comoment: Vec<f64>,
}

impl MomentAccumulator {
    pub fn new(dim: usize) -> Self {
        Self { count: 0, mean: vec![0.0; dim], comoment: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn push(&mut self, x: &[f64]) {
        let d = self.dim();
        self.count += 1;
        let n = self.count as f64;
        let delta: Vec<f64> = x.iter().zip(&self.mean).map(|(a, m)| a - m).collect();
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl / n;
        }
        for (i, (xi, mi)) in x.iter().zip(&self.mean).enumerate() {
            let post = xi - mi;
            for (c, dl) in self.comoment[i * d..(i + 1) * d].iter_mut().zip(&delta) {
                *c += dl * post;
            }
        }
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let d = self.dim();
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        for i in 0..d {
            for j in 0..d {
                self.comoment[i * d + j] += other.comoment[i * d + j] + delta[i] * delta[j] * na * nb / n;
            }
        }
        for (m, dl) in self.mean.iter_mut().zip(&delta) {
            *m += dl * nb / n;
        }
        self.count += other.count;
    }

    /// Sample covariance (denominator `count - 1`).
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        self.comoment[i * self.dim() + j] / (self.count as f64 - 1.0)
    }

    /// Mean and standard error of the linear combination `Σ s_i x_i`.
    pub fn combination(&self, s: &[f64]) -> (f64, f64) {
        let d = self.dim();
        let value: f64 = s.iter().zip(&self.mean).map(|(a, m)| a * m).sum();
        let mut var = 0.0;
        for i in 0..d {
            for j in 0..d {
                var += s[i] * s[j] * self.covariance(i, j);
            }
        }
        (value, (var.max(0.0) / self.count as f64).sqrt())
    }
}
