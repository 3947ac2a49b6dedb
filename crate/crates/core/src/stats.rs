//! Small order-fixed reductions shared by the ensemble code.

use libm::sqrt;

/// Sample moments of a slice, accumulated in index order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Population variance (divides by `count`).
    pub variance: f64,
    /// `m4/m2² - 3`; NaN when the variance vanishes.
    pub excess_kurtosis: f64,
}

impl Moments {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                count: 0,
                mean: f64::NAN,
                variance: f64::NAN,
                excess_kurtosis: f64::NAN,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in xs {
            let d = x - mean;
            let d2 = d * d;
            m2 += d2;
            m4 += d2 * d2;
        }
        m2 /= n as f64;
        m4 /= n as f64;
        Self {
            count: n,
            mean,
            variance: m2,
            excess_kurtosis: m4 / (m2 * m2) - 3.0,
        }
    }

    /// Unbiased sample standard deviation.
    pub fn sample_std(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        sqrt(self.variance * self.count as f64 / (self.count - 1) as f64)
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sample_std() / sqrt(self.count as f64)
    }

    /// Large-sample standard error of the excess kurtosis, `sqrt(24/n)`.
    pub fn kurtosis_std_error(&self) -> f64 {
        sqrt(24.0 / self.count as f64)
    }
}

/// Column-wise mean and standard error over equally long member series.
///
/// Members are reduced in slice order, so the result is bitwise reproducible
/// whatever produced the members.
pub fn column_mean_and_error<S: AsRef<[f64]>>(
    members: &[S],
) -> (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) {
    let n = members.len();
    let len = members.first().map_or(0, |m| m.as_ref().len());
    let mut mean = alloc::vec![0.0; len];
    let mut err = alloc::vec![0.0; len];
    if n == 0 {
        return (mean, err);
    }
    for m in members {
        let m = m.as_ref();
        assert_eq!(m.len(), len, "member series have different lengths");
        for (acc, &v) in mean.iter_mut().zip(m) {
            *acc += v;
        }
    }
    for v in &mut mean {
        *v /= n as f64;
    }
    if n > 1 {
        for m in members {
            for ((acc, &v), &mu) in err.iter_mut().zip(m.as_ref()).zip(&mean) {
                let d = v - mu;
                *acc += d * d;
            }
        }
        let denom = (n * (n - 1)) as f64;
        for e in &mut err {
            *e = sqrt(*e / denom);
        }
    }
    (mean, err)
}
