//! Benchmark helpers: fixed inputs for the series-convolution and
//! identity-verification benchmarks in `benches/engine.rs`.

use qmock_core::rational::{rat, ratio};
use qmock_core::series::SeriesAccumulator;
use qmock_core::QSeries;

/// A dense ζ-free series 1 + 2q + 3/2 q² + ... for convolution benchmarks.
pub fn dense_univariate(qmax: i64) -> QSeries {
    let mut acc = SeriesAccumulator::new(qmax);
    for k in 0..=qmax {
        acc.add_monomial(&ratio(k + 1, (k % 3) + 1), 0, k);
    }
    acc.finish()
}

/// A bivariate series with a band of ζ-exponents on every q-coefficient.
pub fn dense_bivariate(qmax: i64, zeta_width: i64) -> QSeries {
    let mut acc = SeriesAccumulator::new(qmax);
    for k in 0..=qmax {
        for a in -zeta_width..=zeta_width {
            acc.add_monomial(&rat(1 + ((k + a) % 5)), a, k);
        }
    }
    acc.finish()
}
