#![allow(dead_code)]

use netsense_core::sim::PureState;
use netsense_core::NetworkConfig;
use num_complex::Complex64;
use proptest::prelude::*;

/// Weights in `[−1, 1]` rescaled so that `max|αᵢ| = 1`.
pub fn alpha(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
        .prop_filter("nonzero weights", |a| a.iter().any(|x| x.abs() > 1e-3))
        .prop_map(|a| {
            let m = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            a.iter().map(|x| x / m).collect()
        })
}

pub fn config(n: std::ops::RangeInclusive<usize>, theta_scale: f64) -> impl Strategy<Value = NetworkConfig> {
    n.prop_flat_map(move |n| {
        (
            alpha(n),
            prop::collection::vec(-theta_scale..=theta_scale, n),
            0.2f64..2.5,
        )
    })
    .prop_map(|(a, th, t)| NetworkConfig::new(a, th, t).unwrap())
}

pub fn state(n: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero state", |v| v.iter().any(|(r, i)| r.abs() + i.abs() > 1e-2))
        .prop_map(move |v| {
            let amps = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
            PureState::normalized(n, amps).unwrap()
        })
}
