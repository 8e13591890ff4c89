use serde::{Deserialize, Serialize};

/// Exponential moving average; the first observation initializes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmaTracker {
    pub value: f64,
    pub momentum: f64,
    pub initialized: bool,
}

impl EmaTracker {
    pub fn new(momentum: f64) -> Self {
        Self {
            value: 0.0,
            momentum,
            initialized: false,
        }
    }

    pub fn update(&mut self, value: f64) -> f64 {
        if self.initialized {
            self.value = self.momentum * self.value + (1.0 - self.momentum) * value;
        } else {
            self.value = value;
            self.initialized = true;
        }
        self.value
    }

    pub fn get(&self) -> Option<f64> {
        self.initialized.then_some(self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_momentum_tracks_last_value() {
        let mut e = EmaTracker::new(0.0);
        for v in [3.0, -1.0, 7.5] {
            e.update(v);
        }
        assert_eq!(e.get(), Some(7.5));
    }

    #[test]
    fn one_step_from_ten() {
        let mut e = EmaTracker::new(0.999);
        e.update(10.0);
        e.update(0.0);
        assert!((e.value - 9.99).abs() < 1e-12);
    }

    #[test]
    fn constant_stream_approaches_monotonically() {
        let mut e = EmaTracker::new(0.9);
        e.update(5.0);
        let mut prev = (e.value - 1.0).abs();
        for _ in 0..200 {
            e.update(1.0);
            let gap = (e.value - 1.0).abs();
            assert!(gap <= prev);
            prev = gap;
        }
        assert!(prev < 1e-8);
    }

    proptest! {
        #[test]
        fn stays_within_history_range(
            momentum in 0.0f64..0.9999,
            values in prop::collection::vec(-1e3f64..1e3, 1..200),
        ) {
            let mut e = EmaTracker::new(momentum);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in values {
                lo = lo.min(v);
                hi = hi.max(v);
                let x = e.update(v);
                prop_assert!(x >= lo - 1e-9 * lo.abs().max(1.0));
                prop_assert!(x <= hi + 1e-9 * hi.abs().max(1.0));
            }
        }
    }
}
