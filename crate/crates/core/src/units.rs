//! Decibel conversions. Everything inside the crate runs in linear SI units;
//! these helpers are only used at the configuration and reporting boundary.

use crate::error::{Error, Result};

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidInput(format!("non-finite decibel value {x}")))
    }
}

/// `10^(x/10)`.
pub fn db_to_linear(x: f64) -> Result<f64> {
    Ok(10f64.powf(finite(x)? / 10.0))
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(x: f64) -> Result<f64> {
    Ok(db_to_linear(x)? * 1e-3)
}

/// Watts to dBm. Zero power maps to negative infinity.
pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w * 1e3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_hand_values() {
        assert_eq!(db_to_linear(0.0).unwrap(), 1.0);
        assert!((dbm_to_watts(20.0).unwrap() - 0.1).abs() < 1e-15);
        assert!((db_to_linear(-60.0).unwrap() - 1e-6).abs() < 1e-20);
        assert!((dbm_to_watts(-110.0).unwrap() - 1e-14).abs() < 1e-27);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(db_to_linear(f64::NAN).is_err());
        assert!(dbm_to_watts(f64::INFINITY).is_err());
    }

    #[test]
    fn zero_watts_is_minus_infinity_dbm() {
        assert_eq!(watts_to_dbm(0.0), f64::NEG_INFINITY);
    }

    proptest! {
        #[test]
        fn round_trip(exp in -20.0f64..20.0, mant in 1.0f64..10.0) {
            let x = mant * 10f64.powf(exp);
            let back = db_to_linear(linear_to_db(x)).unwrap();
            prop_assert!(((back - x) / x).abs() <= 1e-12);
        }
    }
}
