//! System-level acquisition metrics.

use crate::error::{Result, SpftiError};

/// Measurement undersampling ratio `m_xi * m_p / (n_xi * n_p)`.
pub fn mur(m_xi: usize, m_p: usize, n_xi: usize, n_p: usize) -> Result<f64> {
    if n_xi == 0 || n_p == 0 {
        return Err(SpftiError::Config("zero-sized acquisition domain".into()));
    }
    if m_xi == 0 || m_p == 0 || m_xi > n_xi || m_p > n_p {
        return Err(SpftiError::Config(format!(
            "measurement counts ({m_xi}, {m_p}) out of range for ({n_xi}, {n_p})"
        )));
    }
    Ok((m_xi as f64 * m_p as f64) / (n_xi as f64 * n_p as f64))
}

/// Exposure reduction ratio `0.5 * (1 + 1/m_p) * m_xi / n_xi`: the light
/// dose relative to a Nyquist acquisition of equal duration.
pub fn err(m_xi: usize, m_p: usize, n_xi: usize) -> Result<f64> {
    if m_p == 0 {
        return Err(SpftiError::Config("err undefined for zero patterns".into()));
    }
    if m_xi == 0 || m_xi > n_xi {
        return Err(SpftiError::Config(format!(
            "spectral count {m_xi} out of range for {n_xi}"
        )));
    }
    Ok(0.5 * (1.0 + 1.0 / m_p as f64) * m_xi as f64 / n_xi as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_operating_point_rounds_to_011() {
        let mur = mur(112, 8218, 512, 16384).unwrap();
        assert!((mur - 920_416.0 / 8_388_608.0).abs() < 1e-15);
        assert_eq!(format!("{:.2}", mur), "0.11");

        let err = err(112, 8218, 512).unwrap();
        assert!((err - 0.5 * (1.0 + 1.0 / 8218.0) * 112.0 / 512.0).abs() < 1e-15);
        assert_eq!(format!("{:.2}", err), "0.11");
    }

    #[test]
    fn full_sampling_is_unity() {
        assert_eq!(mur(16, 64, 16, 64).unwrap(), 1.0);
        // A single pattern costs as much light as Nyquist sensing.
        assert_eq!(err(512, 1, 512).unwrap(), 1.0);
    }

    #[test]
    fn direct_arithmetic() {
        assert_eq!(mur(1, 1, 2, 2).unwrap(), 0.25);
        // Many patterns approach the halved-exposure limit.
        assert!((err(512, 1_000_000, 512).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(mur(0, 1, 2, 2).is_err());
        assert!(mur(3, 1, 2, 2).is_err());
        assert!(err(1, 0, 2).is_err());
        assert!(err(3, 1, 2).is_err());
    }
}
