use crate::error::{Error, Result};

/// Largest number of measurement times handled anywhere in the crate.
pub const MAX_TIMES: usize = 4;

/// Strictly increasing measurement times `t₁ < t₂ < …` (at most four).
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    times: Vec<f64>,
}

impl Schedule {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() > MAX_TIMES {
            return Err(Error::InvalidSchedule(format!(
                "need 1..={MAX_TIMES} times, got {}",
                times.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSchedule("non-finite time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSchedule(format!(
                "times not strictly increasing: {times:?}"
            )));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.times[k]
    }

    /// Sub-schedule keeping the listed (increasing) indices.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&k| self.times[k]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Schedule::new(vec![0.0, 1.0, 2.0]).is_ok());
        assert!(Schedule::new(vec![]).is_err());
        assert!(Schedule::new(vec![0.0, 0.0]).is_err());
        assert!(Schedule::new(vec![1.0, 0.5]).is_err());
        assert!(Schedule::new(vec![0.0, 1.0, 2.0, 3.0, 4.0]).is_err());
        assert!(Schedule::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn select_keeps_order() {
        let s = Schedule::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.select(&[0, 2]).unwrap().times(), &[0.0, 2.0]);
    }
}
