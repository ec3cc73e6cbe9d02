use crate::error::{Error, Result};

/// Timestep grid `0 = t_0 < t_1 < … < t_N = 1`.
///
/// Samplers walk it from `t_N` down to `t_0` and only evaluate velocities at
/// `t_N … t_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    knots: Vec<f64>,
}

impl Schedule {
    pub fn uniform(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Schedule("need at least one step".into()));
        }
        let knots = (0..=steps).map(|i| i as f64 / steps as f64).collect();
        Ok(Schedule { knots })
    }

    pub fn from_knots(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Schedule("need at least two knots".into()));
        }
        if knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
            return Err(Error::Schedule("knots must start at 0 and end at 1".into()));
        }
        if let Some(w) = knots
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(Error::Schedule(format!(
                "knots must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Schedule { knots })
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn t(&self, i: usize) -> f64 {
        self.knots[i]
    }

    /// `(i, t_i, t_{i-1})` for `i = N, N−1, …, 1`.
    pub fn descending(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (1..=self.steps()).rev().map(|i| (i, self.knots[i], self.knots[i - 1]))
    }
}
