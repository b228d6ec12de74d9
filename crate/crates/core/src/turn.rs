//! Exact rotation angles measured in full turns, reduced into `[0, 1)`.

use num_rational::Ratio;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A rational multiple of 2π, stored as a fraction of a full turn in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn(Ratio<i64>);

impl Turn {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Turn(Self::reduce(Ratio::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Turn(Ratio::from_integer(0))
    }

    fn reduce(r: Ratio<i64>) -> Ratio<i64> {
        let f = r - r.floor();
        if f < Ratio::from_integer(0) {
            f + 1
        } else {
            f
        }
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn times(self, k: i64) -> Self {
        Turn(Self::reduce(self.0 * k))
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::TAU * self.numer() as f64 / self.denom() as f64
    }

    /// Parses `"p/q"` or an integer.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().ok()?;
                let q: i64 = q.trim().parse().ok()?;
                (q != 0).then(|| Turn::new(p, q))
            }
            None => s.parse::<i64>().ok().map(|p| Turn::new(p, 1)),
        }
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        Turn(Self::reduce(self.0 + rhs.0))
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, rhs: Turn) -> Turn {
        Turn(Self::reduce(self.0 - rhs.0))
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn(Self::reduce(-self.0))
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}
