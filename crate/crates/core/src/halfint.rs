//! Exact half-integer angular momentum labels.
//!
//! Every label (j, m, L, M) is stored as twice its value so that the
//! triangle and parity rules can be checked with integer arithmetic.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn integer(n: i32) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Integer value, if the label is integral.
    pub fn as_integer(self) -> Option<i32> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// Dimension 2j+1 of the spin-j representation.
    pub fn dim(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// Projections j, j-1, ..., -j (descending, matching matrix row order).
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let tj = self.twice;
        (0..self.dim() as i32).map(move |k| HalfInt { twice: tj - 2 * k })
    }

    /// Row index of projection `m` in a spin-j matrix (index 0 is m = j).
    pub fn index_of(self, m: HalfInt) -> usize {
        ((self.twice - m.twice) / 2) as usize
    }

    /// Projection carried by row `index`.
    pub fn projection_at(self, index: usize) -> HalfInt {
        HalfInt { twice: self.twice - 2 * index as i32 }
    }
}

/// Check that (j, m) is a valid angular momentum pair.
pub fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice < 0 {
        return Err(Error::Label(format!("j = {j} is negative")));
    }
    if m.twice.abs() > j.twice {
        return Err(Error::Label(format!("|m| = |{m}| exceeds j = {j}")));
    }
    if (j.twice - m.twice) % 2 != 0 {
        return Err(Error::Label(format!("j - m = {j} - {m} is not an integer")));
    }
    Ok(())
}

/// Triangle rule |j1 - j2| <= j3 <= j1 + j2 with integral j1 + j2 + j3.
pub fn triangle(j1: HalfInt, j2: HalfInt, j3: HalfInt) -> bool {
    let (a, b, c) = (j1.twice, j2.twice, j3.twice);
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}
