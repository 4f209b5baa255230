//! Exact arithmetic on Laurent polynomials in `π` with rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use rigid_core::centers::Scalar;

pub type Q = Ratio<i128>;

const LO: i32 = -6;
const LEN: usize = 13;

/// `Σ c_k π^k` for `k` in `-6..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PiLaurent([Q; LEN]);

impl PiLaurent {
    pub fn rational(q: Q) -> Self {
        let mut c = [Q::from_integer(0); LEN];
        c[(-LO) as usize] = q;
        PiLaurent(c)
    }

    pub fn coeff(&self, k: i32) -> Q {
        self.0[(k - LO) as usize]
    }

    pub fn is_rational(&self) -> bool {
        self.0.iter().enumerate().all(|(i, c)| i == (-LO) as usize || *c == Q::from_integer(0))
    }
}

impl Add for PiLaurent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PiLaurent(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for PiLaurent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        PiLaurent(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for PiLaurent {
    type Output = Self;
    fn neg(self) -> Self {
        PiLaurent(self.0.map(|c| -c))
    }
}

impl Mul for PiLaurent {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut c = [Q::from_integer(0); LEN];
        for i in 0..LEN {
            if self.0[i] == Q::from_integer(0) {
                continue;
            }
            for j in 0..LEN {
                if o.0[j] == Q::from_integer(0) {
                    continue;
                }
                let k = i as i32 + j as i32 + 2 * LO;
                let idx = (k - LO) as usize;
                assert!(idx < LEN, "power of π out of range");
                c[idx] += self.0[i] * o.0[j];
            }
        }
        PiLaurent(c)
    }
}

impl Scalar for PiLaurent {
    fn from_int(n: i64) -> Self {
        PiLaurent::rational(Q::from_integer(n as i128))
    }
    fn pi() -> Self {
        let mut c = [Q::from_integer(0); LEN];
        c[(1 - LO) as usize] = Q::from_integer(1);
        PiLaurent(c)
    }
    fn inv_pi() -> Self {
        let mut c = [Q::from_integer(0); LEN];
        c[(-1 - LO) as usize] = Q::from_integer(1);
        PiLaurent(c)
    }
    fn div_int(self, d: i64) -> Self {
        PiLaurent(self.0.map(|c| c / Q::from_integer(d as i128)))
    }
}
