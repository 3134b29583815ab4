//! Truncated Taylor arithmetic to third order.
//!
//! A [`Taylor3`] stores `f(z), f'(z), f''(z)/2, f'''(z)/6` and propagates them
//! exactly through field operations, which is how solution jets are built from
//! the jet of ℘.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::complex::{C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Taylor3(pub [C64; 4]);

impl Taylor3 {
    pub fn constant(v: C64) -> Self {
        Taylor3([v, ZERO, ZERO, ZERO])
    }

    /// From a value and its first three derivatives.
    pub fn from_derivatives(f: C64, f1: C64, f2: C64, f3: C64) -> Self {
        Taylor3([f, f1, f2 / 2.0, f3 / 6.0])
    }

    /// The independent variable at `z`.
    pub fn variable(z: C64) -> Self {
        Taylor3([z, ONE, ZERO, ZERO])
    }

    pub fn value(&self) -> C64 {
        self.0[0]
    }

    /// `(f, f', f'', f''')`.
    pub fn derivatives(&self) -> [C64; 4] {
        [self.0[0], self.0[1], self.0[2] * 2.0, self.0[3] * 6.0]
    }

    pub fn scale(self, s: C64) -> Self {
        Taylor3(self.0.map(|x| x * s))
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Taylor3::constant(ONE);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    pub fn recip(self) -> Self {
        Taylor3::constant(ONE) / self
    }

    /// Compose an outer function given by its derivatives at `self.value()`.
    pub fn compose(self, outer: [C64; 4]) -> Self {
        let [_, g1, g2, g3] = self.derivatives();
        let [f0, f1, f2, f3] = outer;
        Taylor3::from_derivatives(
            f0,
            f1 * g1,
            f2 * g1 * g1 + f1 * g2,
            f3 * g1 * g1 * g1 + 3.0 * f2 * g1 * g2 + f1 * g3,
        )
    }

    pub fn exp(self) -> Self {
        let e = self.value().exp();
        self.compose([e, e, e, e])
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        self.compose([s, c, -s, -c])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| crate::complex::is_finite(*z))
    }
}

impl Add for Taylor3 {
    type Output = Taylor3;
    fn add(self, rhs: Self) -> Self {
        Taylor3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Taylor3 {
    type Output = Taylor3;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Taylor3 {
    type Output = Taylor3;
    fn neg(self) -> Self {
        Taylor3(self.0.map(|x| -x))
    }
}

impl Mul for Taylor3 {
    type Output = Taylor3;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let mut out = [ZERO; 4];
        for (k, slot) in out.iter_mut().enumerate() {
            for j in 0..=k {
                *slot += a[j] * b[k - j];
            }
        }
        Taylor3(out)
    }
}

impl Div for Taylor3 {
    type Output = Taylor3;
    fn div(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let mut q = [ZERO; 4];
        for k in 0..4 {
            let mut acc = a[k];
            for j in 1..=k {
                acc -= b[j] * q[k - j];
            }
            q[k] = acc / b[0];
        }
        Taylor3(q)
    }
}

impl Add<C64> for Taylor3 {
    type Output = Taylor3;
    fn add(mut self, rhs: C64) -> Self {
        self.0[0] += rhs;
        self
    }
}

impl Sub<C64> for Taylor3 {
    type Output = Taylor3;
    fn sub(mut self, rhs: C64) -> Self {
        self.0[0] -= rhs;
        self
    }
}

impl Mul<C64> for Taylor3 {
    type Output = Taylor3;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Taylor3 {
    type Output = Taylor3;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;

    fn close(a: [C64; 4], b: [C64; 4]) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < 1e-12 * (1.0 + y.norm()))
    }

    #[test]
    fn quotient_matches_hand_derivatives() {
        // f = 1/(z - 1) at z = 3: 1/2, -1/4, 2/8, -6/16
        let z = Taylor3::variable(c(3.0, 0.0));
        let f = (z - ONE).recip();
        let want = [c(0.5, 0.0), c(-0.25, 0.0), c(0.25, 0.0), c(-0.375, 0.0)];
        assert!(close(f.derivatives(), want));
    }

    #[test]
    fn chain_rule_through_exp_and_sin() {
        let z0 = c(0.3, -0.2);
        let alpha = c(1.5, 0.5);
        let e = (Taylor3::variable(z0) * alpha).exp().derivatives();
        let v = (alpha * z0).exp();
        assert!(close(e, [v, alpha * v, alpha * alpha * v, alpha * alpha * alpha * v]));

        let s = Taylor3::variable(z0).sin().derivatives();
        assert!(close(s, [z0.sin(), z0.cos(), -z0.sin(), -z0.cos()]));
    }

    #[test]
    fn powers_agree_with_products() {
        let x = Taylor3::from_derivatives(c(0.5, 1.0), c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 3.0));
        assert!(close(x.powi(3).derivatives(), (x * x * x).derivatives()));
    }
}
