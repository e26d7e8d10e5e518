//! Truncated Taylor series in one variable with complex coefficients.
//!
//! `Jet { c }` represents `sum_k c[k] (t - t0)^k` up to order `ORDER`; the
//! k-th derivative at `t0` is `k! * c[k]`. Enough for derivatives up to
//! order 3 of compositions of `exp`, powers and quotients.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub const ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [Complex64; ORDER],
}

impl Jet {
    pub fn constant(v: impl Into<Complex64>) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); ORDER];
        c[0] = v.into();
        Jet { c }
    }

    /// The independent variable expanded at `t0`.
    pub fn variable(t0: f64) -> Self {
        let mut j = Jet::constant(t0);
        j.c[1] = Complex64::new(1.0, 0.0);
        j
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn derivative(&self, k: usize) -> Complex64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        Jet {
            c: self.c.map(|x| x * s),
        }
    }

    pub fn recip(&self) -> Self {
        let inv = 1.0 / self.c[0];
        let mut b = [Complex64::new(0.0, 0.0); ORDER];
        b[0] = inv;
        for k in 1..ORDER {
            let acc: Complex64 = (1..=k).map(|j| self.c[j] * b[k - j]).sum();
            b[k] = -acc * inv;
        }
        Jet { c: b }
    }

    pub fn exp(&self) -> Self {
        let mut e = [Complex64::new(0.0, 0.0); ORDER];
        e[0] = self.c[0].exp();
        for k in 1..ORDER {
            let acc: Complex64 = (1..=k).map(|j| self.c[j] * e[k - j] * j as f64).sum();
            e[k] = acc / k as f64;
        }
        Jet { c: e }
    }

    /// `self^s` for real `s`; requires a nonzero constant term.
    pub fn powf(&self, s: f64) -> Self {
        let a0 = self.c[0];
        let mut b = [Complex64::new(0.0, 0.0); ORDER];
        b[0] = a0.powf(s);
        for k in 1..ORDER {
            let acc: Complex64 = (1..=k)
                .map(|j| self.c[j] * b[k - j] * (s * j as f64 - (k - j) as f64))
                .sum();
            b[k] = acc / (a0 * k as f64);
        }
        Jet { c: b }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a += b;
        }
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { c: self.c.map(|x| -x) }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [Complex64::new(0.0, 0.0); ORDER];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = (0..=k).map(|j| self.c[j] * o.c[k - j]).sum();
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}
