//! Error-free transformations and compensated accumulation.
//!
//! Overlaps between evolved states and reference states can be many orders
//! of magnitude smaller than the individual terms that produce them. The
//! accumulators here carry the rounding error of every product and partial
//! sum alongside the running value, which makes a dot product as accurate as
//! if it had been evaluated in twice the working precision and then rounded.

use num_complex::Complex64;

/// `a + b = s + e` exactly.
#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// `a * b = p + e` exactly (barring overflow/underflow).
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    #[cfg(target_feature = "fma")]
    {
        (p, a.mul_add(b, -p))
    }
    #[cfg(not(target_feature = "fma"))]
    {
        let (ah, al) = split(a);
        let (bh, bl) = split(b);
        let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
        (p, e)
    }
}

#[cfg(not(target_feature = "fma"))]
#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    const FACTOR: f64 = 134_217_729.0; // 2^27 + 1
    let c = FACTOR * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// Running sum with a separate error term (Dot2 / Sum2 accumulation).
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    err: f64,
}

impl Accumulator {
    pub const ZERO: Accumulator = Accumulator { sum: 0.0, err: 0.0 };

    #[inline(always)]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        self.err += e;
    }

    #[inline(always)]
    pub fn add_prod(&mut self, a: f64, b: f64) {
        let (p, ep) = two_prod(a, b);
        let (s, es) = two_sum(self.sum, p);
        self.sum = s;
        self.err += ep + es;
    }

    #[inline(always)]
    pub fn value(&self) -> f64 {
        self.sum + self.err
    }
}

/// Complex counterpart of [`Accumulator`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexAccumulator {
    re: Accumulator,
    im: Accumulator,
}

impl ComplexAccumulator {
    /// Adds `conj(a) * b`.
    #[inline(always)]
    pub fn add_conj_prod(&mut self, a: Complex64, b: Complex64) {
        self.re.add_prod(a.re, b.re);
        self.re.add_prod(a.im, b.im);
        self.im.add_prod(a.re, b.im);
        self.im.add_prod(-a.im, b.re);
    }

    /// Adds `a * b` for real `a`.
    #[inline(always)]
    pub fn add_real_prod(&mut self, a: f64, b: Complex64) {
        self.re.add_prod(a, b.re);
        self.im.add_prod(a, b.im);
    }

    #[inline(always)]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline(always)]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `Σ conj(a_k) b_k` with compensated accumulation.
pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = ComplexAccumulator::default();
    for (&x, &y) in a.iter().zip(b) {
        acc.add_conj_prod(x, y);
    }
    acc.value()
}

/// `Σ a_k b_k` for a real `a` and complex `b`, compensated.
pub fn rdot(a: &[f64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = ComplexAccumulator::default();
    for (&x, &y) in a.iter().zip(b) {
        acc.add_real_prod(x, y);
    }
    acc.value()
}

/// Unevaluated sum `hi + lo` with roughly 106 bits of significand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };
    pub const PI: DoubleDouble = DoubleDouble {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    pub fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        DoubleDouble { hi: s, lo: e }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        Self::renorm(p, e + self.lo * x)
    }

    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let r = self - DoubleDouble::from_f64(q1).mul_f64(x);
        let q2 = r.hi / x;
        let r = r - DoubleDouble::from_f64(q2).mul_f64(x);
        let q3 = r.hi / x;
        Self::renorm(q1, q2) + DoubleDouble::from_f64(q3)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `(cos x, sin x)` for `|x| ≤ π`, by direct Taylor summation.
    pub fn cos_sin(self) -> (Self, Self) {
        debug_assert!(self.hi.abs() <= std::f64::consts::PI + 1e-12);
        let x2 = self * self;
        let mut cos = DoubleDouble::ONE;
        let mut sin = self;
        let mut cos_term = DoubleDouble::ONE;
        let mut sin_term = self;
        let mut k = 1.0_f64;
        loop {
            // cos_term_{n+1} = -cos_term_n * x^2 / ((2n+1)(2n+2))
            cos_term = (cos_term * x2).div_f64(-(2.0 * k - 1.0) * (2.0 * k));
            sin_term = (sin_term * x2).div_f64(-(2.0 * k) * (2.0 * k + 1.0));
            cos = cos + cos_term;
            sin = sin + sin_term;
            if cos_term.hi.abs() < 1e-36 && sin_term.hi.abs() < 1e-36 {
                break;
            }
            k += 1.0;
        }
        (cos, sin)
    }
}

impl std::ops::Add for DoubleDouble {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = {
            let e = e + t;
            let (s, e) = two_sum(s, e);
            (s, e + f)
        };
        Self::renorm(s, e)
    }
}

impl std::ops::Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        Self::renorm(p, e)
    }
}


/// `exp(-2πi r / n)` for `r = 0..n`, each entry accurate to double-double
/// precision.
pub fn roots_of_unity(n: usize) -> Vec<(DoubleDouble, DoubleDouble)> {
    let two_pi = DoubleDouble::PI.mul_f64(2.0);
    (0..n)
        .map(|r| {
            // fold into (-n/2, n/2] so the Taylor argument stays within π
            let signed = if 2 * r > n { r as f64 - n as f64 } else { r as f64 };
            let angle = two_pi.mul_f64(signed).div_f64(n as f64);
            let (c, s) = angle.cos_sin();
            (c, -s)
        })
        .collect()
}
