//! Discrete Fourier transforms used by the split-operator propagator.
//!
//! The propagator is generic over [`Fourier`] so that a std build can plug in
//! a SIMD backend. [`Plan`] is the built-in `no_std` implementation: iterative
//! radix-2 for powers of two, Bluestein's chirp-z convolution otherwise.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// In-place, unnormalised DFT of a fixed length.
///
/// `forward` computes `X_k = Σ_j x_j e^{-2πi jk/N}` and `inverse` the same sum
/// with `e^{+2πi jk/N}`; neither divides by `N`.
pub trait Fourier {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn forward(&mut self, buf: &mut [Complex64]);
    fn inverse(&mut self, buf: &mut [Complex64]);
}

/// Built-in transform for any length `N ≥ 1`.
#[derive(Debug, Clone)]
pub struct Plan {
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

impl Plan {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let kind = if len.is_power_of_two() {
            Kind::Radix2(Radix2::new(len))
        } else {
            Kind::Bluestein(Bluestein::new(len))
        };
        Self { kind }
    }
}

impl Fourier for Plan {
    fn len(&self) -> usize {
        match &self.kind {
            Kind::Radix2(r) => r.len,
            Kind::Bluestein(b) => b.len,
        }
    }

    fn forward(&mut self, buf: &mut [Complex64]) {
        match &mut self.kind {
            Kind::Radix2(r) => r.run(buf, false),
            Kind::Bluestein(b) => b.run(buf, false),
        }
    }

    fn inverse(&mut self, buf: &mut [Complex64]) {
        match &mut self.kind {
            Kind::Radix2(r) => r.run(buf, true),
            Kind::Bluestein(b) => b.run(buf, true),
        }
    }
}

#[derive(Debug, Clone)]
struct Radix2 {
    len: usize,
    // e^{-2πik/N}, k < N/2
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        let half = len / 2;
        let twiddles = (0..half)
            .map(|k| {
                let (s, c) = libm::sincos(-2.0 * PI * k as f64 / len as f64);
                Complex64::new(c, s)
            })
            .collect();
        let bits = len.trailing_zeros();
        let bitrev = (0..len as u32)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (32 - bits)
                }
            })
            .collect();
        Self {
            len,
            twiddles,
            bitrev,
        }
    }

    fn run(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.len;
        assert_eq!(buf.len(), n, "buffer length does not match plan");
        for (i, &r) in self.bitrev.iter().enumerate() {
            let r = r as usize;
            if i < r {
                buf.swap(i, r);
            }
        }

        // first stage has unit twiddles only
        if n >= 2 {
            for pair in buf.chunks_exact_mut(2) {
                let (a, b) = (pair[0], pair[1]);
                pair[0] = a + b;
                pair[1] = a - b;
            }
        }

        let mut size = 4;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for block in buf.chunks_exact_mut(size) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            size *= 2;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    len: usize,
    inner: Radix2,
    // e^{-iπk²/N}
    chirp: Vec<Complex64>,
    // forward transform of the conjugate chirp, scaled by 1/M
    kernel: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Bluestein {
    fn new(len: usize) -> Self {
        let m = (2 * len - 1).next_power_of_two();
        let inner = Radix2::new(m);
        let two_n = 2 * len as u128;
        let chirp: Vec<Complex64> = (0..len)
            .map(|k| {
                // k² mod 2N keeps the phase argument small
                let q = (k as u128 * k as u128) % two_n;
                let (s, c) = libm::sincos(-PI * q as f64 / len as f64);
                Complex64::new(c, s)
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for k in 1..len {
            kernel[k] = chirp[k].conj();
            kernel[m - k] = chirp[k].conj();
        }
        inner.run(&mut kernel, false);
        let scale = 1.0 / m as f64;
        for v in &mut kernel {
            *v *= scale;
        }
        Self {
            len,
            inner,
            chirp,
            kernel,
            scratch: vec![Complex64::new(0.0, 0.0); m],
        }
    }

    fn run(&mut self, buf: &mut [Complex64], inverse: bool) {
        assert_eq!(buf.len(), self.len, "buffer length does not match plan");
        let zero = Complex64::new(0.0, 0.0);
        self.scratch.fill(zero);
        for ((s, &x), &w) in self.scratch.iter_mut().zip(buf.iter()).zip(&self.chirp) {
            let x = if inverse { x.conj() } else { x };
            *s = x * w;
        }
        self.inner.run(&mut self.scratch, false);
        for (s, &k) in self.scratch.iter_mut().zip(&self.kernel) {
            *s *= k;
        }
        self.inner.run(&mut self.scratch, true);
        for ((x, &s), &w) in buf.iter_mut().zip(&self.scratch).zip(&self.chirp) {
            let y = s * w;
            *x = if inverse { y.conj() } else { y };
        }
    }
}
