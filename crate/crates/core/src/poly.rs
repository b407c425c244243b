//! Integer polynomials evaluated in wide or modular arithmetic.

use alloc::vec::Vec;
use core::fmt;

/// Polynomial with `i64` coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut ascending: Vec<i64>) -> Self {
        while ascending.len() > 1 && *ascending.last().unwrap() == 0 {
            ascending.pop();
        }
        if ascending.is_empty() {
            ascending.push(0);
        }
        Self { coeffs: ascending }
    }

    /// Coefficients listed from the leading term down to the constant.
    pub fn from_descending(desc: &[i64]) -> Self {
        Self::new(desc.iter().rev().copied().collect())
    }

    pub fn monomial(c: i64, degree: usize) -> Self {
        let mut coeffs = alloc::vec![0; degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> i64 {
        self.coeffs[0]
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: i64, other: &IntPoly, b: i64) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len)
            .map(|i| {
                let x = self.coeffs.get(i).copied().unwrap_or(0);
                let y = other.coeffs.get(i).copied().unwrap_or(0);
                a * x + b * y
            })
            .collect();
        IntPoly::new(c)
    }

    /// Horner evaluation; `None` on i128 overflow.
    pub fn eval_checked(&self, n: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(n)?.checked_add(c as i128)?;
        }
        Some(acc)
    }

    /// `self(n) mod q` in `[0, q)`.
    pub fn eval_mod(&self, n: i128, q: u64) -> u64 {
        let q = q as i128;
        let x = n.rem_euclid(q);
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + (c as i128).rem_euclid(q)) % q;
        }
        acc as u64
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("poly:")?;
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
