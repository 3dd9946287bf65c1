//! Finite fields F_{p^e} in a polynomial basis over F_p.
//!
//! An element is packed into a `u64` as `sum d_k p^k`, where `d_k` is the
//! coefficient of `g^k` and `g` is the class of `x` modulo the defining
//! polynomial. Packed order is the canonical enumeration order.

use super::fp_poly::{self, mulmod};
use crate::error::{Error, Result};

pub(crate) const MAX_DEGREE: usize = 12;
const MAX_ORDER: u64 = 1 << 62;
const TABLE_BOUND: u64 = 1 << 16;

type Digits = [u64; MAX_DEGREE];

#[derive(Debug)]
struct LogTables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

#[derive(Debug)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    /// Monic, ascending, length `e + 1`.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

impl FiniteField {
    pub(crate) fn new(p: u64, e: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if !fp_poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 || e == 0 || e as usize > MAX_DEGREE {
            return Err(Error::FieldTooLarge { p, e });
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, e })?;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.into_iter().map(|c| c % p).collect();
                let m = fp_poly::trim(m);
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::BadModulus { expected: e });
                }
                if e == 1 {
                    // every monic linear modulus gives the same packed representation
                    vec![0, 1]
                } else if !fp_poly::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus {
                        modulus: format_poly(&m, "x"),
                        p,
                    });
                } else {
                    m
                }
            }
            None => default_modulus(p, e),
        };
        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_BOUND {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_string(&self) -> String {
        format_poly(&self.modulus, "x")
    }

    fn digits(&self, mut a: u64) -> Digits {
        let mut d = [0u64; MAX_DEGREE];
        for slot in d.iter_mut().take(self.e as usize) {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d.iter()
            .take(self.e as usize)
            .rev()
            .fold(0, |acc, &x| acc * self.p + x)
    }

    /// Coefficient vector of `a` in the basis `1, g, ..., g^(e-1)`.
    pub fn coefficients(&self, a: u64) -> Vec<u64> {
        self.digits(a)[..self.e as usize].to_vec()
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> u64 {
        let mut d = [0u64; MAX_DEGREE];
        for (slot, &c) in d.iter_mut().zip(coeffs) {
            *slot = c % self.p;
        }
        self.pack(&d)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut r, mut pw) = (a, b, 0u64, 1u64);
        for _ in 0..self.e {
            r += ((a % self.p + b % self.p) % self.p) * pw;
            a /= self.p;
            b /= self.p;
            pw *= self.p;
        }
        r
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut r, mut pw) = (a, 0u64, 1u64);
        for _ in 0..self.e {
            r += ((self.p - a % self.p) % self.p) * pw;
            a /= self.p;
            pw *= self.p;
        }
        r
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let s = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % (self.q - 1);
            return t.exp[s as usize];
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: u64, b: u64) -> u64 {
        if self.e == 1 {
            return mulmod(a, b, self.p);
        }
        let p = self.p;
        let e = self.e as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut acc = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if da[i] == 0 {
                continue;
            }
            for j in 0..e {
                acc[i + j] = (acc[i + j] + mulmod(da[i], db[j], p)) % p;
            }
        }
        for k in (e..2 * e - 1).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            acc[k] = 0;
            for i in 0..e {
                let sub = mulmod(c, self.modulus[i], p);
                acc[k - e + i] = (acc[k - e + i] + p - sub) % p;
            }
        }
        self.pack(&acc[..e])
    }

    pub fn pow(&self, a: u64, mut exp: u64) -> u64 {
        if exp == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let l = t.log[a as usize] as u128 * exp as u128 % (self.q - 1) as u128;
            return t.exp[l as usize];
        }
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// `a^(p^k)` for `0 <= k < e`.
    pub fn frobenius_pow(&self, a: u64, k: u32) -> u64 {
        let mut r = a;
        for _ in 0..k {
            r = self.pow(r, self.p);
        }
        r
    }

    /// The class of `x`, i.e. `g`. For prime fields this is `0`.
    pub fn generator(&self) -> u64 {
        if self.e == 1 {
            0
        } else {
            self.p
        }
    }

    /// Discrete logarithm with respect to the table's primitive element.
    pub(crate) fn log(&self, a: u64) -> Option<u64> {
        self.tables.as_ref().map(|t| t.log[a as usize] as u64)
    }

    pub(crate) fn exp(&self, k: u64) -> Option<u64> {
        self.tables
            .as_ref()
            .map(|t| t.exp[(k % (self.q - 1)) as usize])
    }

    fn build_tables(&self) -> LogTables {
        let n = (self.q - 1) as usize;
        let mut exp = vec![0u64; n];
        let mut log = vec![0u32; self.q as usize];
        for gamma in 1..self.q {
            let mut x = 1u64;
            let mut ok = true;
            for (k, slot) in exp.iter_mut().enumerate() {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                *slot = x;
                x = self.mul_poly(x, gamma);
            }
            if ok && x == 1 {
                for (k, &v) in exp.iter().enumerate() {
                    log[v as usize] = k as u32;
                }
                return LogTables { exp, log };
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    pub fn format_element(&self, a: u64) -> String {
        if self.e == 1 {
            return a.to_string();
        }
        let d = self.digits(a);
        let mut v = d[..self.e as usize].to_vec();
        v = fp_poly::trim(v);
        if v.is_empty() {
            return "0".into();
        }
        format_poly(&v, "g")
    }
}

/// First irreducible monic polynomial of degree `e`, ordered by the packed
/// value of its lower coefficients.
fn default_modulus(p: u64, e: u32) -> Vec<u64> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = p.pow(e);
    for idx in 0..count {
        let mut f = Vec::with_capacity(e as usize + 1);
        let mut k = idx;
        for _ in 0..e {
            f.push(k % p);
            k /= p;
        }
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) fn format_poly(coeffs: &[u64], var: &str) -> String {
    let mut parts = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        parts.push(match (c, mono.is_empty()) {
            (_, true) => c.to_string(),
            (1, false) => mono,
            (_, false) => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(FiniteField::new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(5, 1, None).unwrap().modulus(), &[0, 1]);
    }

    #[test]
    fn table_and_poly_multiplication_agree() {
        for &(p, e) in &[(2u64, 4u32), (3, 3), (5, 2), (7, 1)] {
            let f = FiniteField::new(p, e, None).unwrap();
            for a in 0..f.q {
                for b in 0..f.q {
                    assert_eq!(f.mul(a, b), f.mul_poly(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FiniteField::new(2, 20, None);
        assert!(matches!(f, Err(Error::FieldTooLarge { .. })));
        let f = FiniteField::new(3, 12, None).unwrap();
        assert!(f.tables.is_none());
        let a = f.from_coefficients(&[1, 2, 0, 1]);
        let ai = f.inv(a).unwrap();
        assert_eq!(f.mul(a, ai), 1);
        assert_eq!(f.frobenius_pow(a, 12 % 12), a);
        assert_eq!(f.pow(a, f.q - 1), 1);
    }

    #[test]
    fn formatting() {
        let f9 = FiniteField::new(3, 2, None).unwrap();
        assert_eq!(f9.format_element(0), "0");
        assert_eq!(f9.format_element(f9.from_coefficients(&[1, 1])), "g+1");
        assert_eq!(f9.format_element(f9.from_coefficients(&[0, 2])), "2*g");
        assert_eq!(format_poly(&[1, 0, 1], "x"), "x^2+1");
    }
}
