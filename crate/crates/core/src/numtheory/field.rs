//! Prime fields F_p for odd p, with Tonelli–Shanks square roots.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_probable_prime, jacobi, ByteStream};
use crate::error::{Error, Result};

/// An odd prime field. Cheap to clone; the modulus is shared.
#[derive(Clone)]
pub struct PrimeField {
    p: Arc<BigUint>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimeField(p={} bits)", self.p.bits())
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for PrimeField {}

impl PrimeField {
    /// Builds the field, checking that `p` is an odd probable prime
    /// (misidentification probability at most 2^-128).
    pub fn new(p: BigUint) -> Result<Self> {
        if p.is_even() || p < BigUint::from(3u8) {
            return Err(Error::domain("field modulus must be an odd prime >= 3"));
        }
        if !is_probable_prime(&p) {
            return Err(Error::domain("field modulus failed the primality test"));
        }
        Ok(PrimeField { p: Arc::new(p) })
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn bits(&self) -> u64 {
        self.p.bits()
    }

    /// Width in bytes of a serialized field element.
    pub fn element_width(&self) -> usize {
        (self.p.bits() as usize).div_ceil(8)
    }

    pub fn reduce(&self, v: &BigUint) -> BigUint {
        v % &*self.p
    }

    pub fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= *self.p {
            s - &*self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &*self.p - b
        }
    }

    pub fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &*self.p - a
        }
    }

    pub fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b % &*self.p
    }

    pub fn pow(&self, a: &BigUint, e: &BigUint) -> BigUint {
        a.modpow(e, &self.p)
    }

    pub fn inv(&self, a: &BigUint) -> Result<BigUint> {
        if a.is_zero() {
            return Err(Error::domain("inverse of zero"));
        }
        // p prime, so a^(p-2) inverts a.
        Ok(a.modpow(&(&*self.p - 2u8), &self.p))
    }

    /// Legendre symbol of `a`: 1, -1, or 0.
    pub fn legendre(&self, a: &BigUint) -> i8 {
        jacobi(&super::biguint_to_bigint(a), &self.p).expect("odd prime modulus")
    }

    /// Tonelli–Shanks square root; `None` when `a` is a nonresidue.
    pub fn sqrt(&self, a: &BigUint) -> Option<BigUint> {
        let p = &*self.p;
        if a.is_zero() {
            return Some(BigUint::zero());
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if (p % 4u8).to_u8().unwrap() == 3 {
            let r = a.modpow(&((p + 1u8) >> 2), p);
            return Some(r);
        }
        // Write p - 1 = q * 2^s with q odd.
        let p_minus_1 = p - 1u8;
        let s = p_minus_1.trailing_zeros().unwrap() as u32;
        let q = &p_minus_1 >> s;
        // Deterministic nonresidue search.
        let mut z = BigUint::from(2u8);
        while self.legendre(&z) != -1 {
            z += 1u8;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = a.modpow(&q, p);
        let mut r = a.modpow(&((&q + 1u8) >> 1), p);
        while !t.is_one() {
            let mut i = 0u32;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = &t2 * &t2 % p;
                i += 1;
            }
            let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
            m = i;
            c = &b * &b % p;
            t = t * &c % p;
            r = r * b % p;
        }
        Some(r)
    }

    /// Uniform field element drawn from the stream (bias below 2^-64).
    pub fn draw(&self, stream: &mut ByteStream) -> BigUint {
        stream.next_below(&self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(BigUint::from(2u8)).is_err());
        assert!(PrimeField::new(BigUint::from(15u8)).is_err());
        assert!(PrimeField::new(BigUint::from(1u8)).is_err());
        assert!(PrimeField::new(BigUint::from(11u8)).is_ok());
    }

    #[test]
    fn sqrt_roundtrip_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 10009, 65537] {
            let f = PrimeField::new(BigUint::from(p)).unwrap();
            for a in 0..p.min(200) {
                let a = BigUint::from(a);
                let sq = f.mul(&a, &a);
                let r = f.sqrt(&sq).expect("square must have a root");
                assert!(r == a || r == f.neg(&a), "p={p} a={a}");
            }
        }
    }

    #[test]
    fn sqrt_rejects_nonresidues() {
        let f = PrimeField::new(BigUint::from(23u8)).unwrap();
        let mut roots = 0;
        for a in 1u8..23 {
            if f.sqrt(&BigUint::from(a)).is_some() {
                roots += 1;
            }
        }
        assert_eq!(roots, 11); // (p-1)/2 residues
    }

    #[test]
    fn inv_and_pow() {
        let f = PrimeField::new(BigUint::from(101u8)).unwrap();
        for a in 1u8..101 {
            let a = BigUint::from(a);
            let inv = f.inv(&a).unwrap();
            assert!(f.mul(&a, &inv).is_one());
        }
        assert!(f.inv(&BigUint::zero()).is_err());
    }
}
