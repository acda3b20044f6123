//! Arbitrary-precision integer utilities, deterministic byte expansion and
//! probable-prime machinery shared by every other module.
//!
//! All functions here are pure; the only "randomness" in the crate flows
//! through [`ByteStream`], a counter-mode SHA-256 expander seeded explicitly
//! by the caller.

mod field;
mod poly;

pub use field::PrimeField;
pub use poly::{FpPoly, PolyFactor};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Floor integer square root together with an exactness flag.
///
/// Returns `(r, exact)` with `r = ⌊√n⌋` and `exact` true iff `r² = n`.
pub fn int_sqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::domain("int_sqrt of a negative integer"));
    }
    let r = n.sqrt();
    let exact = &r * &r == *n;
    Ok((r, exact))
}

/// Unsigned variant of [`int_sqrt`].
pub fn int_sqrt_u(n: &BigUint) -> (BigUint, bool) {
    let r = n.sqrt();
    let exact = &r * &r == *n;
    (r, exact)
}

/// Modular inverse of `a` mod `m` (`m ≥ 1`), if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

/// Chinese remainder lift: the unique `x` in `[0, lcm(m1, m2))` with
/// `x ≡ r1 (mod m1)` and `x ≡ r2 (mod m2)`.
///
/// The moduli need not be coprime; incompatible residues are a domain error.
pub fn crt_pair(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Result<BigInt> {
    if !m1.is_positive() || !m2.is_positive() {
        return Err(Error::domain("crt_pair moduli must be >= 1"));
    }
    let g = m1.gcd(m2);
    let diff = r2 - r1;
    if !(&diff % &g).is_zero() {
        return Err(Error::domain("crt_pair: incompatible residues"));
    }
    let lcm = m1 / &g * m2;
    // x = r1 + m1 * t with t ≡ (r2 - r1)/g * (m1/g)^-1 (mod m2/g)
    let m1g = m1 / &g;
    let m2g = m2 / &g;
    let inv = mod_inverse(&m1g, &m2g)
        .ok_or_else(|| Error::Internal("crt_pair: inverse must exist".into()))?;
    let t = ((diff / &g) * inv).mod_floor(&m2g);
    Ok((r1 + m1 * t).mod_floor(&lcm))
}

/// `lcm(1, 2, …, n) = ∏_{p ≤ n} p^⌊log_p n⌋`.
pub fn lcm_range(n: u64) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::domain("lcm_range requires n >= 1"));
    }
    let mut acc = BigUint::one();
    for p in small_primes_below(n + 1) {
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        acc *= BigUint::from(pk);
    }
    Ok(acc)
}

/// All primes `< bound` by a simple sieve.
pub fn small_primes_below(bound: u64) -> Vec<u64> {
    if bound <= 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n];
    let mut primes = Vec::new();
    for i in 2..n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_even() || n.is_zero() {
        return Err(Error::domain("jacobi: n must be odd and positive"));
    }
    let mut a = a.mod_floor(&BigInt::from(n.clone())).to_biguint().unwrap();
    let mut n = n.clone();
    let mut t: i8 = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u8).to_u8().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u8).to_u8().unwrap() == 3 && (&n % 4u8).to_u8().unwrap() == 3 {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        Ok(t)
    } else {
        Ok(0)
    }
}

const SMALL_SIEVE_PRIMES: [u64; 46] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199,
];

/// Deterministic bases that make Miller–Rabin exact for all n < 3.3·10^24.
const MR_BASES_64: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn miller_rabin_round(n: &BigUint, base: &BigUint, d: &BigUint, s: u32) -> bool {
    let n_minus_1 = n - 1u8;
    let mut x = base.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Probable-prime test with misidentification probability at most 2^-128:
/// deterministic bases for inputs below 2^64 (actually up to 3.3·10^24),
/// otherwise 64 Miller–Rabin rounds with bases expanded deterministically
/// from the candidate itself.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u8) {
        return false;
    }
    for &p in SMALL_SIEVE_PRIMES.iter() {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % bp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0) as u32;
    let d = &n_minus_1 >> s;

    if n.bits() <= 64 {
        for &b in MR_BASES_64.iter() {
            if !miller_rabin_round(n, &BigUint::from(b), &d, s) {
                return false;
            }
        }
        return true;
    }

    // Bases drawn from a stream keyed by the candidate keep the test a pure
    // function while staying independent across rounds.
    let mut stream = ByteStream::new(&[b"uog-mr-bases".as_slice(), &n.to_bytes_be()].concat());
    let two = BigUint::from(2u8);
    let span = n - 3u8;
    for _ in 0..64 {
        let base = stream.next_below(&span) + &two; // uniform in [2, n-2]
        if !miller_rabin_round(n, &base, &d, s) {
            return false;
        }
    }
    true
}

/// Deterministic byte expansion: block `i` of the stream is
/// `SHA-256(seed ‖ be64(i))` for `i = 0, 1, 2, …`.
#[derive(Debug, Clone)]
pub struct ByteStream {
    seed: Vec<u8>,
    block_index: u64,
    buf: [u8; 32],
    pos: usize,
}

impl ByteStream {
    pub fn new(seed: &[u8]) -> Self {
        let mut s = ByteStream {
            seed: seed.to_vec(),
            block_index: 0,
            buf: [0u8; 32],
            pos: 32,
        };
        s.refill();
        s.pos = 0;
        s
    }

    /// Stream seeded by `seed ‖ tag`, the convention for domain separation.
    pub fn with_tag(seed: &[u8], tag: &[u8]) -> Self {
        ByteStream::new(&[seed, tag].concat())
    }

    fn refill(&mut self) {
        let mut h = Sha256::new();
        h.update(&self.seed);
        h.update(self.block_index.to_be_bytes());
        self.buf = h.finalize().into();
        self.block_index += 1;
        self.pos = 0;
    }

    pub fn fill(&mut self, out: &mut [u8]) {
        for b in out.iter_mut() {
            if self.pos == 32 {
                self.refill();
            }
            *b = self.buf[self.pos];
            self.pos += 1;
        }
    }

    pub fn take(&mut self, n: usize) -> Vec<u8> {
        let mut v = vec![0u8; n];
        self.fill(&mut v);
        v
    }

    pub fn next_u8(&mut self) -> u8 {
        let mut b = [0u8; 1];
        self.fill(&mut b);
        b[0]
    }

    /// Uniform value in `[0, bound)` for `bound ≥ 1`, by reading
    /// `⌈(bitlen(bound) + 64)/8⌉` big-endian bytes and reducing; the 64
    /// excess bits keep the modular bias below 2^-64.
    pub fn next_below(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "next_below requires a positive bound");
        let nbytes = ((bound.bits() + 64) as usize).div_ceil(8);
        let raw = BigUint::from_bytes_be(&self.take(nbytes));
        raw % bound
    }

    /// A `bits`-bit candidate: `⌈bits/8⌉` big-endian bytes, masked to `bits`
    /// bits, with the top bit forced to 1.
    pub fn next_candidate(&mut self, bits: u32) -> BigUint {
        assert!(bits >= 2, "candidates need at least 2 bits");
        let nbytes = (bits as usize).div_ceil(8);
        let mut v = BigUint::from_bytes_be(&self.take(nbytes));
        let one = BigUint::one();
        let mask = (&one << bits) - &one;
        v &= mask;
        v |= &one << (bits - 1);
        v
    }
}

/// First probable prime among `bits`-bit candidates drawn from the stream
/// seeded with `seed` (top bit forced, so the result has exactly `bits` bits).
pub fn hash_to_prime(seed: &[u8], bits: u32) -> BigUint {
    hash_to_prime_filtered(seed, bits, |_| true)
}

/// As [`hash_to_prime`], restricted to candidates satisfying `accept`.
pub fn hash_to_prime_filtered(seed: &[u8], bits: u32, accept: impl Fn(&BigUint) -> bool) -> BigUint {
    let mut stream = ByteStream::new(seed);
    loop {
        let cand = stream.next_candidate(bits);
        if accept(&cand) && is_probable_prime(&cand) {
            return cand;
        }
    }
}

/// Big-endian bytes of a `BigUint` left-padded to `width`.
pub fn to_be_bytes_padded(v: &BigUint, width: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    assert!(raw.len() <= width, "value wider than target width");
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    out
}

pub(crate) fn bigint_to_biguint(v: &BigInt) -> Result<BigUint> {
    v.to_biguint()
        .ok_or_else(|| Error::domain("expected a nonnegative integer"))
}

pub(crate) fn biguint_to_bigint(v: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn int_sqrt_examples() {
        assert_eq!(int_sqrt(&bi(0)).unwrap(), (bi(0), true));
        assert_eq!(int_sqrt(&bi(26)).unwrap(), (bi(5), false));
        // 23² recomputed by multiplication.
        let (r, exact) = int_sqrt(&bi(529)).unwrap();
        assert!(exact);
        assert_eq!(&r * &r, bi(529));
        assert_eq!(r, bi(23));
        assert!(int_sqrt(&bi(-1)).is_err());
    }

    #[test]
    fn int_sqrt_bracketing_random() {
        let mut stream = ByteStream::new(b"int-sqrt-prop");
        let bound = BigUint::one() << 512;
        for _ in 0..10_000 {
            let n = stream.next_below(&bound);
            let (r, _) = int_sqrt_u(&n);
            assert!(&r * &r <= n);
            let r1 = &r + 1u8;
            assert!(&r1 * &r1 > n);
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_pair(&bi(1), &bi(2), &bi(0), &bi(1)).unwrap(), bi(1));
        assert_eq!(crt_pair(&bi(0), &bi(5), &bi(0), &bi(7)).unwrap(), bi(0));
        // Exhaustive scan of 0..14 gives 8.
        let expect = (0..15).find(|x| x % 3 == 2 && x % 5 == 3).unwrap();
        assert_eq!(crt_pair(&bi(2), &bi(3), &bi(3), &bi(5)).unwrap(), bi(expect));
        assert!(crt_pair(&bi(1), &bi(2), &bi(0), &bi(2)).is_err());
    }

    #[test]
    fn lcm_range_values() {
        assert_eq!(lcm_range(1).unwrap(), BigUint::one());
        // Fold of lcm over 1..10.
        let mut folded = BigUint::one();
        for k in 1u64..=10 {
            folded = folded.lcm(&BigUint::from(k));
        }
        assert_eq!(lcm_range(10).unwrap(), folded);
        assert_eq!(folded, BigUint::from(2520u32));
        assert_eq!(lcm_range(60).unwrap().bits(), 84);
    }

    #[test]
    fn lcm_range_divisibility() {
        let s = lcm_range(37).unwrap();
        for k in 1u64..=37 {
            assert!((&s % BigUint::from(k)).is_zero());
        }
        for p in [41u64, 43, 47, 53] {
            assert!(!(&s % BigUint::from(p)).is_zero());
        }
    }

    #[test]
    fn jacobi_matches_legendre_on_primes() {
        for p in [3u64, 7, 11, 23, 101] {
            let bp = BigUint::from(p);
            for a in 0..p {
                let euler = BigUint::from(a).modpow(&(&bp >> 1), &bp);
                let expect = if a % p == 0 {
                    0
                } else if euler.is_one() {
                    1
                } else {
                    -1
                };
                assert_eq!(jacobi(&bi(a as i64), &bp).unwrap(), expect, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn probable_prime_known_values() {
        for p in [2u64, 3, 5, 61, 2147483647, 10_000_000_019] {
            assert!(is_probable_prime(&BigUint::from(p)), "{p}");
        }
        for c in [1u64, 4, 561, 1729, 25326001, 3215031751] {
            assert!(!is_probable_prime(&BigUint::from(c)), "{c}");
        }
        // A 128-bit prime (2^127 - 1 is a Mersenne prime).
        let m127 = (BigUint::one() << 127) - 1u8;
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(m127 + 2u8)));
    }

    #[test]
    fn byte_stream_is_counter_mode_sha256() {
        let mut s = ByteStream::new(b"seed");
        let first = s.take(32);
        let mut h = Sha256::new();
        h.update(b"seed");
        h.update(0u64.to_be_bytes());
        assert_eq!(first, h.finalize().to_vec());
        // Blocks concatenate seamlessly.
        let mut s2 = ByteStream::new(b"seed");
        let both = s2.take(40);
        assert_eq!(&both[..32], &first[..]);
    }

    #[test]
    fn hash_to_prime_has_exact_bitlength() {
        for bits in [17u32, 32, 64, 129] {
            let p = hash_to_prime(b"bitlen-test", bits);
            assert_eq!(p.bits() as u32, bits);
            assert!(is_probable_prime(&p));
        }
        let q = hash_to_prime_filtered(b"filter-test", 64, |c| (c % 4u8).to_u8().unwrap() == 3);
        assert_eq!((&q % 4u8).to_u8().unwrap(), 3);
        assert!(is_probable_prime(&q));
    }

    proptest! {
        #[test]
        fn crt_pair_solves_both_congruences(r1 in 0i64..1000, m1 in 1i64..1000, r2 in 0i64..1000, m2 in 1i64..1000) {
            let (r1, m1, r2, m2) = (bi(r1 % m1), bi(m1), bi(r2 % m2), bi(m2));
            if let Ok(x) = crt_pair(&r1, &m1, &r2, &m2) {
                prop_assert_eq!(x.mod_floor(&m1), r1.mod_floor(&m1));
                prop_assert_eq!(x.mod_floor(&m2), r2.mod_floor(&m2));
                prop_assert!(x >= bi(0));
                prop_assert!(x < m1.lcm(&m2));
            }
        }
    }
}
