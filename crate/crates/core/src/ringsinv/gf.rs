//! Prime fields and their extensions `GF(p^k)`, elements encoded as the
//! base-`p` integer of their coefficient vector over `F_p[x]/(f)`.
//!
//! The defining polynomial `f` is the monic irreducible polynomial of
//! degree `k` whose non-leading coefficients, read as a base-`p` integer
//! (constant term least significant), are smallest. It is recomputed on
//! demand rather than stored, which gives the same encodings on every run.

/// Fields larger than this are rejected.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GfField {
    p: u32,
    k: u32,
    size: u32,
    /// Non-leading coefficients of the monic modulus, constant term first.
    modulus: Vec<u32>,
}

impl GfField {
    /// `p` must be prime and `p^k <= MAX_FIELD_SIZE`; callers validate.
    pub fn new(p: u32, k: u32) -> Self {
        let size = (p as u64).pow(k);
        debug_assert!(size <= MAX_FIELD_SIZE);
        Self {
            p,
            k,
            size: size as u32,
            modulus: least_irreducible(p, k),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Coefficients of the defining polynomial, constant term first,
    /// including the leading 1.
    pub fn modulus(&self) -> Vec<u32> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&s)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.encode(&s)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                let t = deg - k + i;
                prod[t] = (prod[t] + (p - c) * m as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.encode(&low)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x ↦ x^(p^e)`.
    pub fn frobenius(&self, a: u32, e: u32) -> u32 {
        if e == 0 {
            return a;
        }
        self.pow(a, (self.p as u64).pow(e))
    }
}

/// Remainder of `f` modulo monic `g` over `F_p`; polynomials are
/// coefficient vectors with constant term first.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dg;
        for (i, &c) in g[..dg].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - lead) * c as u64) % p;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn monic_of_degree(p: u32, d: u32, lower: u64) -> Vec<u32> {
    let mut coeffs: Vec<u32> = (0..d)
        .scan(lower, |rest, _| {
            let c = (*rest % p as u64) as u32;
            *rest /= p as u64;
            Some(c)
        })
        .collect();
    coeffs.push(1);
    coeffs
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() as u32 - 1;
    for d in 1..=k / 2 {
        for lower in 0..(p as u64).pow(d) {
            let g = monic_of_degree(p, d, lower);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0];
    }
    (0..(p as u64).pow(k))
        .map(|lower| monic_of_degree(p, k, lower))
        .find(|f| is_irreducible(f, p))
        .map(|mut f| {
            f.pop();
            f
        })
        .expect("irreducible polynomials exist in every degree")
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}
