//! Exact arithmetic in GF(2^s).
//!
//! Elements are s-bit vectors in the polynomial basis of a fixed irreducible
//! modulus. One context ([`FieldCtx`]) owns the modulus and the precomputed
//! linear algebra for Artin-Schreier solving; elements are plain `Copy`
//! values tagged with the context fingerprint so cross-field mixups are
//! caught at runtime.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported extension degree. Elements stay in one machine word.
pub const MAX_DEGREE: u32 = 64;

/// Fixed default moduli for s = 1..=16: the lowest-weight, lexicographically
/// least irreducible trinomial (or pentanomial where no trinomial exists).
const MODULUS_TABLE: [u64; 16] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x203, 0x409, 0x805, 0x1009, 0x201B, 0x4021,
    0x8003, 0x1002B,
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("extension degree {0} outside 1..={MAX_DEGREE}")]
    DegreeOutOfRange(u32),
    #[error("modulus {0:#x} is not irreducible of degree {1}")]
    BadModulus(u128, u32),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("argument is a root of T^2+T+1")]
    DivisionByH,
    #[error("element from a different field context")]
    MismatchedContexts,
    #[error("no embedding of GF(2^{0}) into GF(2^{1})")]
    NoEmbedding(u32, u32),
}

struct CtxInner {
    s: u32,
    modulus: u128,
    id: u32,
    /// Row r of the F2-matrix of a -> a^2 + a; bit i of `as_rows[r]` is the
    /// r-th coordinate of basis image (e_i)^2 + e_i.
    as_rows: Vec<u64>,
}

/// Immutable description of GF(2^s); cheap to clone and share.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<CtxInner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for FieldCtx {}

/// An element of GF(2^s) in the polynomial basis, tagged with its context.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    bits: u64,
    ctx: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

impl FieldElement {
    /// Canonical integer encoding; defines the total order used for
    /// tie-breaking everywhere.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

/// A point of the projective line over the context field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjectivePoint {
    Finite(FieldElement),
    Infinity,
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(a) => write!(f, "{}", a.bits),
            ProjectivePoint::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn ctx_fingerprint(s: u32, modulus: u128) -> u32 {
    // FNV-1a over the defining data; only used to detect context mixups.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in s
        .to_le_bytes()
        .iter()
        .chain(modulus.to_le_bytes().iter())
    {
        h ^= *byte as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    (h ^ (h >> 32)) as u32
}

impl FieldCtx {
    /// GF(2^s) with the shipped default modulus for that degree.
    pub fn new(s: u32) -> Result<Self, GfError> {
        if s == 0 || s > MAX_DEGREE {
            return Err(GfError::DegreeOutOfRange(s));
        }
        Self::with_modulus(s, default_modulus(s))
    }

    /// GF(2^s) with a caller-supplied irreducible modulus (bit s must be set).
    pub fn with_modulus(s: u32, modulus: u128) -> Result<Self, GfError> {
        if s == 0 || s > MAX_DEGREE {
            return Err(GfError::DegreeOutOfRange(s));
        }
        if poly_degree(modulus) != s as i32 || !is_irreducible(modulus, s) {
            return Err(GfError::BadModulus(modulus, s));
        }
        let id = ctx_fingerprint(s, modulus);
        // Precompute the matrix of a -> a^2 + a for Artin-Schreier solving.
        let bare = FieldCtx {
            inner: Arc::new(CtxInner {
                s,
                modulus,
                id,
                as_rows: Vec::new(),
            }),
        };
        let mut rows = vec![0u64; s as usize];
        for i in 0..s {
            let e = bare.el(1u64 << i);
            let col = bare.mul(e, e).bits ^ e.bits;
            for (r, row) in rows.iter_mut().enumerate() {
                *row |= ((col >> r) & 1) << i;
            }
        }
        Ok(FieldCtx {
            inner: Arc::new(CtxInner {
                s,
                modulus,
                id,
                as_rows: rows,
            }),
        })
    }

    pub fn degree(&self) -> u32 {
        self.inner.s
    }

    pub fn modulus(&self) -> u128 {
        self.inner.modulus
    }

    /// Number of field elements, saturating at u64::MAX for s = 64.
    pub fn order(&self) -> u64 {
        if self.inner.s >= 64 {
            u64::MAX
        } else {
            1u64 << self.inner.s
        }
    }

    pub fn same_ctx(&self, other: &FieldCtx) -> bool {
        self.inner.id == other.inner.id
    }

    fn owns(&self, a: FieldElement) -> bool {
        a.ctx == self.inner.id
    }

    fn check(&self, a: FieldElement) -> FieldElement {
        assert!(
            self.owns(a),
            "{}",
            GfError::MismatchedContexts
        );
        a
    }

    /// Element from its canonical integer encoding.
    pub fn el(&self, bits: u64) -> FieldElement {
        if self.inner.s < 64 {
            assert!(bits < (1u64 << self.inner.s), "encoding out of range");
        }
        FieldElement {
            bits,
            ctx: self.inner.id,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.el(0)
    }

    pub fn one(&self) -> FieldElement {
        self.el(1)
    }

    /// All field elements in canonical order. Only callable for s < 32-ish
    /// scans; the iterator itself is lazy.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let n = self.order();
        (0..n).map(move |b| self.el(b))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        self.el(a.bits ^ b.bits)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.check(a);
        self.check(b);
        let s = self.inner.s;
        let modulus = self.inner.modulus;
        let mut acc: u128 = 0;
        let mut x = a.bits as u128;
        let mut y = b.bits;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if (x >> s) & 1 == 1 {
                x ^= modulus;
            }
        }
        self.el(acc as u64)
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let mut base = self.check(a);
        let mut acc = self.one();
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a);
        if a.bits == 0 {
            return Err(GfError::ZeroInverse);
        }
        // a^(2^s - 2)
        Ok(self.pow(a, (1u128 << self.inner.s) - 2))
    }

    /// Trace to F2: sum of the Frobenius orbit.
    pub fn trace(&self, a: FieldElement) -> u8 {
        self.check(a);
        let mut acc = self.zero();
        let mut x = a;
        for _ in 0..self.inner.s {
            acc = self.add(acc, x);
            x = self.square(x);
        }
        debug_assert!(acc.bits <= 1, "trace landed outside F2");
        acc.bits as u8
    }

    /// Unique square root in characteristic 2: a^(2^(s-1)).
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        let mut x = self.check(a);
        for _ in 0..self.inner.s.saturating_sub(1) {
            x = self.square(x);
        }
        x
    }

    /// Both roots of T^2 + T + c when trace(c) = 0, ordered by encoding;
    /// `None` when trace(c) = 1 (no root in the field).
    pub fn solve_artin_schreier(
        &self,
        c: FieldElement,
    ) -> Option<(FieldElement, FieldElement)> {
        self.check(c);
        if self.trace(c) == 1 {
            return None;
        }
        let s = self.inner.s as usize;
        let mut rows: Vec<u64> = self.inner.as_rows.clone();
        let mut rhs: Vec<u8> = (0..s).map(|r| ((c.bits >> r) & 1) as u8).collect();
        // Gaussian elimination over F2; the map has kernel {0,1} so any
        // trace-zero rhs is solvable.
        let mut theta = 0u64;
        let mut pivot_row_of_col = vec![usize::MAX; s];
        let mut r = 0usize;
        for col in 0..s {
            let Some(p) = (r..s).find(|&i| (rows[i] >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(r, p);
            rhs.swap(r, p);
            for i in 0..s {
                if i != r && (rows[i] >> col) & 1 == 1 {
                    rows[i] ^= rows[r];
                    rhs[i] ^= rhs[r];
                }
            }
            pivot_row_of_col[col] = r;
            r += 1;
        }
        for i in r..s {
            // Rank deficiency rows must have zero rhs when trace(c) = 0.
            debug_assert_eq!(rhs[i], 0, "inconsistent Artin-Schreier system");
            if rhs[i] != 0 {
                return None;
            }
        }
        for col in 0..s {
            let pr = pivot_row_of_col[col];
            if pr != usize::MAX && rhs[pr] == 1 {
                theta |= 1u64 << col;
            }
        }
        let t0 = self.el(theta);
        let t1 = self.el(theta ^ 1);
        debug_assert_eq!(self.add(self.square(t0), t0), c);
        if t0.bits <= t1.bits {
            Some((t0, t1))
        } else {
            Some((t1, t0))
        }
    }

    /// T^2 + T + 1 evaluated at a.
    pub fn h_eval(&self, a: FieldElement) -> FieldElement {
        self.add(self.add(self.square(a), a), self.one())
    }

    /// Roots of T^2 + T + 1 in the field: empty for s odd, the conjugate
    /// pair for s even.
    pub fn h_roots(&self) -> Vec<FieldElement> {
        match self.solve_artin_schreier(self.one()) {
            Some((a, b)) => vec![a, b],
            None => vec![],
        }
    }

    /// The rational map beta -> beta / (beta^2 + beta + 1).
    pub fn f_map(&self, beta: FieldElement) -> Result<FieldElement, GfError> {
        let h = self.h_eval(beta);
        if h.is_zero() {
            return Err(GfError::DivisionByH);
        }
        Ok(self.mul(beta, self.inv(h)?))
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldCtx(s={}, modulus={:#x})",
            self.inner.s, self.inner.modulus
        )
    }
}

/// Ring-homomorphic embedding GF(2^s) -> GF(2^(s*t)), determined by the
/// canonical (encoding-least) root of the source modulus in the target.
pub struct Embedding {
    src_id: u32,
    dst: FieldCtx,
    powers: Vec<FieldElement>,
}

impl Embedding {
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Self, GfError> {
        let (ss, ds) = (src.degree(), dst.degree());
        if ds % ss != 0 {
            return Err(GfError::NoEmbedding(ss, ds));
        }
        let root = canonical_root_of(src.modulus(), ss, dst)
            .ok_or(GfError::NoEmbedding(ss, ds))?;
        let mut powers = Vec::with_capacity(ss as usize);
        let mut p = dst.one();
        for _ in 0..ss {
            powers.push(p);
            p = dst.mul(p, root);
        }
        Ok(Embedding {
            src_id: src.inner.id,
            dst: dst.clone(),
            powers,
        })
    }

    pub fn target(&self) -> &FieldCtx {
        &self.dst
    }

    pub fn apply(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.ctx != self.src_id {
            return Err(GfError::MismatchedContexts);
        }
        let mut acc = self.dst.zero();
        for (i, p) in self.powers.iter().enumerate() {
            if (a.bits >> i) & 1 == 1 {
                acc = self.dst.add(acc, *p);
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F2 as bitmasks (for modulus validation and the table).

fn poly_degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u128, b: u128) -> u128 {
    let db = poly_degree(b);
    while a != 0 && poly_degree(a) >= db {
        a ^= b << (poly_degree(a) - db);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: u128, mut b: u128, f: u128, s: u32) -> u128 {
    let mut acc: u128 = 0;
    let mut x = a;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= x;
        }
        b >>= 1;
        x <<= 1;
        if (x >> s) & 1 == 1 {
            x ^= f;
        }
    }
    acc
}

fn x_pow_pow2_mod(f: u128, s: u32, k: u32) -> u128 {
    let mut r: u128 = 2; // x
    for _ in 0..k {
        r = poly_mulmod(r, r, f, s);
    }
    r
}

/// Rabin irreducibility test over F2.
pub fn is_irreducible(f: u128, s: u32) -> bool {
    if poly_degree(f) != s as i32 {
        return false;
    }
    if s == 1 {
        return true;
    }
    if x_pow_pow2_mod(f, s, s) != 2 {
        return false;
    }
    let mut n = s;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    for p in primes {
        let h = x_pow_pow2_mod(f, s, s / p) ^ 2;
        if poly_gcd(f, h) != 1 {
            return false;
        }
    }
    true
}

/// Default modulus: table entry for s <= 16, else the lowest-weight,
/// lexicographically least irreducible trinomial/pentanomial of degree s.
pub fn default_modulus(s: u32) -> u128 {
    if s == 0 || s > MAX_DEGREE {
        return 0;
    }
    if s <= 16 {
        return MODULUS_TABLE[(s - 1) as usize] as u128;
    }
    search_modulus(s).expect("an irreducible tri/pentanomial exists for every degree <= 64")
}

fn search_modulus(s: u32) -> Option<u128> {
    if s == 1 {
        return Some(0b11);
    }
    for a in 1..s {
        let f = (1u128 << s) | (1u128 << a) | 1;
        if is_irreducible(f, s) {
            return Some(f);
        }
    }
    for c in 3..s {
        for b in 2..c {
            for a in 1..b {
                let f = (1u128 << s) | (1u128 << c) | (1u128 << b) | (1u128 << a) | 1;
                if is_irreducible(f, s) {
                    return Some(f);
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Root finding for embeddings: dense polynomials with FieldElement coeffs.

type Pol = Vec<FieldElement>;

fn pol_trim(p: &mut Pol) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn pol_mul(ctx: &FieldCtx, a: &Pol, b: &Pol) -> Pol {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(*ai, *bj));
        }
    }
    pol_trim(&mut out);
    out
}

fn pol_rem(ctx: &FieldCtx, a: &Pol, m: &Pol) -> Pol {
    let mut r = a.clone();
    pol_trim(&mut r);
    let lead = *m.last().expect("nonzero modulus");
    let lead_inv = ctx.inv(lead).expect("nonzero leading coefficient");
    while r.len() >= m.len() && !r.is_empty() {
        let shift = r.len() - m.len();
        let q = ctx.mul(*r.last().unwrap(), lead_inv);
        for (j, mj) in m.iter().enumerate() {
            r[shift + j] = ctx.add(r[shift + j], ctx.mul(q, *mj));
        }
        pol_trim(&mut r);
    }
    r
}

fn pol_gcd_fe(ctx: &FieldCtx, a: &Pol, b: &Pol) -> Pol {
    let mut a = a.clone();
    let mut b = b.clone();
    pol_trim(&mut a);
    pol_trim(&mut b);
    while !b.is_empty() {
        let r = pol_rem(ctx, &a, &b);
        a = b;
        b = r;
    }
    // make monic
    if let Some(&lead) = a.last() {
        let li = ctx.inv(lead).expect("nonzero");
        for c in a.iter_mut() {
            *c = ctx.mul(*c, li);
        }
    }
    a
}

/// Least-encoding root in `dst` of an irreducible degree-s polynomial over F2.
fn canonical_root_of(modulus: u128, s: u32, dst: &FieldCtx) -> Option<FieldElement> {
    // Lift the modulus to dst[X].
    let f: Pol = (0..=s)
        .map(|i| {
            if (modulus >> i) & 1 == 1 {
                dst.one()
            } else {
                dst.zero()
            }
        })
        .collect();
    let mut stack = vec![f];
    let mut roots: Vec<FieldElement> = Vec::new();
    let m = dst.degree();
    while let Some(fac) = stack.pop() {
        let deg = fac.len() - 1;
        if deg == 0 {
            continue;
        }
        if deg == 1 {
            // monic X + r: root is the constant term (char 2).
            let lead_inv = dst.inv(fac[1]).expect("nonzero");
            roots.push(dst.mul(fac[0], lead_inv));
            continue;
        }
        // Split with absolute trace of gamma*X for successive gamma.
        let mut split = None;
        for gbits in 1..(1u64 << m.min(20)) {
            let gamma = dst.el(gbits);
            // S = sum_{i<m} (gamma X)^(2^i) mod fac
            let mut u: Pol = vec![dst.zero(), gamma];
            let mut acc = u.clone();
            for _ in 1..m {
                u = pol_rem(dst, &pol_mul(dst, &u, &u), &fac);
                if acc.len() < u.len() {
                    acc.resize(u.len(), dst.zero());
                }
                for (i, c) in u.iter().enumerate() {
                    acc[i] = dst.add(acc[i], *c);
                }
                pol_trim(&mut acc);
            }
            let g = pol_gcd_fe(dst, &fac, &acc);
            if !g.is_empty() && g.len() - 1 > 0 && g.len() - 1 < deg {
                let mut quot_deg_poly = fac.clone();
                // divide fac by g exactly: compute quotient via repeated rem
                let q = pol_div_exact(dst, &mut quot_deg_poly, &g);
                stack.push(g);
                stack.push(q);
                split = Some(());
                break;
            }
        }
        split?;
    }
    roots.into_iter().min_by_key(|r| r.bits())
}

fn pol_div_exact(ctx: &FieldCtx, a: &mut Pol, d: &Pol) -> Pol {
    let mut q = vec![ctx.zero(); a.len().saturating_sub(d.len()) + 1];
    let lead_inv = ctx.inv(*d.last().unwrap()).expect("nonzero");
    while a.len() >= d.len() && !a.is_empty() {
        let shift = a.len() - d.len();
        let c = ctx.mul(*a.last().unwrap(), lead_inv);
        q[shift] = c;
        for (j, dj) in d.iter().enumerate() {
            a[shift + j] = ctx.add(a[shift + j], ctx.mul(c, *dj));
        }
        pol_trim(a);
    }
    debug_assert!(a.is_empty(), "division was not exact");
    pol_trim(&mut q);
    q
}
