//! Exact arithmetic in the tower quotient field
//! F2(x)[y, z] / (y^2 + y + f(x), z^2 + z + f(y)) and the catalog of
//! closed-form identities it verifies mechanically.
//!
//! Coefficients live in F2(x): dense F2[x] polynomials as bitmasks, reduced
//! fractions. The quotient is a field; elements are coordinate vectors over
//! the basis {1, y, z, yz}, with f(y) rewritten in-basis through
//! y^2 + y + 1 = (x+1)^2 / (x^2+x+1).

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error(transparent)]
    Field(#[from] GfError),
}

// ---------------------------------------------------------------------------
// Dense polynomials over F2, one bit per coefficient.

/// Polynomial over F2, bit i = coefficient of x^i. Degree must stay < 128.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Poly2(pub u128);

impl Poly2 {
    pub const ZERO: Poly2 = Poly2(0);
    pub const ONE: Poly2 = Poly2(1);
    pub const X: Poly2 = Poly2(2);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn degree(self) -> i32 {
        127 - self.0.leading_zeros() as i32
    }

    pub fn add(self, rhs: Poly2) -> Poly2 {
        Poly2(self.0 ^ rhs.0)
    }

    pub fn mul(self, rhs: Poly2) -> Poly2 {
        if self.is_zero() || rhs.is_zero() {
            return Poly2::ZERO;
        }
        assert!(
            self.degree() + rhs.degree() < 128,
            "polynomial degree overflow"
        );
        let mut acc: u128 = 0;
        let mut a = self.0;
        let mut b = rhs.0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            a <<= 1;
            b >>= 1;
        }
        Poly2(acc)
    }

    pub fn divmod(self, d: Poly2) -> (Poly2, Poly2) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree();
        let mut r = self.0;
        let mut q: u128 = 0;
        while r != 0 && Poly2(r).degree() >= dd {
            let shift = (Poly2(r).degree() - dd) as u32;
            q |= 1u128 << shift;
            r ^= d.0 << shift;
        }
        (Poly2(q), Poly2(r))
    }

    pub fn gcd(self, other: Poly2) -> Poly2 {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let (_, r) = a.divmod(b);
            a = b;
            b = r;
        }
        a
    }

    /// Evaluate at a field element (coefficients are 0/1).
    pub fn eval(self, ctx: &FieldCtx, x: FieldElement) -> FieldElement {
        let mut acc = ctx.zero();
        let deg = self.degree();
        if deg < 0 {
            return acc;
        }
        for i in (0..=deg).rev() {
            acc = ctx.mul(acc, x);
            if (self.0 >> i) & 1 == 1 {
                acc = ctx.add(acc, ctx.one());
            }
        }
        acc
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..=self.degree()).rev() {
            if (self.0 >> i) & 1 == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Rational functions over F2: gcd-reduced fractions of Poly2.

/// Reduced fraction of F2[x] polynomials; every nonzero F2 polynomial is
/// monic, so gcd reduction alone gives the canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly2,
    den: Poly2,
}

impl RatFn {
    pub const ZERO: RatFn = RatFn {
        num: Poly2::ZERO,
        den: Poly2::ONE,
    };
    pub const ONE: RatFn = RatFn {
        num: Poly2::ONE,
        den: Poly2::ONE,
    };

    pub fn new(num: Poly2, den: Poly2) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn::ZERO;
        }
        let g = num.gcd(den);
        RatFn {
            num: num.divmod(g).0,
            den: den.divmod(g).0,
        }
    }

    pub fn from_poly(p: Poly2) -> RatFn {
        RatFn {
            num: p,
            den: Poly2::ONE,
        }
    }

    pub fn x() -> RatFn {
        RatFn::from_poly(Poly2::X)
    }

    pub fn is_zero(self) -> bool {
        self.num.is_zero()
    }

    pub fn add(self, rhs: RatFn) -> RatFn {
        RatFn::new(
            self.num.mul(rhs.den).add(rhs.num.mul(self.den)),
            self.den.mul(rhs.den),
        )
    }

    pub fn mul(self, rhs: RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::ZERO;
        }
        // cross-reduce first to keep intermediate degrees down
        let a = RatFn::new(self.num, rhs.den);
        let b = RatFn::new(rhs.num, self.den);
        RatFn {
            num: a.num.mul(b.num),
            den: a.den.mul(b.den),
        }
    }

    pub fn inv(self) -> Result<RatFn, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::ZeroInverse);
        }
        Ok(RatFn {
            num: self.den,
            den: self.num,
        })
    }

    pub fn eval(self, ctx: &FieldCtx, x: FieldElement) -> Result<FieldElement, SymbolicError> {
        let d = self.den.eval(ctx, x);
        if d.is_zero() {
            return Err(SymbolicError::PoleAtPoint);
        }
        Ok(ctx.mul(self.num.eval(ctx, x), ctx.inv(d)?))
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly2::ONE {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

// ---------------------------------------------------------------------------
// The degree-4 quotient ring over F2(x).

/// f(x) = x / (x^2 + x + 1) as a rational function.
pub fn rel_f() -> RatFn {
    RatFn::new(Poly2::X, Poly2(0b111))
}

/// (x^2+x+1) / (x+1)^2; satisfies f(y) = y * rel_c() in the quotient.
pub fn rel_c() -> RatFn {
    RatFn::new(Poly2(0b111), Poly2(0b11).mul(Poly2(0b11)))
}

/// Element of F2(x)[y, z]/(y^2+y+f(x), z^2+z+f(y)) in coordinates over
/// the basis {1, y, z, yz}.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct TowerElem {
    pub c: [RatFn; 4],
}

const B_ONE: usize = 0;
const B_Y: usize = 1;
const B_Z: usize = 2;
const B_YZ: usize = 3;

impl TowerElem {
    pub fn zero() -> TowerElem {
        TowerElem {
            c: [RatFn::ZERO; 4],
        }
    }

    pub fn scalar(a: RatFn) -> TowerElem {
        let mut e = Self::zero();
        e.c[B_ONE] = a;
        e
    }

    pub fn one() -> TowerElem {
        Self::scalar(RatFn::ONE)
    }

    pub fn x() -> TowerElem {
        Self::scalar(RatFn::x())
    }

    pub fn y() -> TowerElem {
        let mut e = Self::zero();
        e.c[B_Y] = RatFn::ONE;
        e
    }

    pub fn z() -> TowerElem {
        let mut e = Self::zero();
        e.c[B_Z] = RatFn::ONE;
        e
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    pub fn add(&self, rhs: &TowerElem) -> TowerElem {
        let mut out = Self::zero();
        for i in 0..4 {
            out.c[i] = self.c[i].add(rhs.c[i]);
        }
        out
    }

    pub fn scale(&self, a: RatFn) -> TowerElem {
        let mut out = Self::zero();
        for i in 0..4 {
            out.c[i] = self.c[i].mul(a);
        }
        out
    }

    /// Product of two basis monomials, reduced to the basis via
    /// y^2 = y + f and z^2 = z + c*y.
    fn mono_mul(i: usize, j: usize) -> TowerElem {
        let f = rel_f();
        let c = rel_c();
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        match (lo, hi) {
            (B_ONE, k) => {
                let mut e = TowerElem::zero();
                e.c[k] = RatFn::ONE;
                e
            }
            (B_Y, B_Y) => {
                // y^2 = y + f
                let mut e = TowerElem::scalar(f);
                e.c[B_Y] = RatFn::ONE;
                e
            }
            (B_Y, B_Z) => {
                let mut e = TowerElem::zero();
                e.c[B_YZ] = RatFn::ONE;
                e
            }
            (B_Y, B_YZ) => {
                // y^2 z = (y + f) z = yz + f z
                let mut e = TowerElem::zero();
                e.c[B_YZ] = RatFn::ONE;
                e.c[B_Z] = f;
                e
            }
            (B_Z, B_Z) => {
                // z^2 = z + c y
                let mut e = TowerElem::zero();
                e.c[B_Z] = RatFn::ONE;
                e.c[B_Y] = c;
                e
            }
            (B_Z, B_YZ) => {
                // y z^2 = y(z + c y) = yz + c(y + f)
                let mut e = TowerElem::zero();
                e.c[B_YZ] = RatFn::ONE;
                e.c[B_Y] = c;
                e.c[B_ONE] = c.mul(f);
                e
            }
            (B_YZ, B_YZ) => {
                // y^2 z^2 = (y+f)(z+cy) = cf + (c + cf) y + f z + yz
                let cf = c.mul(f);
                let mut e = TowerElem::zero();
                e.c[B_ONE] = cf;
                e.c[B_Y] = c.add(cf);
                e.c[B_Z] = f;
                e.c[B_YZ] = RatFn::ONE;
                e
            }
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, rhs: &TowerElem) -> TowerElem {
        let mut out = Self::zero();
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if rhs.c[j].is_zero() {
                    continue;
                }
                let m = Self::mono_mul(i, j).scale(self.c[i].mul(rhs.c[j]));
                out = out.add(&m);
            }
        }
        out
    }

    /// Field inverse: solve the 4x4 linear system (mul-by-self) b = 1 over
    /// F2(x). The quotient is a field, so a nonzero element that fails to
    /// invert means a broken reduction table, not a user error.
    pub fn inv(&self) -> Result<TowerElem, SymbolicError> {
        if self.is_zero() {
            return Err(SymbolicError::ZeroInverse);
        }
        // column j of the matrix = self * basis_j
        let mut m = [[RatFn::ZERO; 4]; 4];
        for j in 0..4 {
            let mut basis = TowerElem::zero();
            basis.c[j] = RatFn::ONE;
            let col = self.mul(&basis);
            for (r, row) in m.iter_mut().enumerate() {
                row[j] = col.c[r];
            }
        }
        let mut rhs = [RatFn::ZERO; 4];
        rhs[B_ONE] = RatFn::ONE;
        // Gaussian elimination with exact rational entries.
        let mut piv_of_col = [usize::MAX; 4];
        let mut used = [false; 4];
        for col in 0..4 {
            let Some(p) = (0..4).find(|&r| !used[r] && !m[r][col].is_zero()) else {
                continue;
            };
            used[p] = true;
            piv_of_col[col] = p;
            let inv_p = m[p][col].inv()?;
            for k in 0..4 {
                m[p][k] = m[p][k].mul(inv_p);
            }
            rhs[p] = rhs[p].mul(inv_p);
            for r in 0..4 {
                if r != p && !m[r][col].is_zero() {
                    let factor = m[r][col];
                    for k in 0..4 {
                        m[r][k] = m[r][k].add(factor.mul(m[p][k]));
                    }
                    rhs[r] = rhs[r].add(factor.mul(rhs[p]));
                }
            }
        }
        let mut out = TowerElem::zero();
        for col in 0..4 {
            let p = piv_of_col[col];
            assert!(p != usize::MAX, "singular multiplication matrix in a field");
            out.c[col] = rhs[p];
        }
        debug_assert!(self.mul(&out) == TowerElem::one());
        Ok(out)
    }

    /// Numeric evaluation at a point (x, y, z) satisfying the relations.
    pub fn eval(
        &self,
        ctx: &FieldCtx,
        x: FieldElement,
        y: FieldElement,
        z: FieldElement,
    ) -> Result<FieldElement, SymbolicError> {
        let yz = ctx.mul(y, z);
        let vals = [ctx.one(), y, z, yz];
        let mut acc = ctx.zero();
        for (coef, base) in self.c.iter().zip(vals) {
            if !coef.is_zero() {
                acc = ctx.add(acc, ctx.mul(coef.eval(ctx, x)?, base));
            }
        }
        Ok(acc)
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["1", "y", "z", "yz"];
        let mut first = true;
        for (c, n) in self.c.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{c:?}]*{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Identity catalog.

/// The fixed catalog of closed-form identities verified in the quotient ring.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Identity {
    /// f(y) + ((y+1)/(x+1))^2 + (y+1)/(x+1) = y + 1/(x^2+x+1) + 1/(x+1)
    FyShift,
    /// y^2 f(y) = 1 + y + 1/(y^2+y+1)
    YSquaredFy,
    /// 1/(y^2+y+1) + 1/(x+1)^2 + 1/(x+1) = 1
    UnitPartition,
    /// z + (y d)^2 + y d = z (x+1)^2/(x^2+x+1) + y + (x+1)^2/(x^2+x+1)^2
    /// + (x+1)/(x^2+x+1), with d = z + (y+1)/(x+1)
    DeltaConjugation,
    /// d^2 + d = y + 1/(x^2+x+1) + 1/(x+1)
    DeltaEquation,
}

pub const IDENTITIES: [Identity; 5] = [
    Identity::FyShift,
    Identity::YSquaredFy,
    Identity::UnitPartition,
    Identity::DeltaConjugation,
    Identity::DeltaEquation,
];

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Identity::FyShift => "fy-shift",
            Identity::YSquaredFy => "y2-fy",
            Identity::UnitPartition => "unit-partition",
            Identity::DeltaConjugation => "delta-conjugate",
            Identity::DeltaEquation => "delta-square",
        }
    }

    pub fn by_name(name: &str) -> Option<Identity> {
        IDENTITIES.into_iter().find(|i| i.name() == name)
    }

    /// Both sides of the identity as exact ring elements.
    pub fn sides(&self) -> (TowerElem, TowerElem) {
        let h = RatFn::from_poly(Poly2(0b111)); // x^2+x+1
        let xp1 = RatFn::from_poly(Poly2(0b11)); // x+1
        let inv_h = h.inv().expect("nonzero");
        let inv_xp1 = xp1.inv().expect("nonzero");
        let y = TowerElem::y();
        let z = TowerElem::z();
        let one = TowerElem::one();
        // f(y) = y * (x^2+x+1)/(x+1)^2, the in-basis rewrite
        let fy = y.scale(rel_c());
        match self {
            Identity::FyShift => {
                // u = (y+1)/(x+1)
                let u = y.add(&one).scale(inv_xp1);
                let lhs = fy.add(&u.mul(&u)).add(&u);
                let rhs = y
                    .add(&TowerElem::scalar(inv_h))
                    .add(&TowerElem::scalar(inv_xp1));
                (lhs, rhs)
            }
            Identity::YSquaredFy => {
                let lhs = y.mul(&y).mul(&fy);
                // 1/(y^2+y+1) computed with genuine ring inversion
                let y2y1 = y.mul(&y).add(&y).add(&one);
                let rhs = one.add(&y).add(&y2y1.inv().expect("unit"));
                (lhs, rhs)
            }
            Identity::UnitPartition => {
                let y2y1 = y.mul(&y).add(&y).add(&one);
                let lhs = y2y1
                    .inv()
                    .expect("unit")
                    .add(&TowerElem::scalar(inv_xp1.mul(inv_xp1)))
                    .add(&TowerElem::scalar(inv_xp1));
                (lhs, one)
            }
            Identity::DeltaConjugation => {
                let d = z.add(&y.add(&one).scale(inv_xp1));
                let yd = y.mul(&d);
                let lhs = z.add(&yd.mul(&yd)).add(&yd);
                let w = xp1.mul(xp1).mul(inv_h); // (x+1)^2/(x^2+x+1)
                let rhs = z
                    .scale(w)
                    .add(&y)
                    .add(&TowerElem::scalar(w.mul(inv_h)))
                    .add(&TowerElem::scalar(xp1.mul(inv_h)));
                (lhs, rhs)
            }
            Identity::DeltaEquation => {
                let d = z.add(&y.add(&one).scale(inv_xp1));
                let lhs = d.mul(&d).add(&d);
                let rhs = y
                    .add(&TowerElem::scalar(inv_h))
                    .add(&TowerElem::scalar(inv_xp1));
                (lhs, rhs)
            }
        }
    }
}

/// Exact verification of a catalog identity.
pub fn verify_identity(id: Identity) -> bool {
    let (lhs, rhs) = id.sides();
    lhs == rhs
}

/// Mutation control: the same identity with 1 added to the right side must
/// fail.
pub fn verify_mutated(id: Identity) -> bool {
    let (lhs, rhs) = id.sides();
    lhs == rhs.add(&TowerElem::one())
}

/// Outcome of the whole catalog, in fixed order:
/// (identity, holds, mutated-holds).
pub fn run_catalog() -> Vec<(Identity, bool, bool)> {
    IDENTITIES
        .into_iter()
        .map(|id| (id, verify_identity(id), verify_mutated(id)))
        .collect()
}

/// Numeric cross-validation: sample x = beta in the given field, lift y and
/// z through the defining equations, and compare both sides of every
/// identity as field elements. Returns the number of sampled (x,y,z) points.
pub fn numeric_crosscheck(
    ctx: &FieldCtx,
    seed: u64,
    trials: usize,
) -> Result<usize, SymbolicError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < trials && attempts < trials * 200 {
        attempts += 1;
        let beta = ctx.el(rng.gen_range(0..ctx.order()));
        if ctx.h_eval(beta).is_zero() || beta == ctx.one() {
            continue; // x = 1 puts a pole of 1/(x+1) under several identities
        }
        let fx = ctx.f_map(beta)?;
        let Some((y0, y1)) = ctx.solve_artin_schreier(fx) else {
            continue;
        };
        for y in [y0, y1] {
            if ctx.h_eval(y).is_zero() {
                continue;
            }
            let fy = ctx.f_map(y)?;
            let Some((z0, z1)) = ctx.solve_artin_schreier(fy) else {
                continue;
            };
            for z in [z0, z1] {
                for id in IDENTITIES {
                    let (lhs, rhs) = id.sides();
                    let l = lhs.eval(ctx, beta, y, z)?;
                    let r = rhs.eval(ctx, beta, y, z)?;
                    assert_eq!(
                        l == r,
                        verify_identity(id),
                        "numeric and symbolic verdicts disagree for {}",
                        id.name()
                    );
                }
                done += 1;
            }
        }
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratfn_reduction_is_canonical() {
        // (x^2+x) / (x+1) = x
        let r = RatFn::new(Poly2(0b110), Poly2(0b11));
        assert_eq!(r, RatFn::x());
        let sum = r.add(r);
        assert!(sum.is_zero());
    }

    #[test]
    fn y_squared_reduces_to_y_plus_f() {
        let y = TowerElem::y();
        let sq = y.mul(&y);
        let mut expect = TowerElem::scalar(rel_f());
        expect.c[1] = RatFn::ONE;
        assert_eq!(sq, expect);
    }

    #[test]
    fn z_squared_reduces_to_z_plus_fy() {
        let z = TowerElem::z();
        let sq = z.mul(&z);
        let mut expect = TowerElem::zero();
        expect.c[2] = RatFn::ONE;
        expect.c[1] = rel_c();
        assert_eq!(sq, expect);
    }

    #[test]
    fn ring_inverse_round_trip_random() {
        let mut state = 0xabcdef12345u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(99);
            (state >> 40) as u128
        };
        let mut tried = 0;
        while tried < 20 {
            let mut a = TowerElem::zero();
            for i in 0..4 {
                a.c[i] = RatFn::new(Poly2(rnd() & 0xF), Poly2((rnd() & 0x7) | 1));
            }
            if a.is_zero() {
                continue;
            }
            tried += 1;
            let b = a.inv().unwrap();
            assert_eq!(a.mul(&b), TowerElem::one());
        }
        assert_eq!(TowerElem::zero().inv(), Err(SymbolicError::ZeroInverse));
    }

    #[test]
    fn catalog_verifies_and_mutations_fail() {
        for id in IDENTITIES {
            assert!(verify_identity(id), "{} should hold", id.name());
            assert!(!verify_mutated(id), "{} mutation should fail", id.name());
        }
    }

    #[test]
    fn numeric_crosscheck_agrees() {
        let ctx = FieldCtx::new(10).unwrap();
        let n = numeric_crosscheck(&ctx, 0, 25).unwrap();
        assert!(n >= 25, "only {n} evaluation points reached");
    }

    #[test]
    fn unknown_identity_name() {
        assert_eq!(Identity::by_name("fy-shift"), Some(Identity::FyShift));
        assert_eq!(Identity::by_name("nope"), None);
    }
}
