//! Truncated Laurent series over a [`FieldCtx`].
//!
//! A series stores its valuation and a window of exactly-known coefficients.
//! Precision is tracked pessimistically per operation as an absolute
//! exponent bound: every coefficient with exponent below `prec` is exact.
//! Any decision that would have to look past the window raises
//! [`SeriesError::PrecisionExhausted`] instead of guessing, and results with
//! fewer than [`MIN_PRECISION`] meaningful coefficients are refused rather
//! than silently truncated.
//!
//! The zero series is an explicit value (empty window, infinite precision),
//! never an all-zero window; an empty window with finite precision means
//! "O(t^prec), nothing known below that".

use std::fmt;

use thiserror::Error;

use crate::gf::{FieldCtx, FieldElement, GfError, ProjectivePoint};

/// Fewest meaningful coefficients an operation may return.
pub const MIN_PRECISION: i64 = 4;

/// Precisions at or above this bound mean "exact to all orders".
pub const EXACT: i64 = i64::MAX / 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series precision exhausted")]
    PrecisionExhausted,
    #[error("inverse of the zero series")]
    ZeroInverse,
    #[error("composition argument must have valuation >= 1")]
    BadComposition,
    #[error("series reversion needs valuation exactly 1")]
    BadReversion,
    #[error("supplied constant is not a root of T^2 + T + g(0)")]
    BadRoot,
    #[error("series from a different field context")]
    MismatchedContexts,
    #[error(transparent)]
    Field(#[from] GfError),
}

fn sat(p: i64) -> i64 {
    p.clamp(-EXACT, EXACT)
}

fn sat_add(a: i64, b: i64) -> i64 {
    // Exact precision is absorbing: shifting or combining with an exact
    // bound cannot lose exactness.
    if a >= EXACT || b >= EXACT {
        return EXACT;
    }
    sat(a.saturating_add(b))
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    ctx: FieldCtx,
    /// Exponent of `coeffs[0]`; 0 when the window is empty.
    val: i64,
    /// Coefficients with exponent < prec are exactly known.
    prec: i64,
    /// Known-window coefficients, leading and trailing zeros trimmed;
    /// exponents in [val + len, prec) are implicitly zero.
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            if self.prec >= EXACT {
                return write!(f, "0");
            }
            return write!(f, "O(t^{})", self.prec);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.val + i as i64;
            match e {
                0 => write!(f, "{c}")?,
                1 if c.bits() == 1 => write!(f, "t")?,
                1 => write!(f, "{c}*t")?,
                _ if c.bits() == 1 => write!(f, "t^{e}")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        if self.prec < EXACT {
            write!(f, " + O(t^{})", self.prec)?;
        }
        Ok(())
    }
}

impl LaurentSeries {
    fn mk(ctx: &FieldCtx, mut val: i64, mut coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let prec = sat(prec);
        while coeffs.first().is_some_and(|c| c.is_zero()) {
            coeffs.remove(0);
            val += 1;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return LaurentSeries {
                ctx: ctx.clone(),
                val: 0,
                prec,
                coeffs,
            };
        }
        debug_assert!(val + coeffs.len() as i64 <= prec);
        LaurentSeries {
            ctx: ctx.clone(),
            val,
            prec,
            coeffs,
        }
    }

    /// The exact zero series.
    pub fn zero(ctx: &FieldCtx) -> Self {
        LaurentSeries {
            ctx: ctx.clone(),
            val: 0,
            prec: EXACT,
            coeffs: vec![],
        }
    }

    /// The exact monomial c * t^e (exact zero when c = 0).
    pub fn monomial(ctx: &FieldCtx, c: FieldElement, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero(ctx);
        }
        LaurentSeries {
            ctx: ctx.clone(),
            val: e,
            prec: EXACT,
            coeffs: vec![c],
        }
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElement) -> Self {
        Self::monomial(ctx, c, 0)
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 0)
    }

    /// The uniformizer t.
    pub fn uniformizer(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, ctx.one(), 1)
    }

    /// Exact series from (exponent, coefficient) terms.
    pub fn from_terms(ctx: &FieldCtx, terms: &[(i64, FieldElement)]) -> Self {
        let mut out = Self::zero(ctx);
        for (e, c) in terms {
            out = out
                .add(&Self::monomial(ctx, *c, *e))
                .expect("exact arithmetic");
        }
        out
    }

    /// A series about which nothing is known below t^prec.
    pub fn opaque(ctx: &FieldCtx, prec: i64) -> Self {
        LaurentSeries {
            ctx: ctx.clone(),
            val: 0,
            prec: sat(prec),
            coeffs: vec![],
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// True when every known coefficient is zero (exactly zero if also exact).
    pub fn is_zero_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation: `Some(v)` when a nonzero coefficient is known, `None` for
    /// the exact zero series; an all-zero finite window cannot decide.
    pub fn valuation(&self) -> Result<Option<i64>, SeriesError> {
        if !self.coeffs.is_empty() {
            return Ok(Some(self.val));
        }
        if self.prec >= EXACT {
            return Ok(None);
        }
        Err(SeriesError::PrecisionExhausted)
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.first().copied()
    }

    /// Coefficient of t^e; an error if e lies at or past the window edge.
    pub fn coeff(&self, e: i64) -> Result<FieldElement, SeriesError> {
        if e >= self.prec {
            return Err(SeriesError::PrecisionExhausted);
        }
        if self.coeffs.is_empty() || e < self.val {
            return Ok(self.ctx.zero());
        }
        let idx = (e - self.val) as usize;
        Ok(self
            .coeffs
            .get(idx)
            .copied()
            .unwrap_or_else(|| self.ctx.zero()))
    }

    /// Residue class of the series value: the constant term for valuation
    /// >= 0, infinity for a pole.
    pub fn residue(&self) -> Result<ProjectivePoint, SeriesError> {
        match self.valuation() {
            Ok(Some(v)) if v < 0 => Ok(ProjectivePoint::Infinity),
            Ok(Some(0)) => Ok(ProjectivePoint::Finite(self.coeffs[0])),
            Ok(Some(_)) => Ok(ProjectivePoint::Finite(self.ctx.zero())),
            Ok(None) => Ok(ProjectivePoint::Finite(self.ctx.zero())),
            Err(_) if self.prec > 0 => Ok(ProjectivePoint::Finite(self.ctx.zero())),
            Err(e) => Err(e),
        }
    }

    /// True when all coefficients below `upto` are known to vanish.
    pub fn vanishes_to(&self, upto: i64) -> bool {
        match (self.coeffs.is_empty(), self.prec >= EXACT) {
            (true, true) => true,
            (true, false) => self.prec >= upto,
            (false, _) => self.val >= upto,
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ctx.same_ctx(&other.ctx) {
            Ok(())
        } else {
            Err(SeriesError::MismatchedContexts)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ctx(other)?;
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return Ok(LaurentSeries {
                ctx: self.ctx.clone(),
                val: 0,
                prec: sat(prec),
                coeffs: vec![],
            });
        }
        let lo = match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (false, false) => self.val.min(other.val),
            (false, true) => self.val,
            (true, false) => other.val,
            (true, true) => unreachable!(),
        };
        if lo >= prec {
            return Ok(LaurentSeries {
                ctx: self.ctx.clone(),
                val: 0,
                prec: sat(prec),
                coeffs: vec![],
            });
        }
        let hi = prec.min(
            (self.val + self.coeffs.len() as i64).max(other.val + other.coeffs.len() as i64),
        );
        let mut out = Vec::with_capacity((hi - lo).max(0) as usize);
        for e in lo..hi {
            let a = if self.coeffs.is_empty() {
                self.ctx.zero()
            } else {
                self.coeff(e).unwrap_or_else(|_| self.ctx.zero())
            };
            let b = if other.coeffs.is_empty() {
                self.ctx.zero()
            } else {
                other.coeff(e).unwrap_or_else(|_| self.ctx.zero())
            };
            out.push(self.ctx.add(a, b));
        }
        Ok(Self::mk(&self.ctx, lo, out, prec))
    }

    /// Subtraction coincides with addition in characteristic 2.
    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(other)
    }

    pub fn scale(&self, c: FieldElement) -> Result<Self, SeriesError> {
        if c.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let coeffs = self.coeffs.iter().map(|a| self.ctx.mul(*a, c)).collect();
        Ok(Self::mk(&self.ctx, self.val, coeffs, self.prec))
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            ctx: self.ctx.clone(),
            val: if self.coeffs.is_empty() { 0 } else { self.val + k },
            prec: sat_add(self.prec, k),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Forget everything at or above exponent p.
    pub fn truncate(&self, p: i64) -> Self {
        let p = sat(p);
        if p >= self.prec {
            return self.clone();
        }
        let keep = ((p - self.val).max(0) as usize).min(self.coeffs.len());
        let coeffs: Vec<_> = self.coeffs[..keep].to_vec();
        Self::mk(&self.ctx, self.val, coeffs, p)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ctx(other)?;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            // exact zero absorbs everything; otherwise O(t^la) * O(t^lb)
            // with la, lb lower bounds on the factor valuations.
            if (self.coeffs.is_empty() && self.prec >= EXACT)
                || (other.coeffs.is_empty() && other.prec >= EXACT)
            {
                return Ok(Self::zero(&self.ctx));
            }
            let lo_a = if self.coeffs.is_empty() { self.prec } else { self.val };
            let lo_b = if other.coeffs.is_empty() { other.prec } else { other.val };
            return Ok(LaurentSeries {
                ctx: self.ctx.clone(),
                val: 0,
                prec: sat_add(lo_a, lo_b),
                coeffs: vec![],
            });
        }
        let val = self.val + other.val;
        let prec = sat_add(self.prec, other.val).min(sat_add(other.prec, self.val));
        let width = if prec >= EXACT {
            (self.coeffs.len() + other.coeffs.len() - 1) as i64
        } else {
            prec - val
        };
        let mut out = vec![self.ctx.zero(); width.max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if (k as i64) < width {
                    out[k] = self.ctx.add(out[k], self.ctx.mul(*a, *b));
                }
            }
        }
        Ok(Self::mk(&self.ctx, val, out, prec))
    }

    /// Multiplicative inverse to (at most) w meaningful coefficients.
    pub fn invert(&self, w: usize) -> Result<Self, SeriesError> {
        if self.coeffs.is_empty() {
            return Err(if self.prec >= EXACT {
                SeriesError::ZeroInverse
            } else {
                SeriesError::PrecisionExhausted
            });
        }
        let width = if self.prec >= EXACT {
            w as i64
        } else {
            (self.prec - self.val).min(w as i64)
        };
        if width < MIN_PRECISION {
            return Err(SeriesError::PrecisionExhausted);
        }
        let a0_inv = self.ctx.inv(self.coeffs[0])?;
        let mut b = Vec::with_capacity(width as usize);
        b.push(a0_inv);
        for n in 1..width as usize {
            let mut acc = self.ctx.zero();
            for i in 1..=n {
                let ai = self
                    .coeffs
                    .get(i)
                    .copied()
                    .unwrap_or_else(|| self.ctx.zero());
                if !ai.is_zero() {
                    acc = self.ctx.add(acc, self.ctx.mul(ai, b[n - i]));
                }
            }
            b.push(self.ctx.mul(a0_inv, acc));
        }
        Ok(Self::mk(&self.ctx, -self.val, b, -self.val + width))
    }

    /// Integer power; negative exponents go through `invert`.
    pub fn pow(&self, k: i64, w: usize) -> Result<Self, SeriesError> {
        if k == 0 {
            return Ok(Self::one(&self.ctx));
        }
        let base = if k < 0 { self.invert(w)? } else { self.clone() };
        let mut acc = base.clone();
        for _ in 1..k.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Substitute `inner` (valuation >= 1) for the variable.
    pub fn compose(&self, inner: &Self, w: usize) -> Result<Self, SeriesError> {
        self.check_ctx(inner)?;
        let Some(vt) = inner.valuation()?.filter(|v| *v >= 1) else {
            return Err(SeriesError::BadComposition);
        };
        if self.coeffs.is_empty() {
            if self.prec >= EXACT {
                return Ok(Self::zero(&self.ctx));
            }
            return Ok(Self::opaque(&self.ctx, self.prec.saturating_mul(vt)));
        }
        let top = if self.prec >= EXACT {
            self.val + self.coeffs.len() as i64
        } else {
            self.prec
        };
        // Regular part by Horner, highest exponent first.
        let mut res = Self::zero(&self.ctx);
        let lo_reg = self.val.max(0);
        if top > lo_reg {
            let mut e = top - 1;
            loop {
                res = res.mul(inner)?;
                res = res.add(&Self::constant(&self.ctx, self.coeff(e)?))?;
                if e == lo_reg {
                    break;
                }
                e -= 1;
            }
            res = res.mul(&inner.pow(lo_reg, w)?)?;
        }
        // Principal part via inverse powers.
        if self.val < 0 {
            let ti = inner.invert(w)?;
            let mut p = ti.clone();
            for e in 1..=(-self.val) {
                let c = self.coeff(-e)?;
                if !c.is_zero() {
                    res = res.add(&p.scale(c)?)?;
                }
                if e < -self.val {
                    p = p.mul(&ti)?;
                }
            }
        }
        if self.prec < EXACT {
            let cap = self.prec.saturating_mul(vt);
            if cap < res.prec {
                res = res.truncate(cap);
            }
        }
        Ok(res)
    }

    /// Formal derivative (characteristic 2: only odd exponents survive).
    pub fn derivative(&self) -> Self {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e.rem_euclid(2) == 1 && !c.is_zero() {
                terms.push((e - 1, *c));
            }
        }
        let out = Self::from_terms(&self.ctx, &terms);
        if self.prec >= EXACT {
            out
        } else {
            out.truncate(sat_add(self.prec, -1))
        }
    }

    /// Compositional inverse of a series with valuation exactly 1: returns H
    /// with self(H(s)) = s to (at most) w coefficients.
    pub fn inverse_composition(&self, w: usize) -> Result<Self, SeriesError> {
        let g = if self.prec >= EXACT {
            self.truncate(w as i64 + 2)
        } else {
            self.clone()
        };
        if g.valuation()? != Some(1) {
            return Err(SeriesError::BadReversion);
        }
        let g1 = g.coeff(1)?;
        let dg = g.derivative();
        let mut h = Self::monomial(&self.ctx, self.ctx.inv(g1)?, 1);
        let ident = Self::uniformizer(&self.ctx);
        for _ in 0..64 {
            let r = ident.sub(&g.compose(&h, w)?)?;
            if r.is_zero_window() {
                let mut out = h;
                if r.prec < out.prec {
                    out = out.truncate(r.prec);
                }
                return Ok(out);
            }
            let slope = dg.compose(&h, w)?.invert(w)?;
            h = h.add(&r.mul(&slope)?)?;
        }
        Err(SeriesError::PrecisionExhausted)
    }

    /// The unique y with y^2 + y = self and y(0) = theta, for a series of
    /// valuation >= 0 whose constant term equals theta^2 + theta.
    pub fn hensel_solve_as(
        &self,
        theta: FieldElement,
        w: usize,
    ) -> Result<Self, SeriesError> {
        let ctx = &self.ctx;
        if let Ok(Some(v)) = self.valuation() {
            if v < 0 {
                return Err(SeriesError::BadComposition);
            }
        }
        let c0 = self.coeff(0)?;
        let t2t = ctx.add(ctx.square(theta), theta);
        if t2t != c0 {
            return Err(SeriesError::BadRoot);
        }
        let mut g_tail = self.add(&Self::constant(ctx, c0))?;
        if g_tail.prec >= EXACT && !g_tail.coeffs.is_empty() {
            g_tail = g_tail.truncate(w as i64);
        }
        let mut e = Self::zero(ctx);
        for _ in 0..64 {
            let next = g_tail.add(&e.mul(&e)?)?;
            let diff = next.sub(&e)?;
            e = next;
            if diff.is_zero_window() {
                return Self::constant(ctx, theta).add(&e);
            }
        }
        Err(SeriesError::PrecisionExhausted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;

    fn k2() -> FieldCtx {
        FieldCtx::new(2).unwrap()
    }

    const W: usize = 32;

    #[test]
    fn monomial_inverse_round_trip() {
        let k = k2();
        let t = LaurentSeries::uniformizer(&k);
        let ti = t.invert(W).unwrap();
        assert_eq!(ti.valuation().unwrap(), Some(-1));
        let prod = t.mul(&ti).unwrap();
        assert_eq!(prod.coeff(0).unwrap(), k.one());
        assert!(prod.sub(&LaurentSeries::one(&k)).unwrap().is_zero_window());
        // valuation additivity on a pole squared
        let sq = ti.mul(&ti).unwrap();
        assert_eq!(sq.valuation().unwrap(), Some(-2));
    }

    #[test]
    fn one_plus_t_inverse() {
        let k = k2();
        let s = LaurentSeries::from_terms(&k, &[(0, k.one()), (1, k.one())]);
        let inv = s.invert(W).unwrap();
        let prod = s.mul(&inv).unwrap();
        // 1 + O(t^W)
        assert_eq!(prod.coeff(0).unwrap(), k.one());
        let tail = prod.sub(&LaurentSeries::one(&k)).unwrap();
        assert!(tail.vanishes_to(W as i64 - 1));
    }

    #[test]
    fn addition_cancels_to_opaque_window() {
        let k = k2();
        let a = LaurentSeries::from_terms(&k, &[(0, k.one()), (3, k.el(2))]).truncate(10);
        let sum = a.add(&a).unwrap();
        assert!(sum.is_zero_window());
        assert_eq!(sum.precision(), 10);
        assert!(sum.valuation().is_err());
        // exact polynomials cancel to the exact zero
        let b = LaurentSeries::from_terms(&k, &[(0, k.one())]);
        assert_eq!(b.add(&b).unwrap().valuation().unwrap(), None);
    }

    #[test]
    fn compose_examples() {
        let k = k2();
        let t = LaurentSeries::uniformizer(&k);
        let s2 = LaurentSeries::monomial(&k, k.one(), 2);
        let c = t.compose(&s2, W).unwrap();
        assert_eq!(c.valuation().unwrap(), Some(2));
        let tinv = t.invert(W).unwrap();
        let c = tinv.compose(&s2, W).unwrap();
        assert_eq!(c.valuation().unwrap(), Some(-2));
        // composing into something of valuation 0 is refused
        let unit = LaurentSeries::one(&k);
        assert_eq!(t.compose(&unit, W), Err(SeriesError::BadComposition));
    }

    #[test]
    fn reversion_round_trip() {
        let k = k2();
        // G = t + a t^2 + t^3 with a = alpha
        let g = LaurentSeries::from_terms(&k, &[(1, k.one()), (2, k.el(2)), (3, k.one())]);
        let h = g.inverse_composition(W).unwrap();
        let round = g.compose(&h, W).unwrap();
        let diff = round.sub(&LaurentSeries::uniformizer(&k)).unwrap();
        assert!(diff.vanishes_to(W as i64 - 2), "diff = {diff:?}");
        // and in the other order
        let round2 = h.compose(&g, W).unwrap();
        let diff2 = round2.sub(&LaurentSeries::uniformizer(&k)).unwrap();
        assert!(diff2.vanishes_to(W as i64 - 2), "diff2 = {diff2:?}");
    }

    #[test]
    fn reversion_linear_case() {
        let k = k2();
        let a = k.el(3);
        let g = LaurentSeries::monomial(&k, a, 1);
        let h = g.inverse_composition(W).unwrap();
        assert_eq!(h.coeff(1).unwrap(), k.inv(a).unwrap());
        let t = LaurentSeries::uniformizer(&k);
        let h_t = t.inverse_composition(W).unwrap();
        assert_eq!(h_t.coeff(1).unwrap(), k.one());
    }

    #[test]
    fn reversion_needs_valuation_one() {
        let k = k2();
        let g = LaurentSeries::monomial(&k, k.one(), 2);
        assert_eq!(g.inverse_composition(W), Err(SeriesError::BadReversion));
    }

    #[test]
    fn hensel_frobenius_telescope() {
        let k = k2();
        let t = LaurentSeries::uniformizer(&k);
        let y = t.hensel_solve_as(k.zero(), W).unwrap();
        // y = t + t^2 + t^4 + t^8 + ...
        for e in 1..W as i64 {
            let expect = if (e as u64).is_power_of_two() {
                k.one()
            } else {
                k.zero()
            };
            assert_eq!(y.coeff(e).unwrap(), expect, "coefficient of t^{e}");
        }
        // residual check
        let resid = y.mul(&y).unwrap().add(&y).unwrap().sub(&t).unwrap();
        assert!(resid.vanishes_to(W as i64 - 1));
    }

    #[test]
    fn hensel_zero_and_bad_root() {
        let k = k2();
        let z = LaurentSeries::zero(&k);
        let y = z.hensel_solve_as(k.zero(), W).unwrap();
        assert_eq!(y.valuation().unwrap(), None);
        let y1 = z.hensel_solve_as(k.one(), W).unwrap();
        assert_eq!(y1.coeff(0).unwrap(), k.one());
        assert_eq!(
            z.hensel_solve_as(k.el(2), W).err(),
            Some(SeriesError::BadRoot)
        );
    }

    #[test]
    fn hensel_random_root_property() {
        let k = FieldCtx::new(4).unwrap();
        let mut state = 7u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(13);
            state >> 48
        };
        for _ in 0..20 {
            let terms: Vec<(i64, FieldElement)> = (1..10)
                .map(|e| (e as i64, k.el(rnd() % 16)))
                .collect();
            let mut g = LaurentSeries::from_terms(&k, &terms);
            // pick a constant with trace 0 so a root exists
            let c0 = loop {
                let c = k.el(rnd() % 16);
                if k.trace(c) == 0 {
                    break c;
                }
            };
            g = g.add(&LaurentSeries::constant(&k, c0)).unwrap();
            let (theta, _) = k.solve_artin_schreier(c0).unwrap();
            let y = g.hensel_solve_as(theta, W).unwrap();
            let resid = y.mul(&y).unwrap().add(&y).unwrap().sub(&g).unwrap();
            assert!(resid.vanishes_to(W as i64 - 1), "resid = {resid:?}");
        }
    }

    #[test]
    fn min_precision_is_enforced() {
        let k = k2();
        let nearly_spent = LaurentSeries::from_terms(&k, &[(0, k.one()), (1, k.one())])
            .truncate(2);
        // inverting with only 2 meaningful coefficients is refused
        assert_eq!(nearly_spent.invert(W), Err(SeriesError::PrecisionExhausted));
    }

    #[test]
    fn residues() {
        let k = k2();
        let t = LaurentSeries::uniformizer(&k);
        assert_eq!(
            t.residue().unwrap(),
            ProjectivePoint::Finite(k.zero())
        );
        let c = LaurentSeries::from_terms(&k, &[(0, k.el(3)), (1, k.one())]);
        assert_eq!(c.residue().unwrap(), ProjectivePoint::Finite(k.el(3)));
        assert_eq!(
            t.invert(W).unwrap().residue().unwrap(),
            ProjectivePoint::Infinity
        );
    }
}
