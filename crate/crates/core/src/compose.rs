//! The ⋆ product of a shiftable Heffter space with a plain resolvable space,
//! and the constructions that feed it.
//!
//! For a shiftable `(v, k; r)` space `H` and a `(w, n; r)` space `S` on
//! `[0, w-1]`, `a ⋆ b = a + bv` for `a > 0` and `a - bv` for `a < 0`. Pairing
//! class `i` of `H` with class `i` of `S` and taking all `A ⋆ B` gives a
//! shiftable `(vw, kn; r)` Heffter space.

use crate::netbuild::heffter_net;
use crate::space::{Block, HeffterSpace, PlainSpace, MAX_V};
use crate::{Error, Result};

/// The shift unit `v` of the left operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarContext {
    v: i64,
}

impl StarContext {
    pub fn new(v: usize) -> Result<Self> {
        if v == 0 || v > MAX_V {
            return Err(Error::Parameter(format!(
                "shift unit must be in [1, 2^30], got {v}"
            )));
        }
        Ok(Self { v: v as i64 })
    }

    pub fn v(&self) -> i64 {
        self.v
    }
}

/// `a + bv` if `a > 0`, `a - bv` if `a < 0`.
pub fn star_elem(ctx: StarContext, a: i64, b: usize) -> Result<i64> {
    let shift = (b as i64)
        .checked_mul(ctx.v)
        .ok_or_else(|| Error::Parameter(format!("{b}·{} overflows", ctx.v)))?;
    match a.signum() {
        1 => Ok(a + shift),
        -1 => Ok(a - shift),
        _ => Err(Error::Parameter("0 is not a point of a half-set".into())),
    }
}

/// `{a ⋆ b : a ∈ A, b ∈ B}`.
pub fn star_block(ctx: StarContext, a: &Block, b: &[usize]) -> Result<Block> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a.elements() {
        for &y in b {
            out.push(star_elem(ctx, x, y)?);
        }
    }
    let expected = out.len();
    Block::new(out).map_err(|e| {
        Error::Internal(format!(
            "{a} ⋆ {b:?} does not have {expected} distinct points: {e}"
        ))
    })
}

/// Result of [`star_compose_traced`]: the product and how the plain space
/// was relabelled to `[0, w-1]`.
#[derive(Debug, Clone)]
pub struct Composition {
    pub space: HeffterSpace,
    /// `relabeling[i]` is the original label of point `i`.
    pub relabeling: Vec<String>,
}

/// Shiftable `(vw, kn; r)` Heffter space from a shiftable `(v, k; r)` Heffter
/// space and a `(w, n; r)` space.
pub fn star_compose(h: &HeffterSpace, s: &PlainSpace) -> Result<HeffterSpace> {
    star_compose_traced(h, s).map(|c| c.space)
}

/// [`star_compose`], also returning the relabelling applied to `s`.
pub fn star_compose_traced(h: &HeffterSpace, s: &PlainSpace) -> Result<Composition> {
    if h.r() != s.r() {
        return Err(Error::Parameter(format!(
            "degree mismatch: Heffter space has {} classes, plain space {}",
            h.r(),
            s.r()
        )));
    }
    h.validate(true).into_result()?;
    s.validate().into_result()?;
    let v = h.v();
    let w = s.w();
    let v_out = v
        .checked_mul(w)
        .filter(|&x| x <= MAX_V)
        .ok_or_else(|| Error::Parameter(format!("v·w = {v}·{w} exceeds 2^30")))?;
    let ctx = StarContext::new(v)?;
    // Points of `s` are stored in canonical label order, so block indices are
    // already the relabelled points.
    let classes = h
        .classes()
        .iter()
        .zip(s.index_classes())
        .map(|(hc, sc)| {
            let mut out = Vec::with_capacity(hc.blocks().len() * sc.len());
            for a in hc.blocks() {
                for b in sc {
                    out.push(star_block(ctx, a, b)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let space = HeffterSpace::new(v_out, h.k() * s.n(), classes, true)?;
    let report = space.validate(true);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "⋆ product failed validation:\n{report}"
        )));
    }
    Ok(Composition {
        space,
        relabeling: s.points().to_vec(),
    })
}

/// The unique `(v, 1; r)` space on `[0, v-1]`: singletons, `r` times.
pub fn trivial_space(v: usize, r: usize) -> Result<PlainSpace> {
    if v == 0 || r == 0 {
        return Err(Error::Parameter(format!(
            "trivial space needs v, r >= 1, got ({v}, {r})"
        )));
    }
    PlainSpace::from_indices(v, 1, vec![(0..v).map(|i| vec![i]).collect(); r])
}

/// A `(mn, n; 3)` space for `m >= n >= 1`.
///
/// Points are the cells `(i, c)` of an `n × m` grid, numbered `i·m + c`.
/// For `n = m` the classes are rows, columns, and the symbol classes of the
/// cyclic Latin square `c - i`. For `n < m` they are columns and the symbol
/// classes of the Latin rectangles `c - i` and `c - σ(i)` (mod `m`), with
/// `σ(i) = 2i mod m` for odd `m` and `2i mod (m-1)` for even `m`; both `σ`
/// and `i ↦ σ(i) - i` are injective on the rows used.
pub fn plain_space_3(m: usize, n: usize) -> Result<PlainSpace> {
    if n == 0 || m < n {
        return Err(Error::Parameter(format!(
            "need m >= n >= 1, got m = {m}, n = {n}"
        )));
    }
    let point = |i: usize, c: usize| i * m + c;
    let columns: Vec<Vec<usize>> = (0..m)
        .map(|c| (0..n).map(|i| point(i, c)).collect())
        .collect();
    let symbol_classes = |shift: &dyn Fn(usize) -> usize| -> Vec<Vec<usize>> {
        (0..m)
            .map(|s| (0..n).map(|i| point(i, (s + shift(i)) % m)).collect())
            .collect()
    };
    let classes = if n == m {
        let rows = (0..n)
            .map(|i| (0..m).map(|c| point(i, c)).collect())
            .collect();
        vec![rows, columns, symbol_classes(&|i| i)]
    } else {
        let modulus = if m % 2 == 1 { m } else { m - 1 };
        let sigma = move |i: usize| (2 * i) % modulus;
        vec![columns, symbol_classes(&|i| i), symbol_classes(&sigma)]
    };
    let space = PlainSpace::from_indices(m * n, n, classes)?;
    let report = space.validate();
    if !report.passed() {
        return Err(Error::Internal(format!(
            "({}, {n}; 3) space failed validation:\n{report}",
            m * n
        )));
    }
    Ok(space)
}

/// Shiftable `(16ℓ²mn, 4ℓn; 3)` Heffter space: the order-`4ℓ` net composed
/// with the `(mn, n; 3)` space.
pub fn pipeline_space(l: usize, m: usize, n: usize) -> Result<HeffterSpace> {
    if l == 0 {
        return Err(Error::Parameter("ℓ must be positive".into()));
    }
    if n == 0 || m < n {
        return Err(Error::Parameter(format!(
            "need m >= n >= 1, got m = {m}, n = {n}"
        )));
    }
    let order = 4 * l;
    let v = (order as u128).pow(2) * m as u128 * n as u128;
    if v > MAX_V as u128 {
        return Err(Error::Parameter(format!("16ℓ²mn = {v} exceeds 2^30")));
    }
    let net = heffter_net(order)?;
    let plain = plain_space_3(m, n)?;
    star_compose(&net, &plain).map_err(|e| match e {
        Error::Parameter(_) => e,
        other => Error::Internal(other.to_string()),
    })
}
