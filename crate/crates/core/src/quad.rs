//! The quadratic space `C⊥/C` of a doubly even code containing the all-one
//! vector, its isometries, orthogonal groups and double cosets.
//!
//! Vectors of a `k`-dimensional space are `u32` masks over the chosen
//! basis. An [`Isometry`] stores the images of the basis vectors.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::Coordinatizer;
use crate::perm::{PermGroup, Permutation};

pub const MAX_QUOTIENT_DIM: usize = 32;
/// Largest dimension for which exhaustive checks over all `2^k` vectors run.
pub const EXHAUSTIVE_DIM: usize = 24;
/// Largest dimension for which orthogonal groups are built as permutation
/// groups on nonzero vectors.
pub const GROUP_DIM: usize = 10;
pub const DEFAULT_COSET_BUDGET: u64 = 100_000_000;

#[inline]
fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormType {
    Plus,
    Minus,
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::Plus => "plus",
            FormType::Minus => "minus",
        })
    }
}

/// A quadratic form `q` on `GF(2)^k` with polar form `b`, optionally
/// realized as `C⊥/C` with `q(x + C) = wt(x)/2 mod 2`.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    k: usize,
    q_values: Vec<u8>,
    bilinear: Vec<u32>,
    code: Option<LinearCode>,
    reps: Vec<u64>,
    solver: Option<Coordinatizer>,
}

impl QuotientSpace {
    /// `C⊥/C` for a doubly even code containing `1`.
    pub fn of_code(code: &LinearCode) -> Result<Self> {
        if !code.is_doubly_even() {
            return Err(Error::pre("quotient space needs a doubly even code"));
        }
        if !code.contains_all_ones() {
            return Err(Error::pre("quotient space needs the all-one vector in the code"));
        }
        let dual = code.dual();
        let mut span_rows: Vec<u64> = code.rows().to_vec();
        let mut reps = Vec::new();
        for &d in dual.rows() {
            let mut probe = span_rows.clone();
            probe.push(d);
            let before = span_rows.len();
            let mut r = probe.clone();
            let piv = crate::gf2::rref_words(&mut r, code.n());
            if piv.len() > before {
                reps.push(d);
                span_rows = r;
            }
        }
        let k = reps.len();
        if k > MAX_QUOTIENT_DIM {
            return Err(Error::pre("quotient space dimension exceeds 32"));
        }
        let q_values = reps.iter().map(|r| ((r.count_ones() / 2) & 1) as u8).collect();
        let bilinear = reps
            .iter()
            .map(|&x| {
                reps.iter()
                    .enumerate()
                    .fold(0u32, |m, (j, &y)| m | ((((x & y).count_ones() & 1)) << j))
            })
            .collect();
        let mut basis = reps.clone();
        basis.extend_from_slice(code.rows());
        Ok(QuotientSpace {
            k,
            q_values,
            bilinear,
            code: Some(code.clone()),
            reps,
            solver: Some(Coordinatizer::new(&basis)),
        })
    }

    /// An abstract form given by `q` on the basis and the Gram matrix of `b`.
    pub fn from_form(q_values: Vec<u8>, bilinear: Vec<u32>) -> Result<Self> {
        let k = q_values.len();
        if k > MAX_QUOTIENT_DIM || bilinear.len() != k {
            return Err(Error::pre("form size mismatch"));
        }
        for i in 0..k {
            if bilinear[i] >> i & 1 == 1 {
                return Err(Error::pre("polar form must be alternating"));
            }
            for j in 0..k {
                if (bilinear[i] >> j & 1) != (bilinear[j] >> i & 1) {
                    return Err(Error::pre("polar form must be symmetric"));
                }
            }
        }
        Ok(QuotientSpace {
            k,
            q_values: q_values.into_iter().map(|x| x & 1).collect(),
            bilinear,
            code: None,
            reps: Vec::new(),
            solver: None,
        })
    }

    /// The standard form of dimension `k` and given type.
    pub fn standard(k: usize, ty: FormType) -> Result<Self> {
        if k % 2 == 1 || (k == 0 && ty == FormType::Minus) {
            return Err(Error::pre("no such standard form"));
        }
        let mut q = vec![0u8; k];
        let mut b = vec![0u32; k];
        for p in 0..k / 2 {
            b[2 * p] = 1 << (2 * p + 1);
            b[2 * p + 1] = 1 << (2 * p);
        }
        if ty == FormType::Minus {
            q[k - 2] = 1;
            q[k - 1] = 1;
        }
        Self::from_form(q, b)
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn code(&self) -> Option<&LinearCode> {
        self.code.as_ref()
    }

    /// Coset representatives (words of length n) for the basis.
    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    pub fn q_values(&self) -> &[u8] {
        &self.q_values
    }

    pub fn bilinear(&self) -> &[u32] {
        &self.bilinear
    }

    pub fn q(&self, v: u32) -> u8 {
        let qmask = self.q_values.iter().enumerate().fold(0u32, |m, (i, &x)| m | ((x as u32) << i));
        let mut acc = parity(v & qmask);
        let mut rest = v;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            acc ^= parity(rest & self.bilinear[i as usize]);
        }
        acc
    }

    pub fn b(&self, u: u32, v: u32) -> u8 {
        let mut acc = 0;
        let mut rest = u;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            acc ^= parity(v & self.bilinear[i as usize]);
        }
        acc
    }

    /// A word of `C⊥` in the coset `v`.
    pub fn lift(&self, v: u32) -> u64 {
        self.reps
            .iter()
            .enumerate()
            .filter(|(i, _)| v >> i & 1 == 1)
            .fold(0, |a, (_, &r)| a ^ r)
    }

    /// Coordinates of the coset `x + C` for `x ∈ C⊥`.
    pub fn coords(&self, x: u64) -> Option<u32> {
        let mask = self.solver.as_ref()?.solve(x)?;
        Some((mask & ((1u64 << self.k) - 1)) as u32)
    }

    pub fn is_nondegenerate(&self) -> bool {
        let mut rows: Vec<u64> = self.bilinear.iter().map(|&r| r as u64).collect();
        crate::gf2::rref_words(&mut rows, self.k.max(1)).len() == self.k
    }

    fn check_exhaustive(&self) -> Result<()> {
        if self.k > EXHAUSTIVE_DIM {
            return Err(Error::Budget {
                what: "exhaustive scan of the quadratic space".into(),
                limit: 1 << EXHAUSTIVE_DIM,
            });
        }
        Ok(())
    }

    /// Number of vectors (including 0) with `q = 0`.
    pub fn zero_count(&self) -> Result<u64> {
        self.check_exhaustive()?;
        Ok((0..1u64 << self.k).filter(|&v| self.q(v as u32) == 0).count() as u64)
    }

    /// Type decided by counting zeros of `q`.
    pub fn type_by_count(&self) -> Result<FormType> {
        if self.k % 2 == 1 || !self.is_nondegenerate() {
            return Err(Error::pre("form is degenerate or of odd dimension"));
        }
        let z = self.zero_count()?;
        let plus = (1u64 << self.k.saturating_sub(1)) + if self.k == 0 { 0 } else { 1u64 << (self.k / 2 - 1) };
        Ok(if self.k == 0 || z == plus {
            FormType::Plus
        } else {
            FormType::Minus
        })
    }

    pub fn is_isometry(&self, target: &QuotientSpace, f: &Isometry) -> Result<bool> {
        if f.dim() != self.k || target.k != self.k {
            return Ok(false);
        }
        self.check_exhaustive()?;
        if !f.is_invertible() {
            return Ok(false);
        }
        Ok((0..1u64 << self.k).all(|v| target.q(f.apply(v as u32)) == self.q(v as u32)))
    }
}

/// A linear map `GF(2)^k → GF(2)^k`; `rows[i]` is the image of basis vector `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    rows: Vec<u32>,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry{:?}", self.rows)
    }
}

impl fmt::Display for Isometry {
    /// `k` lines of `k` bits, row `i` being the image of basis vector `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.rows.len();
        for r in &self.rows {
            let s: String = (0..k).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Isometry {
    pub fn identity(k: usize) -> Self {
        Isometry {
            rows: (0..k).map(|i| 1u32 << i).collect(),
        }
    }

    pub fn from_rows(rows: Vec<u32>) -> Self {
        Isometry { rows }
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, v: u32) -> u32 {
        let mut out = 0;
        let mut rest = v;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            out ^= self.rows[i as usize];
        }
        out
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Isometry) -> Isometry {
        Isometry {
            rows: self.rows.iter().map(|&r| other.apply(r)).collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        let mut rows: Vec<u64> = self.rows.iter().map(|&r| r as u64).collect();
        crate::gf2::rref_words(&mut rows, self.dim().max(1)).len() == self.dim()
    }

    pub fn inverse(&self) -> Option<Isometry> {
        let k = self.dim();
        if !self.is_invertible() {
            return None;
        }
        let solver = Coordinatizer::new(&self.rows.iter().map(|&r| r as u64).collect::<Vec<_>>());
        let rows = (0..k)
            .map(|i| solver.solve(1u64 << i).map(|m| m as u32))
            .collect::<Option<Vec<_>>>()?;
        Some(Isometry { rows })
    }

    /// The permutation induced on the `2^k − 1` nonzero vectors (vector
    /// `v` is point `v − 1`).
    pub fn to_permutation(&self) -> Permutation {
        let k = self.dim();
        let images: Vec<usize> = (1..1u32 << k).map(|v| self.apply(v) as usize - 1).collect();
        Permutation::from_images(images).expect("invertible map permutes nonzero vectors")
    }
}

/// Change of basis to the standard form.
#[derive(Clone, Debug)]
pub struct StandardForm {
    /// Maps standard coordinates to the coordinates of the space.
    pub change_of_basis: Isometry,
    pub type_tag: FormType,
    pub witt_index: usize,
}

fn independent_basis(vs: &[u32], k: usize) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    let mut echelon: Vec<u64> = Vec::new();
    for &v in vs {
        let mut probe = echelon.clone();
        probe.push(v as u64);
        let mut r = probe;
        let piv = crate::gf2::rref_words(&mut r, k.max(1));
        if piv.len() > echelon.len() {
            out.push(v);
            echelon = r;
        }
    }
    out
}

/// Witt decomposition: hyperbolic planes first, then at most one
/// anisotropic plane.
pub fn standardize(space: &QuotientSpace) -> Result<StandardForm> {
    let k = space.dim();
    if k % 2 == 1 || !space.is_nondegenerate() {
        return Err(Error::pre("form is degenerate or of odd dimension"));
    }
    let mut remaining: Vec<u32> = (0..k).map(|i| 1u32 << i).collect();
    let mut basis: Vec<u32> = Vec::with_capacity(k);
    let mut ty = FormType::Plus;
    while !remaining.is_empty() {
        let d = remaining.len();
        // look for a singular vector in the span of the remaining basis
        let mut e = None;
        for mask in 1u64..1u64 << d {
            let v = remaining
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0u32, |a, (_, &r)| a ^ r);
            if space.q(v) == 0 {
                e = Some(v);
                break;
            }
        }
        let Some(e) = e else {
            if d != 2 {
                return Err(Error::Invariant("no singular vector in a space of dimension above 2".into()));
            }
            basis.extend_from_slice(&remaining);
            ty = FormType::Minus;
            break;
        };
        let g = *remaining
            .iter()
            .find(|&&g| space.b(e, g) == 1)
            .ok_or_else(|| Error::Invariant("form is degenerate on a complement".into()))?;
        let f = if space.q(g) == 0 { g } else { g ^ e };
        basis.push(e);
        basis.push(f);
        let projected: Vec<u32> = remaining
            .iter()
            .map(|&r| {
                let mut r2 = r;
                if space.b(r, f) == 1 {
                    r2 ^= e;
                }
                if space.b(r, e) == 1 {
                    r2 ^= f;
                }
                r2
            })
            .filter(|&r| r != 0)
            .collect();
        remaining = independent_basis(&projected, k);
        if remaining.len() != d - 2 {
            return Err(Error::Invariant("orthogonal complement has the wrong dimension".into()));
        }
    }
    let witt_index = match ty {
        FormType::Plus => k / 2,
        FormType::Minus => k / 2 - 1,
    };
    Ok(StandardForm {
        change_of_basis: Isometry { rows: basis },
        type_tag: ty,
        witt_index,
    })
}

/// `|O^ε(2m, 2)| = 2 q^{m(m−1)} (q^m − ε) Π_{i=1}^{m−1} (q^{2i} − 1)` with `q = 2`.
pub fn orthogonal_group_order(k: usize, ty: FormType) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    let m = (k / 2) as u32;
    let two = BigUint::from(2u32);
    let mut o = &two * two.pow(m * (m - 1));
    let qm = two.pow(m);
    o *= match ty {
        FormType::Plus => qm - 1u32,
        FormType::Minus => qm + 1u32,
    };
    for i in 1..m {
        o *= two.pow(2 * i) - 1u32;
    }
    o
}

/// Order of the group generated by isometries of a `k`-dimensional space.
pub fn matrix_group_order(k: usize, gens: &[Isometry]) -> Result<BigUint> {
    if k == 0 {
        return Ok(BigUint::one());
    }
    if k > GROUP_DIM {
        return Err(Error::Budget {
            what: "matrix group dimension".into(),
            limit: GROUP_DIM as u64,
        });
    }
    let perms: Vec<Permutation> = gens.iter().map(Isometry::to_permutation).collect();
    Ok(PermGroup::new((1 << k) - 1, perms)?.order())
}

/// Orthogonal transvection `x ↦ x + b(x, v) v` for `q(v) = 1`.
pub fn transvection(space: &QuotientSpace, v: u32) -> Isometry {
    Isometry {
        rows: (0..space.dim())
            .map(|i| {
                let e = 1u32 << i;
                if space.b(e, v) == 1 {
                    e ^ v
                } else {
                    e
                }
            })
            .collect(),
    }
}

/// Generators of the full orthogonal group of the space.
pub fn isometry_group_gens(space: &QuotientSpace) -> Result<Vec<Isometry>> {
    let k = space.dim();
    if k == 0 {
        return Ok(Vec::new());
    }
    let sf = standardize(space)?;
    if k > GROUP_DIM {
        return Err(Error::Budget {
            what: "orthogonal group generation".into(),
            limit: GROUP_DIM as u64,
        });
    }
    let target = orthogonal_group_order(k, sf.type_tag);
    let degree = (1usize << k) - 1;
    let mut gens: Vec<Isometry> = Vec::new();
    let mut perms: Vec<Permutation> = Vec::new();
    let mut group = PermGroup::trivial(degree);
    let mut order = BigUint::one();
    let candidates = (1u32..1 << k).filter(|&v| space.q(v) == 1).map(|v| transvection(space, v));
    // plane swaps in standard coordinates, conjugated into the space
    let p = &sf.change_of_basis;
    let pinv = p.inverse().ok_or_else(|| Error::Invariant("standard basis is singular".into()))?;
    let hyperbolic = sf.witt_index;
    let swaps = (1..hyperbolic).map(|j| {
        let mut rows: Vec<u32> = (0..k).map(|i| 1u32 << i).collect();
        rows.swap(0, 2 * j);
        rows.swap(1, 2 * j + 1);
        pinv.then(&Isometry { rows }).then(p)
    });
    for g in candidates.chain(swaps) {
        if order == target {
            break;
        }
        let perm = g.to_permutation();
        if group.is_member(&perm) {
            continue;
        }
        perms.push(perm);
        gens.push(g);
        group = PermGroup::new(degree, perms.clone())?;
        order = group.order();
    }
    if order != target {
        return Err(Error::Invariant(format!(
            "generated orthogonal group has order {order}, expected {target}"
        )));
    }
    for g in &gens {
        if !space.is_isometry(space, g)? {
            return Err(Error::Invariant("generator is not an isometry".into()));
        }
    }
    Ok(gens)
}

/// Maps on `C⊥/C` induced by coordinate permutations preserving `C`.
pub fn induced_group_gens(space: &QuotientSpace, gens: &[Permutation]) -> Result<Vec<Isometry>> {
    let code = space
        .code()
        .ok_or_else(|| Error::pre("induced maps need a code-derived space"))?;
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        if g.degree() != code.n() || code.permute(g) != *code {
            return Err(Error::pre("permutation does not preserve the code"));
        }
        let rows = space
            .reps()
            .iter()
            .map(|&r| space.coords(g.apply_word(r)))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Invariant("image of a dual word left the dual".into()))?;
        let iso = Isometry { rows };
        if space.dim() <= EXHAUSTIVE_DIM && !space.is_isometry(space, &iso)? {
            return Err(Error::Invariant("induced map is not an isometry".into()));
        }
        out.push(iso);
    }
    Ok(out)
}

/// An isometry `Q1 → Q2`, if the spaces have equal dimension and type.
pub fn find_isometry(q1: &QuotientSpace, q2: &QuotientSpace) -> Result<Option<Isometry>> {
    if q1.dim() != q2.dim() {
        return Ok(None);
    }
    let s1 = standardize(q1)?;
    let s2 = standardize(q2)?;
    if s1.type_tag != s2.type_tag {
        return Ok(None);
    }
    let inv = s1
        .change_of_basis
        .inverse()
        .ok_or_else(|| Error::Invariant("standard basis is singular".into()))?;
    let f = inv.then(&s2.change_of_basis);
    if q1.dim() <= EXHAUSTIVE_DIM && !q1.is_isometry(q2, &f)? {
        return Err(Error::Invariant("composed standard forms do not give an isometry".into()));
    }
    Ok(Some(f))
}

/// One double coset `H_left · g · H_right`.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    /// Lexicographically least element.
    pub rep: Isometry,
    pub size: u64,
}

/// Every element of the group generated by `gens`.
pub fn group_elements(k: usize, gens: &[Isometry], budget: u64) -> Result<Vec<Isometry>> {
    let mut seen: HashMap<Isometry, ()> = HashMap::new();
    let id = Isometry::identity(k);
    let mut out = vec![id.clone()];
    seen.insert(id, ());
    let mut head = 0;
    while head < out.len() {
        let x = out[head].clone();
        head += 1;
        for g in gens {
            let y = x.then(g);
            if !seen.contains_key(&y) {
                if out.len() as u64 >= budget {
                    return Err(Error::Budget {
                        what: "matrix group enumeration".into(),
                        limit: budget,
                    });
                }
                seen.insert(y.clone(), ());
                out.push(y);
            }
        }
    }
    Ok(out)
}

/// Representatives of `H_left \ G / H_right`, where composition `a·g·b`
/// means apply `b`, then `g`, then `a`.
pub fn double_coset_reps(
    k: usize,
    left: &[Isometry],
    right: &[Isometry],
    ambient: &[Isometry],
    budget: u64,
) -> Result<Vec<DoubleCoset>> {
    let elems = group_elements(k, ambient, budget)?;
    let index: HashMap<&Isometry, usize> = elems.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut parent: Vec<usize> = (0..elems.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, g) in elems.iter().enumerate() {
        let neighbours = left.iter().map(|a| g.then(a)).chain(right.iter().map(|b| b.then(g)));
        for h in neighbours {
            let j = *index
                .get(&h)
                .ok_or_else(|| Error::pre("subgroup generator lies outside the ambient group"))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: HashMap<usize, (usize, u64)> = HashMap::new();
    for i in 0..elems.len() {
        let r = find(&mut parent, i);
        let e = classes.entry(r).or_insert((i, 0));
        if elems[i] < elems[e.0] {
            e.0 = i;
        }
        e.1 += 1;
    }
    let mut out: Vec<DoubleCoset> = classes
        .into_values()
        .map(|(i, size)| DoubleCoset {
            rep: elems[i].clone(),
            size,
        })
        .collect();
    out.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok(out)
}
