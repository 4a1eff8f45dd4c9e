//! Coordinate permutations and permutation groups with a deterministic
//! Schreier–Sims stabilizer chain.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A bijection of `{0, …, n-1}`; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::pre("image list is not a bijection"));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation from disjoint cycles of 0-indexed points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::pre("cycles are not disjoint or out of range"));
                }
                touched[a] = true;
                images[a] = cyc[(k + 1) % cyc.len()];
            }
        }
        Self::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self` followed by `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// Moves bit `i` of `w` to bit `self(i)`. Degree must be at most 64.
    #[inline]
    pub fn apply_word(&self, w: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = w;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1u64 << self.images[i];
        }
        out
    }

    /// Cycle lengths, sorted, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// Element order (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycle_type().into_iter().fold(1u64, |acc, l| lcm(acc, l as u64))
    }

    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &j)| *i as u32 != j).map(|(i, _)| i)
    }

    /// Cycle notation with 1-indexed points, e.g. `(1,2,3)(5,6)`; `()` for identity.
    pub fn to_cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut s = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            s.push('(');
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    s.push(',');
                }
                first = false;
                s.push_str(&(x + 1).to_string());
                x = self.images[x] as usize;
            }
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }

    /// Parses 1-indexed cycle notation of the given degree.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "()" || t.is_empty() {
            return Ok(Permutation::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::parse(1, "expected '('"))?;
            let end = body.find(')').ok_or_else(|| Error::parse(1, "unclosed cycle"))?;
            let pts = body[..end]
                .split(',')
                .map(|p| {
                    p.parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1 && v <= n)
                        .map(|v| v - 1)
                        .ok_or_else(|| Error::parse(1, format!("bad point {p:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(pts);
            rest = &body[end + 1..];
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Self::from_cycles(n, &refs).map_err(|_| Error::parse(1, "cycles are not disjoint"))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[b]` maps `point` to `b` for each orbit point `b`.
    transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut l = Level {
            point,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        l.rebuild_orbit(degree);
        l
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.point] = Some(Permutation::identity(degree));
        self.orbit = vec![self.point];
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for g in &self.gens {
                let c = g.image(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().unwrap().then(g);
                    self.transversal[c] = Some(u);
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Deterministic Schreier–Sims. Base points beyond `base_prefix` are the
    /// first point moved by the generator that needs a new level.
    pub fn build(degree: usize, gens: &[Permutation], base_prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: base_prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for g in gens {
            if g.is_identity() {
                continue;
            }
            if chain.levels.iter().all(|l| g.image(l.point) == l.point) {
                let p = g.first_moved().unwrap();
                chain.levels.push(Level::new(p, degree));
            }
            // g fixes every base point before the first one it moves
            for l in chain.levels.iter_mut() {
                l.gens.push(g.clone());
                if g.image(l.point) != l.point {
                    break;
                }
            }
        }
        for l in chain.levels.iter_mut() {
            l.rebuild_orbit(degree);
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let li = i as usize;
            let orbit = self.levels[li].orbit.clone();
            let gens = self.levels[li].gens.clone();
            for &b in &orbit {
                let ub = self.levels[li].transversal[b].clone().unwrap();
                for s in &gens {
                    let c = s.image(b);
                    let uc = self.levels[li].transversal[c].as_ref().unwrap();
                    let schreier = ub.then(s).then(&uc.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = self.sift_from(&schreier, li + 1);
                    if !h.is_identity() {
                        if j == self.levels.len() {
                            let p = h.first_moved().unwrap();
                            self.levels.push(Level::new(p, self.degree));
                        }
                        for l in li + 1..=j {
                            self.levels[l].gens.push(h.clone());
                            self.levels[l].rebuild_orbit(self.degree);
                        }
                        i = j as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    /// Sifts `g` through levels `from..`; returns the residue and the level
    /// where sifting stopped (`levels.len()` when it went all the way).
    fn sift_from(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (idx, l) in self.levels.iter().enumerate().skip(from) {
            let b = h.image(l.point);
            match &l.transversal[b] {
                None => return (h, idx),
                Some(u) => h = h.then(&u.inverse()),
            }
        }
        (h, self.levels.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g, 0).0.is_identity()
    }

    /// Uniformly random element: one random transversal element per level.
    pub fn random_element(&self, rng: &mut impl Rng) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for l in self.levels.iter().rev() {
            let b = l.orbit[rng.gen_range(0..l.orbit.len())];
            g = g.then(l.transversal[b].as_ref().unwrap());
        }
        g
    }

    /// Visits every group element exactly once.
    pub fn for_each_element(&self, f: &mut impl FnMut(&Permutation)) {
        // g = t_{k-1} · … · t_0, deepest level applied first
        fn rec(chain: &StabChain, level: usize, acc: &Permutation, f: &mut impl FnMut(&Permutation)) {
            if level == 0 {
                f(acc);
                return;
            }
            let l = &chain.levels[level - 1];
            for &b in &l.orbit {
                let next = acc.then(l.transversal[b].as_ref().unwrap());
                rec(chain, level - 1, &next, f);
            }
        }
        rec(self, self.levels.len(), &Permutation::identity(self.degree), f);
    }
}

/// A permutation group given by generators; the chain is built on first use.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::pre("generator degree mismatch"));
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_member(&self, p: &Permutation) -> bool {
        self.chain().contains(p)
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.generators {
                let c = g.image(orbit[i]);
                if !seen[c] {
                    seen[c] = true;
                    orbit.push(c);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Order of the stabilizer of `point`, via a chain whose base starts there.
    pub fn stabilizer_order(&self, point: usize) -> BigUint {
        let chain = StabChain::build(self.degree, &self.generators, &[point]);
        chain
            .levels
            .iter()
            .skip(1)
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Orbits of the group on points, each sorted, listed by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let o = self.orbit(p);
                for &q in &o {
                    seen[q] = true;
                }
                out.push(o);
            }
        }
        out
    }
}

/// Type `p-(c,f)`: an automorphism of odd prime order `p` with `c` `p`-cycles
/// and `f` fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutType {
    pub p: usize,
    pub c: usize,
    pub f: usize,
}

impl fmt::Display for AutType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{})", self.p, self.c, self.f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeCensus {
    pub types: BTreeSet<AutType>,
    /// `false` when the group was too large to enumerate and the set is a
    /// lower bound from sampled elements.
    pub exact: bool,
}

pub const DEFAULT_ELEMENT_BUDGET: u64 = 1_000_000;

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn type_of(g: &Permutation, p: usize) -> Option<AutType> {
    let ct = g.cycle_type();
    if ct.iter().all(|&l| l == 1 || l == p) && ct.contains(&p) {
        let c = ct.iter().filter(|&&l| l == p).count();
        Some(AutType {
            p,
            c,
            f: g.degree() - p * c,
        })
    } else {
        None
    }
}

/// Types `p-(c,f)` realized by elements of order `p` in `group`.
pub fn prime_order_types(group: &PermGroup, p: usize, element_budget: u64) -> Result<TypeCensus> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::pre(format!("{p} is not an odd prime")));
    }
    let chain = group.chain();
    let order = chain.order();
    let mut types = BTreeSet::new();
    if order <= BigUint::from(element_budget) {
        chain.for_each_element(&mut |g| {
            if let Some(t) = type_of(g, p) {
                types.insert(t);
            }
        });
        return Ok(TypeCensus { types, exact: true });
    }
    let mut consider = |g: &Permutation| {
        let m = g.order();
        if m.is_multiple_of(p as u64) {
            if let Some(t) = type_of(&g.pow(m / p as u64), p) {
                types.insert(t);
            }
        }
    };
    for g in group.generators() {
        consider(g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + p as u64);
    for _ in 0..2000 {
        consider(&chain.random_element(&mut rng));
    }
    Ok(TypeCensus { types, exact: false })
}
