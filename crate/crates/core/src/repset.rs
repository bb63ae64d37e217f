//! Representative sets of twisted conjugacy classes.
//!
//! For a phi-cyclically reduced `u` with nonempty free part, the set is the
//! chain of single-letter back-to-front shifts `u_0 -> u_1 -> ... -> u_{i-1}`
//! (stopping when the quotient `(free, t mod n)` returns to that of `u_0`)
//! crossed with the y-shifts `y^0 .. y^{n-1}`. Members are stored implicitly
//! as `(chain, shift)` pairs; free parts are rebuilt on demand.
//!
//! Two members with the same quotient differ by a central `y^D`. The set of
//! all such `D` is a subgroup (the period lattice) generated by the twisted
//! shift `z`, by `n(1 - eps_y)` and by the discrepancies of chain members
//! whose quotient coincides with the root's.
//!
//! For pure y-powers the set is instead the graph on residues mod `n` whose
//! edges are y-shifts and single letters `l` with `phi(l)^-1 y^t l` a pure
//! y-power.
//!
//! The engine is generic over [`Exponent`]: `i64` for a concrete `d`, and
//! [`AffineExp`] when `d` is only known mod `n`.

use std::fmt;
use std::hash::Hash;

use crate::automorphism::OuterAuto;
use crate::error::{Error, Result};
use crate::shifts::is_phi_cr;
use crate::words::{FreeLetter, FreeWord, GeodesicNF, GroupParams, ModularNF};

/// Arithmetic needed to carry Garside exponents through the construction.
pub trait Exponent: Clone + PartialEq + Eq + Hash + fmt::Debug {
    fn constant(c: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, k: i64) -> Self;
    /// Residue mod `n` given `d mod n`.
    fn residue(&self, n: u32, d_res: u32) -> u32;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }
}

impl Exponent for i64 {
    fn constant(c: i64) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, k: i64) -> Self {
        self * k
    }
    fn residue(&self, n: u32, _d_res: u32) -> u32 {
        self.rem_euclid(n as i64) as u32
    }
}

/// `constant + coef * d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AffineExp {
    pub constant: i64,
    pub coef: i64,
}

impl AffineExp {
    pub fn new(constant: i64, coef: i64) -> Self {
        AffineExp { constant, coef }
    }

    /// The symbol `d` itself.
    pub fn d() -> Self {
        AffineExp::new(0, 1)
    }

    pub fn eval(&self, d: i64) -> i64 {
        self.constant + self.coef * d
    }
}

impl Exponent for AffineExp {
    fn constant(c: i64) -> Self {
        AffineExp::new(c, 0)
    }
    fn add(&self, other: &Self) -> Self {
        AffineExp::new(self.constant + other.constant, self.coef + other.coef)
    }
    fn scale(&self, k: i64) -> Self {
        AffineExp::new(self.constant * k, self.coef * k)
    }
    fn residue(&self, n: u32, d_res: u32) -> u32 {
        let n = n as i128;
        (self.constant as i128 + self.coef as i128 * d_res as i128).rem_euclid(n) as u32
    }
}

impl fmt::Display for AffineExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.constant, self.coef) {
            (c, 0) => write!(f, "{c}"),
            (0, k) => write!(f, "{k}d"),
            (c, k) if k < 0 => write!(f, "{c} - {}d", -k),
            (c, k) => write!(f, "{c} + {k}d"),
        }
    }
}

/// Position of a member: `(chain index, y-shift)`, or `(node, 0)` for pure y-powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberRef {
    pub chain: usize,
    pub shift: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member<E> {
    pub at: MemberRef,
    pub free: FreeWord,
    pub residue: u32,
    pub t: E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PyMove {
    Letter(FreeLetter),
    Y,
}

#[derive(Debug, Clone)]
struct PyNode<E> {
    residue: u32,
    t: E,
    parent: Option<(usize, PyMove)>,
}

#[derive(Debug, Clone)]
enum Loop {
    /// The full chain, returning to the root quotient.
    FullChain,
    /// `y^n`.
    YPower,
    /// Root to a chain member sharing its quotient.
    Member(MemberRef),
    /// Pure-y edge closing a cycle.
    Edge(usize, PyMove, usize),
}

#[derive(Debug, Clone)]
struct Chain<E> {
    root: Vec<FreeLetter>,
    pre: Vec<FreeLetter>,
    shifts: Vec<u32>,
    ts: Vec<E>,
    wit: Vec<FreeLetter>,
    z: E,
    stabilizer: Vec<MemberRef>,
}

#[derive(Debug, Clone)]
enum Shape<E> {
    Chain(Chain<E>),
    PureY(Vec<PyNode<E>>),
}

/// Representative set; `E = i64` for concrete `d`, `E = AffineExp` for symbolic `d`.
#[derive(Debug, Clone)]
pub struct RepSet<E> {
    g: GroupParams,
    eps_x: i8,
    eps_y: i8,
    d_res: u32,
    d: E,
    shape: Shape<E>,
    generators: Vec<(E, Loop)>,
}

impl<E: Exponent> RepSet<E> {
    /// Builds the set rooted at `free * y^t`. `free` must be phi-CR (or empty).
    pub fn build(
        g: &GroupParams,
        eps_x: i8,
        eps_y: i8,
        d_res: u32,
        d: E,
        free: &FreeWord,
        t: E,
    ) -> Result<Self> {
        let phi_res = OuterAuto::new(eps_x, eps_y, d_res as i64)?;
        let mut rs = RepSet {
            g: *g,
            eps_x,
            eps_y,
            d_res,
            d,
            shape: Shape::PureY(Vec::new()),
            generators: Vec::new(),
        };
        if free.is_empty() {
            rs.build_pure_y(t);
        } else {
            let root = g.modular(free.clone(), t.residue(g.n(), d_res) as i64);
            if !is_phi_cr(g, &phi_res, &root) {
                return Err(Error::Precondition(format!(
                    "root {} is not phi-cyclically reduced",
                    free
                )));
            }
            rs.build_chain(&phi_res, free, t)?;
        }
        Ok(rs)
    }

    fn n(&self) -> u32 {
        self.g.n()
    }

    fn y_step(&self) -> i64 {
        1 - self.eps_y as i64
    }

    fn build_chain(&mut self, phi_res: &OuterAuto, free: &FreeWord, t0: E) -> Result<()> {
        let g = self.g;
        let n = self.n();
        let q = free.len();
        let cap = 2 * (n as usize) * (n as usize) * q + 1;
        let mut ch = Chain {
            root: free.letters().to_vec(),
            pre: Vec::new(),
            shifts: vec![0],
            ts: vec![t0.clone()],
            wit: Vec::new(),
            z: E::constant(0),
            stabilizer: Vec::new(),
        };
        let root_res = t0.residue(n, self.d_res);
        loop {
            let j = ch.ts.len() - 1;
            let s = ch.shifts[j] as i64;
            let last = g.shift_letter(s, raw(&ch, j, q - 1));
            let alpha = ch.ts[j].residue(n, self.d_res) as i64;
            let moved = g.shift_letter(-alpha, last);
            let front = phi_res.letter_image(&g, moved);
            let sigma = last.sign() as i64;
            if q >= 2 {
                let next_first = g.shift_letter(s + sigma * self.d_res as i64, raw(&ch, j, 0));
                if next_first == front.inverse() {
                    return Err(Error::Internal("x-shift produced a cancellation".into()));
                }
            }
            let s_next = g.residue(s + sigma * self.d_res as i64);
            ch.pre.push(g.shift_letter(-(s_next as i64), front));
            ch.wit.push(moved.inverse());
            let t_next = ch.ts[j].add(&self.d.scale(sigma));
            let jn = j + 1;
            if t_next.residue(n, self.d_res) == root_res
                && (0..q).all(|p| g.shift_letter(s_next as i64, raw(&ch, jn, p)) == ch.root[p])
            {
                ch.z = t_next.sub(&t0);
                break;
            }
            if jn >= cap {
                return Err(Error::Internal(format!(
                    "no recurrence after {cap} back-to-front shifts"
                )));
            }
            ch.shifts.push(s_next);
            ch.ts.push(t_next);
        }
        self.shape = Shape::Chain(ch);
        let rootw = FreeWord::reduce_from(free.letters().to_vec());
        let stab: Vec<MemberRef> = self
            .matches(&rootw, root_res)
            .into_iter()
            .filter(|m| m.chain != 0 || m.shift != 0)
            .collect();
        let Shape::Chain(ch) = &mut self.shape else {
            unreachable!()
        };
        ch.stabilizer = stab.clone();
        let z = ch.z.clone();
        let t0 = ch.ts[0].clone();
        self.generators.push((z, Loop::FullChain));
        if self.eps_y == -1 {
            self.generators
                .push((E::constant(n as i64 * self.y_step()), Loop::YPower));
        }
        for m in stab {
            let dt = self.member_t(m).sub(&t0);
            self.generators.push((dt, Loop::Member(m)));
        }
        Ok(())
    }

    fn build_pure_y(&mut self, t0: E) {
        let n = self.n();
        let g = self.g;
        let mut nodes = vec![PyNode {
            residue: t0.residue(n, self.d_res),
            t: t0,
            parent: None,
        }];
        let mut at_residue: Vec<Option<usize>> = vec![None; n as usize];
        at_residue[nodes[0].residue as usize] = Some(0);
        let mut gens = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let rho = nodes[i].residue as i64;
            let mut moves: Vec<(PyMove, E)> = vec![(PyMove::Y, E::constant(self.y_step()))];
            if self.eps_x == 1 {
                let ey = self.eps_y as i64;
                let dr = self.d_res as i64;
                if let Some(ix) = (0..n as i64).find(|&ix| g.residue((ey - 1) * ix + rho) == 0) {
                    moves.push((PyMove::Letter(g.letter(ix, 1)), self.d.scale(-1)));
                }
                if let Some(ix) = (0..n as i64).find(|&ix| g.residue((ey - 1) * ix + dr + rho) == 0)
                {
                    moves.push((PyMove::Letter(g.letter(ix, -1)), self.d.clone()));
                }
            }
            for (mv, dt) in moves {
                let t_new = nodes[i].t.add(&dt);
                let r = t_new.residue(n, self.d_res);
                match at_residue[r as usize] {
                    None => {
                        at_residue[r as usize] = Some(nodes.len());
                        nodes.push(PyNode {
                            residue: r,
                            t: t_new,
                            parent: Some((i, mv)),
                        });
                    }
                    Some(k) => gens.push((t_new.sub(&nodes[k].t), Loop::Edge(i, mv, k))),
                }
            }
            i += 1;
        }
        self.shape = Shape::PureY(nodes);
        self.generators = gens;
    }

    pub fn params(&self) -> &GroupParams {
        &self.g
    }

    pub fn eps(&self) -> (i8, i8) {
        (self.eps_x, self.eps_y)
    }

    pub fn d_residue(&self) -> u32 {
        self.d_res
    }

    pub fn is_pure_y(&self) -> bool {
        matches!(self.shape, Shape::PureY(_))
    }

    /// Free length shared by all members.
    pub fn free_len(&self) -> usize {
        match &self.shape {
            Shape::Chain(ch) => ch.root.len(),
            Shape::PureY(_) => 0,
        }
    }

    /// Number of single-letter back-to-front steps before the quotient recurs.
    pub fn chain_len(&self) -> usize {
        match &self.shape {
            Shape::Chain(ch) => ch.ts.len(),
            Shape::PureY(nodes) => nodes.len(),
        }
    }

    /// Signed twisted shift `t_i - t_0` of the chain; `None` for pure y-powers.
    pub fn signed_twisted_shift(&self) -> Option<E> {
        match &self.shape {
            Shape::Chain(ch) => Some(ch.z.clone()),
            Shape::PureY(_) => None,
        }
    }

    /// Generators of the period lattice: the possible exponent gaps between same-quotient members.
    pub fn period_generators(&self) -> Vec<E> {
        self.generators.iter().map(|(e, _)| e.clone()).collect()
    }

    fn refs(&self) -> Vec<MemberRef> {
        match &self.shape {
            Shape::Chain(ch) => (0..ch.ts.len())
                .flat_map(|j| (0..self.n()).map(move |k| MemberRef { chain: j, shift: k }))
                .collect(),
            Shape::PureY(nodes) => (0..nodes.len())
                .map(|j| MemberRef { chain: j, shift: 0 })
                .collect(),
        }
    }

    pub fn member_t(&self, m: MemberRef) -> E {
        match &self.shape {
            Shape::Chain(ch) => ch.ts[m.chain].add(&E::constant(m.shift as i64 * self.y_step())),
            Shape::PureY(nodes) => nodes[m.chain].t.clone(),
        }
    }

    pub fn member(&self, m: MemberRef) -> Member<E> {
        let t = self.member_t(m);
        let residue = t.residue(self.n(), self.d_res);
        let free = match &self.shape {
            Shape::Chain(ch) => {
                let s = ch.shifts[m.chain] as i64 - self.eps_y as i64 * m.shift as i64;
                FreeWord::reduce_from(
                    (0..ch.root.len())
                        .map(|p| self.g.shift_letter(s, raw(ch, m.chain, p)))
                        .collect::<Vec<_>>(),
                )
            }
            Shape::PureY(_) => FreeWord::empty(),
        };
        Member {
            at: m,
            free,
            residue,
            t,
        }
    }

    /// Members with pairwise distinct `(free, t)`, in chain-major order.
    pub fn members(&self) -> Vec<Member<E>> {
        let stab: Vec<MemberRef> = match &self.shape {
            Shape::Chain(ch) => ch.stabilizer.clone(),
            Shape::PureY(_) => Vec::new(),
        };
        let i = self.chain_len();
        let n = self.n() as usize;
        self.refs()
            .into_iter()
            .filter(|&m| {
                let t = self.member_t(m);
                !stab.iter().any(|h| {
                    let j = (m.chain + i - h.chain) % i;
                    let k = (m.shift as usize + n - h.shift as usize) % n;
                    let other = MemberRef {
                        chain: j,
                        shift: k as u32,
                    };
                    other < m && self.member_t(other) == t
                })
            })
            .map(|m| self.member(m))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All members whose quotient is `(free, residue)`.
    pub fn matches(&self, free: &FreeWord, residue: u32) -> Vec<MemberRef> {
        let mut out = Vec::new();
        let n = self.n() as i64;
        match &self.shape {
            Shape::PureY(nodes) => {
                if free.is_empty() {
                    if let Some(j) = nodes.iter().position(|nd| nd.residue == residue) {
                        out.push(MemberRef { chain: j, shift: 0 });
                    }
                }
            }
            Shape::Chain(ch) => {
                let q = ch.root.len();
                if free.len() != q {
                    return out;
                }
                let target = free.letters();
                let ey = self.eps_y as i64;
                for j in 0..ch.ts.len() {
                    let r0 = raw(ch, j, 0);
                    if r0.sign() != target[0].sign() {
                        continue;
                    }
                    // shift s = S_j - ey*k maps r0 onto target[0]
                    let s = r0.index() as i64 - target[0].index() as i64;
                    let k = (ey * (ch.shifts[j] as i64 - s)).rem_euclid(n);
                    let m = MemberRef {
                        chain: j,
                        shift: k as u32,
                    };
                    if self.member_t(m).residue(self.n(), self.d_res) != residue {
                        continue;
                    }
                    if (1..q).all(|p| self.g.shift_letter(s, raw(ch, j, p)) == target[p]) {
                        out.push(m);
                    }
                }
            }
        }
        out
    }

    pub fn locate(&self, free: &FreeWord, residue: u32) -> Option<MemberRef> {
        self.matches(free, residue).into_iter().next()
    }

    /// Conjugator taking the root to member `m`.
    pub fn member_witness(&self, m: MemberRef) -> GeodesicNF {
        let g = &self.g;
        match &self.shape {
            Shape::Chain(ch) => {
                let c = GeodesicNF::new(FreeWord::reduce_from(ch.wit[..m.chain].to_vec()), 0);
                g.multiply(&c, &g.y_power(m.shift as i64))
            }
            Shape::PureY(nodes) => {
                let mut parts = Vec::new();
                let mut cur = m.chain;
                while let Some((p, mv)) = nodes[cur].parent {
                    parts.push(self.py_move_witness(mv));
                    cur = p;
                }
                parts.reverse();
                g.multiply_all(&parts)
            }
        }
    }

    fn py_move_witness(&self, mv: PyMove) -> GeodesicNF {
        match mv {
            PyMove::Letter(l) => self.g.from_letter(l),
            PyMove::Y => self.g.y_power(1),
        }
    }

    fn loop_witness(&self, lp: &Loop) -> GeodesicNF {
        let g = &self.g;
        match (lp, &self.shape) {
            (Loop::FullChain, Shape::Chain(ch)) => {
                GeodesicNF::new(FreeWord::reduce_from(ch.wit.clone()), 0)
            }
            (Loop::YPower, _) => g.y_power(self.n() as i64),
            (Loop::Member(m), _) => self.member_witness(*m),
            (Loop::Edge(src, mv, tgt), _) => {
                let a = self.member_witness(MemberRef {
                    chain: *src,
                    shift: 0,
                });
                let b = self.member_witness(MemberRef {
                    chain: *tgt,
                    shift: 0,
                });
                g.multiply_all(&[a, self.py_move_witness(*mv), g.invert(&b)])
            }
            (Loop::FullChain, Shape::PureY(_)) => GeodesicNF::identity(),
        }
    }
}

fn raw<E>(ch: &Chain<E>, j: usize, p: usize) -> FreeLetter {
    if p < j {
        ch.pre[j - 1 - p]
    } else {
        ch.root[p - j]
    }
}

/// A query matched against a concrete representative set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberMatch {
    pub member: MemberRef,
    /// The query is the member times `y^(lambda * period)`.
    pub lambda: i64,
    /// Conjugator taking the root to the query.
    pub witness: GeodesicNF,
}

impl RepSet<i64> {
    /// Non-negative generator of the period lattice; 0 means same-quotient members never repeat.
    pub fn period(&self) -> i64 {
        self.generators.iter().fold(0, |a, (e, _)| gcd(a, *e))
    }

    /// `|t_i - t_0|` for the chain; 0 for pure y-powers.
    pub fn twisted_shift(&self) -> i64 {
        self.signed_twisted_shift().map_or(0, |z| z.abs())
    }

    /// The root as a modular normal form.
    pub fn root(&self) -> ModularNF {
        let m = self.member(MemberRef { chain: 0, shift: 0 });
        self.g.modular(m.free, m.t)
    }

    pub fn concrete_members(&self) -> Vec<ModularNF> {
        self.members()
            .into_iter()
            .map(|m| self.g.modular(m.free, m.t))
            .collect()
    }

    /// Loop at the root realising a shift by exactly `period()`.
    pub fn period_witness(&self) -> GeodesicNF {
        let g = &self.g;
        let mut cur = 0i64;
        let mut wit = GeodesicNF::identity();
        for (e, lp) in &self.generators {
            if *e == 0 || (cur != 0 && e % cur == 0) {
                continue;
            }
            let w = self.loop_witness(lp);
            if cur == 0 {
                cur = e.abs();
                wit = if *e > 0 { w } else { g.invert(&w) };
            } else {
                let (h, a, b) = ext_gcd(cur, *e);
                wit = g.multiply(&g.pow(&wit, a), &g.pow(&w, b));
                cur = h;
            }
        }
        wit
    }

    pub fn member_match(&self, v: &ModularNF) -> Option<MemberMatch> {
        let m = self.locate(&v.free, v.c)?;
        let delta = v.t(&self.g) - self.member_t(m);
        let p = self.period();
        let lambda = if p == 0 {
            (delta == 0).then_some(0)?
        } else if delta % p == 0 {
            delta / p
        } else {
            return None;
        };
        let mw = self.member_witness(m);
        let witness = if lambda == 0 {
            mw
        } else {
            let pw = self.g.pow(&self.period_witness(), lambda);
            self.g.multiply(&pw, &mw)
        };
        Some(MemberMatch {
            member: m,
            lambda,
            witness,
        })
    }

    /// Graphviz rendering: blue edges for x-shifts, red for y-shifts.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph repset {\n  node [shape=box];\n");
        let n = self.n() as usize;
        let members = self.members();
        let name = |m: MemberRef| format!("m{}_{}", m.chain, m.shift);
        for m in &members {
            let k = m.t.div_euclid(n as i64);
            let yc = GeodesicNF::new(m.free.clone(), m.residue as i64);
            out.push_str(&format!(
                "  {} [label=\"({}, y^{})\"];\n",
                name(m.at),
                yc,
                k * n as i64
            ));
        }
        let present: std::collections::HashSet<MemberRef> = members.iter().map(|m| m.at).collect();
        let i = self.chain_len();
        for m in &members {
            let a = m.at;
            if !self.is_pure_y() && a.chain + 1 < i {
                let b = MemberRef {
                    chain: a.chain + 1,
                    shift: a.shift,
                };
                if present.contains(&b) {
                    out.push_str(&format!("  {} -> {} [color=blue];\n", name(a), name(b)));
                }
            }
            if (a.shift as usize) + 1 < n {
                let b = MemberRef {
                    chain: a.chain,
                    shift: a.shift + 1,
                };
                if present.contains(&b) {
                    out.push_str(&format!("  {} -> {} [color=red];\n", name(a), name(b)));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Concrete set for `u` (phi-CR or a pure y-power).
pub fn build_rep_set(g: &GroupParams, phi: &OuterAuto, u: &ModularNF) -> Result<RepSet<i64>> {
    RepSet::build(
        g,
        phi.eps_x(),
        phi.eps_y(),
        g.residue(phi.d()),
        phi.d(),
        &u.free,
        u.t(g),
    )
}

/// Symbolic set for all `d = c (mod n)`; the root exponent may itself depend on `d`.
pub fn build_rep_set_symbolic(
    g: &GroupParams,
    eps_x: i8,
    eps_y: i8,
    c: u32,
    free: &FreeWord,
    t: AffineExp,
) -> Result<RepSet<AffineExp>> {
    if c >= g.n() {
        return Err(Error::Precondition(format!(
            "residue {c} not below n = {}",
            g.n()
        )));
    }
    RepSet::build(g, eps_x, eps_y, c, AffineExp::d(), free, t)
}

impl RepSet<AffineExp> {
    /// Concrete set obtained by substituting `d`, sorted; members that coincide at this `d` appear once.
    pub fn members_at(&self, d: i64) -> Vec<ModularNF> {
        let mut out: Vec<ModularNF> = self
            .members()
            .into_iter()
            .map(|m| self.g.modular(m.free, m.t.eval(d)))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn lattice(&self) -> Lattice2 {
        Lattice2::from_generators(self.generators.iter().map(|(e, _)| (e.constant, e.coef)))
    }

    /// Values of `d = c (mod n)`, smallest `|d|` first, for which `free * y^t` is in the class.
    pub fn solve_d(&self, free: &FreeWord, t: AffineExp, limit: usize) -> DSolutions {
        let res = t.residue(self.n(), self.d_res);
        let Some(m) = self.locate(free, res) else {
            return DSolutions::default();
        };
        let diff = t.sub(&self.member_t(m));
        self.lattice().solve(
            diff.constant,
            diff.coef,
            self.d_res as i64,
            self.n() as i64,
            limit,
        )
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

/// Sublattice of Z^2 in Hermite form, spanned by `(a, b)` and `(0, e)`.
/// Its image under `(p, q) -> p + q d` is the set of exponent gaps at a given `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lattice2 {
    pub a: i64,
    pub b: i64,
    pub e: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DSolutions {
    /// Candidate values of `d`, sorted by `|d|` then sign.
    pub values: Vec<i64>,
    /// True when the search radius had to be truncated.
    pub truncated: bool,
}

const SEARCH_CAP: i64 = 20_000_000;

impl Lattice2 {
    pub fn from_generators<I: IntoIterator<Item = (i64, i64)>>(gens: I) -> Self {
        let mut l = Lattice2::default();
        for (p, q) in gens {
            l.insert(p, q);
        }
        l
    }

    fn insert(&mut self, p: i64, q: i64) {
        if p == 0 {
            self.e = gcd(self.e, q);
        } else if self.a == 0 {
            let s = p.signum();
            self.a = p.abs();
            self.b = q * s;
        } else {
            let (h, x, y) = ext_gcd(self.a, p);
            let nb = x * self.b + y * q;
            let rest = (p / h) * self.b - (self.a / h) * q;
            self.a = h;
            self.b = nb;
            self.e = gcd(self.e, rest);
        }
        if self.e != 0 {
            self.b = self.b.rem_euclid(self.e);
        }
    }

    /// Generator of the image lattice at a concrete `d`.
    pub fn image_gcd(&self, d: i64) -> i64 {
        gcd(self.a + self.b * d, self.e * d)
    }

    /// Whether `A + B d` lies in the image at `d`.
    pub fn admits(&self, big_a: i64, big_b: i64, d: i64) -> bool {
        let v = big_a + big_b * d;
        match self.image_gcd(d) {
            0 => v == 0,
            h => v % h == 0,
        }
    }

    fn radius(&self, big_a: i64, big_b: i64, n: i64) -> i64 {
        let lcm = |x: i64, y: i64| (x / gcd(x, y)).saturating_mul(y);
        let (a, b, e) = (self.a, self.b, self.e);
        let r = if a == 0 {
            if (e == 0 && big_b != 0) || big_a != 0 {
                big_a.abs()
            } else {
                n
            }
        } else if e != 0 {
            lcm(n, a.saturating_mul(e))
        } else if b == 0 {
            lcm(n, a)
        } else {
            let k = b as i128 * big_a as i128 - big_b as i128 * a as i128;
            if k == 0 {
                a + n
            } else {
                ((k.unsigned_abs() as i128 + a as i128) / b.abs() as i128).min(i64::MAX as i128)
                    as i64
            }
        };
        r.saturating_add(n)
    }

    /// All `d = c (mod n)` within the structural search radius that admit `A + B d`.
    pub fn solve(&self, big_a: i64, big_b: i64, c: i64, n: i64, limit: usize) -> DSolutions {
        let r = self.radius(big_a, big_b, n);
        let truncated = r > SEARCH_CAP;
        let r = r.min(SEARCH_CAP);
        let mut values = Vec::new();
        // positive side starts at c, negative side at c - n
        let mut pos = c;
        let mut neg = c - n;
        while (pos <= r || -neg <= r) && values.len() < limit {
            let take_pos = pos <= -neg;
            let d = if take_pos { pos } else { neg };
            if self.admits(big_a, big_b, d) {
                values.push(d);
            }
            if take_pos {
                pos += n;
            } else {
                neg -= n;
            }
        }
        DSolutions { values, truncated }
    }
}
