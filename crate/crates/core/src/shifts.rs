//! Moves on modular normal forms: twisted conjugation, phi-cyclic reduction,
//! y-shifts and back-to-front / front-to-back x-shifts.
//!
//! Every move returns the conjugator it used, so for a move `u -> v` with
//! witness `w` we have `v = phi(w)^-1 u w`.

use std::collections::{HashMap, VecDeque};

use crate::automorphism::OuterAuto;
use crate::error::{Error, Result};
use crate::words::{FreeLetter, FreeWord, GeodesicNF, GroupParams, ModularNF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Back-to-front x-shift moving `count` letters.
    Bf(usize),
    /// Front-to-back x-shift moving `count` letters.
    Fb(usize),
    /// y-shift by `lambda`.
    Y(i64),
    /// One phi-cyclic reduction step.
    Reduce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftMove {
    pub kind: MoveKind,
    pub witness: GeodesicNF,
}

/// `phi(w)^-1 u w` evaluated in closed form on the free part.
pub fn twisted_conjugate(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &ModularNF,
    w: &GeodesicNF,
) -> ModularNF {
    let sigma_w = w.free.exponent_sum();
    let ey = phi.eps_y() as i64;
    let tu = u.t(g);
    let gamma = -(sigma_w * phi.d() + ey * w.t);
    let a1 = g.phi_shift(gamma, &phi.free_image(g, &w.free).inverse());
    let a2 = g.phi_shift(gamma, &u.free);
    let a3 = g.phi_shift(gamma + tu, &w.free);
    let free = FreeWord::reduce_from(
        a1.letters()
            .iter()
            .chain(a2.letters())
            .chain(a3.letters())
            .copied()
            .collect::<Vec<_>>(),
    );
    g.modular(free, tu + w.t * (1 - ey) - sigma_w * phi.d())
}

/// The single letter `w` that strips the first and last letters, if one exists.
fn reducing_letter(
    g: &GroupParams,
    phi: &OuterAuto,
    first: FreeLetter,
    last: FreeLetter,
    alpha: i64,
) -> Option<(FreeLetter, i64)> {
    let ex = phi.eps_x() as i64;
    let ey = phi.eps_y() as i64;
    let e = ex * first.sign() as i64;
    if last.sign() as i64 != -ex * first.sign() as i64 {
        return None;
    }
    let i1 = first.index() as i64;
    let (w, target) = if e == 1 {
        (g.letter(ey * i1, 1), ey * i1 - alpha)
    } else {
        (
            g.letter(ey * (i1 - phi.d()), -1),
            ey * (i1 - phi.d()) - alpha,
        )
    };
    (g.residue(target) == last.index()).then_some((w, e))
}

/// True when no single twisted conjugation by a letter shortens the free part.
pub fn is_phi_cr(g: &GroupParams, phi: &OuterAuto, u: &ModularNF) -> bool {
    if u.free.len() < 2 {
        return true;
    }
    let (first, last) = (u.free.first().unwrap(), u.free.last().unwrap());
    reducing_letter(g, phi, first, last, u.c as i64).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub result: ModularNF,
    pub witness: GeodesicNF,
    /// `result.t = u.t - d_multiple * d`; the free part depends on `d` only mod `n`.
    pub d_multiple: i64,
    pub steps: usize,
}

/// Repeats single-letter reduction steps until the element is phi-CR.
pub fn cyclic_reduce(g: &GroupParams, phi: &OuterAuto, u: &ModularNF) -> CyclicReduction {
    let letters = u.free.letters();
    let (mut lo, mut hi) = (0usize, letters.len());
    // current free part = Phi_shift(letters[lo..hi])
    let mut shift: i64 = 0;
    let mut t = u.t(g);
    let mut d_multiple = 0i64;
    let mut wit = Vec::new();
    while hi - lo >= 2 {
        let first = g.shift_letter(shift, letters[lo]);
        let last = g.shift_letter(shift, letters[hi - 1]);
        let Some((w, e)) = reducing_letter(g, phi, first, last, t) else {
            break;
        };
        wit.push(w);
        lo += 1;
        hi -= 1;
        shift = g.residue(shift - e * phi.d()) as i64;
        t -= e * phi.d();
        d_multiple += e;
    }
    let free = FreeWord::reduce_from(
        letters[lo..hi]
            .iter()
            .map(|&l| g.shift_letter(shift, l))
            .collect::<Vec<_>>(),
    );
    CyclicReduction {
        result: g.modular(free, t),
        steps: wit.len(),
        witness: GeodesicNF::new(FreeWord::reduce_from(wit), 0),
        d_multiple,
    }
}

pub fn y_shift(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &ModularNF,
    lambda: i64,
) -> (ModularNF, ShiftMove) {
    let ey = phi.eps_y() as i64;
    let out = g.modular(
        g.phi_shift(-ey * lambda, &u.free),
        u.t(g) + lambda * (1 - ey),
    );
    (
        out,
        ShiftMove {
            kind: MoveKind::Y(lambda),
            witness: g.y_power(lambda),
        },
    )
}

fn check_shift(g: &GroupParams, phi: &OuterAuto, u: &ModularNF, count: usize) -> Result<()> {
    if count == 0 || count > u.free.len() {
        return Err(Error::Precondition(format!(
            "shift count {count} outside 1..={}",
            u.free.len()
        )));
    }
    if !is_phi_cr(g, phi, u) {
        return Err(Error::Precondition(format!(
            "{u} is not phi-cyclically reduced"
        )));
    }
    Ok(())
}

/// Moves the last `count` letters to the front.
pub fn bf_x_shift(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &ModularNF,
    count: usize,
) -> Result<(ModularNF, ShiftMove)> {
    check_shift(g, phi, u, count)?;
    let q = u.free.len();
    let u11 = u.free.slice(0..q - count);
    let u12 = g.phi_shift(-(u.c as i64), &u.free.slice(q - count..q));
    let s12 = u12.exponent_sum();
    let front = phi.free_image(g, &u12);
    let back = g.phi_shift(s12 * phi.d(), &u11);
    let out = g.modular(front.concat(&back), u.t(g) + s12 * phi.d());
    Ok((
        out,
        ShiftMove {
            kind: MoveKind::Bf(count),
            witness: GeodesicNF::new(u12.inverse(), 0),
        },
    ))
}

/// Moves the first `count` letters to the back.
pub fn fb_x_shift(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &ModularNF,
    count: usize,
) -> Result<(ModularNF, ShiftMove)> {
    check_shift(g, phi, u, count)?;
    let q = u.free.len();
    let u11 = u.free.slice(0..count);
    let u12 = u.free.slice(count..q);
    let exy = phi.eps_x() as i64 * phi.eps_y() as i64;
    let back = g.phi_shift(u.c as i64, &phi.free_preimage(g, &u11));
    let out = g.modular(
        u12.concat(&back),
        u.t(g) - exy * u11.exponent_sum() * phi.d(),
    );
    Ok((
        out,
        ShiftMove {
            kind: MoveKind::Fb(count),
            witness: phi.apply_inverse(g, &GeodesicNF::new(u11, 0)),
        },
    ))
}

/// Every element reachable by x-shifts of any length and y-shifts by one.
#[derive(Debug, Clone)]
pub struct Closure {
    pub elements: Vec<ModularNF>,
    /// `(from, to, kind)` for each move discovered.
    pub edges: Vec<(usize, usize, MoveKind)>,
}

impl Closure {
    pub fn contains(&self, v: &ModularNF) -> bool {
        self.elements.contains(v)
    }
}

/// Breadth-first closure, defined when `eps_y = 1` and one of `sigma = 0`, `eps_x = -1`, `d = 0` holds.
pub fn enumerate_finite_closure(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &ModularNF,
) -> Result<Closure> {
    let sigma = u.free.exponent_sum();
    if phi.eps_y() != 1 || (sigma != 0 && phi.eps_x() != -1 && phi.d() != 0) {
        return Err(Error::Precondition(
            "finite closure needs eps_y = 1 and (sigma = 0, eps_x = -1 or d = 0)".into(),
        ));
    }
    let q = u.free.len();
    if q == 0 {
        return Err(Error::Precondition(
            "finite closure needs a nonempty free part".into(),
        ));
    }
    if !is_phi_cr(g, phi, u) {
        return Err(Error::Precondition(format!(
            "{u} is not phi-cyclically reduced"
        )));
    }
    let n = g.n() as usize;
    let cap = 4 * n * n * n * q + 16;
    let mut index: HashMap<ModularNF, usize> = HashMap::new();
    let mut elements = vec![u.clone()];
    let mut edges = Vec::new();
    index.insert(u.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let cur = elements[i].clone();
        let mut next = Vec::new();
        for count in 1..=q {
            next.push(bf_x_shift(g, phi, &cur, count)?);
            next.push(fb_x_shift(g, phi, &cur, count)?);
        }
        next.push(y_shift(g, phi, &cur, 1));
        next.push(y_shift(g, phi, &cur, -1));
        for (v, mv) in next {
            let j = match index.get(&v) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::Budget(format!("closure exceeded {cap} elements")));
                    }
                    let j = elements.len();
                    index.insert(v.clone(), j);
                    elements.push(v);
                    queue.push_back(j);
                    j
                }
            };
            edges.push((i, j, mv.kind));
        }
    }
    Ok(Closure { elements, edges })
}
