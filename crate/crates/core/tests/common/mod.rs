//! Shared generators and identity checks for the integration suites.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use twistconj::{FreeLetter, FreeWord, GeodesicNF, GroupParams, ModularNF, OuterAuto};

pub type Check = fn(&mut StdRng) -> Result<(), String>;

pub fn random_phi(rng: &mut StdRng, n: u32) -> OuterAuto {
    let ex = if rng.gen() { 1 } else { -1 };
    let ey = if rng.gen() { 1 } else { -1 };
    let b = 2 * n as i64;
    OuterAuto::new(ex, ey, rng.gen_range(-b..=b)).unwrap()
}

pub fn random_letter(rng: &mut StdRng, n: u32) -> FreeLetter {
    FreeLetter::new(rng.gen_range(0..n), if rng.gen() { 1 } else { -1 })
}

/// Reduced word of exactly `len` letters.
pub fn random_reduced(rng: &mut StdRng, n: u32, len: usize) -> FreeWord {
    let mut out: Vec<FreeLetter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = random_letter(rng, n);
        if out.last() != Some(&l.inverse()) {
            out.push(l);
        }
    }
    FreeWord::reduce_from(out)
}

pub fn random_word(rng: &mut StdRng, n: u32, max_len: usize) -> FreeWord {
    let len = rng.gen_range(0..=max_len);
    random_reduced(rng, n, len)
}

pub fn random_element(rng: &mut StdRng, n: u32, max_len: usize, max_t: i64) -> GeodesicNF {
    GeodesicNF::new(random_word(rng, n, max_len), rng.gen_range(-max_t..=max_t))
}

/// Random group, automorphism and reduced word.
pub fn setup(rng: &mut StdRng) -> (GroupParams, OuterAuto, FreeWord) {
    let n = rng.gen_range(2..=5);
    let g = GroupParams::new(n).unwrap();
    let phi = random_phi(rng, n);
    let w = random_word(rng, n, 12);
    (g, phi, w)
}

fn single(l: FreeLetter) -> FreeWord {
    FreeWord::reduce_from([l])
}

fn eq<T: PartialEq + std::fmt::Debug>(a: T, b: T, what: &str) -> Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a:?} != {b:?}"))
    }
}

fn homomorphism(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let u = random_element(rng, g.n(), 10, 12);
    let v = random_element(rng, g.n(), 10, 12);
    eq(
        phi.apply(&g, &g.multiply(&u, &v)),
        g.multiply(&phi.apply(&g, &u), &phi.apply(&g, &v)),
        &format!("phi {phi} on {u} * {v}"),
    )
}

fn substitution_route(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let u = random_element(rng, g.n(), 10, 12);
    eq(
        phi.apply(&g, &u),
        phi.apply_by_substitution(&g, &u),
        &format!("phi {phi} on {u}"),
    )
}

fn inverse_round_trip(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let u = random_element(rng, g.n(), 10, 12);
    eq(
        phi.apply_inverse(&g, &phi.apply(&g, &u)),
        u.clone(),
        "inverse after apply",
    )?;
    eq(
        phi.apply(&g, &phi.apply_inverse(&g, &u)),
        u,
        "apply after inverse",
    )
}

fn letter_inverse_laws(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let l = random_letter(rng, g.n());
    let r = l.sign() as i64;
    let (ex, ey, d) = (phi.eps_x() as i64, phi.eps_y() as i64, phi.d());
    let img = GeodesicNF::new(single(phi.letter_image(&g, l)), 0);
    eq(
        phi.apply_inverse(&g, &img),
        GeodesicNF::new(single(l), -ey * r * d),
        "phi^-1(phi_F(l))",
    )?;
    let pre = GeodesicNF::new(single(phi.letter_preimage(&g, l)), 0);
    eq(
        phi.apply(&g, &pre),
        GeodesicNF::new(single(l), ex * r * d),
        "phi(phi^-1_F(l))",
    )
}

fn letter_shift_commutes(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let l = random_letter(rng, g.n());
    let s = rng.gen_range(-20..=20);
    let ey = phi.eps_y() as i64;
    eq(
        g.shift_letter(s, phi.letter_image(&g, l)),
        phi.letter_image(&g, g.shift_letter(ey * s, l)),
        "image",
    )?;
    eq(
        g.shift_letter(s, phi.letter_preimage(&g, l)),
        phi.letter_preimage(&g, g.shift_letter(ey * s, l)),
        "preimage",
    )
}

fn free_part_round_trip(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let sigma = w.exponent_sum();
    let (ex, ey, d) = (phi.eps_x() as i64, phi.eps_y() as i64, phi.d());
    eq(
        phi.apply(&g, &GeodesicNF::new(phi.free_preimage(&g, &w), 0)),
        GeodesicNF::new(w.clone(), ex * sigma * d),
        "phi([phi^-1(w)]_F)",
    )?;
    eq(
        phi.apply_inverse(&g, &GeodesicNF::new(phi.free_image(&g, &w), 0)),
        GeodesicNF::new(w, -ey * sigma * d),
        "phi^-1([phi(w)]_F)",
    )
}

fn free_part_shift_commutes(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let s = rng.gen_range(-20..=20);
    let ey = phi.eps_y() as i64;
    eq(
        g.phi_shift(s, &phi.free_image(&g, &w)),
        phi.free_image(&g, &g.phi_shift(ey * s, &w)),
        "image",
    )?;
    eq(
        g.phi_shift(s, &phi.free_preimage(&g, &w)),
        phi.free_preimage(&g, &g.phi_shift(ey * s, &w)),
        "preimage",
    )
}

fn free_part_of_inverse(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let sigma = w.exponent_sum();
    eq(
        phi.free_image(&g, &w).inverse(),
        g.phi_shift(sigma * phi.d(), &phi.free_image(&g, &w.inverse())),
        "([phi(w)]_F)^-1",
    )
}

fn exponent_sums(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let sigma = w.exponent_sum();
    let ex = phi.eps_x() as i64;
    eq(
        phi.free_image(&g, &w).exponent_sum(),
        ex * sigma,
        "sigma of image",
    )?;
    eq(
        phi.free_image(&g, &w.inverse()).exponent_sum(),
        -ex * sigma,
        "sigma of inverse image",
    )
}

fn split_law(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let cut = rng.gen_range(0..=w.len());
    let (w1, w2) = (w.slice(0..cut), w.slice(cut..w.len()));
    let rhs = phi
        .free_image(&g, &w1)
        .concat(&g.phi_shift(w1.exponent_sum() * phi.d(), &phi.free_image(&g, &w2)));
    eq(phi.free_image(&g, &w), rhs, "split")
}

fn image_preimage_duality(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let v = phi.free_image(&g, &w);
    eq(phi.free_preimage(&g, &v), w.clone(), "forward")?;
    let v2 = random_word(rng, g.n(), 12);
    eq(
        phi.free_image(&g, &phi.free_preimage(&g, &v2)),
        v2.clone(),
        "backward",
    )?;
    let other = random_word(rng, g.n(), 12);
    if other != w && phi.free_image(&g, &other) == v {
        return Err(format!("{other} and {w} share an image"));
    }
    Ok(())
}

/// Letter-by-letter image before any reduction.
fn raw_image(g: &GroupParams, phi: &OuterAuto, letters: &[FreeLetter]) -> Vec<FreeLetter> {
    let mut prefix = 0;
    letters
        .iter()
        .map(|&l| {
            let out = g.shift_letter(prefix * phi.d(), phi.letter_image(g, l));
            prefix += l.sign() as i64;
            out
        })
        .collect()
}

fn is_reduced(seq: &[FreeLetter]) -> bool {
    seq.windows(2).all(|p| p[1] != p[0].inverse())
}

fn preserves_reduction(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let raw = raw_image(&g, &phi, w.letters());
    if !is_reduced(&raw) || raw.len() != w.len() {
        return Err(format!("image of reduced {w} collapses under {phi}"));
    }
    eq(
        FreeWord::reduce_from(raw),
        phi.free_image(&g, &w),
        "raw vs reduced",
    )?;
    let mut letters = w.letters().to_vec();
    let pos = rng.gen_range(0..=letters.len());
    let l = random_letter(rng, g.n());
    letters.splice(pos..pos, [l, l.inverse()]);
    if is_reduced(&raw_image(&g, &phi, &letters)) {
        return Err(format!("unreduced input stays reduced under {phi}"));
    }
    Ok(())
}

fn letter_power(g: &GroupParams, phi: &OuterAuto, l: FreeLetter, k: usize) -> FreeLetter {
    (0..k).fold(l, |acc, _| phi.letter_image(g, acc))
}

fn even_letter_powers(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let l = random_letter(rng, g.n());
    let k = rng.gen_range(1..=2 * g.n() as i64);
    let (i, r, d) = (l.index() as i64, l.sign(), phi.d());
    let expected = match (phi.eps_x(), phi.eps_y(), r) {
        (1, 1, 1) => g.letter(i, r),
        (1, 1, _) => g.letter(i + 2 * k * d, r),
        (-1, 1, _) => g.letter(i + k * d, r),
        (1, -1, _) => g.letter(i, r),
        (_, _, 1) => g.letter(i + k * d, r),
        _ => g.letter(i - k * d, r),
    };
    eq(
        letter_power(&g, &phi, l, 2 * k as usize),
        expected,
        &format!("phi {phi}, {l}, k = {k}"),
    )
}

fn iterated_free_image(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, w) = setup(rng);
    let k = rng.gen_range(0..=2 * g.n() as usize);
    let mut it = GeodesicNF::new(w.clone(), 0);
    for _ in 0..k {
        it = phi.apply(&g, &it);
    }
    // y-exponent carried by phi^k of a positive letter: e_{j+1} = ey e_j + ex^j d
    let (ex, ey) = (phi.eps_x() as i64, phi.eps_y() as i64);
    let mut per_step = 0;
    let mut sign = 1;
    for _ in 0..k {
        per_step = ey * per_step + sign * phi.d();
        sign *= ex;
    }
    if ey == 1 {
        let closed = match (ex, k % 2) {
            (1, _) => k as i64 * phi.d(),
            (_, 0) => 0,
            _ => phi.d(),
        };
        eq(per_step, closed, "closed-form shift")?;
    }
    let mut prefix = 0;
    let mut out = Vec::new();
    for &l in w.letters() {
        out.push(g.shift_letter(prefix * per_step, letter_power(&g, &phi, l, k)));
        prefix += l.sign() as i64;
    }
    eq(
        it.free,
        FreeWord::reduce_from(out),
        &format!("phi {phi}, k = {k}, w = {w}"),
    )
}

fn closed_form_twisted_conjugate(rng: &mut StdRng) -> Result<(), String> {
    let (g, phi, _) = setup(rng);
    let u = random_element(rng, g.n(), 8, 12);
    let w = random_element(rng, g.n(), 8, 12);
    let closed = twistconj::shifts::twisted_conjugate(&g, &phi, &g.to_modular(&u), &w);
    eq(
        closed,
        g.to_modular(&phi.twisted_conjugate(&g, &u, &w)),
        "closed form",
    )
}

fn normal_form_round_trip(rng: &mut StdRng) -> Result<(), String> {
    let n = rng.gen_range(2..=5);
    let g = GroupParams::new(n).unwrap();
    let u = random_element(rng, n, 12, 30);
    eq(
        g.parse(&u.to_string()).map_err(|e| e.to_string())?,
        u.clone(),
        "parse(display)",
    )?;
    let m: ModularNF = g.to_modular(&u);
    eq(g.from_modular(&m), u.clone(), "modular round trip")?;
    eq(
        g.multiply(&u, &g.invert(&u)),
        GeodesicNF::identity(),
        "inverse",
    )
}

/// Every identity with a label.
pub const IDENTITIES: &[(&str, Check)] = &[
    ("homomorphism", homomorphism),
    ("substitution route", substitution_route),
    ("inverse automorphism", inverse_round_trip),
    ("letter inverse laws", letter_inverse_laws),
    ("letter shift commutes", letter_shift_commutes),
    ("free part round trip", free_part_round_trip),
    ("free part shift commutes", free_part_shift_commutes),
    ("free part of inverse", free_part_of_inverse),
    ("exponent sums", exponent_sums),
    ("split law", split_law),
    ("image preimage duality", image_preimage_duality),
    ("reduction preserved", preserves_reduction),
    ("even letter powers", even_letter_powers),
    ("iterated free image", iterated_free_image),
    (
        "closed form twisted conjugate",
        closed_form_twisted_conjugate,
    ),
    ("normal form round trip", normal_form_round_trip),
];

/// Runs `cases` random instances of each identity, returning (label, failures, first error).
pub fn run_identities(seed: u64, cases: usize) -> Vec<(&'static str, usize, Option<String>)> {
    use rand::SeedableRng;
    IDENTITIES
        .iter()
        .enumerate()
        .map(|(j, (name, check))| {
            let mut rng = StdRng::seed_from_u64(seed ^ (j as u64) << 32);
            let mut fails = 0;
            let mut first = None;
            for _ in 0..cases {
                if let Err(e) = check(&mut rng) {
                    fails += 1;
                    first.get_or_insert(e);
                }
            }
            (*name, fails, first)
        })
        .collect()
}

/// True when a Yes verdict's witness re-verifies by exact multiplication; false for any other answer.
pub fn certified(
    g: &GroupParams,
    u: &GeodesicNF,
    v: &GeodesicNF,
    verdict: &twistconj::Verdict,
) -> bool {
    match (verdict.witness(), verdict.phi_used()) {
        (Some(w), Some(psi)) => psi.twisted_conjugate(g, u, w) == *v,
        _ => false,
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub g: GroupParams,
    pub phi: OuterAuto,
    pub u: GeodesicNF,
    pub v: GeodesicNF,
}

/// `v = phi(w)^-1 u w` with `|u_1| <= 4`, `|w_1| <= 3`, `|lambda| <= 3`, `|d| <= 2n`.
pub fn positive_instance(rng: &mut StdRng, ns: &[u32]) -> Instance {
    let n = ns[rng.gen_range(0..ns.len())];
    let g = GroupParams::new(n).unwrap();
    let phi = random_phi(rng, n);
    let u = random_element(rng, n, 4, 6);
    let w = random_element(rng, n, 3, 3);
    let v = phi.twisted_conjugate(&g, &u, &w);
    Instance { g, phi, u, v }
}

/// A pair that is often not twisted conjugate: a positive pair with `v` nudged.
pub fn perturbed_instance(rng: &mut StdRng, ns: &[u32]) -> Instance {
    let mut inst = positive_instance(rng, ns);
    let n = inst.g.n();
    if rng.gen_bool(0.5) {
        let delta = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
        inst.v.t += delta;
    } else {
        let l = random_letter(rng, n);
        let mut letters = inst.v.free.letters().to_vec();
        let pos = rng.gen_range(0..=letters.len());
        letters.insert(pos, l);
        letters.insert(rng.gen_range(0..=letters.len()), random_letter(rng, n));
        inst.v.free = FreeWord::reduce_from(letters);
    }
    inst
}
