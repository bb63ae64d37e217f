//! Outer automorphisms `phi = (eps_x, eps_y, d)` given by
//! `x0 -> x0^eps_x y^d`, `y -> y^eps_y`, and full automorphisms `w -> g^-1 phi(w) g`.

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{FreeLetter, FreeWord, GeodesicNF, GroupParams, ModularNF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OuterAuto {
    eps_x: i8,
    eps_y: i8,
    d: i64,
}

impl OuterAuto {
    pub fn new(eps_x: i8, eps_y: i8, d: i64) -> Result<Self> {
        if eps_x.abs() != 1 || eps_y.abs() != 1 {
            return Err(Error::InvalidAutomorphism(format!(
                "signs must be +1 or -1, got ({eps_x}, {eps_y})"
            )));
        }
        Ok(OuterAuto { eps_x, eps_y, d })
    }

    pub fn identity() -> Self {
        OuterAuto {
            eps_x: 1,
            eps_y: 1,
            d: 0,
        }
    }

    pub fn eps_x(&self) -> i8 {
        self.eps_x
    }

    pub fn eps_y(&self) -> i8 {
        self.eps_y
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn with_d(&self, d: i64) -> Self {
        OuterAuto { d, ..*self }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Free part of the image of one letter.
    pub fn letter_image(&self, g: &GroupParams, l: FreeLetter) -> FreeLetter {
        let ey = self.eps_y as i64;
        let i = l.index() as i64;
        if l.is_positive() {
            g.letter(ey * i, self.eps_x)
        } else {
            g.letter(ey * i + self.d, -self.eps_x)
        }
    }

    /// Free part of the preimage of one letter.
    pub fn letter_preimage(&self, g: &GroupParams, l: FreeLetter) -> FreeLetter {
        let ey = self.eps_y as i64;
        let i = l.index() as i64;
        if self.eps_x * l.sign() > 0 {
            g.letter(ey * i, 1)
        } else {
            g.letter(ey * (i - self.d), -1)
        }
    }

    /// `[phi(w)]_F`: images interleaved with the shifts coming from each `y^{+-d}`.
    pub fn free_image(&self, g: &GroupParams, w: &FreeWord) -> FreeWord {
        let mut prefix: i64 = 0;
        let img = w.letters().iter().map(|&l| {
            let out = g.shift_letter(prefix * self.d, self.letter_image(g, l));
            prefix += l.sign() as i64;
            out
        });
        FreeWord::reduce_from(img.collect::<Vec<_>>())
    }

    /// `[phi^-1(w)]_F`.
    pub fn free_preimage(&self, g: &GroupParams, w: &FreeWord) -> FreeWord {
        let step = -(self.eps_x as i64) * (self.eps_y as i64) * self.d;
        let mut prefix: i64 = 0;
        let img = w.letters().iter().map(|&l| {
            let out = g.shift_letter(prefix * step, self.letter_preimage(g, l));
            prefix += l.sign() as i64;
            out
        });
        FreeWord::reduce_from(img.collect::<Vec<_>>())
    }

    pub fn apply(&self, g: &GroupParams, u: &GeodesicNF) -> GeodesicNF {
        let sigma = u.free.exponent_sum();
        GeodesicNF::new(
            self.free_image(g, &u.free),
            sigma * self.d + self.eps_y as i64 * u.t,
        )
    }

    pub fn apply_inverse(&self, g: &GroupParams, u: &GeodesicNF) -> GeodesicNF {
        let sigma = u.free.exponent_sum();
        let exy = (self.eps_x as i64) * (self.eps_y as i64);
        GeodesicNF::new(
            self.free_preimage(g, &u.free),
            -exy * sigma * self.d + self.eps_y as i64 * u.t,
        )
    }

    pub fn apply_modular(&self, g: &GroupParams, u: &ModularNF) -> ModularNF {
        g.to_modular(&self.apply(g, &g.from_modular(u)))
    }

    /// Image computed by substituting each generator and multiplying out.
    /// Slower than [`OuterAuto::apply`]; kept as an independent route.
    pub fn apply_by_substitution(&self, g: &GroupParams, u: &GeodesicNF) -> GeodesicNF {
        let ey = self.eps_y as i64;
        let x0 = g.from_letter(FreeLetter::new(0, self.eps_x));
        let phi_x0 = g.multiply(&x0, &g.y_power(self.d));
        let mut acc = GeodesicNF::identity();
        for &l in u.free.letters() {
            // x_i = y^-i x0 y^i
            let i = l.index() as i64;
            let img = g.multiply_all(&[g.y_power(-ey * i), phi_x0.clone(), g.y_power(ey * i)]);
            let img = if l.is_positive() { img } else { g.invert(&img) };
            acc = g.multiply(&acc, &img);
        }
        g.multiply(&acc, &g.y_power(ey * u.t))
    }

    /// `phi(w)^-1 u w`.
    pub fn twisted_conjugate(&self, g: &GroupParams, u: &GeodesicNF, w: &GeodesicNF) -> GeodesicNF {
        let left = g.invert(&self.apply(g, w));
        g.multiply(&g.multiply(&left, u), w)
    }
}

impl fmt::Display for OuterAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.eps_x, self.eps_y, self.d)
    }
}

/// `w -> inner^-1 phi(w) inner`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FullAuto {
    pub inner: GeodesicNF,
    pub outer: OuterAuto,
}

impl FullAuto {
    pub fn new(inner: GeodesicNF, outer: OuterAuto) -> Self {
        FullAuto { inner, outer }
    }

    pub fn from_outer(outer: OuterAuto) -> Self {
        FullAuto {
            inner: GeodesicNF::identity(),
            outer,
        }
    }

    pub fn apply(&self, g: &GroupParams, w: &GeodesicNF) -> GeodesicNF {
        g.conjugate(&self.outer.apply(g, w), &self.inner)
    }

    /// `psi(w)^-1 u w`.
    pub fn twisted_conjugate(&self, g: &GroupParams, u: &GeodesicNF, w: &GeodesicNF) -> GeodesicNF {
        let left = g.invert(&self.apply(g, w));
        g.multiply(&g.multiply(&left, u), w)
    }
}
