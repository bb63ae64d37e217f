//! Free letters, reduced words and the two normal forms.
//!
//! The group with parameter `n` is presented as
//! `<x_0, ..., x_{n-1}, y | y^-1 x_i y = x_{i+1}>` with indices mod `n`.
//! Every element is written uniquely as `u1 * y^t` with `u1` a freely
//! reduced word in the `x_i`. Moving `y^s` across a letter re-indexes it:
//! `y^s x_i^e = x_{i-s}^e y^s`.

use std::fmt;

use crate::error::{Error, Result};

/// Group context: the number `n` of free generators (`m = 2n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupParams {
    n: u32,
}

impl GroupParams {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if n > 1 << 20 {
            return Err(Error::InvalidParams(format!("n = {n} is too large")));
        }
        Ok(GroupParams { n })
    }

    /// Builds the context from the Coxeter label `m`, which must be even and at least 4.
    pub fn from_m(m: u32) -> Result<Self> {
        if !m.is_multiple_of(2) || m < 4 {
            return Err(Error::InvalidParams(format!(
                "m must be even and at least 4, got {m}"
            )));
        }
        Self::new(m / 2)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        2 * self.n
    }

    /// Least non-negative residue mod `n`.
    pub fn residue(&self, z: i64) -> u32 {
        z.rem_euclid(self.n as i64) as u32
    }

    pub fn letter(&self, index: i64, sign: i8) -> FreeLetter {
        FreeLetter::new(self.residue(index), sign)
    }

    /// Re-indexes a letter: `x_i^e -> x_{i-s}^e`.
    pub fn shift_letter(&self, s: i64, l: FreeLetter) -> FreeLetter {
        self.letter(l.index as i64 - s, l.sign)
    }

    /// The free-part automorphism `Phi_s`, i.e. conjugation by `y^-s` restricted to the free factor.
    pub fn phi_shift(&self, s: i64, w: &FreeWord) -> FreeWord {
        if self.residue(s) == 0 {
            return w.clone();
        }
        FreeWord(w.0.iter().map(|&l| self.shift_letter(s, l)).collect())
    }

    pub fn check_letter(&self, l: FreeLetter) -> Result<()> {
        if l.index >= self.n {
            return Err(Error::InvalidParams(format!(
                "letter index {} out of range for n = {}",
                l.index, self.n
            )));
        }
        Ok(())
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn free_reduce(&self, seq: &[FreeLetter]) -> Result<FreeWord> {
        for &l in seq {
            self.check_letter(l)?;
        }
        Ok(FreeWord::reduce_from(seq.iter().copied()))
    }

    pub fn identity(&self) -> GeodesicNF {
        GeodesicNF::identity()
    }

    pub fn y_power(&self, t: i64) -> GeodesicNF {
        GeodesicNF {
            free: FreeWord::empty(),
            t,
        }
    }

    pub fn from_letter(&self, l: FreeLetter) -> GeodesicNF {
        GeodesicNF {
            free: FreeWord(vec![l]),
            t: 0,
        }
    }

    /// Builds the normal form of a token sequence by pushing every `y` to the right.
    pub fn to_geodesic(&self, tokens: &[Token]) -> Result<GeodesicNF> {
        let mut stack: Vec<FreeLetter> = Vec::new();
        let mut t: i64 = 0;
        for tok in tokens {
            match tok.gen {
                Gen::Y => {
                    t = t.checked_add(tok.exp).ok_or_else(|| Error::Parse {
                        position: tok.position,
                        token: tok.text.clone(),
                        message: "exponent overflow".into(),
                    })?;
                }
                Gen::X(i) => {
                    if i >= self.n {
                        return Err(Error::Parse {
                            position: tok.position,
                            token: tok.text.clone(),
                            message: format!("generator index {i} is not below n = {}", self.n),
                        });
                    }
                    let sign = if tok.exp < 0 { -1 } else { 1 };
                    let l = self.shift_letter(t, FreeLetter::new(i, sign));
                    for _ in 0..tok.exp.unsigned_abs() {
                        push_reduced(&mut stack, l);
                    }
                }
            }
        }
        Ok(GeodesicNF {
            free: FreeWord(stack),
            t,
        })
    }

    /// Parses a word such as `x0 x2^-1 y^2` (or `a b^-1 a`) into normal form.
    pub fn parse(&self, s: &str) -> Result<GeodesicNF> {
        self.to_geodesic(&tokenize(s)?)
    }

    pub fn parse_modular(&self, s: &str) -> Result<ModularNF> {
        Ok(self.to_modular(&self.parse(s)?))
    }

    pub fn multiply(&self, u: &GeodesicNF, v: &GeodesicNF) -> GeodesicNF {
        let shifted = self.phi_shift(u.t, &v.free);
        let free = FreeWord::reduce_from(u.free.0.iter().chain(shifted.0.iter()).copied());
        GeodesicNF { free, t: u.t + v.t }
    }

    pub fn multiply_all<'a, I>(&self, items: I) -> GeodesicNF
    where
        I: IntoIterator<Item = &'a GeodesicNF>,
    {
        items
            .into_iter()
            .fold(GeodesicNF::identity(), |acc, g| self.multiply(&acc, g))
    }

    /// `(u1 y^t)^-1 = Phi_{-t}(u1^-1) y^-t`.
    pub fn invert(&self, u: &GeodesicNF) -> GeodesicNF {
        GeodesicNF {
            free: self.phi_shift(-u.t, &u.free.inverse()),
            t: -u.t,
        }
    }

    pub fn pow(&self, g: &GeodesicNF, k: i64) -> GeodesicNF {
        let mut base = if k < 0 { self.invert(g) } else { g.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = GeodesicNF::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.multiply(&base, &base);
            }
        }
        acc
    }

    /// Plain conjugation `w^-1 u w`.
    pub fn conjugate(&self, u: &GeodesicNF, w: &GeodesicNF) -> GeodesicNF {
        let wu = self.multiply(&self.invert(w), u);
        self.multiply(&wu, w)
    }

    pub fn to_modular(&self, u: &GeodesicNF) -> ModularNF {
        let n = self.n as i64;
        ModularNF {
            free: u.free.clone(),
            c: u.t.rem_euclid(n) as u32,
            k: u.t.div_euclid(n),
        }
    }

    pub fn from_modular(&self, u: &ModularNF) -> GeodesicNF {
        GeodesicNF {
            free: u.free.clone(),
            t: u.t(self),
        }
    }

    pub fn modular(&self, free: FreeWord, t: i64) -> ModularNF {
        let n = self.n as i64;
        ModularNF {
            free,
            c: t.rem_euclid(n) as u32,
            k: t.div_euclid(n),
        }
    }
}

fn push_reduced(stack: &mut Vec<FreeLetter>, l: FreeLetter) {
    if stack.last() == Some(&l.inverse()) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// A letter `x_index^sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeLetter {
    index: u32,
    sign: i8,
}

impl FreeLetter {
    /// `sign` is normalised to +1 or -1.
    pub fn new(index: u32, sign: i8) -> Self {
        FreeLetter {
            index,
            sign: if sign < 0 { -1 } else { 1 },
        }
    }

    pub fn x(index: u32) -> Self {
        Self::new(index, 1)
    }

    pub fn x_inv(index: u32) -> Self {
        Self::new(index, -1)
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    pub fn inverse(&self) -> Self {
        FreeLetter {
            index: self.index,
            sign: -self.sign,
        }
    }
}

impl fmt::Display for FreeLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "x{}^-1", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

/// A freely reduced word in the `x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<FreeLetter>);

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord(Vec::new())
    }

    pub fn reduce_from<I: IntoIterator<Item = FreeLetter>>(seq: I) -> Self {
        let mut stack = Vec::new();
        for l in seq {
            push_reduced(&mut stack, l);
        }
        FreeWord(stack)
    }

    pub fn letters(&self) -> &[FreeLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<FreeLetter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<FreeLetter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Sum of the letter signs.
    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| l.sign as i64).sum()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        FreeWord::reduce_from(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn into_letters(self) -> Vec<FreeLetter> {
        self.0
    }

    /// Sub-word; the result is reduced since `self` is.
    pub fn slice(&self, range: std::ops::Range<usize>) -> FreeWord {
        FreeWord(self.0[range].to_vec())
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Normal form `free * y^t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GeodesicNF {
    pub free: FreeWord,
    pub t: i64,
}

impl GeodesicNF {
    pub fn new(free: FreeWord, t: i64) -> Self {
        GeodesicNF { free, t }
    }

    pub fn identity() -> Self {
        GeodesicNF::default()
    }

    pub fn is_identity(&self) -> bool {
        self.free.is_empty() && self.t == 0
    }

    /// Exponent sum over `x` letters.
    pub fn exponent_sum(&self) -> i64 {
        self.free.exponent_sum()
    }
}

impl fmt::Display for GeodesicNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y = match self.t {
            0 => None,
            1 => Some("y".to_string()),
            t => Some(format!("y^{t}")),
        };
        match (self.free.is_empty(), y) {
            (true, None) => write!(f, "1"),
            (true, Some(y)) => write!(f, "{y}"),
            (false, None) => write!(f, "{}", self.free),
            (false, Some(y)) => write!(f, "{} {y}", self.free),
        }
    }
}

/// Normal form `free * y^c * (y^n)^k` with `0 <= c < n`; `y^n` is central.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModularNF {
    pub free: FreeWord,
    pub c: u32,
    pub k: i64,
}

impl ModularNF {
    pub fn t(&self, g: &GroupParams) -> i64 {
        self.k * g.n() as i64 + self.c as i64
    }

    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }
}

impl fmt::Display for ModularNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yc = GeodesicNF::new(self.free.clone(), self.c as i64);
        write!(f, "{yc} [k={}]", self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    X(u32),
    Y,
}

/// One factor `gen^exp` of an input word, with its byte offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub gen: Gen,
    pub exp: i64,
    pub position: usize,
    pub text: String,
}

/// Splits input into factors. Accepts `x<i>`, `y`, `a` (= `x0`), `b` (= `y`),
/// each optionally followed by `^<int>`, separated by whitespace or `*`.
/// A lone `1` stands for the identity.
pub fn tokenize(s: &str) -> Result<Vec<Token>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, end: usize, msg: &str| Error::Parse {
        position: pos,
        token: s[pos..end.min(s.len()).max(pos)].to_string(),
        message: msg.to_string(),
    };
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() || ch == b'*' {
            i += 1;
            continue;
        }
        let start = i;
        let gen = match ch {
            b'x' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(err(start, i + 1, "expected generator index after `x`"));
                }
                let idx: u32 = s[ds..i]
                    .parse()
                    .map_err(|_| err(start, i, "generator index too large"))?;
                Gen::X(idx)
            }
            b'y' | b'b' => {
                i += 1;
                Gen::Y
            }
            b'a' => {
                i += 1;
                Gen::X(0)
            }
            b'1' => {
                i += 1;
                if i < bytes.len() && !(bytes[i].is_ascii_whitespace() || bytes[i] == b'*') {
                    return Err(err(start, i + 1, "unexpected character after `1`"));
                }
                continue;
            }
            _ => {
                let end = s[start..]
                    .char_indices()
                    .nth(1)
                    .map(|(k, _)| start + k)
                    .unwrap_or(s.len());
                return Err(err(start, end, "unknown generator"));
            }
        };
        let mut exp: i64 = 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let es = i;
            if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                i += 1;
            }
            let ds = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if ds == i {
                return Err(err(start, i + 1, "expected integer exponent after `^`"));
            }
            exp = s[es..i]
                .parse()
                .map_err(|_| err(start, i, "exponent out of range"))?;
        }
        if i < bytes.len() && !(bytes[i].is_ascii_whitespace() || bytes[i] == b'*') {
            // Allow juxtaposition such as `x0x1` or `ab`.
            if !matches!(bytes[i], b'x' | b'y' | b'a' | b'b') {
                return Err(err(start, i + 1, "unexpected character"));
            }
        }
        out.push(Token {
            gen,
            exp,
            position: start,
            text: s[start..i].to_string(),
        });
    }
    Ok(out)
}
