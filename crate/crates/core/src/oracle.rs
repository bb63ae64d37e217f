//! Brute-force search for twisted conjugators.
//!
//! Candidates `w = w1 y^lambda` are tried in the order (free length, `|lambda|`,
//! `w1` lexicographic with `x0 < x0^-1 < x1 < ...`, positive `lambda` first), so
//! the witness returned is the first one in that order. Checks go through plain
//! multiplication and [`OuterAuto::twisted_conjugate`], not the shift formulas.

use crate::automorphism::OuterAuto;
use crate::error::{Error, Result};
use crate::words::{FreeLetter, FreeWord, GeodesicNF, GroupParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_free_len: usize,
    pub max_abs_y: i64,
    /// Largest number of candidates the search may visit.
    pub node_cap: u128,
}

impl SearchBudget {
    pub fn new(max_free_len: usize, max_abs_y: i64) -> Self {
        SearchBudget {
            max_free_len,
            max_abs_y: max_abs_y.max(0),
            node_cap: 50_000_000,
        }
    }

    /// Number of candidates `(w1, lambda)`.
    pub fn size(&self, g: &GroupParams) -> u128 {
        let k = 2 * g.n() as u128;
        let mut words: u128 = 1;
        let mut layer: u128 = 1;
        for l in 1..=self.max_free_len {
            layer = if l == 1 {
                k
            } else {
                layer.saturating_mul(k - 1)
            };
            words = words.saturating_add(layer);
        }
        words.saturating_mul(2 * self.max_abs_y as u128 + 1)
    }

    fn check(&self, g: &GroupParams) -> Result<()> {
        let size = self.size(g);
        if size > self.node_cap {
            return Err(Error::Budget(format!(
                "{size} candidates exceed the cap of {}",
                self.node_cap
            )));
        }
        Ok(())
    }
}

fn alphabet(g: &GroupParams) -> Vec<FreeLetter> {
    (0..g.n())
        .flat_map(|i| [FreeLetter::x(i), FreeLetter::x_inv(i)])
        .collect()
}

/// Calls `f` on every reduced word of length `len` in lexicographic order; stops when `f` returns true.
fn for_each_word<F: FnMut(&[FreeLetter]) -> bool>(
    alpha: &[FreeLetter],
    len: usize,
    f: &mut F,
) -> bool {
    fn go<F: FnMut(&[FreeLetter]) -> bool>(
        alpha: &[FreeLetter],
        len: usize,
        buf: &mut Vec<FreeLetter>,
        f: &mut F,
    ) -> bool {
        if buf.len() == len {
            return f(buf);
        }
        for &l in alpha {
            if buf.last() == Some(&l.inverse()) {
                continue;
            }
            buf.push(l);
            if go(alpha, len, buf, f) {
                return true;
            }
            buf.pop();
        }
        false
    }
    go(alpha, len, &mut Vec::with_capacity(len), f)
}

fn lambda_order(max_abs_y: i64) -> impl Iterator<Item = i64> {
    (0..=max_abs_y).flat_map(|a| if a == 0 { vec![0] } else { vec![a, -a] })
}

/// First `w` in canonical order with `phi(w)^-1 u w = v`, if any lies within the budget.
pub fn find_twisted_conjugator(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &GeodesicNF,
    v: &GeodesicNF,
    b: &SearchBudget,
) -> Result<Option<GeodesicNF>> {
    b.check(g)?;
    let ex = phi.eps_x() as i64;
    let ey = phi.eps_y() as i64;
    let (su, sv) = (u.exponent_sum(), v.exponent_sum());
    if !(u.free.len() + v.free.len()).is_multiple_of(2) {
        return Ok(None);
    }
    if ex == 1 && su != sv || ex == -1 && (sv - su) % 2 != 0 {
        return Ok(None);
    }
    let alpha = alphabet(g);
    for len in 0..=b.max_free_len {
        let mut best: Option<(i64, Vec<FreeLetter>)> = None;
        let rank = |lam: i64| (lam.abs(), lam < 0);
        for_each_word(&alpha, len, &mut |w1: &[FreeLetter]| {
            let sw: i64 = w1.iter().map(|l| l.sign() as i64).sum();
            if sv != su + sw * (1 - ex) {
                return false;
            }
            let free = FreeWord::reduce_from(w1.to_vec());
            for lam in lambda_order(b.max_abs_y) {
                if let Some((bl, _)) = &best {
                    if rank(lam) >= rank(*bl) {
                        break;
                    }
                }
                if v.t != u.t + lam * (1 - ey) - sw * phi.d() {
                    continue;
                }
                let w = GeodesicNF::new(free.clone(), lam);
                if phi.twisted_conjugate(g, u, &w) == *v {
                    best = Some((lam, w1.to_vec()));
                    break;
                }
            }
            // a zero-lambda hit cannot be beaten by later words of this length
            matches!(best, Some((0, _)))
        });
        if let Some((lam, w1)) = best {
            return Ok(Some(GeodesicNF::new(FreeWord::reduce_from(w1), lam)));
        }
    }
    Ok(None)
}

/// Smallest free length among twisted conjugates of `u` by elements within the budget.
pub fn min_free_length_in_class(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &GeodesicNF,
    b: &SearchBudget,
) -> Result<usize> {
    b.check(g)?;
    let alpha = alphabet(g);
    let mut best = u.free.len();
    for len in 0..=b.max_free_len {
        for_each_word(&alpha, len, &mut |w1: &[FreeLetter]| {
            let free = FreeWord::reduce_from(w1.to_vec());
            for lam in lambda_order(b.max_abs_y) {
                let w = GeodesicNF::new(free.clone(), lam);
                best = best.min(phi.twisted_conjugate(g, u, &w).free.len());
            }
            best == 0
        });
    }
    Ok(best)
}
