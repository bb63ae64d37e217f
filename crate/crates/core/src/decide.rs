//! Decision procedures. Each Yes carries a conjugator checked by exact
//! multiplication before it is returned.

use std::fmt;

use crate::automorphism::{FullAuto, OuterAuto};
use crate::error::{Error, Result};
use crate::repset::{build_rep_set, build_rep_set_symbolic, AffineExp};
use crate::shifts::cyclic_reduce;
use crate::words::{GeodesicNF, GroupParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Yes {
        witness: GeodesicNF,
        phi_used: FullAuto,
        /// Multiple of the period used in the final match, when one was needed.
        lambda: Option<i64>,
    },
    No,
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub trace: Vec<String>,
}

impl Verdict {
    fn no(trace: Vec<String>) -> Self {
        Verdict {
            answer: Answer::No,
            trace,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self.answer, Answer::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self.answer, Answer::No)
    }

    pub fn witness(&self) -> Option<&GeodesicNF> {
        match &self.answer {
            Answer::Yes { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn phi_used(&self) -> Option<&FullAuto> {
        match &self.answer {
            Answer::Yes { phi_used, .. } => Some(phi_used),
            _ => None,
        }
    }

    /// 0 for Yes, 1 for No, 2 for Unknown.
    pub fn exit_code(&self) -> i32 {
        match self.answer {
            Answer::Yes { .. } => 0,
            Answer::No => 1,
            Answer::Unknown(_) => 2,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes { .. } => write!(f, "yes"),
            Answer::No => write!(f, "no"),
            Answer::Unknown(_) => write!(f, "unknown"),
        }
    }
}

/// Abelianised necessary condition: exponent sums of `x` and of `y` must be compatible.
fn exponent_obstruction(phi: &OuterAuto, u: &GeodesicNF, v: &GeodesicNF) -> Option<String> {
    let (su, sv) = (u.exponent_sum(), v.exponent_sum());
    let dt = v.t - u.t;
    let d = phi.d();
    match (phi.eps_x(), phi.eps_y()) {
        (1, ey) => {
            if su != sv {
                return Some(format!("x-exponent sums differ ({su} vs {sv})"));
            }
            // dt = lambda (1 - eps_y) - sigma_w d
            let step = if ey == 1 {
                d.abs()
            } else {
                crate::repset::gcd(2, d)
            };
            let ok = if step == 0 { dt == 0 } else { dt % step == 0 };
            (!ok).then(|| format!("y-exponent gap {dt} not a multiple of {step}"))
        }
        (_, ey) => {
            if (sv - su) % 2 != 0 {
                return Some(format!("x-exponent sums {su}, {sv} differ in parity"));
            }
            let sw = (sv - su) / 2;
            let rest = dt + sw * d;
            let ok = if ey == 1 { rest == 0 } else { rest % 2 == 0 };
            (!ok).then(|| {
                format!("y-exponent gap {dt} incompatible with conjugator x-exponent {sw}")
            })
        }
    }
}

/// Decides `u ~_phi v`, i.e. whether `v = phi(w)^-1 u w` for some `w`.
pub fn tcp_phi(
    g: &GroupParams,
    u: &GeodesicNF,
    v: &GeodesicNF,
    phi: &OuterAuto,
) -> Result<Verdict> {
    let um = g.to_modular(u);
    let vm = g.to_modular(v);
    let mut trace = vec![format!("phi = {phi}; u = {um}; v = {vm}")];
    if let Some(why) = exponent_obstruction(phi, u, v) {
        trace.push(format!("pruned: {why}"));
        return Ok(Verdict::no(trace));
    }
    let ru = cyclic_reduce(g, phi, &um);
    let rv = cyclic_reduce(g, phi, &vm);
    trace.push(format!(
        "reduced: u -> {} ({} steps), v -> {} ({} steps)",
        ru.result, ru.steps, rv.result, rv.steps
    ));
    if ru.result.free.len() != rv.result.free.len() {
        trace.push("reduced free lengths differ".into());
        return Ok(Verdict::no(trace));
    }
    let rs = build_rep_set(g, phi, &ru.result)?;
    if rs.is_pure_y() {
        trace.push(format!(
            "pure y-power class: {} residues, period {}",
            rs.chain_len(),
            rs.period()
        ));
    } else {
        trace.push(format!(
            "representative set: chain {} x {} shifts, twisted shift {}, period {}",
            rs.chain_len(),
            g.n(),
            rs.twisted_shift(),
            rs.period()
        ));
    }
    let Some(hit) = rs.member_match(&rv.result) else {
        trace.push("no member matches the reduced v".into());
        return Ok(Verdict::no(trace));
    };
    trace.push(format!(
        "match at chain {} shift {} with lambda {}",
        hit.member.chain, hit.member.shift, hit.lambda
    ));
    let witness = g.multiply_all(&[ru.witness, hit.witness, g.invert(&rv.witness)]);
    if phi.twisted_conjugate(g, u, &witness) != *v {
        return Err(Error::Internal(format!(
            "assembled witness {witness} does not verify"
        )));
    }
    trace.push("witness verified".into());
    Ok(Verdict {
        answer: Answer::Yes {
            witness,
            phi_used: FullAuto::from_outer(*phi),
            lambda: Some(hit.lambda),
        },
        trace,
    })
}

/// Decides twisted conjugacy for `psi(w) = g^-1 phi(w) g` through `g u ~_phi g v`.
pub fn tcp_given(
    g: &GroupParams,
    u: &GeodesicNF,
    v: &GeodesicNF,
    psi: &FullAuto,
) -> Result<Verdict> {
    let gu = g.multiply(&psi.inner, u);
    let gv = g.multiply(&psi.inner, v);
    let mut inner = tcp_phi(g, &gu, &gv, &psi.outer)?;
    inner.trace.insert(
        0,
        format!("inner part {}: deciding g u against g v", psi.inner),
    );
    if let Answer::Yes {
        witness, lambda, ..
    } = inner.answer
    {
        if psi.twisted_conjugate(g, u, &witness) != *v {
            return Err(Error::Internal("translated witness does not verify".into()));
        }
        inner.answer = Answer::Yes {
            witness,
            phi_used: psi.clone(),
            lambda,
        };
    }
    Ok(inner)
}

/// Plain conjugacy: twisted conjugacy for the identity.
pub fn conjugacy(g: &GroupParams, u: &GeodesicNF, v: &GeodesicNF) -> Result<Verdict> {
    tcp_phi(g, u, v, &OuterAuto::identity())
}

/// Candidates of `d` tried per residue class before giving up on it.
const CANDIDATES_PER_CLASS: usize = 6;

/// Decides whether `u ~_phi v` for some outer automorphism `phi`, recovering one.
pub fn tcp_uniform_outer(g: &GroupParams, u: &GeodesicNF, v: &GeodesicNF) -> Result<Verdict> {
    let um = g.to_modular(u);
    let vm = g.to_modular(v);
    let mut trace = Vec::new();
    let mut unknown = None;
    let (su, sv) = (u.exponent_sum(), v.exponent_sum());
    for ex in [1i8, -1] {
        if ex == 1 && su != sv || ex == -1 && (sv - su) % 2 != 0 {
            trace.push(format!("eps_x = {ex}: x-exponent sums rule it out"));
            continue;
        }
        for ey in [1i8, -1] {
            for c in 0..g.n() {
                let phi_c = OuterAuto::new(ex, ey, c as i64)?;
                let ru = cyclic_reduce(g, &phi_c, &um);
                let rv = cyclic_reduce(g, &phi_c, &vm);
                if ru.result.free.len() != rv.result.free.len() {
                    continue;
                }
                let tu = AffineExp::new(u.t, -ru.d_multiple);
                let tv = AffineExp::new(v.t, -rv.d_multiple);
                let sym = build_rep_set_symbolic(g, ex, ey, c, &ru.result.free, tu)?;
                let sol = sym.solve_d(&rv.result.free, tv, CANDIDATES_PER_CLASS);
                if sol.truncated && sol.values.is_empty() {
                    unknown = Some(format!("search for d truncated in class ({ex}, {ey}, {c})"));
                }
                if sol.values.is_empty() {
                    continue;
                }
                trace.push(format!(
                    "class ({ex}, {ey}, d = {c} mod {}): candidates {:?}",
                    g.n(),
                    sol.values
                ));
                for d in sol.values {
                    let phi = OuterAuto::new(ex, ey, d)?;
                    let verdict = tcp_phi(g, u, v, &phi)?;
                    if verdict.is_yes() {
                        trace.push(format!("recovered phi = {phi}"));
                        trace.extend(verdict.trace);
                        return Ok(Verdict {
                            answer: verdict.answer,
                            trace,
                        });
                    }
                    trace.push(format!("candidate d = {d} rejected by the concrete check"));
                }
            }
        }
    }
    match unknown {
        Some(why) => Ok(Verdict {
            answer: Answer::Unknown(why),
            trace,
        }),
        None => {
            trace.push("no outer class admits a solution".into());
            Ok(Verdict::no(trace))
        }
    }
}

/// Result of the single-automorphism orbit check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitVerdict {
    /// Recovered `d` on success.
    pub d: Option<i64>,
    /// Plain conjugacy verdict for `phi_d(u)` against `v`.
    pub verdict: Verdict,
}

/// Decides whether `v` is conjugate to `phi(u)` for some `phi = (eps_x, eps_y, d)`, recovering `d`.
pub fn orbit_single(
    g: &GroupParams,
    u: &GeodesicNF,
    v: &GeodesicNF,
    eps_x: i8,
    eps_y: i8,
) -> Result<OrbitVerdict> {
    let sigma = u.exponent_sum();
    let (alpha, beta) = (u.t, v.t);
    let rest = beta - eps_y as i64 * alpha;
    let mut trace = vec![format!("sigma = {sigma}, alpha = {alpha}, beta = {beta}")];
    let candidates: Vec<i64> = if sigma != 0 {
        if rest % sigma != 0 {
            trace.push(format!("{rest} is not divisible by {sigma}"));
            return Ok(OrbitVerdict {
                d: None,
                verdict: Verdict::no(trace),
            });
        }
        vec![rest / sigma]
    } else if rest != 0 {
        trace.push("sigma = 0 forces beta = eps_y alpha".into());
        return Ok(OrbitVerdict {
            d: None,
            verdict: Verdict::no(trace),
        });
    } else {
        (0..g.n() as i64).collect()
    };
    for d in candidates {
        let phi = OuterAuto::new(eps_x, eps_y, d)?;
        let image = phi.apply(g, u);
        let verdict = conjugacy(g, &image, v)?;
        trace.push(format!(
            "d = {d}: phi(u) = {image}, conjugacy {}",
            verdict.answer
        ));
        if verdict.is_yes() {
            trace.extend(verdict.trace);
            return Ok(OrbitVerdict {
                d: Some(d),
                verdict: Verdict {
                    answer: verdict.answer,
                    trace,
                },
            });
        }
    }
    Ok(OrbitVerdict {
        d: None,
        verdict: Verdict::no(trace),
    })
}
