//! Command-line front end. Exit codes: 0 yes, 1 no, 2 unknown, 3 and above errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::automorphism::{FullAuto, OuterAuto};
use crate::decide::{self, Answer, Verdict};
use crate::error::{Error, Result};
use crate::oracle::{self, SearchBudget};
use crate::repset::build_rep_set;
use crate::shifts::{cyclic_reduce, enumerate_finite_closure, MoveKind};
use crate::words::{GeodesicNF, GroupParams};

pub const EXIT_ERROR: i32 = 3;

pub type EdgeSet = BTreeSet<(usize, usize)>;

#[derive(Debug, Parser)]
#[command(
    name = "twistconj",
    version,
    about = "Twisted conjugacy in even dihedral Artin groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Group {
    /// Number of free generators x_0..x_{n-1}
    #[arg(long, conflicts_with = "m")]
    n: Option<u32>,
    /// Coxeter label m (even, at least 4); n = m/2
    #[arg(long)]
    m: Option<u32>,
}

impl Group {
    fn params(&self) -> Result<GroupParams> {
        match (self.n, self.m) {
            (Some(n), None) => GroupParams::new(n),
            (None, Some(m)) => GroupParams::from_m(m),
            _ => Err(Error::InvalidParams(
                "give exactly one of --n and --m".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
struct Twist {
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    ex: i8,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    ey: i8,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    d: i64,
}

impl Twist {
    fn outer(&self) -> Result<OuterAuto> {
        OuterAuto::new(self.ex, self.ey, self.d)
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Machine-readable output
    #[arg(long, conflicts_with_all = ["text", "dot"])]
    json: bool,
    /// Human-readable output (default)
    #[arg(long)]
    text: bool,
    /// Graphviz output (repset only)
    #[arg(long)]
    dot: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the normal form of a word
    Normalize {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        out: Output,
        word: String,
    },
    /// Apply an outer automorphism
    Phi {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        twist: Twist,
        #[command(flatten)]
        out: Output,
        /// Apply the inverse instead
        #[arg(long)]
        inverse: bool,
        word: String,
    },
    /// Decide twisted conjugacy for a given automorphism
    Tcp {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        twist: Twist,
        #[command(flatten)]
        out: Output,
        /// Inner part g of w -> g^-1 phi(w) g
        #[arg(long)]
        inner: Option<String>,
        u: String,
        v: String,
    },
    /// Decide whether some outer automorphism twists u to v
    TcpUniform {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        out: Output,
        u: String,
        v: String,
    },
    /// Decide plain conjugacy
    Conj {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        out: Output,
        u: String,
        v: String,
    },
    /// Decide whether v is conjugate to phi(u) for phi = (ex, ey, d), recovering d
    Orbit {
        #[command(flatten)]
        group: Group,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ex: i8,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ey: i8,
        #[command(flatten)]
        out: Output,
        u: String,
        v: String,
    },
    /// Emit the representative set of the class of u (after cyclic reduction)
    Repset {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        twist: Twist,
        #[command(flatten)]
        out: Output,
        /// Emit the full finite closure instead (needs ey = 1 and sigma = 0, ex = -1 or d = 0)
        #[arg(long)]
        closure: bool,
        u: String,
    },
    /// Brute-force conjugator search
    Oracle {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        twist: Twist,
        #[command(flatten)]
        out: Output,
        #[arg(long, default_value_t = 3)]
        oracle_max_free_len: usize,
        #[arg(long, default_value_t = 3)]
        oracle_max_y: i64,
        u: String,
        v: String,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<()> {
    writeln!(out, "{s}").map_err(|e| Error::Internal(format!("write failed: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    emit(
        out,
        &serde_json::to_string_pretty(v).expect("json value serialises"),
    )
}

fn phi_json(psi: &FullAuto) -> Value {
    json!({
        "ex": psi.outer.eps_x(),
        "ey": psi.outer.eps_y(),
        "d": psi.outer.d(),
        "inner": psi.inner.to_string(),
    })
}

fn verdict_json(v: &Verdict) -> Value {
    let (phi, witness, lambda) = match &v.answer {
        Answer::Yes {
            witness,
            phi_used,
            lambda,
        } => (
            phi_json(phi_used),
            json!(witness.to_string()),
            json!(lambda),
        ),
        _ => (Value::Null, Value::Null, Value::Null),
    };
    let mut obj = json!({
        "answer": v.answer.to_string(),
        "phi": phi,
        "witness": witness,
        "lambda": lambda,
        "trace": v.trace,
    });
    if let Answer::Unknown(why) = &v.answer {
        obj["reason"] = json!(why);
    }
    obj
}

fn print_verdict(out: &mut dyn Write, v: &Verdict, json_mode: bool) -> Result<i32> {
    if json_mode {
        emit_json(out, &verdict_json(v))?;
    } else {
        emit(out, &v.answer.to_string())?;
        if let Answer::Yes {
            witness, phi_used, ..
        } = &v.answer
        {
            emit(out, &format!("witness: {witness}"))?;
            emit(out, &format!("phi: {}", phi_used.outer))?;
            if !phi_used.inner.is_identity() {
                emit(out, &format!("inner: {}", phi_used.inner))?;
            }
        }
        if let Answer::Unknown(why) = &v.answer {
            emit(out, &format!("reason: {why}"))?;
        }
    }
    Ok(v.exit_code())
}

fn parse_pair(g: &GroupParams, u: &str, v: &str) -> Result<(GeodesicNF, GeodesicNF)> {
    Ok((g.parse(u)?, g.parse(v)?))
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Normalize {
            group,
            out: o,
            word,
        } => {
            let g = group.params()?;
            let w = g.parse(&word)?;
            if o.json {
                let m = g.to_modular(&w);
                emit_json(
                    out,
                    &json!({
                        "normal_form": w.to_string(),
                        "free": m.free.to_string(),
                        "t": w.t,
                        "c": m.c,
                        "k": m.k,
                    }),
                )?;
            } else {
                emit(out, &w.to_string())?;
            }
            Ok(0)
        }
        Command::Phi {
            group,
            twist,
            out: o,
            inverse,
            word,
        } => {
            let g = group.params()?;
            let phi = twist.outer()?;
            let w = g.parse(&word)?;
            let img = if inverse {
                phi.apply_inverse(&g, &w)
            } else {
                phi.apply(&g, &w)
            };
            if o.json {
                emit_json(
                    out,
                    &json!({"input": w.to_string(), "image": img.to_string()}),
                )?;
            } else {
                emit(out, &img.to_string())?;
            }
            Ok(0)
        }
        Command::Tcp {
            group,
            twist,
            out: o,
            inner,
            u,
            v,
        } => {
            let g = group.params()?;
            let phi = twist.outer()?;
            let (u, v) = parse_pair(&g, &u, &v)?;
            let verdict = match inner {
                Some(s) => decide::tcp_given(&g, &u, &v, &FullAuto::new(g.parse(&s)?, phi))?,
                None => decide::tcp_phi(&g, &u, &v, &phi)?,
            };
            print_verdict(out, &verdict, o.json)
        }
        Command::TcpUniform {
            group,
            out: o,
            u,
            v,
        } => {
            let g = group.params()?;
            let (u, v) = parse_pair(&g, &u, &v)?;
            print_verdict(out, &decide::tcp_uniform_outer(&g, &u, &v)?, o.json)
        }
        Command::Conj {
            group,
            out: o,
            u,
            v,
        } => {
            let g = group.params()?;
            let (u, v) = parse_pair(&g, &u, &v)?;
            print_verdict(out, &decide::conjugacy(&g, &u, &v)?, o.json)
        }
        Command::Orbit {
            group,
            ex,
            ey,
            out: o,
            u,
            v,
        } => {
            let g = group.params()?;
            let (u, v) = parse_pair(&g, &u, &v)?;
            let res = decide::orbit_single(&g, &u, &v, ex, ey)?;
            if o.json {
                let mut obj = verdict_json(&res.verdict);
                obj["d"] = json!(res.d);
                emit_json(out, &obj)?;
                Ok(res.verdict.exit_code())
            } else {
                let code = print_verdict(out, &res.verdict, false)?;
                if let Some(d) = res.d {
                    emit(out, &format!("d: {d}"))?;
                }
                Ok(code)
            }
        }
        Command::Repset {
            group,
            twist,
            out: o,
            closure,
            u,
        } => {
            let g = group.params()?;
            let phi = twist.outer()?;
            let u = g.to_modular(&g.parse(&u)?);
            let red = cyclic_reduce(&g, &phi, &u);
            if closure {
                return repset_closure(&g, &phi, &red.result, &o, out);
            }
            let rs = build_rep_set(&g, &phi, &red.result)?;
            if o.dot {
                emit(out, rs.to_dot().trim_end())?;
            } else if o.json {
                let elements: Vec<Value> = rs
                    .members()
                    .into_iter()
                    .map(|m| {
                        let nf = g.modular(m.free.clone(), m.t);
                        let w = g.multiply(&red.witness, &rs.member_witness(m.at));
                        json!({
                            "free": nf.free.to_string(),
                            "c": nf.c,
                            "k": nf.k,
                            "witness": w.to_string(),
                        })
                    })
                    .collect();
                emit_json(
                    out,
                    &json!({
                        "n": g.n(),
                        "phi": {"ex": phi.eps_x(), "ey": phi.eps_y(), "d": phi.d()},
                        "elements": elements,
                        "twisted_shift": rs.twisted_shift(),
                        "period": rs.period(),
                    }),
                )?;
            } else {
                emit(
                    out,
                    &format!(
                        "{} elements, twisted shift {}, period {}",
                        rs.len(),
                        rs.twisted_shift(),
                        rs.period()
                    ),
                )?;
                for m in rs.concrete_members() {
                    emit(out, &m.to_string())?;
                }
            }
            Ok(0)
        }
        Command::Oracle {
            group,
            twist,
            out: o,
            oracle_max_free_len,
            oracle_max_y,
            u,
            v,
        } => {
            let g = group.params()?;
            let phi = twist.outer()?;
            let (u, v) = parse_pair(&g, &u, &v)?;
            let budget = SearchBudget::new(oracle_max_free_len, oracle_max_y);
            let found = oracle::find_twisted_conjugator(&g, &phi, &u, &v, &budget)?;
            if o.json {
                emit_json(
                    out,
                    &json!({
                        "found": found.is_some(),
                        "witness": found.as_ref().map(|w| w.to_string()),
                        "search_size": budget.size(&g).to_string(),
                    }),
                )?;
            } else {
                match &found {
                    Some(w) => emit(out, &format!("found: {w}"))?,
                    None => emit(out, "not found within budget")?,
                }
            }
            Ok(if found.is_some() { 0 } else { 2 })
        }
    }
}

/// Undirected edges of the closure, split by move type, without self-loops.
/// Shifts across the whole free part (`k >= q`) act like y-moves and are dropped.
pub fn closure_edges(edges: &[(usize, usize, MoveKind)], q: usize) -> (EdgeSet, EdgeSet) {
    let mut x = BTreeSet::new();
    let mut y = BTreeSet::new();
    for &(a, b, kind) in edges {
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        match kind {
            MoveKind::Y(_) => {
                y.insert(key);
            }
            MoveKind::Bf(k) | MoveKind::Fb(k) if k >= q => {}
            _ => {
                x.insert(key);
            }
        }
    }
    (x, y)
}

fn repset_closure(
    g: &GroupParams,
    phi: &OuterAuto,
    u: &crate::words::ModularNF,
    o: &Output,
    out: &mut dyn Write,
) -> Result<i32> {
    let cl = enumerate_finite_closure(g, phi, u)?;
    let (xe, ye) = closure_edges(&cl.edges, u.free.len());
    if o.dot {
        let mut s = String::from("graph closure {\n  node [shape=box];\n");
        for (i, e) in cl.elements.iter().enumerate() {
            let yc = GeodesicNF::new(e.free.clone(), e.c as i64);
            s.push_str(&format!(
                "  e{i} [label=\"({yc}, y^{})\"];\n",
                e.k * g.n() as i64
            ));
        }
        for (a, b) in &xe {
            s.push_str(&format!("  e{a} -- e{b} [color=blue];\n"));
        }
        for (a, b) in &ye {
            s.push_str(&format!("  e{a} -- e{b} [color=red];\n"));
        }
        s.push('}');
        emit(out, &s)?;
    } else if o.json {
        let elements: Vec<Value> = cl
            .elements
            .iter()
            .map(|e| json!({"free": e.free.to_string(), "c": e.c, "k": e.k}))
            .collect();
        emit_json(
            out,
            &json!({
                "n": g.n(),
                "phi": {"ex": phi.eps_x(), "ey": phi.eps_y(), "d": phi.d()},
                "elements": elements,
                "x_shift_edges": xe.into_iter().collect::<Vec<_>>(),
                "y_shift_edges": ye.into_iter().collect::<Vec<_>>(),
            }),
        )?;
    } else {
        emit(out, &format!("{} elements", cl.elements.len()))?;
        for e in &cl.elements {
            emit(out, &e.to_string())?;
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["twistconj"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn normalize_pushes_y_right() {
        let (code, out, _) = call(&["normalize", "--n", "3", "y y x0"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "x1 y^2");
        let (_, out, _) = call(&["normalize", "--m", "6", "b b a"]);
        assert_eq!(out.trim(), "x1 y^2");
    }

    #[test]
    fn tcp_yes_prints_witness() {
        let (code, out, _) = call(&[
            "tcp",
            "--n",
            "3",
            "--ex",
            "1",
            "--ey",
            "1",
            "--d",
            "4",
            "x0 x2^-1 y^2",
            "x2^-1 x1 y^-2",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("witness:"));
    }

    #[test]
    fn tcp_json_and_no() {
        let (code, out, _) = call(&[
            "tcp",
            "--n",
            "3",
            "--d",
            "4",
            "--json",
            "x0 x2^-1 y^2",
            "x0 x2 y^2",
        ]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["answer"], "no");
        assert!(v["trace"].as_array().unwrap().len() > 1);
    }

    #[test]
    fn negative_flags() {
        let (code, out, _) = call(&[
            "phi", "--n", "3", "--ex", "-1", "--ey", "-1", "--d", "-2", "x0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "x0^-1 y^-2");
    }

    #[test]
    fn repset_json_example() {
        let (code, out, _) = call(&[
            "repset",
            "--n",
            "3",
            "--ex",
            "1",
            "--ey",
            "1",
            "--d",
            "4",
            "x0 x2 y^2",
            "--json",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["elements"].as_array().unwrap().len(), 18);
        assert_eq!(v["twisted_shift"], 24);
    }

    #[test]
    fn closure_dot_edge_counts() {
        let (code, out, _) = call(&[
            "repset",
            "--n",
            "3",
            "--d",
            "4",
            "--closure",
            "--dot",
            "x0 x2^-1 y^2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.matches("[label=").count(), 6);
        assert_eq!(out.matches("color=blue").count(), 9);
        assert_eq!(out.matches("color=red").count(), 6);
    }

    #[test]
    fn repset_dot_layout() {
        let (_, out, _) = call(&["repset", "--n", "3", "--d", "4", "--dot", "x0 x2 y^2"]);
        assert_eq!(out.matches("[label=").count(), 18);
        assert_eq!(out.matches("color=blue").count(), 15);
        assert_eq!(out.matches("color=red").count(), 12);
    }

    #[test]
    fn errors_exit_three() {
        let (code, _, err) = call(&["normalize", "--n", "3", "x0 q"]);
        assert_eq!(code, 3);
        assert!(err.contains("`q`") && err.contains("byte 3"), "{err}");
        let (code, _, _) = call(&["normalize", "--m", "5", "x0"]);
        assert_eq!(code, 3);
        let (code, _, _) = call(&["normalize", "--n", "3", "--m", "6", "x0"]);
        assert_eq!(code, 3);
        let (code, _, _) = call(&["bogus"]);
        assert_eq!(code, 3);
    }

    #[test]
    fn orbit_and_oracle() {
        let (code, out, _) = call(&["orbit", "--n", "3", "x0 x2 y^2", "x0 x1 y^10"]);
        assert_eq!(code, 0);
        assert!(out.contains("d: 4"));
        let (code, _, _) = call(&["orbit", "--n", "3", "x0 x2 y^2", "x0 x1 y^9"]);
        assert_eq!(code, 1);
        let (code, out, _) = call(&["oracle", "--n", "3", "--d", "4", "--json", "1", "y^-4"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["witness"], "x0");
    }

    #[test]
    fn uniform_and_conj() {
        let (code, _, _) = call(&["tcp-uniform", "--n", "3", "x0 x2 y^2", "x1 x2 y^9"]);
        assert_eq!(code, 0);
        let (code, _, _) = call(&["conj", "--n", "3", "x0 y", "x1 y"]);
        assert_eq!(code, 0);
        let (code, _, _) = call(&[
            "tcp", "--n", "3", "--d", "4", "--inner", "x1", "x0 x2 y", "x0 x2 y",
        ]);
        assert_eq!(code, 0);
    }
}
