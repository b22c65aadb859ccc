//! The `torsion` command line.
//!
//! [`run`] takes the argument vector and output streams so the whole
//! interface can be driven from tests. Failures print a single line
//! `error: <kind>: <message>` to the error stream and return a nonzero
//! status.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

use crate::complexes::{build_mk, search_presentation, A2Complex, QuotientGraph};
use crate::error::{Error, Result};
use crate::exactint::{snf, IntMatrix};
use crate::fqlinalg::{enumerate_full_flags, flag_count, FieldSpec, Flag};
use crate::ktheory::{
    a2_identity_checks, a2_relations, annihilator_family, bound, chi, tree_identity_checks, tree_relations,
    verify_bound, IdentityCheck, RelationPresentation,
};
use crate::padic::ball;
use crate::spherical::count_at_distance;
use crate::weyl::{cycle_length_formula, cycle_perm, Permutation};

#[derive(Parser, Debug)]
#[command(name = "torsion", version, about = "Affine building quotients and the order of [I]")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Text, global = true)]
    emit: Emit,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form of a matrix file.
    Snf {
        file: PathBuf,
        /// Also print U, D and V with U·A·V = D.
        #[arg(long)]
        transforms: bool,
    },
    /// Length of the cyclic permutation (k+1, ..., n+1, 1, ..., k).
    WeylLength {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Full flags of F_q^m.
    Flags {
        #[command(subcommand)]
        action: FlagsAction,
    },
    /// Chambers of the spherical building at a given relative position.
    Sphere {
        #[command(subcommand)]
        action: SphereAction,
    },
    /// Ball around the standard vertex of the PGL_{n+1}(Q_p) building.
    Ball {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        radius: usize,
        /// Lift the default size guard.
        #[arg(long)]
        allow_large: bool,
        /// Validate the link of every interior vertex.
        #[arg(long)]
        links: bool,
    },
    /// Validate the vertex links of a complex file.
    LinkCheck { file: PathBuf },
    /// The matrix M_k of a complex file.
    Mk {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Order of [I] in the universal relation group.
    Order(OrderArgs),
    /// The annihilator m of [I].
    Bound(NqArgs),
    /// Euler characteristic of a quotient.
    Chi(NqArgs),
    /// Search for a one-vertex complex of order q.
    SearchPresentation {
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Count every solution instead of stopping at the first.
        #[arg(long)]
        exhaustive: bool,
    },
}

#[derive(Subcommand, Debug)]
enum FlagsAction {
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m: u32,
        /// Also count by enumeration.
        #[arg(long)]
        enumerate: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SphereAction {
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m: usize,
        /// Permutation in one-line notation, e.g. 2,3,1.
        #[arg(long, value_delimiter = ',')]
        w: Vec<usize>,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Monic modulus coefficients c0,c1,...,ce.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn field(&self) -> Result<FieldSpec> {
        FieldSpec::new(self.p, self.e, self.modulus.clone())
    }
}

#[derive(Args, Debug)]
struct OrderArgs {
    /// Graph file of a tree quotient.
    #[arg(long, conflicts_with = "a2", required_unless_present = "a2")]
    tree: Option<PathBuf>,
    /// Complex file of an Ã₂ quotient.
    #[arg(long)]
    a2: Option<PathBuf>,
    /// Include the M_k rows (Ã₂ only).
    #[arg(long)]
    with_mk: bool,
}

#[derive(Args, Debug)]
struct NqArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n0: u64,
}

struct Output {
    text: String,
    json: Value,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn strings<T: ToString>(xs: &[T]) -> Vec<Value> {
    xs.iter().map(|x| s(x.to_string())).collect()
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error: usage: {first}");
            return 2;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli.command)),
            Err(e) => Err(Error::InvalidInput(format!("thread pool: {e}"))),
        },
        None => execute(&cli.command),
    };
    match result {
        Ok(o) => {
            let rendered = match cli.emit {
                Emit::Text => o.text,
                Emit::Json => format!("{}\n", serde_json::to_string_pretty(&o.json).expect("json values serialize")),
            };
            if out.write_all(rendered.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let msg = e.detail().replace('\n', " ");
            let _ = writeln!(err, "error: {}: {msg}", e.kind());
            1
        }
    }
}

fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Snf { file, transforms } => cmd_snf(file, *transforms),
        Command::WeylLength { n, k } => cmd_weyl(*n, *k),
        Command::Flags { action: FlagsAction::Count { field, m, enumerate } } => cmd_flags(field, *m, *enumerate),
        Command::Sphere { action: SphereAction::Count { field, m, w } } => cmd_sphere(field, *m, w),
        Command::Ball { n, p, radius, allow_large, links } => cmd_ball(*n, *p, *radius, *allow_large, *links),
        Command::LinkCheck { file } => cmd_link_check(file),
        Command::Mk { file, k } => cmd_mk(file, *k),
        Command::Order(a) => cmd_order(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Chi(a) => cmd_chi(a),
        Command::SearchPresentation { q, exhaustive } => cmd_search(*q, *exhaustive),
    }
}

fn cmd_snf(file: &PathBuf, transforms: bool) -> Result<Output> {
    let a = IntMatrix::parse(&read(file)?)?;
    let r = snf(&a)?;
    let factors: Vec<String> = r.invariant_factors.iter().map(|d| d.to_string()).collect();
    let mut text = format!("invariant factors: {}\nrank: {}\n", factors.join(" "), r.rank());
    let mut json = json!({
        "rows": a.rows(),
        "cols": a.cols(),
        "rank": r.rank(),
        "invariant_factors": factors,
    });
    if transforms {
        text.push_str(&format!("U:\n{}D:\n{}V:\n{}", r.u, r.d, r.v));
        let m = |x: &IntMatrix| (0..x.rows()).map(|i| strings(x.row(i))).collect::<Vec<_>>();
        json["u"] = json!(m(&r.u));
        json["d"] = json!(m(&r.d));
        json["v"] = json!(m(&r.v));
    }
    Ok(Output { text, json })
}

fn cmd_weyl(n: usize, k: usize) -> Result<Output> {
    let w = cycle_perm(n, k)?;
    let len = w.length();
    let formula = cycle_length_formula(n, k);
    Ok(Output {
        text: format!("permutation {w}\nlength {len}\nk(n+1-k) = {formula}\n"),
        json: json!({ "n": n, "k": k, "permutation": w.images(), "length": len, "formula": formula }),
    })
}

fn cmd_flags(field: &FieldArgs, m: u32, enumerate: bool) -> Result<Output> {
    let f = field.field()?;
    let count = flag_count(f.order() as u64, m);
    let mut text = format!("{count}\n");
    let mut json = json!({ "q": f.order(), "m": m, "count": s(&count) });
    if enumerate {
        let n = enumerate_full_flags(&f, m as usize)?.len();
        text.push_str(&format!("enumerated {n}\n"));
        json["enumerated"] = s(n);
    }
    Ok(Output { text, json })
}

fn cmd_sphere(field: &FieldArgs, m: usize, w: &[usize]) -> Result<Output> {
    let f = field.field()?;
    let w = Permutation::new(w.to_vec())?;
    let count = count_at_distance(&f, m, &Flag::standard(&f, m), &w)?;
    let expected = BigUint::from(f.order()).pow(w.length() as u32);
    Ok(Output {
        text: format!("count {count}\nq^l(w) {expected}\n"),
        json: json!({
            "q": f.order(), "m": m, "w": w.images(), "length": w.length(),
            "count": s(count), "q_pow_length": s(&expected),
        }),
    })
}

fn cmd_ball(n: usize, p: u64, radius: usize, allow_large: bool, links: bool) -> Result<Output> {
    let b = ball(n, p, radius, allow_large)?;
    let mut tally = vec![0usize; n + 1];
    for v in &b.vertices {
        tally[v.vertex_type()] += 1;
    }
    let mut text = format!("vertices {}\nedges {}\nchambers {}\n", b.vertices.len(), b.edges.len(), b.chambers.len());
    for (t, c) in tally.iter().enumerate() {
        text.push_str(&format!("type {t}: {c}\n"));
    }
    let vertices: Vec<Value> = b
        .vertices
        .iter()
        .zip(&b.distance)
        .enumerate()
        .map(|(i, (v, d))| json!({ "index": i, "type": v.vertex_type(), "distance": d, "basis": v.basis_rows() }))
        .collect();
    let mut json = json!({
        "n": n, "p": p, "radius": radius,
        "vertex_count": b.vertices.len(), "edge_count": b.edges.len(), "chamber_count": b.chambers.len(),
        "type_counts": tally, "vertices": vertices, "edges": b.edges, "chambers": b.chambers,
    });
    if links {
        let mut report = Vec::new();
        for v in b.interior() {
            let link = b.link(v)?;
            let order = link.check(p)?;
            let degree = b.adjacency[v].len();
            text.push_str(&format!(
                "link {v}: degree {degree}, chambers {}, order {order}\n",
                link.simplices.len()
            ));
            report.push(json!({ "vertex": v, "degree": degree, "chambers": link.simplices.len(), "order": order }));
        }
        json["links"] = json!(report);
    }
    Ok(Output { text, json })
}

fn cmd_link_check(file: &PathBuf) -> Result<Output> {
    let x = A2Complex::parse(&read(file)?)?;
    let q = x.validate_links()?;
    let c = x.cell_counts(Some(q))?;
    Ok(Output {
        text: format!("order {q}\nn0 {}\nn1 {}\nn2 {}\nchi {}\n", c.n0, c.n1, c.n2, c.chi),
        json: json!({ "order": q, "n0": c.n0, "n1": c.n1, "n2": c.n2, "chi": c.chi }),
    })
}

fn cmd_mk(file: &PathBuf, k: usize) -> Result<Output> {
    let x = A2Complex::parse(&read(file)?)?;
    let m = build_mk(&x, k)?;
    let q = x.validate_links()?;
    let sum = (q as usize).pow((k * (3 - k)) as u32);
    let mut text = format!("k {k}\nsize {}\nrow and column sums {sum}\nnonzero {}\n", m.size, m.entries.len());
    for (d, c) in &m.entries {
        text.push_str(&format!("{d} {c}\n"));
    }
    Ok(Output {
        text,
        json: json!({ "k": k, "size": m.size, "order": q, "line_sum": sum, "entries": m.entries }),
    })
}

fn checks_text(checks: &[IdentityCheck]) -> String {
    checks
        .iter()
        .map(|c| format!("check {}: {}\n", c.name, if c.holds { "holds" } else { "FAILS" }))
        .collect()
}

fn order_output(p: &RelationPresentation, checks: Vec<IdentityCheck>, warnings: Vec<String>) -> Result<Output> {
    let r = p.decompose()?;
    let order = r.order_of(p.identity_index())?;
    let nonunit: Vec<String> =
        r.invariant_factors.iter().filter(|d| *d != &BigInt::from(1)).map(|d| d.to_string()).collect();
    let mut text = format!(
        "order of [I]: {order} (universal relation group; upper bound for K0)\ngenerators {}\nrelations {}\ninvariant factors (non-unit): {}\n",
        p.generators.len(),
        p.relations.rows(),
        if nonunit.is_empty() { "none".to_string() } else { nonunit.join(" ") }
    );
    text.push_str(&checks_text(&checks));
    for w in &warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let json = json!({
        "order": s(&order),
        "generators": p.generators.len(),
        "relations": p.relations.rows(),
        "invariant_factors": strings(&r.invariant_factors),
        "checks": checks.iter().map(|c| json!({ "name": c.name, "holds": c.holds })).collect::<Vec<_>>(),
        "warnings": warnings,
    });
    Ok(Output { text, json })
}

fn cmd_order(a: &OrderArgs) -> Result<Output> {
    if let Some(path) = &a.tree {
        if a.with_mk {
            return Err(Error::InvalidInput("--with-mk applies to --a2 only".into()));
        }
        let g = QuotientGraph::parse(&read(path)?)?;
        let p = tree_relations(&g)?;
        let checks = tree_identity_checks(&g, &p, &p.decompose()?)?;
        return order_output(&p, checks, g.warnings());
    }
    let path = a.a2.as_ref().expect("clap enforces one of --tree/--a2");
    let x = A2Complex::parse(&read(path)?)?;
    let q = x.validate_links()?;
    let p = a2_relations(&x, a.with_mk)?;
    let checks = a2_identity_checks(&x, &p, &p.decompose()?, a.with_mk.then_some(q))?;
    order_output(&p, checks, Vec::new())
}

fn cmd_bound(a: &NqArgs) -> Result<Output> {
    let b = bound(a.n, a.q, a.n0)?;
    let family = annihilator_family(a.n, a.q, a.n0)?;
    let (g, divides) = verify_bound(a.n, a.q, a.n0)?;
    let fam: Vec<String> = family.iter().map(|x| x.to_string()).collect();
    Ok(Output {
        text: format!(
            "m = {} (case {})\nannihilators: {}\ngcd: {g}\nm divides gcd: {}\n",
            b.m,
            b.case,
            fam.join(" "),
            if divides { "yes" } else { "no" }
        ),
        json: json!({ "m": s(&b.m), "case": b.case, "annihilators": fam, "gcd": s(&g), "divides": divides }),
    })
}

fn cmd_chi(a: &NqArgs) -> Result<Output> {
    let c = chi(a.n, a.q, a.n0)?;
    let case = if a.n == 1 { "tree" } else { "n >= 2" };
    Ok(Output {
        text: format!("chi = {} (case {case}; {})\n", c.value, if c.integral { "integral" } else { "not integral" }),
        json: json!({ "chi": s(&c.value), "integral": c.integral, "case": case }),
    })
}

fn cmd_search(q: u64, exhaustive: bool) -> Result<Output> {
    let o = search_presentation(q, exhaustive)?;
    let c = o.complex.cell_counts(Some(q))?;
    let mut text = o.complex.to_text();
    if let Some(n) = o.solutions {
        text.push_str(&format!("# solutions {n}\n"));
    }
    let mut json = json!({
        "complex": o.complex.to_text(), "n0": c.n0, "n1": c.n1, "n2": c.n2, "chi": c.chi,
    });
    if let Some(n) = o.solutions {
        json["solutions"] = json!(n);
    }
    Ok(Output { text, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("torsion").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bound_line() {
        let (code, out, _) = call(&["bound", "--n", "2", "--q", "5", "--n0", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), "m = 8 (case q ≡ 2 mod 3)");
    }

    #[test]
    fn weyl_line() {
        let (code, out, _) = call(&["weyl-length", "--n", "2", "--k", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("permutation [2,3,1]\nlength 2\n"));
    }

    #[test]
    fn unknown_flag_rejected() {
        let (code, _, err) = call(&["chi", "--n", "2", "--q", "2", "--n0", "1", "--bogus"]);
        assert_ne!(code, 0);
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("error: usage:"));
    }

    #[test]
    fn domain_error_is_one_line() {
        let (code, _, err) = call(&["bound", "--n", "2", "--q", "3", "--n0", "1"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: invalid-input:"));
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn json_chi() {
        let (code, out, _) = call(&["--emit", "json", "chi", "--n", "4", "--q", "4", "--n0", "1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["chi"], "144585");
        assert_eq!(v["integral"], true);
    }
}
