use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use trophurwitz::analysis::{
    boundary_divisor_cycle, connectedness_codim_one, cut_codim_one, numerical_equivalence_check, weight_space,
};
use trophurwitz::covers::RamificationData;
use trophurwitz::hurwitz::{hurwitz_cycle, hurwitz_fan, marked_cells, marked_hurwitz_cycle, HurwitzOptions, HurwitzParams};
use trophurwitz::json::{complex_from_str, complex_to_string, integer_to_json, parse_rational, rational_to_string};
use trophurwitz::linalg::gcd_maximal_minors_enumerated;
use trophurwitz::moduli::{enumerate_trees, moduli_fan, MarkedTree};
use trophurwitz::par::Workers;
use trophurwitz::polyhedra::{check_balancing, cycles_equal, degree, WeightedComplex};

const MINOR_LIMIT_VAR: &str = "TROP_MINOR_LIMIT";
const DEFAULT_MINOR_LIMIT: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "trophurwitz", version, about = "Tropical moduli fans and double Hurwitz cycles")]
struct Cli {
    /// Worker threads (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The fan M_0,n in its combinatorial subdivision.
    Moduli {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Hurwitz cycle H_k(x, p), or its marked version.
    Hurwitz {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<i64>,
        /// Points p_0 <= ... <= p_{N-1}; defaults to all zeros.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<String>,
        #[arg(long)]
        marked: bool,
        /// Only the maximal cone with these splits, e.g. "1,2;4,5,6;5,6".
        #[arg(long)]
        restrict_cone: Option<String>,
        /// Recompute every cell weight by enumerating maximal minors.
        #[arg(long)]
        verify_minors: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank and verdict of the lattice of balanced weights.
    WeightSpace {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connected components in codimension one.
    Connectedness {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Divisor of the distance-sum function, compared with H_{n-4}(x).
    CutCodimOne {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical equivalence of H_k(x) and the boundary combination D_k(x).
    Numequiv {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balancing check of a complex file.
    Balancing { file: PathBuf },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] trophurwitz::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) | CliError::Core(trophurwitz::Error::Unbalanced(_)) => 1,
            _ => 2,
        }
    }
}

type Res<T> = Result<T, CliError>;

/// Fixed-order `key: value` lines.
#[derive(Default)]
struct Summary(Vec<(&'static str, String)>);

impl Summary {
    fn add(&mut self, key: &'static str, value: impl ToString) -> &mut Self {
        self.0.push((key, value.to_string()));
        self
    }

    fn print(&self) {
        for (k, v) in &self.0 {
            println!("{k}: {v}");
        }
    }
}

fn ramification(x: Vec<i64>) -> Res<RamificationData> {
    RamificationData::new(x).map_err(|e| CliError::Usage(e.to_string()))
}

fn read_complex(path: &Path) -> Res<WeightedComplex> {
    let s = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(complex_from_str(&s)?)
}

fn write(path: &Option<PathBuf>, contents: String) -> Res<()> {
    if let Some(p) = path {
        fs::write(p, contents).map_err(|source| CliError::Io { path: p.clone(), source })?;
    }
    Ok(())
}

fn write_json(path: &Option<PathBuf>, v: &Value) -> Res<()> {
    write(path, serde_json::to_string_pretty(v).expect("serializable") + "\n")
}

fn describe(s: &mut Summary, x: &WeightedComplex, w: Workers) -> Res<bool> {
    let balanced = x.dim == 0 || check_balancing(x, w)?.balanced;
    s.add("ambient_dim", x.ambient_dim).add("dim", x.dim).add("maximal_cells", x.num_maximal());
    if x.dim == 0 {
        let d = if x.maximal.is_empty() { 0.into() } else { degree(x)? };
        s.add("degree", d);
    }
    s.add("balanced", balanced);
    Ok(balanced)
}

fn parse_cone(text: &str, n: usize) -> Res<MarkedTree> {
    let sets = text
        .split(';')
        .map(|part| {
            part.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad leaf label {t:?}"))))
                .collect::<Res<Vec<usize>>>()
        })
        .collect::<Res<Vec<_>>>()?;
    let refs: Vec<&[usize]> = sets.iter().map(|s| s.as_slice()).collect();
    MarkedTree::from_subsets(n, &refs).map_err(|e| CliError::Usage(e.to_string()))
}

fn minor_limit() -> Res<usize> {
    match std::env::var(MINOR_LIMIT_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{MINOR_LIMIT_VAR} must be a count, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MINOR_LIMIT),
    }
}

fn run(cli: Cli) -> Res<()> {
    let w = Workers(cli.workers);
    let mut s = Summary::default();
    match cli.command {
        Command::Moduli { n, out } => {
            if !(4..=12).contains(&n) {
                return Err(CliError::Usage(format!("n = {n} outside 4..=12")));
            }
            let f = moduli_fan(n, w)?;
            s.add("command", "moduli").add("n", n).add("rays", enumerate_trees(n, 1)?.len());
            let ok = describe(&mut s, &f, w)?;
            s.print();
            write(&out, complex_to_string(&f))?;
            if !ok {
                return Err(CliError::Verification("fan is not balanced".into()));
            }
        }
        Command::Hurwitz { k, x, p, marked, restrict_cone, verify_minors, out } => {
            let x = ramification(x)?;
            let params = if p.is_empty() {
                HurwitzParams::zeros(x.clone(), k)
            } else {
                let p = p.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>().map_err(|e| CliError::Usage(e.to_string()))?;
                HurwitzParams::new(x.clone(), k, p)
            }
            .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut opts = HurwitzOptions::with_workers(w);
            if let Some(text) = &restrict_cone {
                opts.restrict = Some(parse_cone(text, x.n())?);
            }
            let c = if marked { marked_hurwitz_cycle(&params, &opts)? } else { hurwitz_cycle(&params, &opts)? };
            let p_text: Vec<String> = params.p.iter().map(rational_to_string).collect();
            s.add("command", "hurwitz")
                .add("n", x.n())
                .add("k", k)
                .add("x", format!("{:?}", x.x))
                .add("p", format!("[{}]", p_text.join(", ")))
                .add("marked", marked)
                .add("restricted", restrict_cone.is_some());
            let ok = describe(&mut s, &c, w)?;
            let mut mismatch = 0;
            if verify_minors {
                let limit = minor_limit()?;
                let cells = marked_cells(&params, &opts)?;
                for mc in &cells {
                    if gcd_maximal_minors_enumerated(&mc.evaluation, Some(limit))? != mc.weight {
                        mismatch += 1;
                    }
                }
                s.add("minor_checks", cells.len()).add("minor_mismatches", mismatch);
            }
            s.print();
            write(&out, complex_to_string(&c))?;
            if !ok && restrict_cone.is_none() {
                return Err(CliError::Verification("cycle is not balanced".into()));
            }
            if mismatch > 0 {
                return Err(CliError::Verification(format!("{mismatch} cell weights differ from enumerated minors")));
            }
        }
        Command::WeightSpace { file, out } => {
            let c = read_complex(&file)?;
            let r = weight_space(&c, w)?;
            s.add("command", "weight-space")
                .add("maximal_cells", c.num_maximal())
                .add("rank", r.rank)
                .add("gcd", &r.gcd_of_given_weights)
                .add("verdict", r.verdict.as_str())
                .print();
            let basis: Vec<Value> = r.basis.iter().map(|b| Value::Array(b.iter().map(integer_to_json).collect())).collect();
            write_json(
                &out,
                &json!({"rank": r.rank, "gcd": integer_to_json(&r.gcd_of_given_weights), "verdict": r.verdict.as_str(), "basis": basis}),
            )?;
        }
        Command::Connectedness { file, out } => {
            let c = read_complex(&file)?;
            let r = connectedness_codim_one(&c);
            s.add("command", "connectedness")
                .add("maximal_cells", c.num_maximal())
                .add("components", r.components.len())
                .add("connected", r.connected)
                .print();
            write_json(&out, &json!({"connected": r.connected, "components": r.components}))?;
        }
        Command::CutCodimOne { x, out } => {
            let x = ramification(x)?;
            if x.n() < 4 {
                return Err(CliError::Usage("cut-codim-one needs at least four entries".into()));
            }
            let cut = cut_codim_one(&x, w)?;
            let fan = hurwitz_fan(x.n() - 4, &x, &HurwitzOptions::with_workers(w))?;
            let equal = cycles_equal(&cut, &fan, w)?;
            s.add("command", "cut-codim-one").add("n", x.n()).add("x", format!("{:?}", x.x));
            let ok = describe(&mut s, &cut, w)?;
            s.add("equals_hurwitz_fan", equal).print();
            write(&out, complex_to_string(&cut))?;
            if !ok || !equal {
                return Err(CliError::Verification("divisor differs from the Hurwitz fan".into()));
            }
        }
        Command::Numequiv { k, x, out } => {
            let x = ramification(x)?;
            if k > x.n().saturating_sub(3) {
                return Err(CliError::Usage(format!("k = {k} exceeds n - 3")));
            }
            let h = hurwitz_fan(k, &x, &HurwitzOptions::with_workers(w))?;
            let d = boundary_divisor_cycle(k, &x, w)?;
            let r = numerical_equivalence_check(&h, &d, k, x.n(), w)?;
            s.add("command", "numequiv")
                .add("n", x.n())
                .add("k", k)
                .add("x", format!("{:?}", x.x))
                .add("cones", r.table.len())
                .add("equal", r.equal)
                .print();
            let table: Vec<Value> = r
                .table
                .iter()
                .map(|(t, a, b)| json!({"cone": t.to_string(), "hurwitz": integer_to_json(a), "boundary": integer_to_json(b)}))
                .collect();
            write_json(&out, &json!({"equal": r.equal, "table": table}))?;
            if !r.equal {
                return Err(CliError::Verification("intersection degrees differ".into()));
            }
        }
        Command::Balancing { file } => {
            let c = read_complex(&file)?;
            let r = check_balancing(&c, w)?;
            s.add("command", "balancing")
                .add("maximal_cells", c.num_maximal())
                .add("balanced", r.balanced)
                .add("violations", r.violations.len())
                .print();
            if !r.balanced {
                return Err(CliError::Verification(format!("{} unbalanced codimension-one cells", r.violations.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
