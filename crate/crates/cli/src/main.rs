use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use geomgrid::{
    basis, census, decompose_to_atoms, enumerate, enumerate_geom_dotted, gridded_count, gridded_gf, joint_embed,
    member_geom, member_grid, min_gridding, normal_form, trace_equivalent,
    verify_forest_equality, CellAlphabet, CensusFilter, ClassKind, ClassSpec, Dfa, DottedMatrix, GridMatrix,
    Limits, Permutation, RationalFunction, SignAssignment, Word,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Computations on monotone and geometric grid classes of permutations.
///
/// Matrix files list rows from top to bottom with entries 0, 1, -1 (and d
/// for a dot where dotted matrices are accepted). Lines starting with # are
/// ignored, and a line `signs: c=... r=...` fixes the column and row signs.
/// Words are space-separated cells `k,l`.
#[derive(Parser)]
#[command(name = "geomgrid", version)]
struct Cli {
    /// Print JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a (possibly dotted) matrix file and print it normalized.
    ParseCheck { matrix: PathBuf },
    /// Print the refinement of a matrix.
    Refine {
        matrix: PathBuf,
        #[arg(long)]
        q: usize,
    },
    /// Print the least column and row signs, or fail if there are none.
    Signs { matrix: PathBuf },
    /// Whether the cell graph of the matrix is a forest.
    Forest { matrix: PathBuf },
    /// The permutation encoded by a word.
    Phi(WordArgs),
    /// The gridded permutation encoded by a word.
    Phisharp(WordArgs),
    /// The lexicographically least word with the same trace.
    NormalForm(WordArgs),
    /// Whether two words have the same trace.
    TraceEq {
        matrix: PathBuf,
        v: String,
        w: String,
    },
    /// Generating function of a gridded class or of a saved automaton.
    #[command(group(ArgGroup::new("source").required(true).args(["gridded", "dfa"])))]
    Gf {
        /// Gridded class of the matrix file.
        #[arg(long, requires = "matrix")]
        gridded: bool,
        /// Automaton in JSON form.
        #[arg(long, value_name = "FILE")]
        dfa: Option<PathBuf>,
        matrix: Option<PathBuf>,
    },
    /// Number of members of a given length, or of each length up to a bound.
    #[command(group(ArgGroup::new("length").required(true).args(["len", "max_len"])))]
    Count {
        matrix: PathBuf,
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        /// Count gridded permutations (traces) instead.
        #[arg(long, conflicts_with_all = ["grid", "avoid"])]
        gridded: bool,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// List the members of a given length.
    Enum {
        matrix: PathBuf,
        #[arg(long)]
        len: usize,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Whether a permutation belongs to the class.
    #[command(group(ArgGroup::new("kind").required(true).args(["geom", "grid"])))]
    Member {
        matrix: PathBuf,
        perm: String,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// The least geometric gridding of a permutation.
    Mingrid { matrix: PathBuf, perm: String },
    /// Basis elements up to a length. The list is never certified complete.
    Basis {
        matrix: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Members of a given length that are simple or indecomposable.
    #[command(group(ArgGroup::new("filter").args(["simple", "sum_indec", "skew_indec"])))]
    Census {
        matrix: PathBuf,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        simple: bool,
        #[arg(long)]
        sum_indec: bool,
        #[arg(long)]
        skew_indec: bool,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Split the image of the words avoiding forbidden subwords into
    /// dot-isolated matrices.
    Decompose {
        matrix: PathBuf,
        /// Forbidden words, one per line.
        #[arg(long, value_name = "FILE")]
        forbidden: Option<PathBuf>,
    },
    /// Find a member containing two given members, or test random pairs.
    JointEmbed {
        matrix: PathBuf,
        #[arg(requires = "sigma")]
        pi: Option<String>,
        sigma: Option<String>,
        /// Longest member searched.
        #[arg(long, default_value_t = 8)]
        bound: usize,
        /// Random pairs to test when no pair is given.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Longest sampled member.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Whether the monotone and geometric classes agree up to a length.
    VerifyForest {
        matrix: PathBuf,
        #[arg(long)]
        len: usize,
    },
}

#[derive(Args)]
struct WordArgs {
    matrix: PathBuf,
    word: String,
    /// Column and row signs, e.g. "c=+1,-1 r=+1".
    #[arg(long)]
    signs: Option<String>,
}

#[derive(Args)]
struct ClassArgs {
    /// Geometric grid class (the default).
    #[arg(long, conflicts_with = "grid")]
    geom: bool,
    /// Monotone grid class.
    #[arg(long)]
    grid: bool,
    /// Permutations to avoid, one per line.
    #[arg(long, value_name = "FILE")]
    avoid: Option<PathBuf>,
    /// Longest permutations enumerated.
    #[arg(long)]
    bound: Option<usize>,
}

enum Failure {
    /// Bad invocation or unreadable input.
    Usage(String),
    /// The computation could not be carried out on this input.
    Domain(String),
}

type Outcome = Result<bool, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

/// Matrix text without comments, and the signs line if present.
fn read_matrix_file(path: &Path) -> Result<(String, Option<SignAssignment>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    let mut signs = None;
    for line in text.lines().map(str::trim) {
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("signs:") {
            signs = Some(rest.trim().parse().map_err(|e| usage(format!("{}: {e}", path.display())))?);
        } else {
            rows.push(line);
        }
    }
    Ok((rows.join("\n"), signs))
}

fn read_matrix(path: &Path) -> Result<GridMatrix, Failure> {
    let (text, _) = read_matrix_file(path)?;
    text.parse().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_dotted(path: &Path) -> Result<DottedMatrix, Failure> {
    let (text, _) = read_matrix_file(path)?;
    text.parse().map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Alphabet with signs from the flag, else the file, else the least ones.
fn read_alphabet(path: &Path, signs: Option<&str>) -> Result<CellAlphabet, Failure> {
    let (text, file_signs) = read_matrix_file(path)?;
    let m: GridMatrix = text.parse().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let signs = match signs {
        Some(s) => Some(s.parse::<SignAssignment>().map_err(usage)?),
        None => file_signs,
    };
    match signs {
        Some(s) => CellAlphabet::with_signs(&m, s).map_err(domain),
        None => CellAlphabet::new(&m).map_err(domain),
    }
}

fn parse_perm(s: &str) -> Result<Permutation, Failure> {
    s.parse().map_err(|e| usage(format!("{s:?}: {e}")))
}

fn parse_word(alpha: &CellAlphabet, s: &str) -> Result<Word, Failure> {
    alpha.parse_word(s).map_err(usage)
}

fn data_lines(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn class_spec(matrix: &Path, class: &ClassArgs) -> Result<(ClassSpec, Limits), Failure> {
    let m = read_matrix(matrix)?;
    let avoid = match &class.avoid {
        Some(path) => data_lines(path)?.iter().map(|l| parse_perm(l)).collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    let kind = if class.grid { ClassKind::Grid } else { ClassKind::Geom };
    let spec = ClassSpec::new(kind, m, avoid).map_err(usage)?;
    let mut limits = Limits::default();
    if let Some(b) = class.bound {
        limits.max_len = b;
    }
    Ok((spec, limits))
}

fn perm_list(perms: &[Permutation]) -> (String, Value) {
    let text = perms.iter().map(|p| format!("{p}\n")).collect();
    (text, json!(perms))
}

fn gf_json(gf: &RationalFunction) -> Value {
    let coeffs = |p: &geomgrid::Poly| p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
    json!({
        "gf": gf.to_string(),
        "numerator": coeffs(gf.numerator()),
        "denominator": coeffs(gf.denominator()),
    })
}

fn boolean(out: &mut Output, value: bool, key: &str) -> Outcome {
    out.emit(format!("{value}\n"), json!({ key: value }));
    Ok(value)
}

struct Output {
    json: bool,
    buf: String,
}

impl Output {
    fn emit(&mut self, text: String, value: Value) {
        if self.json {
            self.buf.push_str(&value.to_string());
            self.buf.push('\n');
        } else {
            self.buf.push_str(&text);
        }
    }
}

fn run(command: Command, out: &mut Output) -> Outcome {
    match command {
        Command::ParseCheck { matrix } => {
            let d = read_dotted(&matrix)?;
            let sign_part = d.sign_part();
            out.emit(
                d.to_string(),
                json!({
                    "cols": d.cols(),
                    "rows": d.rows(),
                    "matrix": d.to_string(),
                    "dots": d.dots().len(),
                    "dot_isolated": d.is_dot_isolated(),
                    "partial_multiplication": sign_part.is_partial_multiplication(),
                }),
            );
            Ok(true)
        }
        Command::Refine { matrix, q } => {
            let r = read_matrix(&matrix)?.refine(q).map_err(usage)?;
            out.emit(r.to_string(), json!({ "matrix": r.to_string() }));
            Ok(true)
        }
        Command::Signs { matrix } => match read_matrix(&matrix)?.infer_signs() {
            Some(s) => {
                out.emit(
                    format!("{s}\n"),
                    json!({ "cols": s.col_signs(), "rows": s.row_signs() }),
                );
                Ok(true)
            }
            None => {
                out.emit("none\n".into(), Value::Null);
                Ok(false)
            }
        },
        Command::Forest { matrix } => {
            let m = read_matrix(&matrix)?;
            boolean(out, m.is_forest(), "forest")
        }
        Command::Phi(args) => {
            let alpha = read_alphabet(&args.matrix, args.signs.as_deref())?;
            let p = alpha.phi(&parse_word(&alpha, &args.word)?).map_err(domain)?;
            out.emit(format!("{p}\n"), json!(p));
            Ok(true)
        }
        Command::Phisharp(args) => {
            let alpha = read_alphabet(&args.matrix, args.signs.as_deref())?;
            let g = alpha.phi_sharp(&parse_word(&alpha, &args.word)?).map_err(domain)?;
            out.emit(
                format!("{g}\n"),
                json!({ "perm": g.perm(), "col_counts": g.col_counts(), "row_counts": g.row_counts() }),
            );
            Ok(true)
        }
        Command::NormalForm(args) => {
            let alpha = read_alphabet(&args.matrix, args.signs.as_deref())?;
            let nf = normal_form(&alpha, &parse_word(&alpha, &args.word)?);
            let text = alpha.format_word(&nf);
            out.emit(format!("{text}\n"), json!(text));
            Ok(true)
        }
        Command::TraceEq { matrix, v, w } => {
            let alpha = read_alphabet(&matrix, None)?;
            let same = trace_equivalent(&alpha, &parse_word(&alpha, &v)?, &parse_word(&alpha, &w)?).map_err(domain)?;
            boolean(out, same, "equivalent")
        }
        Command::Gf { dfa, matrix, .. } => {
            let gf = match (dfa, matrix) {
                (Some(path), _) => {
                    let text = fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    let dfa: Dfa = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    dfa.generating_function().map_err(domain)?
                }
                (None, Some(matrix)) => gridded_gf(&read_matrix(&matrix)?).map_err(domain)?,
                (None, None) => return Err(usage("a matrix file is required")),
            };
            out.emit(format!("{gf}\n"), gf_json(&gf));
            Ok(true)
        }
        Command::Count {
            matrix,
            len,
            max_len,
            gridded,
            class,
        } => {
            let lengths: Vec<usize> = match (len, max_len) {
                (Some(n), _) => vec![n],
                (None, Some(l)) => (0..=l).collect(),
                (None, None) => unreachable!("clap requires a length"),
            };
            let counts: Vec<(usize, String)> = if gridded {
                let m = read_matrix(&matrix)?;
                lengths
                    .iter()
                    .map(|&n| Ok((n, gridded_count(&m, n).map_err(domain)?.to_string())))
                    .collect::<Result<_, Failure>>()?
            } else {
                let (spec, limits) = class_spec(&matrix, &class)?;
                lengths
                    .iter()
                    .map(|&n| Ok((n, enumerate(&spec, n, &limits).map_err(domain)?.len().to_string())))
                    .collect::<Result<_, Failure>>()?
            };
            let number = |c: &str| c.parse::<u64>().map(Value::from).unwrap_or_else(|_| json!(c));
            if len.is_some() {
                let (n, c) = &counts[0];
                out.emit(format!("{c}\n"), json!({ n.to_string(): number(c) }));
            } else {
                let text = counts.iter().map(|(n, c)| format!("{n} {c}\n")).collect();
                let map: serde_json::Map<String, Value> =
                    counts.iter().map(|(n, c)| (n.to_string(), number(c))).collect();
                out.emit(text, Value::Object(map));
            }
            Ok(true)
        }
        Command::Enum { matrix, len, class } => {
            let (text, _) = read_matrix_file(&matrix)?;
            let members = if text.split_whitespace().any(|t| t == "d" || t == ".") {
                let d: DottedMatrix = text.parse().map_err(usage)?;
                enumerate_geom_dotted(&d, len).map_err(domain)?
            } else {
                let (spec, limits) = class_spec(&matrix, &class)?;
                enumerate(&spec, len, &limits).map_err(domain)?
            };
            let (text, value) = perm_list(&members);
            out.emit(text, value);
            Ok(true)
        }
        Command::Member { matrix, perm, class } => {
            let p = parse_perm(&perm)?;
            let (spec, _) = class_spec(&matrix, &class)?;
            let member = match spec.kind() {
                ClassKind::Geom => member_geom(&p, spec.matrix()),
                ClassKind::Grid => member_grid(&p, spec.matrix()),
            } && spec.avoid().iter().all(|b| !p.involves(b));
            boolean(out, member, "member")
        }
        Command::Mingrid { matrix, perm } => {
            let g = min_gridding(&parse_perm(&perm)?, &read_matrix(&matrix)?).map_err(domain)?;
            out.emit(
                format!("{g}\n"),
                json!({ "perm": g.perm(), "col_counts": g.col_counts(), "row_counts": g.row_counts() }),
            );
            Ok(true)
        }
        Command::Basis { matrix, max_len, class } => {
            let (spec, limits) = class_spec(&matrix, &class)?;
            let b = basis(&spec, max_len, &limits).map_err(domain)?;
            let (text, _) = perm_list(&b.elements);
            out.emit(text, serde_json::to_value(&b).expect("serializable"));
            if !out.json {
                eprintln!("basis elements up to length {max_len}; longer ones may exist");
            }
            Ok(true)
        }
        Command::Census {
            matrix,
            len,
            simple,
            sum_indec,
            skew_indec,
            class,
        } => {
            let filter = if simple {
                CensusFilter::Simple
            } else if sum_indec {
                CensusFilter::SumIndecomposable
            } else if skew_indec {
                CensusFilter::SkewIndecomposable
            } else {
                CensusFilter::All
            };
            let (spec, limits) = class_spec(&matrix, &class)?;
            let members = census(&spec, len, filter, &limits).map_err(domain)?;
            let (text, value) = perm_list(&members);
            out.emit(text, value);
            Ok(true)
        }
        Command::Decompose { matrix, forbidden } => {
            let m = read_matrix(&matrix)?;
            let alpha = CellAlphabet::new(&m).map_err(domain)?;
            let words: Vec<Word> = match forbidden {
                Some(path) => data_lines(&path)?
                    .iter()
                    .map(|l| if l == "ε" { Ok(Vec::new()) } else { parse_word(&alpha, l) })
                    .collect::<Result<_, _>>()?,
                None => Vec::new(),
            };
            let atoms = decompose_to_atoms(&m, &words).map_err(domain)?;
            let texts: Vec<String> = atoms.iter().map(|d| d.to_string()).collect();
            out.emit(texts.join("\n"), json!(texts));
            Ok(true)
        }
        Command::JointEmbed {
            matrix,
            pi,
            sigma,
            bound,
            samples,
            max_len,
            seed,
        } => {
            let d = read_dotted(&matrix)?;
            let explicit = pi.is_some();
            let pairs: Vec<(Permutation, Permutation)> = match (pi, sigma) {
                (Some(a), Some(b)) => vec![(parse_perm(&a)?, parse_perm(&b)?)],
                _ => {
                    let members: Vec<Permutation> = (1..=max_len)
                        .map(|n| enumerate_geom_dotted(&d, n).map_err(domain))
                        .collect::<Result<Vec<_>, _>>()?
                        .concat();
                    if members.is_empty() {
                        return Err(domain("the class has no nonempty members to sample"));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..samples)
                        .map(|_| {
                            let a = members.choose(&mut rng).expect("nonempty").clone();
                            let b = members.choose(&mut rng).expect("nonempty").clone();
                            (a, b)
                        })
                        .collect()
                }
            };
            let mut all_found = true;
            let mut text = String::new();
            let mut results = Vec::new();
            for (a, b) in pairs {
                let t = joint_embed(&d, &a, &b, bound).map_err(domain)?;
                all_found &= t.is_some();
                let shown = t.as_ref().map_or("none".to_string(), Permutation::to_string);
                text.push_str(&format!("{a} {b} {shown}\n"));
                results.push(json!({ "pi": a, "sigma": b, "tau": t }));
            }
            if explicit {
                let tau = results[0]["tau"].clone();
                let line = match tau.as_str() {
                    Some(t) => format!("{t}\n"),
                    None => "none\n".to_string(),
                };
                out.emit(line, results.remove(0));
            } else {
                out.emit(text, json!(results));
            }
            Ok(all_found)
        }
        Command::VerifyForest { matrix, len } => {
            let m = read_matrix(&matrix)?;
            let equal = verify_forest_equality(&m, len, &Limits::default()).map_err(domain)?;
            boolean(out, equal, "equal")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output {
        json: cli.json,
        buf: String::new(),
    };
    let outcome = run(cli.command, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.buf.as_bytes());
    let _ = stdout.flush();
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("geomgrid: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("geomgrid: {msg}");
            ExitCode::from(2)
        }
    }
}
