use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use realab::classify::classify_corpus;
use realab::components::{identity_component, pi0_via_cohomology, pi0_via_glue};
use realab::io::{
    emit_descended, emit_lattice, gen_random, parse_documents, parse_field_spec, CorpusManifest, DescendedDocument,
    Document, LatticeDocument,
};
use realab::isogeny::{decide_imaginary_isogeny, normal_form_1d, Decision, NoIsogeny};
use realab::lattice::{embed, split};
use realab::polarization::{
    decide_polarizable, dual_lattice, verify_polarization, PolarizabilityCertificate, SearchBudget,
};

const OK: u8 = 0;
const INVALID: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "realab", version, about = "Real lattices, component groups, polarizations and imaginary isogenies")]
struct Cli {
    /// Seed for randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bound for searches (candidate matrices, or optimizer iterations).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write a corpus manifest (classify-corpus) to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check lattice documents and any attached polarization.
    Validate { files: Vec<PathBuf> },
    /// Bring descended lattices into split normal form.
    Split { files: Vec<PathBuf> },
    /// Write lattices as descended lattices (P, theta).
    Embed { files: Vec<PathBuf> },
    /// Component group and identity component of the real points.
    Components { files: Vec<PathBuf> },
    /// Verify or search for polarizations.
    Polarize {
        #[command(subcommand)]
        action: PolarizeAction,
    },
    /// Dual lattices.
    Dual { files: Vec<PathBuf> },
    /// Decide whether two lattices are imaginary isogenous.
    Isogeny { files: Vec<PathBuf> },
    /// Rectangular or diamond normal form of one-dimensional lattices.
    NormalForm { files: Vec<PathBuf> },
    /// Partition lattices into imaginary-isogeny classes.
    ClassifyCorpus { files: Vec<PathBuf> },
    /// Random valid lattices.
    GenRandom {
        #[arg(long)]
        g: usize,
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Reload a manifest and re-verify every record.
    VerifyManifest { path: PathBuf },
}

#[derive(Subcommand)]
enum PolarizeAction {
    /// Check the `S =` form attached to each document.
    Verify { files: Vec<PathBuf> },
    /// Find a polarization or a certificate that none exists.
    Find { files: Vec<PathBuf> },
}

struct Failure(u8, String);

fn fail<T>(code: u8, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(code, msg.into()))
}

fn read_inputs(files: &[PathBuf]) -> Result<Vec<Document>, Failure> {
    let mut docs = Vec::new();
    let mut sources = Vec::new();
    if files.is_empty() || files.iter().any(|f| f.as_os_str() == "-") && files.len() == 1 {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure(USAGE, format!("error: cannot read standard input: {e}")))?;
        sources.push(("<stdin>".to_string(), text));
    } else {
        for f in files {
            let text = std::fs::read_to_string(f)
                .map_err(|e| Failure(USAGE, format!("error: cannot read {}: {e}", f.display())))?;
            sources.push((f.display().to_string(), text));
        }
    }
    for (origin, text) in sources {
        let parsed = parse_documents(&text).map_err(|e| Failure(INVALID, format!("{origin}: error: {e} [{}]", e.code())))?;
        docs.extend(parsed);
    }
    Ok(docs)
}

fn real_only(docs: Vec<Document>) -> Result<Vec<LatticeDocument>, Failure> {
    docs.into_iter()
        .map(|d| match d {
            Document::Real(l) => Ok(l),
            Document::Descended(d) => fail(INVALID, format!("error: {} is a descended block; run `realab split` first", d.name)),
        })
        .collect()
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    let mut out = String::new();
    let mut code = OK;
    let search = SearchBudget {
        iterations: cli.budget.map(|b| b as usize).unwrap_or(SearchBudget::default().iterations),
        restarts: SearchBudget::default().restarts,
        seed: cli.seed,
    };
    let isogeny_budget = cli.budget.unwrap_or(10_000);
    match cli.command {
        Command::Validate { files } => {
            for doc in real_only(read_inputs(&files)?)? {
                out.push_str(&format!("{}: valid (g = {}, field = {})\n", doc.name, doc.lattice.g(), doc.lattice.field()));
                match &doc.polarization {
                    Some(s) => match verify_polarization(&doc.lattice, s) {
                        Ok(true) => out.push_str(&format!("{}: polarization verified\n", doc.name)),
                        Ok(false) => {
                            out.push_str(&format!("{}: attached S is not a polarization\n", doc.name));
                            code = INVALID;
                        }
                        Err(e) => {
                            out.push_str(&format!("{}: attached S rejected: {e}\n", doc.name));
                            code = INVALID;
                        }
                    },
                    None => out.push_str(&format!("{}: polarization not checked (no S attached)\n", doc.name)),
                }
            }
        }
        Command::Split { files } => {
            for doc in read_inputs(&files)? {
                match doc {
                    Document::Real(l) => out.push_str(&emit_lattice(&LatticeDocument::new(l.name, l.lattice))),
                    Document::Descended(d) => {
                        let (lattice, _) =
                            split(&d.lattice).map_err(|e| Failure(INVALID, format!("error: {}: {e}", d.name)))?;
                        out.push_str(&emit_lattice(&LatticeDocument::new(d.name, lattice)));
                    }
                }
            }
        }
        Command::Embed { files } => {
            for doc in real_only(read_inputs(&files)?)? {
                out.push_str(&emit_descended(&DescendedDocument { name: doc.name, lattice: embed(&doc.lattice) }));
            }
        }
        Command::Components { files } => {
            for doc in real_only(read_inputs(&files)?)? {
                let err = |e: String| Failure(INVALID, format!("error: {}: {e}", doc.name));
                let glue = pi0_via_glue(&doc.lattice).map_err(|e| err(e.to_string()))?;
                let cohomology = pi0_via_cohomology(&doc.lattice).map_err(|e| err(e.to_string()))?;
                if glue != cohomology {
                    return Err(err(format!("component computations disagree ({} vs {})", glue.f2_rank, cohomology.f2_rank)));
                }
                let id = identity_component(&doc.lattice);
                out.push_str(&format!("lattice {}\n", doc.name));
                if glue.is_connected() {
                    out.push_str("components: 1 (connected)\n");
                } else {
                    out.push_str(&format!("components: {}\n", glue.order()));
                }
                out.push_str(&format!("pi0: (Z/2)^{}\n", glue.f2_rank));
                out.push_str(&format!("identity component: V0/Lambda+ torus of dimension {}\n", id.dimension));
            }
        }
        Command::Polarize { action: PolarizeAction::Verify { files } } => {
            for doc in real_only(read_inputs(&files)?)? {
                let Some(s) = &doc.polarization else {
                    out.push_str(&format!("{}: no S attached\n", doc.name));
                    code = INVALID;
                    continue;
                };
                match verify_polarization(&doc.lattice, s) {
                    Ok(true) => out.push_str(&format!("{}: polarization verified\n", doc.name)),
                    Ok(false) => {
                        out.push_str(&format!("{}: not a polarization\n", doc.name));
                        code = INVALID;
                    }
                    Err(e) => {
                        out.push_str(&format!("{}: {e}\n", doc.name));
                        code = INVALID;
                    }
                }
            }
        }
        Command::Polarize { action: PolarizeAction::Find { files } } => {
            for mut doc in real_only(read_inputs(&files)?)? {
                let cert = decide_polarizable(&doc.lattice, &search)
                    .map_err(|e| Failure(INVALID, format!("error: {}: {e}", doc.name)))?;
                doc.polarization = None;
                doc.certificate = None;
                match cert {
                    PolarizabilityCertificate::Yes(s) => {
                        out.push_str("# polarizable: yes\n");
                        doc.polarization = Some(s.matrix().clone());
                    }
                    PolarizabilityCertificate::No(q) => {
                        out.push_str("# polarizable: no (Q is positive semidefinite and orthogonal to the admissible forms)\n");
                        doc.certificate = Some(q);
                    }
                    PolarizabilityCertificate::Unknown(report) => {
                        out.push_str(&format!(
                            "# polarizable: unknown after {} iterations x {} restarts (seed {})\n",
                            report.budget.iterations, report.budget.restarts, report.budget.seed
                        ));
                        code = code.max(UNKNOWN);
                    }
                }
                out.push_str(&emit_lattice(&doc));
            }
        }
        Command::Dual { files } => {
            for doc in real_only(read_inputs(&files)?)? {
                let dual = dual_lattice(&doc.lattice).map_err(|e| Failure(INVALID, format!("error: {}: {e}", doc.name)))?;
                out.push_str(&emit_lattice(&LatticeDocument::new(format!("{}-dual", doc.name), dual.lattice)));
            }
        }
        Command::Isogeny { files } => {
            let docs = real_only(read_inputs(&files)?)?;
            let [a, b] = docs.as_slice() else {
                return fail(USAGE, format!("error: isogeny needs exactly two lattices, got {}", docs.len()));
            };
            let decision = decide_imaginary_isogeny(&a.lattice, &b.lattice, isogeny_budget)
                .map_err(|e| Failure(INVALID, format!("error: {e}")))?;
            out.push_str(&format!("{} ~ {}\n", a.name, b.name));
            match decision {
                Decision::Yes(u) => {
                    let rows: Vec<String> = (0..u.rows())
                        .map(|i| format!("[{}]", u.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
                        .collect();
                    out.push_str(&format!("verdict: yes\nwitness U = [{}]\n", rows.join(", ")));
                }
                Decision::No(reason) => {
                    let why = match reason {
                        NoIsogeny::IrrationalRatio(r) => format!("ratio F/F' = {r} is irrational"),
                        NoIsogeny::TrivialSolutionSpace => "no nonzero U maps QM into QM'".to_string(),
                        NoIsogeny::SingularSolutionSpace { dimension } => {
                            format!("all {dimension}-parameter solutions U are singular")
                        }
                    };
                    out.push_str(&format!("verdict: no\ncertificate: {why}\n"));
                }
                Decision::Unknown { candidates_tried } => {
                    out.push_str(&format!("verdict: unknown after {candidates_tried} candidates\n"));
                    code = UNKNOWN;
                }
            }
        }
        Command::NormalForm { files } => {
            for doc in real_only(read_inputs(&files)?)? {
                let nf = normal_form_1d(&doc.lattice).map_err(|e| Failure(INVALID, format!("error: {}: {e}", doc.name)))?;
                out.push_str(&format!("{}: {nf}\n", doc.name));
            }
        }
        Command::ClassifyCorpus { files } => {
            let docs = real_only(read_inputs(&files)?)?;
            let lattices: Vec<_> = docs.iter().map(|d| d.lattice.clone()).collect();
            let c = classify_corpus(&lattices, isogeny_budget).map_err(|e| Failure(INVALID, format!("error: {e}")))?;
            out.push_str(&format!(
                "classes: {} (merged on certified isogenies only, so this refines the true partition)\n",
                c.classes.len()
            ));
            for (k, class) in c.classes.iter().enumerate() {
                let names: Vec<&str> = class.iter().map(|&i| docs[i].name.as_str()).collect();
                out.push_str(&format!("class {}: {}\n", k + 1, names.join(" ")));
            }
            let unknown: Vec<String> =
                c.unknown_pairs().map(|(i, j)| format!("{}/{}", docs[i].name, docs[j].name)).collect();
            if unknown.is_empty() {
                out.push_str("unknown pairs: none\n");
            } else {
                out.push_str(&format!("unknown pairs: {}\n", unknown.join(" ")));
                code = UNKNOWN;
            }
            if let Some(path) = &cli.manifest {
                CorpusManifest::from_classification(&docs, &c, cli.seed, isogeny_budget)
                    .save(path)
                    .map_err(|e| Failure(INVALID, format!("error: {e}")))?;
            }
        }
        Command::GenRandom { g, field, count } => {
            let field = parse_field_spec(&field).map_err(|e| Failure(USAGE, format!("error: --field: {}", e.message)))?;
            let docs = gen_random(g, field, cli.seed, count).map_err(|e| Failure(USAGE, format!("error: {e}")))?;
            for (i, d) in docs.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&emit_lattice(d));
            }
        }
        Command::VerifyManifest { path } => {
            let m = CorpusManifest::load(&path).map_err(|e| Failure(INVALID, format!("error: {e}")))?;
            m.verify().map_err(|e| Failure(INVALID, format!("error: {e}")))?;
            out.push_str(&format!(
                "manifest verified: {} documents, {} records, {} classes\n",
                m.documents.len(),
                m.decisions.len(),
                m.partition.len()
            ));
        }
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
