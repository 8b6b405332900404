use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dgdef::artin::{classify_surjection, quotient, truncated_polynomial};
use dgdef::complexes::CochainComplex;
use dgdef::dgla::{coefficient_extension, Dgla, NilpotentDgla};
use dgdef::format::{self, Document};
use dgdef::harness::{
    dd_groups, manetti_battery, schlessinger_homotopy_battery, standard_battery, tangent_report,
    FunctorUnderTest,
};
use dgdef::koszul::{adjunction_check, counit_cone_weight_cohomology, BarTruncation, CobarTruncation};
use dgdef::mcgauge::{
    gauge_act, lift_across_small_extension, mc_residual, obstruction_via_cone, ExtensionContext, GaugeElement,
    LiftOutcome, McElement,
};
use dgdef::qlinalg::{fmt_q, is_zero_vec, q, Q};
use dgdef::simplicial::{denormalize, gauge_one_simplex, mc_check_on_simplex, nerve_pi_square_zero};
use dgdef::Error;

#[derive(Parser)]
#[command(name = "dgdef", version, about = "Exact deformation theory of finite-dimensional DGLAs")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Direct,
    Cone,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorArg {
    Mc,
    Def,
    Broken,
    Constant,
}

#[derive(Clone, Copy, ValueEnum)]
enum BatteryKind {
    Manetti,
    Schlessinger,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a dgla, artin, bigraded, complex or extension file.
    Validate { file: PathBuf },
    /// Cohomology of a DGLA with representatives.
    Cohomology {
        dgla: PathBuf,
        /// inclusive range `a..b`
        #[arg(long)]
        range: Option<String>,
    },
    /// Maurer-Cartan residual of an element of `L (x) m(A)`.
    McCheck { dgla: PathBuf, artin: PathBuf, element: PathBuf },
    /// Order-by-order lifting along `k[t]/t^{n+1} -> k[t]/t^n`.
    McLift {
        dgla: PathBuf,
        /// `t^N`: lift up to `k[t]/t^N`
        #[arg(long)]
        tower: String,
        /// first-order element of `L^1` (plain labels); default: sum of the
        /// chosen `H^1` representatives
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Obstruction class of an element over `B` for a small extension `A -> B`.
    Obstruction {
        dgla: PathBuf,
        extension: PathBuf,
        element: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        route: Route,
    },
    /// Gauge action `exp(x) * omega`.
    GaugeAct {
        dgla: PathBuf,
        artin: PathBuf,
        gauge: PathBuf,
        element: PathBuf,
    },
    /// The one-simplex of the MC nerve joining `omega` to `exp(x) * omega`.
    OneSimplex {
        dgla: PathBuf,
        artin: PathBuf,
        gauge: PathBuf,
        element: PathBuf,
    },
    /// `pi_i` of the MC nerve over a square-zero algebra.
    NervePi {
        dgla: PathBuf,
        artin: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_i: usize,
    },
    /// Truncated bar construction as an artin file.
    Bar {
        dgla: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Truncated cobar construction as a dgla file.
    Cobar {
        artin: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// MC element versus its classifying bar and cobar maps.
    AdjunctionCheck {
        dgla: PathBuf,
        artin: PathBuf,
        element: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Cohomology of the weight piece of the counit cone.
    CounitCheck {
        dgla: PathBuf,
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Levels of the denormalization of a bigraded algebra.
    Denormalize {
        bigraded: PathBuf,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Total algebra of a bigraded algebra.
    Tot { bigraded: PathBuf },
    /// Tangent cohomology of `MC(L,-)` or `Def(L,-)`, optionally `DD(F, V)`.
    Tangent {
        dgla: PathBuf,
        #[arg(long, value_enum, default_value = "def")]
        functor: FunctorArg,
        #[arg(long, default_value = "0..4")]
        range: String,
        /// complex file `V` for the groups `DD^{n-i}(F, V)`
        #[arg(long)]
        dd: Option<PathBuf>,
    },
    /// Manetti and derived Schlessinger batteries on the shipped diagrams.
    Battery {
        dgla: PathBuf,
        #[arg(long, value_enum, default_value = "def")]
        functor: FunctorArg,
        #[arg(long, value_enum, default_value = "both")]
        kind: BatteryKind,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

struct Out {
    text: String,
    json: Value,
    code: u8,
}

impl Out {
    fn ok(text: String, json: Value) -> Self {
        Out { text, json, code: 0 }
    }
}

type Res<T> = Result<T, Error>;

fn read_doc(path: &Path) -> Res<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    format::parse(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn dgla(path: &Path) -> Res<Dgla> {
    format::to_dgla(&read_doc(path)?)
}

fn artin(path: &Path) -> Res<dgdef::artin::ArtinCdga> {
    format::to_artin(&read_doc(path)?)
}

fn host(l: &Path, a: &Path) -> Res<Arc<NilpotentDgla>> {
    Ok(Arc::new(coefficient_extension(&dgla(l)?, &artin(a)?)?))
}

fn parse_range(s: &str) -> Res<(i32, i32)> {
    let err = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("range must be a..b, found {s}"),
    };
    let (a, b) = s.split_once("..").ok_or_else(err)?;
    Ok((a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?))
}

fn element_json(host: &NilpotentDgla, v: &[Q]) -> Value {
    let terms: Vec<Value> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero_ref())
        .map(|(i, x)| {
            let (li, ai) = host.pairs[i];
            json!({"label": format!("{}@{}", host.l.label(li), host.a.label(ai)), "coeff": fmt_q(x)})
        })
        .collect();
    Value::Array(terms)
}

trait IsZeroRef {
    fn is_zero_ref(&self) -> bool;
}

impl IsZeroRef for Q {
    fn is_zero_ref(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

fn doc_json(text: &str) -> Value {
    format::parse(text)
        .ok()
        .and_then(|d| serde_json::to_value(d).ok())
        .unwrap_or(Value::Null)
}

fn run(cmd: Command) -> Res<Out> {
    match cmd {
        Command::Validate { file } => {
            let doc = read_doc(&file)?;
            let kind = doc.kind()?.to_string();
            let summary = match kind.as_str() {
                "dgla" => {
                    let l = format::to_dgla(&doc)?;
                    format!("valid dgla {}: dimension {}", l.name(), l.dim())
                }
                "artin" => {
                    let a = format::to_artin(&doc)?;
                    format!(
                        "valid artin {}: ideal dimension {}, nilpotency index {}",
                        a.name(),
                        a.dim(),
                        a.nilpotency_index()
                    )
                }
                "bigraded" => {
                    let b = format::to_bigraded(&doc)?;
                    format!("valid bigraded {}: ideal dimension {}", b.name, b.dim())
                }
                "complex" => {
                    let c = format::to_complex(&doc)?;
                    format!("valid complex: dimension {}", c.dim())
                }
                "extension" => {
                    let e = format::to_extension(&doc)?;
                    format!("valid extension: {:?}", classify_surjection(&e)?.kind)
                }
                other => {
                    return Err(Error::Validation(format!(
                        "kind {other} cannot be validated on its own"
                    )))
                }
            };
            Ok(Out::ok(summary.clone(), json!({"kind": kind, "valid": true, "summary": summary})))
        }
        Command::Cohomology { dgla: p, range } => {
            let l = dgla(&p)?;
            let (a, b) = match range {
                Some(r) => parse_range(&r)?,
                None => (
                    l.space().min_degree().unwrap_or(0),
                    l.space().max_degree().unwrap_or(0),
                ),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for n in a..=b {
                let h = l.cohomology(n);
                let reps: Vec<String> = h
                    .representatives
                    .iter()
                    .map(|r| {
                        let terms: Vec<(String, Q)> = r
                            .iter()
                            .enumerate()
                            .filter(|(_, x)| !x.is_zero_ref())
                            .map(|(i, x)| (l.label(i).to_string(), x.clone()))
                            .collect();
                        format::format_terms(&terms)
                    })
                    .collect();
                text.push_str(&format!("H^{n}: {}", h.dim));
                if !reps.is_empty() {
                    text.push_str(&format!("  [{}]", reps.join("; ")));
                }
                text.push('\n');
                rows.push(json!({"degree": n, "dim": h.dim, "representatives": reps}));
            }
            Ok(Out::ok(text.trim_end().into(), json!({"dgla": l.name(), "cohomology": rows})))
        }
        Command::McCheck { dgla: l, artin: a, element } => {
            let h = host(&l, &a)?;
            let w = format::to_host_element(&read_doc(&element)?, &h)?;
            McElement::new(h.clone(), w.clone())?;
            let r = mc_residual(&h, &w);
            let mc = is_zero_vec(&r);
            let text = format!(
                "MC: {}\nresidual:\n{}",
                if mc { "yes" } else { "no" },
                format::host_element_to_text(&h, &r, "residual")
            );
            Ok(Out {
                text: text.trim_end().into(),
                json: json!({"mc": mc, "residual": element_json(&h, &r)}),
                code: if mc { 0 } else { 2 },
            })
        }
        Command::McLift { dgla: p, tower, element } => {
            let l = dgla(&p)?;
            let n_max: usize = tower
                .strip_prefix("t^")
                .and_then(|s| s.parse().ok())
                .filter(|&n| n >= 2)
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    column: 0,
                    message: format!("tower must be t^N with N >= 2, found {tower}"),
                })?;
            let first = match element {
                Some(f) => format::to_lie_element(&read_doc(&f)?, &l)?,
                None => {
                    let mut v = vec![q(0); l.dim()];
                    for r in l.cohomology(1).representatives {
                        v = dgdef::qlinalg::add_vec(&v, &r);
                    }
                    v
                }
            };
            let base = coefficient_extension(&l, &truncated_polynomial(2)?)?;
            let t = base.a.index_of("t").expect("t");
            let mut omega = base.element(&[(first.clone(), t)]);
            if !dgdef::mcgauge::is_mc(&base, &omega) {
                return Err(Error::NotMaurerCartan);
            }
            let mut text = format!("stage k[t]/t^2: {}\n", render(&base, &omega));
            let mut stages = vec![json!({"order": 2, "element": element_json(&base, &omega)})];
            let mut code = 0;
            for n in 2..n_max {
                let a = truncated_polynomial(n + 1)?;
                let mut top = vec![q(0); a.dim()];
                top[a.dim() - 1] = q(1);
                let e = quotient(&a, &[top], &format!("k[t]/t^{n}"))?;
                let ctx = ExtensionContext::new(&l, &e)?;
                match lift_across_small_extension(&ctx, &omega)? {
                    LiftOutcome::Lifted { lift, class, .. } => {
                        omega = lift;
                        text.push_str(&format!(
                            "stage k[t]/t^{}: obstruction {}; lift {}\n",
                            n + 1,
                            class.describe(&ctx),
                            render(&ctx.host_a, &omega)
                        ));
                        stages.push(json!({"order": n + 1, "obstruction": class.describe(&ctx),
                            "element": element_json(&ctx.host_a, &omega)}));
                    }
                    LiftOutcome::Obstructed(class) => {
                        text.push_str(&format!(
                            "stage k[t]/t^{}: obstruction {}; no lift\n",
                            n + 1,
                            class.describe(&ctx)
                        ));
                        stages.push(json!({"order": n + 1, "obstruction": class.describe(&ctx), "element": null}));
                        code = 3;
                        break;
                    }
                }
            }
            Ok(Out {
                text: text.trim_end().into(),
                json: json!({"dgla": l.name(), "stages": stages, "lifted": code == 0}),
                code,
            })
        }
        Command::Obstruction {
            dgla: p,
            extension,
            element,
            route,
        } => {
            let l = dgla(&p)?;
            let e = format::to_extension(&read_doc(&extension)?)?;
            let ctx = ExtensionContext::new(&l, &e)?;
            let w = format::to_host_element(&read_doc(&element)?, &ctx.host_b)?;
            let direct = || -> Res<_> {
                Ok(match lift_across_small_extension(&ctx, &w)? {
                    LiftOutcome::Lifted { class, .. } | LiftOutcome::Obstructed(class) => class,
                })
            };
            let (d, c) = match route {
                Route::Direct => (Some(direct()?), None),
                Route::Cone => (None, Some(obstruction_via_cone(&ctx, &w)?)),
                Route::Both => (Some(direct()?), Some(obstruction_via_cone(&ctx, &w)?)),
            };
            let agree = match (&d, &c) {
                (Some(x), Some(y)) => x.coordinates == y.coordinates,
                _ => true,
            };
            let class = d.as_ref().or(c.as_ref()).expect("one route");
            let text = format!(
                "kernel kind: {:?}\nobstruction: {}\nliftable: {}{}",
                ctx.kind,
                class.describe(&ctx),
                class.is_zero(),
                if matches!(route, Route::Both) {
                    format!("\nroutes agree: {agree}")
                } else {
                    String::new()
                }
            );
            let coords: Vec<String> = class.coordinates.iter().map(fmt_q).collect();
            Ok(Out {
                text,
                json: json!({"obstruction": class.describe(&ctx), "coordinates": coords,
                    "liftable": class.is_zero(), "routes_agree": agree}),
                code: if agree { 0 } else { 2 },
            })
        }
        Command::GaugeAct {
            dgla: l,
            artin: a,
            gauge,
            element,
        } => {
            let h = host(&l, &a)?;
            let x = GaugeElement::new(h.clone(), format::to_host_element(&read_doc(&gauge)?, &h)?)?;
            let w = McElement::new(h.clone(), format::to_host_element(&read_doc(&element)?, &h)?)?;
            let r = gauge_act(&x, &w)?;
            Ok(Out::ok(
                format::host_element_to_text(&h, &r.coeffs, "gauge-act").trim_end().into(),
                json!({"result": element_json(&h, &r.coeffs), "mc": r.is_mc()}),
            ))
        }
        Command::OneSimplex {
            dgla: l,
            artin: a,
            gauge,
            element,
        } => {
            let h = host(&l, &a)?;
            let x = GaugeElement::new(h.clone(), format::to_host_element(&read_doc(&gauge)?, &h)?)?;
            let w = McElement::new(h.clone(), format::to_host_element(&read_doc(&element)?, &h)?)?;
            let cell = gauge_one_simplex(&w, &x)?;
            let chk = mc_check_on_simplex(&cell)?;
            let comps = cell.describe();
            let mut text = String::from("cell:\n");
            for (lab, f) in &comps {
                text.push_str(&format!("  {lab}: {f}\n"));
            }
            text.push_str(&format!("MC on the simplex: {}", chk.certified));
            Ok(Out {
                text,
                json: json!({"components": comps.iter().map(|(l, f)| json!({"label": l, "form": f})).collect::<Vec<_>>(),
                    "mc": chk.certified}),
                code: if chk.certified { 0 } else { 2 },
            })
        }
        Command::NervePi { dgla: l, artin: a, max_i } => {
            let (l, a) = (dgla(&l)?, artin(&a)?);
            let mut text = String::new();
            let mut rows = Vec::new();
            for i in 0..=max_i {
                let d = nerve_pi_square_zero(&l, &a, i)?;
                text.push_str(&format!("pi_{i}: {d}\n"));
                rows.push(json!({"i": i, "dim": d}));
            }
            Ok(Out::ok(text.trim_end().into(), json!({"pi": rows})))
        }
        Command::Bar { dgla: p, order } => {
            let b = BarTruncation::new(&dgla(&p)?, order)?;
            let text = format::artin_to_text(&b.algebra);
            Ok(Out::ok(text.trim_end().into(), doc_json(&text)))
        }
        Command::Cobar { artin: p, order } => {
            let c = CobarTruncation::new(&artin(&p)?, order)?;
            let text = format::dgla_to_text(&c.dgla);
            Ok(Out::ok(text.trim_end().into(), doc_json(&text)))
        }
        Command::AdjunctionCheck {
            dgla: l,
            artin: a,
            element,
            order,
        } => {
            let h = host(&l, &a)?;
            let w = format::to_host_element(&read_doc(&element)?, &h)?;
            let order = order.unwrap_or_else(|| h.a.nilpotency_index().max(2));
            let r = adjunction_check(&h, &w, order)?;
            let text = format!(
                "MC: {}\ncobar map valid: {}\nbar map valid: {}\nroundtrips: {}\nconsistent: {}",
                r.is_mc,
                r.cobar_map_valid,
                r.bar_map_valid,
                r.roundtrips,
                r.consistent()
            );
            Ok(Out {
                text,
                json: serde_json::to_value(&r).unwrap_or(Value::Null),
                code: if r.consistent() { 0 } else { 2 },
            })
        }
        Command::CounitCheck { dgla: p, weight, order } => {
            let l = dgla(&p)?;
            let dims = counit_cone_weight_cohomology(&l, weight, order.unwrap_or(weight))?;
            let acyclic = dims.values().all(|&d| d == 0);
            let mut text = String::new();
            for (n, d) in &dims {
                text.push_str(&format!("H^{n}: {d}\n"));
            }
            text.push_str(&format!("acyclic: {acyclic}"));
            Ok(Out {
                text,
                json: json!({"weight": weight, "cohomology": dims, "acyclic": acyclic}),
                code: if acyclic { 0 } else { 2 },
            })
        }
        Command::Denormalize { bigraded, level } => {
            let b = format::to_bigraded(&read_doc(&bigraded)?)?;
            let c = denormalize(&b, level)?;
            c.validate()?;
            let mut text = String::new();
            let mut docs = Vec::new();
            for (n, lv) in c.levels.iter().enumerate() {
                let t = format::artin_to_text(&lv.algebra);
                text.push_str(&format!("# level {n}\n{t}"));
                docs.push(json!({"level": n, "algebra": doc_json(&t)}));
            }
            Ok(Out::ok(text.trim_end().into(), Value::Array(docs)))
        }
        Command::Tot { bigraded } => {
            let b = format::to_bigraded(&read_doc(&bigraded)?)?;
            let text = format::artin_to_text(&b.tot()?);
            Ok(Out::ok(text.trim_end().into(), doc_json(&text)))
        }
        Command::Tangent {
            dgla: p,
            functor,
            range,
            dd,
        } => {
            let f = functor_of(functor, dgla(&p)?);
            let (a, b) = parse_range(&range)?;
            let rep = tangent_report(&f, a..=b)?;
            let mut text = format!("functor {}\n", rep.functor);
            for (n, d) in &rep.tangent {
                text.push_str(&format!("H^{n}(F): {d}\n"));
            }
            let mut dd_rows = Vec::new();
            if let Some(v) = dd {
                let v: CochainComplex = format::to_complex(&read_doc(&v)?)?;
                for n in a..=b {
                    for i in 0..=2usize {
                        let d = dd_groups(&f, &v, n, i)?;
                        text.push_str(&format!("DD^{}(F,V) = pi_{i} F(k+V[{n}]): {d}\n", n - i as i32));
                        dd_rows.push(json!({"n": n, "i": i, "dim": d}));
                    }
                }
            }
            let mut j = serde_json::to_value(&rep).unwrap_or(Value::Null);
            j["dd"] = Value::Array(dd_rows);
            Ok(Out::ok(text.trim_end().into(), j))
        }
        Command::Battery {
            dgla: p,
            functor,
            kind,
            seed,
            samples,
        } => {
            let f = functor_of(functor, dgla(&p)?);
            let mut b = standard_battery()?;
            if let Some(s) = seed {
                b = b.with_seed(s);
            }
            if let Some(n) = samples {
                b = b.with_samples(n);
            }
            let mut reports = Vec::new();
            if matches!(kind, BatteryKind::Manetti | BatteryKind::Both) {
                reports.push(manetti_battery(&f, &b)?);
            }
            if matches!(kind, BatteryKind::Schlessinger | BatteryKind::Both) {
                reports.push(schlessinger_homotopy_battery(&f, &b)?);
            }
            let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            Ok(Out::ok(text, serde_json::to_value(&reports).unwrap_or(Value::Null)))
        }
    }
}

fn functor_of(k: FunctorArg, l: Dgla) -> FunctorUnderTest {
    match k {
        FunctorArg::Mc => FunctorUnderTest::mc(l),
        FunctorArg::Def => FunctorUnderTest::def(l),
        FunctorArg::Broken => FunctorUnderTest::def_broken_gauge(l),
        FunctorArg::Constant => FunctorUnderTest::constant(),
    }
}

fn render(h: &NilpotentDgla, v: &[Q]) -> String {
    let terms: Vec<(String, Q)> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero_ref())
        .map(|(i, x)| {
            let (li, ai) = h.pairs[i];
            (format!("{}@{}", h.l.label(li), h.a.label(ai)), x.clone())
        })
        .collect();
    format::format_terms(&terms)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap_or_default());
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = match e {
                Error::Parse { .. } => 4,
                _ => 2,
            };
            if json {
                println!("{}", json!({"error": e.to_string(), "exit_code": code}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code)
        }
    }
}
