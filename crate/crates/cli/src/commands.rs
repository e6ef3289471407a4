use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use semifredkin::count::{count, dyck_catalan, ln_asymptotic, ln_biguint, AsymptoticKind, CountTable, Phase};
use semifredkin::entanglement::{
    connected_correlator_with, entropy_asymptotic_phase1, entropy_from_distribution, entropy_from_state,
    localization_report, schmidt_distribution_with, supported_classes, ClassLabel, ComponentPartition, CorrelatorRow,
    CountRoute, LocalizationGrid, SupportRelation, CORRELATOR_DENSE_CAP, EXACT_LENGTH_CAP,
};
use semifredkin::hamiltonian::{build_hf, BoundaryVariant, PhaseParams};
use semifredkin::spectra::{ground_space_with, low_spectrum, predicted_ground_classes, Propagator, SolverConfig};
use semifredkin::verify::{self, class_state, Scale};
use semifredkin::walk::{
    enumerate_walks_with, equivalence_closure_with_cap, EnumerationLimits, Floor, MoveSet, Path, WalkClass,
};
use semifredkin::Error;

use crate::output::Emitter;
use crate::parse;
use crate::{Boundary, Cli, Command, Couplings, EeMethod};

/// Directory for memoized count tables.
pub const CACHE_ENV: &str = "SEMIFREDKIN_CACHE_DIR";

/// 2 capacity, 3 ambiguous kernel, 4 identity violation, 1 anything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Capacity(_)) => 2,
        Some(Error::AmbiguousKernel(_)) => 3,
        Some(Error::IdentityViolation(_)) => 4,
        _ => 1,
    }
}

fn capacity(msg: String) -> anyhow::Error {
    Error::Capacity(msg).into()
}

fn phase(text: &str) -> Result<Phase> {
    Ok(text.parse::<Phase>()?)
}

fn class(text: &str) -> Result<ClassLabel> {
    Ok(text.parse::<ClassLabel>()?)
}

fn variant(b: Boundary) -> BoundaryVariant {
    match b {
        Boundary::Standard => BoundaryVariant::Standard,
        Boundary::IndexTwoEnds => BoundaryVariant::IndexTwoEnds,
    }
}

impl Couplings {
    fn params(&self, default: Phase) -> Result<PhaseParams> {
        match (&self.phase, self.lambda1, self.lambda2) {
            (Some(p), _, _) => Ok(PhaseParams::for_phase(phase(p)?)),
            (None, None, None) => Ok(PhaseParams::for_phase(default)),
            (None, l1, l2) => Ok(PhaseParams::new(l1.unwrap_or(0.0), l2.unwrap_or(0.0))?),
        }
    }
}

fn check_sites(n: usize, max_sites: usize) -> Result<()> {
    if n > max_sites {
        return Err(capacity(format!(
            "{n} sites exceeds the cap of {max_sites} (dimension 6^{n})"
        )));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let out = Emitter::new(cli, cli.format, cli.output.clone());
    match &cli.command {
        Command::Count {
            phase: p,
            dyck,
            n,
            n_max,
            h,
            class: c,
            log_domain,
            asymptotic,
            max_len,
        } => {
            if *dyck {
                out.emit(&count_dyck(*n, *n_max, *h, *log_domain, *max_len)?)?;
            } else {
                let p = phase(p.as_deref().expect("required without --dyck"))?;
                let c = c.as_deref().map(class).transpose()?;
                let rows = count_rows(p, *n, *n_max, *h, c, *log_domain, *max_len)?;
                if *asymptotic {
                    out.emit(&rows)?;
                } else {
                    let plain: Vec<CountRecord> = rows
                        .into_iter()
                        .map(|r| CountRecord {
                            phase: r.phase,
                            n: r.n,
                            h: r.h,
                            a: r.a,
                            b: r.b,
                            count: r.count,
                        })
                        .collect();
                    out.emit(&plain)?;
                }
            }
        }
        Command::Enumerate {
            n,
            class: c,
            h,
            max_len,
        } => {
            let c = class(c)?;
            let limits = EnumerationLimits::with_max_len(*max_len);
            let walks = enumerate_walks_with(*n, WalkClass::new(c.start, c.end, *h), Floor::Restricted, &limits)?;
            out.emit(&path_rows(&walks))?;
        }
        Command::Closure {
            path,
            mixing,
            max_paths,
        } => {
            let seed = Path::parse(path)?;
            let moves = if *mixing { MoveSet::FULL } else { MoveSet::WITHOUT_W2 };
            let closure = equivalence_closure_with_cap(&seed, moves, *max_paths)?;
            out.emit(&path_rows(&closure))?;
        }
        Command::Spectrum {
            n,
            couplings,
            k,
            max_sites,
        } => {
            check_sites(*n, *max_sites)?;
            let params = couplings.params(Phase::Mixing)?;
            let h = build_hf(*n, params, variant(cli.boundary))?;
            let s = low_spectrum(&h, *k, false, &SolverConfig::default())?;
            let rows: Vec<SpectrumRow> = s
                .eigenvalues
                .iter()
                .zip(&s.residuals)
                .enumerate()
                .map(|(k, (&eigenvalue, &residual))| SpectrumRow {
                    n: *n,
                    lambda1: params.lambda1,
                    lambda2: params.lambda2,
                    k,
                    eigenvalue,
                    residual,
                })
                .collect();
            out.emit(&rows)?;
        }
        Command::Gsd {
            n,
            couplings,
            tol,
            gap_ratio,
            max_sites,
        } => {
            let params = couplings.params(Phase::Mixing)?;
            let cfg = SolverConfig {
                kernel_tol: *tol,
                gap_ratio: *gap_ratio,
                ..SolverConfig::default()
            };
            let mut rows = Vec::new();
            for n in parse::list::<usize>(n)? {
                check_sites(n, *max_sites)?;
                let h = build_hf(n, params, variant(cli.boundary))?;
                let g = ground_space_with(&h, &cfg)?;
                let predicted = if params.is_frustration_free() {
                    Some(predicted_ground_classes(n, params, variant(cli.boundary))?.len())
                } else {
                    None
                };
                rows.push(GsdRow {
                    n,
                    lambda1: params.lambda1,
                    lambda2: params.lambda2,
                    gsd: g.degeneracy(),
                    predicted,
                    ground_energy: g.kernel_max,
                    gap: g.gap,
                    blocks: g.blocks,
                    largest_block: g.largest_block,
                });
            }
            out.emit(&rows)?;
        }
        Command::Ee {
            phase: p,
            class: c,
            two_n,
            r,
            method,
            log_domain,
            max_sites,
        } => {
            let p = phase(p)?;
            let classes = match c {
                Some(c) => vec![class(c)?],
                None => supported_classes(p).to_vec(),
            };
            let rows = ee_rows(
                p,
                &classes,
                &parse::list(two_n)?,
                &parse::list(r)?,
                *method,
                *log_domain,
                *max_sites,
                cli.boundary,
            )?;
            out.emit(&rows)?;
        }
        Command::Correlator {
            state,
            couplings,
            times,
            a,
            b,
            summary,
        } => {
            let (id, psi, _) = parse::excitation(state)?;
            let params = couplings.params(Phase::Mixing)?;
            let h = build_hf(psi.sites(), params, variant(cli.boundary))?;
            let times: Vec<f64> = parse::list(times)?;
            let rows = match (a, b) {
                (Some(a), Some(b)) => {
                    let (a, b) = (parse::operator(a)?, parse::operator(b)?);
                    let relation = ComponentPartition::of_state(&psi)?.relation(&a, &b);
                    let prop = Propagator::new(&h, CORRELATOR_DENSE_CAP)?;
                    let z = psi.to_complex();
                    times
                        .iter()
                        .map(|&t| {
                            let c = connected_correlator_with(&prop, &z, &a, &b, t)?;
                            Ok(CorrelatorRow {
                                n: psi.sites(),
                                state_id: id.clone(),
                                i: a.site,
                                delta: a.radius,
                                j: b.site,
                                delta_prime: b.radius,
                                t,
                                re: c.re,
                                im: c.im,
                                abs: c.norm(),
                                overlap_flag: relation == SupportRelation::Overlap,
                                relation,
                                op_i: a.label(),
                                op_j: b.label(),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?
                }
                _ => {
                    let grid = LocalizationGrid {
                        times,
                        ..LocalizationGrid::default()
                    };
                    localization_report(&h, &psi, &id, &grid)?.rows
                }
            };
            if *summary {
                out.emit(&summarize(&rows))?;
            } else {
                out.emit(&rows)?;
            }
        }
        Command::Verify { quick, only } => {
            let scale = if *quick { Scale::Quick } else { Scale::Full };
            let ids: Vec<String> = match only {
                Some(list) => parse::list(list)?,
                None => verify::CRITERIA.iter().map(|c| c.id.to_string()).collect(),
            };
            let mut outcomes = Vec::new();
            for id in &ids {
                let c = verify::criterion(id).ok_or_else(|| anyhow!("unknown criterion `{id}`"))?;
                let o = c.run(scale);
                eprintln!("{}", o.line());
                outcomes.push(o);
            }
            out.emit(&outcomes)?;
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum CountValue {
    Exact(String),
    Ln(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CountRecord {
    phase: String,
    n: usize,
    h: usize,
    a: Option<u8>,
    b: Option<u8>,
    count: CountValue,
}

/// A count with its ratio to the closed asymptotic form, where one exists.
#[derive(Serialize)]
struct RatioRecord {
    phase: String,
    n: usize,
    h: usize,
    a: Option<u8>,
    b: Option<u8>,
    count: CountValue,
    asymptotic_ratio: Option<f64>,
}

fn value(c: &num_bigint::BigUint, log_domain: bool) -> CountValue {
    if log_domain {
        CountValue::Ln(ln_biguint(c))
    } else {
        CountValue::Exact(c.to_str_radix(10))
    }
}

fn count_dyck(
    n: Option<usize>,
    n_max: Option<usize>,
    h: usize,
    log_domain: bool,
    max_len: usize,
) -> Result<Vec<CountRecord>> {
    let lengths: Vec<usize> = match (n, n_max) {
        (Some(n), _) => vec![n],
        (None, Some(m)) => (0..=m).collect(),
        _ => bail!("--n or --n-max"),
    };
    let mut rows = Vec::new();
    for n in lengths {
        if n > max_len {
            return Err(capacity(format!("length {n} exceeds --max-len {max_len}")));
        }
        let heights: Vec<usize> = if n_max.is_some() {
            (0..=h.min(n)).collect()
        } else {
            vec![h]
        };
        for h in heights {
            rows.push(CountRecord {
                phase: "dyck".into(),
                n,
                h,
                a: None,
                b: None,
                count: value(&dyck_catalan(n, h), log_domain),
            });
        }
    }
    Ok(rows)
}

fn cache_path(p: Phase, n_max: usize, h_max: usize) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .map(|dir| PathBuf::from(dir).join(format!("counts-{}-n{n_max}-h{h_max}.json", p.roman())))
}

/// Exact table rows for `p` over `0..=n_max`, read from or written to the
/// cache directory when one is set.
fn cached_table(p: Phase, n_max: usize, h_max: usize) -> Result<Vec<CountRecord>> {
    let path = cache_path(p, n_max, h_max);
    if let Some(path) = &path {
        if let Ok(text) = std::fs::read_to_string(path) {
            match serde_json::from_str(&text) {
                Ok(rows) => return Ok(rows),
                Err(e) => log::warn!("ignoring unreadable cache {}: {e}", path.display()),
            }
        }
    }
    let rows: Vec<CountRecord> = CountTable::build(p, n_max, h_max)
        .rows()
        .iter()
        .map(|r| CountRecord {
            phase: p.roman().into(),
            n: r.n,
            h: r.h,
            a: Some(r.a),
            b: Some(r.b),
            count: value(&r.count, false),
        })
        .collect();
    if let Some(path) = &path {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        std::fs::write(path, serde_json::to_string(&rows)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn count_rows(
    p: Phase,
    n: Option<usize>,
    n_max: Option<usize>,
    h: usize,
    c: Option<ClassLabel>,
    log_domain: bool,
    max_len: usize,
) -> Result<Vec<RatioRecord>> {
    let longest = n.or(n_max).ok_or_else(|| anyhow!("--n or --n-max"))?;
    if longest > max_len {
        return Err(capacity(format!("length {longest} exceeds --max-len {max_len}")));
    }
    let keep = |a: u8, b: u8| c.is_none_or(|c| c.start == a && c.end == b);
    let mut rows: Vec<(CountRecord, num_bigint::BigUint)> = Vec::new();
    match n {
        Some(n) => {
            for a in 1..=3u8 {
                for b in 1..=3u8 {
                    if keep(a, b) {
                        let v = count(p, n, h, a, b);
                        let rec = CountRecord {
                            phase: p.roman().into(),
                            n,
                            h,
                            a: Some(a),
                            b: Some(b),
                            count: value(&v, false),
                        };
                        rows.push((rec, v));
                    }
                }
            }
        }
        None => {
            for rec in cached_table(p, longest, h)? {
                if keep(rec.a.unwrap_or(0), rec.b.unwrap_or(0)) {
                    let v = match &rec.count {
                        CountValue::Exact(s) => s.parse().context("cached count")?,
                        CountValue::Ln(_) => bail!("cached table holds logarithms"),
                    };
                    rows.push((rec, v));
                }
            }
        }
    }
    Ok(rows
        .into_iter()
        .map(|(rec, v)| RatioRecord {
            asymptotic_ratio: asymptotic_ratio(p, &rec, &v),
            count: value(&v, log_domain),
            phase: rec.phase,
            n: rec.n,
            h: rec.h,
            a: rec.a,
            b: rec.b,
        })
        .collect())
}

fn asymptotic_ratio(p: Phase, rec: &CountRecord, v: &num_bigint::BigUint) -> Option<f64> {
    let (a, b) = (rec.a?, rec.b?);
    if p != Phase::Mixing || rec.h != 0 || a == 3 || b == 3 || rec.n == 0 {
        return None;
    }
    let ln = ln_asymptotic(AsymptoticKind::ReturningWalks { a, b }, rec.n, 0).ok()??;
    Some((ln_biguint(v) - ln).exp())
}

#[derive(Serialize)]
struct PathRow {
    index: usize,
    path: String,
    heights: String,
}

fn path_rows(paths: &[Path]) -> Vec<PathRow> {
    paths
        .iter()
        .map(|p| PathRow {
            index: p.encode(),
            path: p.to_marked_string(),
            heights: p
                .heights()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        })
        .collect()
}

#[derive(Serialize)]
struct SpectrumRow {
    n: usize,
    lambda1: f64,
    lambda2: f64,
    k: usize,
    eigenvalue: f64,
    residual: f64,
}

#[derive(Serialize)]
struct GsdRow {
    n: usize,
    lambda1: f64,
    lambda2: f64,
    gsd: usize,
    /// Orbit count; only for frustration-free couplings.
    predicted: Option<usize>,
    ground_energy: f64,
    gap: f64,
    blocks: usize,
    largest_block: usize,
}

#[derive(Serialize)]
struct EeRow {
    phase: &'static str,
    class: Option<ClassLabel>,
    two_n: usize,
    r: usize,
    method: &'static str,
    #[serde(rename = "S")]
    entropy: f64,
    /// `|S_numeric - S_counts|` on numeric rows when both were computed.
    delta_s: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn ee_rows(
    p: Phase,
    classes: &[ClassLabel],
    two_ns: &[usize],
    rs: &[usize],
    method: EeMethod,
    log_domain: bool,
    max_sites: usize,
    boundary: Boundary,
) -> Result<Vec<EeRow>> {
    let counts = matches!(method, EeMethod::Counts | EeMethod::All);
    let numeric = matches!(method, EeMethod::Numeric | EeMethod::All);
    let asym = matches!(method, EeMethod::Asymptotic | EeMethod::All);
    let mut rows = Vec::new();
    for &two_n in two_ns {
        if two_n % 2 == 1 || two_n == 0 {
            bail!("chain lengths must be even and positive, got {two_n}");
        }
        let half = two_n / 2;
        let ground = if numeric {
            check_sites(two_n, max_sites)?;
            let h = build_hf(two_n, PhaseParams::for_phase(p), variant(boundary))?;
            Some(ground_space_with(&h, &SolverConfig::default())?)
        } else {
            None
        };
        for &r in rs {
            if r >= half {
                bail!("cut offset {r} needs r < n = {half}");
            }
            for &c in classes {
                let mut counted = None;
                if counts {
                    let route = if log_domain || two_n > EXACT_LENGTH_CAP {
                        CountRoute::LogDomain
                    } else {
                        CountRoute::Exact
                    };
                    let s = entropy_from_distribution(&schmidt_distribution_with(half, r, p, c, route)?).entropy;
                    counted = Some(s);
                    rows.push(EeRow {
                        phase: p.roman(),
                        class: Some(c),
                        two_n,
                        r,
                        method: "schmidt_counts",
                        entropy: s,
                        delta_s: None,
                    });
                }
                if let Some(g) = &ground {
                    let state = g.project(&class_state(two_n, p, c)?).normalized()?;
                    let s = entropy_from_state(&state, half + r)?.entropy;
                    rows.push(EeRow {
                        phase: p.roman(),
                        class: Some(c),
                        two_n,
                        r,
                        method: "rdm_numeric",
                        entropy: s,
                        delta_s: counted.map(|x| (s - x).abs()),
                    });
                }
            }
            if asym && p == Phase::Mixing {
                rows.push(EeRow {
                    phase: p.roman(),
                    class: None,
                    two_n,
                    r,
                    method: "asymptotic",
                    entropy: entropy_asymptotic_phase1(half, r)?.entropy,
                    delta_s: None,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize)]
struct RelationSummary {
    state_id: String,
    relation: SupportRelation,
    pairs: usize,
    max_abs: f64,
}

fn summarize(rows: &[CorrelatorRow]) -> Vec<RelationSummary> {
    let mut acc: BTreeMap<(String, u8), (SupportRelation, usize, f64)> = BTreeMap::new();
    for r in rows {
        let key = (r.state_id.clone(), r.relation as u8);
        let e = acc.entry(key).or_insert((r.relation, 0, 0.0));
        e.1 += 1;
        e.2 = e.2.max(r.abs);
    }
    acc.into_iter()
        .map(|((state_id, _), (relation, pairs, max_abs))| RelationSummary {
            state_id,
            relation,
            pairs,
            max_abs,
        })
        .collect()
}
