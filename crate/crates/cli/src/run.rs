//! Subcommand dispatch. Every handler validates all of its flags before computing.

use crate::args::{ChainArgs, Cli, Command, Observable, OracleMode, OutputArgs, TimeArgs, TripleArgs};
use crate::output::{Cell, Table};
use nalgebra::DMatrix;
use num_complex::Complex64;
use qglauber::ising::{
    magnetization, magnetization_asymptotic, magnetization_kernel, magnetization_kernels, stationary, twospin_asymptotic,
    twospin_converged, twospin_kernel, ChainModel,
};
use qglauber::measure::{find_zeros, OrthoMeasure};
use qglauber::oracle::{chain_gammas, glauber_sampler, master_equation, pair_ode_oracle, FiniteJacobi, MasterState, MAX_MASTER_SITES};
use qglauber::orthopoly::{genfunc_check, PolyFamily};
use qglauber::qseries::{phi_rs, qpoch, PochOrder};
use qglauber::verify::{is_known_unattainable, run_criterion_with};
use qglauber::{Error, QTriple};
use serde_json::json;
use std::f64::consts::PI;
use std::process::ExitCode;

/// Largest number of initial sites a superposition may sum.
const SUPERPOSITION_SITES: usize = 4096;
const MAX_GRID_POINTS: usize = 1_000_000;

/// Oracle output at one time: magnetizations, correlations and (for the sampler) their standard errors.
type Snapshot = (Vec<f64>, DMatrix<f64>, Vec<f64>, DMatrix<f64>);

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

type Res<T> = std::result::Result<T, CliError>;

fn invalid(message: impl Into<String>) -> CliError {
    CliError { code: 1, message: message.into() }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Size(_) => 1,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

fn parse_f64(s: &str, what: &str) -> Res<f64> {
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| invalid(format!("{what}: not a finite number: {s:?}")))
}

/// `re` or `re,im`.
fn parse_complex(s: &str, what: &str) -> Res<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_f64(re, what)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse_f64(re, what)?, parse_f64(im, what)?)),
        _ => Err(invalid(format!("{what}: expected `re` or `re,im`, got {s:?}"))),
    }
}

/// `a:b:n` or `a:b:n:log`, `n` points including both ends.
fn parse_grid(s: &str, what: &str) -> Res<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3] == "log" => true,
        4 if parts[3] == "lin" => false,
        _ => return Err(invalid(format!("{what}: expected a:b:n[:log], got {s:?}"))),
    };
    let (a, b) = (parse_f64(parts[0], what)?, parse_f64(parts[1], what)?);
    let n: usize = parts[2].parse().map_err(|_| invalid(format!("{what}: point count must be a positive integer, got {:?}", parts[2])))?;
    if n == 0 || n > MAX_GRID_POINTS {
        return Err(invalid(format!("{what}: point count must lie in 1..={MAX_GRID_POINTS}, got {n}")));
    }
    if b < a {
        return Err(invalid(format!("{what}: end {b} is below start {a}")));
    }
    if log && !(a > 0.0) {
        return Err(invalid(format!("{what}: a log grid needs a positive start, got {a}")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| {
            let u = i as f64 / (n - 1) as f64;
            if i == n - 1 {
                b
            } else if log {
                a * (b / a).powf(u)
            } else {
                a + (b - a) * u
            }
        })
        .collect())
}

fn times(t: &TimeArgs) -> Res<Vec<f64>> {
    let ts = match (t.t, &t.t_grid) {
        (Some(t), _) => vec![t],
        (None, Some(g)) => parse_grid(g, "--t-grid")?,
        (None, None) => return Err(invalid("one of --t or --t-grid is required")),
    };
    if let Some(bad) = ts.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(invalid(format!("times must be finite and >= 0, got {bad}")));
    }
    Ok(ts)
}

/// `a:b`, `a,b,c` or a single index; all indices start at 1.
fn parse_sites(s: &str) -> Res<Vec<usize>> {
    let bad = || invalid(format!("--sites: expected a:b, a,b,c or n with indices >= 1, got {s:?}"));
    let idx = |p: &str| p.trim().parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(bad);
    let sites: Vec<usize> = if let Some((a, b)) = s.split_once(':') {
        let (a, b) = (idx(a)?, idx(b)?);
        if b < a || b - a > 100_000 {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(idx).collect::<Res<_>>()?
    };
    if sites.is_empty() {
        return Err(bad());
    }
    Ok(sites)
}

fn check_tol(tol: f64) -> Res<f64> {
    if tol > 0.0 && tol <= 1e-2 {
        Ok(tol)
    } else {
        Err(invalid(format!("--tol must lie in (0, 1e-2], got {tol}")))
    }
}

fn check_out(out: &OutputArgs) -> Res<()> {
    if let Some(p) = &out.out {
        let dir = p.parent().filter(|d| !d.as_os_str().is_empty());
        if dir.is_some_and(|d| !d.is_dir()) {
            return Err(invalid(format!("--out: directory of {} does not exist", p.display())));
        }
    }
    Ok(())
}

fn triple(p: &TripleArgs) -> Res<QTriple> {
    let alpha = if p.alpha_eq_q { p.q } else { p.alpha.ok_or_else(|| invalid("one of --alpha or --alpha-eq-q is required"))? };
    Ok(QTriple::new(p.q, alpha, p.beta)?)
}

fn triple_meta(t: &mut Table, p: &QTriple) {
    t.meta("q", p.q).meta("alpha", p.alpha).meta("beta", p.beta);
}

fn chain(c: &ChainArgs) -> Res<ChainModel> {
    Ok(ChainModel::new(c.kappa)?)
}

fn chain_meta(t: &mut Table, m: &ChainModel) {
    t.meta("kappa", m.kappa).meta("q", m.q);
}

fn finish(table: &mut Table, command: &str, out: &OutputArgs) -> Res<ExitCode> {
    table.meta("command", command);
    table.write(out).map_err(|e| invalid(format!("cannot write output: {e}")))?;
    Ok(ExitCode::SUCCESS)
}

/// Pairs `m < n` drawn from `sites`.
fn pairs(sites: &[usize]) -> Vec<(usize, usize)> {
    let mut s = sites.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut out = Vec::new();
    for (i, &m) in s.iter().enumerate() {
        for &n in &s[i + 1..] {
            out.push((m, n));
        }
    }
    out
}

pub fn run(cli: Cli) -> Res<ExitCode> {
    match cli.command {
        Command::Qpoch { q, a, n, output } => {
            let a = parse_complex(&a, "--a")?;
            let order = if n == "inf" {
                PochOrder::Infinite
            } else {
                PochOrder::Finite(n.parse().map_err(|_| invalid(format!("--n must be an integer or inf, got {n:?}")))?)
            };
            check_out(&output)?;
            let v = qpoch(a, q, order)?;
            let mut t = Table::new(&["re", "im"]);
            t.meta("q", q).meta("a", json!([a.re, a.im])).meta("n", n.as_str());
            t.push(vec![v.re.into(), v.im.into()]);
            finish(&mut t, "qpoch", &output)
        }
        Command::Phi { q, num, den, z, tol, output } => {
            let z = parse_complex(&z, "--z")?;
            let tol = check_tol(tol.tol)?;
            check_out(&output)?;
            let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
            let r = phi_rs(&c(&num), &c(&den), q, z, tol)?;
            let mut t = Table::new(&["re", "im", "terms", "tail_bound"]);
            t.meta("q", q).meta("num", num.clone()).meta("den", den.clone()).meta("z", json!([z.re, z.im]));
            t.push(vec![r.value.re.into(), r.value.im.into(), r.terms_used.into(), r.tail_bound.into()]);
            finish(&mut t, "phi", &output)
        }
        Command::Poly { params, n_max, x_grid, output } => {
            let p = triple(&params)?;
            let xs = parse_grid(&x_grid, "--x-grid")?;
            check_out(&output)?;
            let fam = PolyFamily::new(p);
            let mut t = Table::new(&["x", "n", "value"]);
            triple_meta(&mut t, &p);
            for &x in &xs {
                let v = fam.values_upto(n_max, Complex64::new(x, 0.0));
                for n in 0..=n_max {
                    t.push(vec![x.into(), n.into(), v[n + 1].re.into()]);
                }
            }
            finish(&mut t, "poly", &output)
        }
        Command::Measure { params, samples, atoms, output } => {
            let p = triple(&params)?;
            if samples == 0 || samples > MAX_GRID_POINTS {
                return Err(invalid(format!("--samples must lie in 1..={MAX_GRID_POINTS}, got {samples}")));
            }
            check_out(&output)?;
            let m = OrthoMeasure::new(p)?;
            let mut t;
            if atoms {
                t = Table::new(&["x", "weight"]);
                for (x, w) in m.symmetric_atoms() {
                    t.push(vec![x.into(), w.into()]);
                }
            } else {
                t = Table::new(&["theta", "density"]);
                for j in 0..samples {
                    let th = PI * (j as f64 + 0.5) / samples as f64;
                    t.push(vec![th.into(), m.density(th)?.into()]);
                }
            }
            triple_meta(&mut t, &p);
            t.meta("atoms", m.atoms.len());
            finish(&mut t, "measure", &output)
        }
        Command::Zeros { params, output } => {
            let p = triple(&params)?;
            check_out(&output)?;
            let zs = find_zeros(&p)?;
            let mut t = Table::new(&["index", "z", "x"]);
            triple_meta(&mut t, &p);
            for (i, &z) in zs.zeros.iter().enumerate() {
                t.push(vec![(i + 1).into(), z.into(), (z + 1.0 / z).into()]);
            }
            finish(&mut t, "zeros", &output)
        }
        Command::GenfuncCheck { params, t: tv, z, n_max, output } => {
            let p = triple(&params)?;
            let (tv, z) = (parse_complex(&tv, "--t")?, parse_complex(&z, "--z")?);
            check_out(&output)?;
            let r = genfunc_check(tv, z, &p, n_max)?;
            let mut t = Table::new(&["residual", "tail_estimate", "closed_re", "closed_im", "series_re", "series_im"]);
            triple_meta(&mut t, &p);
            t.meta("t", json!([tv.re, tv.im])).meta("z", json!([z.re, z.im])).meta("n_max", n_max);
            t.push(vec![
                r.residual.into(),
                r.tail_estimate.into(),
                r.closed_form.re.into(),
                r.closed_form.im.into(),
                r.series.re.into(),
                r.series.im.into(),
            ]);
            finish(&mut t, "genfunc-check", &output)
        }
        Command::Magnetization { chain: c, time, kernel, from, uniform, sites, tol, output } => {
            let model = chain(&c)?;
            let ts = times(&time)?;
            let tol = check_tol(tol.tol)?;
            let sites = parse_sites(&sites)?;
            if let Some(k) = from {
                if k == 0 {
                    return Err(invalid("--from: site indices start at 1"));
                }
            }
            if let Some(kn) = &kernel {
                if kn.contains(&0) {
                    return Err(invalid("--kernel: site indices start at 1"));
                }
            }
            if let Some(m) = uniform {
                if !(m.abs() <= 1.0) {
                    return Err(invalid(format!("--uniform must lie in [-1, 1], got {m}")));
                }
            }
            check_out(&output)?;
            let mut t = Table::new(&["t", "n", "k", "value"]);
            chain_meta(&mut t, &model);
            t.meta("tol", tol);
            let n_max = *sites.iter().max().expect("sites are non-empty");
            for &time in &ts {
                if let Some(kn) = &kernel {
                    let v = magnetization_kernel(kn[0], kn[1], time, &model, tol)?;
                    t.push(vec![time.into(), kn[0].into(), kn[1].into(), v.into()]);
                } else if let Some(m) = uniform {
                    let row = magnetization(time, |_| m, n_max, &model, tol, SUPERPOSITION_SITES)?;
                    for &n in &sites {
                        t.push(vec![time.into(), n.into(), 0usize.into(), row.values[n - 1].into()]);
                    }
                } else {
                    let k = from.unwrap_or(3);
                    let ker = magnetization_kernels(n_max, k, time, &model, tol)?;
                    for &n in &sites {
                        t.push(vec![time.into(), n.into(), k.into(), ker[n - 1][k - 1].into()]);
                    }
                }
            }
            finish(&mut t, "magnetization", &output)
        }
        Command::Correlation { chain: c, time, uniform, sites, window, tol, output } => {
            let model = chain(&c)?;
            let ts = times(&time)?;
            let tol = check_tol(tol.tol)?;
            let sites = parse_sites(&sites)?;
            if !(uniform.abs() <= 1.0) {
                return Err(invalid(format!("--uniform must lie in [-1, 1], got {uniform}")));
            }
            let n_out = *sites.iter().max().expect("sites are non-empty");
            if window < n_out.max(2) {
                return Err(invalid(format!("--window {window} must be at least the largest site {n_out} and 2")));
            }
            check_out(&output)?;
            let (rows, grid) = twospin_converged(&ts, |_, _| uniform * uniform, window, n_out, &model, tol)?;
            let mut t = Table::new(&["t", "m", "n", "value"]);
            chain_meta(&mut t, &model);
            t.meta("tol", tol).meta("window", window).meta("stationary_grid", grid);
            for (&time, row) in ts.iter().zip(&rows) {
                for (m, n) in pairs(&sites) {
                    t.push(vec![time.into(), m.into(), n.into(), row.values[(m - 1, n - 1)].into()]);
                }
            }
            finish(&mut t, "correlation", &output)
        }
        Command::Stationary { chain: c, sites, tol, output } => {
            let model = chain(&c)?;
            let tol = check_tol(tol.tol)?;
            let sites = parse_sites(&sites)?;
            check_out(&output)?;
            let n_max = (*sites.iter().max().expect("sites are non-empty")).max(2);
            let rho = stationary(&model, n_max, tol)?;
            let mut t = Table::new(&["m", "n", "value"]);
            chain_meta(&mut t, &model);
            t.meta("tol", tol).meta("grid", rho.grid).meta("residual", rho.residual);
            for &m in &sites {
                for &n in &sites {
                    t.push(vec![m.into(), n.into(), rho.get(m, n).into()]);
                }
            }
            finish(&mut t, "stationary", &output)
        }
        Command::Asymptotics { chain: c, time, kernel, pair, order, tol, output } => {
            let model = chain(&c)?;
            let ts = times(&time)?;
            let tol = check_tol(tol.tol)?;
            if !(1..=3).contains(&order) {
                return Err(invalid(format!("--order must be 1, 2 or 3, got {order}")));
            }
            if let Some(kn) = &kernel {
                if kn.contains(&0) {
                    return Err(invalid("--kernel: site indices start at 1"));
                }
            }
            if let Some(p) = &pair {
                if !(p[0] > p[1] && p[2] > p[3] && p[1] >= 1 && p[3] >= 1) {
                    return Err(invalid("--pair M N K L needs M > N >= 1 and K > L >= 1"));
                }
            }
            if ts.iter().any(|&t| t <= 0.0) {
                return Err(invalid("asymptotic tables need t > 0"));
            }
            check_out(&output)?;
            let mut t;
            if let Some(p) = &pair {
                t = Table::new(&["t", "m", "n", "k", "l", "numeric", "asymptotic", "ratio"]);
                for &time in &ts {
                    let v = twospin_kernel(p[0], p[1], p[2], p[3], time, &model, tol)?;
                    let a = twospin_asymptotic(p[0], p[1], p[2], p[3], time, &model);
                    let mut row: Vec<Cell> = vec![time.into()];
                    row.extend(p.iter().map(|&i| Cell::from(i)));
                    row.extend([v.into(), a.into(), (v / a).into()]);
                    t.push(row);
                }
            } else {
                let kn = kernel.expect("clap requires --kernel or --pair");
                t = Table::new(&["t", "n", "k", "numeric", "asymptotic", "ratio"]);
                t.meta("order", order as usize);
                for &time in &ts {
                    let v = magnetization_kernel(kn[0], kn[1], time, &model, tol)?;
                    let a = magnetization_asymptotic(kn[0], kn[1], time, &model, order);
                    t.push(vec![time.into(), kn[0].into(), kn[1].into(), v.into(), a.into(), (v / a).into()]);
                }
            }
            chain_meta(&mut t, &model);
            t.meta("tol", tol);
            finish(&mut t, "asymptotics", &output)
        }
        Command::Oracle { mode, chain: c, time, sites, spins, observable, trajectories, seed, output } => {
            let model = chain(&c)?;
            let ts = times(&time)?;
            let sites = parse_sites(&sites)?;
            let n = *sites.iter().max().expect("sites are non-empty");
            let spins = spins.unwrap_or_else(|| vec![1; n]);
            if spins.len() != n {
                return Err(invalid(format!("--spins has {} entries, the chain has {n} sites", spins.len())));
            }
            if spins.iter().any(|&s| s != 1 && s != -1) {
                return Err(invalid("--spins entries must be 1 or -1"));
            }
            let obs = observable.unwrap_or(if mode == OracleMode::Pair { Observable::Correlation } else { Observable::Magnetization });
            match (mode, obs) {
                (OracleMode::Expm, Observable::Correlation) => return Err(invalid("expm gives magnetizations only")),
                (OracleMode::Pair, Observable::Magnetization) => return Err(invalid("pair gives correlations only")),
                (OracleMode::Master, _) if n > MAX_MASTER_SITES => {
                    return Err(invalid(format!("master supports at most {MAX_MASTER_SITES} sites, got {n}")))
                }
                (OracleMode::Sample, _) if trajectories < 2 => return Err(invalid("--trajectories must be at least 2")),
                (OracleMode::Sample, _) if ts.windows(2).any(|w| w[1] < w[0]) => return Err(invalid("sample needs ascending times")),
                _ => {}
            }
            check_out(&output)?;
            let gamma = chain_gammas(&model, n);
            let q0: Vec<f64> = spins.iter().map(|&s| f64::from(s)).collect();
            let r0 = DMatrix::from_fn(n, n, |i, j| q0[i] * q0[j]);
            let se_col = mode == OracleMode::Sample;
            let cols: &[&'static str] = match (obs, se_col) {
                (Observable::Magnetization, false) => &["t", "n", "value"],
                (Observable::Magnetization, true) => &["t", "n", "value", "se"],
                (Observable::Correlation, false) => &["t", "m", "n", "value"],
                (Observable::Correlation, true) => &["t", "m", "n", "value", "se"],
            };
            let mut t = Table::new(cols);
            chain_meta(&mut t, &model);
            t.meta("mode", format!("{mode:?}").to_lowercase()).meta("spins", spins.clone());
            let mut results: Vec<Snapshot> = Vec::new();
            match mode {
                OracleMode::Expm => {
                    let j = FiniteJacobi::new(&gamma)?;
                    for &time in &ts {
                        results.push((j.evolve(time, &q0)?, DMatrix::zeros(n, n), vec![], DMatrix::zeros(0, 0)));
                    }
                }
                OracleMode::Master => {
                    let init = MasterState::point(&spins)?;
                    for &time in &ts {
                        let s = master_equation(&gamma, &init, time)?;
                        results.push((s.magnetization(), s.correlation(), vec![], DMatrix::zeros(0, 0)));
                    }
                }
                OracleMode::Pair => {
                    for &time in &ts {
                        results.push((vec![], pair_ode_oracle(&gamma, &r0, time)?, vec![], DMatrix::zeros(0, 0)));
                    }
                }
                OracleMode::Sample => {
                    t.meta("trajectories", trajectories).meta("seed", seed);
                    let s = glauber_sampler(&gamma, &spins, &ts, trajectories, seed)?;
                    for i in 0..ts.len() {
                        results.push((s.mean_q[i].clone(), s.mean_r[i].clone(), s.se_q[i].clone(), s.se_r[i].clone()));
                    }
                }
            }
            for (&time, (q, r, sq, sr)) in ts.iter().zip(&results) {
                match obs {
                    Observable::Magnetization => {
                        for &k in &sites {
                            let mut row = vec![time.into(), k.into(), q[k - 1].into()];
                            if se_col {
                                row.push(sq[k - 1].into());
                            }
                            t.push(row);
                        }
                    }
                    Observable::Correlation => {
                        for (a, b) in pairs(&sites) {
                            let mut row = vec![time.into(), a.into(), b.into(), r[(a - 1, b - 1)].into()];
                            if se_col {
                                row.push(sr[(a - 1, b - 1)].into());
                            }
                            t.push(row);
                        }
                    }
                }
            }
            finish(&mut t, "oracle", &output)
        }
        Command::Verify { quick, allow_known, only } => {
            let ids: Vec<u8> = match only {
                Some(v) => {
                    if let Some(bad) = v.iter().find(|&&i| !(1..=13).contains(&i)) {
                        return Err(invalid(format!("--only: criteria are numbered 1..=13, got {bad}")));
                    }
                    v
                }
                None => (1..=13).collect(),
            };
            let (mut failed, mut known) = (0, 0);
            for id in ids {
                match run_criterion_with(id, quick) {
                    Ok(r) => {
                        println!("{r}");
                        if !r.within_budget() {
                            failed += 1;
                        }
                        for c in r.failures() {
                            if is_known_unattainable(id, c) {
                                known += 1;
                            } else {
                                failed += 1;
                            }
                        }
                    }
                    Err(e) => {
                        println!("criterion {id:>2} FAIL error: {e}");
                        failed += 1;
                    }
                }
            }
            println!("{failed} unexpected failure(s), {known} documented unattainable failure(s)");
            let ok = failed == 0 && (known == 0 || allow_known);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}
