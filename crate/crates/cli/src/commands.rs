use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use slcount::enumerate::{enumerate_ball, EnumOptions, DEFAULT_NODE_BUDGET};
use slcount::exponents::{admissible_wn, classify_cones, compute_kappa, verify_main_condition, MainCondition};
use slcount::fit::{fit_power_law, geometric_grid, upper_half_spread, GrowthModel};
use slcount::scalar::rational_string;
use slcount::verify::{verify_statements, VerifyConfig};
use slcount::volume::{ball_volume, Method, QuadratureSpec};
use slcount::{BallRadius, BigInt, BoundKind, DominantWeight, Mode, Rank, Rational, RepSpec};

use crate::args::{CountArgs, ExponentArgs, FitArgs, RatioArgs, SweepArgs, VerifyArgs, VolumeArgs, WeightArgs};
use crate::config::Config;
use crate::error::{CliError, Status};
use crate::output::{csv_writer, envelope, put_rational, sig12, sink, write_json};

pub struct Ctx<'a> {
    pub cfg: &'a Config,
    pub out: Option<&'a Path>,
}

fn parse_weight(s: &str) -> Result<DominantWeight, CliError> {
    let q = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Usage(format!("weight coefficient {x:?} is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DominantWeight::new(q)?)
}

fn weight_inputs(ctx: &Ctx, a: &WeightArgs) -> Result<(Rank, DominantWeight), CliError> {
    let n: usize = ctx.cfg.require(a.n, "n")?;
    let w: String = ctx.cfg.require(a.weight.clone(), "weight")?;
    let n = Rank::new(n)?;
    let w = parse_weight(&w)?;
    if w.rank() != n.get() {
        return Err(CliError::Usage(format!("--weight has {} coefficients but --n is {}", w.rank(), n.get())));
    }
    Ok((n, w))
}

pub fn exponent(ctx: &Ctx, a: &ExponentArgs) -> Result<Status, CliError> {
    let (n, w) = weight_inputs(ctx, &a.weight)?;
    let bound: BoundKind = ctx.cfg.or(a.bound.as_deref().map(str::parse).transpose()?, "bound", BoundKind::Oh)?;
    let r = compute_kappa::<BigInt>(&w, bound, n)?;
    let mut m = Map::new();
    put_rational(&mut m, "m1", &r.m1);
    m.insert("i_set".into(), json!(r.i_set));
    put_rational(&mut m, "m1_prime", &r.m1_prime);
    m.insert("i_prime".into(), json!(r.i_prime));
    put_rational(&mut m, "kappa0", &r.kappa0);
    put_rational(&mut m, "kappa", &r.kappa);
    put_rational(&mut m, "kappa_over_kappa0", &r.kappa_over_kappa0());
    put_rational(&mut m, "volume_exponent", &(Rational::from_integer(1.into()) / &r.m1));
    let inputs = json!({"n": n.get(), "weight": w.coords(), "bound": bound.tag()});
    write_json(ctx.out, &envelope("exponent", inputs, Value::Object(m)))?;
    Ok(Status::Ok)
}

pub fn classify(ctx: &Ctx, a: &WeightArgs) -> Result<Status, CliError> {
    let (n, w) = weight_inputs(ctx, a)?;
    let n = Rank::at_least(n.get(), 2)?;
    let cones = classify_cones::<BigInt>(&w, n)?;
    let main = verify_main_condition::<BigInt>(&w, n)?;
    let r = compute_kappa::<BigInt>(&w, BoundKind::Oh, n)?;
    let sigma: BTreeMap<String, String> = cones.sigma.iter().map(|(i, s)| (i.to_string(), rational_string(s))).collect();
    let mut m = Map::new();
    m.insert("cones".into(), json!(cones.cones));
    m.insert("sigma".into(), json!(sigma));
    m.insert(
        "main_condition".into(),
        match &main {
            MainCondition::Holds { index } => json!({"holds": true, "index": index}),
            MainCondition::Fails { candidates, .. } => json!({"holds": false, "candidates": candidates}),
        },
    );
    m.insert("in_admissible_family".into(), json!(admissible_wn(n)?.contains(&w)));
    m.insert("i_set".into(), json!(r.i_set));
    m.insert("i_prime".into(), json!(r.i_prime));
    put_rational(&mut m, "kappa_over_kappa0", &r.kappa_over_kappa0());
    let inputs = json!({"n": n.get(), "weight": w.coords(), "bound": BoundKind::Oh.tag()});
    write_json(ctx.out, &envelope("classify", inputs, Value::Object(m)))?;
    Ok(Status::Ok)
}

pub fn verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Status, CliError> {
    let d = VerifyConfig::default();
    let cfg = VerifyConfig {
        n_max: ctx.cfg.or(a.nmax, "nmax", d.n_max)?,
        seed: ctx.cfg.or(a.seed, "seed", d.seed)?,
        random_per_n: ctx.cfg.or(a.samples, "samples", d.random_per_n)?,
        ..d
    };
    if cfg.n_max < 2 {
        return Err(CliError::Usage("--nmax must be at least 2".into()));
    }
    let report = verify_statements(&cfg)?;
    let failures = report.failures().count();
    let results = json!({
        "passed": report.all_passed(),
        "failures": failures,
        "records": report.records,
    });
    write_json(ctx.out, &envelope("verify", serde_json::to_value(&report.config)?, results))?;
    if failures > 0 {
        log::error!("{failures} verification records failed");
        return Ok(Status::VerificationFailed);
    }
    Ok(Status::Ok)
}

struct Sweep {
    spec: RepSpec,
    radii: Vec<BallRadius>,
}

fn sweep_inputs(ctx: &Ctx, a: &SweepArgs) -> Result<Sweep, CliError> {
    let n = Rank::new(ctx.cfg.require(a.n, "n")?)?;
    let spec = RepSpec::parse(&ctx.cfg.or(a.rep.clone(), "rep", "standard".to_string())?, n)?;
    let start: BallRadius = ctx.cfg.require(a.t_start.clone(), "t-start")?.parse()?;
    let end: Option<BallRadius> = ctx.cfg.opt(a.t_end.clone(), "t-end")?.map(|s| s.parse()).transpose()?;
    let floor = (spec.dim() as f64).sqrt();
    if start.t() < floor * (1.0 - 1e-12) {
        return Err(CliError::Usage(format!(
            "--t-start {start} is below sqrt(dim) = {} where every ball is empty",
            sig12(floor)
        )));
    }
    let radii = match end {
        None => vec![start],
        Some(end) => {
            let steps: usize = ctx.cfg.or(a.t_steps, "t-steps", 8)?;
            let grid = geometric_grid(start.t(), end.t(), steps).map_err(|e| CliError::Usage(e.to_string()))?;
            let last = grid.len() - 1;
            grid.iter()
                .enumerate()
                .map(|(i, &t)| match i {
                    0 => Ok(start.clone()),
                    i if i == last => Ok(end.clone()),
                    _ => BallRadius::from_f64(t),
                })
                .collect::<Result<_, _>>()?
        }
    };
    Ok(Sweep { spec, radii })
}

pub fn count(ctx: &Ctx, a: &CountArgs) -> Result<Status, CliError> {
    let sw = sweep_inputs(ctx, &a.sweep)?;
    let opts = EnumOptions {
        node_budget: ctx.cfg.or(a.node_budget, "node-budget", DEFAULT_NODE_BUDGET)?,
    };
    if ctx.cfg.switch(a.list, "list")? {
        if sw.radii.len() != 1 {
            return Err(CliError::Usage("--list takes a single radius (omit --t-end)".into()));
        }
        let e = enumerate_ball(&sw.spec, &sw.radii[0], Mode::List, &opts)?;
        let mut w = sink(ctx.out)?;
        for g in e.matrices.unwrap_or_default() {
            writeln!(w, "{g}").map_err(|e| CliError::io("writing matrices", e))?;
        }
        w.flush().map_err(|e| CliError::io("writing matrices", e))?;
        return Ok(if e.record.partial { Status::BudgetExhausted } else { Status::Ok });
    }
    let mut w = csv_writer(ctx.out)?;
    w.write_record(["T", "count", "nodes", "seconds", "partial"])?;
    let mut partial = false;
    for r in &sw.radii {
        let e = enumerate_ball(&sw.spec, r, Mode::Count, &opts)?;
        let rec = e.record;
        log::info!("T = {r}: {} points, {} nodes, {:.2}s", rec.count, rec.nodes, rec.seconds);
        partial |= rec.partial;
        w.write_record([
            sig12(rec.t),
            rec.count.to_string(),
            rec.nodes.to_string(),
            sig12(rec.seconds),
            rec.partial.to_string(),
        ])?;
        w.flush().map_err(|e| CliError::io("writing CSV", e))?;
    }
    if partial {
        log::warn!("node budget exhausted; partial rows hold lower bounds");
        return Ok(Status::BudgetExhausted);
    }
    Ok(Status::Ok)
}

pub fn volume(ctx: &Ctx, a: &VolumeArgs) -> Result<Status, CliError> {
    let sw = sweep_inputs(ctx, &a.sweep)?;
    let method: Method = ctx.cfg.or(a.method.as_deref().map(str::parse).transpose()?, "method", Method::Grid)?;
    let seed = ctx.cfg.or(a.seed, "seed", 0)?;
    let mut q = match method {
        Method::Grid => QuadratureSpec::grid(ctx.cfg.or(a.samples, "samples", 24)?),
        Method::MonteCarlo => QuadratureSpec::monte_carlo(ctx.cfg.or(a.samples, "samples", 100_000)?, seed),
    };
    if let Some(r) = ctx.cfg.opt(a.truncation, "truncation")? {
        q = q.with_truncation(r);
    }
    let mut w = csv_writer(ctx.out)?;
    w.write_record(["T", "volume", "stderr"])?;
    for r in &sw.radii {
        let v = ball_volume(&sw.spec, r.t(), &q)?;
        w.write_record([sig12(r.t()), sig12(v.value), sig12(v.stderr)])?;
    }
    w.flush().map_err(|e| CliError::io("writing CSV", e))?;
    Ok(Status::Ok)
}

/// Columns of a sweep CSV by header name.
struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn read(path: &Path) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_path(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let headers = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(|s| s.trim().to_string()).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Table { headers, rows })
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    fn numbers(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let i = self.index(name).ok_or_else(|| CliError::Usage(format!("no column {name:?}")))?;
        self.rows
            .iter()
            .map(|r| {
                r[i].parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("column {name:?}: {:?} is not a number", r[i])))
            })
            .collect()
    }

    /// `preferred` if present, else the first of count, volume, ratio.
    fn value_column(&self, preferred: &'static str) -> Result<&'static str, CliError> {
        [preferred, "count", "volume", "ratio"]
            .into_iter()
            .find(|c| self.index(c).is_some())
            .ok_or_else(|| CliError::Usage("no count, volume or ratio column".into()))
    }

    fn partial_rows(&self) -> Vec<bool> {
        match self.index("partial") {
            Some(i) => self.rows.iter().map(|r| r[i] == "true").collect(),
            None => vec![false; self.rows.len()],
        }
    }
}

pub fn fit(ctx: &Ctx, a: &FitArgs) -> Result<Status, CliError> {
    let table = Table::read(&a.input)?;
    let column = match ctx.cfg.opt(a.column.clone(), "column")? {
        Some(c) => c,
        None => table.value_column("count")?.to_string(),
    };
    let model: GrowthModel = ctx.cfg.or(a.model.as_deref().map(str::parse).transpose()?, "model", GrowthModel::Pure)?;
    let t = table.numbers("T")?;
    let y = table.numbers(&column)?;
    let keep = table.partial_rows();
    let dropped = keep.iter().filter(|p| **p).count();
    if dropped > 0 {
        log::warn!("ignoring {dropped} partial rows");
    }
    let (t, y): (Vec<f64>, Vec<f64>) = t.into_iter().zip(y).zip(keep).filter(|(_, p)| !p).map(|(ty, _)| ty).unzip();
    if t.len() < 6 {
        return Err(CliError::Usage(format!("fit needs at least 6 rows, got {}", t.len())));
    }
    let f = fit_power_law(&t, &y, model)?;
    let inputs = json!({"input": a.input.display().to_string(), "column": column, "model": model.to_string()});
    write_json(ctx.out, &envelope("fit", inputs, serde_json::to_value(f)?))?;
    Ok(Status::Ok)
}

pub fn ratio(ctx: &Ctx, a: &RatioArgs) -> Result<Status, CliError> {
    let counts = Table::read(&a.counts)?;
    let volumes = Table::read(&a.volumes)?;
    if counts.partial_rows().iter().any(|p| *p) {
        log::error!("{} has partial counts; rerun with a larger --node-budget", a.counts.display());
        return Ok(Status::BudgetExhausted);
    }
    let (tc, c) = (counts.numbers("T")?, counts.numbers(counts.value_column("count")?)?);
    let (tv, v) = (volumes.numbers("T")?, volumes.numbers(volumes.value_column("volume")?)?);
    let same = tc.len() == tv.len() && tc.iter().zip(&tv).all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()));
    if !same {
        return Err(CliError::Usage("count and volume CSVs are on different T grids".into()));
    }
    let ratios: Vec<f64> = c.iter().zip(&v).map(|(c, v)| c / v).collect();
    let mut w = csv_writer(ctx.out)?;
    w.write_record(["T", "ratio"])?;
    for (t, r) in tc.iter().zip(&ratios) {
        w.write_record([sig12(*t), sig12(*r)])?;
    }
    w.flush().map_err(|e| CliError::io("writing CSV", e))?;
    let spread = upper_half_spread(&ratios).map_err(|e| CliError::Usage(e.to_string()))?;
    let summary = envelope(
        "ratio",
        json!({"counts": a.counts.display().to_string(), "volumes": a.volumes.display().to_string()}),
        json!({"points": ratios.len(), "upper_half_spread": spread}),
    );
    // the CSV owns stdout unless it went to a file
    if ctx.out.is_some() {
        write_json(None, &summary)?;
    } else {
        eprintln!("{}", serde_json::to_string(&summary)?);
    }
    Ok(Status::Ok)
}
