use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::PathBuf;

use qcx_core::criteria::{check_preconditions, criterion_value};
use qcx_core::loewner::validate_chain;
use qcx_core::qc::{beltrami_on_grid, maximal_dilatation, BeltramiEstimate, ExtensionTarget};
use qcx_core::sector::fit_sector;
use qcx_core::{check, compose_dilatation, CompanionMap, Complex64, CriterionKind, CriterionReport, ExtensionMap, LoewnerChain};

use crate::output::{beltrami_csv, beltrami_svg, num, Csv};
use crate::scenario::{Resolved, Scenario};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Extend,
    Beltrami,
    Compose,
    FitSector,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Extend => "extend",
            Command::Beltrami => "beltrami",
            Command::Compose => "compose",
            Command::FitSector => "fit-sector",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub grid_radial: Option<usize>,
    pub grid_angular: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
}

/// Result of one command: the stdout summary and the files to write.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub summary: String,
    pub files: Vec<(String, String)>,
    pub out_dir: PathBuf,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }
}

#[derive(Default)]
struct Summary(String);

impl Summary {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.0, "{key}={value}");
    }

    fn num(&mut self, key: &str, x: f64) {
        self.kv(key, num(x));
    }

    fn point(&mut self, key: &str, z: Complex64) {
        self.kv(key, format!("{},{}", num(z.re), num(z.im)));
    }
}

/// Apply the command-line overrides to the scenario.
pub fn apply_overrides(mut scenario: Scenario, opts: &RunOptions) -> Scenario {
    if let Some(n) = opts.grid_radial {
        scenario.grid.radial = n;
        scenario.annulus.radial = n;
    }
    if let Some(n) = opts.grid_angular {
        scenario.grid.angular = n;
        scenario.annulus.angular = n;
    }
    if let Some(dir) = &opts.out {
        scenario.output.dir = dir.clone();
    }
    scenario.output.svg |= opts.svg;
    scenario
}

pub fn run(command: Command, scenario: Option<Scenario>, opts: &RunOptions) -> Result<Outcome, CliError> {
    let scenario = scenario.map(|s| apply_overrides(s, opts));
    if command == Command::Compose {
        return compose(scenario.as_ref(), opts);
    }
    let scenario = scenario.ok_or_else(|| CliError::Input(format!("{} needs --scenario", command.name())))?;
    let resolved = scenario.resolve()?;
    let mut outcome = match command {
        Command::Check => check_cmd(&scenario, &resolved)?,
        Command::Extend => extend_cmd(&scenario, &resolved)?,
        Command::Beltrami => beltrami_cmd(&scenario, &resolved)?,
        Command::FitSector => fit_cmd(&scenario, &resolved)?,
        Command::Compose => unreachable!(),
    };
    outcome.files.insert(0, ("config.json".into(), scenario.echo()));
    Ok(outcome)
}

fn header(s: &mut Summary, command: Command, scenario: &Scenario) {
    s.kv("command", command.name());
    if let Some(name) = &scenario.name {
        s.kv("scenario", name);
    }
}

fn sector_note(s: &mut Summary, q: &CompanionMap) {
    if matches!(q.base(), qcx_core::companion::CompanionBase::Sector { .. }) {
        s.kv("sector_rotation", "exp(-i*pi*a)*z");
    }
}

fn report_lines(s: &mut Summary, r: &CriterionReport) {
    s.kv("criterion", &r.criterion);
    s.kv("kind", format!("{:?}", r.kind));
    s.num("threshold", r.threshold);
    s.num("sup_value", r.sup_value);
    s.point("worst_point", r.worst_point);
    s.point("worst_value", r.worst_value);
    s.kv("pass", r.pass);
    s.num("margin", r.margin);
    s.kv("samples", r.samples);
    match r.concluded_dilatation {
        Some(k) => s.num("concluded_dilatation", k),
        None => s.kv("concluded_dilatation", "none"),
    }
    if let Some(e) = &r.failure {
        s.kv("failure", e);
    }
}

fn check_cmd(scenario: &Scenario, r: &Resolved) -> Result<Outcome, CliError> {
    let report = check(scenario.criterion, &r.f, &r.companion, &r.params, &scenario.grid)?;
    let q = check_preconditions(scenario.criterion, &r.f, &r.companion, &r.params, &scenario.grid)?;
    let points = scenario.grid.points();
    let criterion = scenario.criterion;
    let kind = criterion.kind();
    let mut csv = Csv::new(&["re_z", "im_z", "re_value", "im_value", "statistic"]);
    for z in points {
        let v = criterion_value(criterion, &r.f, &q, &r.params, z).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let stat = match kind {
            CriterionKind::Bound => v.norm(),
            CriterionKind::UDisk => qcx_core::u_disk_ratio(v),
            CriterionKind::Positive => -v.re,
        };
        csv.row(&[z.re, z.im, v.re, v.im, stat]);
    }
    let mut s = Summary::default();
    header(&mut s, Command::Check, scenario);
    report_lines(&mut s, &report);
    Ok(Outcome {
        pass: report.pass,
        summary: s.0,
        files: vec![("check.csv".into(), csv.finish())],
        out_dir: scenario.output.dir.clone(),
    })
}

fn build_extension(scenario: &Scenario, r: &Resolved) -> Result<ExtensionMap, CliError> {
    let chain = LoewnerChain::for_criterion(scenario.criterion, r.f.clone(), &r.companion, &r.params)?;
    Ok(ExtensionMap::new(chain))
}

fn extend_cmd(scenario: &Scenario, r: &Resolved) -> Result<Outcome, CliError> {
    let spec = &scenario.extend;
    if spec.angular == 0 || spec.radii.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
        return Err(CliError::Input("extend: need angular >= 1 and finite radii >= 0".into()));
    }
    let ext = build_extension(scenario, r)?;
    let chain = ext.chain();
    let kind = scenario.criterion.kind();
    let k = (kind != CriterionKind::Positive).then(|| scenario.criterion.threshold(&r.params));
    let validation = validate_chain(chain, &scenario.grid, &scenario.times()?, k)?;
    let (gap, gap_theta) = ext.continuity_gap(spec.continuity_samples.max(1), spec.continuity_delta)?;
    let has_f = chain.companion().has_extension();

    let mut csv = Csv::new(&["re_z", "im_z", "re_g", "im_g", "re_f", "im_f"]);
    let mut failed = 0usize;
    let nan = Complex64::new(f64::NAN, f64::NAN);
    for &radius in &spec.radii {
        for j in 0..spec.angular {
            let z = Complex64::from_polar(radius, TAU * j as f64 / spec.angular as f64);
            let g = ext.eval(z).unwrap_or_else(|_| {
                failed += 1;
                nan
            });
            let f = if has_f { ext.eval_f(z).unwrap_or(nan) } else { nan };
            csv.row(&[z.re, z.im, g.re, g.im, f.re, f.im]);
        }
    }

    let continuous = gap <= spec.continuity_tolerance;
    let mut s = Summary::default();
    header(&mut s, Command::Extend, scenario);
    s.kv("construction", format!("{:?}", chain.construction()));
    sector_note(&mut s, chain.companion());
    s.kv("chain_samples", validation.samples);
    s.num("min_re_p", validation.min_re_p);
    s.point("min_re_p_at", validation.min_re_p_at.0);
    s.num("min_re_p_t", validation.min_re_p_at.1);
    s.kv("re_p_positive", validation.re_p_positive);
    s.num("sup_u_ratio", validation.sup_u_ratio);
    match validation.in_u_disk {
        Some(b) => s.kv("in_u_disk", b),
        None => s.kv("in_u_disk", "n/a"),
    }
    s.num("growth_sup", validation.growth_sup);
    s.kv("a1_increasing", validation.a1_increasing);
    if let Some((z, t, e)) = &validation.failure {
        s.kv("chain_failure", format!("{e} at z={},{} t={}", num(z.re), num(z.im), num(*t)));
    }
    s.num("continuity_gap", gap);
    s.num("continuity_theta", gap_theta);
    s.num("continuity_delta", spec.continuity_delta);
    s.kv("continuous", continuous);
    s.kv("f_extension", if has_f { "closed_form" } else { "unavailable" });
    s.kv("failed_samples", failed);
    let pass = validation.pass && continuous && failed == 0;
    s.kv("pass", pass);
    Ok(Outcome {
        pass,
        summary: s.0,
        files: vec![("extend.csv".into(), csv.finish())],
        out_dir: scenario.output.dir.clone(),
    })
}

/// The Beltrami estimate of a scenario's extension on its annulus.
pub fn measure(scenario: &Scenario, r: &Resolved) -> Result<(BeltramiEstimate, ExtensionTarget), CliError> {
    let ext = build_extension(scenario, r)?;
    let target = scenario.beltrami.target.unwrap_or(if ext.chain().companion().has_extension() {
        ExtensionTarget::Function
    } else {
        ExtensionTarget::Chain
    });
    if target == ExtensionTarget::Function && !ext.chain().companion().has_extension() {
        return Err(CliError::Input("beltrami: target function needs a companion with a closed-form extension".into()));
    }
    Ok((beltrami_on_grid(&ext, &scenario.annulus, scenario.beltrami.h, target)?, target))
}

fn beltrami_cmd(scenario: &Scenario, r: &Resolved) -> Result<Outcome, CliError> {
    let (est, target) = measure(scenario, r)?;
    let report = check(scenario.criterion, &r.f, &r.companion, &r.params, &scenario.grid);
    let q = scenario.criterion.effective_companion(&r.companion, &r.params)?;
    let bound = match &report {
        Ok(rep) => rep.concluded_dilatation,
        Err(_) => None,
    };
    let tol = scenario.beltrami.tolerance;
    let within = match bound {
        Some(b) => est.sup_abs_mu <= b + tol,
        None => est.sup_abs_mu < 1.0,
    };
    let pass = within && est.stable && est.indeterminate == 0;

    let mut s = Summary::default();
    header(&mut s, Command::Beltrami, scenario);
    s.kv("target", format!("{target:?}").to_lowercase());
    sector_note(&mut s, &q);
    s.num("h", est.h);
    s.num("sup_abs_mu", est.sup_abs_mu);
    s.num("max_dilatation", est.max_dilatation);
    s.point("worst_point", est.worst_point);
    s.num("sup_abs_mu_half_step", est.sup_abs_mu_half_step);
    s.num("step_change", est.step_change());
    s.kv("stable", est.stable);
    s.kv("samples", est.samples.len());
    s.kv("indeterminate", est.indeterminate);
    s.kv("skipped", est.skipped);
    match (&report, bound) {
        (_, Some(b)) => {
            s.num("bound", b);
            s.num("tolerance", tol);
        }
        (Ok(rep), None) => s.kv("bound", format!("none (criterion pass={})", rep.pass)),
        (Err(e), None) => s.kv("bound", format!("none ({e})")),
    }
    s.kv("pass", pass);

    let mut files = vec![("beltrami.csv".to_string(), beltrami_csv(&est))];
    if scenario.output.svg {
        let title = format!("|mu| of the extension, sup {}", num(est.sup_abs_mu));
        files.push(("beltrami.svg".into(), beltrami_svg(&est, &title)));
    }
    Ok(Outcome { pass, summary: s.0, files, out_dir: scenario.output.dir.clone() })
}

fn compose(scenario: Option<&Scenario>, opts: &RunOptions) -> Result<Outcome, CliError> {
    let from_scenario = || -> Result<(f64, f64), CliError> {
        let sc = scenario.ok_or_else(|| CliError::Input("compose needs --k1 and --k2 or a scenario".into()))?;
        if let Some(c) = sc.compose {
            return Ok((c.k1, c.k2));
        }
        let r = sc.resolve()?;
        let q = sc.criterion.effective_companion(&r.companion, &r.params)?;
        Ok((sc.criterion.threshold(&r.params), q.extension_dilatation()))
    };
    let (k1, k2) = match (opts.k1, opts.k2) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => from_scenario()?,
        _ => return Err(CliError::Input("give both --k1 and --k2".into())),
    };
    let ell = compose_dilatation(k1, k2)?;
    let mut s = Summary::default();
    s.kv("command", "compose");
    s.num("k1", k1);
    s.num("k2", k2);
    s.num("composed", ell);
    s.num("max_dilatation", maximal_dilatation(ell));
    s.kv("pass", true);
    let out_dir = scenario.map(|sc| sc.output.dir.clone()).unwrap_or_else(|| PathBuf::from("qcx-out"));
    Ok(Outcome { pass: true, summary: s.0, files: Vec::new(), out_dir })
}

fn fit_cmd(scenario: &Scenario, r: &Resolved) -> Result<Outcome, CliError> {
    let spec = scenario.fit.ok_or_else(|| CliError::Input("fit-sector needs a \"fit\" section".into()))?;
    let disk = spec.disk.map(|d| (d.center, d.radius));
    let fit = fit_sector(&r.f, spec.w0, disk, &scenario.grid.points())?;
    let mut s = Summary::default();
    header(&mut s, Command::FitSector, scenario);
    s.point("w0", fit.sector.w0);
    s.num("lambda0", fit.sector.lambda0);
    s.num("a", fit.sector.a);
    s.num("extension_dilatation", fit.sector.extension_dilatation());
    s.point("disk_center", fit.center);
    s.num("disk_radius", fit.radius);
    if let Some(m) = fit.sup_estimate {
        s.num("sup_modulus_estimate", m);
    }
    s.kv("contained", fit.containment.contained);
    s.num("min_margin", fit.containment.min_margin);
    s.point("worst_point", fit.containment.worst_point);
    s.kv("samples", fit.containment.samples);
    s.kv("pass", fit.containment.contained);
    let sector_json = serde_json::to_string_pretty(&fit.sector).expect("sector serializes") + "\n";
    Ok(Outcome {
        pass: fit.containment.contained,
        summary: s.0,
        files: vec![("sector.json".into(), sector_json)],
        out_dir: scenario.output.dir.clone(),
    })
}
