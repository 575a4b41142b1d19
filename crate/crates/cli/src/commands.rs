//! Subcommand arguments and table builders.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::Args;
use kpo4_core::elements::{snail_equilibrium_phase, snail_expansion, snail_kerr_frequency_fit, snail_mode_params, Snail};
use kpo4_core::netlist::{circuit_couplings, quantize as quantize_netlist, read_netlist, CapacitanceChoice, Role, Topology};
use kpo4_core::oracle::{four_body_from_gap, GapScan};
use kpo4_core::perturbation::{h4_general, kpo_ladder, sw_mixing, CouplingGraph, ModeSpectrum};
use kpo4_core::presets::{self, SNAIL_FIT_POINTS, SNAIL_FLUX_WINDOW, SNAIL_PLAQUETTE, SQUID_PLAQUETTE};
use kpo4_core::pumpplan::{
    check_mixing, default_frequencies, default_tolerance, detect_residual, lhz_plan, validate_plan, PumpAssignment,
};
use kpo4_core::spinmodel::{
    boltzmann_probabilities, calibrate_beta, fit_energy_model, parity_curve, EffectiveEnergyModel, ProbabilityTable,
    SpinState,
};
use kpo4_core::units::{ghz, mhz, to_ghz, to_hz, to_mhz, FEMTO, NANO, PICO};
use kpo4_core::ModeParams;
use serde::Deserialize;

use crate::config::{grid, load, ModelFile};
use crate::output::{num, render, Provenance, Table};
use crate::CliError;

fn provenance<T: std::fmt::Debug>(command: &str, resolved: &T) -> Provenance {
    let mut p = Provenance::new(command);
    p.feed(format!("{resolved:?}").as_bytes());
    p
}

fn role(r: Role) -> &'static str {
    match r {
        Role::Kpo => "kpo",
        Role::Coupler => "coupler",
    }
}

#[derive(Debug, Args)]
pub struct NetlistArgs {
    /// Netlist file (TOML).
    pub netlist: PathBuf,
    /// Use C̃ from the inverse capacitance matrix instead of the attached capacitance.
    #[arg(long)]
    pub effective: bool,
}

impl NetlistArgs {
    fn load(&self, command: &str) -> Result<(kpo4_core::netlist::CircuitNetlist, CapacitanceChoice, Provenance), CliError> {
        let bytes = std::fs::read(&self.netlist).map_err(|e| CliError::Io(format!("{}: {e}", self.netlist.display())))?;
        let netlist = read_netlist(&self.netlist)?;
        let choice = if self.effective { CapacitanceChoice::Effective } else { CapacitanceChoice::Bare };
        let mut p = provenance(command, &choice);
        p.feed(&bytes);
        Ok((netlist, choice, p))
    }
}

pub fn quantize(a: &NetlistArgs) -> Result<Vec<u8>, CliError> {
    let (netlist, choice, prov) = a.load("quantize")?;
    let modes = quantize_netlist(&netlist, choice)?;
    let mut t = Table::new(&["mode", "role", "omega_GHz", "kerr_MHz", "capacitance_fF"]);
    for m in &modes {
        t.push(vec![
            m.name.clone(),
            role(m.role).into(),
            num(to_ghz(m.params.omega)),
            num(to_mhz(m.params.kerr)),
            num(m.capacitance / FEMTO),
        ]);
    }
    render(prov, &[("modes", t)])
}

pub fn couplings(a: &NetlistArgs) -> Result<Vec<u8>, CliError> {
    let (netlist, choice, prov) = a.load("couplings")?;
    let (modes, cc) = circuit_couplings(&netlist, choice)?;
    let mut t = Table::new(&["kind", "a", "b", "exact_MHz", "approx_MHz"]);
    t.note(format!(
        "topology {}",
        match cc.reduced.topology {
            Topology::UnitCircuit { .. } => "unit-circuit",
            Topology::Island { .. } => "island",
            Topology::General => "general",
        }
    ));
    if let Some(d) = cc.reduced.discarded {
        t.note(format!(
            "discarded sum mode C_plus_fF {} high_frequency {}",
            num(d.capacitance / FEMTO),
            d.high_frequency
        ));
    }
    let kpo: Vec<&str> = modes.iter().filter(|m| m.role == Role::Kpo).map(|m| m.name.as_str()).collect();
    let coupler = modes.iter().find(|m| m.role == Role::Coupler).map(|m| m.name.as_str());
    let approx = cc.approx.as_ref();
    for j in 0..kpo.len() {
        for k in j + 1..kpo.len() {
            let ap = approx.map(|g| num(to_mhz(g.h[j][k]))).unwrap_or_default();
            t.push(vec!["h".into(), kpo[j].into(), kpo[k].into(), num(to_mhz(cc.exact.h[j][k])), ap]);
        }
    }
    if let Some(c) = coupler {
        for (j, name) in kpo.iter().enumerate() {
            let signed = |g: &CouplingGraph| num(to_mhz(g.s[j] as f64 * g.g[j]));
            let ap = approx.filter(|g| !g.g.is_empty()).map(signed).unwrap_or_default();
            t.push(vec!["g".into(), (*name).into(), c.into(), signed(&cc.exact), ap]);
        }
    }
    render(prov, &[("couplings", t)])
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// First unit detuning ε/2π, MHz [default: 20].
    #[arg(long)]
    pub start_mhz: Option<f64>,
    /// Last unit detuning, MHz [default: 500].
    #[arg(long)]
    pub stop_mhz: Option<f64>,
    /// Number of grid points [default: 41].
    #[arg(long)]
    pub points: Option<usize>,
    /// Evenly spaced grid instead of logarithmic.
    #[arg(long)]
    pub linear: bool,
}

pub fn sweep(a: &SweepArgs) -> Result<Vec<u8>, CliError> {
    let mut prov = Provenance::new("sweep");
    let f: SweepArgs = load(a.config.as_deref(), &mut prov)?;
    let start = a.start_mhz.or(f.start_mhz).unwrap_or(20.0);
    let stop = a.stop_mhz.or(f.stop_mhz).unwrap_or(500.0);
    let points = a.points.or(f.points).unwrap_or(41);
    let linear = a.linear || f.linear;
    prov.feed(format!("{:?}", (start, stop, points, linear)).as_bytes());
    if !(start > 0.0) {
        return Err(CliError::Usage(format!("detuning range must exclude 0, got start {start} MHz")));
    }
    let eps = grid(start, stop, points, !linear)?;
    let rows = presets::coupling_sweep(&eps.iter().map(|&e| mhz(e)).collect::<Vec<_>>())?;
    let mut t = Table::new(&["eps_MHz", "g4_kpo_like", "g4_transmon_like", "h4_squid", "h4_snail", "h4_tilde"]);
    t.note("all couplings in MHz");
    t.note(format!("reference two-body coupling {} MHz", num(presets::TWO_BODY_MHZ)));
    for (e, r) in eps.iter().zip(&rows) {
        t.push(vec![
            num(*e),
            num(to_mhz(r.g4_kpo_like)),
            num(to_mhz(r.g4_transmon_like)),
            num(to_mhz(r.h4_squid)),
            num(to_mhz(r.h4_snail)),
            num(to_mhz(r.h4_tilde)),
        ]);
    }
    render(prov, &[("sweep", t)])
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnailArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Shunt capacitance, fF [default: 200].
    #[arg(long)]
    pub c_ff: Option<f64>,
    /// Linear series inductance, pH [default: 100].
    #[arg(long)]
    pub l_ph: Option<f64>,
    /// Large-junction critical current, nA [default: 1250].
    #[arg(long)]
    pub i0_na: Option<f64>,
    /// Small-to-large junction ratio [default: 0.3].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Number of large junctions [default: 2].
    #[arg(long)]
    pub n: Option<u32>,
    /// First flux, turns of the flux quantum [default: 0].
    #[arg(long)]
    pub start_turns: Option<f64>,
    /// Last flux, turns [default: 0.5].
    #[arg(long)]
    pub stop_turns: Option<f64>,
    /// Number of flux points [default: 51].
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug)]
struct SnailRun {
    c: f64,
    l: f64,
    i0: f64,
    gamma: f64,
    n: u32,
    turns: Vec<f64>,
}

pub fn snail(a: &SnailArgs) -> Result<Vec<u8>, CliError> {
    let mut prov = Provenance::new("snail");
    let f: SnailArgs = load(a.config.as_deref(), &mut prov)?;
    let p = SNAIL_PLAQUETTE;
    let run = SnailRun {
        c: a.c_ff.or(f.c_ff).unwrap_or(p.c_snail / FEMTO) * FEMTO,
        l: a.l_ph.or(f.l_ph).unwrap_or(p.l_q / PICO) * PICO,
        i0: a.i0_na.or(f.i0_na).unwrap_or(p.i0_sn / NANO) * NANO,
        gamma: a.gamma.or(f.gamma).unwrap_or(p.gamma),
        n: a.n.or(f.n).unwrap_or(p.n),
        turns: grid(
            a.start_turns.or(f.start_turns).unwrap_or(0.0),
            a.stop_turns.or(f.stop_turns).unwrap_or(0.5),
            a.points.or(f.points).unwrap_or(51),
            false,
        )?,
    };
    prov.feed(format!("{run:?}").as_bytes());
    let element = |turns: f64| Snail { i0: run.i0, gamma: run.gamma, n: run.n, phi_x: 2.0 * PI * turns };
    let mut t = Table::new(&["phi_x_turns", "phi_bar_rad", "c2", "c3", "c4", "omega_GHz", "kerr_MHz"]);
    for &turns in &run.turns {
        let s = element(turns);
        let x = snail_expansion(&s, snail_equilibrium_phase(&s)?, run.l)?;
        let m = snail_mode_params(run.c, run.l, &s)?;
        t.push(vec![
            num(turns),
            num(x.phi_bar),
            num(x.c2),
            num(x.c3),
            num(x.c4),
            num(to_ghz(m.omega)),
            num(to_mhz(m.kerr)),
        ]);
    }
    let (lo, hi) = SNAIL_FLUX_WINDOW;
    let window: Vec<ModeParams> = grid(lo, hi, SNAIL_FIT_POINTS, false)?
        .into_iter()
        .map(|x| snail_mode_params(run.c, run.l, &element(x)))
        .collect::<Result<_, _>>()?;
    let fit = snail_kerr_frequency_fit(&window)?;
    t.note(format!("kerr fit window {} to {} turns", num(lo), num(hi)));
    t.note(format!("kerr fit slope_MHz_per_GHz {}", num(fit.slope * 1e3)));
    t.note(format!("kerr fit intercept_MHz {}", num(to_mhz(fit.intercept))));
    t.note(format!("kerr fit rms_residual_fraction {}", num(fit.rms_residual / fit.kerr_range)));
    render(prov, &[("snail", t)])
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpPlanArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Plaquette rows; the grid side is twice this [default: 2].
    #[arg(long)]
    pub rows: Option<usize>,
    /// Base pump frequency, GHz [default: 18].
    #[arg(long)]
    pub base_ghz: Option<f64>,
    /// Frequency step between pump indices, MHz [default: 1].
    #[arg(long)]
    pub spacing_mhz: Option<f64>,
    /// Classify four half pump frequencies (GHz, comma separated) instead of planning.
    #[arg(long, value_delimiter = ',')]
    pub classify: Option<Vec<f64>>,
    /// Largest relation order searched when classifying [default: 4].
    #[arg(long)]
    pub order: Option<u32>,
    /// Resonance tolerance, kHz [default: 1].
    #[arg(long)]
    pub tolerance_khz: Option<f64>,
}

pub fn pump_plan(a: &PumpPlanArgs) -> Result<Vec<u8>, CliError> {
    let mut prov = Provenance::new("pump-plan");
    let f: PumpPlanArgs = load(a.config.as_deref(), &mut prov)?;
    let tol = a.tolerance_khz.or(f.tolerance_khz).map(|k| mhz(k * 1e-3)).unwrap_or(default_tolerance());
    if !(tol >= 0.0) {
        return Err(CliError::Usage("tolerance must be non-negative".into()));
    }
    if let Some(half) = a.classify.clone().or(f.classify.clone()) {
        let order = a.order.or(f.order).unwrap_or(4);
        prov.feed(format!("{:?}", (&half, order, tol)).as_bytes());
        return classify(prov, &half, order, tol);
    }
    let rows = a.rows.or(f.rows).unwrap_or(2);
    let base = (a.base_ghz.or(f.base_ghz).unwrap_or(18.0) * 1e9).round() as i64;
    let spacing = (a.spacing_mhz.or(f.spacing_mhz).unwrap_or(1.0) * 1e6).round() as i64;
    prov.feed(format!("{:?}", (rows, base, spacing, tol)).as_bytes());
    if base <= 0 || spacing <= 0 {
        return Err(CliError::Usage("base frequency and spacing must be positive".into()));
    }
    let hz = default_frequencies(base, spacing);
    let plan = lhz_plan(rows, hz, tol)?;
    let mut sites = Table::new(&["row", "col", "index", "freq_GHz"]);
    for (r, line) in plan.sites.iter().enumerate() {
        for (c, &idx) in line.iter().enumerate() {
            sites.push(vec![
                r.to_string(),
                c.to_string(),
                idx.to_string(),
                num(hz[idx as usize - 1] as f64 * 1e-9),
            ]);
        }
    }
    sites.note(format!("grid {n}x{n}, {} plaquettes", plan.plaquettes.len(), n = plan.size));
    let mut report = Table::new(&["kind", "row", "col", "detail"]);
    for v in validate_plan(&plan, &hz, 0) {
        let c = plan.plaquettes[v.plaquette].centre;
        report.push(vec![
            "violation".into(),
            c.row.to_string(),
            c.col.to_string(),
            format!("line {} misses by {} Hz", v.line, v.mismatch_hz),
        ]);
    }
    for star in &plan.stars {
        let pumps: Vec<String> = star.indices.iter().map(|i| format!("p{i}")).collect();
        for r in &star.spurious {
            report.push(vec![
                "spurious".into(),
                star.centre.row.to_string(),
                star.centre.col.to_string(),
                format!("{} over w = ({})", r.describe(), pumps.join(" ")),
            ]);
        }
    }
    for s in &plan.negligible {
        report.push(vec![
            "negligible".into(),
            s.row.to_string(),
            s.col.to_string(),
            "fourth-order star of index-1 neighbours".into(),
        ]);
    }
    report.note(format!(
        "{} violations, {} spurious relations",
        report.rows.iter().filter(|r| r[0] == "violation").count(),
        plan.spurious_count()
    ));
    render(prov, &[("sites", sites), ("report", report)])
}

fn classify(prov: Provenance, half_ghz: &[f64], order: u32, tol: f64) -> Result<Vec<u8>, CliError> {
    if half_ghz.len() != 4 {
        return Err(CliError::Usage(format!("--classify needs 4 frequencies, got {}", half_ghz.len())));
    }
    let omega: Vec<f64> = half_ghz.iter().map(|&f| ghz(2.0 * f)).collect();
    let pump = PumpAssignment::new(omega)?;
    let mut t = Table::new(&["relation", "order", "class", "residual_Hz"]);
    for p in check_mixing(&pump, tol)? {
        t.note(format!("four-body partition {}", p.label()));
    }
    for r in detect_residual(&pump, order, tol) {
        t.push(vec![r.describe(), r.order.to_string(), r.class.label().into(), num(to_hz(r.residual))]);
    }
    render(prov, &[("relations", t)])
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Model TOML (alpha, epsilon_mhz, theta_d, theta_p, h4_mhz, g1_mhz..g4_mhz, beta, target_even).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Four-body coupling, MHz.
    #[arg(long)]
    pub h4_mhz: Option<f64>,
    /// Inverse temperature, s/rad; overrides calibration.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Even-parity probability at zero plaquette phase used to calibrate beta.
    #[arg(long)]
    pub target_even: Option<f64>,
    /// First phase, rad [default: 0].
    #[arg(long)]
    pub start: Option<f64>,
    /// Last phase, rad [default: 4π for parity, 2π for boltzmann].
    #[arg(long)]
    pub stop: Option<f64>,
    /// Number of phase points [default: 81 for parity, 65 for boltzmann].
    #[arg(long)]
    pub points: Option<usize>,
}

struct Model {
    file: ModelFile,
    beta: f64,
    phases: Vec<f64>,
}

impl ModelArgs {
    fn resolve(&self, command: &str, stop: f64, points: usize) -> Result<(Model, Provenance), CliError> {
        let mut prov = Provenance::new(command);
        let mut file: ModelFile = load(self.config.as_deref(), &mut prov)?;
        file.h4_mhz = self.h4_mhz.unwrap_or(file.h4_mhz);
        file.beta = self.beta.or(file.beta);
        file.target_even = self.target_even.unwrap_or(file.target_even);
        let phases = grid(self.start.unwrap_or(0.0), self.stop.unwrap_or(stop), self.points.unwrap_or(points), false)?;
        prov.feed(format!("{:?}", (&file, &phases)).as_bytes());
        let cfg = file.oscillation();
        cfg.validate()?;
        let beta = match file.beta {
            Some(b) => b,
            None => calibrate_beta(&cfg, &file.interactions(), file.target_even)?,
        };
        Ok((Model { file, beta, phases }, prov))
    }
}

fn state_header(first: &str) -> Vec<String> {
    std::iter::once(first.to_string()).chain(SpinState::all().iter().map(|s| s.label())).collect()
}

pub fn parity(a: &ModelArgs) -> Result<Vec<u8>, CliError> {
    let (m, prov) = a.resolve("parity", 4.0 * PI, 81)?;
    let curve = parity_curve(m.beta, &m.phases, &m.file.oscillation(), &m.file.interactions());
    let mut t = Table::new(&["theta_p_rad", "even", "odd"]);
    t.note(format!("beta_s_per_rad {}", num(m.beta)));
    for p in curve {
        t.push(vec![num(p.theta_p), num(p.even), num(p.odd)]);
    }
    render(prov, &[("parity", t)])
}

pub fn boltzmann(a: &ModelArgs) -> Result<Vec<u8>, CliError> {
    let (m, prov) = a.resolve("boltzmann", 2.0 * PI, 65)?;
    let model = EffectiveEnergyModel::from_config(m.beta, &m.file.oscillation(), &m.file.interactions());
    let header = state_header("theta_d4_rad");
    let mut t = Table::new(&header.iter().map(String::as_str).collect::<Vec<_>>());
    t.note(format!("beta_s_per_rad {}", num(m.beta)));
    for &theta in &m.phases {
        let p = boltzmann_probabilities(&model, theta);
        t.push(std::iter::once(num(theta)).chain(p.iter().map(|&x| num(x))).collect());
    }
    render(prov, &[("probabilities", t)])
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Probability table: theta_d4_rad then 16 state columns, one row per phase.
    pub data: PathBuf,
}

fn read_table(bytes: &[u8]) -> Result<ProbabilityTable, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut table = ProbabilityTable { theta: Vec::new(), probs: Vec::new() };
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Data(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 17 {
            return Err(CliError::Data(format!("line {line}: expected 17 fields, found {}", record.len())));
        }
        let mut v = [0.0; 17];
        for (slot, field) in v.iter_mut().zip(record.iter()) {
            *slot = field
                .parse()
                .map_err(|_| CliError::Data(format!("line {line}: '{field}' is not a number")))?;
        }
        table.theta.push(v[0]);
        table.probs.push(v[1..].try_into().expect("16 probabilities"));
    }
    if table.theta.is_empty() {
        return Err(CliError::Data("probability table has no data rows".into()));
    }
    Ok(table)
}

pub fn fit(a: &FitArgs) -> Result<Vec<u8>, CliError> {
    let bytes = std::fs::read(&a.data).map_err(|e| CliError::Io(format!("{}: {e}", a.data.display())))?;
    let mut prov = Provenance::new("fit");
    prov.feed(&bytes);
    let fit = fit_energy_model(&read_table(&bytes)?)?;
    let mut t = Table::new(&["coefficient", "value", "abs"]);
    for (label, v) in EffectiveEnergyModel::labels().iter().zip(fit.model.to_vector()) {
        t.push(vec![(*label).into(), num(v), num(v.abs())]);
    }
    for (label, v) in [
        ("A", fit.a),
        ("B", fit.b),
        ("C", fit.c),
        ("residual", fit.residual),
        ("reference_residual", fit.reference_residual),
        ("condition_number", fit.condition_number),
        ("floored", fit.floored as f64),
    ] {
        t.push(vec![label.into(), num(v), num(v.abs())]);
    }
    render(prov, &[("fit", t)])
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Unit detuning ε/2π of the KPO ladder, MHz [default: 100].
    #[arg(long)]
    pub eps_mhz: Option<f64>,
    /// Fock truncation per mode [default: 4].
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Half width of the ω₄ scan, MHz [default: 3].
    #[arg(long)]
    pub half_width_mhz: Option<f64>,
    /// Number of scan points [default: 31].
    #[arg(long)]
    pub points: Option<usize>,
}

pub fn oracle(a: &OracleArgs) -> Result<Vec<u8>, CliError> {
    let mut prov = Provenance::new("oracle");
    let f: OracleArgs = load(a.config.as_deref(), &mut prov)?;
    let eps = a.eps_mhz.or(f.eps_mhz).unwrap_or(100.0);
    let d = a.truncation.or(f.truncation).unwrap_or(4);
    let scan = GapScan {
        half_width: mhz(a.half_width_mhz.or(f.half_width_mhz).unwrap_or(3.0)),
        points: a.points.or(f.points).unwrap_or(31),
    };
    prov.feed(format!("{:?}", (eps, d, scan)).as_bytes());
    if !(eps > 0.0) {
        return Err(CliError::Usage(format!("unit detuning must be positive, got {eps} MHz")));
    }
    let w1 = ghz(presets::REFERENCE_GHZ);
    let (modes, _) = presets::squid_plaquette_modes(&SQUID_PLAQUETTE, w1)?;
    let w = kpo_ladder(w1, mhz(eps));
    let spec = ModeSpectrum::new((0..4).map(|j| ModeParams { omega: w[j], kerr: modes[j].kerr }).collect());
    let c = CouplingGraph::uniform(4, mhz(presets::TWO_BODY_MHZ));
    let kerr = modes.map(|m| m.kerr);
    let h4 = h4_general(&kerr, &sw_mixing(&spec, &c)?.h_tilde).abs();
    log::info!("diagonalizing {} scan points at truncation {d}", scan.points);
    let gap = four_body_from_gap(&spec, &c, d, &scan)?;
    let mut t = Table::new(&["scan_offset_MHz", "gap_MHz"]);
    t.note(format!("SQUID plaquette, eps {} MHz, truncation {d}", num(eps)));
    for (x, g) in gap.offsets.iter().zip(&gap.gaps) {
        t.push(vec![num(to_mhz(*x)), num(to_mhz(*g))]);
    }
    t.footer.push(format!(
        "summary h_eff_MHz {} perturbative_MHz {} relative_deviation {} min_offset_MHz {}",
        num(to_mhz(gap.h_eff)),
        num(to_mhz(h4)),
        num(gap.h_eff / h4 - 1.0),
        num(to_mhz(gap.min_offset))
    ));
    render(prov, &[("oracle", t)])
}
