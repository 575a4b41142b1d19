//! Reference circuits, measured device data and pump-frequency sets used by the
//! command-line front end, the benchmarks and the regression tests.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elements::{
    junction_current_for_frequency, kpo_mode_params, snail_kerr_frequency_fit, snail_mode_params,
    squid_inductance_for_frequency, JunctionElement, LinearFit, ModeParams, Snail,
};
use crate::error::Result;
use crate::netlist::{Branch, BranchElement, Capacitor, CircuitNetlist, Role, Terminals};
use crate::perturbation::{g4_symmetric, h4_detuning, h4_snail, h4_tilde_ladder, CouplingGraph};
use crate::units::{ghz, mhz, FEMTO, NANO, PICO};

/// Operating frequency of every reference circuit, GHz.
pub const REFERENCE_GHZ: f64 = 10.0;
/// Two-body coupling all reference circuits are tuned to, MHz.
pub const TWO_BODY_MHZ: f64 = 5.0;

/// Four KPOs coupled through a floating single-junction coupler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplerCircuit {
    pub c_q: f64,
    pub l_q: f64,
    pub c_c: f64,
    pub c_g: f64,
    pub l_g: f64,
}

pub const KPO_LIKE_COUPLER: CouplerCircuit = CouplerCircuit {
    c_q: 500.0 * FEMTO,
    l_q: 100.0 * PICO,
    c_c: 1.0 * FEMTO,
    c_g: 500.0 * FEMTO,
    l_g: 100.0 * PICO,
};

pub const TRANSMON_LIKE_COUPLER: CouplerCircuit = CouplerCircuit {
    c_q: 500.0 * FEMTO,
    l_q: 100.0 * PICO,
    // 1/√5 fF
    c_c: 0.447_213_595_499_957_9 * FEMTO,
    c_g: 100.0 * FEMTO,
    l_g: 100.0 * PICO,
};

/// Four SQUID KPOs coupled directly; KPOs 1 and 4 carry a series junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquidPlaquette {
    pub c_q: f64,
    pub l_q: f64,
    pub c_c: f64,
    pub i0_sr: f64,
}

pub const SQUID_PLAQUETTE: SquidPlaquette = SquidPlaquette {
    c_q: 500.0 * FEMTO,
    l_q: 100.0 * PICO,
    c_c: 2.0 * FEMTO,
    i0_sr: 1500.0 * NANO,
};

/// KPOs 1 and 4 are SNAILs on a smaller capacitance, KPOs 2 and 3 SQUIDs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnailPlaquette {
    pub c_snail: f64,
    pub c_squid: f64,
    pub l_q: f64,
    pub c_c: f64,
    pub i0_sn: f64,
    pub gamma: f64,
    pub n: u32,
}

pub const SNAIL_PLAQUETTE: SnailPlaquette = SnailPlaquette {
    c_snail: 200.0 * FEMTO,
    c_squid: 500.0 * FEMTO,
    l_q: 100.0 * PICO,
    // √(8/5) fF
    c_c: 1.264_911_064_067_351_7 * FEMTO,
    i0_sn: 1250.0 * NANO,
    gamma: 0.3,
    n: 2,
};

/// Flux window (turns) over which the SNAIL Kerr is fitted linearly in frequency.
pub const SNAIL_FLUX_WINDOW: (f64, f64) = (0.45, 0.49);
pub const SNAIL_FIT_POINTS: usize = 41;

impl SnailPlaquette {
    pub fn snail(&self, turns: f64) -> Snail {
        Snail {
            i0: self.i0_sn,
            gamma: self.gamma,
            n: self.n,
            phi_x: 2.0 * PI * turns,
        }
    }
}

/// Coupler mode tuned to `omega` and the junction critical current that achieves it.
pub fn coupler_mode(circuit: &CouplerCircuit, omega: f64) -> Result<(ModeParams, f64)> {
    let i0 = junction_current_for_frequency(omega, circuit.c_g, circuit.l_g)?;
    let p = kpo_mode_params(circuit.c_g, circuit.l_g, &JunctionElement::SingleJunction { i0 })?;
    Ok((p, i0))
}

/// SQUID-only KPO tuned to `omega`: (mode, L_Jsq).
pub fn squid_mode(c: f64, l_geom: f64, omega: f64) -> Result<(ModeParams, f64)> {
    let l_jsq = squid_inductance_for_frequency(omega, c, l_geom, 0.0)?;
    Ok((kpo_mode_params(c, l_geom, &JunctionElement::Squid { l_jsq })?, l_jsq))
}

/// SQUID in series with a junction of critical current `i0_sr`, tuned to `omega`.
pub fn series_squid_mode(c: f64, l_geom: f64, i0_sr: f64, omega: f64) -> Result<(ModeParams, f64)> {
    let series = JunctionElement::SingleJunction { i0: i0_sr };
    let l_jsr: f64 = series.junction_inductances()?.iter().sum();
    let l_jsq = squid_inductance_for_frequency(omega, c, l_geom, l_jsr)?;
    let stack = JunctionElement::SeriesStack(vec![JunctionElement::Squid { l_jsq }, series]);
    Ok((kpo_mode_params(c, l_geom, &stack)?, l_jsq))
}

/// Modes and L_Jsq of the SQUID plaquette with every KPO at `omega`.
pub fn squid_plaquette_modes(p: &SquidPlaquette, omega: f64) -> Result<([ModeParams; 4], [f64; 4])> {
    let (outer, l_outer) = series_squid_mode(p.c_q, p.l_q, p.i0_sr, omega)?;
    let (inner, l_inner) = squid_mode(p.c_q, p.l_q, omega)?;
    Ok(([outer, inner, inner, outer], [l_outer, l_inner, l_inner, l_outer]))
}

/// SNAIL modes across the fit window, in flux order.
pub fn snail_sweep(p: &SnailPlaquette, points: usize) -> Result<Vec<ModeParams>> {
    let (lo, hi) = SNAIL_FLUX_WINDOW;
    (0..points)
        .into_par_iter()
        .map(|i| {
            let turns = lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64;
            snail_mode_params(p.c_snail, p.l_q, &p.snail(turns))
        })
        .collect()
}

pub fn snail_fit(p: &SnailPlaquette) -> Result<LinearFit> {
    snail_kerr_frequency_fit(&snail_sweep(p, SNAIL_FIT_POINTS)?)
}

/// Four-body couplings of the five reference circuits at one unit detuning, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub g4_kpo_like: f64,
    pub g4_transmon_like: f64,
    pub h4_squid: f64,
    pub h4_snail: f64,
    pub h4_tilde: f64,
}

/// Frequency-independent inputs of [`coupling_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepInputs {
    pub k_g_kpo_like: f64,
    pub k_g_transmon_like: f64,
    pub squid_kerr: [f64; 4],
    pub snail_fit: LinearFit,
}

impl SweepInputs {
    pub fn reference() -> Result<Self> {
        let w = ghz(REFERENCE_GHZ);
        let (kpo, _) = squid_plaquette_modes(&SQUID_PLAQUETTE, w)?;
        Ok(SweepInputs {
            k_g_kpo_like: coupler_mode(&KPO_LIKE_COUPLER, w)?.0.kerr,
            k_g_transmon_like: coupler_mode(&TRANSMON_LIKE_COUPLER, w)?.0.kerr,
            squid_kerr: kpo.map(|m| m.kerr),
            snail_fit: snail_fit(&SNAIL_PLAQUETTE)?,
        })
    }
}

/// SNAIL-plaquette couplings at the reference frequency: (h_QN, h_NN, h_QQ).
pub fn snail_plaquette_couplings(p: &SnailPlaquette) -> (f64, f64, f64) {
    let w = ghz(REFERENCE_GHZ);
    let h_nn = p.c_c / (8.0 * p.c_snail) * w;
    let h_qq = p.c_c / (8.0 * p.c_squid) * w;
    (mhz(TWO_BODY_MHZ), h_nn, h_qq)
}

pub fn sweep_row(inputs: &SweepInputs, eps: f64) -> Result<SweepRow> {
    let coupling = mhz(TWO_BODY_MHZ);
    let w1 = ghz(REFERENCE_GHZ);
    let k2 = squid_mode(SNAIL_PLAQUETTE.c_squid, SNAIL_PLAQUETTE.l_q, w1 - 3.0 * eps)?.0.kerr;
    let k3 = squid_mode(SNAIL_PLAQUETTE.c_squid, SNAIL_PLAQUETTE.l_q, w1 - eps)?.0.kerr;
    let k_snail = [
        inputs.snail_fit.eval(w1),
        k2,
        k3,
        inputs.snail_fit.eval(w1 - 2.0 * eps),
    ];
    let (h_qn, h_nn, h_qq) = snail_plaquette_couplings(&SNAIL_PLAQUETTE);
    Ok(SweepRow {
        eps,
        g4_kpo_like: g4_symmetric(coupling, eps, inputs.k_g_kpo_like)?,
        g4_transmon_like: g4_symmetric(coupling, eps, inputs.k_g_transmon_like)?,
        h4_squid: h4_detuning(coupling, eps, &inputs.squid_kerr)?,
        h4_snail: h4_snail(h_qn, h_nn, h_qq, &k_snail, eps)?,
        h4_tilde: h4_tilde_ladder(coupling, eps, inputs.squid_kerr[1])?,
    })
}

/// [`sweep_row`] over `eps` (rad/s), evaluated in parallel and returned in input order.
pub fn coupling_sweep(eps: &[f64]) -> Result<Vec<SweepRow>> {
    let inputs = SweepInputs::reference()?;
    eps.par_iter().map(|&e| sweep_row(&inputs, e)).collect()
}

/// Measured plaquette data: dressed frequencies (GHz), dressed Kerr (MHz), oscillation
/// amplitudes, drive amplitudes (MHz) and pairwise couplings (MHz, order 12, 13, 14, 23, 24, 34).
pub mod device {
    pub const OMEGA_GHZ: [f64; 4] = [9.33, 9.31, 9.35, 9.29];
    pub const KERR_MHZ: [f64; 4] = [10.4, 15.2, 13.2, 10.0];
    pub const ALPHA: [f64; 4] = [5.9, 4.5, 1.3, 5.3];
    pub const EPSILON_MHZ: [f64; 4] = [130.0, 5.3, 29.0, 4.5];
    pub const H_MHZ: [f64; 6] = [5.8, 4.4, 2.5, 4.5, 4.4, 4.7];
    /// Even-parity probability at θ_p = 0.
    pub const EVEN_PARITY_MAX: f64 = 0.641;
}

/// Pair index order used by [`device::H_MHZ`].
pub const PAIR_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn device_couplings() -> CouplingGraph {
    let mut c = CouplingGraph::uncoupled(4);
    for (&(j, k), &h) in PAIR_ORDER.iter().zip(&device::H_MHZ) {
        c.set_h(j, k, mhz(h));
    }
    c
}

/// Half pump frequencies ω_pj/2 (GHz) of three measured configurations.
pub mod pumps {
    /// Meets ω_p1 + ω_p2 = ω_p3 + ω_p4 and nothing else.
    pub const MATCHED: [f64; 4] = [9.270, 9.249, 9.290, 9.229];
    /// Misses the four-body condition by 2 MHz.
    pub const DETUNED: [f64; 4] = [9.270, 9.249, 9.289, 9.229];
    /// Meets the four-body condition and two residual relations.
    pub const RESIDUAL: [f64; 4] = [9.270, 9.250, 9.290, 9.230];
}

/// Pump frequencies (rad/s) for a set of half frequencies in GHz.
pub fn pump_frequencies(half_ghz: &[f64; 4]) -> Vec<f64> {
    half_ghz.iter().map(|&f| ghz(2.0 * f)).collect()
}

fn cap(a: &str, b: &str, c: f64) -> Capacitor {
    Capacitor {
        a: a.into(),
        b: b.into(),
        capacitance: c,
    }
}

/// Six-node netlist: KPOs q1..q4 to ground, q1/q2 coupled to c1 and q3/q4 to c2, C_g
/// across c1-c2. KPO SQUIDs and the coupler junction are tuned to `ghz_target`.
pub fn unit_circuit_netlist(circuit: &CouplerCircuit, ghz_target: f64) -> CircuitNetlist {
    let target = ghz(ghz_target);
    let mut capacitors = Vec::new();
    let mut branches = Vec::new();
    for (j, side) in [(1, "c1"), (2, "c1"), (3, "c2"), (4, "c2")] {
        let q = format!("q{j}");
        capacitors.push(cap(&q, "gnd", circuit.c_q));
        capacitors.push(cap(&q, side, circuit.c_c));
        branches.push(Branch {
            name: Some(format!("kpo{j}")),
            terminals: Terminals::Node(q),
            element: BranchElement::TunedSquid { series: None, target },
            l_geom: circuit.l_q,
            role: Role::Kpo,
        });
    }
    capacitors.push(cap("c1", "c2", circuit.c_g));
    branches.push(Branch {
        name: Some("coupler".into()),
        terminals: Terminals::Pair("c1".into(), "c2".into()),
        element: BranchElement::TunedJunction { target },
        l_geom: circuit.l_g,
        role: Role::Coupler,
    });
    CircuitNetlist {
        nodes: ["gnd", "q1", "q2", "q3", "q4", "c1", "c2"].map(String::from).to_vec(),
        ground: "gnd".into(),
        capacitors,
        branches,
    }
}

/// Four KPOs with capacitances `c_q` coupled by `c_c` to one floating island.
pub fn island_netlist(c_q: [f64; 4], c_c: f64, l_q: f64, kpo: [BranchElement; 4]) -> CircuitNetlist {
    let mut capacitors = Vec::new();
    let mut branches = Vec::new();
    for (j, element) in kpo.into_iter().enumerate() {
        let q = format!("q{}", j + 1);
        capacitors.push(cap(&q, "gnd", c_q[j]));
        capacitors.push(cap(&q, "island", c_c));
        branches.push(Branch {
            name: Some(format!("kpo{}", j + 1)),
            terminals: Terminals::Node(q),
            element,
            l_geom: l_q,
            role: Role::Kpo,
        });
    }
    CircuitNetlist {
        nodes: ["gnd", "q1", "q2", "q3", "q4", "island"].map(String::from).to_vec(),
        ground: "gnd".into(),
        capacitors,
        branches,
    }
}

/// The SQUID plaquette as an island netlist tuned to `ghz_target`.
pub fn squid_plaquette_netlist(p: &SquidPlaquette, ghz_target: f64) -> CircuitNetlist {
    let target = ghz(ghz_target);
    let outer = BranchElement::TunedSquid {
        series: Some(JunctionElement::SingleJunction { i0: p.i0_sr }),
        target,
    };
    let inner = BranchElement::TunedSquid { series: None, target };
    island_netlist(
        [p.c_q; 4],
        p.c_c,
        p.l_q,
        [outer.clone(), inner.clone(), inner, outer],
    )
}

/// The SNAIL plaquette as an island netlist; SNAILs sit at `turns` of flux and the
/// SQUIDs are tuned to `ghz_target`.
pub fn snail_plaquette_netlist(p: &SnailPlaquette, turns: f64, ghz_target: f64) -> CircuitNetlist {
    let target = ghz(ghz_target);
    let snail = BranchElement::Fixed(JunctionElement::Snail(p.snail(turns)));
    let squid = BranchElement::TunedSquid { series: None, target };
    island_netlist(
        [p.c_snail, p.c_squid, p.c_squid, p.c_snail],
        p.c_c,
        p.l_q,
        [snail.clone(), squid.clone(), squid, snail],
    )
}
