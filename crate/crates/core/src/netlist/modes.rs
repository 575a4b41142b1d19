//! Per-branch mode parameters and two-body coupling constants.
//!
//! Exact couplings follow from the inverse capacitance matrix:
//! h_jk = ½G_jk√(C̃_jC̃_k ω_jω_k) and g_j = (G₋/√2)√(C̃_jC̃_g ω_jω_g).
//! Closed-form approximations are provided for the recognized topologies only.

use serde::{Deserialize, Serialize};

use super::{
    build_capacitance_matrix, invert_capacitance, mode_reduce, Branch, BranchElement,
    CircuitNetlist, CouplerNodes, InverseCapacitance, ReducedModes, Role, Terminals, Topology,
};
use crate::elements::{
    junction_current_for_frequency, kpo_mode_params, snail_mode_params,
    squid_inductance_for_frequency, JunctionElement, ModeParams,
};
use crate::error::{Error, Result};
use crate::perturbation::{CouplingGraph, ModeSpectrum};

/// Which capacitance feeds the frequency and Kerr formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CapacitanceChoice {
    /// The directly attached capacitance (C_q to ground, C_g across the coupler).
    #[default]
    Bare,
    /// C̃ from the inverse capacitance matrix.
    Effective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedMode {
    pub name: String,
    pub role: Role,
    pub terminals: Terminals,
    /// Capacitance used for this mode, F.
    pub capacitance: f64,
    pub params: ModeParams,
    /// Junction content with any tuned inductance resolved.
    pub element: JunctionElement,
}

fn branch_capacitance(
    netlist: &CircuitNetlist,
    g: &InverseCapacitance,
    branch: &Branch,
    choice: CapacitanceChoice,
) -> Result<f64> {
    let c = &g.capacitance;
    let value = match (&branch.terminals, choice) {
        (Terminals::Node(a), CapacitanceChoice::Bare) => c.to_ground(required(netlist, a)?),
        (Terminals::Pair(a, b), CapacitanceChoice::Bare) => {
            c.between(required(netlist, a)?, required(netlist, b)?)
        }
        (Terminals::Node(a), CapacitanceChoice::Effective) => {
            let i = required(netlist, a)?;
            1.0 / g.matrix[(i, i)]
        }
        (Terminals::Pair(a, b), CapacitanceChoice::Effective) => {
            let (i, j) = (required(netlist, a)?, required(netlist, b)?);
            let m = &g.matrix;
            1.0 / (m[(i, i)] + m[(j, j)] - 2.0 * m[(i, j)])
        }
    };
    if !(value > 0.0) {
        return Err(Error::Topology(format!(
            "branch {} has no capacitance across it",
            describe(branch)
        )));
    }
    Ok(value)
}

fn required(netlist: &CircuitNetlist, node: &str) -> Result<usize> {
    netlist.node_index(node)?.ok_or_else(|| {
        Error::Topology("inductive branches must name non-ground nodes".into())
    })
}

fn describe(branch: &Branch) -> String {
    match (&branch.name, &branch.terminals) {
        (Some(n), _) => format!("`{n}`"),
        (None, Terminals::Node(a)) => format!("at `{a}`"),
        (None, Terminals::Pair(a, b)) => format!("across `{a}`-`{b}`"),
    }
}

fn resolve(branch: &Branch, c: f64) -> Result<(JunctionElement, ModeParams)> {
    match &branch.element {
        BranchElement::Fixed(JunctionElement::Snail(s)) => {
            Ok((JunctionElement::Snail(*s), snail_mode_params(c, branch.l_geom, s)?))
        }
        BranchElement::Fixed(e) => Ok((e.clone(), kpo_mode_params(c, branch.l_geom, e)?)),
        BranchElement::TunedSquid { series, target } => {
            let l_jsr: f64 = match series {
                Some(e) => e.junction_inductances()?.iter().sum(),
                None => 0.0,
            };
            let l_jsq = squid_inductance_for_frequency(*target, c, branch.l_geom, l_jsr)?;
            let squid = JunctionElement::Squid { l_jsq };
            let element = match series {
                Some(e) => JunctionElement::SeriesStack(vec![squid, e.clone()]),
                None => squid,
            };
            let params = kpo_mode_params(c, branch.l_geom, &element)?;
            Ok((element, params))
        }
        BranchElement::TunedJunction { target } => {
            let i0 = junction_current_for_frequency(*target, c, branch.l_geom)?;
            let element = JunctionElement::SingleJunction { i0 };
            let params = kpo_mode_params(c, branch.l_geom, &element)?;
            Ok((element, params))
        }
    }
}

/// Frequency and Kerr nonlinearity of every inductive branch, in branch order.
pub fn quantize(netlist: &CircuitNetlist, choice: CapacitanceChoice) -> Result<Vec<QuantizedMode>> {
    if netlist.branches.is_empty() {
        return Err(Error::Topology("netlist has no inductive branches".into()));
    }
    let g = invert_capacitance(&build_capacitance_matrix(netlist)?)?;
    netlist
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let c = branch_capacitance(netlist, &g, b, choice)?;
            let (element, params) = resolve(b, c)?;
            Ok(QuantizedMode {
                name: b.name.clone().unwrap_or_else(|| format!("mode{}", i + 1)),
                role: b.role,
                terminals: b.terminals.clone(),
                capacitance: c,
                params,
                element,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitCouplings {
    pub reduced: ReducedModes,
    /// From the inverse capacitance matrix and C̃.
    pub exact: CouplingGraph,
    /// Closed forms in the bare capacitances; only for recognized topologies.
    pub approx: Option<CouplingGraph>,
}

pub fn coupling_constants(modes: &ReducedModes, spectrum: &ModeSpectrum) -> Result<CircuitCouplings> {
    let n = modes.n_kpo();
    if spectrum.n_kpo() != n {
        return Err(Error::InvalidParameter(format!(
            "{} KPO frequencies for {} KPO modes",
            spectrum.n_kpo(),
            n
        )));
    }
    if spectrum.coupler.is_some() != modes.coupler.is_some() {
        return Err(Error::InvalidParameter(
            "spectrum and circuit disagree on the presence of a coupler".into(),
        ));
    }
    if let Some(m) = spectrum.all_modes().iter().find(|m| !(m.omega > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "mode frequencies must be positive, got {:e}",
            m.omega
        )));
    }
    let w: Vec<f64> = spectrum.kpo.iter().map(|m| m.omega).collect();
    let c = &modes.c_kpo;
    let mut exact = CouplingGraph::uncoupled(n);
    for j in 0..n {
        for k in (j + 1)..n {
            let h = 0.5 * modes.g_kpo[j][k] * (c[j] * c[k] * w[j] * w[k]).sqrt();
            exact.set_h(j, k, h);
        }
    }
    if let (Some(cn), Some(c_g), Some(coupler)) = (modes.coupler, modes.c_coupler, spectrum.coupler) {
        let scale = match cn {
            CouplerNodes::Pair(..) => std::f64::consts::FRAC_1_SQRT_2,
            CouplerNodes::Node(_) => 0.5,
        };
        let raw: Vec<f64> = (0..n)
            .map(|j| scale * modes.g_minus[j] * (c[j] * c_g * w[j] * coupler.omega).sqrt())
            .collect();
        exact.s = raw.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect();
        exact.g = raw.iter().map(|x| x.abs()).collect();
    }
    let approx = match &modes.topology {
        Topology::UnitCircuit { c_q, c_c, c_g } => {
            let w_g = spectrum.coupler.map(|m| m.omega).unwrap_or(0.0);
            let mut a = CouplingGraph::uncoupled(n);
            for j in 0..n {
                for k in (j + 1)..n {
                    let h = (c_c[j] * c_c[k]).sqrt() / (8.0 * (c_q[j] * c_q[k]).sqrt())
                        * (w[j] * w[k]).sqrt();
                    a.set_h(j, k, h);
                }
            }
            a.g = (0..n)
                .map(|j| c_c[j] / (4.0 * (c_q[j] * c_g).sqrt()) * (w[j] * w_g).sqrt())
                .collect();
            a.s = exact.s.clone();
            Some(a)
        }
        Topology::Island { c_q, c_c, c_island } => {
            let mut a = CouplingGraph::uncoupled(n);
            for j in 0..n {
                for k in (j + 1)..n {
                    let h = c_c[j] * c_c[k] / (2.0 * c_island * (c_q[j] * c_q[k]).sqrt())
                        * (w[j] * w[k]).sqrt();
                    a.set_h(j, k, h);
                }
            }
            Some(a)
        }
        Topology::General => None,
    };
    Ok(CircuitCouplings {
        reduced: modes.clone(),
        exact,
        approx,
    })
}

/// Quantizes the netlist, reduces it to its KPO and coupler modes, and evaluates the
/// two-body couplings at the quantized frequencies.
pub fn circuit_couplings(
    netlist: &CircuitNetlist,
    choice: CapacitanceChoice,
) -> Result<(Vec<QuantizedMode>, CircuitCouplings)> {
    let modes = quantize(netlist, choice)?;
    let g = invert_capacitance(&build_capacitance_matrix(netlist)?)?;
    let mut kpo_nodes = Vec::new();
    let mut kpo_params = Vec::new();
    let mut coupler = None;
    for (b, m) in netlist.branches.iter().zip(&modes) {
        match (b.role, &b.terminals) {
            (Role::Kpo, Terminals::Node(a)) => {
                kpo_nodes.push(required(netlist, a)?);
                kpo_params.push(m.params);
            }
            (Role::Kpo, Terminals::Pair(..)) => {
                return Err(Error::Topology(format!(
                    "KPO branch {} must connect a node to ground",
                    describe(b)
                )))
            }
            (Role::Coupler, t) => {
                if coupler.is_some() {
                    return Err(Error::Topology("at most one coupler is supported".into()));
                }
                let nodes = match t {
                    Terminals::Node(a) => CouplerNodes::Node(required(netlist, a)?),
                    Terminals::Pair(a, c) => {
                        CouplerNodes::Pair(required(netlist, a)?, required(netlist, c)?)
                    }
                };
                coupler = Some((nodes, m.params));
            }
        }
    }
    let reduced = mode_reduce(&g, &kpo_nodes, coupler.map(|c| c.0))?;
    let spectrum = match coupler {
        Some((_, p)) => ModeSpectrum::with_coupler(kpo_params, p),
        None => ModeSpectrum::new(kpo_params),
    };
    let couplings = coupling_constants(&reduced, &spectrum)?;
    Ok((modes, couplings))
}
