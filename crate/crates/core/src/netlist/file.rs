//! TOML netlist files. Capacitances are in fF, inductances in pH, critical currents in nA,
//! target frequencies in GHz and flux in turns (φ_X/2π).
//!
//! ```toml
//! nodes = ["gnd", "q1"]
//! ground = "gnd"
//!
//! [[capacitors]]
//! a = "q1"
//! b = "gnd"
//! f_farads = 500
//!
//! [[branches]]
//! node = "q1"
//! l_henries = 100
//! target_ghz = 10
//! element = { kind = "junction" }
//! ```

use std::path::Path;

use serde::Deserialize;

use super::{Branch, BranchElement, Capacitor, CircuitNetlist, Role, Terminals};
use crate::elements::{JunctionElement, Snail};
use crate::error::{Error, Result};
use crate::units::{ghz, FEMTO, NANO, PICO};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetlist {
    nodes: Vec<String>,
    ground: String,
    #[serde(default)]
    capacitors: Vec<RawCapacitor>,
    #[serde(default)]
    branches: Vec<RawBranch>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCapacitor {
    a: String,
    b: String,
    /// fF
    #[serde(alias = "c_ff")]
    f_farads: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBranch {
    name: Option<String>,
    node: Option<String>,
    nodes: Option<[String; 2]>,
    element: RawElement,
    /// pH
    #[serde(default, alias = "l_ph")]
    l_henries: f64,
    target_ghz: Option<f64>,
    role: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawElement {
    Squid {
        l_jsq_ph: Option<f64>,
    },
    Junction {
        i0_na: Option<f64>,
    },
    Series {
        elements: Vec<RawElement>,
    },
    Snail {
        i0_na: f64,
        gamma: f64,
        n: u32,
        phi_x_turns: f64,
    },
}

impl RawElement {
    fn is_open(&self) -> bool {
        matches!(
            self,
            RawElement::Squid { l_jsq_ph: None } | RawElement::Junction { i0_na: None }
        )
    }

    fn fixed(&self) -> Result<JunctionElement> {
        match self {
            RawElement::Squid { l_jsq_ph: Some(l) } => Ok(JunctionElement::Squid { l_jsq: l * PICO }),
            RawElement::Junction { i0_na: Some(i) } => {
                Ok(JunctionElement::SingleJunction { i0: i * NANO })
            }
            RawElement::Series { elements } => Ok(JunctionElement::SeriesStack(
                elements.iter().map(RawElement::fixed).collect::<Result<_>>()?,
            )),
            RawElement::Snail {
                i0_na,
                gamma,
                n,
                phi_x_turns,
            } => Ok(JunctionElement::Snail(Snail {
                i0: i0_na * NANO,
                gamma: *gamma,
                n: *n,
                phi_x: 2.0 * std::f64::consts::PI * phi_x_turns,
            })),
            _ => Err(Error::InvalidParameter(
                "element value missing and no target_ghz given".into(),
            )),
        }
    }
}

fn branch_element(raw: &RawElement, target_ghz: Option<f64>) -> Result<BranchElement> {
    let Some(f) = target_ghz else {
        return Ok(BranchElement::Fixed(raw.fixed()?));
    };
    let target = ghz(f);
    match raw {
        RawElement::Squid { l_jsq_ph: None } => Ok(BranchElement::TunedSquid { series: None, target }),
        RawElement::Junction { i0_na: None } => Ok(BranchElement::TunedJunction { target }),
        RawElement::Series { elements } => {
            let open: Vec<usize> = (0..elements.len()).filter(|&i| elements[i].is_open()).collect();
            match open.as_slice() {
                [i] if matches!(elements[*i], RawElement::Squid { .. }) => {
                    let rest: Vec<JunctionElement> = elements
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| j != i)
                        .map(|(_, e)| e.fixed())
                        .collect::<Result<_>>()?;
                    let series = match rest.len() {
                        0 => None,
                        1 => rest.into_iter().next(),
                        _ => Some(JunctionElement::SeriesStack(rest)),
                    };
                    Ok(BranchElement::TunedSquid { series, target })
                }
                _ => Err(Error::InvalidParameter(
                    "a tuned series stack needs exactly one SQUID without l_jsq_ph".into(),
                )),
            }
        }
        _ => Err(Error::InvalidParameter(
            "target_ghz needs a squid or junction with its value left open".into(),
        )),
    }
}

fn convert(raw: RawNetlist) -> Result<CircuitNetlist> {
    let capacitors = raw
        .capacitors
        .into_iter()
        .map(|c| Capacitor {
            a: c.a,
            b: c.b,
            capacitance: c.f_farads * FEMTO,
        })
        .collect();
    let branches = raw
        .branches
        .into_iter()
        .map(|b| {
            let terminals = match (b.node, b.nodes) {
                (Some(n), None) => Terminals::Node(n),
                (None, Some([x, y])) => Terminals::Pair(x, y),
                _ => {
                    return Err(Error::Parse(
                        "each branch needs exactly one of `node` or `nodes`".into(),
                    ))
                }
            };
            let role = match b.role.as_deref() {
                Some("kpo") => Role::Kpo,
                Some("coupler") => Role::Coupler,
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "unknown branch role `{other}` (expected kpo or coupler)"
                    )))
                }
                None => match terminals {
                    Terminals::Node(_) => Role::Kpo,
                    Terminals::Pair(..) => Role::Coupler,
                },
            };
            if b.l_henries < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "negative linear inductance {} pH",
                    b.l_henries
                )));
            }
            Ok(Branch {
                name: b.name,
                terminals,
                element: branch_element(&b.element, b.target_ghz)?,
                l_geom: b.l_henries * PICO,
                role,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CircuitNetlist {
        nodes: raw.nodes,
        ground: raw.ground,
        capacitors,
        branches,
    })
}

pub fn parse_netlist(text: &str) -> Result<CircuitNetlist> {
    let raw: RawNetlist = toml::from_str(text).map_err(|e| Error::Parse(format!("netlist: {e}")))?;
    convert(raw)
}

pub fn read_netlist(path: &Path) -> Result<CircuitNetlist> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_netlist(&text)
}
