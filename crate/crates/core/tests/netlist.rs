use std::path::PathBuf;

use approx::assert_relative_eq;
use kpo4_core::netlist::{
    build_capacitance_matrix, circuit_couplings, invert_capacitance, quantize, read_netlist,
    CapacitanceChoice, Capacitor, CircuitNetlist, Role, Topology,
};
use kpo4_core::presets::{self, KPO_LIKE_COUPLER, SQUID_PLAQUETTE};
use kpo4_core::units::{to_ghz, to_mhz, FEMTO};
use kpo4_core::Error;
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/netlists").join(name)
}

fn cap(a: &str, b: &str, c_ff: f64) -> Capacitor {
    Capacitor { a: a.into(), b: b.into(), capacitance: c_ff * FEMTO }
}

// Reference values below come from an independent inversion of the full node
// capacitance matrix with the charge-coordinate quantization written out by hand.

#[test]
fn unit_circuit_exact_couplings() {
    let (_, cc) = circuit_couplings(
        &presets::unit_circuit_netlist(&KPO_LIKE_COUPLER, 10.0),
        CapacitanceChoice::Bare,
    )
    .unwrap();
    for j in 0..4 {
        assert_relative_eq!(to_mhz(cc.exact.g[j]), 4.988_780_377_284_066, max_relative = 1e-9);
    }
    assert_eq!(cc.exact.s, vec![1, 1, -1, -1]);
    assert_relative_eq!(to_mhz(cc.exact.h[0][1]), 2.503_725_723_069_07, max_relative = 1e-9);
    assert_relative_eq!(to_mhz(cc.exact.h[0][2]), 2.493_770_551_207_96, max_relative = 1e-9);
    let discarded = cc.reduced.discarded.expect("pair coupler");
    // The sum charge only sees the small coupling capacitors.
    assert!(discarded.high_frequency);
    assert!(matches!(cc.reduced.topology, Topology::UnitCircuit { .. }));
}

#[test]
fn island_exact_coupling() {
    let (_, cc) = circuit_couplings(
        &presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0),
        CapacitanceChoice::Bare,
    )
    .unwrap();
    for j in 0..4 {
        for k in (j + 1)..4 {
            assert_relative_eq!(to_mhz(cc.exact.h[j][k]), 4.995_004_995_004_996, max_relative = 1e-9);
        }
    }
    let approx = cc.approx.unwrap();
    assert_relative_eq!(to_mhz(approx.h[1][2]), 5.0, max_relative = 1e-12);
}

#[test]
fn quantized_table() {
    let modes = quantize(&read_netlist(&data("unit_kpo_like.toml")).unwrap(), CapacitanceChoice::Bare)
        .unwrap();
    let coupler = modes.iter().find(|m| m.role == Role::Coupler).unwrap();
    assert_eq!(coupler.name, "coupler");
    assert_relative_eq!(to_ghz(coupler.params.omega), 10.0, max_relative = 1e-12);
    assert_eq!(format!("{:.1}", to_mhz(coupler.params.kerr)), "20.0");

    let modes = quantize(&read_netlist(&data("squid_plaquette.toml")).unwrap(), CapacitanceChoice::Bare)
        .unwrap();
    let k: Vec<String> = modes.iter().map(|m| format!("{:.1}", to_mhz(m.params.kerr))).collect();
    assert_eq!(k, ["5.1", "20.0", "20.0", "5.1"]);
}

#[test]
fn sample_files_match_presets() {
    let file = read_netlist(&data("squid_plaquette.toml")).unwrap();
    let preset = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
    let a = circuit_couplings(&file, CapacitanceChoice::Bare).unwrap().1;
    let b = circuit_couplings(&preset, CapacitanceChoice::Bare).unwrap().1;
    assert_eq!(a.exact, b.exact);
    for name in ["unit_transmon_like.toml", "snail_plaquette.toml"] {
        let nl = read_netlist(&data(name)).unwrap();
        assert!(circuit_couplings(&nl, CapacitanceChoice::Bare).unwrap().1.approx.is_some());
    }
}

#[test]
fn effective_capacitance_includes_coupling_path() {
    let nl = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
    let bare = quantize(&nl, CapacitanceChoice::Bare).unwrap();
    let eff = quantize(&nl, CapacitanceChoice::Effective).unwrap();
    for (b, e) in bare.iter().zip(&eff) {
        // C̃ exceeds the bare shunt by roughly the series coupling capacitance.
        assert!(e.capacitance > b.capacitance);
        assert!(e.capacitance < b.capacitance + 2.0 * FEMTO);
    }
}

#[test]
fn grounding_the_island_suppresses_coupling() {
    let mut nl = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
    let base = circuit_couplings(&nl, CapacitanceChoice::Bare).unwrap().1.exact.h[0][1];
    nl.capacitors.push(cap("island", "gnd", 1e4));
    let (_, cc) = circuit_couplings(&nl, CapacitanceChoice::Bare).unwrap();
    assert!(cc.exact.h[0][1].abs() < 1e-2 * base.abs());
}

#[test]
fn error_paths() {
    let mut nl = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
    nl.nodes.extend(["x".into(), "y".into()]);
    nl.capacitors.push(cap("x", "y", 1.0));
    let err = invert_capacitance(&build_capacitance_matrix(&nl).unwrap()).unwrap_err();
    assert!(matches!(err, Error::FloatingNode(_)), "{err:?}");

    let mut nl = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
    nl.capacitors.push(cap("q9", "gnd", 1.0));
    assert_eq!(build_capacitance_matrix(&nl).unwrap_err(), Error::UnknownNode("q9".into()));

    let mut nl = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
    nl.capacitors[0].capacitance = 0.0;
    assert_eq!(build_capacitance_matrix(&nl).unwrap_err().code(), "E_NETLIST");

    let empty = CircuitNetlist {
        nodes: vec!["gnd".into(), "q1".into()],
        ground: "gnd".into(),
        capacitors: vec![cap("q1", "gnd", 500.0)],
        branches: vec![],
    };
    assert!(quantize(&empty, CapacitanceChoice::Bare).is_err());
}

fn chain(caps: &[f64]) -> CircuitNetlist {
    let n = caps.len() / 2;
    let mut nodes = vec!["gnd".to_string()];
    nodes.extend((0..n).map(|i| format!("n{i}")));
    let mut capacitors = Vec::new();
    for i in 0..n {
        capacitors.push(cap(&format!("n{i}"), "gnd", caps[2 * i]));
        if i + 1 < n {
            capacitors.push(cap(&format!("n{i}"), &format!("n{}", i + 1), caps[2 * i + 1]));
        }
    }
    CircuitNetlist { nodes, ground: "gnd".into(), capacitors, branches: vec![] }
}

proptest! {
    #[test]
    fn inverse_is_symmetric_and_exact(caps in prop::collection::vec(0.5f64..800.0, 2..16)) {
        let c = build_capacitance_matrix(&chain(&caps)).unwrap();
        let g = invert_capacitance(&c).unwrap();
        prop_assert!(g.identity_defect() < 1e-10);
        for i in 0..c.dim() {
            for j in 0..c.dim() {
                prop_assert_eq!(g.matrix[(i, j)], g.matrix[(j, i)]);
            }
            prop_assert!(g.matrix[(i, i)] > 0.0);
        }
    }

    #[test]
    fn node_order_does_not_change_couplings(rot in 0usize..5) {
        let mut nl = presets::squid_plaquette_netlist(&SQUID_PLAQUETTE, 10.0);
        let base = circuit_couplings(&nl, CapacitanceChoice::Bare).unwrap().1.exact;
        let tail: Vec<String> = nl.nodes.drain(1..).collect();
        let len = tail.len();
        nl.nodes.extend(tail.into_iter().cycle().skip(rot).take(len));
        nl.capacitors.reverse();
        let permuted = circuit_couplings(&nl, CapacitanceChoice::Bare).unwrap().1.exact;
        for j in 0..4 {
            for k in 0..4 {
                prop_assert!((base.h[j][k] - permuted.h[j][k]).abs() <= 1e-9 * base.h[0][1].abs());
            }
        }
    }

    #[test]
    fn stronger_coupling_capacitor_couples_more(c_c in 0.5f64..5.0) {
        let mut p = SQUID_PLAQUETTE;
        p.c_c = c_c * FEMTO;
        let weak = circuit_couplings(&presets::squid_plaquette_netlist(&p, 10.0), CapacitanceChoice::Bare)
            .unwrap().1.exact.h[0][1];
        p.c_c = 1.1 * c_c * FEMTO;
        let strong = circuit_couplings(&presets::squid_plaquette_netlist(&p, 10.0), CapacitanceChoice::Bare)
            .unwrap().1.exact.h[0][1];
        prop_assert!(strong > weak);
    }
}
