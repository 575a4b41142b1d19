//! Lumped-element circuit description, capacitance matrix assembly and inversion, and the
//! reduction of the inverse matrix to per-mode effective capacitances and coupling kernels.
//!
//! The capacitance matrix uses the Maxwell convention: the diagonal holds the total
//! capacitance attached to a node, off-diagonal entries are minus the direct capacitance.

mod file;
mod modes;

pub use file::{parse_netlist, read_netlist};
pub use modes::{
    circuit_couplings, coupling_constants, quantize, CapacitanceChoice, CircuitCouplings,
    QuantizedMode,
};

use std::collections::{HashMap, HashSet, VecDeque};

use nalgebra::{Cholesky, DMatrix};
use serde::{Deserialize, Serialize};

use crate::elements::{JunctionElement, Snail};
use crate::error::{Error, Result};

/// Q₊ is recorded as discarded when its capacitance is below this fraction of C̃_g.
pub const DISCARD_RATIO: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Capacitor {
    pub a: String,
    pub b: String,
    /// F
    pub capacitance: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terminals {
    /// Between a node and ground.
    Node(String),
    /// Between two non-ground nodes.
    Pair(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Kpo,
    Coupler,
}

/// Josephson content of a branch. The tuned variants solve for the junction inductance
/// that puts the mode at `target` (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BranchElement {
    Fixed(JunctionElement),
    /// SQUID with unknown L_Jsq, optionally in series with fixed elements.
    TunedSquid {
        series: Option<JunctionElement>,
        target: f64,
    },
    /// Single junction with unknown critical current.
    TunedJunction { target: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub name: Option<String>,
    pub terminals: Terminals,
    pub element: BranchElement,
    /// Linear series inductance, H.
    pub l_geom: f64,
    pub role: Role,
}

impl Branch {
    pub fn snail(&self) -> Option<&Snail> {
        match &self.element {
            BranchElement::Fixed(JunctionElement::Snail(s)) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitNetlist {
    pub nodes: Vec<String>,
    pub ground: String,
    pub capacitors: Vec<Capacitor>,
    pub branches: Vec<Branch>,
}

impl CircuitNetlist {
    /// Non-ground node names in matrix order.
    pub fn active_nodes(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .map(String::as_str)
            .filter(|n| *n != self.ground)
            .collect()
    }

    fn index_map(&self) -> Result<HashMap<&str, usize>> {
        let mut seen = HashSet::new();
        for n in &self.nodes {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateNode(n.clone()));
            }
        }
        Ok(self
            .active_nodes()
            .into_iter()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect())
    }

    /// Matrix index of `node`, or `None` for ground.
    pub fn node_index(&self, node: &str) -> Result<Option<usize>> {
        if node == self.ground {
            return Ok(None);
        }
        self.index_map()?
            .get(node)
            .copied()
            .map(Some)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitanceMatrix {
    pub nodes: Vec<String>,
    /// F
    pub matrix: DMatrix<f64>,
}

impl CapacitanceMatrix {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    /// Direct capacitance from node `i` to ground (the row sum).
    pub fn to_ground(&self, i: usize) -> f64 {
        self.matrix.row(i).sum()
    }

    /// Direct capacitance between nodes `i` and `j`.
    pub fn between(&self, i: usize, j: usize) -> f64 {
        -self.matrix[(i, j)]
    }

    /// Non-ground neighbours of node `i`.
    fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&j| j != i && self.matrix[(i, j)] != 0.0)
            .collect()
    }

    /// First node (in matrix order) without a capacitive path to ground.
    fn floating_node(&self) -> Option<usize> {
        let scale = self.matrix.diagonal().amax();
        let mut reached = vec![false; self.dim()];
        let mut queue: VecDeque<usize> = (0..self.dim())
            .filter(|&i| self.to_ground(i) > 1e-12 * scale)
            .collect();
        for &i in &queue {
            reached[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            for j in self.neighbours(i) {
                if !reached[j] {
                    reached[j] = true;
                    queue.push_back(j);
                }
            }
        }
        reached.iter().position(|r| !r)
    }
}

/// The seven independent inverse-matrix elements of the symmetric four-KPO unit circuit
/// (KPOs 1, 2 on coupler node 5, KPOs 3, 4 on coupler node 6).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitCircuitElements {
    pub g11: f64,
    pub g12: f64,
    pub g13: f64,
    pub g15: f64,
    pub g16: f64,
    pub g55: f64,
    pub g56: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseCapacitance {
    pub nodes: Vec<String>,
    /// G = C⁻¹, 1/F.
    pub matrix: DMatrix<f64>,
    /// The matrix that was inverted.
    pub capacitance: CapacitanceMatrix,
}

impl InverseCapacitance {
    /// Largest relative deviation of G·C from the identity.
    pub fn identity_defect(&self) -> f64 {
        let n = self.nodes.len();
        let prod = &self.matrix * &self.capacitance.matrix;
        (prod - DMatrix::<f64>::identity(n, n)).amax()
    }

    /// Populated when the matrix has the symmetry of the six-node unit circuit in
    /// its node order.
    pub fn unit_elements(&self) -> Option<UnitCircuitElements> {
        if self.nodes.len() != 6 {
            return None;
        }
        let g = |i: usize, j: usize| self.matrix[(i - 1, j - 1)];
        let scale = self.matrix.amax();
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-9 * scale;
        let groups: [&[(usize, usize)]; 7] = [
            &[(1, 1), (2, 2), (3, 3), (4, 4)],
            &[(1, 2), (3, 4)],
            &[(1, 3), (1, 4), (2, 3), (2, 4)],
            &[(1, 5), (2, 5), (3, 6), (4, 6)],
            &[(1, 6), (2, 6), (3, 5), (4, 5)],
            &[(5, 5), (6, 6)],
            &[(5, 6)],
        ];
        for group in groups {
            let (i0, j0) = group[0];
            if !group.iter().all(|&(i, j)| same(g(i, j), g(i0, j0))) {
                return None;
            }
        }
        // Distinguishes the coupler pair from an arbitrary symmetric six-node network.
        if !(g(1, 5) > g(1, 6)) {
            return None;
        }
        Some(UnitCircuitElements {
            g11: g(1, 1),
            g12: g(1, 2),
            g13: g(1, 3),
            g15: g(1, 5),
            g16: g(1, 6),
            g55: g(5, 5),
            g56: g(5, 6),
        })
    }
}

pub fn build_capacitance_matrix(netlist: &CircuitNetlist) -> Result<CapacitanceMatrix> {
    let index = netlist.index_map()?;
    if !netlist.nodes.contains(&netlist.ground) {
        return Err(Error::UnknownNode(netlist.ground.clone()));
    }
    let nodes: Vec<String> = netlist.active_nodes().into_iter().map(String::from).collect();
    if nodes.is_empty() {
        return Err(Error::Topology("netlist has no non-ground nodes".into()));
    }
    let n = nodes.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    let lookup = |name: &str| -> Result<Option<usize>> {
        if name == netlist.ground {
            Ok(None)
        } else {
            index
                .get(name)
                .copied()
                .map(Some)
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        }
    };
    for cap in &netlist.capacitors {
        if !(cap.capacitance > 0.0) {
            return Err(Error::NonPositiveCapacitance {
                a: cap.a.clone(),
                b: cap.b.clone(),
                value: cap.capacitance,
            });
        }
        match (lookup(&cap.a)?, lookup(&cap.b)?) {
            (Some(i), Some(j)) if i == j => {
                return Err(Error::Topology(format!(
                    "capacitor connects node `{}` to itself",
                    cap.a
                )))
            }
            (Some(i), Some(j)) => {
                m[(i, i)] += cap.capacitance;
                m[(j, j)] += cap.capacitance;
                m[(i, j)] -= cap.capacitance;
                m[(j, i)] -= cap.capacitance;
            }
            (Some(i), None) | (None, Some(i)) => m[(i, i)] += cap.capacitance,
            (None, None) => {
                return Err(Error::Topology("capacitor from ground to ground".into()));
            }
        }
    }
    Ok(CapacitanceMatrix { nodes, matrix: m })
}

pub fn invert_capacitance(c: &CapacitanceMatrix) -> Result<InverseCapacitance> {
    if let Some(i) = c.floating_node() {
        return Err(Error::FloatingNode(c.nodes[i].clone()));
    }
    let chol = Cholesky::new(c.matrix.clone()).ok_or(Error::NotPositiveDefinite)?;
    let mut g = chol.inverse();
    // Symmetrize away rounding so downstream couplings are exactly symmetric.
    let gt = g.transpose();
    g = (&g + gt) * 0.5;
    Ok(InverseCapacitance {
        nodes: c.nodes.clone(),
        matrix: g,
        capacitance: c.clone(),
    })
}

/// How the coupler mode sits in the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CouplerNodes {
    /// Coupler between one node and ground.
    Node(usize),
    /// Floating coupler between two nodes; its mode is the charge difference Q₋.
    Pair(usize, usize),
}

impl CouplerNodes {
    /// Mode vector over the node charges.
    fn vector(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        match *self {
            CouplerNodes::Node(a) => v[a] = 1.0,
            CouplerNodes::Pair(a, b) => {
                v[a] = 1.0;
                v[b] = -1.0;
            }
        }
        v
    }
}

/// Recognized layouts for which closed-form approximations exist.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Topology {
    /// Every KPO couples through C_c,j to one end of a floating two-node coupler with C_g
    /// across it.
    UnitCircuit {
        c_q: Vec<f64>,
        c_c: Vec<f64>,
        c_g: f64,
    },
    /// Every KPO couples through C_c,j to one shared node without an inductive branch.
    Island {
        c_q: Vec<f64>,
        c_c: Vec<f64>,
        /// Total capacitance of the island node.
        c_island: f64,
    },
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscardedMode {
    /// C₊ = 1/(G_aa + G_ab) for the sum charge of the coupler pair, F.
    pub capacitance: f64,
    /// Set when C₊ < 0.1·C̃_g, i.e. the mode lies far above the coupler.
    pub high_frequency: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedModes {
    pub kpo_nodes: Vec<usize>,
    pub coupler: Option<CouplerNodes>,
    /// C̃_q,j = 1/G_jj, F.
    pub c_kpo: Vec<f64>,
    /// C̃_g, F. For a pair coupler this is C₋/2.
    pub c_coupler: Option<f64>,
    /// Inverse-matrix elements among the KPO nodes, 1/F.
    pub g_kpo: Vec<Vec<f64>>,
    /// KPO-coupler kernel per KPO: G₋ = (G_ja − G_jb)/√2 for a pair, G_ja for a node.
    pub g_minus: Vec<f64>,
    pub discarded: Option<DiscardedMode>,
    pub topology: Topology,
}

impl ReducedModes {
    pub fn n_kpo(&self) -> usize {
        self.kpo_nodes.len()
    }
}

fn quad(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0.0 {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            s += ui * g[(i, j)] * vj;
        }
    }
    s
}

fn detect_topology(c: &CapacitanceMatrix, kpo: &[usize], coupler: Option<CouplerNodes>) -> Topology {
    let only_neighbour = |j: usize| -> Option<usize> {
        match c.neighbours(j).as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    };
    let links: Option<Vec<usize>> = kpo.iter().map(|&j| only_neighbour(j)).collect();
    let Some(links) = links else {
        return Topology::General;
    };
    let c_c: Vec<f64> = kpo.iter().zip(&links).map(|(&j, &x)| c.between(j, x)).collect();
    let c_q: Vec<f64> = kpo.iter().map(|&j| c.to_ground(j)).collect();
    if c_q.iter().any(|&x| !(x > 0.0)) {
        return Topology::General;
    }
    match coupler {
        Some(CouplerNodes::Pair(a, b)) => {
            let on_coupler = links.iter().all(|&x| x == a || x == b);
            let closed = [a, b].iter().all(|&x| {
                c.neighbours(x)
                    .iter()
                    .all(|y| *y == a || *y == b || kpo.contains(y))
            });
            if on_coupler && closed && c.between(a, b) > 0.0 {
                Topology::UnitCircuit {
                    c_q,
                    c_c,
                    c_g: c.between(a, b),
                }
            } else {
                Topology::General
            }
        }
        Some(CouplerNodes::Node(_)) => Topology::General,
        None => {
            let island = links[0];
            let closed = c.neighbours(island).iter().all(|y| kpo.contains(y));
            if links.iter().all(|&x| x == island) && !kpo.contains(&island) && closed {
                Topology::Island {
                    c_q,
                    c_c,
                    c_island: c.matrix[(island, island)],
                }
            } else {
                Topology::General
            }
        }
    }
}

/// Effective capacitances and coupling kernels for the KPO modes at `kpo_nodes` and an
/// optional coupler. Nodes that are neither have no inductive branch and carry no mode.
pub fn mode_reduce(
    g: &InverseCapacitance,
    kpo_nodes: &[usize],
    coupler: Option<CouplerNodes>,
) -> Result<ReducedModes> {
    let n = g.nodes.len();
    let mut used = HashSet::new();
    let coupler_indices: Vec<usize> = match coupler {
        Some(CouplerNodes::Node(a)) => vec![a],
        Some(CouplerNodes::Pair(a, b)) => vec![a, b],
        None => vec![],
    };
    for &i in kpo_nodes.iter().chain(&coupler_indices) {
        if i >= n {
            return Err(Error::Topology(format!("node index {i} out of range")));
        }
        if !used.insert(i) {
            return Err(Error::Topology(format!(
                "node `{}` is assigned to more than one mode",
                g.nodes[i]
            )));
        }
    }
    if kpo_nodes.is_empty() {
        return Err(Error::Topology("no KPO modes".into()));
    }
    let gm = &g.matrix;
    let c_kpo: Vec<f64> = kpo_nodes.iter().map(|&j| 1.0 / gm[(j, j)]).collect();
    let g_kpo: Vec<Vec<f64>> = kpo_nodes
        .iter()
        .map(|&j| kpo_nodes.iter().map(|&k| gm[(j, k)]).collect())
        .collect();
    let (c_coupler, g_minus, discarded) = match coupler {
        None => (None, Vec::new(), None),
        Some(cn) => {
            let v = cn.vector(n);
            let c_g = 1.0 / quad(gm, &v, &v);
            let g_minus: Vec<f64> = kpo_nodes
                .iter()
                .map(|&j| {
                    let mut e = vec![0.0; n];
                    e[j] = 1.0;
                    let raw = quad(gm, &e, &v);
                    match cn {
                        CouplerNodes::Pair(..) => raw / std::f64::consts::SQRT_2,
                        CouplerNodes::Node(_) => raw,
                    }
                })
                .collect();
            let discarded = match cn {
                CouplerNodes::Pair(a, b) => {
                    let mut s = vec![0.0; n];
                    s[a] = 1.0;
                    s[b] = 1.0;
                    // (1,1)ᵀG(1,1) = 2(G_aa + G_ab) for a symmetric coupler.
                    let c_plus = 2.0 / quad(gm, &s, &s);
                    Some(DiscardedMode {
                        capacitance: c_plus,
                        high_frequency: c_plus < DISCARD_RATIO * c_g,
                    })
                }
                CouplerNodes::Node(_) => None,
            };
            (Some(c_g), g_minus, discarded)
        }
    };
    Ok(ReducedModes {
        kpo_nodes: kpo_nodes.to_vec(),
        coupler,
        c_kpo,
        c_coupler,
        g_kpo,
        g_minus,
        discarded,
        topology: detect_topology(&g.capacitance, kpo_nodes, coupler),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::FEMTO;

    fn cap(a: &str, b: &str, ff: f64) -> Capacitor {
        Capacitor {
            a: a.into(),
            b: b.into(),
            capacitance: ff * FEMTO,
        }
    }

    fn netlist(nodes: &[&str], caps: Vec<Capacitor>) -> CircuitNetlist {
        CircuitNetlist {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            ground: "gnd".into(),
            capacitors: caps,
            branches: Vec::new(),
        }
    }

    #[test]
    fn single_node() {
        let c = build_capacitance_matrix(&netlist(&["gnd", "a"], vec![cap("a", "gnd", 100.0)])).unwrap();
        assert_eq!(c.matrix[(0, 0)], 100.0 * FEMTO);
    }

    #[test]
    fn chain_assembly() {
        let nl = netlist(
            &["gnd", "a", "b", "c"],
            vec![
                cap("a", "gnd", 100.0),
                cap("b", "gnd", 100.0),
                cap("c", "gnd", 100.0),
                cap("a", "b", 1.0),
                cap("b", "c", 1.0),
            ],
        );
        let c = build_capacitance_matrix(&nl).unwrap();
        let diag: Vec<f64> = c.matrix.diagonal().iter().map(|x| x / FEMTO).collect();
        for (got, want) in diag.iter().zip([101.0, 102.0, 101.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((c.matrix[(0, 1)] / FEMTO + 1.0).abs() < 1e-12);
        assert_eq!(c.matrix[(0, 2)], 0.0);
    }

    #[test]
    fn duplicate_and_negative_rejected() {
        let dup = netlist(&["gnd", "a", "a"], vec![cap("a", "gnd", 1.0)]);
        assert_eq!(build_capacitance_matrix(&dup), Err(Error::DuplicateNode("a".into())));
        let neg = netlist(&["gnd", "a"], vec![cap("a", "gnd", -1.0)]);
        assert!(matches!(
            build_capacitance_matrix(&neg),
            Err(Error::NonPositiveCapacitance { .. })
        ));
    }

    #[test]
    fn floating_node_is_named() {
        let nl = netlist(
            &["gnd", "a", "b", "c"],
            vec![cap("a", "gnd", 10.0), cap("b", "c", 1.0)],
        );
        let c = build_capacitance_matrix(&nl).unwrap();
        assert_eq!(invert_capacitance(&c), Err(Error::FloatingNode("b".into())));
    }

    #[test]
    fn diagonal_inverse() {
        let nl = netlist(&["gnd", "a", "b"], vec![cap("a", "gnd", 2.0), cap("b", "gnd", 4.0)]);
        let g = invert_capacitance(&build_capacitance_matrix(&nl).unwrap()).unwrap();
        assert!((g.matrix[(0, 0)] * 2.0 * FEMTO - 1.0).abs() < 1e-14);
        assert!((g.matrix[(1, 1)] * 4.0 * FEMTO - 1.0).abs() < 1e-14);
        assert!(g.unit_elements().is_none());
    }
}
