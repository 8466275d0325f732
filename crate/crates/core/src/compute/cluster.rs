use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::StateVector;
use crate::register::{pauli_x, pauli_z, PolarizationRegister};

pub const MAX_VERTICES: usize = 8;

/// Graph input: `{"vertices": n, "edges": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Path `0 - 1 - ... - (n-1)`.
    pub fn line(n: usize) -> Self {
        Self {
            vertices: n,
            edges: (1..n).map(|v| [v - 1, v]).collect(),
        }
    }

    /// Edge set with each pair ordered and duplicates removed.
    pub fn normalized_edges(&self) -> Result<BTreeSet<(usize, usize)>> {
        let mut out = BTreeSet::new();
        for &[a, b] in &self.edges {
            for v in [a, b] {
                if v >= self.vertices {
                    return Err(invalid("edges", format!("vertex {v} outside 0..{}", self.vertices)));
                }
            }
            if a == b {
                return Err(invalid("edges", format!("self-loop on vertex {a}")));
            }
            out.insert((a.min(b), a.max(b)));
        }
        Ok(out)
    }

    pub fn neighbours(&self, v: usize) -> Result<Vec<usize>> {
        Ok(self
            .normalized_edges()?
            .into_iter()
            .filter_map(|(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphState {
    pub graph: Graph,
    pub register: PolarizationRegister,
    pub state: StateVector,
}

/// Dense amplitudes of `prod CZ_e` applied to `first (x) |+>^(n-1)`.
pub(crate) fn graph_amplitudes(vertices: usize, edges: &BTreeSet<(usize, usize)>, first: [Complex64; 2]) -> Vec<Complex64> {
    let scale = FRAC_1_SQRT_2.powi(vertices as i32 - 1);
    (0..1usize << vertices)
        .map(|idx| {
            let bit = |q: usize| (idx >> (vertices - 1 - q)) & 1;
            let parity = edges.iter().filter(|&&(a, b)| bit(a) & bit(b) == 1).count();
            let sign = if parity % 2 == 1 { -1.0 } else { 1.0 };
            first[bit(0)] * (sign * scale)
        })
        .collect()
}

pub(crate) fn check_vertices(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("vertices", "graph needs at least one vertex"));
    }
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            vertices: n,
            max: MAX_VERTICES,
        });
    }
    Ok(())
}

/// Graph state with one polarization photon per vertex on modes
/// `(2v, 2v+1)`.
pub fn build_cluster(graph: &Graph) -> Result<GraphState> {
    check_vertices(graph.vertices)?;
    let edges = graph.normalized_edges()?;
    let plus = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let register = PolarizationRegister::contiguous(graph.vertices);
    let state = register.encode(&graph_amplitudes(graph.vertices, &edges, [plus, plus]))?;
    Ok(GraphState {
        graph: graph.clone(),
        register,
        state,
    })
}

impl GraphState {
    /// `<psi| X_v prod_{u in N(v)} Z_u |psi>`.
    pub fn stabilizer_expectation(&self, v: usize) -> Result<f64> {
        let mut s = pauli_x(&self.state, self.register.rail(v)?);
        for u in self.graph.neighbours(v)? {
            s = pauli_z(&s, self.register.rail(u)?);
        }
        Ok(self.state.inner_product(&s)?.re)
    }
}
