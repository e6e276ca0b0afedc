//! Graph-state extraction from a tableau, and the local-Clifford
//! equivalence decision for graph states.
//!
//! The decision poses the per-vertex symplectic blocks as F₂ unknowns
//! (a_v, b_v, c_v, d_v), imposes Γ₂(A + BΓ₁) = C + DΓ₁ so that image
//! generators land in the target row space, and searches the solution space
//! for a point with every block invertible. A hit is lifted to a concrete
//! layer, sign-corrected with a Pauli layer, and re-verified by application.

use crate::f2::{solve_f2, BitMatrix, BitVec};
use crate::stab::clifford::{LocalCliffordLayer, SingleClifford};
use crate::stab::graph::Graph;
use crate::stab::tableau::{symplectic_row, PauliGen, StabError, StabilizerTableau};

/// Full Jordan reduction of the X-block by generator products; generators
/// are reordered so pivot rows come first, in pivot-column order. Returns
/// the pivot columns.
fn jordan_reduce_x(gens: &mut Vec<PauliGen>) -> Vec<usize> {
    let n = gens.first().map_or(0, PauliGen::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..gens.len()).find(|&r| gens[r].x.get(col)) else {
            continue;
        };
        gens.swap(row, r);
        let pivot = gens[row].clone();
        for (i, g) in gens.iter_mut().enumerate() {
            if i != row && g.x.get(col) {
                *g = g.mul(&pivot);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Bring a tableau to graph-state form: Hadamards on a greedily chosen
/// column set make the X-block invertible, row products make it the
/// identity, phase gates clear the adjacency diagonal and Z gates the
/// signs. Returns the graph plus the layer L with
/// L(graph tableau) = input group.
pub fn to_graph_state(t: &StabilizerTableau) -> Result<(Graph, LocalCliffordLayer), StabError> {
    let n = t.n();
    let mut gens = t.gens().to_vec();
    let mut applied = LocalCliffordLayer::identity(n);

    loop {
        let pivots = jordan_reduce_x(&mut gens);
        if pivots.len() == n {
            break;
        }
        // first row without an X pivot is a pure-Z generator; commutation
        // with the pivot rows forces a Z bit outside the pivot columns
        let pure_z = &gens[pivots.len()];
        debug_assert!(pure_z.x.is_zero());
        let j = (0..n)
            .find(|&c| pure_z.z.get(c) && !pivots.contains(&c))
            .expect("valid tableau: pure-Z rows have support off the X pivots");
        for g in &mut gens {
            let (xb, zb) = (g.x.get(j), g.z.get(j));
            g.x.set(j, zb);
            g.z.set(j, xb);
            if xb && zb {
                g.phase = (g.phase + 2) % 4;
            }
        }
        applied.post_compose_site(j, SingleClifford::hadamard());
    }

    // X-block is the identity; commutation makes the Z-block symmetric
    for (i, g) in gens.iter().enumerate() {
        debug_assert_eq!(g.x, BitVec::unit(n, i));
    }
    for j in 0..n {
        if gens[j].z.get(j) {
            // S at j: only generator j carries X there
            gens[j].phase = (gens[j].phase + 1) % 4;
            gens[j].z.set(j, false);
            applied.post_compose_site(j, SingleClifford::phase_gate());
        }
    }
    for j in 0..n {
        debug_assert!(gens[j].phase % 2 == 0);
        if gens[j].phase % 4 == 2 {
            gens[j].phase = 0;
            applied.post_compose_site(j, SingleClifford::pauli(true, false));
        }
    }

    let adj: Vec<BitVec> = gens.iter().map(|g| g.z.clone()).collect();
    for (i, row) in adj.iter().enumerate() {
        for j in row.ones() {
            debug_assert!(adj[j].get(i), "commutation forces a symmetric Z-block");
        }
    }
    let graph = Graph::from_adjacency(adj);
    Ok((graph, applied.inverse()))
}

/// Search limits for [`lc_decide`].
#[derive(Copy, Clone, Debug)]
pub struct LcOptions {
    /// Cap on depth-first nodes before giving up with
    /// [`StabError::SearchOverflow`].
    pub max_nodes: u64,
}

impl Default for LcOptions {
    fn default() -> Self {
        Self { max_nodes: 1 << 20 }
    }
}

/// Incremental affine constraint store over F₂: rows are [coeffs | rhs]
/// kept in reduced echelon form.
#[derive(Clone)]
struct AffineSystem {
    width: usize, // number of variables; row length is width + 1
    rows: Vec<BitVec>,
    pivot_col: Vec<usize>, // pivot column of rows[i]
}

impl AffineSystem {
    fn new(width: usize) -> Self {
        Self { width, rows: Vec::new(), pivot_col: Vec::new() }
    }

    /// Insert one equation; Err(()) when it contradicts the store.
    fn insert(&mut self, mut row: BitVec) -> Result<(), ()> {
        debug_assert_eq!(row.len(), self.width + 1);
        loop {
            let Some(first) = row.first_one() else {
                return Ok(()); // 0 = 0, redundant
            };
            if first == self.width {
                return Err(()); // 0 = 1
            }
            match self.pivot_col.iter().position(|&c| c == first) {
                Some(i) => row.xor_assign(&self.rows[i]),
                None => {
                    for (existing, _) in self.rows.iter_mut().zip(&self.pivot_col) {
                        if existing.get(first) {
                            existing.xor_assign(&row);
                        }
                    }
                    self.rows.push(row);
                    self.pivot_col.push(first);
                    return Ok(());
                }
            }
        }
    }

    fn assign(&mut self, var: usize, value: bool) -> Result<(), ()> {
        let mut row = BitVec::zeros(self.width + 1);
        row.set(var, true);
        row.set(self.width, value);
        self.insert(row)
    }
}

const GL2_OPTIONS: [(bool, bool, bool, bool); 6] = [
    (false, true, true, false),
    (false, true, true, true),
    (true, false, false, true),
    (true, false, true, true),
    (true, true, false, true),
    (true, true, true, false),
];

fn dfs_assign(
    sys: &AffineSystem,
    vertex: usize,
    n: usize,
    budget: &mut u64,
    out: &mut Vec<(bool, bool, bool, bool)>,
) -> Result<bool, StabError> {
    if vertex == n {
        return Ok(true);
    }
    if *budget == 0 {
        return Err(StabError::SearchOverflow { explored: 0 });
    }
    *budget -= 1;
    for &(a, b, c, d) in &GL2_OPTIONS {
        let mut next = sys.clone();
        let base = 4 * vertex;
        if next.assign(base, a).is_err()
            || next.assign(base + 1, b).is_err()
            || next.assign(base + 2, c).is_err()
            || next.assign(base + 3, d).is_err()
        {
            continue;
        }
        out.push((a, b, c, d));
        if dfs_assign(&next, vertex + 1, n, budget, out)? {
            return Ok(true);
        }
        out.pop();
    }
    Ok(false)
}

/// Decide local-Clifford equivalence of two graph states. Returns a
/// certifying layer mapping the first graph's stabilizer group onto the
/// second's (phases included), or `None` when no such layer exists.
pub fn lc_decide(
    g1: &Graph,
    g2: &Graph,
    opts: LcOptions,
) -> Result<Option<LocalCliffordLayer>, StabError> {
    if g1.n() != g2.n() {
        return Err(StabError::SizeMismatch(g1.n(), g2.n()));
    }
    let n = g1.n();
    if n == 0 {
        return Ok(Some(LocalCliffordLayer::identity(0)));
    }

    // variables: (a_v, b_v, c_v, d_v) at 4v..4v+4
    // equation (i,u): Γ₂[i,u] a_u + Σ_j Γ₂[i,j]Γ₁[j,u] b_j + δ_iu c_i + Γ₁[i,u] d_i = 0
    let width = 4 * n;
    let mut sys = AffineSystem::new(width);
    for i in 0..n {
        for u in 0..n {
            let mut row = BitVec::zeros(width + 1);
            if g2.has_edge(i, u) {
                row.flip(4 * u);
            }
            for j in g2.neighbors(i).ones() {
                if g1.has_edge(j, u) {
                    row.flip(4 * j + 1);
                }
            }
            if i == u {
                row.flip(4 * i + 2);
            }
            if g1.has_edge(i, u) {
                row.flip(4 * i + 3);
            }
            sys.insert(row).expect("homogeneous rows cannot contradict");
        }
    }

    let mut budget = opts.max_nodes;
    let mut picks = Vec::with_capacity(n);
    let found = dfs_assign(&sys, 0, n, &mut budget, &mut picks)
        .map_err(|_| StabError::SearchOverflow { explored: opts.max_nodes })?;
    if !found {
        return Ok(None);
    }

    let mut layer = LocalCliffordLayer::identity(n);
    for (v, &(a, b, c, d)) in picks.iter().enumerate() {
        layer.set_site(
            v,
            SingleClifford::from_symplectic(a, b, c, d).expect("search only emits det-1 blocks"),
        );
    }

    // fix generator signs with a Pauli layer
    let t1 = g1.tableau();
    let t2 = g2.tableau();
    let image = layer.apply(&t1)?;
    let m2 = BitMatrix::from_rows(t2.gens().iter().map(symplectic_row).collect()).transpose();
    let mut sign = BitVec::zeros(n);
    for (i, g) in image.gens().iter().enumerate() {
        let (combo, _) = solve_f2(&m2, &symplectic_row(g))
            .expect("image rows lie in the target row space by construction");
        let mut prod = PauliGen::identity(n);
        for k in combo.ones() {
            prod = prod.mul(&t2.gens()[k]);
        }
        let diff = (g.phase + 4 - prod.phase) % 4;
        debug_assert!(diff % 2 == 0, "same symplectic row forces an even phase gap");
        sign.set(i, diff == 2);
    }
    let rows = BitMatrix::from_rows(image.gens().iter().map(symplectic_row).collect());
    let (correction, _) =
        solve_f2(&rows, &sign).expect("independent generator rows span all sign patterns");
    for j in 0..n {
        let z_corr = correction.get(j);
        let x_corr = correction.get(n + j);
        if z_corr || x_corr {
            layer.post_compose_site(j, SingleClifford::pauli(z_corr, x_corr));
        }
    }

    let verified = layer.apply(&t1)?;
    assert!(
        verified.same_group(&t2),
        "certified layer failed independent re-verification"
    );
    Ok(Some(layer))
}
