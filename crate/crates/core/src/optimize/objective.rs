use crate::measures::{value_and_gradient_unchecked, MeasureKind};
use crate::qcore::matrix::{ComplexMatrix, C64, ZERO};
use crate::qcore::state::{apply_pair_raw, Party};

use super::ascent::Objective;
use super::layout_partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StartKind {
    Unrestricted,
    /// Iterate is `(ψ_A, ψ_B)`, the state is `ψ_A ⊗ ψ_B`.
    Product,
}

/// `ΔE(ψ) = E(Uψ) - E(ψ)` on the ancilla layout.
pub(crate) struct CapacityObjective {
    gate: [C64; 16],
    gate_adj: [C64; 16],
    measure: MeasureKind,
    partition: Vec<Party>,
    anc_a: usize,
    start: StartKind,
    blocks: Vec<usize>,
}

fn flatten(m: &ComplexMatrix) -> [C64; 16] {
    let mut g = [ZERO; 16];
    g.copy_from_slice(m.data());
    g
}

impl CapacityObjective {
    pub fn new(u: &ComplexMatrix, measure: MeasureKind, anc_a: usize, anc_b: usize, start: StartKind) -> Self {
        let partition = layout_partition(anc_a, anc_b);
        let da = 1usize << (anc_a + 1);
        let db = 1usize << (anc_b + 1);
        let blocks = match start {
            StartKind::Unrestricted => vec![da * db],
            StartKind::Product => vec![da, db],
        };
        Self {
            gate: flatten(u),
            gate_adj: flatten(&u.adjoint()),
            measure,
            partition,
            anc_a,
            start,
            blocks,
        }
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.blocks
    }

    pub fn partition(&self) -> &[Party] {
        &self.partition
    }

    pub fn measure(&self) -> MeasureKind {
        self.measure
    }

    pub fn start(&self) -> StartKind {
        self.start
    }

    pub fn full_state(&self, x: &[C64]) -> Vec<C64> {
        match self.start {
            StartKind::Unrestricted => x.to_vec(),
            StartKind::Product => {
                let (xa, xb) = x.split_at(self.blocks[0]);
                xa.iter().flat_map(|a| xb.iter().map(move |b| a * b)).collect()
            }
        }
    }

    pub fn evolve(&self, amps: &[C64]) -> Vec<C64> {
        apply_pair_raw(&self.gate, amps, self.partition.len(), self.anc_a, self.anc_a + 1)
    }

    /// `E` at `ψ` and `Uψ`, plus the full-state gradients of both terms.
    fn parts(&self, psi: &[C64]) -> (f64, Vec<C64>, f64, Vec<C64>) {
        let evolved = self.evolve(psi);
        let (e1, g1) = value_and_gradient_unchecked(self.measure, &evolved, &self.partition);
        let back = apply_pair_raw(&self.gate_adj, &g1, self.partition.len(), self.anc_a, self.anc_a + 1);
        let (e0, g0) = match self.start {
            StartKind::Product => (0.0, vec![ZERO; psi.len()]),
            StartKind::Unrestricted => value_and_gradient_unchecked(self.measure, psi, &self.partition),
        };
        (e0, g0, e1, back)
    }

    /// Pulls a full-state gradient back to the iterate coordinates.
    fn pull_back(&self, x: &[C64], g: Vec<C64>) -> Vec<C64> {
        match self.start {
            StartKind::Unrestricted => g,
            StartKind::Product => {
                let (xa, xb) = x.split_at(self.blocks[0]);
                let db = xb.len();
                let mut out = vec![ZERO; x.len()];
                for (a, &za) in xa.iter().enumerate() {
                    for (b, &zb) in xb.iter().enumerate() {
                        let gi = g[a * db + b];
                        out[a] += gi * zb.conj();
                        out[xa.len() + b] += gi * za.conj();
                    }
                }
                out
            }
        }
    }
}

impl Objective for CapacityObjective {
    fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    fn value(&self, x: &[C64]) -> f64 {
        let psi = self.full_state(x);
        let e1 = value_and_gradient_unchecked(self.measure, &self.evolve(&psi), &self.partition).0;
        let e0 = match self.start {
            StartKind::Product => 0.0,
            StartKind::Unrestricted => value_and_gradient_unchecked(self.measure, &psi, &self.partition).0,
        };
        e1 - e0
    }

    fn value_and_gradient(&self, x: &[C64]) -> (f64, Vec<C64>) {
        let psi = self.full_state(x);
        let (e0, g0, e1, g1) = self.parts(&psi);
        let g: Vec<C64> = g1.iter().zip(&g0).map(|(a, b)| a - b).collect();
        (e1 - e0, self.pull_back(x, g))
    }

    fn is_smooth(&self) -> bool {
        self.measure.is_smooth()
    }
}

/// `-E(ψ) - κ max(0, target - ΔE(ψ))²` over unrestricted states.
pub(crate) struct MinInitialObjective<'a> {
    pub base: &'a CapacityObjective,
    pub target: f64,
    pub kappa: f64,
}

impl Objective for MinInitialObjective<'_> {
    fn blocks(&self) -> &[usize] {
        self.base.blocks()
    }

    fn value(&self, x: &[C64]) -> f64 {
        self.value_and_gradient(x).0
    }

    fn value_and_gradient(&self, x: &[C64]) -> (f64, Vec<C64>) {
        let (e0, g0, e1, g1) = self.base.parts(x);
        let shortfall = (self.target - (e1 - e0)).max(0.0);
        let w = 2.0 * self.kappa * shortfall;
        let g = g0
            .iter()
            .zip(&g1)
            .map(|(a, b)| -a + (b - a) * w)
            .collect();
        (-e0 - self.kappa * shortfall * shortfall, g)
    }

    fn is_smooth(&self) -> bool {
        self.base.is_smooth()
    }
}
