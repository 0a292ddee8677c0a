//! Metropolis sampling of DWBC six-vertex configurations via local height
//! flips, and extraction of the corner observables (c1 positions, empty-edge
//! positions, b-vertex counts) behind the GUE-corners statistics.
//!
//! A move picks a uniform random inner face; the face is flippable when its
//! four bounding edges form a path corner, i.e. (left vertical, right
//! vertical, bottom horizontal, top horizontal) is (0,1,1,0) (raise) or
//! (1,0,0,1) (lower). Flipping toggles those four edges, which re-draws the
//! four corner vertices, and is accepted with probability
//! min(1, W_new / W_old) over those vertices. The proposal is symmetric
//! (the reverse flip is proposed at the same face with the same
//! probability), so the chain is in detailed balance with the Boltzmann
//! measure; irreducibility is the standard connectivity of monotone-surface
//! flip dynamics on a simply connected domain.
//!
//! Complex weights are never used here: at the free-fermion point the
//! measure only depends on the gauge invariants, and the positive
//! representative (1, 1, tan(theta/2), tan(theta/2), sec(theta/2),
//! sec(theta/2)) realizes the |u| = 1, t = -1 family.

use crate::core_model::{SixVertexConfig, VertexType};
use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::stats;
use num_complex::Complex64;

/// Weight specification for the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// a = b = c = 1 (Delta = 1/2)
    Uniform,
    /// a = 1, b = tan(theta/2), c = sec(theta/2): the positive gauge
    /// representative of the free-fermion family at u = e^{i theta}, t = -1
    /// (Delta = 0). theta in (0, pi).
    DeltaZero { theta: f64 },
}

impl WeightSpec {
    /// The six weights (a1, a2, b1, b2, c1, c2).
    pub fn weights(&self) -> [f64; 6] {
        match *self {
            WeightSpec::Uniform => [1.0; 6],
            WeightSpec::DeltaZero { theta } => {
                let b = (theta / 2.0).tan();
                let c = 1.0 / (theta / 2.0).cos();
                [1.0, 1.0, b, b, c, c]
            }
        }
    }

    pub fn weight_table(&self) -> crate::core_model::WeightTable {
        let w = self.weights();
        crate::core_model::WeightTable::new(
            Complex64::new(w[0], 0.0),
            Complex64::new(w[1], 0.0),
            Complex64::new(w[2], 0.0),
            Complex64::new(w[3], 0.0),
            Complex64::new(w[4], 0.0),
            Complex64::new(w[5], 0.0),
        )
    }

    /// Density of c1-type vertices in the corner rows:
    /// gamma = sin^2(theta/2) for the free-fermion family (equal to
    /// (1-u)(1-1/u)/4 at u = e^{i theta}), gamma = 1/2 for uniform weights.
    pub fn gamma(&self) -> f64 {
        match *self {
            WeightSpec::Uniform => 0.5,
            WeightSpec::DeltaZero { theta } => (theta / 2.0).sin().powi(2),
        }
    }

    /// Scale of the sqrt(N) fluctuations of the corner positions.
    pub fn corner_scale(&self, n: usize) -> f64 {
        match *self {
            WeightSpec::Uniform => (3.0 * n as f64 / 8.0).sqrt(),
            WeightSpec::DeltaZero { .. } => {
                let g = self.gamma();
                (g * (1.0 - g) * n as f64).sqrt()
            }
        }
    }
}

/// Chain parameters. One sweep is (n-1)^2 proposed flips.
#[derive(Debug, Clone, Copy)]
pub struct McmcParams {
    pub n: usize,
    pub weights: WeightSpec,
    pub burnin_sweeps: usize,
    pub thin_sweeps: usize,
    pub samples: usize,
    pub seed: u64,
    pub chain: u64,
}

impl McmcParams {
    pub fn new(n: usize, weights: WeightSpec, seed: u64) -> Self {
        McmcParams {
            n,
            weights,
            burnin_sweeps: 10 * n * n,
            thin_sweeps: 8,
            samples: 100,
            seed,
            chain: 0,
        }
    }
}

/// Chain state: the two edge grids plus counters.
pub struct McmcChain {
    n: usize,
    vert: Vec<u8>,  // (i-1) + n*j, i in 1..=n, j in 0..=n
    horiz: Vec<u8>, // i + (n+1)*(j-1), i in 0..=n, j in 1..=n
    weights: [f64; 6],
    uniform_weights: bool,
    rng: CounterRng,
    pub proposals: u64,
    pub accepted: u64,
}

impl McmcChain {
    /// Start from the staircase configuration: the path entering column i
    /// rises to row n+1-i and exits right.
    pub fn new(p: &McmcParams) -> Result<McmcChain> {
        if p.n < 2 {
            return Err(Error::Domain("chain needs n >= 2".into()));
        }
        let n = p.n;
        let mut vert = vec![0u8; n * (n + 1)];
        let mut horiz = vec![0u8; (n + 1) * n];
        for i in 1..=n {
            // vertical run of path i: edges at levels 0 .. n-i
            for j in 0..=(n - i) {
                vert[(i - 1) + n * j] = 1;
            }
            // horizontal run at row n+1-i: edges from gap i to gap n
            let row = n + 1 - i;
            for g in i..=n {
                horiz[g + (n + 1) * (row - 1)] = 1;
            }
        }
        let chain = McmcChain {
            n,
            vert,
            horiz,
            weights: p.weights.weights(),
            uniform_weights: p.weights == WeightSpec::Uniform,
            rng: CounterRng::new(p.seed, p.chain),
            proposals: 0,
            accepted: 0,
        };
        debug_assert!(chain.validate());
        Ok(chain)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn v(&self, i: usize, j: usize) -> u8 {
        self.vert[(i - 1) + self.n * j]
    }

    #[inline]
    fn h(&self, i: usize, j: usize) -> u8 {
        self.horiz[i + (self.n + 1) * (j - 1)]
    }

    fn vertex_weight(&self, i: usize, j: usize) -> f64 {
        let t = VertexType::from_edges(self.v(i, j - 1), self.h(i - 1, j), self.v(i, j), self.h(i, j))
            .expect("conservation");
        self.weight_of(t)
    }

    #[inline]
    fn weight_of(&self, t: VertexType) -> f64 {
        match t {
            VertexType::A1 => self.weights[0],
            VertexType::A2 => self.weights[1],
            VertexType::B1 => self.weights[2],
            VertexType::B2 => self.weights[3],
            VertexType::C1 => self.weights[4],
            VertexType::C2 => self.weights[5],
        }
    }

    /// Metropolis ratio of the proposed flip at face (a, b), given by the
    /// four corner vertices only.
    fn flip_ratio(&mut self, a: usize, b: usize) -> f64 {
        let old = self.vertex_weight(a, b)
            * self.vertex_weight(a + 1, b)
            * self.vertex_weight(a, b + 1)
            * self.vertex_weight(a + 1, b + 1);
        self.toggle_face(a, b);
        let new = self.vertex_weight(a, b)
            * self.vertex_weight(a + 1, b)
            * self.vertex_weight(a, b + 1)
            * self.vertex_weight(a + 1, b + 1);
        self.toggle_face(a, b);
        new / old
    }

    #[inline]
    fn toggle_face(&mut self, a: usize, b: usize) {
        let n = self.n;
        self.vert[(a - 1) + n * b] ^= 1; // left vertical
        self.vert[a + n * b] ^= 1; // right vertical
        self.horiz[a + (n + 1) * (b - 1)] ^= 1; // bottom horizontal
        self.horiz[a + (n + 1) * b] ^= 1; // top horizontal
    }

    /// One proposed move; returns true when accepted.
    #[inline]
    pub fn step(&mut self) -> bool {
        let faces = (self.n - 1) * (self.n - 1);
        let f = self.rng.below(faces as u64) as usize;
        let a = 1 + f % (self.n - 1);
        let b = 1 + f / (self.n - 1);
        self.proposals += 1;

        let n = self.n;
        let vl = self.vert[(a - 1) + n * b];
        let vr = self.vert[a + n * b];
        let hb = self.horiz[a + (n + 1) * (b - 1)];
        let ht = self.horiz[a + (n + 1) * b];
        // flippable iff the bounding edges form a path corner
        let flippable = (vl == 0 && vr == 1 && hb == 1 && ht == 0)
            || (vl == 1 && vr == 0 && hb == 0 && ht == 1);
        if !flippable {
            return false;
        }
        if self.uniform_weights {
            self.toggle_face(a, b);
            self.accepted += 1;
            return true;
        }
        let ratio = self.flip_ratio(a, b);
        if ratio >= 1.0 || self.rng.uniform() < ratio {
            self.toggle_face(a, b);
            self.accepted += 1;
            true
        } else {
            false
        }
    }

    /// One sweep = (n-1)^2 proposals.
    pub fn sweep(&mut self) {
        for _ in 0..(self.n - 1) * (self.n - 1) {
            self.step();
        }
    }

    /// Position of the unique c1 vertex in row 1 (equals Xi_1^1).
    pub fn row1_corner_position(&self) -> usize {
        for i in 1..=self.n {
            if self.v(i, 1) == 0 {
                return i;
            }
        }
        unreachable!("row 1 always has an empty top edge under DWBC")
    }

    pub fn to_config(&self) -> SixVertexConfig {
        SixVertexConfig::from_raw_edges(self.n, self.n, self.vert.clone(), self.horiz.clone())
    }

    /// Full validation: conservation at every vertex and DWBC boundary.
    pub fn validate(&self) -> bool {
        let cfg = self.to_config();
        for j in 1..=self.n {
            for i in 1..=self.n {
                if cfg.vertex_type(i, j).is_none() {
                    return false;
                }
            }
        }
        cfg.boundary() == crate::core_model::BoundaryData::dwbc(self.n)
    }

    /// Total Boltzmann weight of the current configuration.
    pub fn total_weight(&self) -> f64 {
        let mut w = 1.0;
        for j in 1..=self.n {
            for i in 1..=self.n {
                w *= self.vertex_weight(i, j);
            }
        }
        w
    }
}

/// Corner observables of a DWBC configuration up to row k.
#[derive(Debug, Clone)]
pub struct CornersObservables {
    /// positions of c1 vertices per row (xi^j), rows 1..=k
    pub xi: Vec<Vec<usize>>,
    /// positions of empty vertical edges between rows j and j+1 (Xi^j)
    pub cap_xi: Vec<Vec<usize>>,
    /// standardized b-vertex counts eta_j = (#b in row j - gamma N) / sqrt(N)
    pub eta: Vec<f64>,
    /// raw b-vertex counts per row
    pub b_counts: Vec<usize>,
    /// whether the strict interlacing event holds up to row k
    pub generic: bool,
}

/// Extract xi, Xi and eta from a configuration (gamma fixes the eta
/// centering).
pub fn corners_extract(cfg: &SixVertexConfig, k: usize, gamma: f64) -> Result<CornersObservables> {
    let n = cfg.width();
    if k > n {
        return Err(Error::Domain(format!("k = {k} exceeds n = {n}")));
    }
    let mut xi = Vec::with_capacity(k);
    let mut cap_xi = Vec::with_capacity(k);
    let mut eta = Vec::with_capacity(k);
    let mut b_counts = Vec::with_capacity(k);
    for j in 1..=k {
        let mut row_xi = Vec::new();
        let mut b_count = 0usize;
        for i in 1..=n {
            match cfg.vertex_type(i, j) {
                Some(VertexType::C1) => row_xi.push(i),
                Some(t) if t.is_b() => b_count += 1,
                _ => {}
            }
        }
        let row_cap: Vec<usize> = (1..=n).filter(|&i| cfg.vertical_edge(i, j) == 0).collect();
        if row_cap.len() != j {
            return Err(Error::Invariant(format!(
                "row {j} has {} empty top edges, expected {j} (not a DWBC state?)",
                row_cap.len()
            )));
        }
        eta.push((b_count as f64 - gamma * n as f64) / (n as f64).sqrt());
        b_counts.push(b_count);
        xi.push(row_xi);
        cap_xi.push(row_cap);
    }
    // interlacing Xi_1^j <= Xi_1^{j-1} <= Xi_2^j <= ... is a hard invariant
    for j in 2..=k {
        let upper = &cap_xi[j - 1];
        let lower = &cap_xi[j - 2];
        for i in 0..lower.len() {
            if !(upper[i] <= lower[i] && lower[i] <= upper[i + 1]) {
                return Err(Error::Invariant(format!(
                    "interlacing violated between rows {} and {j}",
                    j - 1
                )));
            }
        }
    }
    // strict-inequality event
    let mut generic = true;
    for j in 2..=k {
        let upper = &cap_xi[j - 1];
        let lower = &cap_xi[j - 2];
        for i in 0..lower.len() {
            if !(upper[i] < lower[i] && lower[i] < upper[i + 1]) {
                generic = false;
            }
        }
    }
    Ok(CornersObservables { xi, cap_xi, eta, b_counts, generic })
}

impl CornersObservables {
    /// Row-1 identity: Xi_1^1 = #b(row 1) + 1 for every DWBC configuration.
    pub fn row1_identity_holds(&self) -> bool {
        self.cap_xi[0][0] == self.b_counts[0] + 1
    }

    /// Telescoping identity on the generic event:
    /// sum Xi^j - sum Xi^{j-1} = #b(row j) + j, exactly in integers.
    pub fn telescoping_identity_holds(&self) -> bool {
        if !self.generic {
            return true; // only asserted on the generic event
        }
        for j in 2..=self.cap_xi.len() {
            let s_j: usize = self.cap_xi[j - 1].iter().sum();
            let s_prev: usize = self.cap_xi[j - 2].iter().sum();
            if s_j - s_prev != self.b_counts[j - 1] + j {
                return false;
            }
        }
        true
    }

    /// On the generic event row j holds exactly j c1 vertices and
    /// xi_i^j = Xi_i^j.
    pub fn xi_matches_cap_xi(&self) -> bool {
        if !self.generic {
            return true;
        }
        self.xi
            .iter()
            .zip(&self.cap_xi)
            .all(|(a, b)| a == b)
    }
}

/// Comparison of the chain's standardized corner observables against GUE
/// corners reference samples.
#[derive(Debug, Clone)]
pub struct GueCornersReport {
    pub samples: usize,
    pub effective_samples: f64,
    /// P(row j carries exactly j c1 vertices), rows 1..=k
    pub p_row_counts: Vec<f64>,
    /// two-sample KS per coordinate (j, i) between standardized Xi_i^j and
    /// the reference lambda_i^j
    pub per_coordinate_ks: Vec<(usize, usize, f64)>,
    /// max |mean difference| over coordinates
    pub mean_gap: f64,
    /// max |covariance difference| over coordinate pairs
    pub cov_gap: f64,
    /// one-sample KS of standardized Xi_1^1 against N(0,1)
    pub row1_ks_vs_normal: f64,
}

/// Run the chain and compare the standardized corner positions with GUE
/// corners samples from the reference stack. The comparison uses the
/// empty-edge positions Xi (defined on every sample; they equal the c1
/// positions xi on the generic event, whose probability is also reported).
pub fn gue_corners_test(
    p: &McmcParams,
    k: usize,
    reference: &[crate::rmt_reference::CornersSample],
) -> Result<GueCornersReport> {
    if reference.is_empty() || reference[0].levels.len() < k {
        return Err(Error::Domain("reference samples must cover k levels".into()));
    }
    if p.samples < 8 {
        return Err(Error::InsufficientSamples { got: p.samples, need: 8 });
    }
    let n = p.n;
    let gamma = p.weights.gamma();
    let scale = p.weights.corner_scale(n);
    let coords: Vec<(usize, usize)> =
        (1..=k).flat_map(|j| (1..=j).map(move |i| (j, i))).collect();
    let mut series: Vec<Vec<f64>> = vec![Vec::with_capacity(p.samples); coords.len()];
    let mut row_hits = vec![0usize; k + 1];
    mcmc_run(p, &mut |_, cfg| {
        let obs = corners_extract(cfg, k, gamma).expect("DWBC invariants");
        for j in 1..=k {
            if obs.xi[j - 1].len() == j {
                row_hits[j] += 1;
            }
        }
        for (slot, &(j, i)) in coords.iter().enumerate() {
            let xi = obs.cap_xi[j - 1][i - 1] as f64;
            series[slot].push((xi - gamma * n as f64) / scale);
        }
    })?;
    let p_row_counts: Vec<f64> =
        (1..=k).map(|j| row_hits[j] as f64 / p.samples as f64).collect();

    // reference coordinate series
    let ref_series: Vec<Vec<f64>> = coords
        .iter()
        .map(|&(j, i)| reference.iter().map(|s| s.level(j)[i - 1]).collect())
        .collect();

    let mut per_coordinate_ks = Vec::with_capacity(coords.len());
    let mut mean_gap = 0.0f64;
    for (slot, &(j, i)) in coords.iter().enumerate() {
        per_coordinate_ks.push((j, i, stats::ks_two_sample(&series[slot], &ref_series[slot])));
        let (m_chain, _) = stats::mean_var(&series[slot]);
        let (m_ref, _) = stats::mean_var(&ref_series[slot]);
        mean_gap = mean_gap.max((m_chain - m_ref).abs());
    }
    let mut cov_gap = 0.0f64;
    for a in 0..coords.len() {
        for b in a..coords.len() {
            cov_gap = cov_gap.max((cov(&series[a], &series[b]) - cov(&ref_series[a], &ref_series[b])).abs());
        }
    }
    let row1_ks_vs_normal = stats::ks_distance(&series[0], stats::normal_cdf);
    let tau = stats::integrated_autocorrelation_time(&series[0]);
    Ok(GueCornersReport {
        samples: p.samples,
        effective_samples: p.samples as f64 / tau,
        p_row_counts,
        per_coordinate_ks,
        mean_gap,
        cov_gap,
        row1_ks_vs_normal,
    })
}

fn cov(a: &[f64], b: &[f64]) -> f64 {
    let (ma, _) = stats::mean_var(a);
    let (mb, _) = stats::mean_var(b);
    let n = a.len() as f64;
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (n - 1.0)
}

/// Detailed-balance check at one flippable face of a chain state:
/// pi(S) P(S -> S') = pi(S') P(S' -> S) with the local ratio, where pi is
/// the product of all vertex weights. Returns the relative discrepancy.
pub fn detailed_balance_residual(p: &McmcParams) -> Result<f64> {
    let mut chain = McmcChain::new(p)?;
    // find a flippable face in the staircase start
    let n = chain.n;
    for b in 1..n {
        for a in 1..n {
            let vl = chain.v(a, b);
            let vr = chain.v(a + 1, b);
            let hb = chain.h(a, b);
            let ht = chain.h(a, b + 1);
            let flippable = (vl == 0 && vr == 1 && hb == 1 && ht == 0)
                || (vl == 1 && vr == 0 && hb == 0 && ht == 1);
            if !flippable {
                continue;
            }
            let w_s = chain.total_weight();
            let local_ratio = chain.flip_ratio(a, b);
            chain.toggle_face(a, b);
            let w_sp = chain.total_weight();
            chain.toggle_face(a, b);
            // locality: the 4-vertex ratio equals the global weight ratio
            let global_ratio = w_sp / w_s;
            let locality = (local_ratio - global_ratio).abs() / global_ratio.abs();
            // detailed balance of the acceptance rule
            let forward = w_s * local_ratio.min(1.0);
            let backward = w_sp * (1.0 / local_ratio).min(1.0);
            let db = (forward - backward).abs() / forward.abs();
            return Ok(locality.max(db));
        }
    }
    Err(Error::Invariant("no flippable face found".into()))
}

/// Estimate the integrated autocorrelation time (in sweeps) of the row-1
/// corner position from a pilot run, after burn-in.
pub fn pilot_iat(p: &McmcParams, pilot_sweeps: usize) -> Result<f64> {
    let mut chain = McmcChain::new(p)?;
    for _ in 0..p.burnin_sweeps {
        chain.sweep();
    }
    let mut series = Vec::with_capacity(pilot_sweeps);
    for _ in 0..pilot_sweeps {
        chain.sweep();
        series.push(chain.row1_corner_position() as f64);
    }
    Ok(stats::integrated_autocorrelation_time(&series))
}

/// Run a chain and hand each retained (thinned) configuration to `visit`.
pub fn mcmc_run(p: &McmcParams, visit: &mut dyn FnMut(usize, &SixVertexConfig)) -> Result<()> {
    let mut chain = McmcChain::new(p)?;
    for _ in 0..p.burnin_sweeps {
        chain.sweep();
    }
    for s in 0..p.samples {
        for _ in 0..p.thin_sweeps {
            chain.sweep();
        }
        visit(s, &chain.to_config());
    }
    Ok(())
}
