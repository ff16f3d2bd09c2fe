//! Potentials with geometrically decaying digit dependence, the transfer
//! operator on depth-n cylinder functions, and eigendata checks.
//!
//! The potential of a digit sequence is sum_j theta(e_j) (alpha-1)^j /
//! alpha^(j+1). Truncating after the digits visible in a depth-n word leaves
//! a tail below sup|theta| * ((alpha-1)/alpha)^(n-1), so depth-n cylinder
//! functions approximate C(Y) with explicit error. Two independent routes to
//! the leading eigenvalue are kept: the closed form sum_i e^theta(i), used by
//! the residual checks, and power iteration, which never references it.
//!
//! Power iteration from a constant stays inside functions of the form
//! g(y_0) * prod_t F_t(e_t(y)): the preimage sum collapses onto the first
//! factor and shifts the rest. That factored class is stored exactly, so the
//! iteration runs at any depth the tail bound demands, while the dense-table
//! operator below serves the residual and convergence checks at moderate
//! depth. The two routes are checked against each other in the tests.

use thiserror::Error;

use crate::sft::SftCoding;

#[derive(Debug, Error)]
pub enum ThermoError {
    #[error("alpha must be a finite number greater than 1")]
    InvalidAlpha,
    #[error("theta table has length {got}; the coding needs {want}")]
    ThetaLength { got: usize, want: usize },
    #[error("word of length {0} is too short for a truncated potential")]
    WordTooShort(usize),
    #[error("word is not admissible")]
    InadmissibleWord,
    #[error("cylinder function depth {got} does not match operator depth {want}")]
    DepthMismatch { got: usize, want: usize },
    #[error("word table at depth {depth} would hold {count} words; limit is {limit}")]
    TableTooLarge {
        depth: usize,
        count: u128,
        limit: u128,
    },
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
}

/// Digit-weight table theta and decay parameter alpha > 1.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    theta: Vec<f64>,
    alpha: f64,
}

impl PotentialSpec {
    pub fn new(theta: Vec<f64>, alpha: f64) -> Result<PotentialSpec, ThermoError> {
        if !(alpha.is_finite() && alpha > 1.0) {
            return Err(ThermoError::InvalidAlpha);
        }
        if theta.is_empty() || theta.iter().any(|t| !t.is_finite()) {
            return Err(ThermoError::ThetaLength { got: theta.len(), want: 1 });
        }
        Ok(PotentialSpec { theta, alpha })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// (alpha - 1) / alpha, the per-position decay of the digit weights.
    pub fn decay_ratio(&self) -> f64 {
        (self.alpha - 1.0) / self.alpha
    }

    /// Weight of digit position j.
    pub fn coeff(&self, j: usize) -> f64 {
        self.decay_ratio().powi(j as i32) / self.alpha
    }

    pub fn theta_sup(&self) -> f64 {
        self.theta.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    /// Closed-form upper bound 2 sup|theta| ((alpha-1)/alpha)^n for the n-th
    /// variation of the potential.
    pub fn variation_tail(&self, n: u32) -> f64 {
        2.0 * self.theta_sup() * self.decay_ratio().powi(n as i32)
    }

    /// sum_i e^theta(i): the eigenvalue of the transfer operator.
    pub fn lambda_closed_form(&self) -> f64 {
        self.theta.iter().map(|t| t.exp()).sum()
    }

    fn check_digits(&self, sft: &SftCoding) -> Result<(), ThermoError> {
        if self.theta.len() != sft.digit_count as usize {
            return Err(ThermoError::ThetaLength {
                got: self.theta.len(),
                want: sft.digit_count as usize,
            });
        }
        Ok(())
    }
}

/// Smallest depth n >= 2 with variation_tail(n - 1) < bound.
pub fn depth_for_tail(spec: &PotentialSpec, bound: f64) -> usize {
    let mut n = 2usize;
    while spec.variation_tail((n - 1) as u32) >= bound && n < 10_000 {
        n += 1;
    }
    n
}

/// Potential of a finite word truncated to its visible digits, together with
/// the tail bound sup|theta| ((alpha-1)/alpha)^(n-1).
pub fn potential_truncated(
    spec: &PotentialSpec,
    sft: &SftCoding,
    word: &[usize],
) -> Result<(f64, f64), ThermoError> {
    spec.check_digits(sft)?;
    if word.len() < 2 {
        return Err(ThermoError::WordTooShort(word.len()));
    }
    let digits = sft
        .digits_of(word)
        .map_err(|_| ThermoError::InadmissibleWord)?;
    let value = digits
        .iter()
        .enumerate()
        .map(|(j, &d)| spec.theta[d as usize] * spec.coeff(j))
        .sum();
    let tail = spec.theta_sup() * spec.decay_ratio().powi((word.len() - 1) as i32);
    Ok((value, tail))
}

/// All admissible words of a fixed depth, flattened and in lexicographic
/// order so indices can be recovered by binary search.
pub struct WordTable {
    depth: usize,
    flat: Vec<u8>,
}

const WORD_LIMIT: u128 = 8_000_000;

impl WordTable {
    fn count_words(sft: &SftCoding, depth: usize) -> u128 {
        let mut counts = vec![1u128; sft.n_states];
        for _ in 1..depth {
            let mut next = vec![0u128; sft.n_states];
            for i in 0..sft.n_states {
                for j in 0..sft.n_states {
                    if sft.adjacency[i][j] == 1 {
                        next[i] += counts[j];
                    }
                }
            }
            counts = next;
        }
        counts.iter().sum()
    }

    pub fn build(sft: &SftCoding, depth: usize) -> Result<WordTable, ThermoError> {
        assert!(depth >= 1);
        assert!(sft.n_states <= u8::MAX as usize + 1);
        let count = Self::count_words(sft, depth);
        if count > WORD_LIMIT {
            return Err(ThermoError::TableTooLarge {
                depth,
                count,
                limit: WORD_LIMIT,
            });
        }
        let mut flat = Vec::with_capacity(count as usize * depth);
        let mut word = Vec::with_capacity(depth);
        for s in 0..sft.n_states {
            word.push(s as u8);
            extend_words(sft, depth, &mut word, &mut flat);
            word.pop();
        }
        Ok(WordTable { depth, flat })
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn word(&self, index: usize) -> &[u8] {
        &self.flat[index * self.depth..(index + 1) * self.depth]
    }

    pub fn index_of(&self, word: &[u8]) -> Option<usize> {
        debug_assert_eq!(word.len(), self.depth);
        let mut lo = 0usize;
        let mut hi = self.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.word(mid).cmp(word) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.flat.chunks_exact(self.depth)
    }
}

fn extend_words(sft: &SftCoding, depth: usize, word: &mut Vec<u8>, flat: &mut Vec<u8>) {
    if word.len() == depth {
        flat.extend_from_slice(word);
        return;
    }
    let last = *word.last().unwrap() as usize;
    for j in 0..sft.n_states {
        if sft.adjacency[last][j] == 1 {
            word.push(j as u8);
            extend_words(sft, depth, word, flat);
            word.pop();
        }
    }
}

/// Table of values indexed by the admissible words of one depth.
#[derive(Clone, Debug)]
pub struct CylinderFunction {
    pub depth: usize,
    pub values: Vec<f64>,
}

/// Dense transfer operator on depth-n cylinder functions, with the potential
/// truncated to the digits a word exposes.
pub struct TransferOperator {
    depth: usize,
    spec: PotentialSpec,
    words: WordTable,
    /// Truncated potential per word.
    phi: Vec<f64>,
    /// exp(phi) per word.
    weight: Vec<f64>,
    in_edges: Vec<Vec<(usize, u32)>>,
}

impl TransferOperator {
    pub fn new(
        sft: &SftCoding,
        spec: &PotentialSpec,
        depth: usize,
    ) -> Result<TransferOperator, ThermoError> {
        spec.check_digits(sft)?;
        if depth < 2 {
            return Err(ThermoError::WordTooShort(depth));
        }
        let words = WordTable::build(sft, depth)?;
        let mut phi = Vec::with_capacity(words.len());
        for w in words.iter() {
            let mut value = 0.0;
            for (j, pair) in w.windows(2).enumerate() {
                let d = sft.digit_labels[pair[0] as usize][pair[1] as usize]
                    .expect("admissible word has digits");
                value += spec.theta()[d as usize] * spec.coeff(j);
            }
            phi.push(value);
        }
        let weight = phi.iter().map(|p| p.exp()).collect();
        Ok(TransferOperator {
            depth,
            spec: spec.clone(),
            words,
            phi,
            weight,
            in_edges: sft.in_edges(),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &WordTable {
        &self.words
    }

    pub fn lambda_closed_form(&self) -> f64 {
        self.spec.lambda_closed_form()
    }

    pub fn constant(&self, value: f64) -> CylinderFunction {
        CylinderFunction {
            depth: self.depth,
            values: vec![value; self.words.len()],
        }
    }

    /// Indicator of the cylinder `[state]` read off the first symbol.
    pub fn indicator_state(&self, state: usize) -> CylinderFunction {
        let values = self
            .words
            .iter()
            .map(|w| if w[0] as usize == state { 1.0 } else { 0.0 })
            .collect();
        CylinderFunction {
            depth: self.depth,
            values,
        }
    }

    /// Truncated eigenfunction candidate exp((alpha - 1) phi).
    pub fn h_truncated(&self) -> CylinderFunction {
        let a = self.spec.alpha() - 1.0;
        let values = self.phi.iter().map(|p| (a * p).exp()).collect();
        CylinderFunction {
            depth: self.depth,
            values,
        }
    }

    /// One application of the operator: sum over the predecessors of the
    /// first symbol, weighted by the truncated potential of the extended
    /// word. The preimage sum has exactly digit_count terms at every word.
    pub fn apply(&self, f: &CylinderFunction) -> Result<CylinderFunction, ThermoError> {
        if f.depth != self.depth {
            return Err(ThermoError::DepthMismatch {
                got: f.depth,
                want: self.depth,
            });
        }
        let n = self.depth;
        let mut scratch = vec![0u8; n];
        let mut out = Vec::with_capacity(self.words.len());
        for w in self.words.iter() {
            scratch[1..n].copy_from_slice(&w[..n - 1]);
            let mut acc = 0.0;
            for &(pred, _digit) in &self.in_edges[w[0] as usize] {
                scratch[0] = pred as u8;
                let iz = self
                    .words
                    .index_of(&scratch)
                    .expect("extension of admissible word is admissible");
                acc += self.weight[iz] * f.values[iz];
            }
            out.push(acc);
        }
        Ok(CylinderFunction {
            depth: n,
            values: out,
        })
    }

    /// Residual of the closed-form eigenpair on the truncated operator:
    /// ||L H - lambda H||_inf / ||H||_inf with lambda = sum e^theta(i).
    pub fn eigen_residual(&self) -> f64 {
        let h = self.h_truncated();
        let lh = self.apply(&h).expect("depth matches by construction");
        let lambda = self.lambda_closed_form();
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for (a, b) in lh.values.iter().zip(&h.values) {
            num = num.max((a - lambda * b).abs());
            den = den.max(b.abs());
        }
        num / den
    }

    /// Guaranteed bound for the residual above.
    pub fn eigen_residual_bound(&self) -> f64 {
        let s = self.spec.decay_ratio();
        let e = self.spec.alpha() * self.spec.theta_sup() * s.powi((self.depth - 1) as i32);
        self.lambda_closed_form() * (e.exp() - 1.0)
    }

    /// Tracks v_k = L^k f / lambda^k against the truncated eigenfunction:
    /// the spread of v_k / H over words must sink toward the truncation
    /// floor, and the mid-ratio estimates nu(f) up to normalization.
    pub fn ruelle_check(&self, f: &CylinderFunction, k_max: usize) -> Result<RuelleReport, ThermoError> {
        let lambda = self.lambda_closed_form();
        let h = self.h_truncated();
        let mut v = f.clone();
        let mut spreads = Vec::with_capacity(k_max);
        let mut final_ratio = f64::NAN;
        for _ in 1..=k_max {
            v = self.apply(&v)?;
            for x in &mut v.values {
                *x /= lambda;
            }
            let mut rmin = f64::INFINITY;
            let mut rmax = f64::NEG_INFINITY;
            for (a, b) in v.values.iter().zip(&h.values) {
                let r = a / b;
                rmin = rmin.min(r);
                rmax = rmax.max(r);
            }
            spreads.push(rmax - rmin);
            final_ratio = 0.5 * (rmax + rmin);
        }
        Ok(RuelleReport {
            spreads,
            final_ratio,
        })
    }
}

#[derive(Debug)]
pub struct RuelleReport {
    /// spread_k = max - min of (L^k f / lambda^k) / H over words.
    pub spreads: Vec<f64>,
    /// Midpoint of the final ratio range.
    pub final_ratio: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PowerLambda {
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Leading-eigenvalue estimate by power iteration from the constant function,
/// never consulting the closed form.
///
/// Iterates the truncated operator on its invariant factored class
/// g(y_0) prod_t F_t(e_t(y)); sup norms and ratio extremes over admissible
/// words come from dynamic programming along the edge graph, so the actual
/// adjacency and digit labels drive every step.
pub fn power_lambda(
    sft: &SftCoding,
    spec: &PotentialSpec,
    depth: usize,
    max_iters: usize,
    tol: f64,
) -> Result<PowerLambda, ThermoError> {
    spec.check_digits(sft)?;
    if depth < 2 {
        return Err(ThermoError::WordTooShort(depth));
    }
    let digits = sft.digit_count as usize;
    let positions = depth - 1;
    let mut state = vec![1.0f64; sft.n_states];
    let mut pos = vec![vec![1.0f64; digits]; positions];
    let in_edges = sft.in_edges();

    let exp_c: Vec<Vec<f64>> = (0..positions)
        .map(|j| {
            (0..digits)
                .map(|d| (spec.theta()[d] * spec.coeff(j)).exp())
                .collect()
        })
        .collect();

    let mut lambda_est = f64::NAN;
    for iter in 1..=max_iters {
        // Lf in factored form
        let mut new_state = vec![0.0f64; sft.n_states];
        for (j, edges) in in_edges.iter().enumerate() {
            let mut acc = 0.0;
            for &(i, d) in edges {
                acc += exp_c[0][d as usize] * pos[0][d as usize] * state[i];
            }
            new_state[j] = acc;
        }
        let mut new_pos = vec![vec![1.0f64; digits]; positions];
        for t in 0..positions.saturating_sub(1) {
            for d in 0..digits {
                new_pos[t][d] = exp_c[t + 1][d] * pos[t + 1][d];
            }
        }

        // ratio extremes of Lf / f over admissible words
        let ratio_state: Vec<f64> = new_state
            .iter()
            .zip(&state)
            .map(|(a, b)| a / b)
            .collect();
        let ratio_pos: Vec<Vec<f64>> = (0..positions)
            .map(|t| (0..digits).map(|d| new_pos[t][d] / pos[t][d]).collect())
            .collect();
        let rmax = extreme_over_words(sft, &ratio_state, &ratio_pos, true);
        let rmin = extreme_over_words(sft, &ratio_state, &ratio_pos, false);

        // Rayleigh ratio in the sup norm, with f normalized below
        lambda_est = extreme_over_words(sft, &new_state, &new_pos, true);

        if rmax - rmin <= tol * lambda_est.max(1.0) {
            let residual = (rmax - lambda_est).abs().max((rmin - lambda_est).abs());
            return Ok(PowerLambda {
                lambda: lambda_est,
                residual,
                iterations: iter,
            });
        }

        // normalize: pull row maxima of the position factors into the state
        // factor, then scale the state factor to sup norm 1
        let mut carried = 1.0;
        for row in new_pos.iter_mut() {
            let m = row.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
            carried *= m;
            for v in row.iter_mut() {
                *v /= m;
            }
        }
        let scale = carried / lambda_est;
        for v in new_state.iter_mut() {
            *v *= scale;
        }
        state = new_state;
        pos = new_pos;
    }
    let _ = lambda_est;
    Err(ThermoError::NoConvergence(max_iters))
}

/// Max (or min) over admissible depth-n words of
/// state(y_0) * prod_t pos[t][digit(y_t, y_t+1)], by backward DP.
fn extreme_over_words(
    sft: &SftCoding,
    state: &[f64],
    pos: &[Vec<f64>],
    maximize: bool,
) -> f64 {
    let n = sft.n_states;
    let mut m = vec![1.0f64; n];
    for t in (0..pos.len()).rev() {
        let mut next = vec![if maximize { f64::NEG_INFINITY } else { f64::INFINITY }; n];
        for s in 0..n {
            for j in 0..n {
                if sft.adjacency[s][j] == 1 {
                    let d = sft.digit_labels[s][j].expect("edge digit") as usize;
                    let v = pos[t][d] * m[j];
                    next[s] = if maximize { next[s].max(v) } else { next[s].min(v) };
                }
            }
        }
        m = next;
    }
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    for s in 0..n {
        let v = state[s] * m[s];
        best = if maximize { best.max(v) } else { best.min(v) };
    }
    best
}
