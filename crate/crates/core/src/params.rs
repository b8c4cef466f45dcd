//! Game parameters and the validity region for the constructive strategy.

use crate::error::{Error, Result};
use crate::graph::MIN_BOARD_SIZE;

pub const DEFAULT_DELTA: f64 = 1.1;
pub const DEFAULT_BETA: f64 = 0.7;
pub const DEFAULT_ALPHA: f64 = 2.0 / 3.0;

/// Upper limit on `c * delta` for the C4 game.
pub const C_DELTA_LIMIT: f64 = 0.16;
/// Lower limit on `beta` for the C4 game.
pub const BETA_FLOOR: f64 = 0.6;

/// Relative distance under which a real threshold is treated as the nearby
/// integer before it is floored, ceiled or compared against a count.
const SNAP_TOLERANCE: f64 = 1e-9;

/// Snaps `x` onto an integer when it is within floating-point noise of one,
/// so that e.g. `1.1 * 1000^(1/3)` counts as exactly 11.
pub fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= SNAP_TOLERANCE * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

pub fn snap_ceil(x: f64) -> f64 {
    snap(x).ceil()
}

pub fn snap_floor(x: f64) -> f64 {
    snap(x).floor()
}

/// `n^e`, using `cbrt` for the exponents that occur in the C4 game.
pub fn npow(n: f64, e: f64) -> f64 {
    const EPS: f64 = 1e-12;
    if (e - 1.0 / 3.0).abs() < EPS {
        n.cbrt()
    } else if (e - 2.0 / 3.0).abs() < EPS {
        let t = n.cbrt();
        t * t
    } else if (e - 4.0 / 3.0).abs() < EPS {
        n * n.cbrt()
    } else {
        n.powf(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameParams {
    pub n: usize,
    /// Breaker's bias.
    pub q: usize,
    /// Bias coefficient, `q ≈ c * n^alpha`.
    pub c: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

impl GameParams {
    /// Derives `q = floor(c * n^alpha)`.
    pub fn with_coefficient(n: usize, c: f64, delta: f64, beta: f64, alpha: f64, seed: u64) -> Self {
        let q = snap_floor(c * npow(n as f64, alpha)).max(0.0) as usize;
        GameParams { n, q, c, delta, alpha, beta, seed }
    }

    /// Uses a literal bias; the coefficient becomes the effective `q / n^alpha`.
    pub fn with_bias(n: usize, q: usize, delta: f64, beta: f64, alpha: f64, seed: u64) -> Self {
        let c = q as f64 / npow(n as f64, alpha);
        GameParams { n, q, c, delta, alpha, beta, seed }
    }

    /// Defaults `delta = 1.1`, `beta = 0.7`, `alpha = 2/3`.
    pub fn standard(n: usize, c: f64, seed: u64) -> Self {
        Self::with_coefficient(n, c, DEFAULT_DELTA, DEFAULT_BETA, DEFAULT_ALPHA, seed)
    }

    /// Real degree target `delta * n^(1-alpha)`.
    pub fn degree_target(&self) -> f64 {
        self.delta * npow(self.n as f64, 1.0 - self.alpha)
    }

    /// Working integer degree cap `ceil(delta * n^(1-alpha))`.
    pub fn d_hat(&self) -> usize {
        (snap_ceil(self.degree_target()) as usize).max(1)
    }

    /// Minimum size of the high-degree set, `ceil(beta * n)`.
    pub fn x_target(&self) -> usize {
        snap_ceil(self.beta * self.n as f64) as usize
    }

    /// Dangerous-edge threshold `delta^2 * n^(2/3) - 1`. The exponent is
    /// the C4 instantiation and ignores `alpha`.
    pub fn danger_threshold(&self) -> f64 {
        snap(self.delta * self.delta * npow(self.n as f64, 2.0 / 3.0) - 1.0)
    }

    /// Real round bound `(delta/2) * n^(2-alpha)`.
    pub fn round_bound(&self) -> f64 {
        self.delta / 2.0 * npow(self.n as f64, 2.0 - self.alpha)
    }

    /// Integer move bound with slack: `ceil((delta/2) n^(2-alpha)) + n`.
    pub fn move_bound(&self) -> usize {
        snap_ceil(self.round_bound()) as usize + self.n
    }

    /// Bound on `q` that makes the degree strategy win: `(1-beta)^2/delta * n^alpha`.
    pub fn bias_bound(&self) -> f64 {
        (1.0 - self.beta).powi(2) / self.delta * npow(self.n as f64, self.alpha)
    }
}

/// Lists every way `params` leaves the region where the constructive
/// strategy is guaranteed to work. An empty list means valid.
// negated comparisons so that NaN inputs are reported
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate_params(p: &GameParams) -> std::result::Result<(), Vec<String>> {
    let mut v = Vec::new();
    let cd = p.c * p.delta;
    if p.n < MIN_BOARD_SIZE {
        v.push(format!("n >= {MIN_BOARD_SIZE} violated (n = {})", p.n));
    }
    if p.q < 1 {
        v.push(format!("q >= 1 violated (q = {})", p.q));
    }
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        v.push(format!("alpha in (0,1) violated (alpha = {})", p.alpha));
    }
    if !(p.delta > 1.0) {
        v.push(format!("delta > 1 violated (delta = {})", p.delta));
    }
    if !(p.c > 0.0) {
        v.push(format!("c > 0 violated (c = {})", p.c));
    }
    if !(cd < C_DELTA_LIMIT) {
        v.push(format!("cδ < 0.16 violated (cδ = {cd})"));
    }
    if !(p.beta > BETA_FLOOR) {
        v.push(format!("β > 0.6 violated (β = {})", p.beta));
    }
    let upper = 1.0 - cd.max(0.0).sqrt();
    if !(p.beta < upper) {
        v.push(format!("β < 1 - sqrt(cδ) violated (β = {}, 1 - sqrt(cδ) = {upper})", p.beta));
    }
    if !((p.q as f64) < p.bias_bound()) {
        v.push(format!("q < (1-β)²/δ · n^α violated (q = {}, bound = {})", p.q, p.bias_bound()));
    }
    if v.is_empty() {
        // Only meaningful inside the region checked above.
        match min_valid_n(p.c, p.delta, p.beta, p.alpha) {
            Ok(min_n) if (p.n as u64) < min_n => {
                v.push(format!("n >= min_valid_n violated (n = {}, min_valid_n = {min_n})", p.n))
            }
            Ok(_) => {}
            Err(e) => v.push(e.to_string()),
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Whether `n` is large enough for the degree-game bound to be strict:
/// `(cδ/2) n² < ((1-β)²/2) n² - ((1-β) n + δ(1-β) n^(2-α)) / 2`.
pub fn large_enough(n: u64, c: f64, delta: f64, beta: f64, alpha: f64) -> bool {
    let nf = n as f64;
    let gap = 1.0 - beta;
    let lhs = c * delta / 2.0 * nf * nf;
    let rhs = gap * gap / 2.0 * nf * nf - 0.5 * (gap * nf + delta * gap * npow(nf, 2.0 - alpha));
    lhs < rhs
}

/// Smallest `n >= 4` satisfying [`large_enough`].
///
/// Dividing the inequality by `n` leaves a linear left side against a
/// concave right side, so it holds on a suffix of the integers; the search
/// doubles to find a valid `n` and then bisects.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn min_valid_n(c: f64, delta: f64, beta: f64, alpha: f64) -> Result<u64> {
    let cd = c * delta;
    let bound = (1.0 - beta).powi(2);
    if !(cd < bound) || !(alpha > 0.0 && alpha < 1.0) || !(beta < 1.0) {
        return Err(Error::NoValidN { c_delta: cd, bound });
    }
    let start = MIN_BOARD_SIZE as u64;
    if large_enough(start, c, delta, beta, alpha) {
        return Ok(start);
    }
    let mut lo = start;
    let mut hi = start * 2;
    while !large_enough(hi, c, delta, beta, alpha) {
        lo = hi;
        hi = hi.checked_mul(2).filter(|&h| h < (1 << 60)).ok_or(Error::NoValidN { c_delta: cd, bound })?;
    }
    // lo fails, hi holds
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if large_enough(mid, c, delta, beta, alpha) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
