use super::gamma::gamma_unchecked;
use super::NumericsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadratureKind {
    /// Unit weight on (-1, 1).
    Legendre,
    /// Weight `(1 - z)^a z^b` on (0, 1).
    Jacobi { a: f64, b: f64 },
}

/// A Gaussian rule on its canonical interval. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: QuadratureKind,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weighted sum over the canonical interval; the weight function is
    /// already folded into the rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Nodes and weights affinely mapped from the canonical interval onto
    /// `[lo, hi]` (Legendre rules only make sense here).
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c_lo, c_hi) = match self.kind {
            QuadratureKind::Legendre => (-1.0, 1.0),
            QuadratureKind::Jacobi { .. } => (0.0, 1.0),
        };
        let scale = (hi - lo) / (c_hi - c_lo);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (lo + (x - c_lo) * scale, w * scale))
    }

    pub fn integrate_on(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.mapped(lo, hi).map(|(x, w)| w * f(x)).sum()
    }
}

/// Gauss–Jacobi rule on (0, 1) for the weight `(1 - z)^a z^b`.
///
/// Golub–Welsch on the shifted Jacobi recurrence, followed by Newton polish
/// of every node and Christoffel weights from the orthonormal recurrence.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<QuadratureRule, NumericsError> {
    if !(a > -1.0) {
        return Err(NumericsError::Domain { what: "jacobi exponent a", value: a });
    }
    if !(b > -1.0) {
        return Err(NumericsError::Domain { what: "jacobi exponent b", value: b });
    }
    let (diag, offsq) = jacobi_recurrence(n, a, b)?;
    // shift (-1, 1) -> (0, 1)
    let diag: Vec<f64> = diag.iter().map(|d| 0.5 * (1.0 + d)).collect();
    let offsq: Vec<f64> = offsq.iter().map(|e| 0.25 * e).collect();
    let mu0 = gamma_unchecked(a + 1.0) * gamma_unchecked(b + 1.0) / gamma_unchecked(a + b + 2.0);
    let (nodes, weights) = golub_welsch(&diag, &offsq, mu0)?;
    if nodes.first().is_some_and(|&z| z <= 0.0) || nodes.last().is_some_and(|&z| z >= 1.0) {
        return Err(NumericsError::Construction("jacobi node escaped (0, 1)".into()));
    }
    Ok(QuadratureRule { nodes, weights, kind: QuadratureKind::Jacobi { a, b } })
}

/// Gauss–Legendre rule on (-1, 1).
pub fn gauss_legendre(n: usize) -> Result<QuadratureRule, NumericsError> {
    let (diag, offsq) = jacobi_recurrence(n, 0.0, 0.0)?;
    let (nodes, weights) = golub_welsch(&diag, &offsq, 2.0)?;
    Ok(QuadratureRule { nodes, weights, kind: QuadratureKind::Legendre })
}

/// Monic Jacobi recurrence on (-1, 1) with weight `(1-x)^al (1+x)^be`.
/// Returns the diagonal `a_0..a_{n-1}` and squared off-diagonals `b_1..b_{n-1}`.
fn jacobi_recurrence(n: usize, al: f64, be: f64) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
    if n == 0 {
        return Err(NumericsError::Construction("rule needs at least one node".into()));
    }
    let ab = al + be;
    let mut diag = Vec::with_capacity(n);
    diag.push((be - al) / (ab + 2.0));
    for k in 1..n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        diag.push((be * be - al * al) / (s * (s + 2.0)));
    }
    let mut offsq = Vec::with_capacity(n.saturating_sub(1));
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let v = if k == 1 {
            // the (1 + al + be) factor cancels; it vanishes when al + be = -1
            4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
        } else {
            4.0 * kf * (kf + al) * (kf + be) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        offsq.push(v);
    }
    Ok((diag, offsq))
}

fn golub_welsch(diag: &[f64], offsq: &[f64], mu0: f64) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e: Vec<f64> = offsq.iter().map(|v| v.sqrt()).collect();
    e.push(0.0);
    symmetric_tridiagonal_eigenvalues(&mut d, &mut e)?;
    d.sort_by(|x, y| x.total_cmp(y));

    let offs: Vec<f64> = offsq.iter().map(|v| v.sqrt()).collect();
    let mut weights = Vec::with_capacity(n);
    for x in d.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = monic_eval(*x, diag, offsq);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                break;
            }
        }
        weights.push(christoffel_weight(*x, diag, &offs, mu0));
    }
    for pair in d.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(NumericsError::Construction("nodes not strictly increasing".into()));
        }
    }
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(NumericsError::Construction("nonpositive weight".into()));
    }
    Ok((d, weights))
}

fn monic_eval(x: f64, diag: &[f64], offsq: &[f64]) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    for k in 0..diag.len() {
        let b = if k == 0 { 0.0 } else { offsq[k - 1] };
        let p_next = (x - diag[k]) * p - b * p_prev;
        let d_next = p + (x - diag[k]) * d - b * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

fn christoffel_weight(x: f64, diag: &[f64], offs: &[f64], mu0: f64) -> f64 {
    let n = diag.len();
    let mut q_prev = 0.0;
    let mut q = 1.0 / mu0.sqrt();
    let mut sum = q * q;
    for k in 0..n - 1 {
        let back = if k == 0 { 0.0 } else { offs[k - 1] * q_prev };
        let q_next = ((x - diag[k]) * q - back) / offs[k];
        q_prev = q;
        q = q_next;
        sum += q * q;
    }
    1.0 / sum
}

/// Implicit QL with Wilkinson shifts; `e[i]` couples rows i and i+1.
fn symmetric_tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<(), NumericsError> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(NumericsError::Construction("tridiagonal eigenvalue iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
