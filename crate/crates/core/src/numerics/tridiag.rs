use super::NumericsError;

/// Tridiagonal matrix stored by diagonals: `lower[i]` sits at (i+1, i),
/// `upper[i]` at (i, i+1).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self, NumericsError> {
        let m = diag.len();
        for off in [&lower, &upper] {
            if off.len() + 1 != m && !(m == 0 && off.is_empty()) {
                return Err(NumericsError::Length { expected: m.saturating_sub(1), got: off.len() });
            }
        }
        Ok(Self { lower, diag, upper })
    }

    /// Constant-coefficient (Toeplitz) system of size `m`.
    pub fn constant(m: usize, lower: f64, diag: f64, upper: f64) -> Self {
        Self { lower: vec![lower; m.saturating_sub(1)], diag: vec![diag; m], upper: vec![upper; m.saturating_sub(1)] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn is_strictly_diagonally_dominant(&self) -> bool {
        (0..self.len()).all(|i| {
            let lo = if i > 0 { self.lower[i - 1].abs() } else { 0.0 };
            let up = if i + 1 < self.len() { self.upper[i].abs() } else { 0.0 };
            self.diag[i].abs() > lo + up
        })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.len();
        (0..m)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < m {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Forward elimination done once; reused for every line that shares
    /// this matrix.
    pub fn factor(&self) -> Result<TridiagonalLu, NumericsError> {
        let m = self.len();
        let mut inv_pivot = Vec::with_capacity(m);
        let mut upper_mod = Vec::with_capacity(m.saturating_sub(1));
        let mut prev_c = 0.0;
        for i in 0..m {
            let l = if i > 0 { self.lower[i - 1] } else { 0.0 };
            let piv = self.diag[i] - l * prev_c;
            if piv == 0.0 || !piv.is_finite() {
                return Err(NumericsError::SingularPivot { row: i });
            }
            let inv = 1.0 / piv;
            inv_pivot.push(inv);
            if i + 1 < m {
                prev_c = self.upper[i] * inv;
                upper_mod.push(prev_c);
            }
        }
        Ok(TridiagonalLu { lower: self.lower.clone(), inv_pivot, upper_mod })
    }
}

/// Thomas-algorithm factorisation of a [`Tridiagonal`].
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    inv_pivot: Vec<f64>,
    upper_mod: Vec<f64>,
}

impl TridiagonalLu {
    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Overwrites `rhs` with the solution. `rhs` may be a strided view
    /// gathered by the caller; only its length is checked.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let m = self.len();
        debug_assert_eq!(rhs.len(), m);
        if m == 0 {
            return;
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..m {
            rhs[i] = (rhs[i] - self.lower[i - 1] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..m - 1).rev() {
            rhs[i] -= self.upper_mod[i] * rhs[i + 1];
        }
    }
}

pub fn thomas_solve(sys: &Tridiagonal, rhs: &[f64]) -> Result<Vec<f64>, NumericsError> {
    if rhs.len() != sys.len() {
        return Err(NumericsError::Length { expected: sys.len(), got: rhs.len() });
    }
    let lu = sys.factor()?;
    let mut x = rhs.to_vec();
    lu.solve_in_place(&mut x);
    Ok(x)
}
