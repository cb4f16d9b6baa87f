use super::HarnessError;
use crate::schemes::Trajectory;
use crate::spatial::{norm_l2, Field2D};

/// `max_n |U^n(tau) - U^{2n}(tau/2)|` in the discrete L2 norm; `fine` must
/// have exactly twice the steps of `coarse` on the same grid.
pub fn time_error_between(coarse: &Trajectory, fine: &Trajectory) -> Result<f64, HarnessError> {
    let (a, b) = if coarse.levels.len() <= fine.levels.len() { (coarse, fine) } else { (fine, coarse) };
    let n = a.levels.len() - 1;
    if b.levels.len() - 1 != 2 * n || a.levels[0].grid() != b.levels[0].grid() {
        return Err(HarnessError::Ladder("time error needs runs at N and 2N on one grid".into()));
    }
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let mut d = a.levels[k].clone();
        d.axpy(-1.0, &b.levels[2 * k]);
        worst = worst.max(norm_l2(&d));
    }
    Ok(worst)
}

/// Final-time difference at coinciding nodes `(i, j)` / `(2i, 2j)`, measured
/// with the coarse mesh widths.
pub fn space_error_between(coarse: &Field2D, fine: &Field2D) -> Result<f64, HarnessError> {
    let (a, b) = if coarse.grid().m1 <= fine.grid().m1 { (coarse, fine) } else { (fine, coarse) };
    let (ga, gb) = (a.grid(), b.grid());
    if gb.m1 != 2 * ga.m1 || gb.m2 != 2 * ga.m2 || ga.refined() != *gb {
        return Err(HarnessError::Ladder("space error needs grids M and 2M on one domain".into()));
    }
    let mut d = Field2D::zeros(*ga);
    for i in 1..ga.m1 {
        for j in 1..ga.m2 {
            d.set(i, j, a.get(i, j) - b.get(2 * i, 2 * j));
        }
    }
    Ok(norm_l2(&d))
}

/// `log2(coarser / finer)`
pub fn rate(coarser: f64, finer: f64) -> Result<f64, HarnessError> {
    if !(coarser > 0.0) || !(finer > 0.0) {
        return Err(HarnessError::Rate(coarser, finer));
    }
    Ok((coarser / finer).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_examples() {
        assert!((rate(4e-3, 1e-3).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(rate(0.3, 0.3).unwrap(), 0.0);
        assert!(rate(0.0, 1.0).is_err());
        assert!(rate(1.0, -1.0).is_err());
    }
}
