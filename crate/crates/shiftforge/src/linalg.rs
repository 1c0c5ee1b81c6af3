//! Minimal dense real linear algebra for the small systems this crate
//! meets: Newton steps in ≤ 3 variables, basis refactorization in the
//! simplex, least-squares fallbacks on a handful of support points.

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting.  Returns `None` when a pivot vanishes (singular to working
/// precision).
pub(crate) fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut x = b.to_vec();
    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|u, v| u.1.total_cmp(&v.1))?;
        if piv_abs < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        x.swap(col, piv);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            if factor != 0.0 {
                for c in col..n {
                    m[r][c] -= factor * m[col][c];
                }
                x[r] -= factor * x[col];
            }
        }
    }
    for col in (0..n).rev() {
        x[col] /= m[col][col];
        for r in 0..col {
            x[r] -= m[r][col] * x[col];
        }
    }
    Some(x)
}

/// Inverts a square matrix by Gauss–Jordan with partial pivoting.
pub(crate) fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let (piv, piv_abs) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|u, v| u.1.total_cmp(&v.1))?;
        if piv_abs < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for c in 0..n {
            m[col][c] /= d;
            inv[col][c] /= d;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r][col];
                if factor != 0.0 {
                    for c in 0..n {
                        m[r][c] -= factor * m[col][c];
                        inv[r][c] -= factor * inv[col][c];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Least-squares solution of `a x ≈ b` (any shape) via the normal
/// equations, with a tiny ridge retried on singular systems.  The systems
/// here are small and well scaled; callers judge quality by the residual.
pub(crate) fn lstsq(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    if n == 0 {
        return Vec::new();
    }
    let mut ata = vec![vec![0.0; n]; n];
    let mut atb = vec![0.0; n];
    for (row, &bi) in a.iter().zip(b) {
        for i in 0..n {
            atb[i] += row[i] * bi;
            for j in i..n {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            ata[i][j] = ata[j][i];
        }
    }
    let scale = (0..n).map(|i| ata[i][i]).fold(0.0f64, f64::max).max(1e-300);
    let mut ridge = 0.0;
    loop {
        let mut reg = ata.clone();
        for (i, row) in reg.iter_mut().enumerate() {
            row[i] += ridge;
        }
        if let Some(x) = solve_square(&reg, &atb) {
            return x;
        }
        ridge = if ridge == 0.0 { scale * 1e-12 } else { ridge * 100.0 };
        if ridge > scale {
            return vec![0.0; n];
        }
    }
}
