use num_complex::Complex64;

use crate::contour::ContourGrid;
use crate::error::{invalid, Result};
use crate::CMatrix;

/// Dense `-D2 + diag(V(x_i))` on a uniform grid, with `D2` the fourth-order
/// centered stencil. Outside `[-L, L]` the wavefunction is taken to vanish
/// (Dirichlet closure), so boundary rows simply drop the ghost nodes. The
/// result is pentadiagonal.
pub fn discretize_schrodinger(
    potential: impl Fn(f64) -> Complex64,
    grid: &ContourGrid,
) -> Result<CMatrix> {
    let h = grid.spacing()?;
    let m = grid.count();
    if m < 64 {
        return Err(invalid(format!(
            "Schrodinger discretization needs at least 64 points, got {m}"
        )));
    }
    let s = 1.0 / (12.0 * h * h);
    // -D2 stencil: (f_{i-2} - 16 f_{i-1} + 30 f_i - 16 f_{i+1} + f_{i+2}) / (12 h^2)
    let stencil = [1.0 * s, -16.0 * s, 30.0 * s, -16.0 * s, 1.0 * s];
    let mut out = CMatrix::zeros(m, m);
    for (i, &x) in grid.nodes().iter().enumerate() {
        for (k, &w) in stencil.iter().enumerate() {
            let j = i as isize + k as isize - 2;
            if j >= 0 && (j as usize) < m {
                out[(i, j as usize)] += Complex64::new(w, 0.0);
            }
        }
        out[(i, i)] += potential(x);
    }
    Ok(out)
}
