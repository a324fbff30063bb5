use nalgebra::{DMatrix, DVector};

use super::{IdentityReport, ARITHMETIC_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::{Graph, Side};
use crate::spectral::adjacency_norm;

const NORM_TOL: f64 = 1e-12;
const NORM_MAX_ITER: usize = 1_000_000;
const CONDITION_LIMIT: f64 = 1e13;

pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    DMatrix::from_fn(g.vertex_count(), g.vertex_count(), |i, j| g.has_edge(i, j) as u8 as f64)
}

fn inverse(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let norm = m.norm();
    let inv = m.try_inverse().ok_or(Error::Singular)?;
    if inv.iter().all(|x| x.is_finite()) && norm * inv.norm() <= CONDITION_LIMIT {
        Ok(inv)
    } else {
        Err(Error::Singular)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Entrywise running sum of matrices with Neumaier compensation.
struct MatrixSum {
    sum: DMatrix<f64>,
    compensation: DMatrix<f64>,
}

impl MatrixSum {
    fn zeros(n: usize) -> MatrixSum {
        MatrixSum {
            sum: DMatrix::zeros(n, n),
            compensation: DMatrix::zeros(n, n),
        }
    }

    fn add(&mut self, m: &DMatrix<f64>) {
        for ((s, c), &x) in self.sum.iter_mut().zip(self.compensation.iter_mut()).zip(m.iter()) {
            let t = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - t) + x;
            } else {
                *c += (x - t) + *s;
            }
            *s = t;
        }
    }

    fn value(self) -> DMatrix<f64> {
        self.sum + self.compensation
    }
}

fn compare(name: &str, params: &[(&str, f64)], direct: &DMatrix<f64>, series: &DMatrix<f64>) -> IdentityReport {
    IdentityReport::new(
        name,
        params,
        max_abs(direct),
        max_abs(series),
        max_abs(&(direct - series)),
    )
}

/// `sum_{r <= n} z^{-r-1} A^r`, summed with compensation.
pub fn resolvent_partial_sum(a: &DMatrix<f64>, z: f64, n_terms: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let step = a / z;
    let mut power = DMatrix::identity(n, n) / z;
    let mut sum = MatrixSum::zeros(n);
    for _ in 0..=n_terms {
        sum.add(&power);
        power = &step * power;
    }
    sum.value()
}

/// `sum_{r < n} (z1 z2)^{-r} A^{2r} Z^{-1} + sum_{r < n} (z1 z2)^{-r-1} A^{2r+1}`.
pub fn biresolvent_partial_sum(a: &DMatrix<f64>, sides: &[Side], z1: f64, z2: f64, n_terms: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let zz = z1 * z2;
    let z_inv = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        sides.iter().map(|s| if *s == Side::U { 1.0 / z1 } else { 1.0 / z2 }),
    ));
    let step = a * a / zz;
    let mut even = DMatrix::identity(n, n);
    let mut sum = MatrixSum::zeros(n);
    for _ in 0..n_terms {
        sum.add(&(&even * &z_inv));
        sum.add(&(&even * a / zz));
        even = &step * even;
    }
    sum.value()
}

/// `(z - A)^{-1}` against `sum_{r <= n} z^{-r-1} A^r`.
///
/// Requires `|z| > ||A||`; the tail is `|z|^{-1} q^{n+1} / (1 - q)` with
/// `q = ||A|| / |z|`, which bounds every entry of the remainder.
pub fn verify_resolvent_series(g: &Graph, z: f64, n_terms: usize) -> Result<IdentityReport> {
    let norm = adjacency_norm(g, NORM_TOL, NORM_MAX_ITER)?;
    if !(z.abs() > norm) {
        return Err(Error::Precondition(format!(
            "|z| = {} must exceed ||A|| = {norm}",
            z.abs()
        )));
    }
    let n = g.vertex_count();
    let a = adjacency_matrix(g);
    let direct = inverse(DMatrix::identity(n, n) * z - &a)?;
    let series = resolvent_partial_sum(&a, z, n_terms);
    let q = norm / z.abs();
    let tail = q.powi(n_terms as i32 + 1) / ((1.0 - q) * z.abs());
    let mut report = compare("resolvent", &[("z", z)], &direct, &series);
    report.diagnostics.insert("adjacency_norm".into(), norm);
    Ok(report.judge(n_terms + 1, tail, ARITHMETIC_TOLERANCE))
}

/// `(1 - t^2)(I + t^2 (D - I) - t A)^{-1}` against `sum_{r <= n} t^r A_r`.
///
/// Each `A_r` is symmetric with row sums at most `Delta (Delta - 1)^{r-1}`,
/// which gives the tail bound; it is finite only when `|t| (Delta - 1) < 1`.
pub fn verify_nbw_generating(g: &Graph, t: f64, n_terms: usize) -> Result<IdentityReport> {
    let n = g.vertex_count();
    let delta = g.max_degree() as f64;
    let growth = t.abs() * (delta - 1.0).max(0.0);
    if growth >= 1.0 {
        return Err(Error::Precondition(format!(
            "|t| (max degree - 1) = {growth} must be below 1"
        )));
    }
    let a = adjacency_matrix(g);
    let degrees = DVector::from_iterator(n, g.degrees().into_iter().map(|d| d as f64));
    let d = DMatrix::from_diagonal(&degrees);
    let d_minus_i = &d - DMatrix::identity(n, n);
    let m = DMatrix::identity(n, n) + &d_minus_i * (t * t) - &a * t;
    let direct = inverse(m)? * (1.0 - t * t);

    // T_r = t^r A_r with the three-term recurrence for A_r
    let mut sum = MatrixSum::zeros(n);
    let mut prev = DMatrix::identity(n, n);
    sum.add(&prev);
    let mut cur = &a * t;
    for r in 1..=n_terms {
        sum.add(&cur);
        let correction = if r == 1 { &d * (t * t) } else { &d_minus_i * (t * t) };
        let next = &a * &cur * t - correction * &prev;
        prev = cur;
        cur = next;
    }
    let tail = if n_terms == 0 {
        delta * t.abs() / (1.0 - growth)
    } else {
        delta * t.abs() * growth.powi(n_terms as i32) / (1.0 - growth)
    };
    let report = compare("nbw-generating", &[("t", t)], &direct, &sum.value());
    Ok(report.judge(n_terms + 1, tail, ARITHMETIC_TOLERANCE))
}

/// `(Z - A)^{-1}` with `Z = z1 I_U + z2 I_W` against
/// `sum_{r < n} (z1 z2)^{-r} A^{2r} Z^{-1} + sum_{r < n} (z1 z2)^{-r-1} A^{2r+1}`.
///
/// Also records the gap in `Z^{-1} A Z^{-1} = (z1 z2)^{-1} A`, which holds
/// because `A` only joins opposite sides.
pub fn verify_biresolvent(g: &Graph, z1: f64, z2: f64, n_terms: usize) -> Result<IdentityReport> {
    let sides = g.sides().ok_or(Error::MissingBipartition)?;
    let norm = adjacency_norm(g, NORM_TOL, NORM_MAX_ITER)?;
    let zz = z1 * z2;
    if !(zz.abs() > norm * norm) {
        return Err(Error::Precondition(format!(
            "|z1 z2| = {} must exceed ||A||^2 = {}",
            zz.abs(),
            norm * norm
        )));
    }
    let n = g.vertex_count();
    let a = adjacency_matrix(g);
    let zdiag = DVector::from_iterator(n, sides.iter().map(|s| if *s == Side::U { z1 } else { z2 }));
    let z = DMatrix::from_diagonal(&zdiag);
    let z_inv = DMatrix::from_diagonal(&zdiag.map(|x| 1.0 / x));
    let direct = inverse(&z - &a)?;

    let lemma_gap = max_abs(&(&z_inv * &a * &z_inv - &a / zz));

    let series = biresolvent_partial_sum(&a, sides, z1, z2, n_terms);
    let q = norm * norm / zz.abs();
    let per_term = 1.0 / z1.abs().min(z2.abs()) + norm / zz.abs();
    let tail = q.powi(n_terms as i32) / (1.0 - q) * per_term;
    let mut report = compare("biresolvent", &[("z1", z1), ("z2", z2)], &direct, &series);
    report.diagnostics.insert("adjacency_norm".into(), norm);
    report.diagnostics.insert("lemma_gap".into(), lemma_gap);
    let mut report = report.judge(n_terms, tail, ARITHMETIC_TOLERANCE);
    if lemma_gap > ARITHMETIC_TOLERANCE {
        report.passes = false;
        report.notes.push("Z^-1 A Z^-1 differs from A / (z1 z2)".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, complete_graph, cycle_graph, path_graph, subdivision};

    #[test]
    fn resolvent_single_edge_closed_form() {
        let g = path_graph(2).unwrap();
        let report = verify_resolvent_series(&g, 2.0, 80).unwrap();
        assert!(report.passes);
        // (z^2 - 1)^{-1} [[z, 1], [1, z]] at z = 2
        assert!((report.lhs - 2.0 / 3.0).abs() < 1e-12);
        assert!(report.abs_gap < 1e-12);
    }

    #[test]
    fn resolvent_k4() {
        let report = verify_resolvent_series(&complete_graph(4).unwrap(), 4.0, 60).unwrap();
        assert!(report.passes);
        assert!(report.abs_gap <= 1e-8);
        assert!(report.abs_gap <= report.tail_bound + ARITHMETIC_TOLERANCE);
    }

    #[test]
    fn resolvent_near_spectrum_is_slow_but_bounded() {
        let g = complete_graph(4).unwrap();
        let report = verify_resolvent_series(&g, 3.03, 400).unwrap();
        assert!(report.passes);
        assert!(report.tail_bound > 1e-6);
        assert!(matches!(
            verify_resolvent_series(&g, 3.0, 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn nbw_generating_cases() {
        let r = verify_nbw_generating(&complete_graph(4).unwrap(), 0.0, 5).unwrap();
        assert_eq!(r.abs_gap, 0.0);
        assert!(r.passes);
        let r = verify_nbw_generating(&cycle_graph(6).unwrap(), 0.3, 80).unwrap();
        assert!(r.passes && r.abs_gap <= 1e-8);
        let r = verify_nbw_generating(&complete_bipartite(3, 4).unwrap(), 0.1, 60).unwrap();
        assert!(r.passes && r.abs_gap <= 1e-10);
        let r = verify_nbw_generating(&path_graph(2).unwrap(), 0.5, 3).unwrap();
        assert!(r.passes && r.abs_gap < 1e-14 && r.tail_bound == 0.0);
    }

    #[test]
    fn biresolvent_cases() {
        let g = path_graph(2).unwrap();
        let g = g.with_sides(g.two_coloring().unwrap()).unwrap();
        let r = verify_biresolvent(&g, 2.0, 3.0, 60).unwrap();
        assert!(r.passes && r.abs_gap < 1e-12);
        // (z1 z2 - 1)^{-1} [[z2, 1], [1, z1]]
        assert!((r.lhs - 3.0 / 5.0).abs() < 1e-12);

        let r = verify_biresolvent(&complete_bipartite(3, 4).unwrap(), 6.0, 5.0, 80).unwrap();
        assert!(r.passes && r.abs_gap <= 1e-8);
        assert!(r.diagnostics["lemma_gap"] < 1e-15);
        let r = verify_biresolvent(&subdivision(&complete_graph(4).unwrap()), 3.0, 4.0, 200).unwrap();
        assert!(r.passes);
    }

    #[test]
    fn biresolvent_errors() {
        let k4 = complete_graph(4).unwrap();
        assert_eq!(verify_biresolvent(&k4, 6.0, 5.0, 10), Err(Error::MissingBipartition));
        let k34 = complete_bipartite(3, 4).unwrap();
        assert!(matches!(
            verify_biresolvent(&k34, 3.0, 4.0, 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn doubling_terms_never_hurts() {
        let g = complete_bipartite(3, 4).unwrap();
        let a = verify_biresolvent(&g, 4.0, 4.0, 40).unwrap();
        let b = verify_biresolvent(&g, 4.0, 4.0, 80).unwrap();
        assert!(b.abs_gap <= a.abs_gap + 1e-14);
        let a = verify_resolvent_series(&g, 4.0, 40).unwrap();
        let b = verify_resolvent_series(&g, 4.0, 80).unwrap();
        assert!(b.abs_gap <= a.abs_gap + 1e-14);
    }
}
