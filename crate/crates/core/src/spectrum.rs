//! Adjacency spectra.

use std::io::Write;

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Eigenvalues of a graph's adjacency matrix, divided by `sqrt(n)`, in
/// descending order, with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Full dense symmetric eigendecomposition of the adjacency matrix.
    pub fn of(g: &Graph) -> Result<Spectrum> {
        let n = g.node_count();
        let mut a = Mat::<f64>::zeros(n, n);
        for &(u, v) in g.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        let raw = a
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Numeric(format!("eigensolver failed on n = {n}: {e:?}")))?;
        if raw.len() != n {
            return Err(Error::Numeric(format!(
                "eigensolver returned {} of {n} eigenvalues",
                raw.len()
            )));
        }
        let scale = (n as f64).sqrt();
        let mut eigenvalues = Vec::with_capacity(n);
        for value in raw {
            if !value.is_finite() {
                return Err(Error::Numeric("non-finite eigenvalue".into()));
            }
            eigenvalues.push(value / scale);
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { eigenvalues })
    }

    /// Wraps already-scaled eigenvalues (any order).
    pub fn from_scaled(mut eigenvalues: Vec<f64>) -> Result<Spectrum> {
        if eigenvalues.is_empty() {
            return Err(Error::DegenerateSample("empty spectrum".into()));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite eigenvalue".into()));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { eigenvalues })
    }

    /// Scaled eigenvalues, largest first.
    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues of the adjacency matrix itself.
    pub fn unscaled(&self) -> Vec<f64> {
        let scale = (self.len() as f64).sqrt();
        self.eigenvalues.iter().map(|x| x * scale).collect()
    }

    /// One eigenvalue per line after a comment header.
    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(
            sink,
            "# n={} scaling=1/sqrt(n) order=descending",
            self.len()
        )?;
        for x in &self.eigenvalues {
            writeln!(sink, "{x:?}")?;
        }
        sink.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn single_edge() {
        let s = Spectrum::of(&Graph::complete(2).unwrap()).unwrap();
        assert!(close(s.unscaled().as_slice(), &[1.0, -1.0], 1e-12));
        let r = 1.0 / 2f64.sqrt();
        assert!(close(s.values(), &[r, -r], 1e-12));
    }

    #[test]
    fn empty_graph_is_zero() {
        let s = Spectrum::of(&Graph::empty(5).unwrap()).unwrap();
        assert!(s.values().iter().all(|x| x.abs() < 1e-12));
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn four_cycle() {
        // 2 cos(2 pi k / 4), k = 0..3
        let s = Spectrum::of(&Graph::cycle(4).unwrap()).unwrap();
        assert!(close(&s.unscaled(), &[2.0, 0.0, 0.0, -2.0], 1e-12));
    }

    #[test]
    fn cycle_matches_cosine_formula() {
        let n = 9;
        let s = Spectrum::of(&Graph::cycle(n).unwrap()).unwrap();
        let mut expected: Vec<f64> = (0..n)
            .map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        assert!(close(&s.unscaled(), &expected, 1e-10));
    }

    #[test]
    fn complete_graph() {
        let s = Spectrum::of(&Graph::complete(6).unwrap()).unwrap();
        let mut expected = vec![-1.0; 6];
        expected[0] = 5.0;
        assert!(close(&s.unscaled(), &expected, 1e-10));
    }

    #[test]
    fn export_format() {
        let s = Spectrum::from_scaled(vec![-0.5, 0.5]).unwrap();
        let mut out = Vec::new();
        s.write_to(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "# n=2 scaling=1/sqrt(n) order=descending\n0.5\n-0.5\n"
        );
    }
}
