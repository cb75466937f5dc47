//! Ladder transition operators and the bang-bang decoupling group.
//!
//! Levels are labelled `0..n`. Transition `k` couples `|k>` and `|k+1>`.
//! `sigma_z(n, k)` carries `+1` on level `k+1` and `-1` on level `k`.
//!
//! The group is `{I, g, g^2, ..., g^(n-1)}` where
//! `g = exp(i X_0 pi/2) exp(i X_1 pi/2) ... exp(i X_(n-2) pi/2)` is taken as
//! a left-to-right matrix product. With that order `g |k> = i |k+1 mod n>`,
//! so conjugating a diagonal operator by `g^m` cyclically shifts its
//! diagonal by `m` and the group average of any traceless diagonal
//! operator vanishes.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::Operator;

/// Entrywise tolerance used for "zero" and "unitary" checks.
pub const ALGEBRA_TOL: f64 = 1e-12;

fn check_level(n: usize, k: usize) -> Result<()> {
    if n < 2 || k + 2 > n {
        return Err(Error::LevelIndex { n, k });
    }
    Ok(())
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension(format!("atom dimension must be >= 2, got {n}")));
    }
    Ok(())
}

/// `|k><k+1| + |k+1><k|`.
pub fn sigma_x(n: usize, k: usize) -> Result<Operator> {
    check_level(n, k)?;
    let mut op = Operator::zeros(n);
    op.set(k, k + 1, C64::new(1.0, 0.0));
    op.set(k + 1, k, C64::new(1.0, 0.0));
    Ok(op)
}

/// `|k+1><k+1| - |k><k|`.
pub fn sigma_z(n: usize, k: usize) -> Result<Operator> {
    check_level(n, k)?;
    let mut op = Operator::zeros(n);
    op.set(k + 1, k + 1, C64::new(1.0, 0.0));
    op.set(k, k, C64::new(-1.0, 0.0));
    Ok(op)
}

/// Closed form of `exp(i X_k pi/2)`: identity off the `{k, k+1}` block and
/// `i X` on it.
pub fn exp_pi_half_x(n: usize, k: usize) -> Result<Operator> {
    check_level(n, k)?;
    let mut op = Operator::identity(n);
    let i = C64::new(0.0, 1.0);
    op.set(k, k, C64::new(0.0, 0.0));
    op.set(k + 1, k + 1, C64::new(0.0, 0.0));
    op.set(k, k + 1, i);
    op.set(k + 1, k, i);
    Ok(op)
}

/// The n-element decoupling group `{I, g_1, ..., g_(n-1)}` with
/// `g_m = g_1^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct BBGroup {
    dim: usize,
    elements: Vec<Operator>,
}

impl BBGroup {
    pub fn build(n: usize) -> Result<Self> {
        check_dim(n)?;
        let mut g1 = Operator::identity(n);
        for k in 0..n - 1 {
            g1 = g1.matmul(&exp_pi_half_x(n, k)?);
        }
        let mut elements = Vec::with_capacity(n);
        elements.push(Operator::identity(n));
        for _ in 1..n {
            let next = elements.last().expect("non-empty").matmul(&g1);
            elements.push(next);
        }
        Ok(Self { dim: n, elements })
    }

    /// A group of `n` identities. Pulses built from it are no-ops, which
    /// turns a pulsed evolution into free evolution.
    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            dim: n,
            elements: vec![Operator::identity(n); n],
        })
    }

    /// Wraps an explicit list of unitaries. The first element should be the
    /// identity for the cycle structure to close.
    pub fn from_elements(elements: Vec<Operator>) -> Result<Self> {
        let dim = elements.len();
        check_dim(dim)?;
        for (m, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::Dimension(format!(
                    "element {m} has dimension {}, expected {dim}",
                    e.dim()
                )));
            }
            if !e.is_unitary(ALGEBRA_TOL) {
                return Err(Error::Dimension(format!("element {m} is not unitary")));
            }
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn element(&self, m: usize) -> &Operator {
        &self.elements[m]
    }

    /// Pulse applied after segment `l` of a cycle (1-based): `g_l g_(l-1)^dagger`
    /// for `l < n` and `g_(n-1)^dagger` closing the cycle.
    pub fn pulse_after_segment(&self, l: usize) -> Operator {
        assert!((1..=self.dim).contains(&l), "segment index {l} out of 1..={}", self.dim);
        if l == self.dim {
            self.elements[self.dim - 1].dagger()
        } else {
            self.elements[l].matmul(&self.elements[l - 1].dagger())
        }
    }

    /// `(1/|G|) sum_m g_m^dagger op g_m`.
    pub fn average(&self, op: &Operator) -> Result<Operator> {
        if op.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "operator dimension {} does not match group dimension {}",
                op.dim(),
                self.dim
            )));
        }
        let mut acc = Operator::zeros(self.dim);
        for g in &self.elements {
            acc = &acc + &g.dagger().matmul(op).matmul(g);
        }
        Ok(acc.scale(C64::new(1.0 / self.elements.len() as f64, 0.0)))
    }
}

pub fn build_bb_group(n: usize) -> Result<BBGroup> {
    BBGroup::build(n)
}

pub fn group_average(group: &BBGroup, op: &Operator) -> Result<Operator> {
    group.average(op)
}

/// Residuals of the decoupling condition, one per transition.
#[derive(Clone, Debug, PartialEq)]
pub struct DecouplingReport {
    pub n: usize,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
}

impl DecouplingReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|&r| r <= self.tolerance)
    }

    pub fn worst(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Group-averages every `sigma_z(n, i)` and reports the largest surviving
/// entry for each transition.
pub fn verify_decoupling(n: usize) -> Result<DecouplingReport> {
    let group = BBGroup::build(n)?;
    let residuals = (0..n - 1)
        .map(|i| Ok(group.average(&sigma_z(n, i)?)?.max_abs()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DecouplingReport {
        n,
        residuals,
        tolerance: ALGEBRA_TOL,
    })
}
