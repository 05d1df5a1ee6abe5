use alloc::vec::Vec;

use rand::Rng;

use crate::error::{param_err, Result};
use crate::point::{norm, Point};
use crate::solvers::{solve_multicut_subproblem, Cut};

/// `F(x) = max_j ℓ_j(x)` with every piece anchored at the minimizer.
///
/// Random instances contain the `2n` pieces `F* ± α⟨eᵢ, x − x*⟩`, so that
/// `F(x) ≥ F* + α‖x − x*‖_∞ ≥ F* + (α/√n)‖x − x*‖`, plus extra pieces that are
/// strictly or weakly below `F*` at `x*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxAffine {
    center: Point,
    f_star: f64,
    pieces: Vec<Cut>,
}

impl MaxAffine {
    /// Random instance with `m ≥ 2n` pieces. Extra pieces have slopes uniform
    /// in `[−α, α]ⁿ` and sit up to `α/2` below `F*` at the center.
    pub fn random<R: Rng>(center: Point, f_star: f64, m: usize, alpha: f64, rng: &mut R) -> Result<Self> {
        let n = center.dim();
        if m < 2 * n {
            return Err(param_err("m", "max_affine needs at least 2n pieces to certify sharpness"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(param_err("alpha", "must be positive and finite"));
        }
        let mut pieces = Vec::with_capacity(m);
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut g = alloc::vec![0.0; n];
                g[i] = sign * alpha;
                pieces.push(Cut {
                    z: center.clone(),
                    fz: f_star,
                    g: Point::from_vec_unchecked(g),
                });
            }
        }
        for _ in 2 * n..m {
            let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-alpha..=alpha)).collect();
            let drop = rng.gen_range(0.0..=0.5 * alpha);
            pieces.push(Cut {
                z: center.clone(),
                fz: f_star - drop,
                g: Point::from_vec_unchecked(g),
            });
        }
        Ok(Self {
            center,
            f_star,
            pieces,
        })
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Affine pieces.
    pub fn pieces(&self) -> &[Cut] {
        &self.pieces
    }

    /// Largest slope norm, a global Lipschitz constant.
    pub fn lipschitz(&self) -> f64 {
        self.pieces.iter().map(|c| norm(&c.g)).fold(0.0, f64::max)
    }

    /// Objective value.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|c| c.eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Value and the slope of the lowest-index active piece; zero at the
    /// minimizer itself.
    pub fn evaluate(&self, x: &[f64]) -> (f64, Vec<f64>) {
        if x == &self.center[..] {
            return (self.f_star, alloc::vec![0.0; x.len()]);
        }
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (j, c) in self.pieces.iter().enumerate() {
            let v = c.eval(x);
            if v > best_val {
                best = j;
                best_val = v;
            }
        }
        (best_val, self.pieces[best].g.to_vec())
    }

    /// Prox as the bundle subproblem with all pieces and weight `1/ρ`.
    pub fn prox(&self, x: &[f64], rho: f64) -> Result<Vec<f64>> {
        solve_multicut_subproblem(&self.pieces, x, 1.0 / rho).map(|s| s.z.into_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn instance(seed: u64) -> MaxAffine {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        MaxAffine::random(Point::new(vec![0.3, -0.2]).unwrap(), 1.5, 6, 1.0, &mut rng).unwrap()
    }

    #[test]
    fn minimum_at_center() {
        let f = instance(7);
        assert_eq!(f.value(&[0.3, -0.2]), 1.5);
        assert_eq!(f.evaluate(&[0.3, -0.2]).1, vec![0.0, 0.0]);
    }

    #[test]
    fn too_few_pieces() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(MaxAffine::random(Point::zeros(3), 0.0, 5, 1.0, &mut rng).is_err());
    }

    #[test]
    fn lowest_index_tie_break() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = MaxAffine::random(Point::zeros(2), 0.0, 4, 1.0, &mut rng).unwrap();
        // pieces are +e1, -e1, +e2, -e2; on the diagonal +e1 and +e2 tie
        assert_eq!(f.evaluate(&[0.5, 0.5]), (0.5, vec![1.0, 0.0]));
        assert_eq!(f.evaluate(&[-0.5, 0.5]), (0.5, vec![-1.0, 0.0]));
    }
}
