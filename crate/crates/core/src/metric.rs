use crate::order::AxiomDefect;
use crate::rational::{tsub, Rational};

/// A finite metric space with points `0..len()`.
pub trait MetricSpace {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn d(&self, i: usize, j: usize) -> &Rational;

    /// Distance from `(i,j)` to the diagonal under the max metric:
    /// `min_z max(d(i,z), d(j,z))`.
    fn d_delta(&self, i: usize, j: usize) -> Rational {
        (0..self.len())
            .map(|z| self.d(i, z).max(self.d(j, z)))
            .min()
            .cloned()
            .expect("structure is nonempty")
    }

    /// `min(d_delta(x,y), d_delta(y,z), d_delta(z,x))`.
    fn d_delta3(&self, x: usize, y: usize, z: usize) -> Rational {
        self.d_delta(x, y).min(self.d_delta(y, z)).min(self.d_delta(z, x))
    }

    /// `d(x,z) ∸ max(d(x,y), d(y,z))` maximized over all triples.
    fn ultrametric_axiom(&self) -> AxiomDefect {
        let n = self.len();
        let mut um = AxiomDefect::new("um");
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let v = tsub(self.d(x, z), self.d(x, y).max(self.d(y, z)));
                    um.offer(v, &[x, y, z]);
                }
            }
        }
        um
    }

    fn ultrametric_defect(&self) -> Rational {
        self.ultrametric_axiom().value
    }

    /// The largest distance and the first pair `(a,b)`, `a < b`, attaining it.
    fn diameter(&self) -> (Rational, usize, usize) {
        let mut best = (Rational::from_integer(0.into()), 0, 0);
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if *self.d(a, b) > best.0 {
                    best = (self.d(a, b).clone(), a, b);
                }
            }
        }
        best
    }
}
