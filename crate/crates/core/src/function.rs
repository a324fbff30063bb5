//! Non-negative vertex functions: per-vertex, radial about a root, and the
//! specifications they are built from.

use crate::ball::CoverBall;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::weight::Weight;

/// Per-vertex non-negative weights aligned with a graph's vertex indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction {
    values: Vec<Weight>,
}

impl VertexFunction {
    pub fn new(values: Vec<Weight>) -> Result<VertexFunction> {
        let values = values.into_iter().map(Weight::validated).collect::<Result<Vec<_>>>()?;
        Ok(VertexFunction { values })
    }

    pub fn zeros(n: usize) -> VertexFunction {
        VertexFunction {
            values: vec![Weight::zero(); n],
        }
    }

    pub fn constant(n: usize, value: Weight) -> Result<VertexFunction> {
        VertexFunction::new(vec![value; n])
    }

    pub fn ones(n: usize) -> VertexFunction {
        VertexFunction {
            values: vec![Weight::one(); n],
        }
    }

    pub fn delta(n: usize, v: usize) -> Result<VertexFunction> {
        VertexFunction::indicator(n, &[v])
    }

    pub fn indicator(n: usize, vertices: &[usize]) -> Result<VertexFunction> {
        let mut f = VertexFunction::zeros(n);
        for &v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange {
                    index: v,
                    vertex_count: n,
                });
            }
            f.values[v] = Weight::one();
        }
        Ok(f)
    }

    /// `f(v) = profile(dist(root, v))`, zero on vertices not reachable from the root.
    pub fn from_radial(g: &Graph, root: usize, profile: &RadialProfile) -> Result<VertexFunction> {
        g.check_vertex(root)?;
        let values = g
            .distances_from(root)
            .into_iter()
            .map(|d| d.map_or_else(Weight::zero, |d| profile.value(d)))
            .collect();
        Ok(VertexFunction { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> &Weight {
        &self.values[v]
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(Weight::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Weight::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| !self.values[v].is_zero()).collect()
    }

    pub fn check_aligned(&self, g: &Graph) -> Result<()> {
        if self.len() == g.vertex_count() {
            Ok(())
        } else {
            Err(Error::MisalignedFunction {
                expected: g.vertex_count(),
                got: self.len(),
            })
        }
    }

    /// Keeps `f` on the closed ball of radius `m` about `center`, zero elsewhere.
    pub fn truncate(&self, g: &Graph, center: usize, m: usize) -> Result<VertexFunction> {
        self.check_aligned(g)?;
        g.check_vertex(center)?;
        let values = g
            .distances_from(center)
            .into_iter()
            .zip(&self.values)
            .map(|(d, w)| match d {
                Some(d) if d <= m => w.clone(),
                _ => Weight::zero(),
            })
            .collect();
        Ok(VertexFunction { values })
    }

    /// Pull-back along a covering projection: `f~(x) = f(projection(x))`.
    pub fn lift(&self, projection: &[usize]) -> Result<VertexFunction> {
        let values = projection
            .iter()
            .map(|&v| {
                self.values.get(v).cloned().ok_or(Error::MisalignedFunction {
                    expected: v + 1,
                    got: self.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexFunction { values })
    }

    pub fn lift_to(&self, g: &Graph, cover: &CoverBall) -> Result<VertexFunction> {
        self.check_aligned(g)?;
        self.lift(cover.projection())
    }

    /// Zero outside `keep`.
    pub fn restrict(&self, keep: &[bool]) -> Result<VertexFunction> {
        if keep.len() != self.len() {
            return Err(Error::MisalignedVector {
                expected: self.len(),
                got: keep.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(keep)
            .map(|(w, &k)| if k { w.clone() } else { Weight::zero() })
            .collect();
        Ok(VertexFunction { values })
    }

    pub fn add(&self, other: &VertexFunction) -> Result<VertexFunction> {
        if other.len() != self.len() {
            return Err(Error::MisalignedFunction {
                expected: self.len(),
                got: other.len(),
            });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect();
        Ok(VertexFunction { values })
    }

    pub fn scale(&self, c: &Weight) -> VertexFunction {
        VertexFunction {
            values: self.values.iter().map(|w| w.mul(c)).collect(),
        }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &VertexFunction) -> bool {
        self.len() == other.len() && self.values.iter().zip(&other.values).all(|(a, b)| a.le(b))
    }

    /// Euclidean norm in double precision.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|w| w.to_f64().powi(2)).sum::<f64>().sqrt()
    }
}

/// A function of the distance to the root.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialProfile {
    /// `profile[n]` at distance `n`, zero beyond the end.
    Explicit(Vec<Weight>),
    /// `base^n` at distance `n`.
    Geometric(Weight),
}

impl RadialProfile {
    pub fn explicit(values: Vec<Weight>) -> Result<RadialProfile> {
        let values = values.into_iter().map(Weight::validated).collect::<Result<Vec<_>>>()?;
        Ok(RadialProfile::Explicit(values))
    }

    pub fn geometric(base: Weight) -> Result<RadialProfile> {
        let base = base.validated()?;
        if base.is_zero() {
            return Err(Error::InvalidParameter("geometric base must be positive".into()));
        }
        Ok(RadialProfile::Geometric(base))
    }

    /// Indicator of the sphere at distance `n`.
    pub fn shell(n: usize) -> RadialProfile {
        let mut values = vec![Weight::zero(); n + 1];
        values[n] = Weight::one();
        RadialProfile::Explicit(values)
    }

    pub fn value(&self, n: usize) -> Weight {
        match self {
            RadialProfile::Explicit(v) => v.get(n).cloned().unwrap_or_else(Weight::zero),
            RadialProfile::Geometric(c) => c.pow(n),
        }
    }

    /// `ln f(n)`, computed without materialising `base^n`.
    pub fn ln_value(&self, n: usize) -> f64 {
        match self {
            RadialProfile::Explicit(v) => v.get(n).map_or(f64::NEG_INFINITY, Weight::ln),
            RadialProfile::Geometric(c) => n as f64 * c.ln(),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            RadialProfile::Explicit(v) => v.iter().all(Weight::is_exact),
            RadialProfile::Geometric(c) => c.is_exact(),
        }
    }

    /// Largest distance carrying weight, `None` when the support is unbounded.
    pub fn support_radius(&self) -> Option<usize> {
        match self {
            RadialProfile::Explicit(v) => Some(v.iter().rposition(|w| !w.is_zero()).unwrap_or(0)),
            RadialProfile::Geometric(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RadialProfile::Explicit(v) => v.iter().all(Weight::is_zero),
            RadialProfile::Geometric(_) => false,
        }
    }

    /// Zero beyond distance `m`.
    pub fn truncate(&self, m: usize) -> RadialProfile {
        RadialProfile::Explicit((0..=m).map(|n| self.value(n)).collect())
    }

    pub fn scale(&self, c: &Weight) -> RadialProfile {
        RadialProfile::Explicit(match self {
            RadialProfile::Explicit(v) => v.iter().map(|w| w.mul(c)).collect(),
            RadialProfile::Geometric(_) => {
                panic!("scaling a geometric profile needs an explicit truncation first")
            }
        })
    }
}

/// How a function is described in files and on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Dense(Vec<Weight>),
    Radial(Vec<Weight>),
    Geometric(Weight),
    Indicator(Vec<usize>),
}

impl FunctionSpec {
    /// Per-vertex realisation; radial kinds are measured from `root`.
    pub fn resolve(&self, g: &Graph, root: usize) -> Result<VertexFunction> {
        match self {
            FunctionSpec::Dense(values) => {
                let f = VertexFunction::new(values.clone())?;
                f.check_aligned(g)?;
                Ok(f)
            }
            FunctionSpec::Indicator(vs) => VertexFunction::indicator(g.vertex_count(), vs),
            FunctionSpec::Radial(_) | FunctionSpec::Geometric(_) => {
                VertexFunction::from_radial(g, root, &self.radial()?)
            }
        }
    }

    pub fn radial(&self) -> Result<RadialProfile> {
        match self {
            FunctionSpec::Radial(values) => RadialProfile::explicit(values.clone()),
            FunctionSpec::Geometric(base) => RadialProfile::geometric(base.clone()),
            _ => Err(Error::NonRadial),
        }
    }
}
