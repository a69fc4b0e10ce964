//! Hypercubic lattices in one to three dimensions, their nearest-neighbor
//! bonds, and the discrete momentum grid of a periodic box.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    /// Open edges. For the one-magnon problem this is the Neumann Laplacian.
    Free,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Free => write!(f, "free"),
            Boundary::Periodic => write!(f, "periodic"),
        }
    }
}

/// The three numbers that determine a lattice, parsable from strings such
/// as `d=3,L=2,bc=free`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub dim: usize,
    pub side: usize,
    pub boundary: Boundary,
}

impl LatticeSpec {
    pub fn new(dim: usize, side: usize, boundary: Boundary) -> Self {
        LatticeSpec {
            dim,
            side,
            boundary,
        }
    }

    pub fn build(&self) -> Result<Lattice> {
        Lattice::new(self.dim, self.side, self.boundary)
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={},L={},bc={}", self.dim, self.side, self.boundary)
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut dim = None;
        let mut side = None;
        let mut boundary = None;
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got `{item}`")))?;
            let value = value.trim();
            match key.trim() {
                "d" | "dim" => {
                    dim = Some(value.parse::<usize>().map_err(|_| {
                        Error::Config(format!("dimension `{value}` is not an integer"))
                    })?)
                }
                "L" | "side" => {
                    side = Some(value.parse::<usize>().map_err(|_| {
                        Error::Config(format!("side `{value}` is not an integer"))
                    })?)
                }
                "bc" => {
                    boundary = Some(match value.to_ascii_lowercase().as_str() {
                        "free" | "open" | "neumann" => Boundary::Free,
                        "periodic" | "pbc" => Boundary::Periodic,
                        other => return Err(Error::Config(format!("unknown boundary `{other}`"))),
                    })
                }
                other => return Err(Error::Config(format!("unknown lattice key `{other}`"))),
            }
        }
        let spec = LatticeSpec {
            dim: dim.ok_or_else(|| Error::Config("lattice spec is missing d=".into()))?,
            side: side.ok_or_else(|| Error::Config("lattice spec is missing L=".into()))?,
            boundary: boundary.unwrap_or(Boundary::Free),
        };
        // validate eagerly so a bad spec never reaches a computation
        Lattice::validate(spec.dim, spec.side, spec.boundary)?;
        Ok(spec)
    }
}

/// A `side^dim` box of sites with nearest-neighbor bonds.
///
/// Sites are ordered lexicographically by coordinate (first axis most
/// significant) and bonds are stored as sorted `(i, j)` pairs with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    spec: LatticeSpec,
    sites: Vec<[usize; 3]>,
    bonds: Vec<(usize, usize)>,
}

impl Lattice {
    pub fn new(dim: usize, side: usize, boundary: Boundary) -> Result<Self> {
        Self::validate(dim, side, boundary)?;
        let n = side.pow(dim as u32);
        let sites: Vec<[usize; 3]> = (0..n)
            .map(|index| {
                let mut coord = [0usize; 3];
                let mut rest = index;
                for axis in (0..dim).rev() {
                    coord[axis] = rest % side;
                    rest /= side;
                }
                coord
            })
            .collect();

        let mut bonds = Vec::with_capacity(dim * n);
        for (i, coord) in sites.iter().enumerate() {
            for axis in 0..dim {
                let next = coord[axis] + 1;
                let neighbor_coord = match boundary {
                    Boundary::Free if next >= side => continue,
                    Boundary::Free => next,
                    Boundary::Periodic => next % side,
                };
                let mut c = *coord;
                c[axis] = neighbor_coord;
                let j = Self::index_of(dim, side, &c);
                bonds.push((i.min(j), i.max(j)));
            }
        }
        bonds.sort_unstable();
        bonds.dedup();

        Ok(Lattice {
            spec: LatticeSpec::new(dim, side, boundary),
            sites,
            bonds,
        })
    }

    fn validate(dim: usize, side: usize, boundary: Boundary) -> Result<()> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidLattice(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if side == 0 {
            return Err(Error::InvalidLattice("side must be at least 1".into()));
        }
        if boundary == Boundary::Periodic && side < 3 {
            return Err(Error::InvalidLattice(format!(
                "periodic boundary needs side >= 3 to avoid doubled bonds, got {side}"
            )));
        }
        Ok(())
    }

    fn index_of(dim: usize, side: usize, coord: &[usize; 3]) -> usize {
        coord[..dim].iter().fold(0, |acc, &c| acc * side + c)
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn side(&self) -> usize {
        self.spec.side
    }

    pub fn boundary(&self) -> Boundary {
        self.spec.boundary
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[[usize; 3]] {
        &self.sites
    }

    pub fn coordinates(&self, site: usize) -> &[usize] {
        &self.sites[site][..self.spec.dim]
    }

    pub fn bonds(&self) -> &[(usize, usize)] {
        &self.bonds
    }

    /// Squared separation of two sites; minimal image for periodic boxes.
    pub fn distance_squared(&self, a: usize, b: usize) -> f64 {
        let side = self.spec.side as i64;
        (0..self.spec.dim)
            .map(|axis| {
                let mut delta = (self.sites[a][axis] as i64 - self.sites[b][axis] as i64).abs();
                if self.spec.boundary == Boundary::Periodic {
                    delta = delta.min(side - delta);
                }
                (delta * delta) as f64
            })
            .sum()
    }

    /// Adjacency (graph) Laplacian `Σ_bonds (e_x − e_y)(e_x − e_y)^T` as a
    /// dense row-major matrix.
    pub fn graph_laplacian(&self) -> Vec<Vec<f64>> {
        let n = self.num_sites();
        let mut lap = vec![vec![0.0; n]; n];
        for &(x, y) in &self.bonds {
            lap[x][x] += 1.0;
            lap[y][y] += 1.0;
            lap[x][y] -= 1.0;
            lap[y][x] -= 1.0;
        }
        lap
    }
}

/// Momenta `k = (2π/L) n` with `n_i ∈ {0, …, L−1}`, stored as integer
/// vectors so that membership and the `k = 0` test are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentumGrid {
    dim: usize,
    side: usize,
    labels: Vec<[usize; 3]>,
}

impl MomentumGrid {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[[usize; 3]] {
        &self.labels
    }

    /// Index of the zero momentum. Lexicographic order puts it first.
    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn is_zero(&self, index: usize) -> bool {
        self.labels[index].iter().all(|&n| n == 0)
    }

    pub fn momentum(&self, index: usize) -> Vec<f64> {
        self.labels[index][..self.dim]
            .iter()
            .map(|&n| 2.0 * PI * n as f64 / self.side as f64)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |i| self.momentum(i))
    }
}

pub fn momentum_grid(lattice: &Lattice) -> MomentumGrid {
    let dim = lattice.dim();
    let side = lattice.side();
    MomentumGrid {
        dim,
        side,
        labels: lattice.sites().to_vec(),
    }
}
