use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Open,
    Periodic,
}

/// A cubic box `{0..L-1}^d` with `Q` orbitals per site.
///
/// Sites are numbered with the first axis varying slowest; the state index of
/// `(site, α)` is `site * Q + α`. Positions are measured from the origin site,
/// which sits at raw coordinate `L/2` on every axis, so positions lie in
/// `[-L/2, L/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteVolume {
    dim: usize,
    size: usize,
    orbitals: usize,
    boundary: Boundary,
}

impl FiniteVolume {
    pub fn new(dim: usize, size: usize, orbitals: usize, boundary: Boundary) -> Result<Self> {
        if dim == 0 || size == 0 || orbitals == 0 {
            return Err(Error::Dimension(format!(
                "volume needs positive dimension, size and orbital count (got d={dim}, L={size}, Q={orbitals})"
            )));
        }
        Ok(FiniteVolume {
            dim,
            size,
            orbitals,
            boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Linear size `L`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn orbitals(&self) -> usize {
        self.orbitals
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn num_sites(&self) -> usize {
        self.size.pow(self.dim as u32)
    }

    /// Hilbert-space dimension `Q · L^d`.
    pub fn num_states(&self) -> usize {
        self.num_sites() * self.orbitals
    }

    pub fn state_index(&self, site: usize, orbital: usize) -> usize {
        site * self.orbitals + orbital
    }

    pub fn site_of_state(&self, state: usize) -> usize {
        state / self.orbitals
    }

    /// Raw coordinates in `0..L`.
    pub fn coords(&self, site: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        let mut rest = site;
        for axis in (0..self.dim).rev() {
            c[axis] = rest % self.size;
            rest /= self.size;
        }
        c
    }

    fn site_from_coords(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.size + c)
    }

    pub fn origin_offset(&self) -> i64 {
        (self.size / 2) as i64
    }

    pub fn origin_site(&self) -> usize {
        self.site_from_coords(&vec![self.size / 2; self.dim])
    }

    /// Origin-centred integer position of a site.
    pub fn position(&self, site: usize) -> Vec<i64> {
        let o = self.origin_offset();
        self.coords(site).into_iter().map(|c| c as i64 - o).collect()
    }

    /// Site at an origin-centred position; wraps for periodic volumes and
    /// returns `None` outside an open volume.
    pub fn site_at(&self, position: &[i64]) -> Option<usize> {
        let l = self.size as i64;
        let o = self.origin_offset();
        let mut raw = Vec::with_capacity(self.dim);
        for &p in position {
            let c = p + o;
            match self.boundary {
                Boundary::Open if !(0..l).contains(&c) => return None,
                Boundary::Open => raw.push(c as usize),
                Boundary::Periodic => raw.push(c.rem_euclid(l) as usize),
            }
        }
        Some(self.site_from_coords(&raw))
    }

    /// Site reached from `site` by the displacement `u`.
    pub fn translate(&self, site: usize, u: &[i64]) -> Option<usize> {
        let p: Vec<i64> = self
            .position(site)
            .iter()
            .zip(u)
            .map(|(a, b)| a + b)
            .collect();
        self.site_at(&p)
    }

    /// Displacement `x - y`, reduced to the minimal image for periodic volumes
    /// (components in `(-L/2, L/2]`).
    pub fn displacement(&self, x: usize, y: usize) -> Vec<i64> {
        let l = self.size as i64;
        self.position(x)
            .iter()
            .zip(self.position(y))
            .map(|(a, b)| {
                let d = a - b;
                match self.boundary {
                    Boundary::Open => d,
                    Boundary::Periodic => {
                        let r = d.rem_euclid(l);
                        if 2 * r > l {
                            r - l
                        } else {
                            r
                        }
                    }
                }
            })
            .collect()
    }
}

/// The set of sites over which traces per unit volume are averaged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Core(Vec<usize>);

impl Core {
    pub fn from_sites(vol: &FiniteVolume, sites: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Argument("core region is empty".into()));
        }
        if let Some(s) = sites.iter().find(|&&s| s >= vol.num_sites()) {
            return Err(Error::Argument(format!(
                "core site {s} outside a volume of {} sites",
                vol.num_sites()
            )));
        }
        Ok(Core(sites))
    }

    /// Central sub-box of linear size `max(1, round(fraction · L))`.
    pub fn central(vol: &FiniteVolume, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::Argument(format!(
                "core fraction {fraction} outside (0, 1]"
            )));
        }
        let l = vol.size();
        let side = ((fraction * l as f64).round() as usize).clamp(1, l);
        let start = (l - side) / 2;
        let sites = (0..vol.num_sites())
            .filter(|&s| vol.coords(s).iter().all(|&c| c >= start && c < start + side))
            .collect();
        Core::from_sites(vol, sites)
    }

    pub fn all(vol: &FiniteVolume) -> Self {
        Core((0..vol.num_sites()).collect())
    }

    pub fn origin(vol: &FiniteVolume) -> Self {
        Core(vec![vol.origin_site()])
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// State indices of every orbital on every core site.
    pub fn states(&self, vol: &FiniteVolume) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&s| (0..vol.orbitals()).map(move |a| vol.state_index(s, a)))
            .collect()
    }
}
