//! Double-description conversion between H- and V-representations.
//!
//! Both directions run the same cone routine: `vrep` on the homogenized
//! cone `{(x, t) : a.x - b t >= 0, t >= 0}`, `hrep` on the dual cone of
//! the lifted generators `(v, 1)`, `(r, 0)`, `±(l, 0)`. Rays are kept as
//! primitive integer vectors and adjacency is tested combinatorially on
//! zero sets, which is exact for the minimal ray sets the iteration keeps.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Constraint, HPolyhedron, DEFAULT_DIM_CAP};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{dot, fmt_mat, primitive, zeros, Rat};

/// `conv(vertices) + cone(rays) + span(lineality)`.
///
/// Vertices and rays are reduced modulo the lineality space by orthogonal
/// projection, so they lie in its orthogonal complement.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct VRep {
    pub dim: usize,
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
    pub lineality: Vec<Vec<Rat>>,
}

#[derive(Serialize)]
pub struct VRepJson {
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    pub lineality: Vec<Vec<String>>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn to_json(&self) -> VRepJson {
        VRepJson {
            vertices: fmt_mat(&self.vertices),
            rays: fmt_mat(&self.rays),
            lineality: fmt_mat(&self.lineality),
        }
    }

    pub fn hrep(&self) -> Result<HPolyhedron> {
        self.hrep_capped(DEFAULT_DIM_CAP)
    }

    pub fn hrep_capped(&self, cap: usize) -> Result<HPolyhedron> {
        let d = self.dim;
        if d > cap {
            return Err(Error::DimensionCap { dim: d, cap });
        }
        if self.vertices.is_empty() {
            return Ok(HPolyhedron::empty(d));
        }
        let lift = |v: &[Rat], t: Rat| {
            let mut w = v.to_vec();
            w.push(t);
            w
        };
        let mut rows = Vec::new();
        for v in &self.vertices {
            rows.push(lift(v, Rat::one()));
        }
        for r in &self.rays {
            rows.push(lift(r, Rat::zero()));
        }
        for l in &self.lineality {
            rows.push(lift(l, Rat::zero()));
            rows.push(lift(&l.iter().map(|x| -x).collect::<Vec<_>>(), Rat::zero()));
        }
        let cone = cone_generators(&rows, d + 1);
        let mut p = HPolyhedron::universe(d);
        for y in &cone.rays {
            let (a, c) = y.split_at(d);
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            p.push_ineq(a.to_vec(), -c[0].clone());
        }
        for y in &cone.lineality {
            let (a, c) = y.split_at(d);
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            p.push_eq(a.to_vec(), -c[0].clone());
        }
        Ok(p)
    }

    /// Sum of the generator sets, i.e. a V-representation of `self + other`
    /// before any reduction.
    pub fn minkowski_sum(&self, other: &VRep) -> VRep {
        let mut vertices = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                vertices.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        VRep {
            dim: self.dim,
            vertices,
            rays: self.rays.iter().chain(&other.rays).cloned().collect(),
            lineality: self
                .lineality
                .iter()
                .chain(&other.lineality)
                .cloned()
                .collect(),
        }
    }
}

impl HPolyhedron {
    pub fn vrep(&self) -> Result<VRep> {
        self.vrep_capped(DEFAULT_DIM_CAP)
    }

    pub fn vrep_capped(&self, cap: usize) -> Result<VRep> {
        let d = self.dim;
        if d > cap {
            return Err(Error::DimensionCap { dim: d, cap });
        }
        let homog = |c: &Constraint| {
            let mut a = c.phi.0.clone();
            a.push(-c.rhs.clone());
            a
        };
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        let mut t = zeros(d + 1);
        t[d] = Rat::one();
        rows.push(t);
        for c in &self.ineqs {
            rows.push(homog(c));
        }
        for c in &self.eqs {
            let a = homog(c);
            rows.push(a.iter().map(|x| -x).collect());
            rows.push(a);
        }
        let cone = cone_generators(&rows, d + 1);
        let lineality: Vec<Vec<Rat>> = cone.lineality.iter().map(|l| l[..d].to_vec()).collect();
        let basis = independent(&lineality, d);
        let mut vertices = BTreeSet::new();
        let mut rays = BTreeSet::new();
        for g in &cone.rays {
            let (x, t) = g.split_at(d);
            if t[0].is_positive() {
                let v: Vec<Rat> = x.iter().map(|xi| xi / &t[0]).collect();
                vertices.insert(linalg::project_out(&v, &basis));
            } else {
                let r = primitive(&linalg::project_out(x, &basis));
                if !r.iter().all(Zero::is_zero) {
                    rays.insert(r);
                }
            }
        }
        if vertices.is_empty() {
            return Ok(VRep {
                dim: d,
                ..VRep::default()
            });
        }
        Ok(VRep {
            dim: d,
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
            lineality: basis.iter().map(|v| primitive(v)).collect(),
        })
    }
}

fn independent(vectors: &[Vec<Rat>], d: usize) -> Vec<Vec<Rat>> {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for v in vectors {
        let mut cand = basis.clone();
        cand.push(v.clone());
        if linalg::rank(&cand, d) == cand.len() {
            basis = cand;
        }
    }
    basis
}

pub(crate) struct ConeGenerators {
    pub rays: Vec<Vec<Rat>>,
    pub lineality: Vec<Vec<Rat>>,
}

struct Ray {
    v: Vec<Rat>,
    zeros: Vec<bool>,
}

/// Generators of `{y : row . y >= 0 for every row}` in dimension `d`.
pub(crate) fn cone_generators(rows: &[Vec<Rat>], d: usize) -> ConeGenerators {
    let mut lineality: Vec<Vec<Rat>> = (0..d)
        .map(|i| {
            let mut e = zeros(d);
            e[i] = Rat::one();
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed: Vec<usize> = Vec::new();

    for (k, a) in rows.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l = lineality.remove(pos);
            if dot(a, &l).is_negative() {
                l = l.iter().map(|x| -x).collect();
            }
            let al = dot(a, &l);
            for m in lineality.iter_mut() {
                let f = dot(a, m) / &al;
                if !f.is_zero() {
                    *m = m.iter().zip(&l).map(|(x, y)| x - &f * y).collect();
                }
            }
            for r in rays.iter_mut() {
                let f = dot(a, &r.v) / &al;
                if !f.is_zero() {
                    r.v = primitive(
                        &r.v.iter()
                            .zip(&l)
                            .map(|(x, y)| x - &f * y)
                            .collect::<Vec<_>>(),
                    );
                }
                r.zeros.push(true);
            }
            let mut zs = vec![false; processed.len()];
            for (z, &j) in zs.iter_mut().zip(&processed) {
                *z = dot(&rows[j], &l).is_zero();
            }
            zs.push(false);
            rays.push(Ray {
                v: primitive(&l),
                zeros: zs,
            });
            processed.push(k);
            continue;
        }

        let vals: Vec<Rat> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut z = r.zeros.clone();
                z.push(vals[i].is_zero());
                next.push(Ray {
                    v: r.v.clone(),
                    zeros: z,
                });
            }
        }
        let pointed_dim = d - lineality.len();
        for &p in &plus {
            for &m in &minus {
                let common: Vec<bool> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[m].zeros)
                    .map(|(x, y)| *x && *y)
                    .collect();
                if pointed_dim >= 2 && common.iter().filter(|&&z| z).count() + 2 < pointed_dim {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|o| {
                    o == p || o == m || !common.iter().zip(&rays[o].zeros).all(|(c, z)| !*c || *z)
                });
                if !adjacent {
                    continue;
                }
                let (vp, vm) = (&vals[p], &vals[m]);
                let w: Vec<Rat> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[m].v)
                    .map(|(x, y)| -vm * x + vp * y)
                    .collect();
                let mut z = common;
                z.push(true);
                next.push(Ray {
                    v: primitive(&w),
                    zeros: z,
                });
            }
        }
        rays = next;
        processed.push(k);
    }
    ConeGenerators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    }
}
