//! Seed meshes of convex polygons and nested uniform refinement.

use std::collections::HashMap;

use hotspots_core::bounds::TriParam;

use crate::FemError;

pub type Point = [f64; 2];

/// Domains the oracle knows how to mesh.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Triangle(TriParam),
    /// The triangle together with its mirror image in the x-axis.
    Kite(TriParam),
    /// Half-diagonals `1` (along x) and `h` (along y).
    Rhombus { h: f64 },
    Square { side: f64 },
    /// Convex polygon, counterclockwise.
    Polygon(Vec<Point>),
}

impl DomainSpec {
    /// Corners counterclockwise; side `i` runs from corner `i` to `i+1`.
    pub fn corners(&self) -> Vec<Point> {
        match self {
            DomainSpec::Triangle(t) => t.vertices().to_vec(),
            DomainSpec::Kite(t) => {
                let [l, r, apex] = t.vertices();
                vec![l, [apex[0], -apex[1]], r, apex]
            }
            DomainSpec::Rhombus { h } => vec![[-1.0, 0.0], [0.0, -h], [1.0, 0.0], [0.0, *h]],
            DomainSpec::Square { side } => vec![[0.0, 0.0], [*side, 0.0], [*side, *side], [0.0, *side]],
            DomainSpec::Polygon(p) => p.clone(),
        }
    }

    /// Whether the domain is symmetric under `y → −y` by construction.
    pub fn mirror_symmetric(&self) -> bool {
        matches!(self, DomainSpec::Kite(_) | DomainSpec::Rhombus { .. })
    }

    pub fn label(&self) -> String {
        match self {
            DomainSpec::Triangle(t) => format!("triangle(a={:.6},b={:.6},{:?})", t.a_f64(), t.b_f64(), t.convention()),
            DomainSpec::Kite(t) => format!("kite(a={:.6},b={:.6},{:?})", t.a_f64(), t.b_f64(), t.convention()),
            DomainSpec::Rhombus { h } => format!("rhombus(h={h})"),
            DomainSpec::Square { side } => format!("square(side={side})"),
            DomainSpec::Polygon(p) => format!("polygon({} corners)", p.len()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub v: [usize; 2],
    pub side: usize,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub spec: DomainSpec,
    pub vertices: Vec<Point>,
    pub elements: Vec<[usize; 3]>,
    pub boundary: Vec<BoundaryEdge>,
    pub corners: Vec<Point>,
    pub level: u32,
}

fn cross(o: Point, p: Point, q: Point) -> f64 {
    (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])
}

pub fn area(p: Point, q: Point, r: Point) -> f64 {
    0.5 * cross(p, q, r)
}

fn seed(spec: &DomainSpec) -> Result<Mesh, FemError> {
    let corners = spec.corners();
    let n = corners.len();
    if n < 3 {
        return Err(FemError::Degenerate("fewer than three corners".into()));
    }
    let scale = corners
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for i in 0..n {
        let turn = cross(corners[i], corners[(i + 1) % n], corners[(i + 2) % n]);
        if !(turn > 1e-12 * scale * scale) {
            return Err(FemError::Degenerate(format!("corner {} is not strictly convex", (i + 1) % n)));
        }
    }
    let elements = (1..n - 1).map(|i| [0, i, i + 1]).collect();
    let boundary = (0..n).map(|i| BoundaryEdge { v: [i, (i + 1) % n], side: i }).collect();
    Ok(Mesh {
        spec: spec.clone(),
        vertices: corners.clone(),
        elements,
        boundary,
        corners,
        level: 0,
    })
}

impl Mesh {
    /// One uniform 4-way refinement; existing vertices keep their indices.
    pub fn refine(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |i: usize, j: usize, vs: &mut Vec<Point>| {
            let key = (i.min(j), i.max(j));
            *mids.entry(key).or_insert_with(|| {
                vs.push([(vs[i][0] + vs[j][0]) / 2.0, (vs[i][1] + vs[j][1]) / 2.0]);
                vs.len() - 1
            })
        };
        let mut elements = Vec::with_capacity(self.elements.len() * 4);
        for &[a, b, c] in &self.elements {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            elements.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let boundary = self
            .boundary
            .iter()
            .flat_map(|e| {
                let m = mid(e.v[0], e.v[1], &mut vertices);
                [
                    BoundaryEdge { v: [e.v[0], m], side: e.side },
                    BoundaryEdge { v: [m, e.v[1]], side: e.side },
                ]
            })
            .collect();
        Mesh {
            spec: self.spec.clone(),
            vertices,
            elements,
            boundary,
            corners: self.corners.clone(),
            level: self.level + 1,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Longest edge length.
    pub fn h(&self) -> f64 {
        self.elements
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(i, j)| dist(self.vertices[i], self.vertices[j]))
            .fold(0.0, f64::max)
    }

    pub fn total_area(&self) -> f64 {
        self.elements
            .iter()
            .map(|&[a, b, c]| area(self.vertices[a], self.vertices[b], self.vertices[c]))
            .sum()
    }

    /// Vertices lying on any of the given sides.
    pub fn side_vertices(&self, sides: &[usize]) -> Vec<bool> {
        let mut on = vec![false; self.n_vertices()];
        for e in &self.boundary {
            if sides.contains(&e.side) {
                on[e.v[0]] = true;
                on[e.v[1]] = true;
            }
        }
        on
    }

    pub fn n_sides(&self) -> usize {
        self.corners.len()
    }

    /// Vertices of one side, ordered from its start corner, with arc length.
    pub fn side_trace(&self, side: usize) -> Vec<(usize, f64)> {
        let start = self.corners[side];
        let mut out: Vec<(usize, f64)> = self
            .side_vertices(&[side])
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| (i, dist(start, self.vertices[i])))
            .collect();
        out.sort_by(|x, y| x.1.total_cmp(&y.1));
        out
    }

    /// `mirror[i]` is the vertex at the reflection of vertex `i` in the
    /// x-axis.
    pub fn mirror_map(&self) -> Result<Vec<usize>, FemError> {
        let key = |p: Point| ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64);
        let index: HashMap<(i64, i64), usize> = self.vertices.iter().enumerate().map(|(i, &p)| (key(p), i)).collect();
        self.vertices
            .iter()
            .map(|&p| {
                index
                    .get(&key([p[0], -p[1]]))
                    .copied()
                    .ok_or(FemError::Asymmetric)
            })
            .collect()
    }
}

pub fn dist(p: Point, q: Point) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Seed mesh refined `level` times.
pub fn mesh_domain(spec: &DomainSpec, level: u32) -> Result<Mesh, FemError> {
    let mut m = seed(spec)?;
    for _ in 0..level {
        m = m.refine();
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hotspots_core::exactq::rat;

    fn tri() -> DomainSpec {
        DomainSpec::Triangle(TriParam::unit(rat(1, 4), rat(2, 5)).unwrap())
    }

    #[test]
    fn seed_sizes() {
        let m = mesh_domain(&tri(), 0).unwrap();
        assert_eq!((m.elements.len(), m.n_vertices()), (1, 3));
        let k = mesh_domain(&DomainSpec::Kite(TriParam::unit(rat(1, 4), rat(2, 5)).unwrap()), 1).unwrap();
        assert_eq!(k.elements.len(), 8);
        let r = mesh_domain(&DomainSpec::Rhombus { h: 0.5 }, 0).unwrap();
        assert_eq!(r.elements.len(), 2);
    }

    #[test]
    fn refinement_is_nested_and_conforming() {
        let m4 = mesh_domain(&tri(), 4).unwrap();
        let m5 = m4.refine();
        assert_eq!(&m5.vertices[..m4.n_vertices()], &m4.vertices[..]);
        // (2^k+1)(2^k+2)/2 vertices on a refined triangle
        assert_eq!(m5.n_vertices(), 33 * 34 / 2);
        assert!((m5.total_area() - m4.total_area()).abs() < 1e-14);
        for &[a, b, c] in &m5.elements {
            assert!(area(m5.vertices[a], m5.vertices[b], m5.vertices[c]) > 0.0);
        }
        let mut edges = HashMap::new();
        for &[a, b, c] in &m5.elements {
            for (i, j) in [(a, b), (b, c), (c, a)] {
                *edges.entry((i.min(j), i.max(j))).or_insert(0) += 1;
            }
        }
        let boundary = edges.values().filter(|&&c| c == 1).count();
        assert_eq!(boundary, m5.boundary.len());
        assert_eq!(m5.boundary.len(), 3 * 32);
    }

    #[test]
    fn degenerate_rejected() {
        let flat = DomainSpec::Polygon(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]);
        assert!(matches!(mesh_domain(&flat, 0), Err(FemError::Degenerate(_))));
    }

    #[test]
    fn kite_mirror() {
        let k = mesh_domain(&DomainSpec::Kite(TriParam::unit(rat(1, 4), rat(2, 5)).unwrap()), 3).unwrap();
        let m = k.mirror_map().unwrap();
        assert!(m.iter().enumerate().all(|(i, &j)| m[j] == i));
        assert!(mesh_domain(&tri(), 2).unwrap().mirror_map().is_err());
    }
}
