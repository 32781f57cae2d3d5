//! Covering maps `L^d -> G` built on a finite box by unique extension from a
//! seed on the unit star, with deck-group recovery and classification.
//!
//! The window is the box `[-(R+1), R+1]^d`; its interior `[-R, R]^d` is where
//! the covering condition is certified. Cells hold `vertex + 1`, zero meaning
//! unassigned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{is_torsion_free, LatticeAut, SignedPerm, SubgroupSpec, Torsion};
use crate::local::opposite_partition;

const MAX_CELLS: usize = 1 << 31;

/// Images of `0` and of `±e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub center: usize,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl Seed {
    pub fn dim(&self) -> usize {
        self.plus.len()
    }

    /// The seed must send the `2d` unit vectors bijectively onto `Γ(center)`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        g.check_vertex(self.center)?;
        let d = self.dim();
        if d == 0 || self.minus.len() != d {
            return Err(Error::MalformedSeed("need one plus and one minus image per axis".into()));
        }
        let mut imgs: Vec<usize> = self.plus.iter().chain(&self.minus).copied().collect();
        imgs.sort_unstable();
        if imgs != g.neighbors(self.center) {
            return Err(Error::MalformedSeed(format!(
                "images {imgs:?} are not exactly the neighbours of {}",
                self.center
            )));
        }
        Ok(())
    }
}

/// Seed from the opposite partition at `v0`: pair `i` (in the partition's
/// order) goes to axis `i`, its smaller vertex to `+e_i`.
pub fn seed_map(g: &Graph, v0: usize, d: usize) -> Result<Seed> {
    let part = match opposite_partition(g, v0, d) {
        Ok(Some(p)) => p,
        Ok(None) | Err(Error::DegreeMismatch { .. }) => return Err(Error::NoOppositeStructure(v0)),
        Err(e) => return Err(e),
    };
    Ok(Seed {
        center: v0,
        plus: part.pairs.iter().map(|p| p.0).collect(),
        minus: part.pairs.iter().map(|p| p.1).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionTag {
    /// `p(x+u)` and `p(x-u)` are not opposite across `p(x)`.
    OppositeViolation,
    /// Two lattice neighbours of a point share an image.
    InjectivityViolation,
    /// A derivation does not have exactly one candidate.
    AmbiguousExtension,
    /// Two square derivations disagree, or an image is not adjacent to a
    /// neighbouring image.
    DerivationConflict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub tag: ObstructionTag,
    /// Point whose assignment exposed the failure.
    pub point: Vec<i64>,
    /// Lattice points involved and their images.
    pub witnesses: Vec<(Vec<i64>, usize)>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoverStatus {
    Valid,
    Obstructed,
}

/// Dense box `[-b, b]^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Window {
    d: usize,
    b: i64,
    side: usize,
    strides: Vec<usize>,
}

impl Window {
    fn new(d: usize, b: i64) -> Result<Self> {
        let side = (2 * b + 1) as usize;
        let mut strides = vec![1usize; d];
        let mut total: usize = 1;
        for k in (0..d).rev() {
            strides[k] = total;
            total = total
                .checked_mul(side)
                .filter(|&t| t <= MAX_CELLS)
                .ok_or_else(|| Error::CapExceeded(format!("window of side {side} in dimension {d}")))?;
        }
        Ok(Window { d, b, side, strides })
    }

    fn len(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    fn index(&self, x: &[i64]) -> Option<usize> {
        let mut idx = 0;
        for (k, &c) in x.iter().enumerate() {
            if c.abs() > self.b {
                return None;
            }
            idx += (c + self.b) as usize * self.strides[k];
        }
        Some(idx)
    }

    fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut x = vec![0; self.d];
        for k in 0..self.d {
            x[k] = (idx / self.strides[k]) as i64 - self.b;
            idx %= self.strides[k];
        }
        x
    }
}

/// Map from the window to `V(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialCover {
    d: usize,
    radius: usize,
    window: Window,
    cells: Vec<u32>,
    pub status: CoverStatus,
    pub obstruction: Option<Obstruction>,
}

impl PartialCover {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Certified radius `R`; the map is defined on `[-(R+1), R+1]^d`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn is_valid(&self) -> bool {
        self.status == CoverStatus::Valid
    }

    pub fn get(&self, x: &[i64]) -> Option<usize> {
        let idx = self.window.index(x)?;
        match self.cells[idx] {
            0 => None,
            v => Some(v as usize - 1),
        }
    }

    /// Overwrites one cell; used to probe rigidity.
    pub fn set(&mut self, x: &[i64], v: usize) -> Result<()> {
        let idx = self
            .window
            .index(x)
            .ok_or_else(|| Error::BadParameters(format!("point {x:?} outside the window")))?;
        self.cells[idx] = v as u32 + 1;
        Ok(())
    }

    /// Raw cell contents (`vertex + 1`, zero when unassigned) in window order.
    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn assigned_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != 0).count()
    }

    /// Assigned cells in lexicographic order as `(point, vertex)`.
    pub fn assignments(&self) -> impl Iterator<Item = (Vec<i64>, usize)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (self.window.point(i), c as usize - 1))
    }

    /// One `x1 ... xd -> v` line per assigned cell.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (x, v) in self.assignments() {
            let coords: Vec<String> = x.iter().map(|c| c.to_string()).collect();
            out.push_str(&coords.join(" "));
            out.push_str(" -> ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

/// Order in which window points are processed.
#[derive(Clone, Debug)]
pub enum ExtensionOrder {
    /// Layers of increasing `ℓ1` norm; inside a layer the non-axis points
    /// first, then the axis points, each in lexicographic order.
    Layered,
    /// Repeated sweeps over the given points until nothing new can be derived.
    Sweeps(Vec<Vec<i64>>),
}

/// `4 * diam + 4`, using the component of `v0`.
pub fn default_radius(g: &Graph, v0: usize) -> usize {
    let ecc = |src: usize| g.bfs_distances(src).into_iter().flatten().max().unwrap_or(0);
    let comp: Vec<usize> = g
        .bfs_distances(v0)
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.map(|_| v))
        .collect();
    let diam = comp.iter().map(|&v| ecc(v)).max().unwrap_or(0);
    4 * diam + 4
}

pub fn extend_cover(g: &Graph, seed: &Seed, radius: usize) -> Result<PartialCover> {
    extend_cover_with(g, seed, radius, &ExtensionOrder::Layered)
}

pub fn extend_cover_with(
    g: &Graph,
    seed: &Seed,
    radius: usize,
    order: &ExtensionOrder,
) -> Result<PartialCover> {
    seed.validate(g)?;
    let d = seed.dim();
    let window = Window::new(d, radius as i64 + 1)?;
    let mut eng = Engine {
        g,
        d,
        cells: vec![0; window.len()],
        window,
    };
    let result = eng.run(seed, order);
    let (status, obstruction) = match result {
        Ok(()) => (CoverStatus::Valid, None),
        Err(o) => (CoverStatus::Obstructed, Some(*o)),
    };
    Ok(PartialCover {
        d,
        radius,
        window: eng.window,
        cells: eng.cells,
        status,
        obstruction,
    })
}

type Step = std::result::Result<(), Box<Obstruction>>;

struct Engine<'a> {
    g: &'a Graph,
    d: usize,
    window: Window,
    cells: Vec<u32>,
}

impl Engine<'_> {
    fn get(&self, idx: usize) -> Option<usize> {
        match self.cells[idx] {
            0 => None,
            v => Some(v as usize - 1),
        }
    }

    fn at(&self, x: &[i64]) -> Option<usize> {
        self.window.index(x).and_then(|i| self.get(i))
    }

    fn obstruction(
        &self,
        tag: ObstructionTag,
        point: &[i64],
        pts: &[Vec<i64>],
        detail: String,
    ) -> Box<Obstruction> {
        let witnesses = pts
            .iter()
            .filter_map(|p| self.at(p).map(|v| (p.clone(), v)))
            .collect();
        Box::new(Obstruction {
            tag,
            point: point.to_vec(),
            witnesses,
            detail,
        })
    }

    fn run(&mut self, seed: &Seed, order: &ExtensionOrder) -> Step {
        let d = self.d;
        let origin = vec![0i64; d];
        self.assign(&origin, seed.center)?;
        for i in 0..d {
            for (s, v) in [(1, seed.plus[i]), (-1, seed.minus[i])] {
                let mut x = origin.clone();
                x[i] = s;
                self.assign(&x, v)?;
            }
        }
        match order {
            ExtensionOrder::Layered => {
                let max = d as i64 * self.window.b;
                for k in 2..=max {
                    let layer = sphere(d, k, self.window.b);
                    let (off_axis, axis): (Vec<_>, Vec<_>) = layer
                        .into_iter()
                        .partition(|x| x.iter().filter(|&&c| c != 0).count() > 1);
                    for x in off_axis.iter().chain(&axis) {
                        match self.derive(x)? {
                            Some(v) => self.assign(x, v)?,
                            None => {
                                return Err(self.obstruction(
                                    ObstructionTag::AmbiguousExtension,
                                    x,
                                    &[],
                                    "no derivation available".into(),
                                ))
                            }
                        }
                    }
                }
            }
            ExtensionOrder::Sweeps(points) => loop {
                let mut progress = false;
                for x in points {
                    let Some(idx) = self.window.index(x) else { continue };
                    if self.cells[idx] != 0 {
                        continue;
                    }
                    if let Some(v) = self.derive(x)? {
                        self.assign(x, v)?;
                        progress = true;
                    }
                }
                if !progress {
                    break;
                }
            },
        }
        if let Some(idx) = self.cells.iter().position(|&c| c == 0) {
            let x = self.window.point(idx);
            return Err(self.obstruction(
                ObstructionTag::AmbiguousExtension,
                &x,
                &[],
                "point never became derivable".into(),
            ));
        }
        Ok(())
    }

    /// Index of `x` moved by `moves` (distinct axes), if inside the window.
    #[inline]
    fn offset(&self, idx: usize, x: &[i64], moves: &[(usize, i64)]) -> Option<usize> {
        let mut i = idx as i64;
        for &(k, s) in moves {
            if (x[k] + s).abs() > self.window.b {
                return None;
            }
            i += s * self.window.strides[k] as i64;
        }
        Some(i as usize)
    }

    #[inline]
    fn image(&self, idx: usize, x: &[i64], moves: &[(usize, i64)]) -> Option<usize> {
        self.offset(idx, x, moves).and_then(|j| self.get(j))
    }

    fn moved(x: &[i64], moves: &[(usize, i64)]) -> Vec<i64> {
        let mut y = x.to_vec();
        for &(k, s) in moves {
            y[k] += s;
        }
        y
    }

    /// All derivations of `x` available from the current assignment; they
    /// must agree.
    fn derive(&self, x: &[i64]) -> std::result::Result<Option<usize>, Box<Obstruction>> {
        let d = self.d;
        let g = self.g;
        let idx = self.window.index(x).expect("point inside window");
        let pts = |ms: &[&[(usize, i64)]]| -> Vec<Vec<i64>> { ms.iter().map(|m| Self::moved(x, m)).collect() };
        // (value, source points, through an opposite pair)
        let mut found: Option<(usize, Vec<Vec<i64>>, bool)> = None;
        // a disagreement with a derivation through an opposite pair means the
        // other value is not opposite
        let mut record = |v: usize, straight: bool, from: &dyn Fn() -> Vec<Vec<i64>>, this: &Self| -> Step {
            match &found {
                None => {
                    found = Some((v, from(), straight));
                    Ok(())
                }
                Some((w, ..)) if *w == v => Ok(()),
                Some((w, prev, was_straight)) => {
                    let mut all = prev.clone();
                    all.extend(from());
                    let tag = if straight || *was_straight {
                        ObstructionTag::OppositeViolation
                    } else {
                        ObstructionTag::DerivationConflict
                    };
                    Err(this.obstruction(tag, x, &all, format!("derived both {w} and {v}")))
                }
            }
        };

        // squares x, x-a, x-b, x-a-b
        for ka in 0..d {
            for sa in [1i64, -1] {
                let ya = [(ka, -sa)];
                let Some(my) = self.image(idx, x, &ya) else { continue };
                for kb in (ka + 1)..d {
                    for sb in [1i64, -1] {
                        let zb = [(kb, -sb)];
                        let wab = [(ka, -sa), (kb, -sb)];
                        let (Some(mz), Some(mw)) = (self.image(idx, x, &zb), self.image(idx, x, &wab)) else {
                            continue;
                        };
                        let (n, cn) = common_upto3(g, my, mz);
                        if n != 2 || !cn[..2].contains(&mw) {
                            let cn = g.common_neighbors(my, mz);
                            return Err(self.obstruction(
                                ObstructionTag::AmbiguousExtension,
                                x,
                                &pts(&[&ya, &zb, &wab]),
                                format!("images of the square sides have common neighbours {cn:?}"),
                            ));
                        }
                        let v = if cn[0] == mw { cn[1] } else { cn[0] };
                        record(v, false, &|| pts(&[&ya, &zb, &wab]), self)?;
                    }
                }
            }
        }

        // straight lines x - 2u, x - u, x
        let mut imgs: Vec<usize> = Vec::with_capacity(2 * d);
        for k in 0..d {
            for s in [1i64, -1] {
                let ys = [(k, -s)];
                let Some(my) = self.image(idx, x, &ys) else { continue };
                let ws = [(k, -2 * s)];
                if let Some(mw) = self.image(idx, x, &ws) {
                    let mut cands = g.neighbors(my).iter().copied().filter(|&n| n != mw && only_common(g, n, mw, my));
                    let (first, second) = (cands.next(), cands.next());
                    match (first, second) {
                        (Some(c), None) => record(c, true, &|| pts(&[&ys, &ws]), self)?,
                        _ => {
                            let count = g
                                .neighbors(my)
                                .iter()
                                .filter(|&&n| n != mw && only_common(g, n, mw, my))
                                .count();
                            return Err(self.obstruction(
                                ObstructionTag::AmbiguousExtension,
                                x,
                                &pts(&[&ys, &ws]),
                                format!("{count} vertices opposite {mw} across {my}"),
                            ));
                        }
                    }
                }
                // remaining neighbour of p(y)
                imgs.clear();
                let mut complete = true;
                'others: for k2 in 0..d {
                    for s2 in [1i64, -1] {
                        if k2 == k && s2 == s {
                            continue;
                        }
                        let m = if k2 == k {
                            self.image(idx, x, &[(k, -2 * s)])
                        } else {
                            self.image(idx, x, &[(k, -s), (k2, s2)])
                        };
                        match m {
                            Some(v) => imgs.push(v),
                            None => {
                                complete = false;
                                break 'others;
                            }
                        }
                    }
                }
                if !complete {
                    continue;
                }
                let others = || -> Vec<Vec<i64>> {
                    let y = Self::moved(x, &ys);
                    let mut out = vec![y.clone()];
                    for k2 in 0..d {
                        for s2 in [1i64, -1] {
                            if k2 != k || s2 != s {
                                out.push(Self::moved(&y, &[(k2, s2)]));
                            }
                        }
                    }
                    out
                };
                imgs.sort_unstable();
                if imgs.windows(2).any(|p| p[0] == p[1]) {
                    return Err(self.obstruction(
                        ObstructionTag::InjectivityViolation,
                        x,
                        &others(),
                        "two neighbours share an image".into(),
                    ));
                }
                let nb = g.neighbors(my);
                let mut rest = nb.iter().copied().filter(|n| imgs.binary_search(n).is_err());
                let (first, second) = (rest.next(), rest.next());
                let adjacent = imgs.iter().all(|&v| g.has_edge(my, v));
                match (first, second) {
                    (Some(r), None) if adjacent => record(r, false, &others, self)?,
                    _ => {
                        let count = nb.iter().filter(|n| imgs.binary_search(n).is_err()).count();
                        return Err(self.obstruction(
                            ObstructionTag::AmbiguousExtension,
                            x,
                            &others(),
                            format!("{count} unused neighbours of {my}"),
                        ));
                    }
                }
            }
        }
        Ok(found.map(|f| f.0))
    }

    /// Assigns `x` and checks adjacency, local injectivity and every straight
    /// triple that the assignment completes.
    fn assign(&mut self, x: &[i64], v: usize) -> Step {
        let d = self.d;
        let g = self.g;
        let idx = self.window.index(x).expect("point inside window");
        self.cells[idx] = v as u32 + 1;

        let mut around: Vec<(usize, i64, usize)> = Vec::with_capacity(2 * d);
        for k in 0..d {
            for s in [1i64, -1] {
                if let Some(m) = self.image(idx, x, &[(k, s)]) {
                    if !g.has_edge(v, m) {
                        return Err(self.obstruction(
                            ObstructionTag::DerivationConflict,
                            x,
                            &[x.to_vec(), Self::moved(x, &[(k, s)])],
                            format!("{v} and {m} are not adjacent"),
                        ));
                    }
                    around.push((k, s, m));
                }
            }
        }
        for (i, a) in around.iter().enumerate() {
            for b in &around[i + 1..] {
                if a.2 == b.2 {
                    return Err(self.obstruction(
                        ObstructionTag::InjectivityViolation,
                        x,
                        &[Self::moved(x, &[(a.0, a.1)]), Self::moved(x, &[(b.0, b.1)])],
                        format!("both neighbours map to {}", a.2),
                    ));
                }
            }
        }
        for &(k, s, m) in &around {
            for k2 in 0..d {
                for s2 in [1i64, -1] {
                    let n = if k2 == k {
                        if s2 != s {
                            continue;
                        }
                        self.image(idx, x, &[(k, 2 * s)])
                    } else {
                        self.image(idx, x, &[(k, s), (k2, s2)])
                    };
                    if n == Some(v) {
                        let y = Self::moved(x, &[(k, s)]);
                        let n = Self::moved(&y, &[(k2, s2)]);
                        return Err(self.obstruction(
                            ObstructionTag::InjectivityViolation,
                            x,
                            &[x.to_vec(), n, y],
                            format!("two neighbours of a point with image {m} map to {v}"),
                        ));
                    }
                }
            }
        }

        for k in 0..d {
            for s in [1i64, -1] {
                // x as an endpoint
                if let (Some(mc), Some(me)) = (self.image(idx, x, &[(k, s)]), self.image(idx, x, &[(k, 2 * s)])) {
                    if !only_common(g, v, me, mc) {
                        return Err(self.opposite_failure(x, Self::moved(x, &[(k, 2 * s)]), v, me, mc, k, s));
                    }
                }
            }
            // x as the centre
            if let (Some(ma), Some(mb)) = (self.image(idx, x, &[(k, 1)]), self.image(idx, x, &[(k, -1)])) {
                if !only_common(g, ma, mb, v) {
                    return Err(self.opposite_failure(x, Self::moved(x, &[(k, 1)]), ma, mb, v, k, -1));
                }
            }
        }
        Ok(())
    }

    /// `a` and `a + 2 s e_k` map to `ma`, `mb`, which are not opposite across
    /// the image `mc` of the midpoint.
    #[allow(clippy::too_many_arguments)]
    fn opposite_failure(
        &self,
        x: &[i64],
        a: Vec<i64>,
        ma: usize,
        mb: usize,
        mc: usize,
        k: usize,
        s: i64,
    ) -> Box<Obstruction> {
        let b = Self::moved(&a, &[(k, 2 * s)]);
        let centre = Self::moved(&a, &[(k, s)]);
        let cn = self.g.common_neighbors(ma, mb);
        self.obstruction(
            ObstructionTag::OppositeViolation,
            x,
            &[a, b, centre],
            format!("{ma} and {mb} have common neighbours {cn:?}, expected only {mc}"),
        )
    }
}

/// Up to three common neighbours of `a` and `b`, and how many were found.
fn common_upto3(g: &Graph, a: usize, b: usize) -> (usize, [usize; 3]) {
    let mut buf = [usize::MAX; 3];
    let mut n = 0;
    for c in g.common_neighbors_iter(a, b).take(3) {
        buf[n] = c;
        n += 1;
    }
    (n, buf)
}

fn only_common(g: &Graph, a: usize, b: usize, c: usize) -> bool {
    let (n, buf) = common_upto3(g, a, b);
    n == 1 && buf[0] == c
}

/// Points of `ℓ1` norm `k` in `[-b, b]^d`, in lexicographic order.
fn sphere(d: usize, k: i64, b: i64) -> Vec<Vec<i64>> {
    fn rec(d: usize, rem: i64, b: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == d - 1 {
            if rem <= b {
                let finals: &[i64] = if rem == 0 { &[0] } else { &[-rem, rem] };
                for &f in finals {
                    cur.push(f);
                    out.push(cur.clone());
                    cur.pop();
                }
            }
            return;
        }
        let m = rem.min(b);
        for c in -m..=m {
            cur.push(c);
            rec(d, rem - c.abs(), b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, b, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Full re-check of a cover: lattice edges inside the window map to edges
/// with distinct images around each point, and every interior point has its
/// `2d` neighbours mapped onto the neighbourhood of its image with opposite
/// lattice neighbours going to opposite vertices.
pub fn validate_cover(pc: &PartialCover, g: &Graph) -> Result<()> {
    let d = pc.d;
    let r = pc.radius as i64;
    let bad = |x: &[i64], msg: String| Error::InvalidCover(format!("at {x:?}: {msg}"));
    for (idx, &c) in pc.cells.iter().enumerate() {
        let x = pc.window.point(idx);
        if c == 0 {
            return Err(bad(&x, "unassigned".into()));
        }
        let m = c as usize - 1;
        let mut near = Vec::with_capacity(2 * d);
        for k in 0..d {
            for s in [1i64, -1] {
                let mut y = x.clone();
                y[k] += s;
                if let Some(my) = pc.get(&y) {
                    if !g.has_edge(m, my) {
                        return Err(bad(&x, format!("{m} and {my} are not adjacent")));
                    }
                    near.push(my);
                }
            }
        }
        near.sort_unstable();
        if near.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad(&x, "two neighbours share an image".into()));
        }
        if x.iter().any(|v| v.abs() > r) {
            continue;
        }
        if m >= g.vertex_count() || g.degree(m) != 2 * d {
            return Err(bad(&x, format!("image {m} is not a vertex of degree {}", 2 * d)));
        }
        let mut imgs = Vec::with_capacity(2 * d);
        for k in 0..d {
            let mut a = x.clone();
            a[k] += 1;
            let mut b = x.clone();
            b[k] -= 1;
            let ma = pc.get(&a).unwrap();
            let mb = pc.get(&b).unwrap();
            if g.common_neighbors(ma, mb) != [m] {
                return Err(bad(&x, format!("{ma} and {mb} are not opposite across {m}")));
            }
            imgs.push(ma);
            imgs.push(mb);
        }
        imgs.sort_unstable();
        if imgs != g.neighbors(m) {
            return Err(bad(&x, format!("neighbours map to {imgs:?}, not onto Γ({m})")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckGroup {
    pub d: usize,
    pub generators: Vec<LatticeAut>,
    /// Orbits of the recovered group on the fibre points in the half-window.
    pub fiber_size: usize,
    /// Fibre points over the base vertex found in the half-window.
    pub fiber_points: usize,
    pub transitive_on_fiber: bool,
    /// The quotient of `L^d` by the recovered group has exactly `|V(G)|`
    /// vertices.
    pub index_certified: bool,
}

impl DeckGroup {
    pub fn spec(&self) -> SubgroupSpec {
        SubgroupSpec::new(self.d, self.generators.clone()).expect("generators share the dimension")
    }
}

/// Deck transformation sending `0` to `v`, read off from the images of the
/// unit star at `v`.
fn deck_candidate(pc: &PartialCover, v: &[i64]) -> Option<LatticeAut> {
    let d = pc.d;
    let origin = vec![0i64; d];
    let base = pc.get(&origin)?;
    if pc.get(v)? != base {
        return None;
    }
    let mut images = vec![0i32; d];
    for (i, img) in images.iter_mut().enumerate() {
        let mut e = vec![0i64; d];
        e[i] = 1;
        let target = pc.get(&e)?;
        let mut hit = None;
        for k in 0..d {
            for s in [1i64, -1] {
                let mut y = v.to_vec();
                y[k] += s;
                if pc.get(&y) == Some(target) {
                    hit = Some((k, s));
                }
            }
        }
        let (k, s) = hit?;
        *img = s as i32 * (k as i32 + 1);
    }
    let sigma = SignedPerm::new(images).ok()?;
    LatticeAut::new(sigma, v.to_vec()).ok()
}

fn verify_deck(pc: &PartialCover, alpha: &LatticeAut, half: i64) -> bool {
    let d = pc.d;
    let mut x = vec![-half; d];
    loop {
        let y = alpha.apply(&x);
        match (pc.get(&x), pc.get(&y)) {
            (Some(a), Some(b)) if a == b => {}
            _ => return false,
        }
        let mut k = d;
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            x[k] += 1;
            if x[k] <= half {
                break;
            }
            x[k] = -half;
        }
    }
}

fn same_orbit(spec: &SubgroupSpec, from: &[i64], to: &[i64]) -> bool {
    spec.coset_reps().iter().any(|rep| {
        let img = rep.apply(from);
        let diff: Vec<i64> = to.iter().zip(&img).map(|(a, b)| a - b).collect();
        crate::lattice::hnf::contains(spec.lattice_basis(), &diff)
    })
}

/// Recovers covering transformations from the fibre over `p(0)` inside the
/// half-window `[-R/2, R/2]^d`. Fibre points are tried by increasing `ℓ1`
/// norm (then decreasing lexicographically); a point already reached by the
/// group found so far is skipped, otherwise its transformation is built,
/// verified on the half-window and added as a generator.
pub fn recover_deck_group(pc: &PartialCover, g: &Graph) -> Result<DeckGroup> {
    if !pc.is_valid() {
        return Err(Error::InvalidCover("cover is obstructed".into()));
    }
    let d = pc.d;
    let half = (pc.radius / 2) as i64;
    let origin = vec![0i64; d];
    let base = pc.get(&origin).expect("origin assigned");
    let mut fiber: Vec<Vec<i64>> = pc
        .assignments()
        .filter(|(x, v)| *v == base && x.iter().all(|c| c.abs() <= half))
        .map(|(x, _)| x)
        .collect();
    fiber.sort_by(|a, b| {
        crate::lattice::l1(a)
            .cmp(&crate::lattice::l1(b))
            .then_with(|| b.cmp(a))
    });
    if fiber.len() == 1 {
        let mut seen = vec![false; g.vertex_count()];
        for (_, v) in pc.assignments() {
            seen[v] = true;
        }
        if seen.iter().all(|&s| s) {
            return Err(Error::FiberNotFound);
        }
    }

    let mut generators: Vec<LatticeAut> = Vec::new();
    let mut spec = SubgroupSpec::new(d, Vec::new())?;
    let mut transitive = true;
    for v in fiber.iter().skip(1) {
        if same_orbit(&spec, &origin, v) {
            continue;
        }
        match deck_candidate(pc, v).filter(|a| verify_deck(pc, a, half)) {
            Some(alpha) => {
                generators.push(alpha);
                spec = SubgroupSpec::new(d, generators.clone())?;
            }
            None => transitive = false,
        }
    }

    let mut classes: Vec<&Vec<i64>> = Vec::new();
    for v in &fiber {
        if !classes.iter().any(|c| same_orbit(&spec, c, v)) {
            classes.push(v);
        }
    }
    let index_certified = transitive
        && spec.is_cocompact()
        && spec.orbit_count().ok() == Some(g.vertex_count() as u64);
    Ok(DeckGroup {
        d,
        generators,
        fiber_size: classes.len(),
        fiber_points: fiber.len(),
        transitive_on_fiber: transitive,
        index_certified,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SurfaceKind {
    Torus,
    KleinBottle,
}

/// Torus when every generator preserves orientation, Klein bottle otherwise.
pub fn classify_2d(dg: &DeckGroup) -> Result<SurfaceKind> {
    if dg.d != 2 {
        return Err(Error::UnsupportedDimension {
            requirement: "= 2",
            got: dg.d,
        });
    }
    if !dg.transitive_on_fiber {
        return Err(Error::NotTransitive);
    }
    if !is_torsion_free(&dg.spec())?.torsion_free {
        return Err(Error::OrbifoldUnexpected);
    }
    if dg.generators.iter().all(|g| g.sigma.det() == 1) {
        Ok(SurfaceKind::Torus)
    } else {
        Ok(SurfaceKind::KleinBottle)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuotientKind {
    ManifoldQuotient,
    OrbifoldQuotient { witness: LatticeAut, order: usize },
}

pub fn classify_d(spec: &SubgroupSpec) -> Result<QuotientKind> {
    if spec.dim() < 3 {
        return Err(Error::UnsupportedDimension {
            requirement: ">= 3",
            got: spec.dim(),
        });
    }
    Ok(match is_torsion_free(spec)? {
        Torsion {
            witness: Some((witness, order)),
            ..
        } => QuotientKind::OrbifoldQuotient { witness, order },
        _ => QuotientKind::ManifoldQuotient,
    })
}
