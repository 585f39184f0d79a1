//! Closed plane polylines and the codes they carry.
#![allow(dead_code)]

use std::f64::consts::TAU;

use knotink::{Crossing, GaussCode, Passage, Sign, Symbol, VirtualGaussCode};

pub type Pt = (f64, f64);

fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

/// A transverse self-intersection. `t` and `u` are curve parameters
/// (segment index plus fraction), `t < u`.
#[derive(Clone, Copy, Debug)]
pub struct Meet {
    pub t: f64,
    pub u: f64,
    pub dir_t: Pt,
    pub dir_u: Pt,
}

pub struct Curve {
    pub pts: Vec<Pt>,
    pub height: Vec<f64>,
}

impl Curve {
    /// Samples `(x, y, z)(s)` for `s` in `[0, 2π)`.
    pub fn sample(n: usize, f: impl Fn(f64) -> (f64, f64, f64)) -> Curve {
        let (pts, height) = (0..n)
            .map(|k| {
                let (x, y, z) = f(TAU * k as f64 / n as f64);
                ((x, y), z)
            })
            .unzip();
        Curve { pts, height }
    }

    pub fn polygon(pts: Vec<Pt>) -> Curve {
        let height = vec![0.0; pts.len()];
        Curve { pts, height }
    }

    fn seg(&self, i: usize) -> (Pt, Pt) {
        (self.pts[i], self.pts[(i + 1) % self.pts.len()])
    }

    pub fn height_at(&self, t: f64) -> f64 {
        let i = t.floor() as usize;
        let f = t - i as f64;
        self.height[i] * (1.0 - f) + self.height[(i + 1) % self.pts.len()] * f
    }

    pub fn meets(&self) -> Vec<Meet> {
        let n = self.pts.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (p, p2) = self.seg(i);
                let (q, q2) = self.seg(j);
                let (r, s) = (sub(p2, p), sub(q2, q));
                let den = cross(r, s);
                if den.abs() < 1e-12 {
                    continue;
                }
                let a = cross(sub(q, p), s) / den;
                let b = cross(sub(q, p), r) / den;
                if (0.0..1.0).contains(&a) && (0.0..1.0).contains(&b) {
                    out.push(Meet { t: i as f64 + a, u: j as f64 + b, dir_t: r, dir_u: s });
                }
            }
        }
        out
    }
}

/// How a meet is drawn: over/under with the earlier passage on top, or
/// virtual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Drawn {
    FirstOver,
    SecondOver,
    Virtual,
}

/// Sign of a crossing whose over strand runs along `over`.
pub fn sign(over: Pt, under: Pt) -> Sign {
    if cross(over, under) > 0.0 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

pub struct Diagram {
    pub meets: Vec<Meet>,
    pub drawn: Vec<Drawn>,
}

impl Diagram {
    pub fn new(meets: Vec<Meet>, drawn: Vec<Drawn>) -> Diagram {
        assert_eq!(meets.len(), drawn.len());
        Diagram { meets, drawn }
    }

    /// Heights decide every meet.
    pub fn lifted(curve: &Curve) -> Diagram {
        let meets = curve.meets();
        let drawn = meets
            .iter()
            .map(|m| if curve.height_at(m.t) > curve.height_at(m.u) { Drawn::FirstOver } else { Drawn::SecondOver })
            .collect();
        Diagram { meets, drawn }
    }

    /// Labels of the classical meets, in meet order, starting at 1.
    pub fn labels(&self) -> Vec<Option<u32>> {
        let mut next = 0;
        self.drawn
            .iter()
            .map(|d| {
                (*d != Drawn::Virtual).then(|| {
                    next += 1;
                    next
                })
            })
            .collect()
    }

    pub fn code(&self) -> VirtualGaussCode {
        let labels = self.labels();
        let mut events: Vec<(f64, Symbol<Crossing>)> = Vec::new();
        for ((m, d), l) in self.meets.iter().zip(&self.drawn).zip(&labels) {
            let Some(l) = *l else { continue };
            let first_over = *d == Drawn::FirstOver;
            let s = if first_over { sign(m.dir_t, m.dir_u) } else { sign(m.dir_u, m.dir_t) };
            let (pt, pu) = if first_over { (Passage::Over, Passage::Under) } else { (Passage::Under, Passage::Over) };
            events.push((m.t, Symbol::new(l, Crossing::new(pt, s))));
            events.push((m.u, Symbol::new(l, Crossing::new(pu, s))));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        GaussCode::new(events.into_iter().map(|e| e.1).collect()).unwrap()
    }

    /// Splits the curve at the classical meet labelled `label` and counts the
    /// virtual meets between the two loops, with the loop `(t, u)` on top.
    pub fn direct_virtual_count(&self, label: u32) -> i64 {
        let labels = self.labels();
        let k = labels.iter().position(|l| *l == Some(label)).unwrap();
        let (lo, hi) = (self.meets[k].t, self.meets[k].u);
        let inside = |x: f64| lo < x && x < hi;
        let mut total = 0;
        for (m, d) in self.meets.iter().zip(&self.drawn) {
            if *d != Drawn::Virtual || inside(m.t) == inside(m.u) {
                continue;
            }
            let (a, b) = if inside(m.t) { (m.dir_t, m.dir_u) } else { (m.dir_u, m.dir_t) };
            total += sign(a, b).value();
        }
        total
    }
}

/// The standard (2,3) torus curve; its projection has three meets.
pub fn trefoil_curve() -> Curve {
    Curve::sample(600, |s| ((s).sin() + 2.0 * (2.0 * s).sin(), (s).cos() - 2.0 * (2.0 * s).cos(), -(3.0 * s).sin()))
}

/// A Lissajous-type figure-eight knot.
pub fn figure_eight_curve() -> Curve {
    Curve::sample(800, |s| {
        let r = 2.0 + (2.0 * s).cos();
        (r * (3.0 * s).cos(), r * (3.0 * s).sin(), (4.0 * s).sin())
    })
}
