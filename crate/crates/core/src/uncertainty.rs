//! The uncertainty curve and its certified bounds.
//!
//! For a fixed slope `α ≤ 0`, the smallest eigenpair `(q, x)` of
//! `M(α) = P − αL` yields a curve point `(s, g) = (xᵀLx, xᵀPx)` lying on the
//! supporting line `g = α·s + q`, which bounds every achievable spread pair
//! from below. The sandwich refinement inserts points at chord slopes until
//! the vertical distance between the chord (upper) and supporting-line
//! (lower) bounds drops under a tolerance.

use std::collections::BinaryHeap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{CenterNode, DistanceDiagonal};
use crate::spectral::{self, quadratic_form, sym_eig, Signal};
use crate::tol;

/// `M(α) = P − α·L` for a fixed slope α.
#[derive(Debug, Clone)]
pub struct SlopeMatrix {
    pub alpha: f64,
    matrix: DMatrix<f64>,
}

impl SlopeMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Assemble `P − α·L`.
pub fn m_alpha(p: &DistanceDiagonal, l: &DMatrix<f64>, alpha: f64) -> Result<SlopeMatrix> {
    let n = p.len();
    if l.nrows() != n || l.ncols() != n {
        return Err(Error::invalid_argument(format!(
            "P has {} entries but L is {}x{}",
            n,
            l.nrows(),
            l.ncols()
        )));
    }
    let mut matrix = l * (-alpha);
    for i in 0..n {
        matrix[(i, i)] += p.entries()[i];
    }
    Ok(SlopeMatrix { alpha, matrix })
}

/// Smallest eigenpair of a slope matrix.
#[derive(Debug, Clone)]
pub struct MinEigPair {
    /// Smallest eigenvalue `q(α)`.
    pub value: f64,
    /// Unit eigenvector under the crate's sign convention.
    pub vector: Signal,
    /// Set when the second eigenvalue is within [`tol::EIG_MULTIPLICITY`]
    /// of the smallest — the supporting line touches the curve along a
    /// whole segment (a corner of the curve).
    pub degenerate: bool,
}

/// Extract the smallest eigenpair of `M(α)`.
pub fn min_eigpair(m: &SlopeMatrix) -> Result<MinEigPair> {
    let basis = sym_eig(&m.matrix)?;
    let n = basis.eigenvalues.len();
    let value = basis.eigenvalues[0];
    let degenerate = n >= 2 && basis.eigenvalues[1] - value < tol::EIG_MULTIPLICITY;
    Ok(MinEigPair {
        value,
        vector: Signal::new(basis.vector(0))?,
        degenerate,
    })
}

/// One achievable (spectral spread, graph spread) pair.
#[derive(Debug, Clone)]
pub struct SpreadPoint {
    /// Spectral spread `xᵀLx`.
    pub s: f64,
    /// Graph spread `xᵀPx`.
    pub g: f64,
    /// The attaining unit signal, when known.
    pub signal: Option<Signal>,
    /// Slope of the supporting line that produced the point; `None` for the
    /// `s = 0` endpoint, whose supporting line is vertical.
    pub alpha: Option<f64>,
    /// Set when the point came from a degenerate smallest eigenvalue.
    pub degenerate: bool,
}

impl SpreadPoint {
    pub fn new(s: f64, g: f64) -> Self {
        Self {
            s,
            g,
            signal: None,
            alpha: None,
            degenerate: false,
        }
    }

    /// Supporting line `(slope, intercept)` through this point, if any.
    fn line(&self) -> Option<(f64, f64)> {
        self.alpha.map(|a| (a, self.g - a * self.s))
    }
}

/// Curve point for a given slope: smallest eigenpair of `M(α)` evaluated
/// through both quadratic forms. The identity `g = α·s + q` holds up to
/// eigensolver rounding.
pub fn curve_point(p: &DistanceDiagonal, l: &DMatrix<f64>, alpha: f64) -> Result<SpreadPoint> {
    let m = m_alpha(p, l, alpha)?;
    let pair = min_eigpair(&m)?;
    let s = quadratic_form(pair.vector.values(), l).max(0.0);
    let g = spectral::graph_spread(&pair.vector, p)?;
    Ok(SpreadPoint {
        s,
        g,
        signal: Some(pair.vector),
        alpha: Some(alpha),
        degenerate: pair.degenerate,
    })
}

/// The two ends of the plotted curve.
///
/// Right: the delta at the center node, `(s, g) = (1, 0)`, which is the
/// α = 0 supporting point. Left: the Laplacian kernel eigenvector χ₁,
/// `(s, g) = (0, χ₁ᵀPχ₁)`; it is reached only in the limit α → −∞, so it
/// carries no finite supporting slope.
pub fn curve_endpoints(
    p: &DistanceDiagonal,
    l: &DMatrix<f64>,
    uc: CenterNode,
) -> Result<(SpreadPoint, SpreadPoint)> {
    let n = p.len();
    if uc.get() > n {
        return Err(Error::invalid_argument(format!(
            "center node {} out of range 1..{n}",
            uc.get()
        )));
    }
    let basis = sym_eig(l)?;
    let chi1 = Signal::new(basis.vector(0))?;
    // χ₁ spans the Laplacian kernel, so its spectral spread is exactly 0;
    // the quadratic form only returns rounding noise
    let raw = quadratic_form(chi1.values(), l);
    let s_left = if raw.abs() <= tol::DUPLICATE_POINT {
        0.0
    } else {
        raw.max(0.0)
    };
    let g_left = spectral::graph_spread(&chi1, p)?;
    let degenerate = n >= 2 && basis.eigenvalues[1] - basis.eigenvalues[0] < tol::EIG_MULTIPLICITY;
    let left = SpreadPoint {
        s: s_left,
        g: g_left,
        signal: Some(chi1),
        alpha: None,
        degenerate,
    };
    let right = curve_point(p, l, 0.0)?;
    Ok((left, right))
}

/// Lower/upper bound bookkeeping for one segment between adjacent points.
#[derive(Debug, Clone, Copy)]
struct SegmentBound {
    /// Certified max vertical distance between the bounds on this segment.
    gap: f64,
    /// Extra certified supporting line `(slope, intercept)` recorded when a
    /// refinement landed back on an endpoint (the chord is itself a
    /// supporting line there).
    extra_line: Option<(f64, f64)>,
}

/// The uncertainty curve bracketed between piecewise-linear bounds.
///
/// `points` are exact curve points sorted by ascending spectral spread; the
/// upper bound interpolates them by chords, the lower bound is the envelope
/// of their supporting lines. `gap` is the certified maximum vertical
/// distance between the two bounds over the whole domain.
#[derive(Debug, Clone)]
pub struct UncertaintyCurve {
    points: Vec<SpreadPoint>,
    segments: Vec<SegmentBound>,
    gap: f64,
    gap_history: Vec<f64>,
}

impl UncertaintyCurve {
    pub fn points(&self) -> &[SpreadPoint] {
        &self.points
    }

    /// Certified bound gap over the whole curve.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Certified gap of the segment to the right of point `i`
    /// (0 for the last point).
    pub fn segment_gap(&self, i: usize) -> f64 {
        self.segments.get(i).map_or(0.0, |seg| seg.gap)
    }

    /// Global certified gap after each refinement iteration, starting with
    /// the two-endpoint bracket.
    pub fn gap_history(&self) -> &[f64] {
        &self.gap_history
    }

    pub fn s_min(&self) -> f64 {
        self.points.first().map_or(0.0, |p| p.s)
    }

    pub fn s_max(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.s)
    }

    /// Evaluate both piecewise-linear bounds at a spectral spread `s`.
    /// Returns `(lower, upper)`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64)> {
        let (min, max) = (self.s_min(), self.s_max());
        if !(s >= min - tol::DUPLICATE_POINT && s <= max + tol::DUPLICATE_POINT) {
            return Err(Error::Domain { value: s, min, max });
        }
        let s = s.clamp(min, max);
        // index of the segment containing s
        let mut idx = match self.points.binary_search_by(|pt| pt.s.total_cmp(&s)) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        idx = idx.min(self.points.len().saturating_sub(2));
        let (a, b) = (&self.points[idx], &self.points[idx + 1]);

        let chord = if b.s > a.s {
            a.g + (b.g - a.g) / (b.s - a.s) * (s - a.s)
        } else {
            a.g.min(b.g)
        };

        let mut lower = f64::NEG_INFINITY;
        for line in [a.line(), b.line(), self.segments[idx].extra_line]
            .into_iter()
            .flatten()
        {
            lower = lower.max(line.0 * s + line.1);
        }
        // at an exactly computed abscissa the curve value itself is known
        for pt in [a, b] {
            if (s - pt.s).abs() <= tol::DUPLICATE_POINT {
                lower = lower.max(pt.g);
            }
        }
        lower = lower.min(chord);
        Ok((lower, chord))
    }
}

/// Heap entry ordered by gap.
#[derive(Debug, Clone, Copy)]
struct Segment {
    gap: f64,
    left: usize,
    right: usize,
    extra_line: Option<(f64, f64)>,
    frozen: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.gap == other.gap
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.gap.total_cmp(&other.gap)
    }
}

/// Certified gap of the bracket on the segment between two curve points:
/// max over the segment of chord minus the endpoint supporting lines.
fn bracket_gap(p1: &SpreadPoint, p2: &SpreadPoint) -> f64 {
    let chord = |s: f64| p1.g + (p2.g - p1.g) / (p2.s - p1.s) * (s - p1.s);
    let gap = match (p1.line(), p2.line()) {
        (Some(l1), Some(l2)) => {
            let denom = l1.0 - l2.0;
            let lower = |s: f64| (l1.0 * s + l1.1).max(l2.0 * s + l2.1);
            if denom.abs() <= f64::EPSILON * (l1.0.abs() + l2.0.abs()).max(1.0) {
                // parallel supporting lines: the difference is linear
                (chord(p1.s) - lower(p1.s)).max(chord(p2.s) - lower(p2.s))
            } else {
                let s_star = ((l2.1 - l1.1) / denom).clamp(p1.s, p2.s);
                chord(s_star) - lower(s_star)
            }
        }
        // only one supporting line: chord minus line is linear, and it
        // vanishes at the line's own endpoint
        (None, Some(l2)) => p1.g - (l2.0 * p1.s + l2.1),
        (Some(l1), None) => p2.g - (l1.0 * p2.s + l1.1),
        (None, None) => f64::INFINITY,
    };
    gap.max(0.0)
}

/// Approximate the uncertainty curve to a certified gap `tol` by sandwich
/// refinement.
///
/// Segments are refined largest-gap-first; each refinement solves one
/// smallest-eigenpair problem at the segment's chord slope. Refinement of a
/// segment stops when its new point duplicates an endpoint (the chord is a
/// supporting line — an exactly linear curve piece) or when the smallest
/// eigenvalue is degenerate (a curve corner; the point is kept and flagged).
pub fn sandwich_curve(
    p: &DistanceDiagonal,
    l: &DMatrix<f64>,
    uc: CenterNode,
    tolerance: f64,
) -> Result<UncertaintyCurve> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::invalid_argument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let (left, right) = curve_endpoints(p, l, uc)?;
    let mut points = vec![left, right];
    let mut heap = BinaryHeap::new();
    let first = Segment {
        gap: bracket_gap(&points[0], &points[1]),
        left: 0,
        right: 1,
        extra_line: None,
        frozen: false,
    };
    let mut gap_history = vec![first.gap];
    heap.push(first);

    let mut retired: Vec<Segment> = Vec::new();
    let mut retired_gap = 0.0f64;
    let mut iterations = 0usize;

    while let Some(seg) = heap.pop() {
        if seg.gap <= tolerance || seg.frozen {
            retired_gap = retired_gap.max(seg.gap);
            retired.push(seg);
            continue;
        }
        if iterations >= tol::SANDWICH_MAX_ITER {
            heap.push(seg);
            let gap = retired_gap.max(seg.gap);
            let partial = assemble(points, retired, heap, gap, gap_history);
            return Err(Error::Convergence {
                iterations,
                gap,
                partial: Box::new(partial),
            });
        }
        iterations += 1;

        let (s1, g1) = (points[seg.left].s, points[seg.left].g);
        let (s2, g2) = (points[seg.right].s, points[seg.right].g);
        let alpha = (g2 - g1) / (s2 - s1);
        if alpha.abs() > tol::SLOPE_CAP {
            retired_gap = retired_gap.max(seg.gap);
            retired.push(Segment {
                frozen: true,
                ..seg
            });
            gap_history.push(retired_gap.max(heap.peek().map_or(0.0, |s| s.gap)));
            continue;
        }
        let new_pt = curve_point(p, l, alpha)?;

        let eps = tol::DUPLICATE_POINT;
        let dup_left = (new_pt.s - s1).abs() <= eps && (new_pt.g - g1).abs() <= eps;
        let dup_right = (new_pt.s - s2).abs() <= eps && (new_pt.g - g2).abs() <= eps;
        let ordered = new_pt.s > s1 && new_pt.s < s2;

        if dup_left || dup_right || !ordered {
            // The chord turned out to be (numerically) a supporting line;
            // its own line certifies the segment.
            let line = (alpha, new_pt.g - alpha * new_pt.s);
            let recert = (g1 - (line.0 * s1 + line.1))
                .max(g2 - (line.0 * s2 + line.1))
                .max(0.0);
            let done = Segment {
                gap: recert.min(seg.gap),
                extra_line: Some(line),
                frozen: true,
                ..seg
            };
            retired_gap = retired_gap.max(done.gap);
            retired.push(done);
        } else {
            let freeze = new_pt.degenerate;
            let idx = points.len();
            points.push(new_pt);
            for (a, b) in [(seg.left, idx), (idx, seg.right)] {
                heap.push(Segment {
                    gap: bracket_gap(&points[a], &points[b]),
                    left: a,
                    right: b,
                    extra_line: None,
                    frozen: freeze,
                });
            }
        }
        let heap_gap = heap.peek().map_or(0.0, |s| s.gap);
        gap_history.push(retired_gap.max(heap_gap));
    }

    let gap = retired_gap;
    Ok(assemble(
        points,
        retired,
        BinaryHeap::new(),
        gap,
        gap_history,
    ))
}

/// Sort points by s and align the per-segment bounds with the sorted order.
fn assemble(
    points: Vec<SpreadPoint>,
    retired: Vec<Segment>,
    rest: BinaryHeap<Segment>,
    gap: f64,
    gap_history: Vec<f64>,
) -> UncertaintyCurve {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].s.total_cmp(&points[j].s));
    let mut rank = vec![0usize; points.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }

    let mut segments = vec![
        SegmentBound {
            gap: f64::NAN,
            extra_line: None,
        };
        points.len().saturating_sub(1)
    ];
    for seg in retired.into_iter().chain(rest) {
        // a segment's endpoints are adjacent in sorted order
        let i = rank[seg.left].min(rank[seg.right]);
        segments[i] = SegmentBound {
            gap: seg.gap,
            extra_line: seg.extra_line,
        };
    }

    let mut sorted = Vec::with_capacity(points.len());
    let mut points = points;
    for &old in &order {
        sorted.push(std::mem::replace(
            &mut points[old],
            SpreadPoint::new(0.0, 0.0),
        ));
    }
    // fill any segment never touched by the loop (single-segment curves)
    for i in 0..segments.len() {
        if segments[i].gap.is_nan() {
            segments[i].gap = bracket_gap(&sorted[i], &sorted[i + 1]);
        }
    }

    UncertaintyCurve {
        points: sorted,
        segments,
        gap,
        gap_history,
    }
}
