use super::VectorizeError;
use crate::graph::{Attr, AttributeValue, ContourGraph, Range};
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HorizontalDirection {
    Left,
    Right,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerticalDirection {
    Up,
    Down,
    None,
}

impl HorizontalDirection {
    pub fn name(self) -> &'static str {
        match self {
            HorizontalDirection::Left => "Left",
            HorizontalDirection::Right => "Right",
            HorizontalDirection::None => "None",
        }
    }
}

impl VerticalDirection {
    pub fn name(self) -> &'static str {
        match self {
            VerticalDirection::Up => "Up",
            VerticalDirection::Down => "Down",
            VerticalDirection::None => "None",
        }
    }
}

/// Quadrant 1..=4 of a direction vector in image coordinates (y down).
/// Zero components count as non-negative.
pub fn quadrant_of<F: Scalar>(dx: F, dy: F) -> Result<u8, VectorizeError> {
    if dx == F::zero() && dy == F::zero() {
        return Err(VectorizeError::ZeroVector);
    }
    let z = F::zero();
    Ok(match (dx >= z, dy >= z) {
        (true, true) => 1,
        (false, true) => 2,
        (false, false) => 3,
        (true, false) => 4,
    })
}

pub fn directions_of<F: Scalar>(dx: F, dy: F) -> Result<(HorizontalDirection, VerticalDirection), VectorizeError> {
    if dx == F::zero() && dy == F::zero() {
        return Err(VectorizeError::ZeroVector);
    }
    let h = if dx > F::zero() {
        HorizontalDirection::Right
    } else if dx < F::zero() {
        HorizontalDirection::Left
    } else {
        HorizontalDirection::None
    };
    let v = if dy > F::zero() {
        VerticalDirection::Down
    } else if dy < F::zero() {
        VerticalDirection::Up
    } else {
        VerticalDirection::None
    };
    Ok((h, v))
}

fn map_numeric<F: Scalar>(v: &AttributeValue<F>, f: impl Fn(F) -> F) -> AttributeValue<F> {
    match v {
        AttributeValue::Scalar(x) => AttributeValue::Scalar(f(*x)),
        AttributeValue::Range(r) => {
            let (a, b) = (f(r.min), f(r.max));
            AttributeValue::Range(Range { min: a.min(b), max: a.max(b), center: f(r.center), count: r.count })
        }
        other => other.clone(),
    }
}

/// Rescales positions into [-1, 1] around the bounding-box center.
///
/// The box covers Point positions and Line midpoints. Each axis is divided by
/// its half-extent, floored at `min_aspect` times the larger half-extent so a
/// thin stroke is not stretched into a square. Lengths are divided by the
/// larger half-extent.
pub fn normalize<F: Scalar>(g: &ContourGraph<F>, min_aspect: F) -> Result<ContourGraph<F>, VectorizeError> {
    let positions: Vec<(F, F)> = g.nodes().filter_map(|n| n.position()).collect();
    if positions.is_empty() {
        return Err(VectorizeError::DegenerateBounds);
    }
    let fold = |pick: fn(&(F, F)) -> F| {
        positions.iter().map(pick).fold((F::infinity(), F::neg_infinity()), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (x0, x1) = fold(|p| p.0);
    let (y0, y1) = fold(|p| p.1);
    let two = F::lit(2.0);
    let (mx, my) = ((x0 + x1) / two, (y0 + y1) / two);
    let (cx, cy) = ((x1 - x0) / two, (y1 - y0) / two);
    let s = cx.max(cy);
    if !(s > F::zero()) {
        return Err(VectorizeError::DegenerateBounds);
    }
    let (dx, dy) = (cx.max(min_aspect * s), cy.max(min_aspect * s));

    let mut out = g.clone();
    for node in out.nodes_mut() {
        for (attr, value) in node.attrs.iter_mut() {
            *value = match attr {
                Attr::NormalizedX | Attr::NormalizedMidX => map_numeric(value, |v| (v - mx) / dx),
                Attr::NormalizedY | Attr::NormalizedMidY => map_numeric(value, |v| (v - my) / dy),
                Attr::Length => map_numeric(value, |v| v / s),
                _ => continue,
            };
        }
    }
    Ok(out)
}
