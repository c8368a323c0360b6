//! Planar patch-antenna arrays, wrap-around area geometry, and UE mobility.
//!
//! All positions are 3-vectors in meters. The coverage area is a square on
//! the x-y plane that (by default) wraps around at the edges, so distances
//! on x and y are torus distances while z stays Euclidean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default AP surface height above ground, meters.
pub const DEFAULT_AP_HEIGHT: f64 = 10.0;
/// Default UE surface height above ground, meters.
pub const DEFAULT_UE_HEIGHT: f64 = 1.5;

pub type Point3 = [f64; 3];

/// Square coverage area, optionally wrapped at the edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaConfig {
    /// Side length of the square, meters.
    pub side_length: f64,
    /// Wrap x and y around at the edges (torus topology).
    pub wrap: bool,
}

impl Default for AreaConfig {
    fn default() -> Self {
        Self {
            side_length: 1000.0,
            wrap: true,
        }
    }
}

impl AreaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.side_length > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "area side_length must be > 0, got {}",
                self.side_length
            )));
        }
        Ok(())
    }

    /// Maps x and y into `[0, side_length)`. z is never wrapped.
    pub fn wrap_point(&self, p: Point3) -> Point3 {
        if !self.wrap {
            return p;
        }
        [
            p[0].rem_euclid(self.side_length),
            p[1].rem_euclid(self.side_length),
            p[2],
        ]
    }

    pub fn contains(&self, p: Point3) -> bool {
        (0.0..self.side_length).contains(&p[0]) && (0.0..self.side_length).contains(&p[1])
    }
}

/// Regular grid of patch antennas on the x-y plane, indexed row-by-row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarArray {
    /// Elements along x (per row).
    pub n_h: usize,
    /// Elements along y (rows).
    pub n_v: usize,
    /// Element spacing, meters.
    pub spacing: f64,
    /// Geometric center of the surface.
    pub center: Point3,
    /// Element coordinates, index `b = row * n_h + col`.
    pub element_coords: Vec<Point3>,
}

impl PlanarArray {
    pub fn n_elements(&self) -> usize {
        self.n_h * self.n_v
    }

    /// Horizontal surface side length `n_h * spacing` (each patch occupies a
    /// spacing-sized cell). This is the length that bounds the wavenumber
    /// sampling set.
    pub fn len_x(&self) -> f64 {
        self.n_h as f64 * self.spacing
    }

    /// Vertical surface side length `n_v * spacing`.
    pub fn len_y(&self) -> f64 {
        self.n_v as f64 * self.spacing
    }

    /// Physical extent of the surface along its longer side.
    pub fn aperture(&self) -> f64 {
        self.len_x().max(self.len_y())
    }

    /// Element coordinates relative to the surface center.
    pub fn local_coords(&self) -> Vec<Point3> {
        self.element_coords
            .iter()
            .map(|p| {
                [
                    p[0] - self.center[0],
                    p[1] - self.center[1],
                    p[2] - self.center[2],
                ]
            })
            .collect()
    }

    /// Same array rigidly translated so its center lands on `center`.
    pub fn moved_to(&self, center: Point3) -> PlanarArray {
        let delta = [
            center[0] - self.center[0],
            center[1] - self.center[1],
            center[2] - self.center[2],
        ];
        PlanarArray {
            n_h: self.n_h,
            n_v: self.n_v,
            spacing: self.spacing,
            center,
            element_coords: self
                .element_coords
                .iter()
                .map(|p| [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]])
                .collect(),
        }
    }
}

/// A placed entity (AP or UE): its position and the surface it carries.
///
/// The surface center always coincides with the position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityState {
    pub position: Point3,
    pub array: PlanarArray,
}

impl EntityState {
    pub fn new(position: Point3, array: &PlanarArray) -> EntityState {
        EntityState {
            position,
            array: array.moved_to(position),
        }
    }
}

/// Lays out `n_h * n_v` elements on a regular x-y grid centered at `center`,
/// constant z, row-by-row index order.
pub fn build_planar_array(
    n_h: usize,
    n_v: usize,
    spacing: f64,
    center: Point3,
) -> Result<PlanarArray> {
    if n_h < 1 || n_v < 1 {
        return Err(Error::InvalidArgument(format!(
            "array dimensions must be >= 1, got {n_h}x{n_v}"
        )));
    }
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "element spacing must be > 0, got {spacing}"
        )));
    }
    let mut element_coords = Vec::with_capacity(n_h * n_v);
    for row in 0..n_v {
        for col in 0..n_h {
            let x = (col as f64 - (n_h as f64 - 1.0) / 2.0) * spacing;
            let y = (row as f64 - (n_v as f64 - 1.0) / 2.0) * spacing;
            element_coords.push([center[0] + x, center[1] + y, center[2]]);
        }
    }
    Ok(PlanarArray {
        n_h,
        n_v,
        spacing,
        center,
        element_coords,
    })
}

/// Torus metric on x,y (minimum over +/- side_length shifts), Euclidean in z.
pub fn wrapped_distance(p: Point3, q: Point3, area: &AreaConfig) -> f64 {
    let (dx, dy) = if area.wrap {
        let side = area.side_length;
        let dx = (p[0] - q[0]).abs();
        let dy = (p[1] - q[1]).abs();
        (dx.min(side - dx), dy.min(side - dy))
    } else {
        ((p[0] - q[0]).abs(), (p[1] - q[1]).abs())
    };
    let dz = p[2] - q[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Moves a UE by `step` meters along `angle` (radians, in the x-y plane),
/// wrapping the new position into the area. The carried surface translates
/// with it.
pub fn step_ue(state: &EntityState, step: f64, angle: f64, area: &AreaConfig) -> Result<EntityState> {
    if step < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step must be >= 0, got {step}"
        )));
    }
    let raw = [
        state.position[0] + step * angle.cos(),
        state.position[1] + step * angle.sin(),
        state.position[2],
    ];
    let position = area.wrap_point(raw);
    Ok(EntityState::new(position, &state.array))
}
