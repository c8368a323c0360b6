//! Scenario state: system-level configuration and the placed AP/UE entities
//! with their shared spectral machinery.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    lattice_ellipse, large_scale_coeff, spectral_basis, variance_profile, LatticeEllipse,
    ProfileKind, SpectralBasis, VarianceProfile,
};
use crate::error::{Error, Result};
use crate::geometry::{
    build_planar_array, step_ue, wrapped_distance, AreaConfig, EntityState, Point3,
    DEFAULT_AP_HEIGHT, DEFAULT_UE_HEIGHT,
};

/// Stable seed derivation: one master seed fans out into independent streams
/// keyed by integer tags (AP index, UE index, step, ...).
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    let mut s = mix(master ^ GOLDEN);
    for &p in parts {
        s = mix(s ^ p.wrapping_mul(GOLDEN));
    }
    s
}

/// Single source of scenario truth: counts, array shapes, spacings,
/// wavelength, area, and radio constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemConfig {
    /// Number of APs.
    pub num_aps: usize,
    /// Number of UEs.
    pub num_ues: usize,
    /// AP surface shape (horizontal x vertical elements).
    pub ap_elements_h: usize,
    pub ap_elements_v: usize,
    /// UE surface shape.
    pub ue_elements_h: usize,
    pub ue_elements_v: usize,
    /// Element spacings in wavelengths (must be < 0.5).
    pub ap_spacing_wavelengths: f64,
    pub ue_spacing_wavelengths: f64,
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    pub area: AreaConfig,
    pub ap_height: f64,
    pub ue_height: f64,
    /// Per-UE transmit power cap, watts.
    pub max_power: f64,
    /// Noise power per receive antenna, watts.
    pub noise_power: f64,
    /// Antenna gain and (angle-independent) radiation pattern value.
    pub antenna_gain: f64,
    pub pattern: f64,
    /// Explicit AP x-y positions; grid placement when absent.
    pub ap_positions: Option<Vec<[f64; 2]>>,
    /// Explicit UE x-y positions; uniform random placement when absent.
    pub ue_positions: Option<Vec<[f64; 2]>>,
    /// Optional separable variance profile weights (both present = custom).
    pub profile_sigma_r: Option<Vec<f64>>,
    pub profile_sigma_s: Option<Vec<f64>>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            num_aps: 9,
            num_ues: 6,
            ap_elements_h: 9,
            ap_elements_v: 9,
            ue_elements_h: 3,
            ue_elements_v: 3,
            ap_spacing_wavelengths: 1.0 / 3.0,
            ue_spacing_wavelengths: 1.0 / 3.0,
            wavelength: 0.01,
            area: AreaConfig::default(),
            ap_height: DEFAULT_AP_HEIGHT,
            ue_height: DEFAULT_UE_HEIGHT,
            max_power: 0.2,
            noise_power: default_noise_power(),
            antenna_gain: 1.0,
            pattern: 1.0,
            ap_positions: None,
            ue_positions: None,
            profile_sigma_r: None,
            profile_sigma_s: None,
        }
    }
}

/// -96 dBm in watts.
fn default_noise_power() -> f64 {
    10f64.powf(-9.6) * 1e-3
}

impl SystemConfig {
    pub fn n_r(&self) -> usize {
        self.ap_elements_h * self.ap_elements_v
    }

    pub fn n_s(&self) -> usize {
        self.ue_elements_h * self.ue_elements_v
    }

    pub fn ap_spacing(&self) -> f64 {
        self.ap_spacing_wavelengths * self.wavelength
    }

    pub fn ue_spacing(&self) -> f64 {
        self.ue_spacing_wavelengths * self.wavelength
    }

    pub fn validate(&self) -> Result<()> {
        self.area.validate()?;
        if self.num_aps == 0 || self.num_ues == 0 {
            return Err(Error::Config("need at least one AP and one UE".into()));
        }
        if self.ap_elements_h == 0
            || self.ap_elements_v == 0
            || self.ue_elements_h == 0
            || self.ue_elements_v == 0
        {
            return Err(Error::Config("array dimensions must be >= 1".into()));
        }
        if !(self.wavelength > 0.0) {
            return Err(Error::Config(format!(
                "wavelength must be > 0, got {}",
                self.wavelength
            )));
        }
        for (name, s) in [
            ("ap", self.ap_spacing_wavelengths),
            ("ue", self.ue_spacing_wavelengths),
        ] {
            if !(s > 0.0 && s < 0.5) {
                return Err(Error::Config(format!(
                    "{name} spacing must be sub-wavelength (0, 0.5) wavelengths, got {s}"
                )));
            }
        }
        if !(self.max_power > 0.0) || !(self.noise_power > 0.0) {
            return Err(Error::Config(
                "max_power and noise_power must be > 0".into(),
            ));
        }
        if let Some(p) = &self.ap_positions {
            if p.len() != self.num_aps {
                return Err(Error::Config(format!(
                    "ap_positions has {} entries, expected {}",
                    p.len(),
                    self.num_aps
                )));
            }
        }
        if let Some(p) = &self.ue_positions {
            if p.len() != self.num_ues {
                return Err(Error::Config(format!(
                    "ue_positions has {} entries, expected {}",
                    p.len(),
                    self.num_ues
                )));
            }
        }
        if self.profile_sigma_r.is_some() != self.profile_sigma_s.is_some() {
            return Err(Error::Config(
                "profile_sigma_r and profile_sigma_s must be given together".into(),
            ));
        }
        Ok(())
    }

    fn profile_kind(&self) -> ProfileKind {
        match (&self.profile_sigma_r, &self.profile_sigma_s) {
            (Some(r), Some(s)) => ProfileKind::Custom {
                sigma_r: r.clone(),
                sigma_s: s.clone(),
            },
            _ => ProfileKind::Isotropic,
        }
    }
}

/// A fully placed scenario: entities plus the (shared) sampling sets, bases,
/// and variance profile. Arrays are identical across APs and across UEs, so
/// one basis per side serves every link.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: SystemConfig,
    pub aps: Vec<EntityState>,
    pub ues: Vec<EntityState>,
    pub ellipse_r: LatticeEllipse,
    pub ellipse_s: LatticeEllipse,
    pub basis_r: SpectralBasis,
    pub basis_s: SpectralBasis,
    pub profile: VarianceProfile,
}

impl Scenario {
    /// Places APs and UEs and precomputes the spectral machinery. UE
    /// placement (when not explicit) draws from `seed`.
    pub fn new(config: SystemConfig, seed: u64) -> Result<Scenario> {
        config.validate()?;
        let ap_array = build_planar_array(
            config.ap_elements_h,
            config.ap_elements_v,
            config.ap_spacing(),
            [0.0, 0.0, config.ap_height],
        )?;
        let ue_array = build_planar_array(
            config.ue_elements_h,
            config.ue_elements_v,
            config.ue_spacing(),
            [0.0, 0.0, config.ue_height],
        )?;
        let ellipse_r = lattice_ellipse(ap_array.len_x(), ap_array.len_y(), config.wavelength)?;
        let ellipse_s = lattice_ellipse(ue_array.len_x(), ue_array.len_y(), config.wavelength)?;
        let basis_r = spectral_basis(&ap_array, &ellipse_r, config.wavelength)?;
        let basis_s = spectral_basis(&ue_array, &ellipse_s, config.wavelength)?;
        let profile = variance_profile(&ellipse_r, &ellipse_s, &config.profile_kind())?;

        let ap_xy = match &config.ap_positions {
            Some(p) => p.clone(),
            None => grid_positions(config.num_aps, config.area.side_length),
        };
        let aps = ap_xy
            .iter()
            .map(|&[x, y]| EntityState::new([x, y, config.ap_height], &ap_array))
            .collect();

        let ue_xy = match &config.ue_positions {
            Some(p) => p.clone(),
            None => uniform_positions(
                config.num_ues,
                config.area.side_length,
                derive_seed(seed, &[stream::PLACEMENT]),
            ),
        };
        let ues = ue_xy
            .iter()
            .map(|&[x, y]| EntityState::new([x, y, config.ue_height], &ue_array))
            .collect();

        Ok(Scenario {
            config,
            aps,
            ues,
            ellipse_r,
            ellipse_s,
            basis_r,
            basis_s,
            profile,
        })
    }

    /// Large-scale coefficient of the (m, k) link over the wrapped center
    /// distance.
    pub fn beta(&self, m: usize, k: usize) -> Result<f64> {
        let d = wrapped_distance(
            self.aps[m].position,
            self.ues[k].position,
            &self.config.area,
        );
        large_scale_coeff(
            d,
            self.config.wavelength,
            self.config.antenna_gain,
            self.config.pattern,
        )
    }

    /// All large-scale coefficients as an M x K matrix.
    pub fn beta_matrix(&self) -> Result<DMatrix<f64>> {
        let (m_n, k_n) = (self.aps.len(), self.ues.len());
        let mut b = DMatrix::<f64>::zeros(m_n, k_n);
        for m in 0..m_n {
            for k in 0..k_n {
                b[(m, k)] = self.beta(m, k)?;
            }
        }
        Ok(b)
    }

    /// Moves UE `k` by (step, angle), wrapping into the area.
    pub fn move_ue(&mut self, k: usize, step: f64, angle: f64) -> Result<()> {
        self.ues[k] = step_ue(&self.ues[k], step, angle, &self.config.area)?;
        Ok(())
    }

    /// Redraws all UE positions uniformly (unless the config pins them).
    pub fn randomize_ue_positions(&mut self, seed: u64) {
        if self.config.ue_positions.is_some() {
            return;
        }
        let xy = uniform_positions(self.ues.len(), self.config.area.side_length, seed);
        for (ue, &[x, y]) in self.ues.iter_mut().zip(xy.iter()) {
            *ue = EntityState::new([x, y, self.config.ue_height], &ue.array);
        }
    }

    pub fn n_r(&self) -> usize {
        self.config.n_r()
    }

    pub fn n_s(&self) -> usize {
        self.config.n_s()
    }

    pub fn ue_positions_xy(&self) -> Vec<Point3> {
        self.ues.iter().map(|u| u.position).collect()
    }
}

/// Near-square grid of cell centers, row-major, first `n` cells.
fn grid_positions(n: usize, side: f64) -> Vec<[f64; 2]> {
    let g = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(g);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (row, col) = (i / g, i % g);
        out.push([
            (col as f64 + 0.5) * side / g as f64,
            (row as f64 + 0.5) * side / rows as f64,
        ]);
    }
    out
}

fn uniform_positions(n: usize, side: f64, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| [rng.random_range(0.0..side), rng.random_range(0.0..side)])
        .collect()
}

/// Tags that keep derived seed streams disjoint.
pub mod stream {
    pub const PLACEMENT: u64 = 1;
    pub const CHANNEL: u64 = 2;
    pub const TRAIN: u64 = 3;
    pub const MOMENTS: u64 = 4;
    pub const NETWORK: u64 = 5;
}
