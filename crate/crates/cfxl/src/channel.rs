//! Wavenumber-domain near-field channel synthesis.
//!
//! A planar surface of side lengths (L_x, L_y) supports a finite set of
//! propagating plane-wave harmonics: the integer lattice points inside the
//! ellipse (lx*lambda/L_x)^2 + (ly*lambda/L_y)^2 <= 1. Small-scale fading is
//! drawn as i.i.d. complex Gaussian coefficients on those points, shaped by a
//! variance profile, and mapped to antenna space through semi-orthogonal
//! spectral bases. Large-scale fading is free-space path loss at the surface
//! centers, with a per-element variant kept around to check the accuracy of
//! that approximation.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::PlanarArray;
use crate::scenario::Scenario;

/// Integer wavenumber sampling points supported by a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeEllipse {
    /// Points (lx, ly), sorted lexicographically. Always contains (0, 0) and
    /// is symmetric under negation.
    pub points: Vec<(i64, i64)>,
}

impl LatticeEllipse {
    /// Cardinality of the sampling set.
    pub fn n(&self) -> usize {
        self.points.len()
    }
}

/// Enumerates the integer points (lx, ly) with
/// (lx*wavelength/l_x)^2 + (ly*wavelength/l_y)^2 <= 1.
pub fn lattice_ellipse(l_x: f64, l_y: f64, wavelength: f64) -> Result<LatticeEllipse> {
    if !(l_x > 0.0 && l_y > 0.0 && wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "surface lengths and wavelength must be > 0, got ({l_x}, {l_y}, {wavelength})"
        )));
    }
    // Small slack keeps boundary points (e.g. L = wavelength exactly) in the
    // set despite rounding in L = n * spacing.
    const EPS: f64 = 1e-9;
    let bx = (l_x / wavelength + EPS).floor() as i64;
    let by = (l_y / wavelength + EPS).floor() as i64;
    let mut points = Vec::new();
    for lx in -bx..=bx {
        for ly in -by..=by {
            let ex = lx as f64 * wavelength / l_x;
            let ey = ly as f64 * wavelength / l_y;
            if ex * ex + ey * ey <= 1.0 + EPS {
                points.push((lx, ly));
            }
        }
    }
    points.sort_unstable();
    Ok(LatticeEllipse { points })
}

/// Semi-orthogonal plane-wave basis of a planar surface: one unit-norm column
/// per sampling point, rows indexed by antenna element.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    /// N x n complex matrix, N antenna elements, n sampling points.
    pub u: DMatrix<Complex64>,
    /// Sampling point of each column, same order as the ellipse.
    pub points: Vec<(i64, i64)>,
}

impl SpectralBasis {
    pub fn n_elements(&self) -> usize {
        self.u.nrows()
    }

    pub fn n_points(&self) -> usize {
        self.u.ncols()
    }
}

/// Builds the spectral basis of `array` on the sampling set `ellipse`.
///
/// Column (lx, ly) has element b proportional to
/// exp(-j(kx x_b + ky y_b + kz z_b)) with kx = 2 pi lx / L_x,
/// ky = 2 pi ly / L_y, kz = sqrt((2 pi / lambda)^2 - kx^2 - ky^2), element
/// coordinates taken relative to the surface center. Columns are scaled to
/// unit norm, which makes U^H U = I exactly on a regular grid. A rigid
/// translation of the surface only multiplies each column by a unit-modulus
/// constant, so placement enters the channel solely through the large-scale
/// coefficient.
pub fn spectral_basis(
    array: &PlanarArray,
    ellipse: &LatticeEllipse,
    wavelength: f64,
) -> Result<SpectralBasis> {
    if !(wavelength > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavelength must be > 0, got {wavelength}"
        )));
    }
    let n = array.n_elements();
    let l_x = array.len_x();
    let l_y = array.len_y();
    let k0 = TAU / wavelength;
    let scale = 1.0 / (n as f64).sqrt();
    let coords = array.local_coords();
    let mut u = DMatrix::<Complex64>::zeros(n, ellipse.n());
    for (c, &(lx, ly)) in ellipse.points.iter().enumerate() {
        let kx = TAU * lx as f64 / l_x;
        let ky = TAU * ly as f64 / l_y;
        let kz_sq = k0 * k0 - kx * kx - ky * ky;
        if kz_sq < -1e-9 * k0 * k0 {
            // Cannot happen for points inside the ellipse.
            return Err(Error::Numeric(format!(
                "evanescent sampling point ({lx}, {ly}): kz^2 = {kz_sq}"
            )));
        }
        let kz = kz_sq.max(0.0).sqrt();
        for (b, p) in coords.iter().enumerate() {
            let phase = -(kx * p[0] + ky * p[1] + kz * p[2]);
            u[(b, c)] = Complex64::from_polar(scale, phase);
        }
    }
    Ok(SpectralBasis {
        u,
        points: ellipse.points.clone(),
    })
}

/// Standard deviations of the wavenumber-domain coefficients, one entry per
/// (receive point, transmit point) pair. Normalized so the squared entries
/// sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfile {
    /// n_r x n_s matrix of non-negative standard deviations.
    pub sigma: DMatrix<f64>,
}

impl VarianceProfile {
    pub fn n_r(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn n_s(&self) -> usize {
        self.sigma.ncols()
    }

    /// Sum of squared entries (1 after normalization, 0 for the all-zero
    /// profile).
    pub fn total_power(&self) -> f64 {
        self.sigma.iter().map(|s| s * s).sum()
    }
}

/// How the per-point variances are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// Uniform over all sampling-point pairs.
    Isotropic,
    /// Separable weights, one per receive and transmit sampling point (in
    /// ellipse order). Entries must be non-negative.
    Custom {
        sigma_r: Vec<f64>,
        sigma_s: Vec<f64>,
    },
}

/// Builds the separable variance profile sigma(l, m) = sigma_r(l) * sigma_s(m)
/// on the two sampling sets, rescaled so the squared entries sum to one.
pub fn variance_profile(
    ellipse_r: &LatticeEllipse,
    ellipse_s: &LatticeEllipse,
    kind: &ProfileKind,
) -> Result<VarianceProfile> {
    let n_r = ellipse_r.n();
    let n_s = ellipse_s.n();
    if n_r == 0 || n_s == 0 {
        return Err(Error::InvalidArgument(
            "sampling sets must be non-empty".into(),
        ));
    }
    let (wr, ws) = match kind {
        ProfileKind::Isotropic => (vec![1.0; n_r], vec![1.0; n_s]),
        ProfileKind::Custom { sigma_r, sigma_s } => {
            if sigma_r.len() != n_r || sigma_s.len() != n_s {
                return Err(Error::InvalidArgument(format!(
                    "custom profile lengths ({}, {}) do not match sampling sets ({n_r}, {n_s})",
                    sigma_r.len(),
                    sigma_s.len()
                )));
            }
            if sigma_r.iter().chain(sigma_s.iter()).any(|&v| v < 0.0) {
                return Err(Error::InvalidArgument(
                    "custom profile entries must be non-negative".into(),
                ));
            }
            (sigma_r.clone(), sigma_s.clone())
        }
    };
    let mut sigma = DMatrix::<f64>::zeros(n_r, n_s);
    for i in 0..n_r {
        for j in 0..n_s {
            sigma[(i, j)] = wr[i] * ws[j];
        }
    }
    let total: f64 = sigma.iter().map(|s| s * s).sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument(
            "variance profile has zero total power".into(),
        ));
    }
    sigma /= total.sqrt();
    Ok(VarianceProfile { sigma })
}

/// One i.i.d. draw of a unit circularly-symmetric complex Gaussian.
fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws the wavenumber-domain coefficient matrix sigma .* W with
/// W ~ CN(0, I), deterministic given the seed. Row-major draw order.
pub fn sample_coefficients(profile: &VarianceProfile, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n_r, n_s) = (profile.n_r(), profile.n_s());
    let mut a = DMatrix::<Complex64>::zeros(n_r, n_s);
    for i in 0..n_r {
        for j in 0..n_s {
            a[(i, j)] = complex_gaussian(&mut rng) * profile.sigma[(i, j)];
        }
    }
    a
}

/// Draws one small-scale fading realization
/// S = sqrt(N_r N_s) U_r (sigma .* W) U_s^H.
///
/// Under unit-norm basis columns and unit total profile power this satisfies
/// E{||S||_F^2} = N_r * N_s. Deterministic given the seed.
pub fn sample_small_scale(
    basis_r: &SpectralBasis,
    basis_s: &SpectralBasis,
    profile: &VarianceProfile,
    seed: u64,
) -> Result<DMatrix<Complex64>> {
    if profile.n_r() != basis_r.n_points() || profile.n_s() != basis_s.n_points() {
        return Err(Error::InvalidArgument(format!(
            "profile shape ({}, {}) does not match bases ({}, {})",
            profile.n_r(),
            profile.n_s(),
            basis_r.n_points(),
            basis_s.n_points()
        )));
    }
    let a = sample_coefficients(profile, seed);
    let scale = ((basis_r.n_elements() * basis_s.n_elements()) as f64).sqrt();
    Ok((&basis_r.u * a * basis_s.u.adjoint()).scale(scale))
}

/// Free-space large-scale coefficient
/// beta = sqrt(g_t * pattern_f) * wavelength / (4 pi d).
pub fn large_scale_coeff(distance: f64, wavelength: f64, g_t: f64, pattern_f: f64) -> Result<f64> {
    if distance == 0.0 {
        return Err(Error::Singularity("zero propagation distance".into()));
    }
    if distance < 0.0 || g_t < 0.0 || pattern_f < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "distance, gain, and pattern must be non-negative, got ({distance}, {g_t}, {pattern_f})"
        )));
    }
    Ok((g_t * pattern_f).sqrt() * wavelength / (4.0 * PI * distance))
}

/// Exact per-element-pair large-scale matrix L[b, u] over the two surfaces'
/// global element coordinates. Used to quantify the error of collapsing the
/// per-pair distances to the single center distance.
pub fn per_element_large_scale(
    array_r: &PlanarArray,
    array_s: &PlanarArray,
    wavelength: f64,
    g_t: f64,
    pattern_f: f64,
) -> Result<DMatrix<f64>> {
    let n_r = array_r.n_elements();
    let n_s = array_s.n_elements();
    let mut l = DMatrix::<f64>::zeros(n_r, n_s);
    for (b, r) in array_r.element_coords.iter().enumerate() {
        for (u, s) in array_s.element_coords.iter().enumerate() {
            let d = ((r[0] - s[0]).powi(2) + (r[1] - s[1]).powi(2) + (r[2] - s[2]).powi(2)).sqrt();
            if d == 0.0 {
                return Err(Error::Singularity(format!(
                    "coincident antenna elements at receive {b}, transmit {u}"
                )));
            }
            l[(b, u)] = (g_t * pattern_f).sqrt() * wavelength / (4.0 * PI * d);
        }
    }
    Ok(l)
}

/// One (AP, UE) channel draw: H = beta * S.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub h: DMatrix<Complex64>,
    pub beta: f64,
    pub s: DMatrix<Complex64>,
}

/// Assembles the channel between AP `m` and UE `k` of a scenario: large-scale
/// coefficient over the wrapped center distance times a fresh small-scale
/// draw. Deterministic given the seed.
pub fn assemble_channel(scn: &Scenario, m: usize, k: usize, seed: u64) -> Result<ChannelRealization> {
    if m >= scn.aps.len() || k >= scn.ues.len() {
        return Err(Error::InvalidArgument(format!(
            "AP index {m} or UE index {k} out of range ({} APs, {} UEs)",
            scn.aps.len(),
            scn.ues.len()
        )));
    }
    let beta = scn.beta(m, k)?;
    let s = sample_small_scale(&scn.basis_r, &scn.basis_s, &scn.profile, seed)?;
    Ok(ChannelRealization {
        h: s.scale(beta),
        beta,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_planar_array;
    use approx::assert_relative_eq;

    const LAMBDA: f64 = 0.01;

    fn default_ap_basis() -> (LatticeEllipse, SpectralBasis) {
        let array = build_planar_array(9, 9, LAMBDA / 3.0, [0.0, 0.0, 10.0]).unwrap();
        let ell = lattice_ellipse(array.len_x(), array.len_y(), LAMBDA).unwrap();
        let basis = spectral_basis(&array, &ell, LAMBDA).unwrap();
        (ell, basis)
    }

    fn default_ue_basis() -> (LatticeEllipse, SpectralBasis) {
        let array = build_planar_array(3, 3, LAMBDA / 3.0, [0.0, 0.0, 1.5]).unwrap();
        let ell = lattice_ellipse(array.len_x(), array.len_y(), LAMBDA).unwrap();
        let basis = spectral_basis(&array, &ell, LAMBDA).unwrap();
        (ell, basis)
    }

    #[test]
    fn sub_wavelength_surface_keeps_only_origin() {
        let ell = lattice_ellipse(0.5 * LAMBDA, 0.5 * LAMBDA, LAMBDA).unwrap();
        assert_eq!(ell.points, vec![(0, 0)]);
    }

    #[test]
    fn wavelength_sized_surface_has_five_points() {
        let ell = lattice_ellipse(LAMBDA, LAMBDA, LAMBDA).unwrap();
        assert_eq!(ell.n(), 5);
        assert!(ell.points.contains(&(0, 0)));
        assert!(ell.points.contains(&(1, 0)));
        assert!(ell.points.contains(&(-1, 0)));
        assert!(ell.points.contains(&(0, 1)));
        assert!(ell.points.contains(&(0, -1)));
    }

    #[test]
    fn default_ap_surface_has_29_points() {
        // 9 elements per side at lambda/3 spacing: L = 3 lambda.
        let ell = lattice_ellipse(3.0 * LAMBDA, 3.0 * LAMBDA, LAMBDA).unwrap();
        assert_eq!(ell.n(), 29);
    }

    #[test]
    fn ellipse_is_negation_symmetric() {
        let ell = lattice_ellipse(2.7 * LAMBDA, 1.3 * LAMBDA, LAMBDA).unwrap();
        for &(lx, ly) in &ell.points {
            assert!(ell.points.contains(&(-lx, -ly)));
        }
        assert!(ell.points.contains(&(0, 0)));
    }

    #[test]
    fn single_element_basis_is_unit_modulus() {
        let array = build_planar_array(1, 1, LAMBDA / 3.0, [0.0; 3]).unwrap();
        let ell = lattice_ellipse(array.len_x(), array.len_y(), LAMBDA).unwrap();
        let basis = spectral_basis(&array, &ell, LAMBDA).unwrap();
        assert_eq!(basis.u.shape(), (1, 1));
        assert_relative_eq!(basis.u[(0, 0)].norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn dc_column_is_constant() {
        let (_, basis) = default_ue_basis();
        let dc = basis.points.iter().position(|&p| p == (0, 0)).unwrap();
        let first = basis.u[(0, dc)];
        for b in 0..basis.n_elements() {
            assert_relative_eq!((basis.u[(b, dc)] - first).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn basis_is_semi_orthogonal() {
        let (_, basis) = default_ap_basis();
        let gram = basis.u.adjoint() * &basis.u;
        let eye = DMatrix::<Complex64>::identity(gram.nrows(), gram.ncols());
        assert!((gram - eye).norm() < 1e-9);
    }

    #[test]
    fn semi_orthogonality_over_random_grids() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n_h = rand::Rng::random_range(&mut rng, 1..=10usize);
            let n_v = rand::Rng::random_range(&mut rng, 1..=10usize);
            let spacing = rand::Rng::random_range(&mut rng, 0.05..0.49) * LAMBDA;
            let array = build_planar_array(n_h, n_v, spacing, [0.0; 3]).unwrap();
            let ell = lattice_ellipse(array.len_x(), array.len_y(), LAMBDA).unwrap();
            let basis = spectral_basis(&array, &ell, LAMBDA).unwrap();
            let gram = basis.u.adjoint() * &basis.u;
            let eye = DMatrix::<Complex64>::identity(gram.nrows(), gram.ncols());
            assert!((gram - eye).norm() < 1e-9, "grid {n_h}x{n_v} at {spacing}");
        }
    }

    #[test]
    fn isotropic_profile_is_uniform_and_normalized() {
        let er = lattice_ellipse(3.0 * LAMBDA, 3.0 * LAMBDA, LAMBDA).unwrap();
        let es = lattice_ellipse(LAMBDA, LAMBDA, LAMBDA).unwrap();
        let p = variance_profile(&er, &es, &ProfileKind::Isotropic).unwrap();
        assert_eq!(p.sigma.shape(), (29, 5));
        for v in p.sigma.iter() {
            assert_relative_eq!(v * v, 1.0 / 145.0, max_relative = 1e-12);
        }
        assert_relative_eq!(p.total_power(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_profile_is_one() {
        let e1 = lattice_ellipse(0.5 * LAMBDA, 0.5 * LAMBDA, LAMBDA).unwrap();
        let p = variance_profile(&e1, &e1, &ProfileKind::Isotropic).unwrap();
        assert_relative_eq!(p.sigma[(0, 0)], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn custom_profile_normalizes_and_rejects_negatives() {
        let er = lattice_ellipse(LAMBDA, LAMBDA, LAMBDA).unwrap();
        let es = lattice_ellipse(0.5 * LAMBDA, 0.5 * LAMBDA, LAMBDA).unwrap();
        let p = variance_profile(
            &er,
            &es,
            &ProfileKind::Custom {
                sigma_r: vec![1.0, 2.0, 3.0, 4.0, 5.0],
                sigma_s: vec![0.7],
            },
        )
        .unwrap();
        assert_relative_eq!(p.total_power(), 1.0, epsilon = 1e-12);

        let bad = variance_profile(
            &er,
            &es,
            &ProfileKind::Custom {
                sigma_r: vec![1.0, -2.0, 3.0, 4.0, 5.0],
                sigma_s: vec![0.7],
            },
        );
        assert!(bad.is_err());
    }

    #[test]
    fn small_scale_energy_matches_element_count() {
        let (er, basis_r) = default_ap_basis();
        let (es, basis_s) = default_ue_basis();
        let profile = variance_profile(&er, &es, &ProfileKind::Isotropic).unwrap();
        let n_rs = (basis_r.n_elements() * basis_s.n_elements()) as f64;
        let n_draws = 2000;
        let mut energies = Vec::with_capacity(n_draws);
        for t in 0..n_draws {
            let s = sample_small_scale(&basis_r, &basis_s, &profile, 1000 + t as u64).unwrap();
            energies.push(s.norm_squared() / n_rs);
        }
        let mean: f64 = energies.iter().sum::<f64>() / n_draws as f64;
        let var: f64 =
            energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n_draws - 1) as f64;
        let stderr = (var / n_draws as f64).sqrt();
        assert!(
            (mean - 1.0).abs() < 3.0 * stderr,
            "mean {mean}, stderr {stderr}"
        );
    }

    #[test]
    fn small_scale_is_deterministic_and_zero_for_zero_profile() {
        let (er, basis_r) = default_ue_basis();
        let (es, basis_s) = default_ue_basis();
        let profile = variance_profile(&er, &es, &ProfileKind::Isotropic).unwrap();
        let a = sample_small_scale(&basis_r, &basis_s, &profile, 42).unwrap();
        let b = sample_small_scale(&basis_r, &basis_s, &profile, 42).unwrap();
        assert_eq!(a, b);

        let zero = VarianceProfile {
            sigma: DMatrix::zeros(er.n(), es.n()),
        };
        let s = sample_small_scale(&basis_r, &basis_s, &zero, 42).unwrap();
        assert_eq!(s.norm_squared(), 0.0);
    }

    #[test]
    fn covariance_per_sampling_point() {
        // Projecting draws back onto the bases recovers N_r N_s sigma^2 per
        // point pair.
        let (er, basis_r) = default_ue_basis();
        let (es, basis_s) = default_ue_basis();
        let profile = variance_profile(
            &er,
            &es,
            &ProfileKind::Custom {
                sigma_r: vec![1.0, 0.5, 2.0, 0.3, 1.3],
                sigma_s: vec![0.2, 1.0, 0.7, 1.5, 0.4],
            },
        )
        .unwrap();
        let n_rs = (basis_r.n_elements() * basis_s.n_elements()) as f64;
        let n_draws = 10_000;
        let mut second = DMatrix::<f64>::zeros(er.n(), es.n());
        for t in 0..n_draws {
            let s = sample_small_scale(&basis_r, &basis_s, &profile, 777 + t as u64).unwrap();
            let coeff = basis_r.u.adjoint() * s * &basis_s.u;
            for i in 0..er.n() {
                for j in 0..es.n() {
                    second[(i, j)] += coeff[(i, j)].norm_sqr() / n_draws as f64;
                }
            }
        }
        for i in 0..er.n() {
            for j in 0..es.n() {
                let expect = n_rs * profile.sigma[(i, j)].powi(2);
                // |coeff|^2 is exponential with std = mean; 3 standard errors.
                let tol = 3.0 * expect / (n_draws as f64).sqrt() + 1e-12;
                assert!(
                    (second[(i, j)] - expect).abs() < tol,
                    "point ({i},{j}): got {}, expected {expect}",
                    second[(i, j)]
                );
            }
        }
    }

    #[test]
    fn large_scale_basics() {
        let beta = large_scale_coeff(LAMBDA, LAMBDA, 1.0, 1.0).unwrap();
        assert_relative_eq!(beta, 1.0 / (4.0 * PI), max_relative = 1e-12);

        let b1 = large_scale_coeff(100.0, LAMBDA, 1.0, 1.0).unwrap();
        let b2 = large_scale_coeff(200.0, LAMBDA, 1.0, 1.0).unwrap();
        assert_relative_eq!(b1, 2.0 * b2, max_relative = 1e-12);

        // g_t = 2, pattern = cos(0) = 1 satisfies the unit-integral pattern
        // normalization and scales beta by sqrt(2).
        let b3 = large_scale_coeff(50.0, LAMBDA, 2.0, 1.0).unwrap();
        assert_relative_eq!(
            b3,
            2f64.sqrt() * LAMBDA / (4.0 * PI * 50.0),
            max_relative = 1e-12
        );

        assert!(large_scale_coeff(0.0, LAMBDA, 1.0, 1.0).is_err());
    }

    #[test]
    fn per_element_matches_center_when_collapsed() {
        let a = build_planar_array(1, 1, 0.003, [0.0, 0.0, 10.0]).unwrap();
        let b = build_planar_array(1, 1, 0.003, [30.0, 40.0, 10.0]).unwrap();
        let l = per_element_large_scale(&a, &b, LAMBDA, 1.0, 1.0).unwrap();
        let beta = large_scale_coeff(50.0, LAMBDA, 1.0, 1.0).unwrap();
        assert_relative_eq!(l[(0, 0)], beta, max_relative = 1e-12);
    }

    #[test]
    fn per_element_deviation_small_in_far_zone() {
        let ap = build_planar_array(9, 9, LAMBDA / 3.0, [0.0, 0.0, 10.0]).unwrap();
        let d = 100.0 * ap.aperture();
        let ue = build_planar_array(3, 3, LAMBDA / 3.0, [d, 0.0, 10.0]).unwrap();
        let l = per_element_large_scale(&ap, &ue, LAMBDA, 1.0, 1.0).unwrap();
        let beta = large_scale_coeff(d, LAMBDA, 1.0, 1.0).unwrap();
        let max_rel = l
            .iter()
            .map(|v| ((v - beta) / beta).abs())
            .fold(0.0, f64::max);
        assert!(max_rel < 0.01, "max relative deviation {max_rel}");
    }

    #[test]
    fn per_element_transposes_under_swap() {
        let a = build_planar_array(2, 3, 0.003, [0.0, 0.0, 10.0]).unwrap();
        let b = build_planar_array(3, 1, 0.004, [55.0, 20.0, 1.5]).unwrap();
        let lab = per_element_large_scale(&a, &b, LAMBDA, 1.0, 1.0).unwrap();
        let lba = per_element_large_scale(&b, &a, LAMBDA, 1.0, 1.0).unwrap();
        assert_relative_eq!((lab.transpose() - lba).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn coincident_elements_error() {
        let a = build_planar_array(2, 2, 0.003, [0.0, 0.0, 1.0]).unwrap();
        assert!(per_element_large_scale(&a, &a, LAMBDA, 1.0, 1.0).is_err());
    }
}
