use nalgebra::ComplexField;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

/// Matrix entry type: real (`f64`) or circularly-symmetric complex
/// (`Complex<f64>`) Gaussian models.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    const COMPLEX: bool;

    /// Prefactor of `ln det` in Gaussian entropies: `1/2` real, `1` complex.
    const MI_FACTOR: f64;

    /// A unit-variance standard normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const COMPLEX: bool = false;
    const MI_FACTOR: f64 = 0.5;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for Complex<f64> {
    const COMPLEX: bool = true;
    const MI_FACTOR: f64 = 1.0;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}
