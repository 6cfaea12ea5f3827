//! Gaussian-window STFT of Hermite signals: isometry, Lieb bound and a localized quadratic form.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tfloc::phase_space::Shape;
use tfloc::stft::{demo_setup, hermite_signal, lieb_from_spectrogram, quadratic_form_check, random_hermite_coeffs, Signal, Spectrogram};

fn main() -> tfloc::Result<()> {
    let (half_width, dt, spec) = demo_setup();
    let mut signals = vec![("gaussian".to_string(), Signal::gaussian(half_width, dt)?)];
    for k in [1, 3] {
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        signals.push((format!("hermite {k}"), hermite_signal(&c, half_width, dt)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    signals.push(("random".into(), hermite_signal(&random_hermite_coeffs(&mut rng, 6), half_width, dt)?));

    let disc = Shape::ball([0.0, 0.0], 1.0)?.rasterize(&spec)?;
    for (name, f) in &signals {
        let s = Spectrogram::new(f, &spec)?;
        let n2 = f.norm_sq();
        print!("{name:<10} ‖Vf‖²/‖f‖² = {:.8}", s.total_energy() / n2);
        for p in [3.0, 4.0, 6.0] {
            let l = lieb_from_spectrogram(&s, n2, p);
            print!("  slack(p={p}) {:.4}", l.slack / l.rhs);
        }
        let q = quadratic_form_check(f, &disc)?;
        println!("  disc energy {:.5}", q.lhs / n2);
    }
    Ok(())
}
