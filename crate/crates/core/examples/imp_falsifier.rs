//! Certify that the ball and polydisc Hardy spaces lack the invertible
//! multiplier property: the slice integral `g` has a positive Laplacian.

use coronakit::imp::{falsify_report, standard_grid, FalsifierConfig};
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let grid = standard_grid(0.8, 20, 21);
    for (alpha, n) in [(0.3, 2), (0.5, 2), (0.7, 2), (0.3, 3), (0.5, 3), (0.7, 3)] {
        let r = falsify_report(&FalsifierConfig::ball(C64::new(alpha, 0.0), n), &grid)?;
        println!(
            "ball  alpha={alpha} n={n}: min Δg = {:.6e}, g(0.6)-g(0) = {:.6e}, FD rel err = {:.2e}, monotone = {}",
            r.min_laplacian, r.g_rise, r.max_fd_relative_error, r.radial_monotone
        );
    }
    let r = falsify_report(&FalsifierConfig::polydisc(C64::new(0.5, 0.0), 2), &grid)?;
    println!("polydisc alpha=0.5: {} (reduces to ball n=2: {})", r.conclusion, r.polydisc_reduces_to_ball_n2);
    Ok(())
}
