//! A micromaser pumped by excited atoms next to the quantized piston bound.

use qpiston::engine::micromaser_compare;

fn main() -> qpiston::Result<()> {
    for (nu, omega0) in [(1.0, 10.0), (0.5, 10.0), (2.0, 10.0)] {
        let m = micromaser_compare(100.0, 0.05, 1.0, nu, omega0)?;
        println!(
            "nu = {nu}, omega0 = {omega0}: maser eta {:.4}, piston eta {:.4}, P_out {:.4e}, P_in {:.4e}",
            m.eta_max, m.eta_quantized, m.generated_power, m.input_power
        );
        if let Some(w) = m.warning {
            println!("  {w}");
        }
    }
    Ok(())
}
