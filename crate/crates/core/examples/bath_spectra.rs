//! Bath responses at the dressed transition frequencies and the piston
//! channel they induce, for the gain layout, its mirror image and the weak pump.

use qpiston::bath::{
    desk_scale_baths, spectral_separation_report, weak_pump_baths, BathLabel, BathPair, BathSpectrum, SpectralProfile,
};
use qpiston::channel::PistonChannel;
use qpiston::joint::{qubit_steady_state, EngineParams};

fn describe(name: &str, baths: BathPair) -> qpiston::Result<()> {
    let rep = spectral_separation_report(&baths, 10.0, 1.0)?;
    let s = rep.samples;
    println!("{name}");
    println!("  G(nu_+): hot {:.4e}  cold {:.4e}", s.upper.hot.plus, s.upper.cold.plus);
    println!("  G(nu_-): hot {:.4e}  cold {:.4e}", s.lower.hot.plus, s.lower.cold.plus);
    println!(
        "  gain layout {}, reversed {}, overlap {}",
        rep.gain_favorable, rep.reversed_layout, rep.overlap_warning
    );
    let params = EngineParams::new(10.0, 1.0, 0.05, 20, baths)?;
    let (p0, p1) = qubit_steady_state(&params)?;
    let ch = PistonChannel::from_engine(&params)?;
    println!(
        "  qubit ({p0:.5}, {p1:.5}); gamma {:.4e}, D {:.4e}, completely positive {}",
        ch.gamma,
        ch.diffusion,
        ch.is_completely_positive()
    );
    Ok(())
}

fn main() -> qpiston::Result<()> {
    describe("desk scale", desk_scale_baths())?;
    let hot = BathSpectrum::new(
        BathLabel::Hot,
        20.0,
        SpectralProfile::Lorentzian {
            center: 9.0,
            width: 0.2,
            height: 1.0,
        },
    )?;
    let cold = BathSpectrum::new(
        BathLabel::Cold,
        2.0,
        SpectralProfile::FlatWindow {
            lo: 10.5,
            hi: 12.0,
            height: 1.0,
        },
    )?;
    describe("mirrored: hot line at nu_-", BathPair::new(hot, cold))?;
    describe("weak pump", weak_pump_baths())?;
    Ok(())
}
