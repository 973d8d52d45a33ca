//! Sweep presets for the standard figures.
//!
//! Shared figure parameters: ω_m = 1 (2π·1 MHz), Q = 10⁶ so γ_m = 10⁻⁶,
//! n_th = 10³, Γ₀ = Γ₁ = 0.25, g = 0.06, Δ re-solved for ω_bc = ω_m at every
//! point. Axis ranges are read off the plots. The Ω₀ axis starts one step
//! above zero because the undriven spin does not couple to the mode.

use nvsqueeze::SystemParams;

use crate::sweep::{Axis, Output, SweepSpec};

pub const FIGURES: [&str; 7] = ["fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

const OMEGA0_MAX: f64 = 1.4;
const LINE_POINTS: usize = 81;
const GRID_POINTS: usize = 81;

#[derive(Debug, thiserror::Error)]
#[error("unknown figure '{0}' (known: fig4 … fig10)")]
pub struct UnknownFigure(pub String);

pub fn figure_params() -> SystemParams {
    SystemParams { omega0: 0.5, omega1: 0.0, ..SystemParams::baseline() }
}

pub fn omega0_axis(count: usize) -> Axis {
    Axis::new("omega0", OMEGA0_MAX / count as f64, OMEGA0_MAX, count)
}

fn spec(base: SystemParams, axes: Vec<Axis>, outputs: Vec<Output>) -> SweepSpec {
    SweepSpec { base, axes, resonance_lock: true, outputs, two_mode: false, validate_with_oracle: false, oracle_stride: 10 }
}

pub fn figure_preset(name: &str) -> Result<SweepSpec, UnknownFigure> {
    let base = figure_params();
    let strong = SystemParams { omega1: -0.7, ..base };
    let line = || vec![omega0_axis(LINE_POINTS)];
    let grid = |second: Axis| vec![omega0_axis(GRID_POINTS), second];
    let sq = vec![Output::VarXMinusQuarter, Output::VarX, Output::NSs];
    Ok(match name {
        "fig4" => spec(base, line(), vec![Output::NSs, Output::Stability]),
        "fig5" => spec(base, line(), vec![Output::VarX, Output::VarXMinusQuarter, Output::NSs]),
        "fig6" => spec(base, line(), vec![Output::AMinus, Output::APlus]),
        "fig7" => spec(base, grid(Axis::new("omega1", -0.8, 0.8, GRID_POINTS)), [sq, vec![Output::OmegaAb]].concat()),
        "fig8" => spec(strong, grid(Axis::new("n_th", 0.0, 1e4, GRID_POINTS)), sq),
        "fig9" => spec(strong, grid(Axis::new("g", 0.01, 0.1, GRID_POINTS)), sq),
        "fig10" => spec(base, grid(Axis::new("omega1", -0.8, 0.8, GRID_POINTS)), vec![Output::OmegaAb]),
        _ => return Err(UnknownFigure(name.into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid_and_locked() {
        for f in FIGURES {
            let s = figure_preset(f).unwrap();
            s.validate().unwrap();
            assert!(s.resonance_lock);
            assert_eq!(s.base.gamma0, 0.25);
            assert_eq!(s.base.gamma_m, 1e-6);
        }
        assert!(figure_preset("fig11").is_err());
    }

    #[test]
    fn preset_contents() {
        assert_eq!(figure_preset("fig5").unwrap().outputs[0], Output::VarX);
        assert_eq!(figure_preset("fig6").unwrap().outputs, vec![Output::AMinus, Output::APlus]);
        let f8 = figure_preset("fig8").unwrap();
        assert_eq!(f8.axes[1].name, "n_th");
        assert_eq!(f8.base.omega1, -0.7);
        assert_eq!(figure_preset("fig7").unwrap().rows(), 81 * 81);
        let a = omega0_axis(81);
        assert!(a.min > 0.0 && a.max == 1.4);
    }
}
