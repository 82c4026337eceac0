//! Named curve presets. Each produces the sweep behind one figure of the
//! write-up; rendering is left to external plotting tools.

use lteu_market::{
    fixed_k_sweep, sweep, CongestionFn, DemandCurve, MarketConfig, MarketError, ParamAxis,
    SweepResult,
};

pub const NAMES: [&str; 9] = [
    "fig2", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6", "fig7", "fig8",
];

pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" => {
            "one-entrant incumbent revenue vs duty cycle; B = 1, share 0.2, unbounded open band"
        }
        "fig3a" => "fringe-market incumbent revenue vs duty cycle at utilization 0.2; B = 1, W = 1",
        "fig3b" => {
            "fringe-market incumbent revenue vs duty cycle at utilization 0.2; B = 1, W = 100"
        }
        "fig4" => "fringe market vs open-band width; B = 0.01, efficiency 5, duty 0.5, share 0.5",
        "fig5a" => {
            "one-entrant market vs open-band width; B = 5, duty 0.5, share 0.5 (revenue view)"
        }
        "fig5b" => {
            "one-entrant market vs open-band width; B = 5, duty 0.5, share 0.5 (welfare view)"
        }
        "fig6" => "one-entrant welfare vs duty cycle on an unbounded open band; B = 1",
        "fig7" => "fringe-market welfare vs duty cycle; B = 1, W = 1, share 0.5",
        "fig8" => "fringe-market welfare vs duty cycle at utilization 0.2; B = 1, W = 0.2",
        _ => return None,
    })
}

fn grid_linear(start: f64, stop: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect()
}

fn grid_log(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let (a, b) = (start.log10(), stop.log10());
    (0..points)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64))
        .collect()
}

/// Duty-cycle grid for the fixed-utilization presets: (k, 1) exclusive.
fn duty_grid_above(k_hundredths: u32) -> Vec<f64> {
    (k_hundredths + 1..=99).map(|i| i as f64 / 100.0).collect()
}

pub fn run(name: &str) -> Option<Result<SweepResult, MarketError>> {
    let g = CongestionFn::linear();
    let p = DemandCurve::linear();
    let result = match name {
        "fig2" => sweep(
            &MarketConfig::one_entrant_licensed(1.0, 1.0)
                .with_lteu(0.0, 0.2)
                .with_asymptotic_unlicensed(),
            ParamAxis::DutyCycle,
            &grid_linear(0.0, 0.9, 901),
            &g,
            &p,
        ),
        "fig3a" => fixed_k_sweep(
            &MarketConfig::multi_entrant(1.0, 1.0, 2),
            0.2,
            &duty_grid_above(20),
            &g,
            &p,
        ),
        "fig3b" => fixed_k_sweep(
            &MarketConfig::multi_entrant(1.0, 100.0, 2),
            0.2,
            &duty_grid_above(20),
            &g,
            &p,
        ),
        "fig4" => sweep(
            &MarketConfig::multi_entrant(0.01, 1.0, 2)
                .with_lteu(0.5, 0.5)
                .with_efficiency(5.0),
            ParamAxis::UnlicensedBw,
            &grid_log(1e-3, 1.0, 200),
            &g,
            &p,
        ),
        // The grid reaches past the revenue crossover near W = 43 so the
        // carrier-on curve is visibly above at the left edge and below at
        // the right edge.
        "fig5a" | "fig5b" => sweep(
            &MarketConfig::one_entrant_licensed(5.0, 1.0).with_lteu(0.5, 0.5),
            ParamAxis::UnlicensedBw,
            &grid_log(0.1, 100.0, 200),
            &g,
            &p,
        ),
        "fig6" => sweep(
            &MarketConfig::one_entrant_licensed(1.0, 1.0)
                .with_lteu(0.0, 0.5)
                .with_asymptotic_unlicensed(),
            ParamAxis::DutyCycle,
            &grid_linear(0.0, 0.95, 191),
            &g,
            &p,
        ),
        "fig7" => sweep(
            &MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.0, 0.5),
            ParamAxis::DutyCycle,
            &grid_linear(0.0, 1.0, 201),
            &g,
            &p,
        ),
        "fig8" => fixed_k_sweep(
            &MarketConfig::multi_entrant(1.0, 0.2, 2),
            0.2,
            &duty_grid_above(20),
            &g,
            &p,
        ),
        _ => return None,
    };
    Some(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_preset_runs() {
        for name in NAMES {
            assert!(describe(name).is_some(), "{name} lacks a description");
            let result = run(name)
                .expect("preset should exist")
                .expect("preset should solve");
            assert!(!result.rows.is_empty());
            let solved = result.rows.iter().filter(|r| r.point.is_ok()).count();
            assert_eq!(solved, result.rows.len(), "{name} has failing rows");
        }
        assert!(run("fig1").is_none());
    }

    #[test]
    fn fig5_views_share_data() {
        let a = run("fig5a").unwrap().unwrap();
        let b = run("fig5b").unwrap().unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.value, rb.value);
        }
    }
}
