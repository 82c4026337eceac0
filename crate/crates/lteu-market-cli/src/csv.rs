//! Deterministic CSV rendering of sweep results: fixed column set, 12
//! significant digits, LF line endings, rows already in (value, off/on)
//! order from the sweep itself.

use lteu_market::SweepResult;

pub const HEADER: &str =
    "parameter,value,lteu,p1,x1,p_ent,w_t,revenue_inc,revenue_ent,cs,sw,delivered_price";

/// 12 significant digits, scientific notation; failed rows carry NaN.
fn sig12(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub fn render(result: &SweepResult) -> String {
    let mut out = String::with_capacity(220 * (result.rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    let name = result.parameter.name();
    for row in &result.rows {
        let cols: [f64; 9] = match &row.point {
            Ok(pt) => [
                pt.outcome.incumbent_price,
                pt.outcome.incumbent_mass,
                pt.outcome.open_band_price,
                pt.outcome.open_band_mass,
                pt.outcome.incumbent_revenue,
                pt.outcome.entrant_revenue,
                pt.welfare.consumer_surplus,
                pt.welfare.social_welfare,
                pt.outcome.delivered_price,
            ],
            Err(_) => [f64::NAN; 9],
        };
        out.push_str(name);
        out.push(',');
        out.push_str(&sig12(row.value));
        out.push(',');
        out.push_str(if row.lteu { "on" } else { "off" });
        for c in cols {
            out.push(',');
            out.push_str(&sig12(c));
        }
        out.push('\n');
    }
    out
}
