//! CSV and JSON emission helpers shared by the library interfaces and the
//! command line front end. Numbers are printed with 10 significant digits
//! and a '.' decimal separator, so identical inputs yield byte-identical
//! files.

use crate::density_neg::DensityResult;
use crate::mc::{McEstimate, McHistogram};
use crate::scale::ScaleFunctionGrid;

/// 10-significant-digit scientific form, locale independent.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000e0".to_string();
    }
    format!("{x:.9e}")
}

pub fn csv_rows(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_sig(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn scale_grid_csv(grid: &ScaleFunctionGrid) -> String {
    csv_rows(
        "x,w,z",
        (0..grid.w.len()).map(|k| vec![k as f64 * grid.step, grid.w[k], grid.z[k]]),
    )
}

pub fn density_csv(result: &DensityResult) -> String {
    csv_rows(
        "y,density",
        result
            .y
            .iter()
            .zip(&result.values)
            .map(|(&y, &v)| vec![y, v]),
    )
}

pub fn histogram_csv(hist: &McHistogram) -> String {
    csv_rows(
        "y_lo,y_hi,density,std_error",
        (0..hist.density.len()).map(|k| {
            vec![
                hist.edges[k],
                hist.edges[k + 1],
                hist.density[k],
                hist.std_error[k],
            ]
        }),
    )
}

pub fn estimate_json(est: &McEstimate) -> String {
    format!(
        "{{\n  \"estimate\": {},\n  \"std_error\": {},\n  \"paths\": {}\n}}\n",
        fmt_sig(est.value),
        fmt_sig(est.std_error),
        est.paths
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_format_is_stable() {
        assert_eq!(fmt_sig(1.0), "1.000000000e0");
        assert_eq!(fmt_sig(0.7320508075688773), "7.320508076e-1");
        assert_eq!(fmt_sig(-123456.789), "-1.234567890e5");
        assert_eq!(fmt_sig(0.0), "0.000000000e0");
    }

    #[test]
    fn csv_shape() {
        let text = csv_rows("a,b", vec![vec![1.0, 2.0], vec![3.0, 4.5]]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "a,b");
        assert!(lines[1].starts_with("1.000000000e0,"));
    }
}
