//! Gnuplot column mappings for the sweep CSV.

/// `(figure, x column, y columns)` with 1-based CSV column numbers.
pub const FIGURES: [(&str, usize, &[usize]); 3] = [
    ("load-vs-L", 7, &[11, 15, 14]),
    ("load-vs-M", 3, &[11, 13, 14]),
    ("load-vs-deltaB", 6, &[11, 13, 14]),
];

const HEADER: [&str; 19] = [
    "K", "N", "M", "F", "B", "deltaB", "L", "mode", "trials", "seed", "measured_load", "closed_form_load",
    "lower_bound", "upper_bound", "uncoded_load", "mn_sync_load", "transmission_count", "measured_load_mean",
    "error",
];

/// One gnuplot `plot` line per figure, reading `csv_path`.
pub fn render(csv_path: &str) -> String {
    let mut out = String::from("set datafile separator ','\nset key autotitle columnhead\n");
    for (name, x, ys) in FIGURES {
        let series: Vec<String> = ys
            .iter()
            .map(|&y| format!("'{csv_path}' using {x}:{y} with linespoints title '{}'", HEADER[y - 1]))
            .collect();
        out.push_str(&format!("# {name}: x = {}\nplot {}\n", HEADER[x - 1], series.join(", \\\n     ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_name_the_csv_header() {
        assert_eq!(HEADER[6], "L");
        assert_eq!(HEADER[10], "measured_load");
        let text = render("sweep.csv");
        assert!(text.contains("# load-vs-M: x = M"));
        assert!(text.contains("'sweep.csv' using 6:11 with linespoints title 'measured_load'"));
    }
}
