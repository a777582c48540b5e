//! gnuplot scripts for the CSV outputs. Run them next to the CSV files.

use multipole::analysis::ConvergenceReport;

pub fn sweep_script(name: &str, report: &ConvergenceReport) -> String {
    let mut curves = vec![
        format!("'{name}.csv' using 1:2 with linespoints pt 7 title 'E(N)'"),
        "'' using 1:3 with lines dt 2 title 'γ1(N)'".to_string(),
        "'' using 1:4 with lines dt 3 title 'γ2(N)'".to_string(),
    ];
    if report.e1_surrogate.is_some() {
        curves.push("'' using 1:5 with linespoints pt 4 title 'E1 (surrogate)'".to_string());
    }
    format!(
        "set terminal pngcairo size 800,600\n\
         set output '{name}.png'\n\
         set datafile separator ','\n\
         set key autotitle columnhead top right\n\
         set logscale y\n\
         set format y '10^{{%L}}'\n\
         set xlabel 'N'\n\
         set title '{} k = {} ({:?} norm)'\n\
         plot {}\n",
        report.scene_id,
        report.wavenumber,
        report.norm,
        curves.join(", \\\n     ")
    )
}

pub fn field_script(name: &str) -> String {
    format!(
        "set terminal pngcairo size 900,800\n\
         set output '{name}.png'\n\
         set datafile separator ','\n\
         set datafile missing 'nan'\n\
         set view map\n\
         set size ratio -1\n\
         set xlabel 'x'\n\
         set ylabel 'y'\n\
         set cblabel '|u|'\n\
         plot '{name}.csv' skip 1 using 1:2:5 with image notitle\n"
    )
}
