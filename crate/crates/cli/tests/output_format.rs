use capbound_cli::csv_out::{num, parse_num, round_sig};
use capbound_cli::selftest::{run_checks, Check, Settings};
use capbound_cli::svg::{Plot, Series, Stroke};
use proptest::prelude::*;

proptest! {
    #[test]
    fn numbers_round_trip_at_twelve_digits(m in -1.0f64..1.0, e in -30i32..30) {
        let x = m * 10f64.powi(e);
        let s = num(x);
        let back = parse_num(&s).unwrap();
        prop_assert_eq!(back, round_sig(x));
        prop_assert_eq!(num(back), s);
        if x != 0.0 {
            prop_assert!(((back - x) / x).abs() <= 5e-12);
        }
    }

    #[test]
    fn rounding_is_idempotent(x in proptest::num::f64::NORMAL) {
        prop_assert_eq!(round_sig(round_sig(x)), round_sig(x));
    }
}

#[test]
fn number_forms() {
    assert_eq!(num(0.0), "0");
    assert_eq!(num(1.0), "1");
    assert_eq!(num(0.025), "0.025");
    assert_eq!(num(1.0 / 3.0), "0.333333333333");
    assert_eq!(num(6.677738202941e-5), "6.67773820294e-5");
    assert_eq!(num(f64::NAN), "");
    assert_eq!(parse_num(""), None);
}

#[test]
fn plots_split_at_missing_points() {
    let plot = Plot {
        title: "t <&>".into(),
        x_label: "x".into(),
        y_label: "y".into(),
        series: vec![Series {
            name: "s".into(),
            color: "black",
            stroke: Stroke::Dashed,
            points: vec![(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN), (3.0, 1.0), (4.0, 0.5)],
        }],
    };
    let svg = plot.render();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(svg.contains("t &lt;&amp;&gt;"));
    assert!(!svg.contains("NaN"));
    assert_eq!(svg, plot.render());
}

#[test]
fn flat_and_empty_series_render() {
    let flat = Plot {
        title: String::new(),
        x_label: String::new(),
        y_label: String::new(),
        series: vec![Series { name: "c".into(), color: "red", stroke: Stroke::Solid, points: vec![(0.0, 2.0), (1.0, 2.0)] }],
    };
    assert!(!flat.render().contains("NaN"));
    let empty = Plot { series: vec![], ..flat };
    assert!(empty.render().ends_with("</svg>\n"));
}

#[test]
fn failing_check_fails_the_table() {
    let checks = [
        Check { name: "fine", run: |_| Ok("ok".into()) },
        Check { name: "broken", run: |_| Err("off by one".into()) },
    ];
    let mut out = Vec::new();
    let ok = run_checks(&checks, &Settings { quick: true, seed: 1 }, &mut out).unwrap();
    assert!(!ok);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("broken") && text.contains("FAIL") && text.contains("off by one"));
    assert!(text.contains("1/2 passed"));
}
