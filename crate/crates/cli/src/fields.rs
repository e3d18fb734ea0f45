//! Named test fields for the command line.

use std::f64::consts::PI;

use sobext::funcspace::AnalyticField;
use sobext::{Error, Point, Result};

fn config<T>(msg: String) -> Result<T> {
    Err(Error::Config(msg))
}

/// `sin(ax)` differentiated `j` times.
fn dsin(a: f64, x: f64, j: usize) -> f64 {
    let v = match j % 4 {
        0 => (a * x).sin(),
        1 => (a * x).cos(),
        2 => -(a * x).sin(),
        _ => -(a * x).cos(),
    };
    v * a.powi(j as i32)
}

/// Parses `name[:param]`. Known names: `const:c`, `linear`, `quad`,
/// `sinsin`, `expcos`, `bump`, `cusp-power:b`.
pub fn parse_field(spec: &str) -> Result<AnalyticField<2>> {
    let (name, arg) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    let param = |what: &str| -> Result<f64> {
        match arg.map(str::parse::<f64>) {
            Some(Ok(v)) => Ok(v),
            _ => config(format!("field '{what}' needs a numeric parameter")),
        }
    };
    Ok(match name {
        "const" => AnalyticField::constant(param("const")?),
        "linear" => AnalyticField::new("linear", |x: &Point<2>| 2.0 * x[0] + 3.0 * x[1] - 1.0).with_jet(|x, a| {
            Some(match (a[0], a[1]) {
                (0, 0) => 2.0 * x[0] + 3.0 * x[1] - 1.0,
                (1, 0) => 2.0,
                (0, 1) => 3.0,
                _ => 0.0,
            })
        }),
        "quad" => AnalyticField::new("quad", |x: &Point<2>| x[0] * x[0] - 0.5 * x[1] + x[0] * x[1]).with_jet(|x, a| {
            Some(match (a[0], a[1]) {
                (0, 0) => x[0] * x[0] - 0.5 * x[1] + x[0] * x[1],
                (1, 0) => 2.0 * x[0] + x[1],
                (0, 1) => x[0] - 0.5,
                (2, 0) => 2.0,
                (1, 1) => 1.0,
                _ => 0.0,
            })
        }),
        "sinsin" => AnalyticField::new("sinsin", |x: &Point<2>| (PI * x[0]).sin() * (PI * x[1]).sin())
            .with_jet(|x, a| Some(dsin(PI, x[0], a[0]) * dsin(PI, x[1], a[1]))),
        "expcos" => AnalyticField::new("expcos", |x: &Point<2>| x[0].exp() * x[1].cos())
            .with_jet(|x, a| Some(x[0].exp() * dsin(1.0, x[1] + 0.5 * PI, a[1]))),
        "bump" => AnalyticField::new("bump", |x: &Point<2>| {
            let r2 = ((x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2)) / 0.04;
            if r2 < 1.0 {
                (1.0 - 1.0 / (1.0 - r2)).exp()
            } else {
                0.0
            }
        }),
        "cusp-power" => {
            let b = param("cusp-power")?;
            AnalyticField::new(format!("x1^-{b}"), move |x: &Point<2>| x[0].powf(-b)).with_jet(move |x, a| {
                Some(match (a[0], a[1]) {
                    (0, 0) => x[0].powf(-b),
                    (1, 0) => -b * x[0].powf(-b - 1.0),
                    (_, j) if j > 0 => 0.0,
                    _ => return None,
                })
            })
        }
        _ => return config(format!("unknown field '{spec}'")),
    })
}
