//! Mapping search statistics onto overlay colour and size.

/// Red at -1, purple at 0, blue at +1, linear in between. NaN maps to purple.
pub fn value_to_color(mean_value: f64) -> [u8; 3] {
    let v = if mean_value.is_nan() {
        0.0
    } else {
        mean_value.clamp(-1.0, 1.0)
    };
    let lerp = |a: f64, b: f64, t: f64| libm::round(a + (b - a) * t) as u8;
    if v <= 0.0 {
        let t = v + 1.0;
        [lerp(255.0, 128.0, t), 0, lerp(0.0, 128.0, t)]
    } else {
        [lerp(128.0, 0.0, v), 0, lerp(128.0, 255.0, v)]
    }
}

/// `r_min + (r_max - r_min) * sqrt(visits / max_visits)`, in board-cell units.
pub fn visit_to_radius(visits: u32, max_visits: u32, r_min: f64, r_max: f64) -> f64 {
    let max = max_visits.max(1);
    let frac = visits.min(max) as f64 / max as f64;
    let s = libm::sqrt(frac);
    // Weighted form keeps both endpoints exact.
    r_min * (1.0 - s) + r_max * s
}
