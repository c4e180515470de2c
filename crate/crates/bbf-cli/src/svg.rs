//! Presentation-only SVG rendering of rank-2 chamber decompositions: the
//! positive-cone cross-section as a disk with one chord per wall.
//! Nothing here feeds back into any verification path, so floating point
//! is acceptable.

use bbf_core::cones::ChamberDecomposition;
use bbf_core::lattice::LatticeVector;
use num_traits::ToPrimitive;

fn angle_of(v: &LatticeVector) -> f64 {
    let x = v[0].to_f64().unwrap_or(0.0);
    let y = v[1].to_f64().unwrap_or(0.0);
    y.atan2(x)
}

pub fn chambers_svg(d: &ChamberDecomposition, reference: &LatticeVector) -> String {
    let (w, h, r) = (400.0, 400.0, 170.0);
    let (cx, cy) = (w / 2.0, h / 2.0);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    ));
    out.push_str(&format!(
        "  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"#f7f7f7\" stroke=\"#444\" \
         stroke-width=\"1.5\"/>\n"
    ));
    for ray in &d.wall_rays {
        let t = angle_of(ray);
        let (dx, dy) = (t.cos(), -t.sin());
        out.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#b3302e\" \
             stroke-width=\"1.5\"/>\n",
            cx - r * dx,
            cy - r * dy,
            cx + r * dx,
            cy + r * dy,
        ));
        out.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#b3302e\">{}</text>\n",
            cx + (r + 8.0) * dx,
            cy + (r + 8.0) * dy,
            ray.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
        ));
    }
    let t = angle_of(reference);
    let (dx, dy) = (t.cos(), -t.sin());
    out.push_str(&format!(
        "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#2456a4\"/>\n",
        cx + 0.75 * r * dx,
        cy + 0.75 * r * dy,
    ));
    out.push_str(&format!(
        "  <text x=\"12\" y=\"{:.2}\" font-size=\"12\" fill=\"#333\">{} chambers, {} walls</text>\n",
        h - 14.0,
        d.chambers.len(),
        d.wall_rays.len(),
    ));
    out.push_str("</svg>\n");
    out
}
