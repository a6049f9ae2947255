//! sRGB (8 bit, D65) to CIELAB and back.

use crate::hypgeo::reduce_angle;

// linear sRGB -> XYZ, D65
const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];
const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
];
const WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];
const DELTA: f64 = 6.0 / 29.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

/// CIELAB in polar form: lightness, chroma (saturation) and hue angle in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lch {
    pub l: f64,
    pub c: f64,
    pub h: f64,
}

impl Lab {
    pub fn to_lch(self) -> Lch {
        let c = self.a.hypot(self.b);
        let h = if c == 0.0 { 0.0 } else { reduce_angle(self.b.atan2(self.a)) };
        Lch { l: self.l, c, h }
    }
}

impl Lch {
    pub fn to_lab(self) -> Lab {
        let (s, c) = self.h.sin_cos();
        Lab {
            l: self.l,
            a: self.c * c,
            b: self.c * s,
        }
    }
}

fn to_linear(v: u8) -> f64 {
    let v = f64::from(v) / 255.0;
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn from_linear(v: f64) -> u8 {
    let v = v.clamp(0.0, 1.0);
    let s = if v <= 0.0031308 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    };
    (s * 255.0).round().clamp(0.0, 255.0) as u8
}

fn f(t: f64) -> f64 {
    if t > DELTA.powi(3) {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

fn f_inv(t: f64) -> f64 {
    if t > DELTA {
        t.powi(3)
    } else {
        3.0 * DELTA * DELTA * (t - 4.0 / 29.0)
    }
}

fn mul(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2])
}

/// Gray pixels (`r = g = b`) map to `a = b = 0` exactly.
pub fn srgb_to_cielab(rgb: [u8; 3]) -> Lab {
    let xyz = mul(&RGB_TO_XYZ, rgb.map(to_linear));
    let [fx, fy, fz] = [0, 1, 2].map(|i| f(xyz[i] / WHITE[i]));
    let l = 116.0 * fy - 16.0;
    if rgb[0] == rgb[1] && rgb[1] == rgb[2] {
        return Lab { l, a: 0.0, b: 0.0 };
    }
    Lab {
        l,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

/// Out-of-gamut results are clamped per channel.
pub fn cielab_to_srgb(lab: Lab) -> [u8; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let xyz = [f_inv(fx) * WHITE[0], f_inv(fy) * WHITE[1], f_inv(fz) * WHITE[2]];
    mul(&XYZ_TO_RGB, xyz).map(from_linear)
}
