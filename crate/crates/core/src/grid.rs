use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle [xmin, xmax] × [ymin, ymax].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Box2 {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Box2 {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let ok = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) && xmin < xmax && ymin < ymax;
        if !ok {
            return Err(Error::Precondition(format!(
                "box must be finite and nonempty (got [{xmin},{xmax}]x[{ymin},{ymax}])"
            )));
        }
        Ok(Box2 { xmin, xmax, ymin, ymax })
    }

    /// [−h, h]²
    pub fn square(half_width: f64) -> Self {
        Box2::new(-half_width, half_width, -half_width, half_width).expect("positive half width")
    }

    /// Default window for a Cassini-type family with parameter a: [−(2+2a), 2+2a]².
    pub fn for_family(a: f64) -> Self {
        Self::square(2.0 + 2.0 * a)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }

    /// Node `i` of `n` equal divisions along x (i = 0..=n).
    pub fn x_at(&self, i: usize, n: usize) -> f64 {
        if i == n {
            return self.xmax;
        }
        self.xmin + self.width() * i as f64 / n as f64
    }

    pub fn y_at(&self, j: usize, n: usize) -> f64 {
        if j == n {
            return self.ymax;
        }
        self.ymin + self.height() * j as f64 / n as f64
    }

    /// Number of divisions giving a spacing of at most `spacing`.
    pub fn divisions_for_spacing(&self, spacing: f64) -> (usize, usize) {
        let nx = (self.width() / spacing - 1e-9).ceil().max(1.0) as usize;
        let ny = (self.height() / spacing - 1e-9).ceil().max(1.0) as usize;
        (nx, ny)
    }
}

impl fmt::Display for Box2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.xmin, self.xmax, self.ymin, self.ymax)
    }
}

/// Parses `xmin,xmax,ymin,ymax`.
impl FromStr for Box2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse { pos: 0, msg: "box must be xmin,xmax,ymin,ymax".into() });
        }
        let mut v = [0.0; 4];
        let mut pos = 0;
        for (k, p) in parts.iter().enumerate() {
            v[k] = p.parse().map_err(|_| Error::Parse { pos, msg: format!("invalid number '{p}'") })?;
            pos += p.len() + 1;
        }
        Box2::new(v[0], v[1], v[2], v[3])
    }
}
