//! Reproducible uniform point samples from convex bodies.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Containment, ConvexBody, Point};

/// `(master_seed, stream_index)` keys a ChaCha8 stream; the generator's block
/// counter plays the role of the draw counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// SplitMix64 finaliser; a stable 64-bit mixer for deriving stream indices.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds several words into one stream index.
pub fn stream_of(words: &[u64]) -> u64 {
    words.iter().fold(0x6a09_e667_f3bc_c908, |h, &w| mix64(h ^ mix64(w)))
}

/// Stable identifier of a body from its vertex bit patterns.
pub fn body_id(body: &ConvexBody) -> String {
    let words: Vec<u64> = body
        .vertices()
        .iter()
        .flat_map(|p| [p.x.to_bits(), p.y.to_bits()])
        .collect();
    format!("body-{:016x}", stream_of(&words))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub seed: SeedSpec,
    pub n: usize,
    pub body_id: String,
    pub points: Vec<Point>,
}

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed sample file: {0}")]
    Malformed(String),
}

/// Fan triangulation from vertex 0 with cumulative areas.
struct Fan {
    apex: Point,
    tris: Vec<(Point, Point)>,
    cumulative: Vec<f64>,
}

impl Fan {
    fn new(body: &ConvexBody) -> Self {
        let v = body.vertices();
        let apex = v[0];
        let mut tris = Vec::with_capacity(v.len() - 2);
        let mut cumulative = Vec::with_capacity(v.len() - 2);
        let mut acc = 0.0;
        for i in 1..v.len() - 1 {
            let (b, c) = (v[i], v[i + 1]);
            acc += 0.5 * (b - apex).cross(c - apex);
            tris.push((b, c));
            cumulative.push(acc);
        }
        Fan {
            apex,
            tris,
            cumulative,
        }
    }

    fn pick(&self, u: f64) -> usize {
        let total = *self.cumulative.last().unwrap();
        let t = u * total;
        self.cumulative
            .partition_point(|&c| c <= t)
            .min(self.tris.len() - 1)
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Point {
        let k = self.pick(rng.gen::<f64>());
        let (b, c) = self.tris[k];
        let mut r1: f64 = rng.gen();
        let mut r2: f64 = rng.gen();
        if r1 + r2 > 1.0 {
            r1 = 1.0 - r1;
            r2 = 1.0 - r2;
        }
        self.apex + (b - self.apex) * r1 + (c - self.apex) * r2
    }
}

/// Triangle index chosen for each of `draws` uniforms; exposed for frequency tests.
pub fn triangle_choices(body: &ConvexBody, seed: SeedSpec, draws: usize) -> Vec<usize> {
    let fan = Fan::new(body);
    let mut rng = seed.rng();
    (0..draws).map(|_| fan.pick(rng.gen::<f64>())).collect()
}

/// `n` i.i.d. uniform points in `body`.
pub fn sample_uniform(body: &ConvexBody, n: usize, seed: SeedSpec) -> PointSample {
    let fan = Fan::new(body);
    let mut rng = seed.rng();
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = fan.draw(&mut rng);
        // Rounding can push a point a hair outside; redraw deterministically.
        if body.contains_point(p, Containment::Closed) {
            points.push(p);
        }
    }
    PointSample {
        seed,
        n,
        body_id: body_id(body),
        points,
    }
}

impl PointSample {
    /// A sample with explicit points (tests, adversarial inputs).
    pub fn from_points(points: Vec<Point>) -> Self {
        PointSample {
            seed: SeedSpec::new(0, 0),
            n: points.len(),
            body_id: String::from("explicit"),
            points,
        }
    }

    /// `# master_seed=..,stream_index=..,n=..,body_id=..` followed by `x,y` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), SampleError> {
        writeln!(
            w,
            "# master_seed={},stream_index={},n={},body_id={}",
            self.seed.master_seed, self.seed.stream_index, self.n, self.body_id
        )?;
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "y"])?;
        for p in &self.points {
            wr.write_record([p.x.to_string(), p.y.to_string()])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(mut r: R) -> Result<Self, SampleError> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let header = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| SampleError::Malformed("missing header comment".into()))?;
        let mut seed = SeedSpec::new(0, 0);
        let mut n = None;
        let mut body_id = String::new();
        for kv in header.trim().split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| SampleError::Malformed(kv.to_string()))?;
            let bad = |_| SampleError::Malformed(kv.to_string());
            match k.trim() {
                "master_seed" => seed.master_seed = v.parse().map_err(bad)?,
                "stream_index" => seed.stream_index = v.parse().map_err(bad)?,
                "n" => n = Some(v.parse::<usize>().map_err(bad)?),
                "body_id" => body_id = v.to_string(),
                _ => {}
            }
        }
        let mut rd = csv::Reader::from_reader(r);
        let mut points = Vec::new();
        for rec in rd.deserialize() {
            let (x, y): (f64, f64) = rec?;
            points.push(Point::new(x, y));
        }
        let n = n.ok_or_else(|| SampleError::Malformed("missing n".into()))?;
        if n != points.len() {
            return Err(SampleError::Malformed(format!(
                "header says n={n}, found {} rows",
                points.len()
            )));
        }
        Ok(PointSample {
            seed,
            n,
            body_id,
            points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        let sq = ConvexBody::unit_square();
        assert!(sample_uniform(&sq, 0, SeedSpec::new(1, 2)).points.is_empty());
        let a = sample_uniform(&sq, 500, SeedSpec::new(7, 3));
        let b = sample_uniform(&sq, 500, SeedSpec::new(7, 3));
        assert_eq!(a, b);
        let c = sample_uniform(&sq, 500, SeedSpec::new(7, 4));
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn csv_round_trip() {
        let s = sample_uniform(&ConvexBody::unit_square(), 50, SeedSpec::new(11, 1));
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let back = PointSample::read_csv(&buf[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_round_trip() {
        let s = sample_uniform(&ConvexBody::disk(16), 20, SeedSpec::new(5, 9));
        let back: PointSample = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn malformed_csv() {
        assert!(PointSample::read_csv(&b"x,y\n1,2\n"[..]).is_err());
        assert!(PointSample::read_csv(&b"# n=2\nx,y\n1,2\n"[..]).is_err());
    }
}
